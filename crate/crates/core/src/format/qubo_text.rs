//! Text format with a `p qubo 0 <maxNodes> <nDiagonals> <nElements>` header
//! and `<i> <j> <value>` entry lines (0-based, `i <= j`). Lines starting with
//! `c` are comments.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::QuboProblem;

#[derive(Clone, Debug, PartialEq)]
pub struct QuboFileDocument {
    pub max_nodes: usize,
    pub n_diagonals: usize,
    pub n_elements: usize,
    /// 0-based `(i, j, value)` with `i <= j`, in file order.
    pub entries: Vec<(usize, usize, f64)>,
    pub warnings: Vec<String>,
}

impl QuboFileDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0] == "p" {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if fields.len() != 6 || fields[1] != "qubo" {
                    return Err(err(format!(
                        "malformed header {line:?}; expected 'p qubo 0 <maxNodes> <nDiagonals> <nElements>'"
                    )));
                }
                let count = |s: &str, what: &str| {
                    s.parse::<usize>()
                        .map_err(|_| err(format!("{what} {s:?} is not a non-negative integer")))
                };
                count(fields[2], "topology")?;
                header = Some((
                    count(fields[3], "maxNodes")?,
                    count(fields[4], "nDiagonals")?,
                    count(fields[5], "nElements")?,
                ));
                continue;
            }
            let Some((max_nodes, _, _)) = header else {
                return Err(err("entry before 'p qubo' header".into()));
            };
            if fields.len() != 3 {
                return Err(err(format!("expected '<i> <j> <value>', got {line:?}")));
            }
            let index = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("index {s:?} is not a non-negative integer")))
            };
            let (i, j) = (index(fields[0])?, index(fields[1])?);
            if i > j {
                return Err(err(format!("entry ({i}, {j}) has i > j")));
            }
            if j >= max_nodes {
                return Err(err(format!("index {j} >= maxNodes {max_nodes}")));
            }
            let value: f64 = fields[2]
                .parse()
                .map_err(|_| err(format!("value {:?} is not a number", fields[2])))?;
            if !value.is_finite() {
                return Err(err(format!("value {:?} is not finite", fields[2])));
            }
            entries.push((i, j, value));
        }
        let Some((max_nodes, n_diagonals, n_elements)) = header else {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                message: "missing 'p qubo' header".into(),
            });
        };
        let mut doc = Self {
            max_nodes,
            n_diagonals,
            n_elements,
            entries,
            warnings: Vec::new(),
        };
        doc.check_counts();
        Ok(doc)
    }

    fn check_counts(&mut self) {
        let mut seen = std::collections::HashSet::new();
        for &(i, j, _) in &self.entries {
            if !seen.insert((i, j)) {
                self.warnings
                    .push(format!("duplicate entry ({i}, {j}); the last value wins"));
            }
        }
        let diag = self.entries.iter().filter(|e| e.0 == e.1).count();
        let off = self.entries.len() - diag;
        if diag != self.n_diagonals || off != self.n_elements {
            self.warnings.push(format!(
                "header declares {} diagonal and {} off-diagonal entries, found {diag} and {off}",
                self.n_diagonals, self.n_elements
            ));
        }
        for w in &self.warnings {
            log::warn!("{w}");
        }
    }

    pub fn to_problem(&self) -> Result<QuboProblem> {
        let mut p = QuboProblem::new(self.max_nodes)?;
        for &(i, j, v) in &self.entries {
            p.set(i, j, v)?;
        }
        Ok(p)
    }

    pub fn from_problem(p: &QuboProblem) -> Self {
        let mut diagonal: Vec<_> = p.upper_entries().filter(|e| e.0 == e.1).collect();
        let off: Vec<_> = p.upper_entries().filter(|e| e.0 != e.1).collect();
        let (n_diagonals, n_elements) = (diagonal.len(), off.len());
        diagonal.extend(off);
        Self {
            max_nodes: p.n(),
            n_diagonals,
            n_elements,
            entries: diagonal,
            warnings: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "p qubo 0 {} {} {}\n",
            self.max_nodes, self.n_diagonals, self.n_elements
        );
        for &(i, j, v) in &self.entries {
            writeln!(out, "{i} {j} {v:.16e}").expect("writing to a String");
        }
        out
    }
}

pub fn parse_qubo_text(text: &str) -> Result<QuboProblem> {
    QuboFileDocument::parse(text)?.to_problem()
}

/// Header, then non-zero diagonal entries ascending, then non-zero
/// off-diagonal entries in `(i, j)` order, 17 significant digits.
pub fn write_qubo_text(p: &QuboProblem) -> String {
    QuboFileDocument::from_problem(p).to_text()
}
