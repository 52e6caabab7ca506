//! The decoding criteria on `F_2^2` against the five weight families.

use std::fmt;

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::families::{classify_criterion, Family, FamilyFlags};
use crate::oracles::{enumerate_criteria, representative_weight};

/// The published table, row by row.
pub const PUBLISHED: [(&str, [bool; 5]); 4] = [
    ("wt(10)=wt(01)<wt(11)", [true, true, true, true, true]),
    ("wt(10)=wt(01)=wt(11)", [false, false, true, true, true]),
    ("wt(10)<wt(01)=wt(11)", [false, true, true, false, true]),
    ("wt(10)<wt(01)<wt(11)", [false, false, false, false, false]),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub criterion: String,
    pub flags: FamilyFlags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
}

/// Classifies every criterion on `F_2^2` up to coordinate relabeling.
///
/// Rows follow the published order; criteria it does not list go last.
pub fn compute_table1(caps: &Caps) -> Result<Table1> {
    let catalog = enumerate_criteria(2, 2, true)?;
    let mut rows = Vec::with_capacity(catalog.len());
    for c in &catalog.classes {
        let wt = representative_weight(&c.ordering, 2, caps)?;
        rows.push(Table1Row { criterion: c.describe(2), flags: classify_criterion(&wt, caps)? });
    }
    let rank = |r: &Table1Row| PUBLISHED.iter().position(|(s, _)| *s == r.criterion).unwrap_or(usize::MAX);
    rows.sort_by_key(rank);
    Ok(Table1 { rows })
}

impl Table1 {
    pub fn matches_published(&self) -> bool {
        self.rows.len() == PUBLISHED.len()
            && self.rows.iter().zip(PUBLISHED).all(|(r, (s, f))| r.criterion == s && r.flags.as_array() == f)
    }

    /// The first row that differs from the published table, as a message.
    pub fn mismatch(&self) -> Option<Error> {
        if self.rows.len() != PUBLISHED.len() {
            return Some(Error::Internal(format!("{} criteria, expected {}", self.rows.len(), PUBLISHED.len())));
        }
        self.rows.iter().zip(PUBLISHED).find(|(r, (s, f))| r.criterion != *s || r.flags.as_array() != *f).map(|(r, (s, _))| {
            Error::Internal(format!("row {} differs from {s}", r.criterion))
        })
    }
}

impl fmt::Display for Table1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.iter().map(|r| r.criterion.chars().count()).max().unwrap_or(9).max(9);
        write!(f, "{:<width$}", "Criterion")?;
        for fam in Family::ALL {
            write!(f, " | {:^5}", fam.symbol())?;
        }
        writeln!(f)?;
        writeln!(f, "{}", "-".repeat(width + 8 * Family::ALL.len()))?;
        for r in &self.rows {
            write!(f, "{:<width$}", r.criterion)?;
            for b in r.flags.as_array() {
                write!(f, " | {:^5}", if b { "✓" } else { "" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_published_table() {
        let t = compute_table1(&Caps::default()).unwrap();
        assert!(t.matches_published(), "{t}");
        assert!(t.mismatch().is_none());
        assert_eq!(t.rows[3].flags.as_array(), [false; 5]);
        assert!(t.to_string().contains("wt(10)<wt(01)<wt(11)"));
    }
}
