//! JSON wire formats shared by the library and the command line.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::{FqMatrix, FqVector, Space};
use crate::sweight::SWeightTable;

/// `{"q": 2, "n": 3, "entries": [[1,0,1],[0,1,1]]}`; rows of length `n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub q: u32,
    pub n: usize,
    pub entries: Vec<Vec<u32>>,
}

impl From<&FqMatrix> for MatrixJson {
    fn from(m: &FqMatrix) -> Self {
        MatrixJson {
            q: m.q(),
            n: m.cols(),
            entries: (0..m.rows()).map(|r| m.row(r).entries().to_vec()).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for FqMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<FqMatrix> {
        FqMatrix::from_rows(j.q, j.n, &j.entries)
    }
}

/// `{"q":2,"n":2,"weights":{"00":0,"10":1,"01":1,"11":2}}`; one key per vector,
/// coordinate 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightJson {
    pub q: u32,
    pub n: usize,
    pub weights: BTreeMap<String, u64>,
}

impl From<&SWeightTable> for WeightJson {
    fn from(t: &SWeightTable) -> Self {
        let space = t.space();
        WeightJson {
            q: t.q(),
            n: t.n(),
            weights: (0..space.size()).map(|x| (space.vector(x).digit_string(), t.value(x))).collect(),
        }
    }
}

impl WeightJson {
    pub fn into_table(self, caps: &Caps) -> Result<SWeightTable> {
        let space = Space::new(self.n, self.q, caps)?;
        let mut values: Vec<Option<u64>> = vec![None; space.size()];
        for (key, w) in &self.weights {
            let v = FqVector::parse(self.q, key)?;
            if v.len() != self.n {
                return Err(Error::Parse(format!("vector {key} does not have length {}", self.n)));
            }
            values[space.index_of(&v)?] = Some(*w);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(x, w)| w.ok_or_else(|| Error::Parse(format!("no weight for {}", space.vector(x)))))
            .collect::<Result<Vec<u64>>>()?;
        SWeightTable::new(space, values)
    }
}

impl Serialize for SWeightTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SWeightTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        WeightJson::deserialize(d)?.into_table(&Caps::default()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_json_round_trip() {
        let text = r#"{"q":2,"n":2,"weights":{"00":0,"01":1,"10":1,"11":2}}"#;
        let t: SWeightTable = serde_json::from_str(text).unwrap();
        assert_eq!(t.support_values().unwrap(), vec![0, 1, 1, 2]);
        let back: SWeightTable = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        let missing = r#"{"q":2,"n":2,"weights":{"00":0,"01":1,"10":1}}"#;
        assert!(serde_json::from_str::<SWeightTable>(missing).is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let j = MatrixJson { q: 3, n: 2, entries: vec![vec![1, 2]] };
        let m = FqMatrix::try_from(j).unwrap();
        assert_eq!(MatrixJson::from(&m).entries, vec![vec![1, 2]]);
    }
}
