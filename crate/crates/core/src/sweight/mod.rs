//! Support-respecting weights: tables, decoding orderings and metric rescaling.

mod cube;
mod isometry;

pub use cube::{
    cube_from_sweight, is_combinatorial_shaped, random_trail_check, seeded_trail_check, is_standard_form, standardize, validate_cube, weight_from_cube,
    CubeReport, CubeViolation, DeltaCube, TrailMismatch,
};
pub use isometry::{
    check_semidirect_theorem, cube_automorphism_isometry, enumerate_gl_bruteforce, permutation_map,
    respects_domination, DominationTable, SemidirectReport, SemidirectVerdict,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FqVector, Space};

/// A total map from `F_q^n` to the non-negative integers.
///
/// Nothing about the S-weight axioms is enforced here; see [`validate_sweight`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SWeightTable {
    space: Space,
    values: Vec<u64>,
}

impl SWeightTable {
    pub fn new(space: Space, values: Vec<u64>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::Dimension(format!(
                "weight table has {} values for {} vectors",
                values.len(),
                space.size()
            )));
        }
        Ok(SWeightTable { space, values })
    }

    pub fn from_fn(space: Space, f: impl Fn(usize) -> u64) -> Self {
        let values = (0..space.size()).map(f).collect();
        SWeightTable { space, values }
    }

    /// Table whose value depends only on the support bitmask.
    pub fn from_support_fn(space: Space, f: impl Fn(u32) -> u64) -> Self {
        let by_support: Vec<u64> = (0..1u32 << space.n()).map(f).collect();
        let values = (0..space.size()).map(|x| by_support[space.support(x) as usize]).collect();
        SWeightTable { space, values }
    }

    /// Expands per-support values (indexed by bitmask) to the whole space.
    pub fn from_support_values(space: Space, by_support: &[u64]) -> Result<Self> {
        if by_support.len() != 1 << space.n() {
            return Err(Error::Dimension(format!("{} support values for n = {}", by_support.len(), space.n())));
        }
        Ok(SWeightTable::from_support_fn(space, |s| by_support[s as usize]))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    /// Values indexed by dense vector index.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, x: usize) -> u64 {
        self.values[x]
    }

    pub fn weight(&self, v: &FqVector) -> Result<u64> {
        Ok(self.values[self.space.index_of(v)?])
    }

    pub fn max(&self) -> u64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn value_set(&self) -> BTreeSet<u64> {
        self.values.iter().copied().collect()
    }

    pub fn is_support_determined(&self) -> bool {
        self.support_values().is_some()
    }

    /// The value on each support bitmask, if the table is a function of supports.
    pub fn support_values(&self) -> Option<Vec<u64>> {
        let mut by_support: Vec<Option<u64>> = vec![None; 1 << self.n()];
        for (x, &w) in self.values.iter().enumerate() {
            let s = self.space.support(x) as usize;
            match by_support[s] {
                None => by_support[s] = Some(w),
                Some(prev) if prev != w => return None,
                Some(_) => {}
            }
        }
        by_support.into_iter().collect()
    }

    pub fn ordering(&self) -> WeightOrdering {
        WeightOrdering::from_values(&self.values)
    }

    /// Pointwise `f(self, other)`.
    pub fn zip_with(&self, other: &SWeightTable, f: impl Fn(usize, u64, u64) -> u64) -> Result<SWeightTable> {
        if self.space != other.space {
            return Err(Error::Dimension("weights live on different spaces".into()));
        }
        let values = (0..self.space.size()).map(|x| f(x, self.values[x], other.values[x])).collect();
        Ok(SWeightTable { space: self.space.clone(), values })
    }
}

/// The decoding criterion of a weight: its values replaced by dense ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightOrdering {
    ranks: Vec<u32>,
}

impl WeightOrdering {
    pub fn from_values(values: &[u64]) -> Self {
        let distinct: Vec<u64> = values.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let ranks = values
            .iter()
            .map(|v| distinct.binary_search(v).expect("value present") as u32)
            .collect();
        WeightOrdering { ranks }
    }

    pub fn from_ranks(ranks: Vec<u32>) -> Self {
        let values: Vec<u64> = ranks.iter().map(|&r| r as u64).collect();
        Self::from_values(&values)
    }

    /// Dense rank of each domain element (vector index or support mask).
    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn level_count(&self) -> usize {
        self.ranks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Domain elements grouped by rank, ascending.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut levels = vec![Vec::new(); self.level_count()];
        for (x, &r) in self.ranks.iter().enumerate() {
            levels[r as usize].push(x);
        }
        levels
    }
}

/// What went wrong with a candidate S-weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightViolation {
    /// `wt(u) = 0` for nonzero `u`, or `wt(0) != 0`.
    Positivity { u: String, value: u64 },
    /// `supp(u) ⊆ supp(v)` but `wt(u) > wt(v)`.
    Monotonicity { u: String, v: String, wt_u: u64, wt_v: u64 },
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightViolation::Positivity { u, value } => write!(f, "positivity fails at {u} (weight {value})"),
            WeightViolation::Monotonicity { u, v, wt_u, wt_v } => {
                write!(f, "supp({u}) ⊆ supp({v}) but wt({u}) = {wt_u} > wt({v}) = {wt_v}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightReport {
    pub valid: bool,
    pub violation: Option<WeightViolation>,
}

/// Checks both S-weight axioms; reports the first failure in lexicographic
/// vector order.
pub fn validate_sweight(table: &SWeightTable) -> WeightReport {
    let space = table.space();
    let order: Vec<usize> = space.lex_indices().collect();
    let bad = |violation| WeightReport { valid: false, violation: Some(violation) };

    for &x in &order {
        let w = table.value(x);
        if (x == 0) != (w == 0) {
            return bad(WeightViolation::Positivity { u: space.vector(x).to_string(), value: w });
        }
    }

    let n = space.n();
    // min over all vectors whose support contains S
    let mut min_above = vec![u64::MAX; 1 << n];
    for x in 0..space.size() {
        let s = space.support(x) as usize;
        min_above[s] = min_above[s].min(table.value(x));
    }
    for bit in 0..n {
        for s in 0..1usize << n {
            if s & (1 << bit) == 0 {
                min_above[s] = min_above[s].min(min_above[s | 1 << bit]);
            }
        }
    }
    for &u in &order {
        let su = space.support(u);
        let wu = table.value(u);
        if wu <= min_above[su as usize] {
            continue;
        }
        let v = order
            .iter()
            .copied()
            .find(|&v| space.support(v) & su == su && table.value(v) < wu)
            .expect("witness exists");
        return bad(WeightViolation::Monotonicity {
            u: space.vector(u).to_string(),
            v: space.vector(v).to_string(),
            wt_u: wu,
            wt_v: table.value(v),
        });
    }
    WeightReport { valid: true, violation: None }
}

/// `wt1 ~ wt2`: identical decoding orderings.
pub fn are_equivalent(wt1: &SWeightTable, wt2: &SWeightTable) -> Result<bool> {
    if wt1.space() != wt2.space() {
        return Err(Error::Dimension("weights live on different spaces".into()));
    }
    Ok(wt1.ordering() == wt2.ordering())
}

/// The distance `d'(u, v) = wt(u − v) + max d` for `u ≠ v`, zero on the diagonal.
#[derive(Debug, Clone)]
pub struct RescaledMetric {
    table: SWeightTable,
    shift: u64,
}

impl RescaledMetric {
    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn distance_index(&self, u: usize, v: usize) -> u64 {
        if u == v {
            0
        } else {
            self.table.value(self.table.space().sub(u, v)) + self.shift
        }
    }

    pub fn distance(&self, u: &FqVector, v: &FqVector) -> Result<u64> {
        let s = self.table.space();
        Ok(self.distance_index(s.index_of(u)?, s.index_of(v)?))
    }

    pub fn space(&self) -> &Space {
        self.table.space()
    }
}

pub fn rescale_to_metric(wt: &SWeightTable) -> Result<RescaledMetric> {
    let report = validate_sweight(wt);
    if let Some(v) = report.violation {
        return Err(Error::InvalidWeight(v.to_string()));
    }
    // max over x, y of wt(x − y) is the max of the table.
    Ok(RescaledMetric { table: wt.clone(), shift: wt.max() })
}

/// First failing metric axiom, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    Identity { u: usize, v: usize },
    Symmetry { u: usize, v: usize },
    Triangle { u: usize, v: usize, w: usize },
}

/// Exhaustive check of identity, symmetry and the triangle inequality.
pub fn check_metric_axioms(size: usize, d: impl Fn(usize, usize) -> u64) -> Option<MetricViolation> {
    let mut table = vec![0u64; size * size];
    for u in 0..size {
        for v in 0..size {
            table[u * size + v] = d(u, v);
        }
    }
    for u in 0..size {
        for v in 0..size {
            let duv = table[u * size + v];
            if (duv == 0) != (u == v) {
                return Some(MetricViolation::Identity { u, v });
            }
            if duv != table[v * size + u] {
                return Some(MetricViolation::Symmetry { u, v });
            }
        }
    }
    for u in 0..size {
        for v in 0..size {
            let duv = table[u * size + v];
            for w in 0..size {
                if table[u * size + w] > duv + table[v * size + w] {
                    return Some(MetricViolation::Triangle { u, v, w });
                }
            }
        }
    }
    None
}
