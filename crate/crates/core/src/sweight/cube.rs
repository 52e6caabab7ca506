use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{validate_sweight, SWeightTable};
use crate::error::{Error, Result};
use crate::gf::{FqVector, Space};

/// Largest cube dimension we are willing to allocate.
pub const MAX_CUBE_N: usize = 20;

/// The directed Hamming cube on supports with a non-negative weight on every
/// arc `(u, u + e_i)`, `u_i = 0`.
///
/// Vertices are bitmasks (bit `i` = coordinate `i`). Validity is computed once
/// at construction and stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaCube {
    n: usize,
    // delta[u * n + i], meaningful only when bit i of u is clear.
    delta: Vec<u64>,
    report: CubeReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CubeViolation {
    /// `δ(0, e_i) = 0`.
    ZeroBaseArc { i: usize },
    /// The two trails across the face at `u` spanned by `e_i`, `e_j` disagree.
    UnbalancedFace { u: u32, i: usize, j: usize, via_i: u64, via_j: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CubeReport {
    pub valid: bool,
    pub violation: Option<CubeViolation>,
}

impl DeltaCube {
    /// Builds a cube from `(tail, coordinate, δ)` triples; unspecified arcs get 0.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (u32, usize, u64)>) -> Result<Self> {
        if n > MAX_CUBE_N {
            return Err(Error::CapExceeded { what: "cube dimension", size: n as u128, cap: MAX_CUBE_N as u128 });
        }
        let mut delta = vec![0u64; (1usize << n) * n.max(1)];
        for (u, i, d) in arcs {
            if i >= n || (u as usize) >= 1 << n || u & (1 << i) != 0 {
                return Err(Error::InvalidCube(format!("({u:b}, e_{}) is not an arc of H^{n}", i + 1)));
            }
            delta[u as usize * n + i] = d;
        }
        Ok(Self::with_delta(n, delta))
    }

    /// Cube whose arc values are differences of the given per-support weights.
    /// Panics if some difference is negative.
    pub(crate) fn from_support_weights(n: usize, w: &[u64]) -> Self {
        let mut delta = vec![0u64; (1usize << n) * n.max(1)];
        for u in 0..1usize << n {
            for i in 0..n {
                if u & (1 << i) == 0 {
                    delta[u * n + i] = w[u | 1 << i] - w[u];
                }
            }
        }
        Self::with_delta(n, delta)
    }

    fn with_delta(n: usize, delta: Vec<u64>) -> Self {
        let mut cube = DeltaCube { n, delta, report: CubeReport { valid: false, violation: None } };
        cube.report = cube.compute_report();
        cube
    }

    fn compute_report(&self) -> CubeReport {
        let bad = |violation| CubeReport { valid: false, violation: Some(violation) };
        for i in 0..self.n {
            if self.delta(0, i) == 0 {
                return bad(CubeViolation::ZeroBaseArc { i });
            }
        }
        for u in 0..1u32 << self.n {
            for i in 0..self.n {
                for j in i + 1..self.n {
                    if u & (1 << i | 1 << j) != 0 {
                        continue;
                    }
                    let via_i = self.delta(u, i) + self.delta(u | 1 << i, j);
                    let via_j = self.delta(u, j) + self.delta(u | 1 << j, i);
                    if via_i != via_j {
                        return bad(CubeViolation::UnbalancedFace { u, i, j, via_i, via_j });
                    }
                }
            }
        }
        CubeReport { valid: true, violation: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `δ(u, u + e_i)`.
    #[inline]
    pub fn delta(&self, u: u32, i: usize) -> u64 {
        debug_assert!(u & (1 << i) == 0);
        self.delta[u as usize * self.n + i]
    }

    /// All arcs as `(tail, coordinate, δ)`, tails ascending.
    pub fn arcs(&self) -> impl Iterator<Item = (u32, usize, u64)> + '_ {
        (0..1u32 << self.n).flat_map(move |u| {
            (0..self.n).filter(move |&i| u & (1 << i) == 0).map(move |i| (u, i, self.delta(u, i)))
        })
    }

    pub fn is_valid(&self) -> bool {
        self.report.valid
    }

    pub fn report(&self) -> &CubeReport {
        &self.report
    }

    /// `δ(τ)` for the trail from 0 adding coordinates in `order`.
    pub fn trail_sum(&self, order: &[usize]) -> u64 {
        let mut u = 0u32;
        let mut total = 0;
        for &i in order {
            total += self.delta(u, i);
            u |= 1 << i;
        }
        total
    }

    fn require_valid(&self) -> Result<()> {
        match &self.report.violation {
            None => Ok(()),
            Some(v) => Err(Error::InvalidCube(format!("{v:?}"))),
        }
    }

    /// Trail sum from 0 to the support `mask`, adding coordinates in increasing order.
    pub fn weight_of_support(&self, mask: u32) -> Result<u64> {
        self.require_valid()?;
        let order: Vec<usize> = (0..self.n).filter(|&i| mask & (1 << i) != 0).collect();
        Ok(self.trail_sum(&order))
    }

    /// The weight of every support, indexed by bitmask.
    pub fn support_weights(&self) -> Result<Vec<u64>> {
        self.require_valid()?;
        let mut w = vec![0u64; 1 << self.n];
        for s in 1..1usize << self.n {
            let i = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            w[s] = w[rest] + self.delta(rest as u32, i);
        }
        Ok(w)
    }

    /// The weight on `F_q^n` induced by this cube.
    pub fn weight_table(&self, space: &Space) -> Result<SWeightTable> {
        if space.n() != self.n {
            return Err(Error::Dimension(format!("cube of dimension {} on F_q^{}", self.n, space.n())));
        }
        SWeightTable::from_support_values(space.clone(), &self.support_weights()?)
    }
}

/// `δ((u, v)) = wt(v) − wt(u)`.
pub fn cube_from_sweight(wt: &SWeightTable) -> Result<DeltaCube> {
    let Some(w) = wt.support_values() else {
        return Err(Error::NotSupportDetermined);
    };
    if let Some(v) = validate_sweight(wt).violation {
        return Err(Error::InvalidWeight(v.to_string()));
    }
    if wt.n() > MAX_CUBE_N {
        return Err(Error::CapExceeded { what: "cube dimension", size: wt.n() as u128, cap: MAX_CUBE_N as u128 });
    }
    Ok(DeltaCube::from_support_weights(wt.n(), &w))
}

pub fn validate_cube(cube: &DeltaCube) -> CubeReport {
    cube.report.clone()
}

/// Trail sum from 0 to `supp(w)`.
pub fn weight_from_cube(cube: &DeltaCube, w: &FqVector) -> Result<u64> {
    if w.len() != cube.n() {
        return Err(Error::Dimension(format!("vector of length {} on a cube of dimension {}", w.len(), cube.n())));
    }
    cube.weight_of_support(w.support_mask() as u32)
}

/// Two trails from 0 to the same support whose sums differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrailMismatch {
    /// Coordinates in the order added, 1-based.
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub first_sum: u64,
    pub second_sum: u64,
}

/// Compares `pairs` random pairs of trails from 0 sharing an endpoint.
pub fn random_trail_check<R: Rng + ?Sized>(cube: &DeltaCube, pairs: usize, rng: &mut R) -> Option<TrailMismatch> {
    let n = cube.n();
    for _ in 0..pairs {
        let end: u32 = rng.gen_range(0..1u32 << n);
        let mut a: Vec<usize> = (0..n).filter(|&i| end & (1 << i) != 0).collect();
        let mut b = a.clone();
        a.shuffle(rng);
        b.shuffle(rng);
        let (sa, sb) = (cube.trail_sum(&a), cube.trail_sum(&b));
        if sa != sb {
            let one = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect();
            return Some(TrailMismatch { first: one(a), second: one(b), first_sum: sa, second_sum: sb });
        }
    }
    None
}

/// [`random_trail_check`] driven by a fixed seed, for reproducible runs.
pub fn seeded_trail_check(cube: &DeltaCube, pairs: usize, seed: u64) -> Option<TrailMismatch> {
    random_trail_check(cube, pairs, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Every arc weight is 0 or 1.
pub fn is_combinatorial_shaped(cube: &DeltaCube) -> bool {
    cube.arcs().all(|(_, _, d)| d <= 1)
}

/// The attained weights are exactly `{0, 1, …, M}`.
///
/// Every trail starts at 0, so the set of trail sums is the set of weights.
pub fn is_standard_form(cube: &DeltaCube) -> Result<bool> {
    let values: BTreeSet<u64> = cube.support_weights()?.into_iter().collect();
    Ok(values.iter().copied().eq(0..values.len() as u64))
}

/// Rank compression of the weight values, rebuilt as a cube.
pub fn standardize(cube: &DeltaCube) -> Result<DeltaCube> {
    let w = cube.support_weights()?;
    let distinct: Vec<u64> = w.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    // 0 is always attained (the empty support) and is the smallest value.
    let ranked: Vec<u64> = w.iter().map(|v| distinct.binary_search(v).unwrap() as u64).collect();
    Ok(DeltaCube::from_support_weights(cube.n(), &ranked))
}
