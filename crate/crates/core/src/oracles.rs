//! Exhaustive ground truth: decoding criteria, and subspaces by echelon form.
//!
//! Every valid S-weight is a function of supports, so a criterion is a monotone
//! weak order on the `2^n` support masks with the empty support strictly lowest.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{Field, FqMatrix, Space};
use crate::perm::permutations;
use crate::sweight::{SWeightTable, WeightOrdering};

/// Largest `n` whose criteria are enumerated.
pub const MAX_CATALOG_N: usize = 3;

/// One decoding criterion: dense ranks indexed by support mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub ordering: WeightOrdering,
    /// Levels as ascending support masks, lowest level first.
    pub fingerprint: Vec<Vec<u32>>,
}

impl Criterion {
    /// `wt(10)=wt(01)<wt(11)` style, coordinate 1 leftmost.
    pub fn describe(&self, n: usize) -> String {
        let name = |m: u32| format!("wt({})", (0..n).map(|i| if m & (1 << i) != 0 { '1' } else { '0' }).collect::<String>());
        self.fingerprint
            .iter()
            .skip(1)
            .map(|level| level.iter().map(|&m| name(m)).collect::<Vec<_>>().join("="))
            .collect::<Vec<_>>()
            .join("<")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionCatalog {
    pub n: usize,
    pub q: u32,
    pub up_to_coordinate_permutation: bool,
    pub classes: Vec<Criterion>,
}

fn fingerprint(ranks: &[u32]) -> Vec<Vec<u32>> {
    WeightOrdering::from_ranks(ranks.to_vec())
        .levels()
        .into_iter()
        .map(|l| l.into_iter().map(|m| m as u32).collect())
        .collect()
}

fn permute_mask(mask: u32, phi: &[usize]) -> u32 {
    phi.iter().enumerate().filter(|&(i, _)| mask & (1 << i) != 0).fold(0, |a, (_, &j)| a | 1 << j)
}

/// Support ranks with coordinates relabeled by `phi` (coordinate `i` becomes `phi[i]`).
fn permute_ranks(ranks: &[u32], phi: &[usize]) -> Vec<u32> {
    let mut out = vec![0; ranks.len()];
    for (m, &r) in ranks.iter().enumerate() {
        out[permute_mask(m as u32, phi) as usize] = r;
    }
    out
}

fn canonical(ranks: &[u32], n: usize, quotient: bool) -> Vec<u32> {
    let ranks = WeightOrdering::from_ranks(ranks.to_vec()).ranks().to_vec();
    if !quotient {
        return ranks;
    }
    permutations(n)
        .iter()
        .map(|phi| permute_ranks(&ranks, phi))
        .min_by(|a, b| fingerprint(a).cmp(&fingerprint(b)))
        .expect("at least the identity")
}

impl CriterionCatalog {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class of a support-determined weight.
    pub fn classify(&self, wt: &SWeightTable) -> Result<Option<usize>> {
        if wt.n() != self.n {
            return Err(Error::Dimension(format!("weight on n = {} against a catalog for n = {}", wt.n(), self.n)));
        }
        let ranks = support_ordering(wt)?.ranks().to_vec();
        let key = canonical(&ranks, self.n, self.up_to_coordinate_permutation);
        Ok(self.classes.iter().position(|c| c.ordering.ranks() == key.as_slice()))
    }
}

/// The ordering of a weight over support masks.
pub fn support_ordering(wt: &SWeightTable) -> Result<WeightOrdering> {
    let by_support = wt.support_values().ok_or(Error::NotSupportDetermined)?;
    Ok(WeightOrdering::from_values(&by_support))
}

/// Every decoding criterion on `F_q^n` respecting support, optionally up to
/// relabeling coordinates; classes sorted by fingerprint.
pub fn enumerate_criteria(n: usize, q: u32, up_to_coordinate_permutation: bool) -> Result<CriterionCatalog> {
    Field::new(q)?;
    if n > MAX_CATALOG_N {
        return Err(Error::CapExceeded { what: "criterion catalog length n", size: n as u128, cap: MAX_CATALOG_N as u128 });
    }
    let size = 1usize << n;
    let mut found: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
    let mut ranks = vec![0u32; size];
    // Masks in increasing order visit subsets first.
    fn fill(m: usize, size: usize, ranks: &mut Vec<u32>, n: usize, quot: bool, out: &mut BTreeSet<Vec<Vec<u32>>>) {
        if m == size {
            let used: BTreeSet<u32> = ranks.iter().copied().collect();
            if used.len() == *used.iter().max().unwrap() as usize + 1 {
                out.insert(fingerprint(&canonical(ranks, n, quot)));
            }
            return;
        }
        let lo = (0..n).filter(|&i| m & (1 << i) != 0).map(|i| ranks[m & !(1 << i)]).max().unwrap_or(0).max(1);
        for r in lo..size as u32 {
            ranks[m] = r;
            fill(m + 1, size, ranks, n, quot, out);
        }
    }
    fill(1, size, &mut ranks, n, up_to_coordinate_permutation, &mut found);
    let classes = found
        .into_iter()
        .map(|fp| {
            let mut r = vec![0u32; size];
            for (k, level) in fp.iter().enumerate() {
                for &m in level {
                    r[m as usize] = k as u32;
                }
            }
            Criterion { ordering: WeightOrdering::from_ranks(r), fingerprint: fp }
        })
        .collect();
    Ok(CriterionCatalog { n, q, up_to_coordinate_permutation, classes })
}

/// As [`enumerate_criteria`], reading and writing `criteria-n{n}-q{q}-{mode}.json`
/// under `dir`.
pub fn enumerate_criteria_cached(n: usize, q: u32, quotient: bool, dir: &Path) -> Result<CriterionCatalog> {
    let mode = if quotient { "quotient" } else { "labeled" };
    let path = dir.join(format!("criteria-n{n}-q{q}-{mode}.json"));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(cat) = serde_json::from_str::<CriterionCatalog>(&text) {
            if cat.n == n && cat.q == q && cat.up_to_coordinate_permutation == quotient {
                return Ok(cat);
            }
        }
    }
    let cat = enumerate_criteria(n, q, quotient)?;
    let io = |e: std::io::Error| Error::Parse(format!("cache {}: {e}", path.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(&path, serde_json::to_string_pretty(&cat)?).map_err(io)?;
    Ok(cat)
}

/// The standard-form weight of a support ordering: each vector gets its level index.
pub fn representative_weight(ordering: &WeightOrdering, q: u32, caps: &Caps) -> Result<SWeightTable> {
    let len = ordering.ranks().len();
    if !len.is_power_of_two() {
        return Err(Error::Dimension(format!("{len} ranks do not index the supports of any F_q^n")));
    }
    let n = len.trailing_zeros() as usize;
    let space = Space::new(n, q, caps)?;
    let ranks = ordering.ranks();
    Ok(SWeightTable::from_support_fn(space, |m| ranks[m as usize] as u64))
}

/// A random support-determined S-weight: each support exceeds the largest of
/// its immediate subsets by a step in `0..=max_step`, and singletons by at least 1.
pub fn random_sweight<R: Rng + ?Sized>(n: usize, q: u32, max_step: u64, rng: &mut R, caps: &Caps) -> Result<SWeightTable> {
    let space = Space::new(n, q, caps)?;
    let mut w = vec![0u64; 1 << n];
    for s in 1..1usize << n {
        let floor = (0..n).filter(|&i| s & (1 << i) != 0).map(|i| w[s & !(1 << i)]).max().unwrap_or(0);
        let min_step = u64::from(s.count_ones() == 1);
        w[s] = floor + rng.gen_range(min_step..=max_step.max(min_step));
    }
    SWeightTable::from_support_values(space, &w)
}

/// `[n choose k]_q`.
pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Every `k`-dimensional subspace of `F_q^n` once, as its echelon generator.
///
/// Pivot sets are visited in lexicographic order; for each, the entries right of
/// a pivot outside other pivot columns run through `F_q` in odometer order.
pub fn enumerate_subspaces(n: usize, q: u32, k: usize, caps: &Caps) -> Result<Vec<LinearCode>> {
    let field = Field::new(q)?;
    if k > n {
        return Ok(Vec::new());
    }
    Caps::check("subspaces", gaussian_binomial(n, k, q), caps.subspaces)?;
    let mut out = Vec::new();
    for pivots in combinations(n, k) {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| (pivots[r] + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut g = FqMatrix::zeros(field, k, n);
            for (r, &p) in pivots.iter().enumerate() {
                g.set(r, p, 1);
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                g.set(r, c, d);
            }
            out.push(LinearCode::from_rref_unchecked(g));
            let Some(i) = digits.iter().position(|&d| d + 1 < q) else {
                break;
            };
            digits[i] += 1;
            digits[..i].iter_mut().for_each(|d| *d = 0);
        }
    }
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in combinations(n - first - 1, k - 1) {
            rest.iter_mut().for_each(|x| *x += first + 1);
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_weights_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let wt = random_sweight(4, 2, 3, &mut rng, &Caps::default()).unwrap();
            assert!(crate::sweight::validate_sweight(&wt).valid);
        }
    }

    #[test]
    fn catalog_counts() {
        assert_eq!(enumerate_criteria(2, 2, true).unwrap().len(), 4);
        assert_eq!(enumerate_criteria(2, 2, false).unwrap().len(), 6);
        assert_eq!(enumerate_criteria(1, 2, false).unwrap().len(), 1);
        assert_eq!(enumerate_criteria(0, 2, false).unwrap().len(), 1);
        assert!(enumerate_criteria(4, 2, true).is_err());
    }

    #[test]
    fn catalog_n2_matches_table_rows() {
        let cat = enumerate_criteria(2, 2, true).unwrap();
        let rows: BTreeSet<String> = cat.classes.iter().map(|c| c.describe(2)).collect();
        let want: BTreeSet<String> = [
            "wt(10)=wt(01)<wt(11)",
            "wt(10)=wt(01)=wt(11)",
            "wt(10)<wt(01)=wt(11)",
            "wt(10)<wt(01)<wt(11)",
        ]
        .into_iter()
        .map(String::from)
        .collect();
        assert_eq!(rows, want);
    }

    #[test]
    fn labeled_classes_map_onto_quotient() {
        for n in 1..=3 {
            let lab = enumerate_criteria(n, 2, false).unwrap();
            let quot = enumerate_criteria(n, 2, true).unwrap();
            let caps = Caps::default();
            let mut hit = vec![false; quot.len()];
            for c in &lab.classes {
                let w = representative_weight(&c.ordering, 2, &caps).unwrap();
                assert!(crate::sweight::validate_sweight(&w).valid);
                assert_eq!(lab.classify(&w).unwrap().map(|i| &lab.classes[i]), Some(c));
                hit[quot.classify(&w).unwrap().unwrap()] = true;
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn representative_examples() {
        let caps = Caps::default();
        let cat = enumerate_criteria(2, 2, true).unwrap();
        let chain = cat.classes.iter().find(|c| c.describe(2) == "wt(10)<wt(01)<wt(11)").unwrap();
        assert_eq!(representative_weight(&chain.ordering, 2, &caps).unwrap().values(), &[0, 1, 2, 3]);
        let ham = cat.classes.iter().find(|c| c.describe(2) == "wt(10)=wt(01)<wt(11)").unwrap();
        assert_eq!(representative_weight(&ham.ordering, 2, &caps).unwrap().values(), &[0, 1, 1, 2]);
        let flat = cat.classes.iter().find(|c| c.describe(2) == "wt(10)=wt(01)=wt(11)").unwrap();
        assert_eq!(representative_weight(&flat.ordering, 2, &caps).unwrap().values(), &[0, 1, 1, 1]);
    }

    #[test]
    fn ternary_representatives_are_support_determined() {
        let caps = Caps::default();
        let cat = enumerate_criteria(2, 3, true).unwrap();
        for c in &cat.classes {
            let w = representative_weight(&c.ordering, 3, &caps).unwrap();
            assert_eq!(w.values().len(), 9);
            assert!(crate::sweight::validate_sweight(&w).valid);
            assert!(cat.classify(&w).unwrap().is_some());
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("supmetric-cache-{}", std::process::id()));
        let a = enumerate_criteria_cached(2, 2, true, &dir).unwrap();
        let b = enumerate_criteria_cached(2, 2, true, &dir).unwrap();
        assert_eq!(a, b);
        assert!(dir.join("criteria-n2-q2-quotient.json").exists());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn subspace_examples() {
        let caps = Caps::default();
        assert_eq!(enumerate_subspaces(2, 2, 1, &caps).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(3, 2, 1, &caps).unwrap().len(), 7);
        assert_eq!(enumerate_subspaces(4, 2, 2, &caps).unwrap().len(), 35);
    }

    #[test]
    fn subspace_counts_and_uniqueness() {
        let caps = Caps::default();
        for q in [2, 3] {
            for n in 0..=4 {
                for k in 0..=n {
                    let codes = enumerate_subspaces(n, q, k, &caps).unwrap();
                    assert_eq!(codes.len() as u128, gaussian_binomial(n, k, q));
                    let distinct: std::collections::HashSet<_> = codes.iter().collect();
                    assert_eq!(distinct.len(), codes.len());
                    for c in &codes {
                        assert_eq!(&LinearCode::new(c.generator()), c);
                        assert_eq!(c.dimension(), k);
                    }
                }
            }
        }
    }
}
