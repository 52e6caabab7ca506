//! Labeled-poset-block structures `(P, π, L)` and their weights.
//!
//! Coordinates `0..n` are grouped into blocks by `π`; block `i` is a poset
//! element with a positive label `L(i)`. The weight of `u` is the label sum over
//! the ideal generated by the blocks where `u` is nonzero.

mod decompose;
mod isometry;
mod poset;

pub use decompose::{
    admits_decomposition_bruteforce, canonical_decompose, is_level_split, Decomposition, DecompositionSearch,
};
pub use isometry::{
    check_semidirect_lpb, enumerate_gl_lpb, factorize, Factorization, LpbSemidirectReport, FACTOR_TABLE_LIMIT,
};
pub use poset::{LevelPartition, Poset, PosetJson, MAX_POSET};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::{gl_order, Field, FqVector, LinearMap, Space, MAX_MAP_N};
use crate::group::Cols;
use crate::perm::permutations;
use crate::sweight::SWeightTable;

/// Largest `n` for which a structure tabulates weights by support.
pub const MAX_LPB_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpbStructure {
    field: Field,
    poset: Poset,
    pi: Vec<usize>,
    labels: Vec<u64>,
    // Coordinates of each block, ascending; e_{ij} is block_coords[i][j].
    block_coords: Vec<Vec<usize>>,
    block_masks: Vec<u32>,
    // Weight of every coordinate support mask.
    by_support: Vec<u64>,
}

impl LpbStructure {
    /// `pi[c]` is the (0-based) block of coordinate `c`.
    pub fn new(q: u32, poset: Poset, pi: Vec<usize>, labels: Vec<u64>) -> Result<Self> {
        let field = Field::new(q)?;
        let m = poset.m();
        let n = pi.len();
        if n > MAX_LPB_N {
            return Err(Error::CapExceeded { what: "structure length n", size: n as u128, cap: MAX_LPB_N as u128 });
        }
        if labels.len() != m {
            return Err(Error::InvalidStructure(format!("{} labels for {m} poset elements", labels.len())));
        }
        if let Some(i) = labels.iter().position(|&l| l == 0) {
            return Err(Error::InvalidStructure(format!("label of element {} must be positive", i + 1)));
        }
        let mut block_coords = vec![Vec::new(); m];
        for (c, &b) in pi.iter().enumerate() {
            if b >= m {
                return Err(Error::InvalidStructure(format!("coordinate {} maps to block {} > m = {m}", c + 1, b + 1)));
            }
            block_coords[b].push(c);
        }
        if let Some(i) = block_coords.iter().position(Vec::is_empty) {
            return Err(Error::InvalidStructure(format!("block map misses element {}", i + 1)));
        }
        let block_masks: Vec<u32> = block_coords.iter().map(|cs| cs.iter().fold(0, |a, &c| a | 1 << c)).collect();
        let mut s = LpbStructure { field, poset, pi, labels, block_coords, block_masks, by_support: Vec::new() };
        s.by_support = (0..1u32 << n).map(|mask| s.ideal_weight(s.pi_support_of_mask(mask))).collect();
        Ok(s)
    }

    /// Antichain, one coordinate per block, all labels 1.
    pub fn hamming(q: u32, n: usize) -> Result<Self> {
        LpbStructure::new(q, Poset::antichain(n), (0..n).collect(), vec![1; n])
    }

    /// Blocks of the given sizes laid out left to right.
    pub fn with_block_sizes(q: u32, poset: Poset, sizes: &[usize], labels: Vec<u64>) -> Result<Self> {
        let pi = sizes.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k)).collect();
        LpbStructure::new(q, poset, pi, labels)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn n(&self) -> usize {
        self.pi.len()
    }

    pub fn m(&self) -> usize {
        self.poset.m()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// `k_i = |π^{-1}(i)|`.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.block_coords.iter().map(Vec::len).collect()
    }

    pub fn block_coords(&self, i: usize) -> &[usize] {
        &self.block_coords[i]
    }

    /// Coordinate mask of block `i`.
    pub fn block_mask(&self, i: usize) -> u32 {
        self.block_masks[i]
    }

    /// Coordinate mask of a set of blocks.
    pub fn coords_of_blocks(&self, blocks: u32) -> u32 {
        (0..self.m()).filter(|&i| blocks & (1 << i) != 0).fold(0, |a, i| a | self.block_masks[i])
    }

    /// The same blocks and labels over the dual poset.
    pub fn dual(&self) -> LpbStructure {
        LpbStructure::new(self.q(), self.poset.dual(), self.pi.clone(), self.labels.clone())
            .expect("dual of a valid structure")
    }

    /// `Σ L(i)`, the weight of any vector with full π-support ideal.
    pub fn max_weight(&self) -> u64 {
        self.labels.iter().sum()
    }

    /// `supp_π` of a coordinate support mask.
    pub fn pi_support_of_mask(&self, coords: u32) -> u32 {
        (0..self.m()).filter(|&i| coords & self.block_masks[i] != 0).fold(0, |a, i| a | 1 << i)
    }

    /// Label sum over `⟨blocks⟩_P`.
    pub fn ideal_weight(&self, blocks: u32) -> u64 {
        let ideal = self.poset.ideal_generated(blocks);
        (0..self.m()).filter(|&i| ideal & (1 << i) != 0).map(|i| self.labels[i]).sum()
    }

    /// Weight of any vector with the given coordinate support.
    #[inline]
    pub fn weight_of_support(&self, coords: u32) -> u64 {
        self.by_support[coords as usize]
    }

    /// `wt_{(P,π,L)}(u)`.
    pub fn weight(&self, u: &FqVector) -> Result<u64> {
        self.check_vector(u)?;
        Ok(self.weight_of_support(u.support_mask() as u32))
    }

    /// `d(u, v) = wt(u − v)`.
    pub fn distance(&self, u: &FqVector, v: &FqVector) -> Result<u64> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        self.weight(&u.sub(v)?)
    }

    fn check_vector(&self, u: &FqVector) -> Result<()> {
        if u.len() != self.n() || u.q() != self.q() {
            return Err(Error::Dimension(format!(
                "vector of length {} over F_{} for a structure on F_{}^{}",
                u.len(),
                u.q(),
                self.q(),
                self.n()
            )));
        }
        Ok(())
    }

    pub fn space(&self, caps: &Caps) -> Result<Space> {
        Space::new(self.n(), self.q(), caps)
    }

    /// The weight as a table over all `q^n` vectors.
    pub fn weight_table(&self, caps: &Caps) -> Result<SWeightTable> {
        Ok(SWeightTable::from_support_fn(self.space(caps)?, |mask| self.weight_of_support(mask)))
    }

    /// Weight of every vector index of `space`.
    pub(crate) fn weights_on(&self, space: &Space) -> Vec<u64> {
        (0..space.size()).map(|x| self.weight_of_support(space.support(x))).collect()
    }

    /// φ preserves the order both ways, the labels and the block sizes.
    pub fn is_automorphism(&self, phi: &[usize]) -> bool {
        let m = self.m();
        let mut seen = vec![false; m];
        if phi.len() != m || !phi.iter().all(|&j| j < m && !std::mem::replace(&mut seen[j], true)) {
            return false;
        }
        self.poset.is_automorphism(phi)
            && (0..m).all(|i| {
                self.labels[i] == self.labels[phi[i]] && self.block_coords[i].len() == self.block_coords[phi[i]].len()
            })
    }

    /// `Aut(P, π, L)`, in lexicographic order of the permutations.
    pub fn automorphisms(&self) -> Result<Vec<Vec<usize>>> {
        if self.m() > 8 {
            return Err(Error::CapExceeded { what: "automorphism search size m", size: self.m() as u128, cap: 8 });
        }
        Ok(permutations(self.m()).into_iter().filter(|p| self.is_automorphism(p)).collect())
    }

    /// `T_φ(e_{ij}) = e_{φ(i)j}`.
    pub fn automorphism_isometry(&self, phi: &[usize]) -> Result<LinearMap> {
        if !self.is_automorphism(phi) {
            return Err(Error::NotAutomorphism(format!("{:?}", phi.iter().map(|i| i + 1).collect::<Vec<_>>())));
        }
        let images: Vec<FqVector> = (0..self.n())
            .map(|c| {
                let i = self.pi[c];
                let j = self.block_coords[i].iter().position(|&x| x == c).expect("coordinate in its block");
                FqVector::unit(self.field, self.n(), self.block_coords[phi[i]][j])
            })
            .collect();
        LinearMap::from_images(self.field, &images)
    }

    pub(crate) fn automorphism_cols(&self, space: &Space, phi: &[usize]) -> Cols {
        let mut cols = [0u32; MAX_MAP_N];
        for (c, col) in cols.iter_mut().enumerate().take(self.n()) {
            let i = self.pi[c];
            let j = self.block_coords[i].iter().position(|&x| x == c).expect("coordinate in its block");
            *col = space.unit(self.block_coords[phi[i]][j]) as u32;
        }
        cols
    }

    /// Membership in the perturbation subgroup `N`, checked vector by vector.
    ///
    /// For every block `i` and nonzero `u_i` supported in block `i`, `T(u_i)` must
    /// be a nonzero block-`i` part plus a part π-supported in `⟨i⟩ \ {i}`.
    pub fn is_n_subgroup_member(&self, t: &LinearMap) -> bool {
        if t.n() != self.n() || t.field() != self.field || !t.is_invertible() {
            return false;
        }
        let Ok(space) = Space::new(self.n(), self.q(), &Caps::default()) else {
            return false;
        };
        let cols = t.cols(&space);
        (0..self.m()).all(|i| {
            let below = self.coords_of_blocks(self.poset.down_set(i) & !(1 << i));
            space.vectors_within(self.block_masks[i]).into_iter().skip(1).all(|u| {
                let s = space.support(space.apply_cols(&cols, u));
                s & self.block_masks[i] != 0 && s & !(self.block_masks[i] | below) == 0
            })
        })
    }

    /// Coordinate masks that column `c` of a member of `N` may occupy.
    pub(crate) fn n_allowed_masks(&self) -> Vec<u32> {
        (0..self.n())
            .map(|c| {
                let i = self.pi[c];
                self.coords_of_blocks(self.poset.down_set(i))
            })
            .collect()
    }

    /// Membership in `N` for an invertible map: every column stays inside its
    /// block and the blocks strictly below. Invertibility then forces every
    /// diagonal block to be invertible, since the matrix is block triangular
    /// along any linear extension of the poset.
    pub(crate) fn n_member_cols(space: &Space, allowed: &[u32], cols: &Cols) -> bool {
        allowed.iter().enumerate().all(|(c, &a)| space.support(cols[c] as usize) & !a == 0)
    }

    /// `|N| = Π_i |GL(k_i, q)| · q^{k_i · Σ_{j ≺ i} k_j}`.
    pub fn n_order(&self) -> u128 {
        let k = self.block_sizes();
        (0..self.m())
            .map(|i| {
                let below: usize = (0..self.m()).filter(|&j| self.poset.lt(j, i)).map(|j| k[j]).sum();
                gl_order(k[i], self.q()) * (self.q() as u128).pow((k[i] * below) as u32)
            })
            .product()
    }

    /// Within each level, equal label sums must come from matchable subsets.
    ///
    /// Subsets `S, S'` of a level with equal `Σ L` need a bijection preserving
    /// `L` and the block size, which exists iff the multisets of `(L, k)` pairs
    /// agree. Returns the first offending pair, in subset-mask order.
    pub fn udp_check(&self) -> Result<UdpReport> {
        let lp = self.poset.heights_and_levels();
        let k = self.block_sizes();
        for (li, level) in lp.levels.iter().enumerate() {
            if level.len() > 24 {
                return Err(Error::CapExceeded { what: "level subsets", size: 1u128 << level.len(), cap: 1 << 24 });
            }
            let mut seen: BTreeMap<u64, (u32, Vec<(u64, usize)>)> = BTreeMap::new();
            for sub in 0u32..1 << level.len() {
                let members: Vec<usize> =
                    level.iter().enumerate().filter(|(b, _)| sub & (1 << b) != 0).map(|(_, &a)| a).collect();
                let sum = members.iter().map(|&a| self.labels[a]).sum();
                let mut sig: Vec<(u64, usize)> = members.iter().map(|&a| (self.labels[a], k[a])).collect();
                sig.sort_unstable();
                match seen.get(&sum) {
                    None => {
                        seen.insert(sum, (sub, sig));
                    }
                    Some((first, first_sig)) if *first_sig != sig => {
                        let pick = |s: u32| -> Vec<usize> {
                            level.iter().enumerate().filter(|(b, _)| s & (1 << b) != 0).map(|(_, &a)| a).collect()
                        };
                        return Ok(UdpReport {
                            holds: false,
                            witness: Some(UdpWitness { level: li, first: pick(*first), second: pick(sub), label_sum: sum }),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(UdpReport { holds: true, witness: None })
    }
}

/// Two subsets of one level with equal label sums but no matching bijection.
/// Elements and the level index are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UdpWitness {
    pub level: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub label_sum: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UdpReport {
    pub holds: bool,
    pub witness: Option<UdpWitness>,
}

/// `udp_check`.
pub fn udp_check(s: &LpbStructure) -> Result<UdpReport> {
    s.udp_check()
}

/// Every structure with `m ≤ max_m`, `n ≤ max_n`, contiguous blocks and labels
/// in `1..=max_label`, over all labeled posets; the desk-scale sweep domain.
pub fn sweep_structures(max_m: usize, max_n: usize, q: u32, max_label: u64) -> Result<Vec<LpbStructure>> {
    let mut out = Vec::new();
    for m in 1..=max_m.min(max_n) {
        let posets = Poset::all(m)?;
        let sizes = compositions(m, max_n);
        let label_sets = label_vectors(m, max_label);
        for p in &posets {
            for k in &sizes {
                for l in &label_sets {
                    out.push(LpbStructure::with_block_sizes(q, p.clone(), k, l.clone())?);
                }
            }
        }
    }
    Ok(out)
}

/// Sequences of `m` positive sizes with sum at most `max_n`.
fn compositions(m: usize, max_n: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=max_n.saturating_sub(m - 1) {
        for mut rest in compositions(m - 1, max_n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn label_vectors(m: usize, max_label: u64) -> Vec<Vec<u64>> {
    (0..m).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter().flat_map(|v| (1..=max_label).map(move |l| [v.clone(), vec![l]].concat())).collect()
    })
}

/// JSON form: `{"q":2,"m":2,"n":3,"relations":[[1,2]],"pi":[1,1,2],"L":[1,2]}`,
/// all indices 1-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpbJson {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub relations: Vec<[usize; 2]>,
    pub pi: Vec<usize>,
    #[serde(rename = "L")]
    pub labels: Vec<u64>,
}

impl TryFrom<&LpbJson> for LpbStructure {
    type Error = Error;
    fn try_from(j: &LpbJson) -> Result<Self> {
        if j.pi.len() != j.n {
            return Err(Error::Parse(format!("pi has {} entries, n = {}", j.pi.len(), j.n)));
        }
        let poset = Poset::try_from(&PosetJson { m: j.m, relations: j.relations.clone() })?;
        let pi = j
            .pi
            .iter()
            .map(|&b| b.checked_sub(1).ok_or_else(|| Error::Parse("pi entries are 1-based".into())))
            .collect::<Result<Vec<_>>>()?;
        LpbStructure::new(j.q, poset, pi, j.labels.clone())
    }
}

impl From<&LpbStructure> for LpbJson {
    fn from(s: &LpbStructure) -> Self {
        let p = PosetJson::from(&s.poset);
        LpbJson {
            q: s.q(),
            m: s.m(),
            n: s.n(),
            relations: p.relations,
            pi: s.pi.iter().map(|b| b + 1).collect(),
            labels: s.labels.clone(),
        }
    }
}

impl Serialize for LpbStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LpbJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LpbStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = LpbJson::deserialize(d)?;
        LpbStructure::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweight::{check_metric_axioms, validate_sweight};

    fn v(s: &str) -> FqVector {
        FqVector::parse(2, s).unwrap()
    }

    fn chain_12() -> LpbStructure {
        LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 2]).unwrap()
    }

    fn v_poset() -> Poset {
        Poset::new(3, &[(0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn weight_examples() {
        let h = LpbStructure::hamming(2, 3).unwrap();
        for x in ["000", "100", "110", "111", "011"] {
            assert_eq!(h.weight(&v(x)).unwrap(), x.chars().filter(|&c| c == '1').count() as u64);
        }
        let single = LpbStructure::new(2, Poset::antichain(1), vec![0, 0], vec![2]).unwrap();
        for x in ["10", "01", "11"] {
            assert_eq!(single.weight(&v(x)).unwrap(), 2);
        }
        assert_eq!(chain_12().weight(&v("01")).unwrap(), 3);
        assert_eq!(chain_12().weight(&v("10")).unwrap(), 1);
    }

    #[test]
    fn distance_examples() {
        let s = chain_12();
        assert_eq!(s.distance(&v("11"), &v("11")).unwrap(), 0);
        assert_eq!(s.distance(&v("01"), &v("00")).unwrap(), 3);
        assert_eq!(s.distance(&v("10"), &v("01")).unwrap(), 3);
    }

    #[test]
    fn rejects_bad_structures() {
        assert!(LpbStructure::new(2, Poset::antichain(2), vec![0, 0], vec![1, 1]).is_err());
        assert!(LpbStructure::new(2, Poset::antichain(1), vec![0], vec![0]).is_err());
        assert!(LpbStructure::new(4, Poset::antichain(1), vec![0], vec![1]).is_err());
        assert!(LpbStructure::new(2, Poset::antichain(1), vec![1], vec![1]).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let s = LpbStructure::new(2, v_poset(), vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        assert!(s.is_automorphism(&[0, 1, 2]));
        assert!(s.is_automorphism(&[1, 0, 2]));
        assert!(!s.is_automorphism(&[2, 1, 0]));
        let t = LpbStructure::new(2, v_poset(), vec![0, 1, 2], vec![1, 2, 1]).unwrap();
        assert!(!t.is_automorphism(&[1, 0, 2]));
        let blocks = LpbStructure::new(2, v_poset(), vec![0, 1, 1, 2], vec![1, 1, 1]).unwrap();
        assert!(!blocks.is_automorphism(&[1, 0, 2]));
    }

    #[test]
    fn automorphism_isometry_preserves_weight() {
        let s = LpbStructure::new(2, v_poset(), vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        let space = s.space(&Caps::default()).unwrap();
        let id = s.automorphism_isometry(&[0, 1, 2]).unwrap();
        assert_eq!(id, LinearMap::identity(s.field(), 3));
        let t = s.automorphism_isometry(&[1, 0, 2]).unwrap();
        assert_eq!(t.apply(&v("100")).unwrap(), v("010"));
        for x in 0..space.size() {
            let u = space.vector(x);
            assert_eq!(s.weight(&t.apply(&u).unwrap()).unwrap(), s.weight(&u).unwrap());
        }
        assert!(s.automorphism_isometry(&[2, 1, 0]).is_err());
    }

    #[test]
    fn automorphism_isometry_moves_whole_blocks() {
        let s = LpbStructure::new(3, Poset::antichain(2), vec![0, 1, 0, 1], vec![1, 1]).unwrap();
        let t = s.automorphism_isometry(&[1, 0]).unwrap();
        // e_{1,2} is coordinate 2, e_{2,2} is coordinate 3
        assert_eq!(t.image_of_unit(2), FqVector::unit(s.field(), 4, 3));
        assert_eq!(t.image_of_unit(1), FqVector::unit(s.field(), 4, 0));
    }

    #[test]
    fn automorphisms_form_injective_homomorphism() {
        let s = LpbStructure::new(2, Poset::antichain(3), vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        let auts = s.automorphisms().unwrap();
        assert_eq!(auts.len(), 6);
        let maps: Vec<LinearMap> = auts.iter().map(|p| s.automorphism_isometry(p).unwrap()).collect();
        for (a, pa) in auts.iter().zip(&maps) {
            for (b, pb) in auts.iter().zip(&maps) {
                let ab: Vec<usize> = (0..3).map(|i| a[b[i]]).collect();
                assert_eq!(s.automorphism_isometry(&ab).unwrap(), pa.compose(pb).unwrap());
            }
        }
        for i in 0..maps.len() {
            for j in i + 1..maps.len() {
                assert_ne!(maps[i], maps[j]);
            }
        }
    }

    #[test]
    fn n_membership_examples() {
        let s = LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 1]).unwrap();
        let f = s.field();
        assert!(s.is_n_subgroup_member(&LinearMap::identity(f, 2)));
        let t = LinearMap::from_images(f, &[v("10"), v("11")]).unwrap();
        assert!(s.is_n_subgroup_member(&t));
        let swap = LinearMap::from_images(f, &[v("01"), v("10")]).unwrap();
        assert!(!s.is_n_subgroup_member(&swap));
    }

    #[test]
    fn n_membership_literal_matches_structural() {
        let caps = Caps::default();
        for q in [2, 3] {
            for s in sweep_structures(3, 3, q, 1).unwrap() {
                let space = s.space(&caps).unwrap();
                let allowed = s.n_allowed_masks();
                let mut count = 0u128;
                for t in crate::gf::invertible_maps(s.n(), q, &caps).unwrap() {
                    let literal = s.is_n_subgroup_member(&t);
                    assert_eq!(literal, LpbStructure::n_member_cols(&space, &allowed, &t.cols(&space)));
                    count += literal as u128;
                }
                assert_eq!(count, s.n_order(), "{s:?}");
            }
        }
    }

    #[test]
    fn udp_examples() {
        let h = LpbStructure::hamming(2, 3).unwrap();
        assert!(h.udp_check().unwrap().holds);
        let l = LpbStructure::new(2, Poset::antichain(3), vec![0, 1, 2], vec![1, 1, 2]).unwrap();
        let r = l.udp_check().unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!((w.first, w.second, w.label_sum), (vec![0, 1], vec![2], 2));
        let k = LpbStructure::new(2, Poset::antichain(2), vec![0, 1, 1], vec![1, 1]).unwrap();
        let w = k.udp_check().unwrap().witness.unwrap();
        assert_eq!((w.first, w.second), (vec![0], vec![1]));
    }

    #[test]
    fn sweep_domain_size() {
        assert_eq!(sweep_structures(3, 4, 2, 2).unwrap().len(), 688);
    }

    #[test]
    fn every_structure_is_an_sweight_and_a_metric() {
        let caps = Caps::default();
        for q in [2, 3] {
            for s in sweep_structures(3, 3, q, 2).unwrap() {
                let table = s.weight_table(&caps).unwrap();
                assert!(validate_sweight(&table).valid);
                let space = table.space();
                let d = |x: usize, y: usize| s.weight_of_support(space.support(space.sub(x, y)));
                assert_eq!(check_metric_axioms(space.size(), d), None);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let s: LpbStructure =
            serde_json::from_str(r#"{"q":2,"m":2,"n":3,"relations":[[1,2]],"pi":[1,1,2],"L":[1,2]}"#).unwrap();
        assert_eq!(s.block_sizes(), vec![2, 1]);
        assert!(s.poset().lt(0, 1));
        let back: LpbStructure = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<LpbStructure>(r#"{"q":2,"m":1,"n":1,"pi":[0],"L":[1]}"#).is_err());
    }
}
