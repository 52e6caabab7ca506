//! Linear codes, their `(P,π,L)`-weight enumerators and the MacWilliams test.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::{Field, FqMatrix, FqVector, LinearMap, Space};
use crate::lpb::{enumerate_gl_lpb, LpbStructure, UdpReport};
use crate::oracles::enumerate_subspaces;

/// A subspace of `F_q^n`, stored by its reduced row echelon generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCode {
    generator: FqMatrix,
}

impl LinearCode {
    /// The row space of `generator`.
    pub fn new(generator: &FqMatrix) -> Self {
        LinearCode { generator: generator.rref().0 }
    }

    pub fn from_rows(q: u32, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Ok(LinearCode::new(&FqMatrix::from_rows(q, n, rows)?))
    }

    pub fn from_vectors(field: Field, n: usize, rows: &[FqVector]) -> Result<Self> {
        Ok(LinearCode::new(&FqMatrix::from_vectors(field, n, rows)?))
    }

    /// Span of the given vector indices of `space`.
    pub fn from_indices(space: &Space, rows: &[usize]) -> Self {
        let vs: Vec<FqVector> = rows.iter().map(|&x| space.vector(x)).collect();
        LinearCode::from_vectors(space.field(), space.n(), &vs).expect("vectors of the space")
    }

    pub fn zero(field: Field, n: usize) -> Self {
        LinearCode { generator: FqMatrix::zeros(field, 0, n) }
    }

    pub fn full(field: Field, n: usize) -> Self {
        LinearCode { generator: FqMatrix::identity(field, n) }
    }

    pub(crate) fn from_rref_unchecked(generator: FqMatrix) -> Self {
        LinearCode { generator }
    }

    pub fn field(&self) -> Field {
        self.generator.field()
    }

    pub fn q(&self) -> u32 {
        self.generator.q()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &FqMatrix {
        &self.generator
    }

    pub fn rows(&self) -> Vec<FqVector> {
        self.generator.row_vectors()
    }

    fn check_space(&self, space: &Space) -> Result<()> {
        if space.n() != self.n() || space.q() != self.q() {
            return Err(Error::Dimension(format!(
                "code in F_{}^{} used with F_{}^{}",
                self.q(),
                self.n(),
                space.q(),
                space.n()
            )));
        }
        Ok(())
    }

    /// Indices of the generator rows in `space`.
    pub fn row_indices(&self, space: &Space) -> Result<Vec<usize>> {
        self.check_space(space)?;
        self.rows().iter().map(|r| space.index_of(r)).collect()
    }

    /// Indices of all `q^k` codewords, starting with 0.
    pub fn codeword_indices(&self, space: &Space) -> Result<Vec<usize>> {
        let rows = self.row_indices(space)?;
        Ok(span_indices(space, &rows))
    }

    pub fn contains(&self, v: &FqVector) -> bool {
        if v.len() != self.n() || v.q() != self.q() {
            return false;
        }
        let mut rows = self.rows();
        rows.push(v.clone());
        FqMatrix::from_vectors(self.field(), self.n(), &rows).map(|m| m.rank() == self.dimension()).unwrap_or(false)
    }

    /// `T(C)`.
    pub fn image(&self, t: &LinearMap) -> Result<LinearCode> {
        if t.n() != self.n() || t.field() != self.field() {
            return Err(Error::Dimension("map and code live on different spaces".into()));
        }
        let rows: Vec<FqVector> = self.rows().iter().map(|r| t.apply(r)).collect::<Result<_>>()?;
        LinearCode::from_vectors(self.field(), self.n(), &rows)
    }
}

/// All combinations of `rows` with coefficients in `F_q`.
pub(crate) fn span_indices(space: &Space, rows: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &r in rows {
        let len = out.len();
        for a in 1..space.q() {
            let ar = space.scale(a, r);
            for t in 0..len {
                out.push(space.add(out[t], ar));
            }
        }
    }
    out
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.generator.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(LinearCode::new(&FqMatrix::deserialize(d)?))
    }
}

impl fmt::Display for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows().iter().map(FqVector::digit_string).collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}

/// `C^⊥` under the standard inner product.
pub fn dual_code(c: &LinearCode) -> LinearCode {
    LinearCode::from_rref_unchecked(c.generator.null_space().rref().0)
}

/// Codeword counts by weight, `A_0, …, A_M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightEnumerator {
    coefficients: Vec<u64>,
}

impl WeightEnumerator {
    pub fn from_coefficients(mut coefficients: Vec<u64>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        WeightEnumerator { coefficients }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> u64 {
        self.coefficients.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.coefficients.iter().sum()
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| match (i, a) {
                (0, a) => a.to_string(),
                (1, 1) => "X".to_string(),
                (1, a) => format!("{a}X"),
                (i, 1) => format!("X^{i}"),
                (i, a) => format!("{a}X^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn enumerator_on(space: &Space, s: &LpbStructure, codewords: &[usize]) -> WeightEnumerator {
    let mut a = vec![0u64; s.max_weight() as usize + 1];
    for &x in codewords {
        a[s.weight_of_support(space.support(x)) as usize] += 1;
    }
    WeightEnumerator::from_coefficients(a)
}

/// `W_C^{(P,π,L)}`.
pub fn weight_enumerator(c: &LinearCode, s: &LpbStructure, caps: &Caps) -> Result<WeightEnumerator> {
    if c.n() != s.n() || c.q() != s.q() {
        return Err(Error::Dimension("code and structure live on different spaces".into()));
    }
    Caps::check("codewords", (c.q() as u128).pow(c.dimension() as u32), caps.vectors)?;
    let space = s.space(caps)?;
    Ok(enumerator_on(&space, s, &c.codeword_indices(&space)?))
}

/// True iff some isometry of `s` maps `c1` onto `c2`.
pub fn equivalent_codes(c1: &LinearCode, c2: &LinearCode, s: &LpbStructure, caps: &Caps) -> Result<bool> {
    Ok(equivalence_witness(c1, c2, s, caps)?.is_some())
}

/// An isometry `T` with `T(c1) = c2`, if one exists.
pub fn equivalence_witness(
    c1: &LinearCode,
    c2: &LinearCode,
    s: &LpbStructure,
    caps: &Caps,
) -> Result<Option<LinearMap>> {
    if c1.dimension() != c2.dimension() {
        return Ok(None);
    }
    let g = enumerate_gl_lpb(s, caps)?;
    let space = g.space();
    let rows = c1.row_indices(space)?;
    let mut in_c2 = vec![false; space.size()];
    for x in c2.codeword_indices(space)? {
        in_c2[x] = true;
    }
    for cols in g.cols_iter() {
        if rows.iter().all(|&r| in_c2[space.apply_cols(&cols, r)]) {
            return Ok(Some(LinearMap::from_cols(space, &cols[..space.n()])));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum MacWilliamsVerdict {
    /// Every class of codes with equal enumerators has duals with equal enumerators.
    AdmitsEmpirically { codes: usize, classes: usize },
    /// Two codes with equal enumerators whose duals' enumerators differ.
    Counterexample {
        first: LinearCode,
        second: LinearCode,
        enumerator: WeightEnumerator,
        first_dual: WeightEnumerator,
        second_dual: WeightEnumerator,
    },
}

impl MacWilliamsVerdict {
    pub fn admits(&self) -> bool {
        matches!(self, MacWilliamsVerdict::AdmitsEmpirically { .. })
    }
}

/// Does `W_C^{(P,π,L)}` determine `W_{C^⊥}^{(P^⊥,π,L)}` over all `[n, k]` codes?
pub fn macwilliams_verdict(s: &LpbStructure, k: usize, caps: &Caps) -> Result<MacWilliamsVerdict> {
    let space = s.space(caps)?;
    let dual_s = s.dual();
    let mut buckets: BTreeMap<WeightEnumerator, (WeightEnumerator, LinearCode)> = BTreeMap::new();
    let codes = enumerate_subspaces(s.n(), s.q(), k, caps)?;
    let total = codes.len();
    for c in codes {
        let w = enumerator_on(&space, s, &c.codeword_indices(&space)?);
        let d = dual_code(&c);
        let wd = enumerator_on(&space, &dual_s, &d.codeword_indices(&space)?);
        match buckets.get(&w) {
            None => {
                buckets.insert(w, (wd, c));
            }
            Some((first_dual, first)) if *first_dual != wd => {
                return Ok(MacWilliamsVerdict::Counterexample {
                    first: first.clone(),
                    second: c,
                    enumerator: w,
                    first_dual: first_dual.clone(),
                    second_dual: wd,
                });
            }
            Some(_) => {}
        }
    }
    Ok(MacWilliamsVerdict::AdmitsEmpirically { codes: total, classes: buckets.len() })
}

#[derive(Debug, Clone, Serialize)]
pub struct MacWilliamsRow {
    pub structure: LpbStructure,
    pub udp: UdpReport,
    /// Verdict for `k = 0..=n`.
    pub per_k: Vec<MacWilliamsVerdict>,
    /// The per-k verdicts all admit. An enumerator fixes `|C| = q^k`, so this is
    /// also the verdict with `k` left free.
    pub admits: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MacWilliamsReport {
    pub rows: Vec<MacWilliamsRow>,
    pub mismatches: usize,
    pub skipped_non_hierarchical: usize,
}

/// UDP against the empirical MacWilliams verdict, for each hierarchical structure.
pub fn theorem5_sweep(structures: &[LpbStructure], caps: &Caps) -> Result<MacWilliamsReport> {
    let mut rows = Vec::new();
    let mut skipped = 0;
    for s in structures {
        if !s.poset().is_hierarchical() {
            skipped += 1;
            continue;
        }
        let udp = s.udp_check()?;
        let per_k = (0..=s.n()).map(|k| macwilliams_verdict(s, k, caps)).collect::<Result<Vec<_>>>()?;
        let admits = per_k.iter().all(MacWilliamsVerdict::admits);
        rows.push(MacWilliamsRow { structure: s.clone(), agrees: udp.holds == admits, udp, per_k, admits });
    }
    let mismatches = rows.iter().filter(|r| !r.agrees).count();
    Ok(MacWilliamsReport { rows, mismatches, skipped_non_hierarchical: skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpb::Poset;

    fn code(rows: &[&str]) -> LinearCode {
        let vs: Vec<FqVector> = rows.iter().map(|r| FqVector::parse(2, r).unwrap()).collect();
        let n = vs.first().map_or(0, FqVector::len);
        LinearCode::from_vectors(Field::new(2).unwrap(), n, &vs).unwrap()
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_code(&code(&["11"])), code(&["11"]));
        let f = Field::new(3).unwrap();
        assert_eq!(dual_code(&LinearCode::full(f, 3)), LinearCode::zero(f, 3));
        assert_eq!(dual_code(&code(&["101", "011"])), code(&["111"]));
    }

    #[test]
    fn dual_is_an_involution_on_all_codes() {
        let caps = Caps::default();
        for q in [2, 3] {
            for k in 0..=3 {
                for c in enumerate_subspaces(3, q, k, &caps).unwrap() {
                    let d = dual_code(&c);
                    assert_eq!(d.dimension(), 3 - k);
                    assert_eq!(dual_code(&d), c);
                }
            }
        }
    }

    #[test]
    fn enumerator_examples() {
        let caps = Caps::default();
        let h = LpbStructure::hamming(2, 2).unwrap();
        let z = weight_enumerator(&LinearCode::zero(h.field(), 2), &h, &caps).unwrap();
        assert_eq!(z.coefficients(), &[1]);
        let w = weight_enumerator(&code(&["11"]), &h, &caps).unwrap();
        assert_eq!(w.to_string(), "1 + X^2");
        let chain = LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 1]).unwrap();
        assert_eq!(weight_enumerator(&code(&["11"]), &chain, &caps).unwrap().to_string(), "1 + X^2");
        assert_eq!(WeightEnumerator::from_coefficients(vec![1, 0, 3]).to_string(), "1 + 3X^2");
        assert_eq!(serde_json::to_string(&w).unwrap(), "[1,0,1]");
    }

    #[test]
    fn enumerator_totals() {
        let caps = Caps::default();
        let s = LpbStructure::new(3, Poset::chain(2), vec![0, 1, 1], vec![2, 1]).unwrap();
        for k in 0..=3 {
            for c in enumerate_subspaces(3, 3, k, &caps).unwrap() {
                let w = weight_enumerator(&c, &s, &caps).unwrap();
                assert_eq!(w.coefficient(0), 1);
                assert_eq!(w.total(), 3u64.pow(k as u32));
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let caps = Caps::default();
        let chain = LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 1]).unwrap();
        assert!(equivalent_codes(&code(&["11"]), &code(&["11"]), &chain, &caps).unwrap());
        assert!(equivalent_codes(&code(&["11"]), &code(&["01"]), &chain, &caps).unwrap());
        let h = LpbStructure::hamming(2, 2).unwrap();
        assert!(!equivalent_codes(&code(&["10"]), &code(&["11"]), &h, &caps).unwrap());
    }

    #[test]
    fn equivalent_codes_share_enumerators() {
        let caps = Caps::default();
        let s = LpbStructure::new(2, Poset::new(3, &[(0, 2)]).unwrap(), vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        let codes = enumerate_subspaces(3, 2, 1, &caps).unwrap();
        for a in &codes {
            for b in &codes {
                if equivalent_codes(a, b, &s, &caps).unwrap() {
                    assert_eq!(weight_enumerator(a, &s, &caps).unwrap(), weight_enumerator(b, &s, &caps).unwrap());
                }
            }
        }
    }

    #[test]
    fn macwilliams_examples() {
        let caps = Caps::default();
        let h = LpbStructure::hamming(2, 3).unwrap();
        assert!(macwilliams_verdict(&h, 1, &caps).unwrap().admits());
        let l = LpbStructure::new(2, Poset::antichain(3), vec![0, 1, 2], vec![1, 1, 2]).unwrap();
        let found = (0..=3).any(|k| !macwilliams_verdict(&l, k, &caps).unwrap().admits());
        assert!(found);
    }

    #[test]
    fn small_macwilliams_sweep() {
        let caps = Caps::default();
        let structures = crate::lpb::sweep_structures(2, 3, 2, 3).unwrap();
        let r = theorem5_sweep(&structures, &caps).unwrap();
        assert_eq!(r.mismatches, 0);
        assert_eq!(r.skipped_non_hierarchical, 0);
    }

    #[test]
    fn contains_and_image() {
        let c = code(&["110"]);
        assert!(c.contains(&FqVector::parse(2, "110").unwrap()));
        assert!(!c.contains(&FqVector::parse(2, "100").unwrap()));
        let f = c.field();
        let swap = LinearMap::from_images(
            f,
            &[FqVector::parse(2, "001").unwrap(), FqVector::parse(2, "010").unwrap(), FqVector::parse(2, "100").unwrap()],
        )
        .unwrap();
        assert_eq!(c.image(&swap).unwrap(), code(&["011"]));
    }

    #[test]
    fn json_round_trip() {
        let c: LinearCode = serde_json::from_str(r#"{"q":2,"n":3,"entries":[[1,1,0],[0,1,1]]}"#).unwrap();
        assert_eq!(c.dimension(), 2);
        let back: LinearCode = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
