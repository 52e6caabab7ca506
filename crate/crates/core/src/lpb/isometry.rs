use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::{LinearMap, Space};
use crate::group::{self, isometries, Cols, MapSet};

use super::LpbStructure;

/// Groups up to this order get a per-element factorization table in the report.
pub const FACTOR_TABLE_LIMIT: usize = 4096;

/// All invertible maps preserving the structure's weight.
pub fn enumerate_gl_lpb(s: &LpbStructure, caps: &Caps) -> Result<MapSet> {
    let space = s.space(caps)?;
    let w = s.weights_on(&space);
    isometries(&space, &w, caps)
}

/// `S = F ∘ T_φ` with `F ∈ N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub map: LinearMap,
    pub perturbation: LinearMap,
    /// 0-based image list of φ.
    pub automorphism: Vec<usize>,
}

/// Every way of writing `t` as `F ∘ T_φ`; Theorem-style uniqueness means one.
pub fn factorize(s: &LpbStructure, t: &LinearMap, caps: &Caps) -> Result<Vec<Factorization>> {
    if t.n() != s.n() || t.field() != s.field() {
        return Err(Error::Dimension("map and structure live on different spaces".into()));
    }
    let space = s.space(caps)?;
    let allowed = s.n_allowed_masks();
    let cols = t.cols(&space);
    let mut out = Vec::new();
    for phi in s.automorphisms()? {
        let inv = inverse_perm(&phi);
        let f = group::compose(&space, &cols, &s.automorphism_cols(&space, &inv));
        if t.is_invertible() && LpbStructure::n_member_cols(&space, &allowed, &f) {
            out.push(Factorization {
                map: t.clone(),
                perturbation: LinearMap::from_cols(&space, &f[..space.n()]),
                automorphism: phi,
            });
        }
    }
    Ok(out)
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

#[derive(Debug, Clone, Serialize)]
pub struct LpbSemidirectReport {
    pub holds: bool,
    pub q: u32,
    pub gl_order: usize,
    /// `|N|` from the block-triangular count.
    pub n_order: u128,
    /// Members of the brute-force group that lie in `N`.
    pub n_in_group: usize,
    pub aut_order: usize,
    pub automorphisms_are_isometries: bool,
    pub unique_factorization: bool,
    pub n_normal: bool,
    pub failures: Vec<String>,
    /// One entry per group element when `|GL| ≤ FACTOR_TABLE_LIMIT`.
    pub factorizations: Option<Vec<Factorization>>,
}

/// Checks `GL(P,π,L) = N ⋊ A` against the brute-force group.
///
/// `N ⊆ GL` is established by counting: the members of `GL` passing the
/// membership test number exactly `|N|`. Factorization is checked per element
/// over all automorphisms. Once `GL = N·A`, normality reduces to conjugation by
/// the `T_φ`, which is checked on every member of `N`.
pub fn check_semidirect_lpb(s: &LpbStructure, caps: &Caps) -> Result<LpbSemidirectReport> {
    let g = enumerate_gl_lpb(s, caps)?;
    let space: &Space = g.space();
    let allowed = s.n_allowed_masks();
    let auts = s.automorphisms()?;
    let t_phi: Vec<Cols> = auts.iter().map(|p| s.automorphism_cols(space, p)).collect();
    let t_phi_inv: Vec<Cols> = auts.iter().map(|p| s.automorphism_cols(space, &inverse_perm(p))).collect();
    let mut failures = Vec::new();

    let automorphisms_are_isometries = t_phi.iter().all(|c| g.contains_cols(c));
    if !automorphisms_are_isometries {
        failures.push("some T_φ is not an isometry".to_string());
    }

    let mut n_in_group = 0usize;
    let mut unique = true;
    let mut normal = true;
    let want_table = g.len() <= FACTOR_TABLE_LIMIT;
    let mut table = Vec::new();
    for cols in g.cols_iter() {
        if LpbStructure::n_member_cols(space, &allowed, &cols) {
            n_in_group += 1;
            for (a, ai) in t_phi.iter().zip(&t_phi_inv) {
                let conj = group::compose(space, &group::compose(space, a, &cols), ai);
                if !LpbStructure::n_member_cols(space, &allowed, &conj) || !g.contains_cols(&conj) {
                    if normal {
                        failures.push(format!("conjugate of N member {:?} leaves N", &cols[..space.n()]));
                    }
                    normal = false;
                }
            }
        }
        let mut found = 0;
        for (k, ai) in t_phi_inv.iter().enumerate() {
            let f = group::compose(space, &cols, ai);
            if LpbStructure::n_member_cols(space, &allowed, &f) {
                found += 1;
                if want_table && found == 1 {
                    table.push(Factorization {
                        map: LinearMap::from_cols(space, &cols[..space.n()]),
                        perturbation: LinearMap::from_cols(space, &f[..space.n()]),
                        automorphism: auts[k].clone(),
                    });
                }
            }
        }
        if found != 1 {
            if unique {
                failures.push(format!("isometry {:?} has {found} factorizations", &cols[..space.n()]));
            }
            unique = false;
        }
    }
    let n_order = s.n_order();
    if n_in_group as u128 != n_order {
        failures.push(format!("GL contains {n_in_group} members of N, expected |N| = {n_order}"));
    }
    if g.len() as u128 != n_order * auts.len() as u128 {
        failures.push(format!("|GL| = {} but |N|·|A| = {}", g.len(), n_order * auts.len() as u128));
    }
    Ok(LpbSemidirectReport {
        holds: failures.is_empty(),
        q: s.q(),
        gl_order: g.len(),
        n_order,
        n_in_group,
        aut_order: auts.len(),
        automorphisms_are_isometries,
        unique_factorization: unique,
        n_normal: normal,
        failures,
        factorizations: want_table.then_some(table),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FqVector;
    use crate::lpb::{sweep_structures, Poset};
    use crate::sweight::{enumerate_gl_bruteforce, SWeightTable};

    fn v(s: &str) -> FqVector {
        FqVector::parse(2, s).unwrap()
    }

    #[test]
    fn gl_examples() {
        let caps = Caps::default();
        let h = LpbStructure::hamming(2, 2).unwrap();
        assert_eq!(enumerate_gl_lpb(&h, &caps).unwrap().len(), 2);
        let chain = LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 1]).unwrap();
        let g = enumerate_gl_lpb(&chain, &caps).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&LinearMap::from_images(chain.field(), &[v("10"), v("11")]).unwrap()));
        let single = LpbStructure::new(2, Poset::antichain(1), vec![0, 0], vec![5]).unwrap();
        assert_eq!(enumerate_gl_lpb(&single, &caps).unwrap().len(), 6);
    }

    #[test]
    fn pruned_group_matches_filtered_gl() {
        let caps = Caps::default();
        for s in sweep_structures(2, 3, 3, 2).unwrap() {
            let table: SWeightTable = s.weight_table(&caps).unwrap();
            let brute = enumerate_gl_bruteforce(&table, &caps).unwrap();
            assert!(brute.same_members(&enumerate_gl_lpb(&s, &caps).unwrap()));
        }
    }

    #[test]
    fn semidirect_examples() {
        let caps = Caps::default();
        let chain = LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 1]).unwrap();
        let r = check_semidirect_lpb(&chain, &caps).unwrap();
        assert!(r.holds);
        assert_eq!((r.n_order, r.aut_order, r.gl_order), (2, 1, 2));
        assert_eq!(r.factorizations.unwrap().len(), 2);

        let anti = LpbStructure::hamming(2, 2).unwrap();
        let r = check_semidirect_lpb(&anti, &caps).unwrap();
        assert!(r.holds);
        assert_eq!((r.n_order, r.aut_order, r.gl_order), (1, 2, 2));
    }

    #[test]
    fn factorize_finds_the_unique_pair() {
        let caps = Caps::default();
        let s = LpbStructure::new(3, Poset::chain(2), vec![0, 1, 1], vec![1, 1]).unwrap();
        let g = enumerate_gl_lpb(&s, &caps).unwrap();
        for t in g.iter().take(50) {
            let f = factorize(&s, &t, &caps).unwrap();
            assert_eq!(f.len(), 1);
            let p = s.automorphism_isometry(&f[0].automorphism).unwrap();
            assert_eq!(f[0].perturbation.compose(&p).unwrap(), t);
            assert!(s.is_n_subgroup_member(&f[0].perturbation));
        }
    }

    #[test]
    fn n_is_normal_under_every_isometry_literally() {
        let caps = Caps::default();
        for s in sweep_structures(3, 3, 2, 2).unwrap() {
            let g = enumerate_gl_lpb(&s, &caps).unwrap();
            let space = g.space().clone();
            let allowed = s.n_allowed_masks();
            let n: Vec<Cols> =
                g.cols_iter().filter(|c| LpbStructure::n_member_cols(&space, &allowed, c)).collect();
            let mut n_set = MapSet::new(&space);
            for c in &n {
                n_set.insert_cols(c);
            }
            assert!(n_set.is_group());
            for x in g.cols_iter() {
                let xi = group::inverse(&space, &x);
                for f in &n {
                    let c = group::compose(&space, &group::compose(&space, &x, f), &xi);
                    assert!(n_set.contains_cols(&c));
                }
            }
        }
    }
}
