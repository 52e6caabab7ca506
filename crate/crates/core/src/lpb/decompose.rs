use serde::Serialize;

use crate::caps::Caps;
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{FqMatrix, FqVector, LinearMap, Space};
use crate::group::MapSet;

use super::{enumerate_gl_lpb, LpbStructure};

/// `T(C) = C̃ = C_1 ⊕ ⋯ ⊕ C_h` with `C_i` π-supported in level `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub map: LinearMap,
    pub code: LinearCode,
    /// One summand per level, lowest level first; may be `{0}`.
    pub summands: Vec<LinearCode>,
}

fn check_code(s: &LpbStructure, c: &LinearCode) -> Result<()> {
    if c.n() != s.n() || c.q() != s.q() {
        return Err(Error::Dimension("code and structure live on different spaces".into()));
    }
    Ok(())
}

/// Coordinate masks of the levels, lowest first.
fn level_masks(s: &LpbStructure) -> Vec<u32> {
    let lp = s.poset().heights_and_levels();
    (0..lp.height()).map(|l| s.coords_of_blocks(lp.mask(l))).collect()
}

/// Constructs a level-split code isometric to `c`; the poset must be hierarchical.
///
/// Levels are handled from the top down. The rows still alive are reduced with
/// pivots among the current level's coordinates (lowest block, then lowest
/// coordinate). A pivot row `r = r_top + r_low` is straightened by the map fixing
/// every `e_c` except `e_p ↦ e_p − r_low`; every lower level lies strictly below
/// the pivot's block, so that map is in `N`. Rows with no entry on the level
/// pass down. The composed map is then checked against every vector.
pub fn canonical_decompose(s: &LpbStructure, c: &LinearCode, caps: &Caps) -> Result<Decomposition> {
    check_code(s, c)?;
    if !s.poset().is_hierarchical() {
        return Err(Error::NotHierarchical);
    }
    let space = s.space(caps)?;
    let f = s.field();
    let n = s.n();
    let masks = level_masks(s);
    let h = masks.len();
    let lp = s.poset().heights_and_levels();
    let allowed = s.n_allowed_masks();

    let mut alive: Vec<Vec<u32>> = c.rows().iter().map(|r| r.entries().to_vec()).collect();
    let mut done: Vec<Vec<Vec<u32>>> = vec![Vec::new(); h];
    let mut t = FqMatrix::identity(f, n);

    for l in (0..h).rev() {
        let order: Vec<usize> = lp.levels[l].iter().flat_map(|&b| s.block_coords(b).iter().copied()).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for &p in &order {
            let Some(r) = (0..alive.len()).find(|&r| !pivots.iter().any(|&(pr, _)| pr == r) && alive[r][p] != 0)
            else {
                continue;
            };
            let inv = f.inv(alive[r][p]);
            for x in alive[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = alive[r].clone();
            for (o, row) in alive.iter_mut().enumerate() {
                let factor = row[p];
                if o == r || factor == 0 {
                    continue;
                }
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
            pivots.push((r, p));
        }
        for &(r, p) in &pivots {
            let low: Vec<u32> =
                (0..n).map(|c| if masks[l] & (1 << c) == 0 { alive[r][c] } else { 0 }).collect();
            if low.iter().all(|&x| x == 0) {
                continue;
            }
            let mut e = FqMatrix::identity(f, n);
            for (c, &x) in low.iter().enumerate().filter(|&(_, &x)| x != 0) {
                e.set(c, p, f.neg(x));
            }
            let elem = LinearMap::new(e.clone())?;
            if !LpbStructure::n_member_cols(&space, &allowed, &elem.cols(&space)) {
                return Err(Error::Internal(format!("elementary map at coordinate {} is not in N", p + 1)));
            }
            for row in alive.iter_mut().chain(done.iter_mut().flatten()) {
                let xp = row[p];
                if xp == 0 {
                    continue;
                }
                for (x, &y) in row.iter_mut().zip(&low) {
                    *x = f.sub(*x, f.mul(xp, y));
                }
            }
            t = e.mul(&t)?;
        }
        let mut rest = Vec::new();
        for (r, row) in alive.into_iter().enumerate() {
            if pivots.iter().any(|&(pr, _)| pr == r) {
                done[l].push(row);
            } else {
                rest.push(row);
            }
        }
        alive = rest;
    }
    if alive.iter().any(|r| r.iter().any(|&x| x != 0)) {
        return Err(Error::Internal("rows left over after the lowest level".into()));
    }

    let map = LinearMap::new(t)?;
    let w = s.weights_on(&space);
    let cols = map.cols(&space);
    if !map.is_invertible() || (0..space.size()).any(|x| w[space.apply_cols(&cols, x)] != w[x]) {
        return Err(Error::Internal("composed map does not preserve the weight".into()));
    }
    let to_code = |rows: &[Vec<u32>]| -> Result<LinearCode> {
        let vs: Vec<FqVector> = rows.iter().map(|r| FqVector::new(s.q(), r.clone())).collect::<Result<_>>()?;
        LinearCode::from_vectors(f, n, &vs)
    };
    let summands: Vec<LinearCode> = done.iter().map(|rows| to_code(rows)).collect::<Result<_>>()?;
    let all: Vec<Vec<u32>> = done.into_iter().flatten().collect();
    let code = to_code(&all)?;
    if code != c.image(&map)? {
        return Err(Error::Internal("T(C) differs from the decomposed code".into()));
    }
    for (l, sc) in summands.iter().enumerate() {
        if sc.rows().iter().any(|r| r.support_mask() as u32 & !masks[l] != 0) {
            return Err(Error::Internal(format!("summand {} leaves its level", l + 1)));
        }
    }
    Ok(Decomposition { map, code, summands })
}

/// `Σ_i dim(D ∩ V_i) = dim D`, with `V_i` the vectors π-supported in level `i`.
pub fn is_level_split(s: &LpbStructure, d: &LinearCode, caps: &Caps) -> Result<bool> {
    check_code(s, d)?;
    let space = s.space(caps)?;
    Ok(split_from_codewords(&space, &level_masks(s), &d.codeword_indices(&space)?, d.dimension()))
}

fn split_from_codewords(space: &Space, masks: &[u32], words: &[usize], k: usize) -> bool {
    let q = space.q() as usize;
    let total: usize = masks
        .iter()
        .map(|&m| {
            let mut count = words.iter().filter(|&&x| space.support(x) & !m == 0).count();
            let mut dim = 0;
            while count > 1 {
                count /= q;
                dim += 1;
            }
            dim
        })
        .sum();
    total == k
}

/// Brute force: some isometry maps `c` to a level-split code.
pub fn admits_decomposition_bruteforce(s: &LpbStructure, c: &LinearCode, caps: &Caps) -> Result<bool> {
    Ok(DecompositionSearch::new(s, caps)?.witness(c)?.is_some())
}

/// Reuses one isometry group across many codes.
pub struct DecompositionSearch {
    group: MapSet,
    masks: Vec<u32>,
}

impl DecompositionSearch {
    pub fn new(s: &LpbStructure, caps: &Caps) -> Result<Self> {
        Ok(DecompositionSearch { group: enumerate_gl_lpb(s, caps)?, masks: level_masks(s) })
    }

    /// The first isometry (in code order) splitting `c`, if any.
    pub fn witness(&self, c: &LinearCode) -> Result<Option<LinearMap>> {
        let space = self.group.space();
        let words = c.codeword_indices(space)?;
        let mut image = vec![0usize; words.len()];
        for cols in self.group.cols_iter() {
            for (y, &x) in image.iter_mut().zip(&words) {
                *y = space.apply_cols(&cols, x);
            }
            if split_from_codewords(space, &self.masks, &image, c.dimension()) {
                return Ok(Some(LinearMap::from_cols(space, &cols[..space.n()])));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpb::Poset;
    use crate::oracles::enumerate_subspaces;

    fn code(rows: &[&str]) -> LinearCode {
        let vs: Vec<FqVector> = rows.iter().map(|r| FqVector::parse(2, r).unwrap()).collect();
        LinearCode::from_vectors(crate::gf::Field::new(2).unwrap(), vs[0].len(), &vs).unwrap()
    }

    #[test]
    fn already_split_code_keeps_identity() {
        let caps = Caps::default();
        let s = LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 1]).unwrap();
        let d = canonical_decompose(&s, &code(&["10"]), &caps).unwrap();
        assert_eq!(d.map, LinearMap::identity(s.field(), 2));
        assert_eq!(d.code, code(&["10"]));
    }

    #[test]
    fn chain_example() {
        let caps = Caps::default();
        let s = LpbStructure::new(2, Poset::chain(2), vec![0, 1], vec![1, 1]).unwrap();
        let d = canonical_decompose(&s, &code(&["11"]), &caps).unwrap();
        assert_eq!(d.code, code(&["01"]));
        assert_eq!(d.summands[1], code(&["01"]));
        assert_eq!(d.summands[0].dimension(), 0);
        assert!(s.is_n_subgroup_member(&d.map));
        assert_eq!(d.map.apply(&FqVector::parse(2, "11").unwrap()).unwrap(), FqVector::parse(2, "01").unwrap());
    }

    #[test]
    fn hierarchical_v_poset_decomposes_everything() {
        let caps = Caps::default();
        let s = LpbStructure::new(2, Poset::new(3, &[(0, 2), (1, 2)]).unwrap(), vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        for k in 0..=3 {
            for c in enumerate_subspaces(3, 2, k, &caps).unwrap() {
                let d = canonical_decompose(&s, &c, &caps).unwrap();
                assert!(is_level_split(&s, &d.code, &caps).unwrap());
            }
        }
    }

    #[test]
    fn ternary_blocks_decompose() {
        let caps = Caps::default();
        let s = LpbStructure::new(3, Poset::chain(2), vec![0, 1, 1], vec![2, 1]).unwrap();
        for k in 0..=3 {
            for c in enumerate_subspaces(3, 3, k, &caps).unwrap() {
                let d = canonical_decompose(&s, &c, &caps).unwrap();
                assert!(is_level_split(&s, &d.code, &caps).unwrap());
                assert_eq!(d.code.dimension(), k);
            }
        }
    }

    #[test]
    fn non_hierarchical_has_a_witness_code() {
        let caps = Caps::default();
        let s = LpbStructure::new(2, Poset::new(3, &[(0, 1)]).unwrap(), vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        assert!(matches!(canonical_decompose(&s, &code(&["011"]), &caps), Err(Error::NotHierarchical)));
        let search = DecompositionSearch::new(&s, &caps).unwrap();
        assert!(search.witness(&code(&["011"])).unwrap().is_none());
        assert!(admits_decomposition_bruteforce(&s, &LinearCode::zero(s.field(), 3), &caps).unwrap());
    }

    #[test]
    fn constructive_agrees_with_brute_force() {
        let caps = Caps::default();
        let s = LpbStructure::new(2, Poset::new(3, &[(0, 2), (1, 2)]).unwrap(), vec![0, 1, 2], vec![1, 2, 1]).unwrap();
        let search = DecompositionSearch::new(&s, &caps).unwrap();
        for k in 0..=3 {
            for c in enumerate_subspaces(3, 2, k, &caps).unwrap() {
                assert!(search.witness(&c).unwrap().is_some());
            }
        }
    }
}
