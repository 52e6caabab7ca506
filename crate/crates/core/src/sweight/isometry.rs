//! Linear isometries of an S-weight: coordinate permutations preserving the
//! cube, maps respecting domination, and the brute-force group they should
//! generate.

use serde::Serialize;

use super::{cube_from_sweight, DeltaCube, SWeightTable};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::{gl_order, ColumnTuples, FqVector, LinearMap, Space, MAX_MAP_N};
use crate::group::{self, Cols, MapSet};
use crate::perm::permutations;

/// All invertible maps preserving `wt` on every vector.
pub fn enumerate_gl_bruteforce(wt: &SWeightTable, caps: &Caps) -> Result<MapSet> {
    group::isometries(wt.space(), wt.values(), caps)
}

/// `T_φ(x)_k = x_{φ(k)}` as a linear map (0-based permutation).
pub fn permutation_map(space: &Space, phi: &[usize]) -> Result<LinearMap> {
    let n = space.n();
    check_permutation(phi, n)?;
    // T_φ(e_j) = e_k with φ(k) = j.
    let mut images = vec![FqVector::zero(space.field(), n); n];
    for (k, &j) in phi.iter().enumerate() {
        images[j] = FqVector::unit(space.field(), n, k);
    }
    LinearMap::from_images(space.field(), &images)
}

pub(crate) fn check_permutation(phi: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if phi.len() != n || phi.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::Dimension(format!("{phi:?} is not a permutation of {n} points")));
    }
    Ok(())
}

/// True iff the vertex map induced by `T_φ` sends arcs to arcs with equal `δ`.
pub fn cube_automorphism_isometry(phi: &[usize], cube: &DeltaCube) -> Result<bool> {
    let n = cube.n();
    check_permutation(phi, n)?;
    let mut inv = vec![0usize; n];
    for (k, &j) in phi.iter().enumerate() {
        inv[j] = k;
    }
    // supp(T_φ x) = φ^{-1}(supp x)
    let image = |u: u32| (0..n).filter(|&i| u & (1 << i) != 0).fold(0u32, |m, i| m | 1 << inv[i]);
    Ok(cube.arcs().all(|(u, i, d)| cube.delta(image(u), inv[i]) == d))
}

fn domination_perturbation(t: &LinearMap, i: usize) -> (u32, FqVector) {
    let lambda = t.matrix().get(i, i);
    let img = t.image_of_unit(i);
    let mut e = FqVector::unit(t.field(), t.n(), i).scale(lambda);
    e = img.sub(&e).expect("same space");
    (lambda, e)
}

/// Conditions (i) and (ii) of domination, checked vector by vector.
///
/// (i) `λ_i = T_ii ≠ 0`. (ii) for every `u` with `u_i ≠ 0`, every arc on a
/// geodesic trail between `supp(u)` and `supp(u + T(e_i) − λ_i e_i)` carries
/// `δ = 0`; with monotone weights that is `wt(S ∩ S') = wt(S ∪ S')`.
pub fn respects_domination(t: &LinearMap, cube: &DeltaCube, caps: &Caps) -> Result<bool> {
    let n = cube.n();
    if t.n() != n {
        return Err(Error::Dimension(format!("{}-dimensional map on a cube of dimension {n}", t.n())));
    }
    let w = cube.support_weights()?;
    let space = Space::new(n, t.field().q(), caps)?;
    for i in 0..n {
        let (lambda, v) = domination_perturbation(t, i);
        if lambda == 0 {
            return Ok(false);
        }
        let v = space.index_of(&v)?;
        for u in 0..space.size() {
            if space.digit(u, i) == 0 {
                continue;
            }
            let s = space.support(u);
            let s2 = space.support(space.add(u, v));
            if w[(s & s2) as usize] != w[(s | s2) as usize] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Precomputed form of the domination test.
///
/// As `u` ranges over vectors with `u_i ≠ 0` the trail endpoints cover every
/// `S ∋ i` and, at worst, cancel all of `S ∩ V`, so condition (ii) for a
/// perturbation with support `V` is `wt(S \ V) = wt(S ∪ V)` for every `S ∋ i`.
#[derive(Debug, Clone)]
pub struct DominationTable {
    n: usize,
    // ok[i << n | V]
    ok: Vec<bool>,
}

impl DominationTable {
    pub fn new(cube: &DeltaCube) -> Result<Self> {
        let n = cube.n();
        let w = cube.support_weights()?;
        let full = (1u32 << n) - 1;
        let mut ok = vec![false; n << n];
        for i in 0..n {
            for v in 0..1u32 << n {
                if v & (1 << i) != 0 {
                    continue;
                }
                let others = full & !(1 << i) & !v;
                // S = {i} ∪ A ∪ B with A ⊆ others, B ⊆ V
                ok[i << n | v as usize] = subsets(others).all(|a| {
                    let s = a | 1 << i;
                    w[s as usize] == w[(s | v) as usize]
                });
            }
        }
        Ok(DominationTable { n, ok })
    }

    pub(crate) fn allows_cols(&self, space: &Space, cols: &Cols) -> bool {
        (0..self.n).all(|i| {
            let img = cols[i] as usize;
            let lambda = space.digit(img, i);
            if lambda == 0 {
                return false;
            }
            let v = space.support(img) & !(1 << i);
            self.ok[i << self.n | v as usize]
        })
    }

    pub fn allows(&self, space: &Space, t: &LinearMap) -> bool {
        self.allows_cols(space, &t.cols(space))
    }
}

fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
        Some(cur)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SemidirectVerdict {
    Contained,
    Equal,
    Violated,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemidirectReport {
    pub verdict: SemidirectVerdict,
    pub q: u32,
    pub gl_order: usize,
    pub generated_order: usize,
    pub domination_maps: usize,
    pub cube_automorphisms: usize,
}

/// Compares the group generated by δ-preserving permutations and
/// domination-respecting maps with the brute-force isometry group.
pub fn check_semidirect_theorem(wt: &SWeightTable, caps: &Caps) -> Result<SemidirectReport> {
    let cube = cube_from_sweight(wt)?;
    let space = wt.space();
    let n = space.n();
    if n > MAX_MAP_N {
        return Err(Error::CapExceeded { what: "map dimension", size: n as u128, cap: MAX_MAP_N as u128 });
    }
    Caps::check("GL(n,q) enumeration", gl_order(n, space.q()), caps.gl)?;
    let gl = enumerate_gl_bruteforce(wt, caps)?;

    let mut gens: Vec<Cols> = Vec::new();
    let mut auts = 0;
    for phi in permutations(n) {
        if cube_automorphism_isometry(&phi, &cube)? {
            auts += 1;
            gens.push(permutation_map(space, &phi)?.cols(space));
        }
    }
    let table = DominationTable::new(&cube)?;
    let mut dominated = 0;
    for tuple in ColumnTuples::new(space.clone()) {
        let mut cols = [0u32; MAX_MAP_N];
        cols[..n].copy_from_slice(&tuple);
        if table.allows_cols(space, &cols) {
            dominated += 1;
            gens.push(cols);
        }
    }
    let generated = group::generated(space, gens);
    let contained = generated.is_subset_of(&gl);
    let equal = contained && generated.len() == gl.len();
    let verdict = if !contained {
        SemidirectVerdict::Violated
    } else if equal {
        SemidirectVerdict::Equal
    } else if space.q() > 2 {
        SemidirectVerdict::Violated
    } else {
        SemidirectVerdict::Contained
    };
    Ok(SemidirectReport {
        verdict,
        q: space.q(),
        gl_order: gl.len(),
        generated_order: generated.len(),
        domination_maps: dominated,
        cube_automorphisms: auts,
    })
}
