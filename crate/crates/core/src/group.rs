//! Finite matrix groups as sets of column-encoded maps.
//!
//! A map on `F_q^n` is encoded as the mixed-radix number whose digit `j` (base
//! `q^n`) is the index of `T(e_j)`. Sets of maps use a bitset over all codes
//! when that fits in memory and a hash set otherwise.

use std::collections::HashSet;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::{gl_order, LinearMap, Space, MAX_MAP_N};

pub(crate) type Cols = [u32; MAX_MAP_N];

const DENSE_LIMIT: u128 = 1 << 28;

#[derive(Debug, Clone)]
enum Backing {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

/// A set of linear maps on one space.
#[derive(Debug, Clone)]
pub struct MapSet {
    space: Space,
    backing: Backing,
    len: usize,
}

impl MapSet {
    pub fn new(space: &Space) -> Self {
        assert!(space.n() <= MAX_MAP_N, "maps need n <= {MAX_MAP_N}");
        let codes = (space.size() as u128).pow(space.n() as u32);
        let backing = if codes <= DENSE_LIMIT {
            Backing::Dense(vec![0; (codes as usize).div_ceil(64).max(1)])
        } else {
            Backing::Sparse(HashSet::new())
        };
        MapSet { space: space.clone(), backing, len: 0 }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub(crate) fn encode(&self, cols: &Cols) -> u64 {
        encode(&self.space, cols)
    }

    pub(crate) fn decode(&self, code: u64) -> Cols {
        decode(&self.space, code)
    }

    pub(crate) fn insert_code(&mut self, code: u64) -> bool {
        let fresh = match &mut self.backing {
            Backing::Dense(bits) => {
                let (w, b) = ((code / 64) as usize, code % 64);
                let fresh = bits[w] & (1 << b) == 0;
                bits[w] |= 1 << b;
                fresh
            }
            Backing::Sparse(set) => set.insert(code),
        };
        if fresh {
            self.len += 1;
        }
        fresh
    }

    pub(crate) fn contains_code(&self, code: u64) -> bool {
        match &self.backing {
            Backing::Dense(bits) => bits[(code / 64) as usize] & (1 << (code % 64)) != 0,
            Backing::Sparse(set) => set.contains(&code),
        }
    }

    pub(crate) fn insert_cols(&mut self, cols: &Cols) -> bool {
        let c = self.encode(cols);
        self.insert_code(c)
    }

    pub(crate) fn contains_cols(&self, cols: &Cols) -> bool {
        self.contains_code(self.encode(cols))
    }

    pub fn insert(&mut self, map: &LinearMap) -> bool {
        let cols = map.cols(&self.space);
        self.insert_cols(&cols)
    }

    pub fn contains(&self, map: &LinearMap) -> bool {
        map.n() == self.space.n() && map.field() == self.space.field() && self.contains_cols(&map.cols(&self.space))
    }

    /// Codes in ascending order.
    pub(crate) fn codes(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.backing {
            Backing::Dense(bits) => Box::new(bits.iter().enumerate().flat_map(|(w, &word)| {
                let mut word = word;
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let b = word.trailing_zeros() as u64;
                    word &= word - 1;
                    Some(w as u64 * 64 + b)
                })
            })),
            Backing::Sparse(set) => {
                let mut v: Vec<u64> = set.iter().copied().collect();
                v.sort_unstable();
                Box::new(v.into_iter())
            }
        }
    }

    pub(crate) fn cols_iter(&self) -> impl Iterator<Item = Cols> + '_ {
        self.codes().map(move |c| self.decode(c))
    }

    /// Members as explicit maps, in code order.
    pub fn iter(&self) -> impl Iterator<Item = LinearMap> + '_ {
        self.cols_iter().map(move |c| LinearMap::from_cols(&self.space, &c[..self.space.n()]))
    }

    pub fn is_subset_of(&self, other: &MapSet) -> bool {
        self.codes().all(|c| other.contains_code(c))
    }

    pub fn same_members(&self, other: &MapSet) -> bool {
        self.len == other.len && self.is_subset_of(other)
    }

    /// Closed under composition (and hence, being finite, a group).
    pub fn is_group(&self) -> bool {
        if !self.contains_cols(&identity(&self.space)) {
            return false;
        }
        let members: Vec<Cols> = self.cols_iter().collect();
        members.iter().all(|a| members.iter().all(|b| self.contains_cols(&compose(&self.space, a, b))))
            && members.iter().all(|a| self.contains_cols(&inverse(&self.space, a)))
    }
}

pub(crate) fn encode(space: &Space, cols: &Cols) -> u64 {
    let base = space.size() as u64;
    cols[..space.n()].iter().rev().fold(0u64, |acc, &c| acc * base + c as u64)
}

pub(crate) fn decode(space: &Space, mut code: u64) -> Cols {
    let base = space.size() as u64;
    let mut cols = [0u32; MAX_MAP_N];
    for c in cols.iter_mut().take(space.n()) {
        *c = (code % base) as u32;
        code /= base;
    }
    cols
}

pub(crate) fn identity(space: &Space) -> Cols {
    let mut cols = [0u32; MAX_MAP_N];
    for (j, c) in cols.iter_mut().enumerate().take(space.n()) {
        *c = space.unit(j) as u32;
    }
    cols
}

/// `a ∘ b`.
pub(crate) fn compose(space: &Space, a: &Cols, b: &Cols) -> Cols {
    let mut out = [0u32; MAX_MAP_N];
    for j in 0..space.n() {
        out[j] = space.apply_cols(a, b[j] as usize) as u32;
    }
    out
}

/// Inverse of an invertible map; images of all vectors are tabulated.
pub(crate) fn inverse(space: &Space, a: &Cols) -> Cols {
    let mut out = [0u32; MAX_MAP_N];
    let mut found = 0;
    for x in 0..space.size() {
        let y = space.apply_cols(a, x);
        if let Some(j) = (0..space.n()).find(|&j| space.unit(j) == y) {
            out[j] = x as u32;
            found += 1;
            if found == space.n() {
                break;
            }
        }
    }
    assert_eq!(found, space.n(), "inverse of a singular map");
    out
}

/// Every invertible map with `weight[T x] == weight[x]` for all `x`.
///
/// Columns are chosen depth-first; after fixing `T(e_0..e_j)` every vector of
/// the span of `e_0..e_j` is checked, so a branch dies as soon as one weight
/// disagrees. The result is exactly the filter of `GL(n, q)` by the predicate.
pub fn isometries(space: &Space, weight: &[u64], caps: &Caps) -> Result<MapSet> {
    if weight.len() != space.size() {
        return Err(Error::Dimension(format!("weight table has {} entries, space has {}", weight.len(), space.size())));
    }
    if space.n() > MAX_MAP_N {
        return Err(Error::CapExceeded { what: "map dimension", size: space.n() as u128, cap: MAX_MAP_N as u128 });
    }
    Caps::check("GL(n,q) enumeration", gl_order(space.n(), space.q()), caps.gl)?;
    let mut out = MapSet::new(space);
    let n = space.n();
    if n == 0 {
        out.insert_cols(&[0; MAX_MAP_N]);
        return Ok(out);
    }
    let mut search = IsoSearch {
        space,
        weight,
        cols: [0; MAX_MAP_N],
        src: vec![vec![0]],
        img: vec![vec![0]],
        in_img: vec![false; space.size()],
    };
    search.in_img[0] = true;
    search.descend(0, &mut out);
    Ok(out)
}

struct IsoSearch<'a> {
    space: &'a Space,
    weight: &'a [u64],
    cols: Cols,
    // src[j][t] is a vector of span(e_0..e_{j-1}); img[j][t] is its image.
    src: Vec<Vec<usize>>,
    img: Vec<Vec<usize>>,
    in_img: Vec<bool>,
}

impl IsoSearch<'_> {
    fn descend(&mut self, j: usize, out: &mut MapSet) {
        let space = self.space;
        let q = space.q();
        let unit = space.unit(j);
        let target = self.weight[unit];
        let mut new_src = Vec::with_capacity(self.src[j].len() * q as usize);
        let mut new_img = Vec::with_capacity(self.src[j].len() * q as usize);
        for c in 0..space.size() {
            if self.in_img[c] || self.weight[c] != target {
                continue;
            }
            new_src.clear();
            new_img.clear();
            let mut ok = true;
            'outer: for a in 1..q {
                let shift = space.scale(a, unit);
                let ac = space.scale(a, c);
                for (&s, &t) in self.src[j].iter().zip(&self.img[j]) {
                    let x = s + shift;
                    let y = space.add(t, ac);
                    if self.weight[x] != self.weight[y] || self.in_img[y] {
                        ok = false;
                        break 'outer;
                    }
                    new_src.push(x);
                    new_img.push(y);
                }
            }
            if !ok {
                continue;
            }
            self.cols[j] = c as u32;
            if j + 1 == space.n() {
                out.insert_cols(&self.cols);
                continue;
            }
            for &y in &new_img {
                self.in_img[y] = true;
            }
            let mut src = self.src[j].clone();
            src.extend_from_slice(&new_src);
            let mut img = self.img[j].clone();
            img.extend_from_slice(&new_img);
            self.src.push(src);
            self.img.push(img);
            self.descend(j + 1, out);
            self.src.pop();
            self.img.pop();
            for &y in &new_img {
                self.in_img[y] = false;
            }
        }
    }
}

/// The subgroup generated by `candidates`.
///
/// Candidates already inside the running subgroup are skipped, so the number of
/// generators actually used is at most `log2 |G|`.
pub(crate) fn generated<I>(space: &Space, candidates: I) -> MapSet
where
    I: IntoIterator<Item = Cols>,
{
    let mut set = MapSet::new(space);
    let id = identity(space);
    set.insert_cols(&id);
    let mut elems = vec![id];
    let mut gens: Vec<Cols> = Vec::new();
    for g in candidates {
        if set.contains_cols(&g) {
            continue;
        }
        gens.push(g);
        let old = elems.len();
        // Existing elements are closed under the old generators; only the new one
        // needs to be applied to them.
        for e in 0..old {
            let p = compose(space, &elems[e], &g);
            if set.insert_cols(&p) {
                elems.push(p);
            }
        }
        let mut k = old;
        while k < elems.len() {
            let e = elems[k];
            for s in &gens {
                let p = compose(space, &e, s);
                if set.insert_cols(&p) {
                    elems.push(p);
                }
            }
            k += 1;
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::invertible_maps;

    fn hamming(space: &Space) -> Vec<u64> {
        (0..space.size()).map(|x| space.support(x).count_ones() as u64).collect()
    }

    #[test]
    fn encode_decode_round_trip() {
        let s = Space::with_default_caps(3, 3).unwrap();
        let cols: Cols = [5, 13, 20, 0, 0, 0, 0, 0];
        assert_eq!(decode(&s, encode(&s, &cols)), cols);
    }

    #[test]
    fn pruned_search_matches_filtered_gl() {
        let caps = Caps::default();
        for (n, q) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let s = Space::new(n, q, &caps).unwrap();
            // chain-like weight: ideal of {0..=max support index}
            let weights: [Vec<u64>; 2] = [
                hamming(&s),
                (0..s.size()).map(|x| 32 - s.support(x).leading_zeros() as u64).collect(),
            ];
            for w in &weights {
                let fast = isometries(&s, w, &caps).unwrap();
                let mut slow = MapSet::new(&s);
                for m in invertible_maps(n, q, &caps).unwrap() {
                    let ok = (0..s.size()).all(|x| {
                        let y = s.index_of(&m.apply(&s.vector(x)).unwrap()).unwrap();
                        w[x] == w[y]
                    });
                    if ok {
                        slow.insert(&m);
                    }
                }
                assert!(fast.same_members(&slow), "n={n} q={q}");
                assert!(fast.is_group());
            }
        }
    }

    #[test]
    fn generated_group_orders() {
        let s = Space::with_default_caps(3, 2).unwrap();
        // A 3-cycle of coordinates and a transposition generate S_3.
        let cyc: Cols = [2, 4, 1, 0, 0, 0, 0, 0];
        let swap: Cols = [2, 1, 4, 0, 0, 0, 0, 0];
        let g = generated(&s, [cyc, swap]);
        assert_eq!(g.len(), 6);
        assert!(g.is_group());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let s = Space::with_default_caps(2, 3).unwrap();
        let caps = Caps::default();
        let all = isometries(&s, &vec![1; s.size()].iter().enumerate().map(|(i, _)| (i != 0) as u64).collect::<Vec<_>>(), &caps).unwrap();
        assert_eq!(all.len(), 48);
        for a in all.cols_iter() {
            assert_eq!(compose(&s, &a, &inverse(&s, &a)), identity(&s));
        }
    }
}
