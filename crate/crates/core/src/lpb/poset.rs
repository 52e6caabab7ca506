use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set for a poset; elements are bits of a `u32`.
pub const MAX_POSET: usize = 32;

/// A partial order on `{0, …, m−1}`, stored transitively closed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poset {
    m: usize,
    // below[a] = { b : b ⪯ a }, including a.
    below: Vec<u32>,
}

/// Heights grouped into levels; `levels[0]` is Γ_1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelPartition {
    pub heights: Vec<usize>,
    pub levels: Vec<Vec<usize>>,
}

impl LevelPartition {
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Bitmask of level `i` (0-based, i.e. Γ_{i+1}).
    pub fn mask(&self, i: usize) -> u32 {
        self.levels[i].iter().fold(0, |m, &a| m | 1 << a)
    }
}

impl Poset {
    /// Builds the order generated by `a ⪯ b` for each pair; closes transitively.
    pub fn new(m: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if m > MAX_POSET {
            return Err(Error::CapExceeded { what: "poset size", size: m as u128, cap: MAX_POSET as u128 });
        }
        let mut below: Vec<u32> = (0..m).map(|a| 1 << a).collect();
        for &(a, b) in relations {
            if a >= m || b >= m {
                return Err(Error::InvalidStructure(format!("relation ({}, {}) outside [{m}]", a + 1, b + 1)));
            }
            below[b] |= 1 << a;
        }
        // Warshall on bitmasks
        for k in 0..m {
            for a in 0..m {
                if below[a] & (1 << k) != 0 {
                    below[a] |= below[k];
                }
            }
        }
        for a in 0..m {
            for b in 0..m {
                if a != b && below[a] & (1 << b) != 0 && below[b] & (1 << a) != 0 {
                    return Err(Error::InvalidStructure(format!(
                        "relations force {} ⪯ {} ⪯ {}; not antisymmetric",
                        a + 1,
                        b + 1,
                        a + 1
                    )));
                }
            }
        }
        Ok(Poset { m, below })
    }

    pub fn antichain(m: usize) -> Self {
        Poset::new(m, &[]).expect("antichain")
    }

    /// `0 ⪯ 1 ⪯ … ⪯ m−1`.
    pub fn chain(m: usize) -> Self {
        let rel: Vec<(usize, usize)> = (1..m).map(|b| (b - 1, b)).collect();
        Poset::new(m, &rel).expect("chain")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b] & (1 << a) != 0
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// `{ b : b ⪯ a }` as a mask.
    #[inline]
    pub fn down_set(&self, a: usize) -> u32 {
        self.below[a]
    }

    pub fn full_mask(&self) -> u32 {
        if self.m == 32 {
            u32::MAX
        } else {
            (1u32 << self.m) - 1
        }
    }

    /// `⟨A⟩_P`: the smallest ideal containing `A`.
    pub fn ideal_generated(&self, a: u32) -> u32 {
        let mut out = 0;
        let mut rest = a;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= self.below[i];
            rest &= rest - 1;
        }
        out
    }

    pub fn is_ideal(&self, a: u32) -> bool {
        self.ideal_generated(a) == a
    }

    /// `M_P(A)`: elements of `A` with nothing of `A` strictly above them.
    pub fn maximal_elements(&self, a: u32) -> u32 {
        (0..self.m)
            .filter(|&x| a & (1 << x) != 0)
            .filter(|&x| (0..self.m).all(|y| a & (1 << y) == 0 || !self.lt(x, y)))
            .fold(0, |m, x| m | 1 << x)
    }

    /// Longest-chain heights and the levels Γ_i.
    pub fn heights_and_levels(&self) -> LevelPartition {
        let mut heights = vec![0usize; self.m];
        // A topological order: fewer elements below comes first.
        let mut order: Vec<usize> = (0..self.m).collect();
        order.sort_by_key(|&a| self.below[a].count_ones());
        for &a in &order {
            heights[a] = 1 + (0..self.m).filter(|&b| self.lt(b, a)).map(|b| heights[b]).max().unwrap_or(0);
        }
        let h = heights.iter().copied().max().unwrap_or(0);
        let mut levels = vec![Vec::new(); h];
        for (a, &ha) in heights.iter().enumerate() {
            levels[ha - 1].push(a);
        }
        LevelPartition { heights, levels }
    }

    /// Elements on different levels are always comparable.
    pub fn is_hierarchical(&self) -> bool {
        let lp = self.heights_and_levels();
        (0..self.m).all(|a| (0..self.m).all(|b| lp.heights[a] >= lp.heights[b] || self.lt(a, b)))
    }

    /// The opposite order.
    pub fn dual(&self) -> Poset {
        let mut below = vec![0u32; self.m];
        for a in 0..self.m {
            for b in 0..self.m {
                if self.leq(a, b) {
                    below[a] |= 1 << b;
                }
            }
        }
        Poset { m: self.m, below }
    }

    /// All pairs `a ⪯ b`, `a ≠ b`, in lexicographic order.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .flat_map(|a| (0..self.m).map(move |b| (a, b)))
            .filter(|&(a, b)| self.lt(a, b))
            .collect()
    }

    /// The covering pairs of the Hasse diagram.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        self.relations()
            .into_iter()
            .filter(|&(a, b)| !(0..self.m).any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    /// `φ` preserves the order in both directions.
    pub fn is_automorphism(&self, phi: &[usize]) -> bool {
        phi.len() == self.m
            && (0..self.m).all(|a| (0..self.m).all(|b| self.leq(a, b) == self.leq(phi[a], phi[b])))
    }

    /// All labeled posets on `{0, …, m−1}`, deterministic order.
    pub fn all(m: usize) -> Result<Vec<Poset>> {
        if m > 5 {
            return Err(Error::CapExceeded { what: "poset enumeration size", size: m as u128, cap: 5 });
        }
        let pairs: Vec<(usize, usize)> =
            (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
        let mut out = Vec::new();
        'outer: for bits in 0u64..1 << pairs.len() {
            let mut below: Vec<u32> = (0..m).map(|a| 1 << a).collect();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                if bits & (1 << k) != 0 {
                    below[b] |= 1 << a;
                }
            }
            for b in 0..m {
                for a in 0..m {
                    if a == b || below[b] & (1 << a) == 0 {
                        continue;
                    }
                    // antisymmetric and transitive
                    if below[a] & (1 << b) != 0 || below[a] & !below[b] != 0 {
                        continue 'outer;
                    }
                }
            }
            out.push(Poset { m, below });
        }
        Ok(out)
    }
}

/// JSON form: `{"m": 3, "relations": [[1, 2]]}` with 1-based elements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetJson {
    pub m: usize,
    #[serde(default)]
    pub relations: Vec<[usize; 2]>,
}

impl TryFrom<&PosetJson> for Poset {
    type Error = Error;
    fn try_from(j: &PosetJson) -> Result<Poset> {
        let rel = j
            .relations
            .iter()
            .map(|&[a, b]| {
                if a == 0 || b == 0 {
                    Err(Error::Parse("poset elements are 1-based".into()))
                } else {
                    Ok((a - 1, b - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Poset::new(j.m, &rel)
    }
}

impl From<&Poset> for PosetJson {
    fn from(p: &Poset) -> Self {
        PosetJson { m: p.m, relations: p.cover_relations().into_iter().map(|(a, b)| [a + 1, b + 1]).collect() }
    }
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PosetJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PosetJson::deserialize(d)?;
        Poset::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(elems: &[usize]) -> u32 {
        elems.iter().fold(0, |m, &a| m | 1 << a)
    }

    // 1⪯3, 2⪯3 (0-based: 0⪯2, 1⪯2)
    fn v_poset() -> Poset {
        Poset::new(3, &[(0, 2), (1, 2)]).unwrap()
    }

    // chain 1⪯2 plus the isolated point 3
    fn chain_plus_point() -> Poset {
        Poset::new(3, &[(0, 1)]).unwrap()
    }

    #[test]
    fn ideal_examples() {
        assert_eq!(Poset::antichain(3).ideal_generated(mask(&[1])), mask(&[1]));
        assert_eq!(Poset::chain(3).ideal_generated(mask(&[2])), mask(&[0, 1, 2]));
        assert_eq!(v_poset().ideal_generated(mask(&[0, 1])), mask(&[0, 1]));
    }

    #[test]
    fn maximal_examples() {
        assert_eq!(Poset::chain(3).maximal_elements(mask(&[0, 1, 2])), mask(&[2]));
        assert_eq!(Poset::antichain(3).maximal_elements(0b111), 0b111);
        assert_eq!(v_poset().maximal_elements(mask(&[0, 1])), mask(&[0, 1]));
    }

    #[test]
    fn level_examples() {
        let lp = Poset::chain(3).heights_and_levels();
        assert_eq!(lp.levels, vec![vec![0], vec![1], vec![2]]);
        let lp = Poset::antichain(3).heights_and_levels();
        assert_eq!(lp.levels, vec![vec![0, 1, 2]]);
        let lp = v_poset().heights_and_levels();
        assert_eq!(lp.levels, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn hierarchical_examples() {
        assert!(v_poset().is_hierarchical());
        let p = chain_plus_point();
        assert_eq!(p.heights_and_levels().levels, vec![vec![0, 2], vec![1]]);
        assert!(!p.is_hierarchical());
        assert!(Poset::antichain(3).is_hierarchical());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Poset::antichain(3).dual(), Poset::antichain(3));
        let d = Poset::chain(3).dual();
        assert!(d.leq(2, 1) && d.leq(1, 0) && !d.leq(0, 1));
        let l = v_poset().dual();
        assert!(l.leq(2, 0) && l.leq(2, 1) && !l.leq(0, 1));
    }

    #[test]
    fn rejects_cycles() {
        assert!(Poset::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|m| Poset::all(m).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 19, 219]);
    }

    #[test]
    fn ideal_properties_exhaustive() {
        for m in 0..=4 {
            for p in Poset::all(m).unwrap() {
                for a in 0..1u32 << m {
                    let i = p.ideal_generated(a);
                    assert_eq!(p.ideal_generated(i), i);
                    assert!(p.is_ideal(i) && i & a == a);
                    if p.is_ideal(a) {
                        assert_eq!(p.ideal_generated(p.maximal_elements(a)), a);
                    }
                }
                assert_eq!(p.dual().dual(), p);
            }
        }
    }

    #[test]
    fn json_round_trip_closes_relations() {
        let p: Poset = serde_json::from_str(r#"{"m":3,"relations":[[1,2],[2,3]]}"#).unwrap();
        assert!(p.leq(0, 2));
        let back: Poset = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
