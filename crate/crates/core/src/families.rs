//! The classical weight families and which decoding criteria they reach.
//!
//! Every family weight depends only on supports, so members are handled as
//! per-support-mask value vectors and expanded to tables on demand.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gf::Space;
use crate::lpb::{LpbStructure, Poset};
use crate::oracles::support_ordering;
use crate::sweight::{SWeightTable, WeightOrdering};

fn table(n: usize, q: u32, caps: &Caps, by_support: &[u64]) -> Result<SWeightTable> {
    SWeightTable::from_support_values(Space::new(n, q, caps)?, by_support)
}

fn check_n(n: usize) -> Result<()> {
    if n > 20 {
        return Err(Error::CapExceeded { what: "family length n", size: n as u128, cap: 20 });
    }
    Ok(())
}

/// `wt_H(v) = |supp(v)|`.
pub fn hamming_weight(n: usize, q: u32, caps: &Caps) -> Result<SWeightTable> {
    check_n(n)?;
    let w: Vec<u64> = (0..1u32 << n).map(|m| m.count_ones() as u64).collect();
    table(n, q, caps, &w)
}

fn poset_support_weights(p: &Poset) -> Vec<u64> {
    (0..1u32 << p.m()).map(|m| p.ideal_generated(m).count_ones() as u64).collect()
}

/// `wt_P(x) = |⟨supp(x)⟩_P|` for a poset on the coordinates.
pub fn poset_weight(p: &Poset, q: u32, caps: &Caps) -> Result<SWeightTable> {
    check_n(p.m())?;
    table(p.m(), q, caps, &poset_support_weights(p))
}

fn unit_labels(p: &Poset, pi: &[usize], q: u32) -> Result<LpbStructure> {
    LpbStructure::new(q, p.clone(), pi.to_vec(), vec![1; p.m()])
}

/// `|⟨supp_π(u)⟩_P|`; `pi[c]` is the 0-based block of coordinate `c`.
pub fn poset_block_weight(p: &Poset, pi: &[usize], q: u32, caps: &Caps) -> Result<SWeightTable> {
    unit_labels(p, pi, q)?.weight_table(caps)
}

/// A covering of `[n]` by nonempty subsets, stored as bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoveringFamily {
    n: usize,
    members: Vec<u32>,
}

impl CoveringFamily {
    /// Members as 0-based index lists.
    pub fn new(n: usize, members: &[Vec<usize>]) -> Result<Self> {
        check_n(n)?;
        let mut masks = Vec::with_capacity(members.len());
        for a in members {
            if a.is_empty() {
                return Err(Error::InvalidStructure("covering members must be nonempty".into()));
            }
            if let Some(&i) = a.iter().find(|&&i| i >= n) {
                return Err(Error::InvalidStructure(format!("member element {} outside [{n}]", i + 1)));
            }
            masks.push(a.iter().fold(0u32, |m, &i| m | 1 << i));
        }
        CoveringFamily::from_masks(n, masks)
    }

    pub(crate) fn from_masks(n: usize, members: Vec<u32>) -> Result<Self> {
        let union = members.iter().fold(0, |a, &m| a | m);
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        if union != full {
            return Err(Error::InvalidStructure(format!("members do not cover [{n}]")));
        }
        Ok(CoveringFamily { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    /// Minimum number of members covering each support mask; exact.
    ///
    /// The lowest uncovered element must be covered by some member containing
    /// it, which gives a recursion over masks in increasing order.
    pub fn min_cover_sizes(&self) -> Vec<u64> {
        let size = 1usize << self.n;
        let mut best = vec![0u64; size];
        for s in 1..size {
            let i = s.trailing_zeros();
            best[s] = self
                .members
                .iter()
                .filter(|&&a| a & (1 << i) != 0)
                .map(|&a| 1 + best[s & !(a as usize)])
                .min()
                .expect("a covering reaches every element");
        }
        best
    }
}

/// `wt_F(x) = min{|A| : A ⊆ F covers supp(x)}`.
pub fn combinatorial_weight(f: &CoveringFamily, q: u32, caps: &Caps) -> Result<SWeightTable> {
    table(f.n, q, caps, &f.min_cover_sizes())
}

/// A directed graph on `[n]` without self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Digraph {
    /// 0-based arcs `u → v`; self-loops and repeats are dropped.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        check_n(n)?;
        if let Some(&(u, v)) = arcs.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidStructure(format!("arc {} → {} outside [{n}]", u + 1, v + 1)));
        }
        let mut arcs: Vec<(usize, usize)> = arcs.iter().copied().filter(|(u, v)| u != v).collect();
        arcs.sort_unstable();
        arcs.dedup();
        Ok(Digraph { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// `reach[u]`: vertices reachable from `u`, including `u`.
    pub fn reach(&self) -> Vec<u32> {
        let mut reach: Vec<u32> = (0..self.n).map(|u| 1 << u).collect();
        for &(u, v) in &self.arcs {
            reach[u] |= 1 << v;
        }
        for k in 0..self.n {
            for u in 0..self.n {
                if reach[u] & (1 << k) != 0 {
                    reach[u] |= reach[k];
                }
            }
        }
        reach
    }

    /// `⟨X⟩_G`: `X` plus every vertex with a directed path into `X`.
    pub fn closure(&self, x: u32) -> u32 {
        let reach = self.reach();
        (0..self.n).filter(|&u| reach[u] & x != 0).fold(0, |a, u| a | 1 << u)
    }

    fn support_weights(&self) -> Vec<u64> {
        let reach = self.reach();
        (0..1u32 << self.n)
            .map(|x| (0..self.n).filter(|&u| reach[u] & x != 0).count() as u64)
            .collect()
    }
}

/// `wt_D(x) = |⟨supp(x)⟩_G|`.
pub fn digraph_weight(g: &Digraph, q: u32, caps: &Caps) -> Result<SWeightTable> {
    table(g.n, q, caps, &g.support_weights())
}

/// Contracts strongly connected components into blocks labeled by their size.
///
/// Components are numbered by smallest vertex; component `i` lies below `j`
/// when `i` reaches `j`, so `wt_{(P,π,L)} = wt_D`.
pub fn digraph_to_lpb(g: &Digraph, q: u32) -> Result<LpbStructure> {
    let reach = g.reach();
    let mut comp = vec![usize::MAX; g.n];
    let mut reps = Vec::new();
    for u in 0..g.n {
        if comp[u] != usize::MAX {
            continue;
        }
        let id = reps.len();
        for v in u..g.n {
            if reach[u] & (1 << v) != 0 && reach[v] & (1 << u) != 0 {
                comp[v] = id;
            }
        }
        reps.push(u);
    }
    let m = reps.len();
    let mut rel = Vec::new();
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            if i != j && reach[a] & (1 << b) != 0 {
                rel.push((i, j));
            }
        }
    }
    let labels = (0..m).map(|i| comp.iter().filter(|&&c| c == i).count() as u64).collect();
    LpbStructure::new(q, Poset::new(m, &rel)?, comp, labels)
}

/// The five families of the criterion table, in column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Hamming,
    Poset,
    PosetBlock,
    Combinatorial,
    Digraph,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Hamming, Family::Poset, Family::PosetBlock, Family::Combinatorial, Family::Digraph];

    /// Column heading: `wt_H`, `wt_P`, `wt_PB`, `wt_C`, `wt_D`.
    pub fn symbol(self) -> &'static str {
        match self {
            Family::Hamming => "wt_H",
            Family::Poset => "wt_P",
            Family::PosetBlock => "wt_PB",
            Family::Combinatorial => "wt_C",
            Family::Digraph => "wt_D",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// One parameter choice of a family, 0-based internally; JSON is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyMember {
    Hamming { n: usize },
    Poset(Poset),
    PosetBlock { poset: Poset, pi: Vec<usize> },
    Combinatorial(CoveringFamily),
    Digraph(Digraph),
}

impl FamilyMember {
    pub fn family(&self) -> Family {
        match self {
            FamilyMember::Hamming { .. } => Family::Hamming,
            FamilyMember::Poset(_) => Family::Poset,
            FamilyMember::PosetBlock { .. } => Family::PosetBlock,
            FamilyMember::Combinatorial(_) => Family::Combinatorial,
            FamilyMember::Digraph(_) => Family::Digraph,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            FamilyMember::Hamming { n } => *n,
            FamilyMember::Poset(p) => p.m(),
            FamilyMember::PosetBlock { pi, .. } => pi.len(),
            FamilyMember::Combinatorial(f) => f.n,
            FamilyMember::Digraph(g) => g.n,
        }
    }

    /// Weight of each support mask.
    pub fn support_weights(&self) -> Vec<u64> {
        match self {
            FamilyMember::Hamming { n } => (0..1u32 << n).map(|m| m.count_ones() as u64).collect(),
            FamilyMember::Poset(p) => poset_support_weights(p),
            FamilyMember::PosetBlock { poset, pi } => {
                let s = unit_labels(poset, pi, 2).expect("enumerated block maps are valid");
                (0..1u32 << pi.len()).map(|m| s.weight_of_support(m)).collect()
            }
            FamilyMember::Combinatorial(f) => f.min_cover_sizes(),
            FamilyMember::Digraph(g) => g.support_weights(),
        }
    }

    pub fn weight_table(&self, q: u32, caps: &Caps) -> Result<SWeightTable> {
        table(self.n(), q, caps, &self.support_weights())
    }
}

impl fmt::Display for FamilyMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        match self {
            FamilyMember::Hamming { n } => write!(f, "wt_H on [{n}]"),
            FamilyMember::Poset(p) => {
                let rel: Vec<String> = p.cover_relations().iter().map(|(a, b)| format!("{}<{}", a + 1, b + 1)).collect();
                write!(f, "wt_P {{{}}} on [{}]", rel.join(", "), p.m())
            }
            FamilyMember::PosetBlock { poset, pi } => {
                let rel: Vec<String> =
                    poset.cover_relations().iter().map(|(a, b)| format!("{}<{}", a + 1, b + 1)).collect();
                write!(f, "wt_PB {{{}}} pi=[{}]", rel.join(", "), one(pi))
            }
            FamilyMember::Combinatorial(c) => {
                let sets: Vec<String> = c
                    .members
                    .iter()
                    .map(|&m| format!("{{{}}}", one(&(0..c.n).filter(|&i| m & (1 << i) != 0).collect::<Vec<_>>())))
                    .collect();
                write!(f, "wt_C {{{}}}", sets.join(", "))
            }
            FamilyMember::Digraph(g) => {
                let arcs: Vec<String> = g.arcs.iter().map(|(u, v)| format!("{}->{}", u + 1, v + 1)).collect();
                write!(f, "wt_D {{{}}} on [{}]", arcs.join(", "), g.n)
            }
        }
    }
}

/// Every member of `family` on `[n]`, in a fixed order.
pub fn family_members(family: Family, n: usize, caps: &Caps) -> Result<Vec<FamilyMember>> {
    if n > caps.family_n {
        return Err(Error::CapExceeded { what: "family parameter search n", size: n as u128, cap: caps.family_n as u128 });
    }
    Ok(match family {
        Family::Hamming => vec![FamilyMember::Hamming { n }],
        Family::Poset => Poset::all(n)?.into_iter().map(FamilyMember::Poset).collect(),
        Family::PosetBlock => {
            let mut out = Vec::new();
            for m in 1..=n {
                let maps = surjections(n, m);
                for p in Poset::all(m)? {
                    for pi in &maps {
                        out.push(FamilyMember::PosetBlock { poset: p.clone(), pi: pi.clone() });
                    }
                }
            }
            if n == 0 {
                out.push(FamilyMember::PosetBlock { poset: Poset::antichain(0), pi: Vec::new() });
            }
            out
        }
        Family::Combinatorial => {
            let subsets = (1u32 << n) - 1;
            (0u64..1 << subsets)
                .filter_map(|pick| {
                    let members: Vec<u32> = (0..subsets).filter(|b| pick & (1 << b) != 0).map(|b| b + 1).collect();
                    CoveringFamily::from_masks(n, members).ok()
                })
                .map(FamilyMember::Combinatorial)
                .collect()
        }
        Family::Digraph => {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v).collect();
            (0u64..1 << pairs.len())
                .map(|pick| {
                    let arcs: Vec<(usize, usize)> =
                        pairs.iter().enumerate().filter(|(b, _)| pick & (1 << b) != 0).map(|(_, &a)| a).collect();
                    FamilyMember::Digraph(Digraph { n, arcs })
                })
                .collect()
        }
    })
}

fn surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut x| {
            (0..n)
                .map(|_| {
                    let d = x % m;
                    x /= m;
                    d
                })
                .collect::<Vec<usize>>()
        })
        .filter(|pi| (0..m).all(|b| pi.contains(&b)))
        .collect()
}

type ClassSet = Arc<HashSet<WeightOrdering>>;

/// The support orderings reached by a family on `[n]`, memoized per process.
pub fn family_classes(family: Family, n: usize, caps: &Caps) -> Result<ClassSet> {
    static MEMO: OnceLock<Mutex<HashMap<(Family, usize), ClassSet>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = memo.lock().expect("memo lock").get(&(family, n)) {
        return Ok(c.clone());
    }
    let set: HashSet<WeightOrdering> = family_members(family, n, caps)?
        .iter()
        .map(|m| WeightOrdering::from_values(&m.support_weights()))
        .collect();
    let set = Arc::new(set);
    memo.lock().expect("memo lock").insert((family, n), set.clone());
    Ok(set)
}

/// Which families contain a weight equivalent to `wt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFlags {
    pub hamming: bool,
    pub poset: bool,
    pub poset_block: bool,
    pub combinatorial: bool,
    pub digraph: bool,
}

impl FamilyFlags {
    pub fn get(&self, f: Family) -> bool {
        match f {
            Family::Hamming => self.hamming,
            Family::Poset => self.poset,
            Family::PosetBlock => self.poset_block,
            Family::Combinatorial => self.combinatorial,
            Family::Digraph => self.digraph,
        }
    }

    pub fn as_array(&self) -> [bool; 5] {
        Family::ALL.map(|f| self.get(f))
    }

    pub fn from_array(a: [bool; 5]) -> Self {
        FamilyFlags { hamming: a[0], poset: a[1], poset_block: a[2], combinatorial: a[3], digraph: a[4] }
    }
}

/// Exhaustive search over each family's parameters on `[n]`.
pub fn classify_criterion(wt: &SWeightTable, caps: &Caps) -> Result<FamilyFlags> {
    let ord = support_ordering(wt)?;
    let mut flags = [false; 5];
    for (k, f) in Family::ALL.into_iter().enumerate() {
        flags[k] = family_classes(f, wt.n(), caps)?.contains(&ord);
    }
    Ok(FamilyFlags::from_array(flags))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoveringJson {
    Members(Vec<Vec<usize>>),
    Full { n: usize, members: Vec<Vec<usize>> },
}

#[derive(Serialize)]
struct CoveringOut {
    n: usize,
    members: Vec<Vec<usize>>,
}

fn one_based(v: &[usize], what: &str) -> Result<Vec<usize>> {
    v.iter().map(|&i| i.checked_sub(1).ok_or_else(|| Error::Parse(format!("{what} indices are 1-based")))).collect()
}

/// JSON: `[[1,2],[2,3]]` or `{"n":3,"members":[[1,2],[2,3]]}`.
impl<'de> Deserialize<'de> for CoveringFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (n, members) = match CoveringJson::deserialize(d)? {
            CoveringJson::Members(m) => (m.iter().flatten().copied().max().unwrap_or(0), m),
            CoveringJson::Full { n, members } => (n, members),
        };
        let conv = || -> Result<CoveringFamily> {
            let ms = members.iter().map(|a| one_based(a, "covering")).collect::<Result<Vec<_>>>()?;
            CoveringFamily::new(n, &ms)
        };
        conv().map_err(serde::de::Error::custom)
    }
}

impl Serialize for CoveringFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoveringOut {
            n: self.n,
            members: self
                .members
                .iter()
                .map(|&m| (0..self.n).filter(|&i| m & (1 << i) != 0).map(|i| i + 1).collect())
                .collect(),
        }
        .serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DigraphJson {
    Arcs(Vec<[usize; 2]>),
    Full { n: usize, arcs: Vec<[usize; 2]> },
}

#[derive(Serialize)]
struct DigraphOut {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

/// JSON: `[[1,2],[2,1]]` or `{"n":3,"arcs":[[1,2]]}`.
impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (n, arcs) = match DigraphJson::deserialize(d)? {
            DigraphJson::Arcs(a) => (a.iter().flatten().copied().max().unwrap_or(0), a),
            DigraphJson::Full { n, arcs } => (n, arcs),
        };
        let conv = || -> Result<Digraph> {
            let arcs = arcs
                .iter()
                .map(|a| one_based(a, "digraph").map(|v| (v[0], v[1])))
                .collect::<Result<Vec<_>>>()?;
            Digraph::new(n, &arcs)
        };
        conv().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DigraphOut { n: self.n, arcs: self.arcs.iter().map(|&(u, v)| [u + 1, v + 1]).collect() }.serialize(s)
    }
}

impl Serialize for FamilyMember {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "family", rename_all = "snake_case")]
        enum Out<'a> {
            Hamming { n: usize },
            Poset { poset: &'a Poset },
            PosetBlock { poset: &'a Poset, pi: Vec<usize> },
            Combinatorial { covering: &'a CoveringFamily },
            Digraph { digraph: &'a Digraph },
        }
        match self {
            FamilyMember::Hamming { n } => Out::Hamming { n: *n },
            FamilyMember::Poset(p) => Out::Poset { poset: p },
            FamilyMember::PosetBlock { poset, pi } => {
                Out::PosetBlock { poset, pi: pi.iter().map(|b| b + 1).collect() }
            }
            FamilyMember::Combinatorial(c) => Out::Combinatorial { covering: c },
            FamilyMember::Digraph(g) => Out::Digraph { digraph: g },
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FqVector;
    use crate::sweight::{are_equivalent, validate_sweight};

    fn caps() -> Caps {
        Caps::default()
    }

    fn w(t: &SWeightTable, s: &str) -> u64 {
        t.weight(&FqVector::parse(t.q(), s).unwrap()).unwrap()
    }

    #[test]
    fn hamming_examples() {
        let h = hamming_weight(4, 2, &caps()).unwrap();
        assert_eq!(w(&h, "1011"), 3);
        assert_eq!(w(&h, "0000"), 0);
        assert_eq!(w(&hamming_weight(2, 3, &caps()).unwrap(), "21"), 2);
    }

    #[test]
    fn poset_examples() {
        let p = poset_weight(&Poset::chain(2), 2, &caps()).unwrap();
        assert_eq!((w(&p, "10"), w(&p, "01"), w(&p, "11"), w(&p, "00")), (1, 2, 2, 0));
    }

    #[test]
    fn poset_block_examples() {
        let pb = poset_block_weight(&Poset::antichain(1), &[0, 0], 2, &caps()).unwrap();
        assert_eq!((w(&pb, "10"), w(&pb, "01"), w(&pb, "11")), (1, 1, 1));
        let chain = poset_block_weight(&Poset::chain(2), &[0, 1], 2, &caps()).unwrap();
        assert_eq!(w(&chain, "01"), 2);
        assert!(poset_block_weight(&Poset::antichain(2), &[0, 0], 2, &caps()).is_err());
    }

    #[test]
    fn combinatorial_examples() {
        let single = CoveringFamily::new(2, &[vec![0, 1]]).unwrap();
        let c = combinatorial_weight(&single, 2, &caps()).unwrap();
        assert_eq!((w(&c, "10"), w(&c, "01"), w(&c, "11")), (1, 1, 1));
        let f = CoveringFamily::new(3, &[vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(w(&combinatorial_weight(&f, 2, &caps()).unwrap(), "101"), 2);
        assert!(CoveringFamily::new(3, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn min_cover_matches_subset_enumeration() {
        for m in family_members(Family::Combinatorial, 3, &caps()).unwrap() {
            let FamilyMember::Combinatorial(f) = m else { unreachable!() };
            let sizes = f.min_cover_sizes();
            for s in 0..8u32 {
                let brute = (0u32..1 << f.members.len())
                    .filter(|pick| {
                        let u = (0..f.members.len()).filter(|b| pick & (1 << b) != 0).fold(0, |a, b| a | f.members[b]);
                        u & s == s
                    })
                    .map(|pick| pick.count_ones() as u64)
                    .min()
                    .unwrap();
                assert_eq!(sizes[s as usize], brute);
            }
        }
    }

    #[test]
    fn digraph_examples() {
        let cycle = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        let d = digraph_weight(&cycle, 2, &caps()).unwrap();
        assert_eq!((w(&d, "10"), w(&d, "01"), w(&d, "11")), (2, 2, 2));
        let arrow = Digraph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(w(&digraph_weight(&arrow, 2, &caps()).unwrap(), "01"), 2);
        assert_eq!(w(&digraph_weight(&arrow, 2, &caps()).unwrap(), "10"), 1);
        assert!(Digraph::new(2, &[(0, 0)]).unwrap().arcs().is_empty());
    }

    #[test]
    fn digraph_to_lpb_examples() {
        let s = digraph_to_lpb(&Digraph::new(2, &[(0, 1), (1, 0)]).unwrap(), 2).unwrap();
        assert_eq!((s.m(), s.block_sizes(), s.labels().to_vec()), (1, vec![2], vec![2]));
        let s = digraph_to_lpb(&Digraph::new(3, &[]).unwrap(), 2).unwrap();
        assert_eq!(s, LpbStructure::hamming(2, 3).unwrap());
        let s = digraph_to_lpb(&Digraph::new(2, &[(0, 1)]).unwrap(), 2).unwrap();
        assert_eq!(s.poset(), &Poset::chain(2));
        assert_eq!(s.labels(), &[1, 1]);
    }

    #[test]
    fn digraph_to_lpb_agrees_pointwise() {
        for n in 0..=3 {
            for m in family_members(Family::Digraph, n, &caps()).unwrap() {
                let FamilyMember::Digraph(g) = m else { unreachable!() };
                let s = digraph_to_lpb(&g, 2).unwrap();
                let direct = g.support_weights();
                for m in 0..1u32 << n {
                    assert_eq!(s.weight_of_support(m), direct[m as usize], "{g:?}");
                }
            }
        }
    }

    #[test]
    fn families_agree_on_hamming() {
        for q in [2, 3] {
            for n in 0..=4 {
                let h = hamming_weight(n, q, &caps()).unwrap();
                let singletons: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
                let others = [
                    poset_weight(&Poset::antichain(n), q, &caps()).unwrap(),
                    poset_block_weight(&Poset::antichain(n), &(0..n).collect::<Vec<_>>(), q, &caps()).unwrap(),
                    combinatorial_weight(&CoveringFamily::new(n, &singletons).unwrap(), q, &caps()).unwrap(),
                    digraph_weight(&Digraph::new(n, &[]).unwrap(), q, &caps()).unwrap(),
                ];
                for o in &others {
                    assert_eq!(o.values(), h.values());
                }
            }
        }
    }

    #[test]
    fn every_family_member_is_an_sweight() {
        for f in Family::ALL {
            for n in 0..=3 {
                for m in family_members(f, n, &caps()).unwrap() {
                    assert!(validate_sweight(&m.weight_table(2, &caps()).unwrap()).valid, "{m}");
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = caps();
        let ham = hamming_weight(2, 2, &c).unwrap();
        assert_eq!(classify_criterion(&ham, &c).unwrap().as_array(), [true; 5]);
        let flat = SWeightTable::from_support_values(Space::new(2, 2, &c).unwrap(), &[0, 1, 1, 1]).unwrap();
        assert_eq!(classify_criterion(&flat, &c).unwrap().as_array(), [false, false, true, true, true]);
        let chain = SWeightTable::from_support_values(Space::new(2, 2, &c).unwrap(), &[0, 1, 2, 3]).unwrap();
        assert_eq!(classify_criterion(&chain, &c).unwrap().as_array(), [false; 5]);
    }

    #[test]
    fn example_one_weights_are_equivalent() {
        let c = caps();
        let pb = poset_block_weight(&Poset::antichain(1), &[0, 0], 2, &c).unwrap();
        let d = digraph_weight(&Digraph::new(2, &[(0, 1), (1, 0)]).unwrap(), 2, &c).unwrap();
        assert!(are_equivalent(&pb, &d).unwrap());
        assert_ne!(pb.values(), d.values());
    }

    #[test]
    fn member_counts() {
        let c = caps();
        assert_eq!(family_members(Family::Poset, 3, &c).unwrap().len(), 19);
        assert_eq!(family_members(Family::Digraph, 3, &c).unwrap().len(), 64);
        // coverings of [2] by nonempty subsets of {1},{2},{1,2}
        assert_eq!(family_members(Family::Combinatorial, 2, &c).unwrap().len(), 5);
        assert!(family_members(Family::Poset, 5, &c).is_err());
    }

    #[test]
    fn json_forms() {
        let f: CoveringFamily = serde_json::from_str("[[1,2],[2,3]]").unwrap();
        assert_eq!(f.n(), 3);
        let back: CoveringFamily = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        let g: Digraph = serde_json::from_str(r#"{"n":3,"arcs":[[1,2]]}"#).unwrap();
        assert_eq!((g.n(), g.arcs()), (3, &[(0, 1)][..]));
        let g2: Digraph = serde_json::from_str("[[1,2],[2,1]]").unwrap();
        assert_eq!(g2.n(), 2);
        assert!(serde_json::from_str::<Digraph>("[[0,1]]").is_err());
    }
}
