//! Conditional sums `wt_1 ⊕_C wt_2` and what they can reach.
//!
//! A condition respects support, so under the `⊆` reading it is an upward-closed
//! set of support masks; it is stored that way.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::families::{family_members, Family, FamilyMember};
use crate::gf::Space;
use crate::oracles::enumerate_criteria;
use crate::sweight::{are_equivalent, SWeightTable, WeightOrdering};

fn mask_string(n: usize, m: u32) -> String {
    (0..n).map(|i| if m & (1 << i) != 0 { '1' } else { '0' }).collect()
}

/// A support-respecting condition on `F_q^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportCondition {
    n: usize,
    holds: Vec<bool>,
}

impl SupportCondition {
    /// From the support masks where the condition holds; must be upward closed.
    pub fn from_support_masks(n: usize, masks: &[u32]) -> Result<Self> {
        if n > 20 {
            return Err(Error::CapExceeded { what: "condition length n", size: n as u128, cap: 20 });
        }
        let mut holds = vec![false; 1 << n];
        for &m in masks {
            let slot = holds
                .get_mut(m as usize)
                .ok_or_else(|| Error::ConditionNotSupportRespecting(format!("mask {m:#b} outside n = {n}")))?;
            *slot = true;
        }
        Self::from_flags(n, holds)
    }

    fn from_flags(n: usize, holds: Vec<bool>) -> Result<Self> {
        for u in 0..holds.len() {
            if !holds[u] {
                continue;
            }
            if let Some(i) = (0..n).find(|&i| !holds[u | 1 << i]) {
                return Err(Error::ConditionNotSupportRespecting(format!(
                    "holds on support {} but not on {}",
                    mask_string(n, u as u32),
                    mask_string(n, (u | 1 << i) as u32)
                )));
            }
        }
        Ok(SupportCondition { n, holds })
    }

    /// Materializes a predicate on vector indices and checks it respects support.
    pub fn from_vector_predicate(space: &Space, f: impl Fn(usize) -> bool) -> Result<Self> {
        let n = space.n();
        let mut by_support: Vec<Option<bool>> = vec![None; 1 << n];
        for x in 0..space.size() {
            let s = space.support(x) as usize;
            let b = f(x);
            match by_support[s] {
                Some(prev) if prev != b => {
                    return Err(Error::ConditionNotSupportRespecting(format!(
                        "differs between two vectors with support {}",
                        mask_string(n, s as u32)
                    )))
                }
                _ => by_support[s] = Some(b),
            }
        }
        Self::from_flags(n, by_support.into_iter().map(|b| b.unwrap_or(false)).collect())
    }

    pub fn never(n: usize) -> Self {
        SupportCondition { n, holds: vec![false; 1 << n] }
    }

    pub fn always(n: usize) -> Self {
        SupportCondition { n, holds: vec![true; 1 << n] }
    }

    /// `[wt_H(u) ≥ k]`.
    pub fn hamming_at_least(n: usize, k: u64) -> Self {
        SupportCondition { n, holds: (0..1u32 << n).map(|m| m.count_ones() as u64 >= k).collect() }
    }

    /// `[wt(u) ≥ k]` for a support-determined weight.
    pub fn weight_at_least(wt: &SWeightTable, k: u64) -> Result<Self> {
        let by_support = wt.support_values().ok_or(Error::NotSupportDetermined)?;
        Self::from_flags(wt.n(), by_support.iter().map(|&w| w >= k).collect())
    }

    /// Every upward-closed family of supports on `[n]`, `n ≤ 4`.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        if n > 4 {
            return Err(Error::CapExceeded { what: "upward-closed condition enumeration n", size: n as u128, cap: 4 });
        }
        let size = 1usize << n;
        Ok((0u64..1 << size)
            .filter_map(|pick| Self::from_flags(n, (0..size).map(|m| pick & (1 << m) != 0).collect()).ok())
            .collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn holds_on_support(&self, mask: u32) -> bool {
        self.holds[mask as usize]
    }

    pub fn holds(&self, space: &Space, x: usize) -> bool {
        self.holds[space.support(x) as usize]
    }

    /// Minimal supports where the condition holds, ascending.
    pub fn minimal_supports(&self) -> Vec<u32> {
        (0..self.holds.len() as u32)
            .filter(|&m| self.holds[m as usize] && (0..self.n).all(|i| m & (1 << i) == 0 || !self.holds[(m & !(1 << i)) as usize]))
            .collect()
    }

    fn check(&self, wt: &SWeightTable) -> Result<()> {
        if self.n != wt.n() {
            return Err(Error::Dimension(format!("condition on n = {} for a weight on n = {}", self.n, wt.n())));
        }
        Ok(())
    }
}

impl fmt::Display for SupportCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mins: Vec<String> = self.minimal_supports().iter().map(|&m| mask_string(self.n, m)).collect();
        write!(f, "supp ⊇ one of {{{}}}", mins.join(", "))
    }
}

/// `wt_1(u)` where `C(u)` fails, `wt_1(u) + wt_2(u)` where it holds.
pub fn conditional_sum(wt1: &SWeightTable, wt2: &SWeightTable, c: &SupportCondition) -> Result<SWeightTable> {
    c.check(wt1)?;
    let space = wt1.space().clone();
    wt1.zip_with(wt2, |x, a, b| if c.holds(&space, x) { a + b } else { a })
}

/// `wt_1 ⊕_k wt_2`: gate on `wt_1(u) ≥ k`.
pub fn k_sum(wt1: &SWeightTable, wt2: &SWeightTable, k: u64) -> Result<SWeightTable> {
    wt1.zip_with(wt2, |_, a, b| if a >= k { a + b } else { a })
}

/// `wt_1 ⊕_{(H,k)} wt_2`: gate on `wt_H(u) ≥ k`.
pub fn hk_sum(wt1: &SWeightTable, wt2: &SWeightTable, k: u64) -> Result<SWeightTable> {
    conditional_sum(wt1, wt2, &SupportCondition::hamming_at_least(wt1.n(), k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    /// 1: equal weights; 2: strictly smaller weight.
    pub part: u8,
    pub u: String,
    pub v: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub holds: bool,
    pub pairs_checked: u64,
    pub violation: Option<LemmaViolation>,
}

/// Checks both conclusions of the equivalence lemma over all support pairs.
///
/// Fails with `Precondition` unless `wt_1 ~ wt_2 ~ wt_1 ⊕_C wt_2`.
pub fn check_equivalence_lemma(wt1: &SWeightTable, wt2: &SWeightTable, c: &SupportCondition) -> Result<LemmaReport> {
    let sum = conditional_sum(wt1, wt2, c)?;
    if !are_equivalent(wt1, wt2)? {
        return Err(Error::Precondition("wt1 and wt2 are not equivalent".into()));
    }
    if !are_equivalent(wt1, &sum)? {
        return Err(Error::Precondition("the conditional sum is not equivalent to wt1".into()));
    }
    let w1 = wt1.support_values().ok_or(Error::NotSupportDetermined)?;
    let w2 = wt2.support_values().ok_or(Error::NotSupportDetermined)?;
    let n = wt1.n();
    let mut pairs = 0;
    for u in 0..w1.len() as u32 {
        if !c.holds_on_support(u) {
            pairs += w1.len() as u64;
            continue;
        }
        for v in 0..w2.len() as u32 {
            pairs += 1;
            let (a, b) = (w1[u as usize], w2[v as usize]);
            let part = if a == b && !c.holds_on_support(v) {
                1
            } else if a < b && !c.holds_on_support(v) && 2 * a >= b {
                2
            } else {
                continue;
            };
            let violation = LemmaViolation { part, u: mask_string(n, u), v: mask_string(n, v) };
            return Ok(LemmaReport { holds: false, pairs_checked: pairs, violation: Some(violation) });
        }
    }
    Ok(LemmaReport { holds: true, pairs_checked: pairs, violation: None })
}

/// How `wt ⊕_C wt` relates to `wt` and to `wt ⊕_k wt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KsumReduction {
    pub equivalent: bool,
    /// `min{wt(u) : C(u)}`, or `max wt + 1` when `C` never holds.
    pub k: u64,
    pub matches_ksum: bool,
}

pub fn ksum_reduction(wt: &SWeightTable, c: &SupportCondition) -> Result<KsumReduction> {
    let sum = conditional_sum(wt, wt, c)?;
    let space = wt.space();
    let k = (0..space.size()).filter(|&x| c.holds(space, x)).map(|x| wt.value(x)).min().unwrap_or(wt.max() + 1);
    Ok(KsumReduction {
        equivalent: are_equivalent(wt, &sum)?,
        k,
        matches_ksum: k_sum(wt, wt, k)?.values() == sum.values(),
    })
}

/// The `k` with `wt ⊕_C wt = wt ⊕_k wt`, when `wt ~ wt ⊕_C wt` and that `k` works.
pub fn is_ksum_reducible(wt: &SWeightTable, c: &SupportCondition) -> Result<Option<u64>> {
    let r = ksum_reduction(wt, c)?;
    Ok((r.equivalent && r.matches_ksum).then_some(r.k))
}

/// Conditions the reachability search may apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionSpace {
    /// `[wt_H ≥ k]` and `[wt_left ≥ k]`.
    Thresholds,
    /// Thresholds plus every upward-closed support family when `n ≤ 2`.
    ThresholdsAndUpsets,
}

/// The condition labelling an internal derivation node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ConditionLabel {
    /// `[wt_H(u) ≥ k]`.
    Hamming { k: u64 },
    /// `[wt_left(u) ≥ k]`, i.e. `⊕_k`.
    Left { k: u64 },
    /// Holds on supports containing one of `minimal`.
    Upset { minimal: Vec<String> },
}

impl ConditionLabel {
    fn condition(&self, n: usize, left: &[u64]) -> SupportCondition {
        match self {
            ConditionLabel::Hamming { k } => SupportCondition::hamming_at_least(n, *k),
            ConditionLabel::Left { k } => SupportCondition { n, holds: left.iter().map(|&w| w >= *k).collect() },
            ConditionLabel::Upset { minimal } => {
                let mins: Vec<u32> = minimal
                    .iter()
                    .map(|s| s.chars().enumerate().filter(|&(_, ch)| ch == '1').fold(0, |a, (i, _)| a | 1 << i))
                    .collect();
                SupportCondition {
                    n,
                    holds: (0..1u32 << n).map(|m| mins.iter().any(|&a| a & m == a)).collect(),
                }
            }
        }
    }
}

impl fmt::Display for ConditionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionLabel::Hamming { k } => write!(f, "(H,{k})"),
            ConditionLabel::Left { k } => write!(f, "{k}"),
            ConditionLabel::Upset { minimal } => write!(f, "C[{}]", minimal.join(",")),
        }
    }
}

/// How a weight was built; serializes as a JSON tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Derivation {
    Generator { label: String, member: FamilyMember },
    Sum { condition: ConditionLabel, left: Box<Derivation>, right: Box<Derivation> },
}

impl Derivation {
    /// Number of nested sums.
    pub fn depth(&self) -> usize {
        match self {
            Derivation::Generator { .. } => 0,
            Derivation::Sum { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Re-evaluates the weight of every support mask.
    pub fn support_weights(&self) -> Vec<u64> {
        match self {
            Derivation::Generator { member, .. } => member.support_weights(),
            Derivation::Sum { condition, left, right } => {
                let (l, r) = (left.support_weights(), right.support_weights());
                let n = l.len().trailing_zeros() as usize;
                let c = condition.condition(n, &l);
                l.iter().zip(&r).enumerate().map(|(m, (&a, &b))| if c.holds[m] { a + b } else { a }).collect()
            }
        }
    }

    pub fn weight_table(&self, q: u32, caps: &Caps) -> Result<SWeightTable> {
        let w = self.support_weights();
        SWeightTable::from_support_values(Space::new(w.len().trailing_zeros() as usize, q, caps)?, &w)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Generator { label, .. } => f.write_str(label),
            Derivation::Sum { condition, left, right } => write!(f, "({left} ⊕_{condition} {right})"),
        }
    }
}

struct Node {
    depth: usize,
    weights: Vec<u64>,
    derivation: Derivation,
}

/// Classes reached from the generators, keyed by support ordering.
pub struct Reachability {
    pub n: usize,
    pub max_depth: usize,
    pub space: ConditionSpace,
    nodes: Vec<Node>,
    index: HashMap<WeightOrdering, usize>,
}

impl Reachability {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The first derivation found for `target`, a support ordering.
    pub fn derivation(&self, target: &WeightOrdering) -> Option<&Derivation> {
        let key = WeightOrdering::from_ranks(target.ranks().to_vec());
        self.index.get(&key).map(|&i| &self.nodes[i].derivation)
    }

    pub fn depth_of(&self, target: &WeightOrdering) -> Option<usize> {
        let key = WeightOrdering::from_ranks(target.ranks().to_vec());
        self.index.get(&key).map(|&i| self.nodes[i].depth)
    }
}

const MAX_REACH_N: usize = 3;

fn labels_for(space: ConditionSpace, n: usize, left: &[u64], upsets: &[SupportCondition]) -> Vec<ConditionLabel> {
    let mut out: Vec<ConditionLabel> = (1..=n as u64).map(|k| ConditionLabel::Hamming { k }).collect();
    let max = left.iter().copied().max().unwrap_or(0);
    out.extend((1..=max).map(|k| ConditionLabel::Left { k }));
    if space == ConditionSpace::ThresholdsAndUpsets {
        out.extend(upsets.iter().map(|c| ConditionLabel::Upset {
            minimal: c.minimal_supports().iter().map(|&m| mask_string(n, m)).collect(),
        }));
    }
    out
}

/// Breadth-first closure of `generators` under conditional sums, deduplicated
/// by support ordering; the first representative of each class is kept.
///
/// Stops early once `target` (if given) has been reached.
pub fn reachability_closure(
    n: usize,
    generators: &[Family],
    max_depth: usize,
    space: ConditionSpace,
    target: Option<&WeightOrdering>,
    caps: &Caps,
) -> Result<Reachability> {
    if n > MAX_REACH_N {
        return Err(Error::CapExceeded { what: "reachability search n", size: n as u128, cap: MAX_REACH_N as u128 });
    }
    let target = target.map(|t| WeightOrdering::from_ranks(t.ranks().to_vec()));
    if let Some(t) = &target {
        if t.ranks().len() != 1 << n {
            return Err(Error::Dimension(format!("target has {} supports, expected {}", t.ranks().len(), 1 << n)));
        }
    }
    let mut r = Reachability { n, max_depth, space, nodes: Vec::new(), index: HashMap::new() };
    let insert = |r: &mut Reachability, depth: usize, weights: Vec<u64>, derivation: Derivation| {
        let key = WeightOrdering::from_values(&weights);
        if !r.index.contains_key(&key) {
            r.index.insert(key, r.nodes.len());
            r.nodes.push(Node { depth, weights, derivation });
        }
    };
    for &f in generators {
        for member in family_members(f, n, caps)? {
            let weights = member.support_weights();
            insert(&mut r, 0, weights, Derivation::Generator { label: member.to_string(), member });
        }
    }
    let found = |r: &Reachability| target.as_ref().is_some_and(|t| r.index.contains_key(t));
    let upsets = if space == ConditionSpace::ThresholdsAndUpsets && n <= 2 { SupportCondition::all(n)? } else { Vec::new() };
    for depth in 1..=max_depth {
        if found(&r) {
            break;
        }
        let count = r.nodes.len();
        for a in 0..count {
            for b in 0..count {
                if r.nodes[a].depth.max(r.nodes[b].depth) != depth - 1 {
                    continue;
                }
                for label in labels_for(space, n, &r.nodes[a].weights, &upsets) {
                    let c = label.condition(n, &r.nodes[a].weights);
                    let weights: Vec<u64> = r.nodes[a]
                        .weights
                        .iter()
                        .zip(&r.nodes[b].weights)
                        .enumerate()
                        .map(|(m, (&x, &y))| if c.holds[m] { x + y } else { x })
                        .collect();
                    if r.index.contains_key(&WeightOrdering::from_values(&weights)) {
                        continue;
                    }
                    let derivation = Derivation::Sum {
                        condition: label,
                        left: Box::new(r.nodes[a].derivation.clone()),
                        right: Box::new(r.nodes[b].derivation.clone()),
                    };
                    insert(&mut r, depth, weights, derivation);
                }
            }
        }
    }
    Ok(r)
}

/// A derivation of a weight whose support ordering is `target`, within `max_depth`.
pub fn reachability_search(
    target: &WeightOrdering,
    generators: &[Family],
    max_depth: usize,
    space: ConditionSpace,
    caps: &Caps,
) -> Result<Option<Derivation>> {
    let len = target.ranks().len();
    if !len.is_power_of_two() {
        return Err(Error::Dimension(format!("{len} ranks is not a number of supports")));
    }
    let n = len.trailing_zeros() as usize;
    let r = reachability_closure(n, generators, max_depth, space, Some(target), caps)?;
    Ok(r.derivation(target).cloned())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReach {
    pub criterion: String,
    pub depth: Option<usize>,
    pub derivation: Option<String>,
}

/// Reachability of every decoding criterion on `F_2^n`, up to coordinate permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachReport {
    pub n: usize,
    pub max_depth: usize,
    pub space: ConditionSpace,
    pub classes: Vec<ClassReach>,
}

impl ReachReport {
    pub fn reached(&self) -> usize {
        self.classes.iter().filter(|c| c.depth.is_some()).count()
    }
}

/// A class counts as reached when any coordinate relabeling of it is.
pub fn reachability_report(
    n: usize,
    generators: &[Family],
    max_depth: usize,
    space: ConditionSpace,
    caps: &Caps,
) -> Result<ReachReport> {
    let r = reachability_closure(n, generators, max_depth, space, None, caps)?;
    let quotient = enumerate_criteria(n, 2, true)?;
    let labeled = enumerate_criteria(n, 2, false)?;
    let mut best: Vec<Option<(usize, String)>> = vec![None; quotient.len()];
    for c in &labeled.classes {
        let table = SWeightTable::from_support_values(
            Space::new(n, 2, caps)?,
            &c.ordering.ranks().iter().map(|&x| x as u64).collect::<Vec<_>>(),
        )?;
        let Some(class) = quotient.classify(&table)? else { continue };
        let Some(&i) = r.index.get(&c.ordering) else { continue };
        let node = &r.nodes[i];
        if best[class].as_ref().is_none_or(|(d, _)| node.depth < *d) {
            best[class] = Some((node.depth, node.derivation.to_string()));
        }
    }
    let classes = quotient
        .classes
        .iter()
        .zip(best)
        .map(|(c, b)| ClassReach {
            criterion: c.describe(n),
            depth: b.as_ref().map(|(d, _)| *d),
            derivation: b.map(|(_, s)| s),
        })
        .collect();
    Ok(ReachReport { n, max_depth, space, classes })
}
