//! Complete search for binary and ternary multiplicative decompositions of
//! shifted multiplicative subgroups (S_d − λ) \ {0}, with co-Sidon audits and
//! the square-field positive construction.
//!
//! Completeness of the binary search: normalize 1 ∈ A by scaling, so B ⊆ T;
//! a closed pair with |A| ≥ 2 contains some a₂ ≠ 1, forcing B ⊆ B̂ =
//! T ∩ a₂^{−1}T. The DFS enumerates all subsets of B̂, keeping the maximal
//! A(B) = ∩_{b∈B} b^{−1}T, and accepts whenever A(B)·B = T; the two-step
//! closure of an accepted pair is a closed pair with the same product, and
//! every closed pair arises this way.

use crate::bitset::BitSet;
use crate::error::{DtError, Result};
use crate::field::{FieldCtx, FieldElement};
use serde::Serialize;
use std::collections::BTreeSet;

/// Above this target size the search still runs but is advisory only.
pub const COMPLETENESS_CAP: usize = 64;
/// Node budget guarding pathological targets.
const NODE_BUDGET: u64 = 200_000_000;

pub struct Target<'a> {
    pub ctx: &'a FieldCtx,
    pub d: u64,
    pub lambda: FieldElement,
    pub set: BitSet,
    pub contains_zero_shift: bool,
}

impl Target<'_> {
    pub fn elements(&self) -> Vec<FieldElement> {
        self.set.iter().map(|i| FieldElement(i as u32)).collect()
    }

    pub fn len(&self) -> usize {
        self.set.count()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// T = (S_d − λ) \ {0}.
pub fn build_target<'a>(ctx: &'a FieldCtx, d: u64, lambda: FieldElement) -> Result<Target<'a>> {
    if lambda.is_zero() {
        return Err(DtError::ZeroShift);
    }
    if d < 2 || (ctx.q - 1) % d != 0 {
        return Err(DtError::BadSubgroupOrder { d, qm1: ctx.q - 1 });
    }
    let mut set = BitSet::new(ctx.q as usize);
    for s in ctx.dth_power_set(d, false)?.iter() {
        let shifted = ctx.sub(FieldElement(s as u32), lambda);
        if !shifted.is_zero() {
            set.insert(shifted.idx() as usize);
        }
    }
    let contains_zero_shift = ctx.is_dth_power(lambda, d)?;
    let expected = (ctx.q - 1) / d - u64::from(contains_zero_shift);
    debug_assert_eq!(set.count() as u64, expected);
    Ok(Target {
        ctx,
        d,
        lambda,
        set,
        contains_zero_shift,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Pair {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    /// |A||B| = |AB| (all products distinct).
    pub sidon: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionResult {
    pub pairs: Vec<Pair>,
    pub exists: bool,
    pub search_complete: bool,
}

struct BinarySearch<'a> {
    ctx: &'a FieldCtx,
    target: &'a BitSet,
    target_elems: Vec<FieldElement>,
    nodes: u64,
    budget_exhausted: bool,
    // canonical (A/min(A), min(A)·B) pairs already recorded
    seen: BTreeSet<(Vec<u64>, Vec<u64>)>,
    pairs: Vec<(Vec<FieldElement>, Vec<FieldElement>)>,
}

impl<'a> BinarySearch<'a> {
    fn product_covers(&self, a: &[FieldElement], b: &[FieldElement]) -> bool {
        let mut covered = BitSet::new(self.ctx.q as usize);
        for &x in a {
            for &y in b {
                covered.insert(self.ctx.mul(x, y).idx() as usize);
            }
        }
        self.target.is_subset_of(&covered)
    }

    fn record(&mut self, a_max: &[FieldElement], b: &[FieldElement]) {
        // Close: A is already maximal for B; enlarge B against it.
        let b_closed: Vec<FieldElement> = self
            .ctx
            .nonzero_elements()
            .filter(|&y| {
                a_max
                    .iter()
                    .all(|&x| self.target.contains(self.ctx.mul(x, y).idx() as usize))
            })
            .collect();
        debug_assert!(self.product_covers(a_max, &b_closed));
        let _ = b;
        // Canonical form modulo scaling: divide A by its smallest element.
        let c = *a_max.iter().min().unwrap();
        let c_inv = self.ctx.inv(c).unwrap();
        let mut ka: Vec<u64> = a_max.iter().map(|&x| self.ctx.mul(x, c_inv).idx()).collect();
        let mut kb: Vec<u64> = b_closed.iter().map(|&y| self.ctx.mul(y, c).idx()).collect();
        ka.sort();
        kb.sort();
        if self.seen.insert((ka.clone(), kb.clone())) {
            self.pairs.push((
                ka.into_iter().map(|i| FieldElement(i as u32)).collect(),
                kb.into_iter().map(|i| FieldElement(i as u32)).collect(),
            ));
        }
    }

    fn dfs(&mut self, bhat: &[FieldElement], start: usize, b: &mut Vec<FieldElement>, a: &[FieldElement]) {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            self.budget_exhausted = true;
            return;
        }
        if b.len() >= 2 && a.len() >= 2 && self.product_covers(a, b) {
            self.record(a, b);
        }
        for i in start..bhat.len() {
            if self.budget_exhausted {
                return;
            }
            let cand = bhat[i];
            let a_next: Vec<FieldElement> = a
                .iter()
                .copied()
                .filter(|&x| self.target.contains(self.ctx.mul(x, cand).idx() as usize))
                .collect();
            if a_next.len() < 2 {
                continue;
            }
            // Coverage feasibility: the products of a_next with everything
            // still addable must reach all of T.
            let mut reach: Vec<FieldElement> = b.clone();
            reach.push(cand);
            reach.extend_from_slice(&bhat[i + 1..]);
            if !self.product_covers(&a_next, &reach) {
                continue;
            }
            b.push(cand);
            self.dfs(bhat, i + 1, b, &a_next);
            b.pop();
        }
    }
}

/// Complete enumeration (up to scaling) of closed pairs (A, B) with AB = T
/// and |A|, |B| ≥ 2, for an arbitrary target set of nonzero elements.
pub fn find_binary_in_set(ctx: &FieldCtx, target: &BitSet) -> DecompositionResult {
    let target_elems: Vec<FieldElement> =
        target.iter().map(|i| FieldElement(i as u32)).collect();
    let mut search = BinarySearch {
        ctx,
        target,
        target_elems,
        nodes: 0,
        budget_exhausted: false,
        seen: BTreeSet::new(),
        pairs: Vec::new(),
    };
    let all: Vec<FieldElement> = ctx.nonzero_elements().collect();
    for a2 in ctx.nonzero_elements() {
        if a2 == FieldElement::ONE {
            continue;
        }
        if search.budget_exhausted {
            break;
        }
        let bhat: Vec<FieldElement> = search
            .target_elems
            .iter()
            .copied()
            .filter(|&y| target.contains(ctx.mul(a2, y).idx() as usize))
            .collect();
        if bhat.len() < 2 {
            continue;
        }
        let mut b = Vec::new();
        search.dfs(&bhat, 0, &mut b, &all);
    }
    let size = target.count();
    let pairs: Vec<Pair> = search
        .pairs
        .iter()
        .map(|(a, b)| Pair {
            a: a.iter().map(|x| x.idx()).collect(),
            b: b.iter().map(|x| x.idx()).collect(),
            sidon: a.len() * b.len() == size,
        })
        .collect();
    DecompositionResult {
        exists: !pairs.is_empty(),
        search_complete: size <= COMPLETENESS_CAP && !search.budget_exhausted,
        pairs,
    }
}

pub fn find_binary(target: &Target) -> DecompositionResult {
    find_binary_in_set(target.ctx, &target.set)
}

/// Pre: λ ∈ S_d and a complete search. True iff every pair is co-Sidon with
/// |A||B| = |S_d| − 1.
pub fn sidon_audit(result: &DecompositionResult, target: &Target) -> Result<bool> {
    if !target.contains_zero_shift {
        return Err(DtError::Domain(
            "sidon audit requires lambda in S_d".into(),
        ));
    }
    if !result.search_complete {
        return Err(DtError::CapExceeded("search incomplete".into()));
    }
    let expected = (target.ctx.q - 1) / target.d - 1;
    Ok(result
        .pairs
        .iter()
        .all(|p| p.sidon && (p.a.len() * p.b.len()) as u64 == expected))
}

#[derive(Clone, Debug, Serialize)]
pub struct TernaryResult {
    pub exists: bool,
    pub witness: Option<(Vec<u64>, Vec<u64>, Vec<u64>)>,
    pub search_complete: bool,
}

/// Ternary decomposition ABC = T with all factors of size ≥ 2: grouping makes
/// any ternary a binary whose one side is itself decomposable, so the closed
/// binary pairs are re-searched factor by factor. A returned witness is
/// always re-verified against T.
pub fn find_ternary(target: &Target) -> Result<TernaryResult> {
    let binary = find_binary(target);
    let mut complete = binary.search_complete;
    for pair in &binary.pairs {
        for (side, other) in [(&pair.a, &pair.b), (&pair.b, &pair.a)] {
            let mut side_set = BitSet::new(target.ctx.q as usize);
            for &i in side.iter() {
                side_set.insert(i as usize);
            }
            let sub = find_binary_in_set(target.ctx, &side_set);
            complete &= sub.search_complete;
            if let Some(p) = sub.pairs.first() {
                let witness = (p.a.clone(), p.b.clone(), other.clone());
                verify_triple_product(target, &witness)?;
                return Ok(TernaryResult {
                    exists: true,
                    witness: Some(witness),
                    search_complete: complete,
                });
            }
        }
    }
    Ok(TernaryResult {
        exists: false,
        witness: None,
        search_complete: complete,
    })
}

fn verify_triple_product(
    target: &Target,
    (u, v, w): &(Vec<u64>, Vec<u64>, Vec<u64>),
) -> Result<()> {
    let ctx = target.ctx;
    let mut got = BitSet::new(ctx.q as usize);
    for &a in u {
        for &b in v {
            for &c in w {
                let x = ctx.mul(
                    ctx.mul(FieldElement(a as u32), FieldElement(b as u32)),
                    FieldElement(c as u32),
                );
                got.insert(x.idx() as usize);
            }
        }
    }
    if got == target.set {
        Ok(())
    } else {
        Err(DtError::Domain("ternary witness failed verification (bug)".into()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareConstruction {
    pub subfield_order: u64,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub candidates_tried: usize,
}

/// Positive control on square fields q = s²: with G = F_s^* (= S_{s+1}) and
/// λ = −1, some A ⊆ F_s^* of size ⌊(s−1)/2⌋ with B = F_s^* \ A^{−1} satisfies
/// AB = F_s^* \ {1} = (G + 1) \ {0}. Candidates are tried in lexicographic
/// order and each is verified; universality is not assumed.
pub fn square_construction(ctx: &FieldCtx) -> Result<SquareConstruction> {
    if ctx.r % 2 != 0 {
        return Err(DtError::NotSquare(ctx.q));
    }
    let s = ctx.p.pow(ctx.r / 2);
    let d = s + 1;
    let lambda = ctx.neg(FieldElement::ONE);
    let target = build_target(ctx, d, lambda)?;

    let mut sub_star: Vec<FieldElement> = ctx
        .subfield_elements(ctx.r / 2)?
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    sub_star.sort();
    let size = ((s - 1) / 2) as usize;
    if size < 2 {
        return Err(DtError::CapExceeded(format!(
            "subfield F_{s} too small for a non-trivial pair"
        )));
    }

    let mut candidates_tried = 0usize;
    let nstar = sub_star.len();
    let mut picks: Vec<usize> = (0..size).collect();
    loop {
        candidates_tried += 1;
        let a: Vec<FieldElement> = picks.iter().map(|&i| sub_star[i]).collect();
        let a_inv: BTreeSet<FieldElement> =
            a.iter().map(|&x| ctx.inv(x).unwrap()).collect();
        let b: Vec<FieldElement> = sub_star
            .iter()
            .copied()
            .filter(|x| !a_inv.contains(x))
            .collect();
        if b.len() >= 2 {
            let mut covered = BitSet::new(ctx.q as usize);
            for &x in &a {
                for &y in &b {
                    covered.insert(ctx.mul(x, y).idx() as usize);
                }
            }
            if covered == target.set {
                return Ok(SquareConstruction {
                    subfield_order: s,
                    a: a.iter().map(|x| x.idx()).collect(),
                    b: b.iter().map(|x| x.idx()).collect(),
                    candidates_tried,
                });
            }
        }
        // next lexicographic combination
        let mut i = size;
        loop {
            if i == 0 {
                return Err(DtError::ConstructionFailed);
            }
            i -= 1;
            if picks[i] != i + nstar - size {
                picks[i] += 1;
                for j in (i + 1)..size {
                    picks[j] = picks[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Reference search for small targets: every B ⊆ T with |B| ≥ 2, paired with
/// every A inside the maximal left set, tested directly. Exponential, only
/// for |T| ≤ 12 oracle comparisons.
pub fn binary_exists_oracle(ctx: &FieldCtx, target: &BitSet) -> Result<bool> {
    let t: Vec<FieldElement> = target.iter().map(|i| FieldElement(i as u32)).collect();
    if t.len() > 12 {
        return Err(DtError::CapExceeded("oracle limited to |T| <= 12".into()));
    }
    let full_cover = |a: &[FieldElement], b: &[FieldElement]| -> bool {
        let mut covered = BitSet::new(ctx.q as usize);
        let mut inside = true;
        for &x in a {
            for &y in b {
                let v = ctx.mul(x, y).idx() as usize;
                if !target.contains(v) {
                    inside = false;
                }
                covered.insert(v);
            }
        }
        inside && target.is_subset_of(&covered)
    };
    for mask in 1u64..(1 << t.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let b: Vec<FieldElement> = (0..t.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| t[i])
            .collect();
        let a_max: Vec<FieldElement> = ctx
            .nonzero_elements()
            .filter(|&x| {
                b.iter()
                    .all(|&y| target.contains(ctx.mul(x, y).idx() as usize))
            })
            .collect();
        if a_max.len() < 2 {
            continue;
        }
        if a_max.len() > 20 {
            return Err(DtError::CapExceeded(
                "oracle A-side blowup; target out of oracle scope".into(),
            ));
        }
        for amask in 1u64..(1 << a_max.len()) {
            if amask.count_ones() < 2 {
                continue;
            }
            let a: Vec<FieldElement> = (0..a_max.len())
                .filter(|&i| amask >> i & 1 == 1)
                .map(|i| a_max[i])
                .collect();
            if full_cover(&a, &b) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
