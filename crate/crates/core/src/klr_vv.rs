//! Root partitions, the bijection onto `Π(m)`, idempotent subalgebras `e𝔚e ≅ R_ν̃`, and
//! explicit witnesses that idempotents are isomorphic.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::One;

use crate::engine::{Algebra, AlgebraDescriptor, Element, Gen};
use crate::error::{Error, Result};
use crate::quiver::{
    arrangements, multiplicity_info, position_of, Branch, DimVector, IdemSeq, OrbitDescriptor,
    OrbitKind, Vertex,
};
use crate::series::Rational;
use crate::weyl::{canonical_word, coset_min_reps, SignedPerm, Word};

/// `p`-power of a vertex along its branch: `2n` for `p^{2n}x^{±1}`, the exponent in an `A3` orbit.
pub fn level(orbit: &OrbitDescriptor, v: &Vertex) -> i32 {
    match orbit.part(v.orbit).kind {
        OrbitKind::A3 => v.p_exponent(),
        _ => 2 * v.n,
    }
}

fn on_plus_side(orbit: &OrbitDescriptor, v: &Vertex) -> bool {
    match orbit.part(v.orbit).kind {
        OrbitKind::A3 => v.p_exponent() > 0,
        _ => v.branch == Branch::Plus,
    }
}

/// The positive root `α_s + α_{p²s} + ⋯ + α_{p^{2k}s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub start: Vertex,
    pub steps: u32,
}

impl Root {
    pub fn vertices(&self, orbit: &OrbitDescriptor) -> Vec<Vertex> {
        (0..=self.steps as i32).map(|t| orbit.shift(&self.start, t)).collect()
    }

    fn key(&self, orbit: &OrbitDescriptor) -> (u8, i32, u32) {
        (self.start.orbit, level(orbit, &self.start), self.steps)
    }

    /// Root order: larger start first, then longer.
    pub fn cmp_in(&self, other: &Root, orbit: &OrbitDescriptor) -> Ordering {
        self.key(orbit).cmp(&other.key(orbit))
    }
}

/// A weakly decreasing tuple of roots together with its sequence `i_π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPartition {
    pub parts: Vec<Root>,
    pub seq: IdemSeq,
}

impl RootPartition {
    pub fn sum(&self, orbit: &OrbitDescriptor) -> DimVector {
        let mut d = DimVector::new();
        for r in &self.parts {
            for v in r.vertices(orbit) {
                d = d.add(&DimVector::from_list(&[(v, 1)]));
            }
        }
        d
    }

    fn cmp_in(&self, other: &RootPartition, orbit: &OrbitDescriptor) -> Ordering {
        for (a, b) in self.parts.iter().zip(&other.parts) {
            match a.cmp_in(b, orbit) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.parts.len().cmp(&other.parts.len())
    }
}

/// Every root partition of `ν̃`, in increasing order.
pub fn root_partitions(nu_tilde: &DimVector, orbit: &OrbitDescriptor) -> Result<Vec<RootPartition>> {
    let sides: BTreeSet<bool> = nu_tilde.entries().keys().map(|v| on_plus_side(orbit, v)).collect();
    if sides.len() > 1 {
        return Err(Error::InvalidDimVector("root partitions need ν̃ supported on one branch".into()));
    }
    let mut roots = Vec::new();
    for &start in nu_tilde.entries().keys() {
        let mut k = 0u32;
        loop {
            let r = Root { start, steps: k };
            if !fits(&r, nu_tilde, orbit) {
                break;
            }
            roots.push(r);
            k += 1;
        }
    }
    roots.sort_by(|a, b| b.cmp_in(a, orbit));
    let mut out = Vec::new();
    let mut cur = Vec::new();
    backtrack(&roots, 0, nu_tilde.clone(), orbit, &mut cur, &mut out);
    let mut parts: Vec<RootPartition> = out
        .into_iter()
        .map(|parts: Vec<Root>| {
            let seq = parts.iter().flat_map(|r| r.vertices(orbit)).collect();
            RootPartition { parts, seq }
        })
        .collect();
    parts.sort_by(|a, b| a.cmp_in(b, orbit));
    Ok(parts)
}

fn fits(r: &Root, rest: &DimVector, orbit: &OrbitDescriptor) -> bool {
    let mut need = DimVector::new();
    for v in r.vertices(orbit) {
        need = need.add(&DimVector::from_list(&[(v, 1)]));
    }
    need.entries().iter().all(|(v, &c)| rest.get(v) >= c)
}

fn subtract(rest: &DimVector, r: &Root, orbit: &OrbitDescriptor) -> DimVector {
    let mut left: Vec<(Vertex, u32)> = rest.entries().iter().map(|(v, c)| (*v, *c)).collect();
    for v in r.vertices(orbit) {
        let slot = left.iter_mut().find(|(w, _)| *w == v).expect("fits");
        slot.1 -= 1;
    }
    DimVector::from_list(&left)
}

/// Chooses roots in weakly decreasing order; `from` indexes `roots`, sorted decreasingly.
fn backtrack(
    roots: &[Root],
    from: usize,
    rest: DimVector,
    orbit: &OrbitDescriptor,
    cur: &mut Vec<Root>,
    out: &mut Vec<Vec<Root>>,
) {
    if rest.total() == 0 {
        out.push(cur.clone());
        return;
    }
    for idx in from..roots.len() {
        let r = roots[idx];
        if fits(&r, &rest, orbit) {
            cur.push(r);
            backtrack(roots, idx, subtract(&rest, &r, orbit), orbit, cur, out);
            cur.pop();
        }
    }
}

/// `η·i` for the longest minimal coset representative: reverse and invert every entry.
pub fn eta_act(orbit: &OrbitDescriptor, i: &[Vertex]) -> IdemSeq {
    i.iter().rev().map(|v| orbit.theta(v)).collect()
}

/// The support of a multiplicity-one plus-branch `A2` sequence as a segment `v_0 < ⋯ < v_{m-1}`.
fn plus_segment(orbit: &OrbitDescriptor, seq: &[Vertex]) -> Result<Vec<Vertex>> {
    if orbit.kind != OrbitKind::A2 {
        return Err(Error::Hypothesis("the bijection onto Π(m) is stated for the orbit of q".into()));
    }
    let mut vs: Vec<Vertex> = seq.to_vec();
    vs.sort_by_key(|v| level(orbit, v));
    if vs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Hypothesis("ν must have multiplicity one".into()));
    }
    if vs.iter().any(|v| v.branch != Branch::Plus) {
        return Err(Error::Hypothesis("sequence is not on one branch".into()));
    }
    if !vs.iter().any(|v| orbit.is_q(v)) {
        return Err(Error::Hypothesis("q must occur in ν".into()));
    }
    if vs.windows(2).any(|w| orbit.shift(&w[0], 1) != w[1]) {
        return Err(Error::Hypothesis("the plus part of ν must be a connected segment".into()));
    }
    Ok(vs)
}

/// The tuple `(a_1, …, a_{m-1})` of a sequence: `a_i = 1` when `v_{i-1}` precedes `v_i`.
pub fn theta_tuple(orbit: &OrbitDescriptor, seq: &[Vertex]) -> Result<Vec<u8>> {
    let plus: IdemSeq = match seq.first() {
        Some(v) if v.branch == Branch::Minus => eta_act(orbit, seq),
        _ => seq.to_vec(),
    };
    let vs = plus_segment(orbit, &plus)?;
    Ok(vs
        .windows(2)
        .map(|w| {
            let a = position_of(&plus, &w[0]).expect("present");
            let b = position_of(&plus, &w[1]).expect("present");
            if a < b {
                1
            } else {
                2
            }
        })
        .collect())
}

/// `θ(λ) ∈ Π(m)`. On `Π⁻` the tuple is read off `η·i_λ`, so `θ(η·i) = θ(i)`.
pub fn theta_bijection(lambda: &RootPartition, orbit: &OrbitDescriptor) -> Result<Vec<u8>> {
    theta_tuple(orbit, &lambda.seq)
}

/// The root partition of `ν̃` on the given side with tuple `t`.
pub fn theta_inverse(t: &[u8], partitions: &[RootPartition], orbit: &OrbitDescriptor) -> Result<RootPartition> {
    for p in partitions {
        if theta_bijection(p, orbit)? == t {
            return Ok(p.clone());
        }
    }
    Err(Error::InvalidArgument(format!("no root partition with tuple {t:?}")))
}

/// `Π⁺` and `Π⁻` of a θ-symmetric `ν`.
pub fn plus_minus_partitions(
    nu: &DimVector,
    orbit: &OrbitDescriptor,
) -> Result<(Vec<RootPartition>, Vec<RootPartition>)> {
    let plus = nu.branch_part(Branch::Plus);
    let minus = nu.branch_part(Branch::Minus);
    Ok((root_partitions(&plus, orbit)?, root_partitions(&minus, orbit)?))
}

/// Position of `q` in `i` (1-based).
pub fn phi_q(orbit: &OrbitDescriptor, i: &[Vertex]) -> Option<usize> {
    i.iter().position(|v| orbit.is_q(v)).map(|k| k + 1)
}

/// Positions of the first and second `p` in `i` (1-based).
pub fn phi_p(orbit: &OrbitDescriptor, i: &[Vertex]) -> Option<(usize, usize)> {
    let ps: Vec<usize> = i.iter().enumerate().filter(|(_, v)| orbit.is_p(v)).map(|(k, _)| k + 1).collect();
    match ps.as_slice() {
        [a, b] => Some((*a, *b)),
        _ => None,
    }
}

/// Choices of `ν̃` with `ν̃ + θ(ν̃) = ν` and no `i + i⁻¹` summand.
pub fn admissible_nu_tildes(nu: &DimVector, orbit: &OrbitDescriptor) -> Vec<DimVector> {
    let mut pairs: Vec<(Vertex, Vertex, u32)> = Vec::new();
    for (v, &c) in nu.entries() {
        let t = orbit.theta(v);
        if *v < t {
            pairs.push((*v, t, c));
        }
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let entries: Vec<(Vertex, u32)> = pairs
            .iter()
            .enumerate()
            .map(|(k, (a, b, c))| (if mask & (1 << k) == 0 { *a } else { *b }, *c))
            .collect();
        out.push(DimVector::from_list(&entries));
    }
    out
}

/// `e·𝔚_ν·e ≅ R_ν̃` for `e = Σ_{i∈I^ν̃} e(i)`.
pub struct IdempotentSubalgebra {
    pub nu_tilde: DimVector,
    pub klr: AlgebraDescriptor,
    pub seqs: BTreeSet<IdemSeq>,
    pub e: Element,
}

pub fn idempotent_subalgebra(vv: &Algebra, nu_tilde: &DimVector) -> Result<IdempotentSubalgebra> {
    let h = vv.hecke().filter(|_| vv.is_vv()).ok_or(Error::AlgebraMismatch)?;
    let orbit = &h.orbit;
    let nu = match &vv.descriptor().kind {
        crate::engine::AlgebraKind::Vv { nu, .. } | crate::engine::AlgebraKind::SeparatedVv { nu, .. } => nu.clone(),
        _ => return Err(Error::AlgebraMismatch),
    };
    if nu_tilde.theta_double(orbit) != nu {
        return Err(Error::InvalidDimVector("ν̃ + θ(ν̃) must equal ν".into()));
    }
    for v in nu_tilde.entries().keys() {
        if nu_tilde.get(&orbit.theta(v)) > 0 {
            return Err(Error::Hypothesis(format!(
                "{} + {} is a summand of ν̃",
                orbit.format_vertex(v),
                orbit.format_vertex(&orbit.theta(v))
            )));
        }
    }
    let seqs: BTreeSet<IdemSeq> = arrangements(nu_tilde).into_iter().collect();
    let e = vv.idem_sum(&seqs.iter().cloned().collect::<Vec<_>>())?;
    let klr = AlgebraDescriptor::klr(nu_tilde.clone(), orbit.clone()).with_cap(vv.descriptor().cap);
    Ok(IdempotentSubalgebra { nu_tilde: nu_tilde.clone(), klr, seqs, e })
}

impl IdempotentSubalgebra {
    /// `f`: reads an element of `e𝔚e` as an element of `R_ν̃`.
    pub fn strip(&self, vv: &Algebra, a: &Element) -> Result<Element> {
        let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
        for (m, _) in a.terms() {
            let hm = m.as_hecke().ok_or(Error::AlgebraMismatch)?;
            if hm.word.contains(&0) || !self.seqs.contains(&hm.idem) || !self.seqs.contains(&h.left_idem(hm)) {
                return Err(Error::IdemOutside(format!("{} is not in e𝔚e", vv.format_mono(m))));
            }
        }
        Ok(a.clone())
    }

    /// `f⁻¹`: the inclusion `R_ν̃ → e𝔚e`.
    pub fn embed(&self, r: &Element) -> Element {
        r.clone()
    }

    /// `e σ_η e` for every minimal coset representative `η ≠ 1`.
    pub fn coset_products(&self, vv: &Algebra) -> Result<Vec<(Word, Element)>> {
        let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
        let mut out = Vec::new();
        for (_, word) in coset_min_reps(h.m) {
            if word.is_empty() {
                continue;
            }
            let gens: Vec<Gen> = word.iter().map(|&c| Gen::S(c)).collect();
            let s = vv.normal_form(&gens, &Rational::one())?;
            let prod = vv.multiply(&vv.multiply(&self.e, &s)?, &self.e)?;
            out.push((word, prod));
        }
        Ok(out)
    }
}

/// Which Morita idempotent a witness should reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetFamily {
    /// `Σ_{I^{ν̃⁺}} e(i)` (generic orbit) or `Σ_{I^{ν̃⁺} ∪ I^{ν̃⁻}} e(i)` (orbits of q and p).
    PlusMinusKlr,
    /// `Σ_{λ∈Π±} e(i_λ)` (orbit of q, multiplicity one).
    RootPartitionIdems,
    /// `Σ e(ij)` with the entries of the first sub-orbit first.
    SeparatedBlock,
}

/// `a ∈ e(source)·𝔚·e(target)` and `b ∈ e(target)·𝔚·e(source)` with `ab = e(source)`, `ba = e(target)`.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub a: Element,
    pub b: Element,
    pub source_idem: IdemSeq,
    pub target_idem: IdemSeq,
}

impl WitnessPair {
    fn trivial(vv: &Algebra, i: &IdemSeq) -> Result<Self> {
        let e = vv.idem(i)?;
        Ok(WitnessPair { a: e.clone(), b: e, source_idem: i.clone(), target_idem: i.clone() })
    }

    /// Re-checks both identities by exact multiplication.
    pub fn verify(&self, vv: &Algebra) -> Result<bool> {
        let ab = vv.multiply(&self.a, &self.b)?;
        let ba = vv.multiply(&self.b, &self.a)?;
        Ok(ab == vv.idem(&self.source_idem)? && ba == vv.idem(&self.target_idem)?)
    }

    /// `(a·a', b'·b)` for a second pair starting where this one ends.
    fn then(&self, vv: &Algebra, next: &WitnessPair) -> Result<WitnessPair> {
        Ok(WitnessPair {
            a: vv.multiply(&self.a, &next.a)?,
            b: vv.multiply(&next.b, &self.b)?,
            source_idem: self.source_idem.clone(),
            target_idem: next.target_idem.clone(),
        })
    }
}

/// `(σ_word e(j), σ_{reversed word} e(i))` where `w·j = i`.
fn word_pair(vv: &Algebra, i: &IdemSeq, word: &[u8]) -> Result<WitnessPair> {
    let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
    let rev: Word = word.iter().rev().copied().collect();
    let j = h.act_word(&rev, i);
    let to_gens = |w: &[u8], idem: &IdemSeq| {
        let mut g: Vec<Gen> = w.iter().map(|&c| Gen::S(c)).collect();
        g.push(Gen::E(idem.clone()));
        g
    };
    let a = vv.normal_form(&to_gens(word, &j), &Rational::one())?;
    let b = vv.normal_form(&to_gens(&rev, i), &Rational::one())?;
    Ok(WitnessPair { a, b, source_idem: i.clone(), target_idem: j })
}

/// Branch whose KLR idempotents `e(i)` is isomorphic to.
fn target_branch(orbit: &OrbitDescriptor, i: &[Vertex]) -> Branch {
    if i.iter().any(|v| orbit.is_q_inv(v)) {
        return Branch::Minus;
    }
    let p = i.iter().position(|v| orbit.is_p(v));
    let pinv = i.iter().position(|v| orbit.is_p_inv(v));
    match (p, pinv) {
        (None, Some(_)) => Branch::Minus,
        (Some(a), Some(b)) if a < b => Branch::Minus,
        _ => Branch::Plus,
    }
}

/// The flip word `s_{ε_1-1}⋯s_1s_0 ⋯ s_{ε_d-1}⋯s_1s_0` over the positions `ε` of entries off
/// the target branch.
fn flip_word(orbit: &OrbitDescriptor, i: &[Vertex], branch: Branch) -> Word {
    let eps: Vec<usize> = i
        .iter()
        .enumerate()
        .filter(|(_, v)| on_plus_side(orbit, v) != (branch == Branch::Plus))
        .map(|(k, _)| k + 1)
        .collect();
    crate::weyl::block_word(&eps)
}

/// The permutation `w ∈ 𝔖_m` with `w·j = target` (both multiplicity one on a branch).
pub(crate) fn sorting_word(j: &[Vertex], target: &[Vertex]) -> Result<Word> {
    let window: Vec<i8> = j
        .iter()
        .map(|v| position_of(target, v).map(|p| p as i8).ok_or_else(|| Error::IdemOutside(format!("{v:?}"))))
        .collect::<Result<_>>()?;
    Ok(canonical_word(&SignedPerm::from_window(window)?))
}

/// An explicit witness that `e(i)` is isomorphic to a summand of the chosen Morita idempotent.
pub fn fullness_witness(vv: &Algebra, i: &IdemSeq, family: TargetFamily) -> Result<WitnessPair> {
    let h = vv.hecke().filter(|_| vv.is_vv()).ok_or(Error::AlgebraMismatch)?;
    if !h.has_seq(i) {
        return Err(Error::IdemOutside(format!("{i:?}")));
    }
    let orbit = h.orbit.clone();
    let pair = match family {
        TargetFamily::SeparatedBlock => {
            if !orbit.is_separated() {
                return Err(Error::Hypothesis("separated block witnesses need a separated orbit".into()));
            }
            let eps: Vec<usize> = positions_of_tag(i, 0);
            let mut word = Word::new();
            for (t, &e) in eps.iter().enumerate() {
                let t = t + 1;
                let mut w: Word = (t..e).map(|c| c as u8).collect();
                w.extend(word);
                word = w;
            }
            // `σ_word e(i)` lands on the block sequence; invert to fit `word_pair`'s convention.
            let rev: Word = word.iter().rev().copied().collect();
            word_pair(vv, i, &rev)?
        }
        TargetFamily::PlusMinusKlr | TargetFamily::RootPartitionIdems => {
            if orbit.is_separated() {
                return Err(Error::Hypothesis("use the separated block family for separated orbits".into()));
            }
            let branch = match orbit.kind {
                OrbitKind::A1 => Branch::Plus,
                _ => target_branch(&orbit, i),
            };
            let first = word_pair(vv, i, &flip_word(&orbit, i, branch))?;
            if family == TargetFamily::PlusMinusKlr {
                first
            } else {
                let j = first.target_idem.clone();
                let lambda_seq = root_partition_target(vv, &j)?;
                let w = sorting_word(&j, &lambda_seq)?;
                // `σ_w e(j)` reaches `e(i_λ)`; the pair runs the other way.
                let rev: Word = w.iter().rev().copied().collect();
                let second = word_pair(vv, &j, &rev)?;
                if second.target_idem != lambda_seq {
                    return Err(Error::Hypothesis("sorting permutation does not reach i_λ".into()));
                }
                first.then(vv, &second)?
            }
        }
    };
    if pair.source_idem == pair.target_idem {
        return WitnessPair::trivial(vv, i);
    }
    if !pair.verify(vv)? {
        return Err(Error::Hypothesis(format!(
            "witness identities fail for {}",
            crate::quiver::SeqDisplay(&orbit, i)
        )));
    }
    Ok(pair)
}

fn positions_of_tag(i: &[Vertex], tag: u8) -> Vec<usize> {
    i.iter().enumerate().filter(|(_, v)| v.orbit == tag).map(|(k, _)| k + 1).collect()
}

/// `i_λ` for the root partition `λ` on the branch of `j` with `θ(λ) = g(j)`.
fn root_partition_target(vv: &Algebra, j: &IdemSeq) -> Result<IdemSeq> {
    let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
    let orbit = &h.orbit;
    let side = if j.iter().all(|v| v.branch == Branch::Plus) { Branch::Plus } else { Branch::Minus };
    let nu_side = DimVector::from_list(&j.iter().map(|v| (*v, 1)).collect::<Vec<_>>());
    if !multiplicity_info(&nu_side).is_mult_one {
        return Err(Error::Hypothesis("ν must have multiplicity one".into()));
    }
    let parts = root_partitions(&nu_side, orbit)?;
    let g = theta_tuple(orbit, j)?;
    let lambda = theta_inverse(&g, &parts, orbit)?;
    debug_assert!(lambda.seq.iter().all(|v| v.branch == side));
    Ok(lambda.seq)
}

/// Sequences of the Morita idempotent `Σ_{λ∈Π±} e(i_λ)`.
pub fn root_partition_idems(nu: &DimVector, orbit: &OrbitDescriptor) -> Result<BTreeSet<IdemSeq>> {
    let (plus, minus) = plus_minus_partitions(nu, orbit)?;
    for p in &plus {
        theta_bijection(p, orbit)?;
    }
    Ok(plus.into_iter().chain(minus).map(|p| p.seq).collect())
}

/// Sequences of `Σ_{I^{ν̃⁺}} e(i)`, and of `Σ_{I^{ν̃⁻}} e(i)` when `both` is set.
pub fn plus_minus_idems(nu: &DimVector, orbit: &OrbitDescriptor, both: bool) -> BTreeSet<IdemSeq> {
    let plus: DimVector = DimVector::from_list(
        &nu.entries().iter().filter(|(v, _)| on_plus_side(orbit, v)).map(|(v, c)| (*v, *c)).collect::<Vec<_>>(),
    );
    let minus: DimVector = DimVector::from_list(
        &nu.entries().iter().filter(|(v, _)| !on_plus_side(orbit, v)).map(|(v, c)| (*v, *c)).collect::<Vec<_>>(),
    );
    let mut out: BTreeSet<IdemSeq> = arrangements(&plus).into_iter().collect();
    if both {
        out.extend(arrangements(&minus));
    }
    out
}

/// Sequences `ij` with every entry of sub-orbit 0 ahead of the others.
pub fn separated_block_idems(vv: &Algebra) -> Result<BTreeSet<IdemSeq>> {
    let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
    Ok(h.seqs
        .iter()
        .filter(|s| {
            let k = s.iter().filter(|v| v.orbit == 0).count();
            s[..k].iter().all(|v| v.orbit == 0)
        })
        .cloned()
        .collect())
}

/// The monomial `σ_w e(i)` in normal form, `w` given by a word.
pub fn sigma_word(vv: &Algebra, word: &[u8], i: &IdemSeq) -> Result<Element> {
    let mut g: Vec<Gen> = word.iter().map(|&c| Gen::S(c)).collect();
    g.push(Gen::E(i.clone()));
    vv.normal_form(&g, &Rational::one())
}
