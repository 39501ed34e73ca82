//! Defining-relation instances checked against the engine.
//!
//! The right-hand sides here are transcribed from the presentations and computed from arrow
//! counts directly; they never call the engine's own rule tables, so a corrupted rule constant
//! shows up as a violation.

use std::collections::BTreeMap;

use num_traits::One;

use super::{Algebra, Element, Gen};
use crate::error::Result;
use crate::quiver::{IdemSeq, OrbitDescriptor, Vertex};
use crate::report::VerificationReport;
use crate::series::{rat, Rational};
use crate::weyl::canonical_word;

/// A formal combination of generator words.
pub type WordSum = Vec<(Rational, Vec<Gen>)>;

#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub family: &'static str,
    pub lhs: WordSum,
    pub rhs: WordSum,
    /// The rightmost idempotent of every word; right contexts must have this left idempotent.
    pub idem: IdemSeq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Context {
    /// Relations checked as stated.
    Bare,
    /// Relations multiplied on the right by every `σ_ẇ e(j)` with matching idempotent.
    Words,
    /// As `Words`, and also by `σ_ẇ x_a e(j)` for every `a`.
    WordsAndDots,
}

fn word(gens: Vec<Gen>) -> WordSum {
    vec![(Rational::one(), gens)]
}

fn x_poly(terms: &[(i64, &[usize])], j: &IdemSeq) -> WordSum {
    terms
        .iter()
        .map(|(c, xs)| {
            let mut g: Vec<Gen> = xs.iter().map(|&a| Gen::X(a)).collect();
            g.push(Gen::E(j.clone()));
            (rat(*c), g)
        })
        .collect()
}

fn swapped(j: &IdemSeq, k: usize) -> IdemSeq {
    let mut out = j.clone();
    out.swap(k - 1, k);
    out
}

/// `(#arrows i → j, #arrows j → i)`.
fn arrows(orbit: &OrbitDescriptor, i: &Vertex, j: &Vertex) -> (u32, u32) {
    (orbit.arrow_count(i, j), orbit.arrow_count(j, i))
}

/// `σ_k² e(j)`.
fn quadratic_rhs(orbit: &OrbitDescriptor, j: &IdemSeq, k: usize) -> WordSum {
    let (a, b) = (&j[k - 1], &j[k]);
    if a == b {
        return Vec::new();
    }
    let (k1, k2) = (k, k + 1);
    match arrows(orbit, a, b) {
        (0, 0) => x_poly(&[(1, &[])], j),
        // i_k → i_{k+1}
        (1, 0) => x_poly(&[(1, &[k1]), (-1, &[k2])], j),
        // i_k ← i_{k+1}
        (0, 1) => x_poly(&[(1, &[k2]), (-1, &[k1])], j),
        // (x_{k+1} − x_k)(x_k − x_{k+1})
        _ => x_poly(&[(1, &[k2, k1]), (-1, &[k2, k2]), (-1, &[k1, k1]), (1, &[k1, k2])], j),
    }
}

/// `(σ_{k+1}σ_kσ_{k+1} − σ_kσ_{k+1}σ_k) e(j)`.
fn braid3_rhs(orbit: &OrbitDescriptor, j: &IdemSeq, k: usize) -> WordSum {
    if j[k - 1] != j[k + 1] {
        return Vec::new();
    }
    match arrows(orbit, &j[k - 1], &j[k]) {
        (0, 0) => Vec::new(),
        (1, 0) => x_poly(&[(1, &[])], j),
        (0, 1) => x_poly(&[(-1, &[])], j),
        _ => x_poly(&[(2, &[k + 1]), (-1, &[k + 2]), (-1, &[k])], j),
    }
}

/// `(σ_k x_l − x_{s_k(l)} σ_k) e(j)`.
fn dot_rhs(j: &IdemSeq, k: usize, l: usize) -> WordSum {
    if j[k - 1] != j[k] {
        return Vec::new();
    }
    if l == k {
        x_poly(&[(-1, &[])], j)
    } else if l == k + 1 {
        x_poly(&[(1, &[])], j)
    } else {
        Vec::new()
    }
}

/// `π² e(j)`.
fn pi_square_rhs(orbit: &OrbitDescriptor, j: &IdemSeq) -> WordSum {
    if orbit.is_q(&j[0]) {
        x_poly(&[(1, &[1])], j)
    } else if orbit.is_q_inv(&j[0]) {
        x_poly(&[(-1, &[1])], j)
    } else {
        x_poly(&[(1, &[])], j)
    }
}

/// `((σ_1π)² − (πσ_1)²) e(j)`.
fn pi_braid_rhs(orbit: &OrbitDescriptor, j: &IdemSeq) -> WordSum {
    let inv1 = orbit.theta(&j[0]);
    if inv1 != j[1] || !(orbit.is_q(&j[0]) || orbit.is_q_inv(&j[0])) {
        return Vec::new();
    }
    let c = if orbit.is_q_inv(&j[1]) { 1 } else { -1 };
    vec![(rat(c), vec![Gen::S(1), Gen::E(j.clone())])]
}

fn s_k_of(k: usize, l: usize) -> usize {
    if l == k {
        k + 1
    } else if l == k + 1 {
        k
    } else {
        l
    }
}

/// Every defining-relation instance of a KLR or VV algebra, indexed by its right idempotent.
pub fn relation_instances(alg: &Algebra) -> Vec<RelationInstance> {
    let h = match alg.hecke() {
        Some(h) if alg.z_tag().is_none() => h,
        _ => return Vec::new(),
    };
    let orbit = &h.orbit;
    let m = h.m;
    let mut out = Vec::new();
    let mut push = |family: &'static str, lhs: WordSum, rhs: WordSum, idem: &IdemSeq| {
        out.push(RelationInstance { family, lhs, rhs, idem: idem.clone() });
    };
    let e = |j: &IdemSeq| Gen::E(j.clone());
    for j in &h.seqs {
        for i in &h.seqs {
            let rhs = if i == j { word(vec![e(j)]) } else { Vec::new() };
            push("idempotents_orthogonal", word(vec![e(i), e(j)]), rhs, j);
        }
        for l in 1..=m {
            push("x_commutes_with_e", word(vec![Gen::X(l), e(j)]), word(vec![e(j), Gen::X(l), e(j)]), j);
            for l2 in l + 1..=m {
                push("x_commute", word(vec![Gen::X(l), Gen::X(l2), e(j)]), word(vec![Gen::X(l2), Gen::X(l), e(j)]), j);
            }
        }
        for k in 1..m {
            let ku = k as u8;
            push("sigma_moves_e", word(vec![Gen::S(ku), e(j)]), word(vec![e(&swapped(j, k)), Gen::S(ku), e(j)]), j);
            let cross = j[k - 1].orbit != j[k].orbit;
            let family = if cross { "quadratic_cross_orbit" } else { "quadratic" };
            push(family, word(vec![Gen::S(ku), Gen::S(ku), e(j)]), quadratic_rhs(orbit, j, k), j);
            for k2 in k + 2..m {
                let k2u = k2 as u8;
                push("far_commute", word(vec![Gen::S(ku), Gen::S(k2u), e(j)]), word(vec![Gen::S(k2u), Gen::S(ku), e(j)]), j);
            }
            if k + 1 < m {
                let k1 = ku + 1;
                let lhs = vec![
                    (Rational::one(), vec![Gen::S(k1), Gen::S(ku), Gen::S(k1), e(j)]),
                    (-Rational::one(), vec![Gen::S(ku), Gen::S(k1), Gen::S(ku), e(j)]),
                ];
                push("braid", lhs, braid3_rhs(orbit, j, k), j);
            }
            for l in 1..=m {
                let lhs = vec![
                    (Rational::one(), vec![Gen::S(ku), Gen::X(l), e(j)]),
                    (-Rational::one(), vec![Gen::X(s_k_of(k, l)), Gen::S(ku), e(j)]),
                ];
                push("dot_slide", lhs, dot_rhs(j, k, l), j);
            }
        }
        if h.signed && m >= 1 {
            let mut t = j.clone();
            t[0] = orbit.theta(&j[0]);
            push("pi_moves_e", word(vec![Gen::S(0), e(j)]), word(vec![e(&t), Gen::S(0), e(j)]), j);
            push("pi_square", word(vec![Gen::S(0), Gen::S(0), e(j)]), pi_square_rhs(orbit, j), j);
            push("pi_x1_anticommute", word(vec![Gen::S(0), Gen::X(1), e(j)]), vec![(-Rational::one(), vec![Gen::X(1), Gen::S(0), e(j)])], j);
            for l in 2..=m {
                push("pi_x_commute", word(vec![Gen::S(0), Gen::X(l), e(j)]), word(vec![Gen::X(l), Gen::S(0), e(j)]), j);
            }
            for k in 2..m {
                let ku = k as u8;
                push("pi_sigma_commute", word(vec![Gen::S(0), Gen::S(ku), e(j)]), word(vec![Gen::S(ku), Gen::S(0), e(j)]), j);
            }
            if m >= 2 {
                let lhs = vec![
                    (Rational::one(), vec![Gen::S(1), Gen::S(0), Gen::S(1), Gen::S(0), e(j)]),
                    (-Rational::one(), vec![Gen::S(0), Gen::S(1), Gen::S(0), Gen::S(1), e(j)]),
                ];
                push("pi_braid", lhs, pi_braid_rhs(orbit, j), j);
            }
        }
    }
    out
}

/// `Σ c · w · tail` with `tail` already in normal form.
fn evaluate(alg: &Algebra, sum: &WordSum, tail: &Element) -> Result<Element> {
    let mut acc = Element::zero();
    for (c, w) in sum {
        let mut cur = tail.clone();
        for g in w.iter().rev() {
            cur = alg.prepend(g, &cur)?;
        }
        acc.add_scaled(c, &cur);
    }
    Ok(acc)
}

fn uses_letters(inst: &RelationInstance) -> bool {
    inst.lhs.iter().any(|(_, w)| w.iter().any(|g| matches!(g, Gen::S(_))))
}

/// Right contexts `σ_ẇ x^n e(j)` grouped by their left idempotent `w·j`.
fn contexts(alg: &Algebra, mode: Context) -> BTreeMap<IdemSeq, Vec<Vec<Gen>>> {
    let mut out: BTreeMap<IdemSeq, Vec<Vec<Gen>>> = BTreeMap::new();
    let h = alg.hecke().expect("hecke algebra");
    if mode == Context::Bare {
        return out;
    }
    for w in h.group() {
        let cw = if h.m == 0 { Vec::new() } else { canonical_word(&w) };
        for j in &h.seqs {
            let left = h.act_word(&cw, j);
            let letters: Vec<Gen> = cw.iter().map(|&c| Gen::S(c)).collect();
            let mut dots: Vec<Option<usize>> = vec![None];
            if mode == Context::WordsAndDots {
                dots.extend((1..=h.m).map(Some));
            }
            for d in dots {
                let mut g = letters.clone();
                if let Some(a) = d {
                    g.push(Gen::X(a));
                }
                g.push(Gen::E(j.clone()));
                out.entry(left.clone()).or_default().push(g);
            }
        }
    }
    out
}

/// Checks every relation instance, optionally against right contexts, grouping results by family.
pub fn relation_suite(alg: &Algebra, mode: Context) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("relations");
    let instances = relation_instances(alg);
    let ctx = contexts(alg, mode);
    let unit = alg.unit();
    let mut families: BTreeMap<&'static str, (usize, Vec<String>)> = BTreeMap::new();
    let mut by_idem: BTreeMap<&IdemSeq, Vec<&RelationInstance>> = BTreeMap::new();
    for inst in &instances {
        by_idem.entry(&inst.idem).or_default().push(inst);
    }
    for (idem, insts) in by_idem {
        let mut tails: Vec<(Vec<Gen>, Element)> = vec![(Vec::new(), unit.clone())];
        for c in ctx.get(idem).map(|v| v.as_slice()).unwrap_or(&[]) {
            tails.push((c.clone(), alg.normal_form(c, &Rational::one())?));
        }
        for inst in insts {
            let n = if uses_letters(inst) { tails.len() } else { 1 };
            let entry = families.entry(inst.family).or_default();
            for (c, tail) in &tails[..n] {
                entry.0 += 1;
                let diff = evaluate(alg, &inst.lhs, tail)?.sub(&evaluate(alg, &inst.rhs, tail)?);
                if !diff.is_zero() {
                    let lhs: Vec<String> = inst.lhs[0].1.iter().map(|g| alg.format_gen(g)).collect();
                    let ctx: Vec<String> = c.iter().map(|g| alg.format_gen(g)).collect();
                    entry.1.push(format!(
                        "{} | context {} | residue {}",
                        lhs.join("*"),
                        if ctx.is_empty() { "1".to_string() } else { ctx.join("*") },
                        alg.format_element(&diff)
                    ));
                }
            }
        }
    }
    for (family, (count, violations)) in families {
        let detail = if violations.is_empty() {
            format!("{count} instances")
        } else {
            let shown: Vec<&String> = violations.iter().take(3).collect();
            format!("{} of {count} instances violated; first: {}", violations.len(), shown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("; "))
        };
        report.check(family, violations.is_empty(), detail);
    }
    Ok(report)
}
