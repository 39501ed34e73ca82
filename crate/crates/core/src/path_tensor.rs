//! The path algebras `A`, `Ã` of the 2-cycle quiver, the balanced tensor product over `k[z]`,
//! and truncated certificates for the affine heredity chain and balanced involution of `A`.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{path_multiply, Algebra, AlgebraDescriptor, Element, Gen, HMono, Mono, PathMono, PathWhich};
use crate::error::{Error, Result};
use crate::linalg::{rank, Field};
use crate::report::VerificationReport;
use crate::series::{geometric, rat, series_eq_up_to, TruncSeries};

/// Every path of length at most `cap`.
pub fn paths_up_to(cap: u32) -> Vec<PathMono> {
    (0..=cap).flat_map(|d| [PathMono::new(1, d), PathMono::new(2, d)]).collect()
}

fn path_el(p: PathMono) -> Element {
    Element::from_mono(Mono::Path(p))
}

/// `b ⊗ y` in `R⁺ ⊗_{k[z]} Ã`: every pair of arrows in `y` is traded for `z` acting on `b`.
pub fn kz_reduce(kz: &Algebra, b: &Element, y: &PathMono) -> Result<Element> {
    if kz.z_tag().is_none() {
        return Err(Error::InvalidArgument("kz_reduce needs an algebra R⁺ ⊗_{k[z]} Ã".into()));
    }
    let mut cur = Element::zero();
    for (m, c) in b.terms() {
        let hm = m.as_hecke().ok_or(Error::AlgebraMismatch)?;
        cur.add_term(Mono::Kz(hm.clone(), PathMono::idem(y.start)), c.clone());
    }
    for v in y.arrows() {
        cur = kz.prepend(&Gen::Factor(1, Box::new(Gen::PathU(v))), &cur)?;
    }
    Ok(cur)
}

/// `b·z ⊗ a_s` against `b ⊗ z·a_s` for `samples` random basis monomials `b`.
pub fn kz_well_defined_check(kz: &Algebra, samples: usize, seed: u64) -> Result<VerificationReport> {
    let tag = kz.z_tag().ok_or_else(|| Error::InvalidArgument("not a k[z]-tensor algebra".into()))?;
    let left = kz.hecke().ok_or(Error::AlgebraMismatch)?;
    let mut pool: Vec<HMono> = Vec::new();
    for d in left.min_degree()..=left.min_degree() + 4 {
        pool.extend(left.component_basis(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("kz_balance");
    for s in [1u8, 2] {
        let sign = if s == 1 { rat(1) } else { tag.a2_sign() };
        let mut bad = Vec::new();
        for _ in 0..samples {
            let b = pool.choose(&mut rng).ok_or_else(|| Error::InvalidArgument("empty R⁺".into()))?;
            let mut lhs = Element::zero();
            for (nb, c) in kz.z_times(b) {
                lhs.add_term(Mono::Kz(nb, PathMono::idem(s)), c);
            }
            let rhs = kz_reduce(kz, &Element::from_mono(Mono::Hecke(b.clone())), &PathMono::new(s, 2))?.scale(&sign);
            if lhs != rhs {
                bad.push(kz.format_mono(&Mono::Hecke(b.clone())));
            }
        }
        report.check(format!("bz⊗a{s} = b⊗za{s}"), bad.is_empty(), format!("{samples} samples; failing: {bad:?}"));
    }
    Ok(report)
}

/// Degree-`d` part of the two-sided ideal `A e₁ A`, as path monomials.
fn ideal_e1_component(d: u32) -> BTreeSet<PathMono> {
    let mut out = BTreeSet::new();
    for k in 0..=d {
        for p in [PathMono::new(1, k), PathMono::new(2, k)] {
            for q in [PathMono::new(1, d - k), PathMono::new(2, d - k)] {
                if let Some(pe) = path_multiply(&p, &PathMono::idem(1)) {
                    if let Some(r) = path_multiply(&pe, &q) {
                        out.insert(r);
                    }
                }
            }
        }
    }
    out
}

fn series_of(counts: &[usize], cap: i64) -> TruncSeries {
    let mut s = TruncSeries::zero(0, cap);
    for (d, c) in counts.iter().enumerate() {
        s.add_at(d as i64, rat(*c as i64));
    }
    s
}

/// `a / b` for a power series `b` with constant term 1.
fn series_div(a: &TruncSeries, b: &TruncSeries, cap: i64) -> TruncSeries {
    let mut q = TruncSeries::zero(0, cap);
    let mut rem = a.clone();
    for d in 0..=cap {
        let c = rem.coeff(d);
        if !c.is_zero() {
            q.add_at(d, c.clone());
            rem = rem.sub(&TruncSeries::monomial(d, c, cap).mul(b));
        }
    }
    q
}

/// Graded dimension of `e₁Ae₁` up to `cap`, counted from paths.
pub fn corner_e1_dimension(cap: i64) -> TruncSeries {
    let counts: Vec<usize> =
        (0..=cap as u32).map(|d| usize::from(PathMono::new(1, d).end() == 1)).collect();
    series_of(&counts, cap)
}

/// Dimension of the space of degree-`shift` module maps `Ae₁A → A/Ae₁A`, using paths up to `cap`.
fn hom_into_quotient(cap: u32, shift: i64) -> Result<usize> {
    let ideal: Vec<PathMono> = (0..=cap).flat_map(ideal_e1_component).collect();
    let in_ideal: BTreeSet<PathMono> = ideal.iter().copied().collect();
    // f(b) = c_b · ē₂; only paths of degree −shift can have c_b ≠ 0.
    let target_deg = -shift;
    let unknowns: Vec<PathMono> = ideal.iter().copied().filter(|b| b.degree() == target_deg).collect();
    if unknowns.is_empty() {
        return Ok(0);
    }
    let var = |b: &PathMono| Element::from_mono(Mono::Path(*b));
    let mut rows = Vec::new();
    for b in &ideal {
        for g in [Gen::PathE(1), Gen::PathE(2), Gen::PathU(1), Gen::PathU(2)] {
            let gb = match &g {
                Gen::PathE(v) => (b.end() == *v).then_some(*b),
                Gen::PathU(v) => (b.end() == *v).then_some(PathMono::new(b.start, b.len + 1)),
                _ => unreachable!(),
            };
            let mut row = Element::zero();
            if let Some(gb) = gb {
                if gb.degree() == target_deg && in_ideal.contains(&gb) {
                    row = row.add(&var(&gb));
                }
            }
            // g acts on ē₂ by 1 for e₂ and by 0 otherwise.
            if b.degree() == target_deg && g == Gen::PathE(2) {
                row = row.sub(&var(b));
            }
            if !row.is_zero() {
                rows.push(row);
            }
        }
    }
    Ok(unknowns.len() - rank(&rows, Field::Rational)?)
}

/// The chain `0 ⊊ Ae₁A ⊊ A` checked degreewise up to `cap`.
pub fn heredity_chain_check(cap: i64) -> Result<VerificationReport> {
    if cap < 1 {
        return Err(Error::InvalidArgument("cap must be positive".into()));
    }
    let a = Algebra::new(AlgebraDescriptor::path(PathWhich::A))?;
    let mut report = VerificationReport::new("heredity").with_config("cap", cap);
    let ucap = cap as u32;

    let mut decomposition_ok = true;
    let mut ideal_counts = Vec::new();
    for d in 0..=ucap {
        let ideal = ideal_e1_component(d);
        let left: BTreeSet<PathMono> = [PathMono::new(1, d)].into_iter().collect();
        let right: BTreeSet<PathMono> = if d >= 1 { [PathMono::new(2, d)].into_iter().collect() } else { BTreeSet::new() };
        let sum: BTreeSet<PathMono> = left.union(&right).copied().collect();
        let direct = left.is_disjoint(&right);
        decomposition_ok &= direct && sum == ideal;
        ideal_counts.push(ideal.len());
    }
    report.check("Ae1A = Ae1 ⊕ Au2e2", decomposition_ok, format!("dim_q(Ae1A) = {}", series_of(&ideal_counts, cap)));

    let p1 = series_of(&vec![1; ucap as usize + 1], cap);
    let mult = series_div(&series_of(&ideal_counts, cap), &p1, cap);
    let expected = TruncSeries::from_ints(&[1, 1], cap);
    report.check("m1(q) = 1+q", series_eq_up_to(&mult, &expected, cap)?, format!("m1(q) = {mult}"));

    // Right multiplication by u₂e₂ identifies Ae₁ with Au₂e₂ up to a shift by one.
    let shift_ok = (0..ucap).all(|d| {
        path_multiply(&PathMono::new(1, d), &PathMono::new(2, 1)) == Some(PathMono::new(2, d + 1))
    });
    report.check("Au2e2 ≅ q·Ae1", shift_ok, "a ↦ a·u2e2 is a bijection of bases");

    let corner = corner_e1_dimension(cap);
    let poly = geometric(2, cap)?;
    report.check(
        "e1Ae1 = k[u2u1]",
        series_eq_up_to(&corner, &poly, cap)?,
        format!("dim_q(e1Ae1) = {corner}; u2u1 has degree 2"),
    );

    let mut free_ok = true;
    for d in 0..=ucap {
        let mut images = Vec::new();
        for g in [PathMono::idem(1), PathMono::new(1, 1)] {
            for k in (0..=d).filter(|k| k % 2 == 0) {
                let c = PathMono::new(1, k);
                if g.degree() + c.degree() == d as i64 {
                    if let Some(p) = path_multiply(&g, &c) {
                        images.push(path_el(p));
                    }
                }
            }
        }
        let dim_ae1 = 1;
        free_ok &= images.len() == dim_ae1 && rank(&images, Field::Rational)? == dim_ae1;
    }
    report.check("Ae1 free over e1Ae1 on {e1, u1e1}", free_ok, format!("degrees 0..={cap}"));

    let mut hom_dims = Vec::new();
    for shift in -cap..=cap {
        hom_dims.push(hom_into_quotient(ucap, shift)?);
    }
    report.check(
        "Hom(Ae1A, A/Ae1A) = 0",
        hom_dims.iter().all(|&h| h == 0),
        format!("shifts -{cap}..={cap}, truncated at degree {cap}"),
    );

    let quotient: Vec<usize> =
        (0..=ucap).map(|d| a.component_basis(d as i64).len() - ideal_e1_component(d).len()).collect();
    let one = TruncSeries::one(cap);
    report.check(
        "A/Ae1A ≅ k",
        series_eq_up_to(&series_of(&quotient, cap), &one, cap)?,
        format!("dim_q(A/Ae1A) = {}", series_of(&quotient, cap)),
    );
    Ok(report)
}

/// `τ`: fixes `e_i`, swaps `u₁` and `u₂`, reverses products.
pub fn tau(a: &Algebra, p: &PathMono) -> Result<Element> {
    let word: Vec<Gen> = a
        .spell(&Mono::Path(*p))
        .into_iter()
        .rev()
        .map(|g| match g {
            Gen::PathU(v) => Gen::PathU(3 - v),
            other => other,
        })
        .collect();
    a.normal_form(&word, &rat(1))
}

fn tau_el(a: &Algebra, x: &Element) -> Result<Element> {
    let mut out = Element::zero();
    for (m, c) in x.terms() {
        match m {
            Mono::Path(p) => out.add_scaled(c, &tau(a, p)?),
            _ => return Err(Error::AlgebraMismatch),
        }
    }
    Ok(out)
}

/// Action of a path on the simple module `L(v)`: `e_v` acts by 1, everything else by 0.
fn simple_action(v: u8, p: &PathMono) -> i64 {
    i64::from(p.len == 0 && p.start == v)
}

pub fn balanced_involution_check(cap: u32) -> Result<VerificationReport> {
    let a = Algebra::new(AlgebraDescriptor::path(PathWhich::A))?;
    let mut report = VerificationReport::new("balanced_involution").with_config("cap", cap);
    let paths = paths_up_to(cap);

    let fixes_idems = (1..=2).all(|v| tau(&a, &PathMono::idem(v)).ok() == Some(path_el(PathMono::idem(v))));
    let swaps = tau(&a, &PathMono::new(1, 1))? == path_el(PathMono::new(2, 1))
        && tau(&a, &PathMono::new(2, 1))? == path_el(PathMono::new(1, 1));
    report.check("tau on generators", fixes_idems && swaps, "e_i ↦ e_i, u1 ↦ u2, u2 ↦ u1");

    let mut involutive = true;
    let mut graded = true;
    for p in &paths {
        let t = tau(&a, p)?;
        graded &= a.degree_of(&t).1 == Some(p.degree());
        involutive &= tau_el(&a, &t)? == path_el(*p);
    }
    report.check("tau^2 = id", involutive, format!("{} paths of length <= {cap}", paths.len()));
    report.check("tau preserves degree", graded, "");

    let mut anti = true;
    for p in &paths {
        for q in &paths {
            let pq = a.multiply(&path_el(*p), &path_el(*q))?;
            let rhs = a.multiply(&tau(&a, q)?, &tau(&a, p)?)?;
            anti &= tau_el(&a, &pq)? == rhs;
        }
    }
    report.check("tau(pq) = tau(q)tau(p)", anti, format!("{} pairs", paths.len() * paths.len()));

    // (a·f)(ℓ) = f(τ(a)·ℓ) on the dual of L(v) must match the action on L(v).
    let mut table = Vec::new();
    let mut dual_ok = true;
    for v in 1..=2u8 {
        for p in &paths {
            let t = tau(&a, p)?;
            let dual: i64 = t
                .terms()
                .map(|(m, c)| match m {
                    Mono::Path(q) if simple_action(v, q) == 1 => c.clone(),
                    _ => rat(0),
                })
                .fold(rat(0), |acc, c| acc + c)
                .to_integer()
                .try_into()
                .unwrap_or(i64::MAX);
            dual_ok &= dual == simple_action(v, p);
            if v == 1 && p.len <= 1 {
                let name = a.format_mono(&Mono::Path(*p));
                table.push(format!("{name}·f = {}", if dual == 1 { "f" } else { "0" }));
            }
        }
    }
    report.check("L(i)* ≅ L(i)", dual_ok, table.join(", "));
    Ok(report)
}

/// Graded dimension of `A^{⊗(m−1)} ⊗ Ã` against `2^m/(1−q)^m`.
pub fn tensor_power_dimension_check(m: usize, cap: i64) -> Result<VerificationReport> {
    let alg = Algebra::new(AlgebraDescriptor::path_tensor_power(m))?;
    let got = alg.graded_dimension(cap);
    let want = geometric(1, cap)?.pow(m as u32).scale(&rat(1 << m));
    let mut report = VerificationReport::new("tensor_power");
    report.check(format!("dim_q(A^{{⊗{}}}⊗Ã)", m - 1), series_eq_up_to(&got, &want, cap)?, format!("{got}"));
    Ok(report)
}
