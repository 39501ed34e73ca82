//! Algebras given by presentation descriptors, their canonical bases and exact products.

pub mod hecke;
pub mod path;
pub mod relations;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quiver::{arrangements, multiplicity_info, theta_sequences, Branch, DimVector, IdemSeq, OrbitDescriptor, Vertex};
use crate::series::{geometric, Rational, TruncSeries};

pub use hecke::{compositions, HMono, HeckeAlgebra, Lin, Mutation};
pub use path::{path_multiply, PathMono};

/// A basis monomial of any supported algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mono {
    Hecke(HMono),
    Path(PathMono),
    Tensor(Vec<Mono>),
    /// `b ⊗ y` with `y ∈ {a_1, a_2, v_1a_1, v_2a_2}` (paths of length at most one).
    Kz(HMono, PathMono),
}

impl Mono {
    pub fn as_hecke(&self) -> Option<&HMono> {
        match self {
            Mono::Hecke(h) => Some(h),
            _ => None,
        }
    }
}

/// A finite rational combination of basis monomials; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Mono, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn from_mono(m: Mono) -> Self {
        Element::from_term(m, Rational::one())
    }

    pub fn from_term(m: Mono, c: Rational) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn from_lin(lin: Lin) -> Self {
        Element { terms: lin.into_iter().map(|(k, v)| (Mono::Hecke(k), v)).collect() }
    }

    pub fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &Element) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(&Rational::one(), other);
        e
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(&-Rational::one(), other);
        e
    }

    pub fn scale(&self, c: &Rational) -> Element {
        let mut e = Element::zero();
        e.add_scaled(c, self);
        e
    }

    pub fn neg(&self) -> Element {
        self.scale(&-Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Hecke part as a linear combination (other monomial kinds are ignored).
    pub fn to_lin(&self) -> Lin {
        self.terms.iter().filter_map(|(m, c)| m.as_hecke().map(|h| (h.clone(), c.clone()))).collect()
    }
}

/// A generator token.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    E(IdemSeq),
    X(usize),
    /// `σ_k` for `k >= 1`, `π` for `k = 0`.
    S(u8),
    /// Vertex idempotent `e_i` (or `a_i`) of a path algebra.
    PathE(u8),
    /// Arrow leaving vertex `i`: `u_i e_i` (or `v_i a_i`).
    PathU(u8),
    /// A generator of tensor factor `t`.
    Factor(usize, Box<Gen>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathWhich {
    A,
    ATilde,
}

/// Which `k[z]`-action on `Ã` is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZTag {
    /// `z·a_1 = v_2v_1a_1`, `z·a_2 = −v_1v_2a_2`, `z` acting on `R⁺` through `x` at the position of `q`.
    QCase,
    /// `z·a_2 = +v_1v_2a_2`, `z` acting through the sum of `x` at the two positions of `p`.
    PCase,
}

impl ZTag {
    /// Sign `ε` with `v_1v_2a_2 = ε z·a_2`.
    pub fn a2_sign(self) -> Rational {
        match self {
            ZTag::QCase => -Rational::one(),
            ZTag::PCase => Rational::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Klr { nu_tilde: DimVector, orbit: OrbitDescriptor },
    Vv { nu: DimVector, orbit: OrbitDescriptor },
    SeparatedVv { nu: DimVector, orbit: OrbitDescriptor },
    PathAlgebra(PathWhich),
    TensorOverK(Vec<AlgebraDescriptor>),
    /// `R⁺ ⊗_{k[z]} Ã` where `R⁺` is the KLR algebra of the plus half of `nu`.
    TensorOverKz { nu: DimVector, orbit: OrbitDescriptor, tag: ZTag },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    pub kind: AlgebraKind,
    pub cap: i64,
}

impl AlgebraDescriptor {
    pub fn klr(nu_tilde: DimVector, orbit: OrbitDescriptor) -> Self {
        AlgebraDescriptor { kind: AlgebraKind::Klr { nu_tilde, orbit }, cap: crate::series::DEFAULT_CAP }
    }

    pub fn vv(nu: DimVector, orbit: OrbitDescriptor) -> Self {
        let kind = if orbit.is_separated() {
            AlgebraKind::SeparatedVv { nu, orbit }
        } else {
            AlgebraKind::Vv { nu, orbit }
        };
        AlgebraDescriptor { kind, cap: crate::series::DEFAULT_CAP }
    }

    pub fn path(which: PathWhich) -> Self {
        AlgebraDescriptor { kind: AlgebraKind::PathAlgebra(which), cap: crate::series::DEFAULT_CAP }
    }

    pub fn tensor(parts: Vec<AlgebraDescriptor>) -> Self {
        AlgebraDescriptor { kind: AlgebraKind::TensorOverK(parts), cap: crate::series::DEFAULT_CAP }
    }

    /// `A^{⊗(m−1)} ⊗ Ã`.
    pub fn path_tensor_power(m: usize) -> Self {
        let mut parts = vec![AlgebraDescriptor::path(PathWhich::A); m.saturating_sub(1)];
        parts.push(AlgebraDescriptor::path(PathWhich::ATilde));
        AlgebraDescriptor::tensor(parts)
    }

    pub fn kz(nu: DimVector, orbit: OrbitDescriptor, tag: ZTag) -> Self {
        AlgebraDescriptor { kind: AlgebraKind::TensorOverKz { nu, orbit, tag }, cap: crate::series::DEFAULT_CAP }
    }

    pub fn with_cap(mut self, cap: i64) -> Self {
        self.cap = cap;
        self
    }

    pub fn orbit(&self) -> Option<&OrbitDescriptor> {
        match &self.kind {
            AlgebraKind::Klr { orbit, .. }
            | AlgebraKind::Vv { orbit, .. }
            | AlgebraKind::SeparatedVv { orbit, .. }
            | AlgebraKind::TensorOverKz { orbit, .. } => Some(orbit),
            _ => None,
        }
    }
}

enum Imp {
    Hecke(HeckeAlgebra),
    Path(PathWhich),
    Tensor(Vec<Algebra>),
    Kz { left: HeckeAlgebra, tag: ZTag, z: Lin },
}

pub struct Algebra {
    desc: AlgebraDescriptor,
    imp: Imp,
}

fn check_vertices(nu: &DimVector, orbit: &OrbitDescriptor) -> Result<()> {
    for v in nu.entries().keys() {
        if (v.orbit as usize) >= orbit.num_parts() || orbit.normalize(*v) != *v {
            return Err(Error::InvalidDimVector(format!("vertex {v:?} is not in the orbit")));
        }
    }
    Ok(())
}

/// `Σ_i x_{φ_i(q)} e(i)` (q case) or `Σ_i (x_{φ_{i,1}(p)} + x_{φ_{i,2}(p)}) e(i)` (p case).
fn z_element(left: &HeckeAlgebra, special: &Vertex) -> Lin {
    let mut z = Lin::new();
    for i in &left.seqs {
        for (k, v) in i.iter().enumerate() {
            if v == special {
                let mut mono = HMono::idem(i.clone());
                mono.exps[k] += 1;
                hecke::lin_add(&mut z, mono, Rational::one());
            }
        }
    }
    z
}

impl Algebra {
    pub fn new(desc: AlgebraDescriptor) -> Result<Self> {
        let imp = match &desc.kind {
            AlgebraKind::Klr { nu_tilde, orbit } => {
                orbit.validate()?;
                check_vertices(nu_tilde, orbit)?;
                let seqs = arrangements(nu_tilde);
                Imp::Hecke(HeckeAlgebra::new(orbit.clone(), nu_tilde.total() as usize, false, seqs))
            }
            AlgebraKind::Vv { nu, orbit } | AlgebraKind::SeparatedVv { nu, orbit } => {
                orbit.validate()?;
                check_vertices(nu, orbit)?;
                if matches!(desc.kind, AlgebraKind::SeparatedVv { .. }) != orbit.is_separated() {
                    return Err(Error::InvalidArgument("separated VV algebras need a separated orbit".into()));
                }
                let seqs = theta_sequences(nu, orbit)?;
                Imp::Hecke(HeckeAlgebra::new(orbit.clone(), (nu.total() / 2) as usize, true, seqs))
            }
            AlgebraKind::PathAlgebra(w) => Imp::Path(*w),
            AlgebraKind::TensorOverK(parts) => {
                Imp::Tensor(parts.iter().map(|p| Algebra::new(p.clone())).collect::<Result<Vec<_>>>()?)
            }
            AlgebraKind::TensorOverKz { nu, orbit, tag } => {
                orbit.validate()?;
                check_vertices(nu, orbit)?;
                if !nu.is_theta_symmetric(orbit) {
                    return Err(Error::InvalidDimVector("not θ-symmetric".into()));
                }
                let special = orbit.special_vertex().ok_or_else(|| Error::Hypothesis("orbit contains neither q nor p".into()))?;
                let mult = multiplicity_info(nu).per_vertex.get(&special).copied().unwrap_or(0);
                match tag {
                    ZTag::QCase if !orbit.is_q(&special) || mult != 1 => {
                        return Err(Error::Hypothesis("q must appear with multiplicity one".into()))
                    }
                    ZTag::PCase if !orbit.is_p(&special) || mult != 2 => {
                        return Err(Error::Hypothesis("p must appear with multiplicity exactly 2".into()))
                    }
                    _ => {}
                }
                let plus = nu.branch_part(Branch::Plus);
                let left = HeckeAlgebra::new(orbit.clone(), plus.total() as usize, false, arrangements(&plus));
                let z = z_element(&left, &special);
                Imp::Kz { left, tag: *tag, z }
            }
        };
        Ok(Algebra { desc, imp })
    }

    /// Rebuilds the algebra with one rule constant corrupted (Hecke kinds only).
    pub fn with_mutation(self, mutation: Option<Mutation>) -> Self {
        let imp = match self.imp {
            Imp::Hecke(h) => Imp::Hecke(h.with_mutation(mutation)),
            other => other,
        };
        Algebra { desc: self.desc, imp }
    }

    pub fn descriptor(&self) -> &AlgebraDescriptor {
        &self.desc
    }

    pub fn hecke(&self) -> Option<&HeckeAlgebra> {
        match &self.imp {
            Imp::Hecke(h) => Some(h),
            Imp::Kz { left, .. } => Some(left),
            _ => None,
        }
    }

    pub fn is_vv(&self) -> bool {
        matches!(&self.imp, Imp::Hecke(h) if h.signed)
    }

    pub fn factors(&self) -> Option<&[Algebra]> {
        match &self.imp {
            Imp::Tensor(f) => Some(f),
            _ => None,
        }
    }

    pub fn z_tag(&self) -> Option<ZTag> {
        match &self.imp {
            Imp::Kz { tag, .. } => Some(*tag),
            _ => None,
        }
    }

    /// Right action of `z` on the left factor of `R⁺ ⊗_{k[z]} Ã`.
    pub fn z_times(&self, b: &HMono) -> Lin {
        match &self.imp {
            Imp::Kz { left, z, .. } => left.mono_times(b, z),
            _ => Lin::new(),
        }
    }

    pub fn unit(&self) -> Element {
        match &self.imp {
            Imp::Hecke(h) => Element::from_lin(h.unit()),
            Imp::Path(_) => {
                let mut e = Element::from_mono(Mono::Path(PathMono::idem(1)));
                e.add_term(Mono::Path(PathMono::idem(2)), Rational::one());
                e
            }
            Imp::Tensor(parts) => {
                let mut acc = Element::from_mono(Mono::Tensor(Vec::new()));
                for p in parts {
                    acc = tensor_extend(&acc, &p.unit());
                }
                acc
            }
            Imp::Kz { left, .. } => {
                let mut e = Element::zero();
                for i in &left.seqs {
                    for a in [1, 2] {
                        e.add_term(Mono::Kz(HMono::idem(i.clone()), PathMono::idem(a)), Rational::one());
                    }
                }
                e
            }
        }
    }

    pub fn idem(&self, seq: &[Vertex]) -> Result<Element> {
        let h = self.hecke().ok_or(Error::AlgebraMismatch)?;
        if !h.has_seq(seq) {
            return Err(Error::IdemOutside(format!("{seq:?}")));
        }
        Ok(Element::from_mono(Mono::Hecke(HMono::idem(seq.to_vec()))))
    }

    /// Sum of `e(i)` over the given sequences.
    pub fn idem_sum(&self, seqs: &[IdemSeq]) -> Result<Element> {
        let mut e = Element::zero();
        for s in seqs {
            e = e.add(&self.idem(s)?);
        }
        Ok(e)
    }

    pub fn check_gen(&self, g: &Gen) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidToken(what));
        match (&self.imp, g) {
            (Imp::Hecke(h), Gen::E(seq)) => {
                if h.has_seq(seq) {
                    Ok(())
                } else {
                    Err(Error::IdemOutside(format!("{seq:?}")))
                }
            }
            (Imp::Hecke(h), Gen::X(a)) => {
                if *a >= 1 && *a <= h.m {
                    Ok(())
                } else {
                    bad(format!("x{a} out of range 1..={}", h.m))
                }
            }
            (Imp::Hecke(h), Gen::S(k)) => {
                if (*k as usize) < h.m && (*k >= 1 || h.signed) {
                    Ok(())
                } else if *k == 0 {
                    bad("pi is not a generator of a KLR algebra".into())
                } else {
                    bad(format!("s{k} out of range"))
                }
            }
            (Imp::Path(_), Gen::PathE(v) | Gen::PathU(v)) if *v == 1 || *v == 2 => Ok(()),
            (Imp::Tensor(parts), Gen::Factor(t, inner)) if *t < parts.len() => parts[*t].check_gen(inner),
            (Imp::Kz { left, .. }, Gen::Factor(0, inner)) => match inner.as_ref() {
                Gen::E(s) if left.has_seq(s) => Ok(()),
                Gen::X(a) if *a >= 1 && *a <= left.m => Ok(()),
                Gen::S(k) if *k >= 1 && (*k as usize) < left.m => Ok(()),
                other => bad(format!("{other:?}")),
            },
            (Imp::Kz { .. }, Gen::Factor(1, inner)) => match inner.as_ref() {
                Gen::PathE(v) | Gen::PathU(v) if *v == 1 || *v == 2 => Ok(()),
                other => bad(format!("{other:?}")),
            },
            (_, other) => bad(format!("{other:?} is not a generator of this algebra")),
        }
    }

    /// `g · mono` in normal form.
    pub fn prepend_mono(&self, g: &Gen, mono: &Mono) -> Result<Element> {
        match (&self.imp, mono) {
            (Imp::Hecke(h), Mono::Hecke(hm)) => Ok(Element::from_lin(hecke_prepend(h, g, hm)?)),
            (Imp::Path(_), Mono::Path(p)) => Ok(match path_prepend(g, p)? {
                Some(q) => Element::from_mono(Mono::Path(q)),
                None => Element::zero(),
            }),
            (Imp::Tensor(parts), Mono::Tensor(ms)) => {
                let (t, inner) = match g {
                    Gen::Factor(t, inner) if *t < parts.len() => (*t, inner.as_ref()),
                    other => return Err(Error::InvalidToken(format!("{other:?}"))),
                };
                let sub = parts[t].prepend_mono(inner, &ms[t])?;
                let mut out = Element::zero();
                for (m, c) in sub.terms() {
                    let mut v = ms.clone();
                    v[t] = m.clone();
                    out.add_term(Mono::Tensor(v), c.clone());
                }
                Ok(out)
            }
            (Imp::Kz { left, tag, z }, Mono::Kz(b, y)) => {
                let mut out = Element::zero();
                match g {
                    Gen::Factor(0, inner) => {
                        for (nb, c) in hecke_prepend(left, inner, b)? {
                            out.add_term(Mono::Kz(nb, *y), c);
                        }
                    }
                    Gen::Factor(1, inner) => {
                        if let Some(ny) = path_prepend(inner, y)? {
                            if ny.len < 2 {
                                out.add_term(Mono::Kz(b.clone(), ny), Rational::one());
                            } else {
                                let sign = if ny.start == 1 { Rational::one() } else { tag.a2_sign() };
                                for (nb, c) in left.mono_times(b, z) {
                                    out.add_term(Mono::Kz(nb, PathMono::idem(ny.start)), &sign * c);
                                }
                            }
                        }
                    }
                    other => return Err(Error::InvalidToken(format!("{other:?}"))),
                }
                Ok(out)
            }
            _ => Err(Error::AlgebraMismatch),
        }
    }

    pub fn prepend(&self, g: &Gen, a: &Element) -> Result<Element> {
        self.check_gen(g)?;
        if let Imp::Hecke(h) = &self.imp {
            return Ok(Element::from_lin(match g {
                Gen::E(j) => h.prepend_e_lin(j, &a.to_lin()),
                Gen::X(k) => h.prepend_x_lin(*k, &a.to_lin()),
                Gen::S(k) => h.prepend_s_lin(*k, &a.to_lin()),
                _ => unreachable!(),
            }));
        }
        let mut out = Element::zero();
        for (m, c) in a.terms() {
            out.add_scaled(c, &self.prepend_mono(g, m)?);
        }
        Ok(out)
    }

    /// Normal form of `coeff · g_1 g_2 ⋯ g_r`.
    pub fn normal_form(&self, word: &[Gen], coeff: &Rational) -> Result<Element> {
        for g in word {
            self.check_gen(g)?;
        }
        let mut cur = self.unit();
        for g in word.iter().rev() {
            cur = self.prepend(g, &cur)?;
        }
        Ok(cur.scale(coeff))
    }

    /// A generator word whose product is exactly `mono`.
    pub fn spell(&self, mono: &Mono) -> Vec<Gen> {
        match mono {
            Mono::Hecke(h) => {
                let mut out: Vec<Gen> = h.word.iter().map(|&c| Gen::S(c)).collect();
                for (a, &e) in h.exps.iter().enumerate() {
                    for _ in 0..e {
                        out.push(Gen::X(a + 1));
                    }
                }
                out.push(Gen::E(h.idem.clone()));
                out
            }
            Mono::Path(p) => {
                let mut out: Vec<Gen> = p.arrows().into_iter().rev().map(Gen::PathU).collect();
                out.push(Gen::PathE(p.start));
                out
            }
            Mono::Tensor(ms) => {
                let parts = self.factors().expect("tensor monomial in a tensor algebra");
                let mut out = Vec::new();
                for (t, m) in ms.iter().enumerate() {
                    out.extend(parts[t].spell(m).into_iter().map(|g| Gen::Factor(t, Box::new(g))));
                }
                out
            }
            Mono::Kz(b, y) => {
                let mut out: Vec<Gen> =
                    self.spell(&Mono::Hecke(b.clone())).into_iter().map(|g| Gen::Factor(0, Box::new(g))).collect();
                out.extend(self.spell(&Mono::Path(*y)).into_iter().map(|g| Gen::Factor(1, Box::new(g))));
                out
            }
        }
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        if let Imp::Hecke(h) = &self.imp {
            let rhs = b.to_lin();
            let mut acc = Lin::new();
            for (m, c) in a.terms() {
                let hm = m.as_hecke().ok_or(Error::AlgebraMismatch)?;
                hecke::lin_axpy(&mut acc, c, &h.mono_times(hm, &rhs));
            }
            return Ok(Element::from_lin(acc));
        }
        let mut out = Element::zero();
        for (m, c) in a.terms() {
            let mut cur = b.clone();
            for g in self.spell(m).iter().rev() {
                cur = self.prepend(g, &cur)?;
            }
            out.add_scaled(c, &cur);
        }
        Ok(out)
    }

    pub fn degree(&self, mono: &Mono) -> i64 {
        match (&self.imp, mono) {
            (Imp::Hecke(h), Mono::Hecke(m)) => h.degree(m),
            (Imp::Path(_), Mono::Path(p)) => p.degree(),
            (Imp::Tensor(parts), Mono::Tensor(ms)) => parts.iter().zip(ms).map(|(a, m)| a.degree(m)).sum(),
            (Imp::Kz { left, .. }, Mono::Kz(b, y)) => left.degree(b) + y.degree(),
            _ => panic!("monomial of another algebra"),
        }
    }

    /// Degree of every term, and the common degree when the element is homogeneous.
    pub fn degree_of(&self, a: &Element) -> (Vec<(Mono, i64)>, Option<i64>) {
        let per: Vec<(Mono, i64)> = a.terms().map(|(m, _)| (m.clone(), self.degree(m))).collect();
        let common = match per.first() {
            Some((_, d)) if per.iter().all(|(_, e)| e == d) => Some(*d),
            _ => None,
        };
        (per, common)
    }

    pub fn min_degree(&self) -> i64 {
        match &self.imp {
            Imp::Hecke(h) => h.min_degree(),
            Imp::Path(_) => 0,
            Imp::Tensor(parts) => parts.iter().map(|p| p.min_degree()).sum(),
            Imp::Kz { left, .. } => left.min_degree(),
        }
    }

    pub fn graded_dimension(&self, cap: i64) -> TruncSeries {
        match &self.imp {
            Imp::Hecke(h) => h.graded_dimension(cap),
            Imp::Path(_) => {
                let mut s = TruncSeries::zero(0, cap);
                for d in 0..=cap {
                    let count = self.component_basis(d).len() as i64;
                    s.add_at(d, crate::series::rat(count));
                }
                s
            }
            Imp::Tensor(parts) => {
                let lo: i64 = parts.iter().map(|p| p.min_degree()).sum::<i64>().min(0);
                let ext = cap - lo;
                let mut acc = TruncSeries::one(ext);
                for p in parts {
                    acc = acc.mul(&p.graded_dimension(ext));
                }
                acc.truncate(cap)
            }
            Imp::Kz { left, .. } => {
                let base = left.graded_dimension(cap + 1);
                let mut s = TruncSeries::zero(base.lowest_degree(), cap);
                for d in base.lowest_degree()..=cap {
                    s.add_at(d, crate::series::rat(2) * base.coeff(d));
                    s.add_at(d + 1, crate::series::rat(2) * base.coeff(d));
                }
                s
            }
        }
    }

    /// Basis monomials of degree exactly `d`, in monomial order.
    pub fn component_basis(&self, d: i64) -> Vec<Mono> {
        let mut out: Vec<Mono> = match &self.imp {
            Imp::Hecke(h) => h.component_basis(d).into_iter().map(Mono::Hecke).collect(),
            Imp::Path(_) => {
                if d < 0 {
                    Vec::new()
                } else {
                    vec![Mono::Path(PathMono::new(1, d as u32)), Mono::Path(PathMono::new(2, d as u32))]
                }
            }
            Imp::Tensor(parts) => {
                let mins: Vec<i64> = parts.iter().map(|p| p.min_degree()).collect();
                let mut out = Vec::new();
                tensor_components(parts, &mins, 0, d, &mut Vec::new(), &mut out);
                out
            }
            Imp::Kz { left, .. } => {
                let mut out = Vec::new();
                for y in [PathMono::idem(1), PathMono::idem(2), PathMono::new(1, 1), PathMono::new(2, 1)] {
                    for b in left.component_basis(d - y.degree()) {
                        out.push(Mono::Kz(b, y));
                    }
                }
                out
            }
        };
        out.sort();
        out
    }

    /// The anti-involution fixing `e(i)`, `x_l`, `σ_k` and `π`: reverses every monomial's word.
    pub fn rho_reverse(&self, a: &Element) -> Result<Element> {
        let h = match &self.imp {
            Imp::Hecke(h) => h,
            _ => return Err(Error::InvalidArgument("the word-reversing anti-involution needs a KLR or VV algebra".into())),
        };
        let mut acc = Lin::new();
        for (m, c) in a.terms() {
            let hm = m.as_hecke().ok_or(Error::AlgebraMismatch)?;
            hecke::lin_axpy(&mut acc, c, &h.reverse_mono(hm));
        }
        Ok(Element::from_lin(acc))
    }

    pub fn format_mono(&self, mono: &Mono) -> String {
        let toks: Vec<String> = compress(self.spell(mono).iter().map(|g| self.format_gen(g)).collect());
        toks.join("*")
    }

    /// Prints one generator; `Ã` uses `a_i`, `v_i` and tensor factors carry a `[t]` prefix.
    pub fn format_gen(&self, g: &Gen) -> String {
        match (&self.imp, g) {
            (Imp::Path(PathWhich::ATilde), Gen::PathE(v)) => format!("a{v}"),
            (Imp::Path(PathWhich::ATilde), Gen::PathU(v)) => format!("v{v}"),
            (Imp::Tensor(parts), Gen::Factor(t, inner)) if *t < parts.len() => {
                format!("[{t}]{}", parts[*t].format_gen(inner))
            }
            (Imp::Kz { .. }, Gen::Factor(1, inner)) => match inner.as_ref() {
                Gen::PathE(v) => format!("[1]a{v}"),
                Gen::PathU(v) => format!("[1]v{v}"),
                other => format_gen(other, self.desc.orbit()),
            },
            _ => format_gen(g, self.desc.orbit()),
        }
    }

    /// Prints an element as a sum of coefficient–monomial terms in monomial order.
    pub fn format_element(&self, a: &Element) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in a.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                let _ = write!(s, "{mag}*");
            }
            s.push_str(&self.format_mono(m));
        }
        s
    }
}

fn hecke_prepend(h: &HeckeAlgebra, g: &Gen, m: &HMono) -> Result<Lin> {
    Ok(match g {
        Gen::E(j) => h.prepend_e(j, m),
        Gen::X(a) => h.prepend_x(*a, m),
        Gen::S(k) => h.prepend_s(*k, m),
        other => return Err(Error::InvalidToken(format!("{other:?}"))),
    })
}

fn path_prepend(g: &Gen, p: &PathMono) -> Result<Option<PathMono>> {
    Ok(match g {
        Gen::PathE(v) => (p.end() == *v).then_some(*p),
        Gen::PathU(v) => (p.end() == *v).then_some(PathMono::new(p.start, p.len + 1)),
        other => return Err(Error::InvalidToken(format!("{other:?}"))),
    })
}

fn tensor_extend(acc: &Element, next: &Element) -> Element {
    let mut out = Element::zero();
    for (m, c) in acc.terms() {
        for (n, d) in next.terms() {
            let mut v = match m {
                Mono::Tensor(v) => v.clone(),
                _ => unreachable!(),
            };
            v.push(n.clone());
            out.add_term(Mono::Tensor(v), c * d);
        }
    }
    out
}

fn tensor_components(parts: &[Algebra], mins: &[i64], t: usize, left: i64, cur: &mut Vec<Mono>, out: &mut Vec<Mono>) {
    if t == parts.len() {
        if left == 0 {
            out.push(Mono::Tensor(cur.clone()));
        }
        return;
    }
    let rest_min: i64 = mins[t + 1..].iter().sum();
    let mut d = mins[t];
    while d <= left - rest_min {
        for m in parts[t].component_basis(d) {
            cur.push(m);
            tensor_components(parts, mins, t + 1, left - d, cur, out);
            cur.pop();
        }
        d += 1;
    }
}

/// Collapses runs of equal `x` tokens into powers.
fn compress(tokens: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut run = 0;
    for t in tokens {
        if t.starts_with('x') && out.last() == Some(&t) {
            run += 1;
            continue;
        }
        if run > 0 {
            let last = out.pop().unwrap();
            out.push(format!("{last}^{}", run + 1));
            run = 0;
        }
        out.push(t);
    }
    if run > 0 {
        let last = out.pop().unwrap();
        out.push(format!("{last}^{}", run + 1));
    }
    out
}

pub fn format_gen(g: &Gen, orbit: Option<&OrbitDescriptor>) -> String {
    match g {
        Gen::E(seq) => {
            let names: Vec<String> = seq
                .iter()
                .map(|v| orbit.map(|o| o.format_vertex(v)).unwrap_or_else(|| format!("{v:?}")))
                .collect();
            format!("e({})", names.join(","))
        }
        Gen::X(a) => format!("x{a}"),
        Gen::S(0) => "pi".into(),
        Gen::S(k) => format!("s{k}"),
        Gen::PathE(v) => format!("e{v}"),
        Gen::PathU(v) => format!("u{v}"),
        Gen::Factor(t, inner) => format!("[{t}]{}", format_gen(inner, orbit)),
    }
}

/// Distinct left idempotents occurring in an element (Hecke kinds).
pub fn left_idems(h: &HeckeAlgebra, a: &Element) -> BTreeSet<IdemSeq> {
    a.terms().filter_map(|(m, _)| m.as_hecke()).map(|m| h.left_idem(m)).collect()
}

/// Graded dimension of `e·𝔚·e` for `e = Σ_{i∈E} e(i)`.
pub fn corner_dimension(h: &HeckeAlgebra, e: &BTreeSet<IdemSeq>, cap: i64) -> TruncSeries {
    let triples: Vec<i64> = h
        .word_idem_degrees()
        .into_iter()
        .filter(|(w, i, _)| e.contains(i) && e.contains(&h.act_word(w, i)))
        .map(|t| t.2)
        .collect();
    let lo = triples.iter().copied().min().unwrap_or(0).min(0);
    let ext = cap - lo;
    let mut poly = TruncSeries::zero(lo, ext);
    for d in triples {
        poly.add_at(d, Rational::one());
    }
    let g = geometric(2, ext).expect("positive step").pow(h.m as u32);
    poly.mul(&g).truncate(cap)
}

/// Basis of the degree-`d` component of `e·𝔚·e`.
pub fn corner_basis(h: &HeckeAlgebra, e: &BTreeSet<IdemSeq>, d: i64) -> Vec<HMono> {
    h.component_basis(d).into_iter().filter(|m| e.contains(&m.idem) && e.contains(&h.left_idem(m))).collect()
}
