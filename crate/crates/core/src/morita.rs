//! The catalogued homomorphisms onto corner algebras `e𝔚e`, given by generator-image tables,
//! and the checks that certify them: relations, `k[z]`-balance, graded dimensions,
//! truncated surjectivity and fullness of `e`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::engine::relations::{relation_instances, WordSum};
use crate::engine::{
    corner_basis, corner_dimension, Algebra, AlgebraDescriptor, AlgebraKind, Element, Gen, HMono, Mono, PathMono, ZTag,
};
use crate::error::{Error, Result};
use crate::klr_vv::{
    eta_act, fullness_witness, idempotent_subalgebra, plus_minus_idems, plus_minus_partitions, root_partition_idems,
    separated_block_idems, sorting_word, theta_bijection, TargetFamily,
};
use crate::linalg::{rank, Field};
use crate::quiver::{multiplicity_info, Branch, DimVector, IdemSeq, OrbitDescriptor, OrbitKind, SeqDisplay, Vertex};
use crate::report::VerificationReport;
use crate::series::{series_eq_up_to, Rational};
use crate::weyl::{embed_generator_word, longest_coset_rep, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomName {
    PsiSeparated,
    FIdemSubalg,
    PhiMultOne,
    PsiPlusMinus,
    PhiKzQ,
    PhiKzP,
}

impl HomName {
    pub const ALL: [HomName; 6] = [
        HomName::PsiSeparated,
        HomName::FIdemSubalg,
        HomName::PhiMultOne,
        HomName::PsiPlusMinus,
        HomName::PhiKzQ,
        HomName::PhiKzP,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HomName::PsiSeparated => "psi_separated",
            HomName::FIdemSubalg => "f_idem_subalg",
            HomName::PhiMultOne => "phi_mult_one",
            HomName::PsiPlusMinus => "psi_plus_minus",
            HomName::PhiKzQ => "phi_kz_q",
            HomName::PhiKzP => "phi_kz_p",
        }
    }
}

impl fmt::Display for HomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HomName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HomName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown homomorphism `{s}`")))
    }
}

/// The data a catalog entry is built from. `nu_tilde` is used by `f_idem_subalg` only.
#[derive(Clone, Debug)]
pub struct HomParams {
    pub nu: DimVector,
    pub orbit: OrbitDescriptor,
    pub nu_tilde: Option<DimVector>,
}

impl HomParams {
    pub fn new(nu: DimVector, orbit: OrbitDescriptor) -> Self {
        HomParams { nu, orbit, nu_tilde: None }
    }

    pub fn with_nu_tilde(mut self, nu_tilde: DimVector) -> Self {
        self.nu_tilde = Some(nu_tilde);
        self
    }
}

/// A homomorphism `source → e·target·e` given on generators.
#[derive(Clone, Debug)]
pub struct HomDescriptor {
    pub name: HomName,
    pub source: AlgebraDescriptor,
    pub target: AlgebraDescriptor,
    pub images: Vec<(Gen, Element)>,
    /// Sequences `i` with `e(i)` a summand of `e`.
    pub corner: BTreeSet<IdemSeq>,
}

/// One defining relation `lhs = rhs` of a source algebra.
#[derive(Clone, Debug)]
pub struct SourceRelation {
    pub family: String,
    pub lhs: WordSum,
    pub rhs: WordSum,
}

fn one() -> Rational {
    Rational::one()
}

fn wrap_gen(t: usize, g: &Gen) -> Gen {
    Gen::Factor(t, Box::new(g.clone()))
}

fn wrap_sum(t: usize, s: &WordSum) -> WordSum {
    s.iter().map(|(c, w)| (c.clone(), w.iter().map(|g| wrap_gen(t, g)).collect())).collect()
}

/// Generators of a presented algebra, in a fixed order.
pub fn generators(alg: &Algebra) -> Vec<Gen> {
    let hecke_gens = |alg: &Algebra| -> Vec<Gen> {
        let h = alg.hecke().expect("hecke algebra");
        let mut out: Vec<Gen> = h.seqs.iter().map(|s| Gen::E(s.clone())).collect();
        out.extend((1..=h.m).map(Gen::X));
        let start = if h.signed { 0 } else { 1 };
        out.extend((start..h.m).map(|k| Gen::S(k as u8)));
        out
    };
    let path_gens = || vec![Gen::PathE(1), Gen::PathE(2), Gen::PathU(1), Gen::PathU(2)];
    match &alg.descriptor().kind {
        AlgebraKind::Klr { .. } | AlgebraKind::Vv { .. } | AlgebraKind::SeparatedVv { .. } => hecke_gens(alg),
        AlgebraKind::PathAlgebra(_) => path_gens(),
        AlgebraKind::TensorOverK(_) => {
            let parts = alg.factors().expect("tensor factors");
            parts.iter().enumerate().flat_map(|(t, p)| generators(p).into_iter().map(move |g| wrap_gen(t, &g))).collect()
        }
        AlgebraKind::TensorOverKz { .. } => {
            let mut out: Vec<Gen> = hecke_gens(alg).iter().map(|g| wrap_gen(0, g)).collect();
            out.extend(path_gens().iter().map(|g| wrap_gen(1, g)));
            out
        }
    }
}

fn path_relations() -> Vec<SourceRelation> {
    let w = |g: Vec<Gen>| vec![(one(), g)];
    let mut out = Vec::new();
    for a in 1..=2u8 {
        for b in 1..=2u8 {
            let rhs = if a == b { w(vec![Gen::PathE(a)]) } else { Vec::new() };
            out.push(SourceRelation { family: "path_idempotents".into(), lhs: w(vec![Gen::PathE(a), Gen::PathE(b)]), rhs });
        }
        let u = Gen::PathU(a);
        out.push(SourceRelation {
            family: "arrow_ends".into(),
            lhs: w(vec![u.clone()]),
            rhs: w(vec![Gen::PathE(3 - a), u.clone(), Gen::PathE(a)]),
        });
    }
    out
}

fn hecke_relations(alg: &Algebra) -> Vec<SourceRelation> {
    relation_instances(alg)
        .into_iter()
        .map(|r| SourceRelation { family: r.family.to_string(), lhs: r.lhs, rhs: r.rhs })
        .collect()
}

fn commute_relations(a: &[Gen], b: &[Gen]) -> Vec<SourceRelation> {
    let mut out = Vec::new();
    for g in a {
        for h in b {
            out.push(SourceRelation {
                family: "factors_commute".into(),
                lhs: vec![(one(), vec![g.clone(), h.clone()])],
                rhs: vec![(one(), vec![h.clone(), g.clone()])],
            });
        }
    }
    out
}

/// Defining relations of the source algebra, excluding the unit (checked separately).
pub fn source_relations(alg: &Algebra) -> Result<Vec<SourceRelation>> {
    Ok(match &alg.descriptor().kind {
        AlgebraKind::Klr { .. } | AlgebraKind::Vv { .. } | AlgebraKind::SeparatedVv { .. } => hecke_relations(alg),
        AlgebraKind::PathAlgebra(_) => path_relations(),
        AlgebraKind::TensorOverK(_) => {
            let parts = alg.factors().ok_or(Error::AlgebraMismatch)?;
            let mut out = Vec::new();
            let mut gens: Vec<Vec<Gen>> = Vec::new();
            for (t, p) in parts.iter().enumerate() {
                for r in source_relations(p)? {
                    out.push(SourceRelation {
                        family: format!("[{t}]{}", r.family),
                        lhs: wrap_sum(t, &r.lhs),
                        rhs: wrap_sum(t, &r.rhs),
                    });
                }
                gens.push(generators(p).iter().map(|g| wrap_gen(t, g)).collect());
            }
            for s in 0..gens.len() {
                for t in s + 1..gens.len() {
                    out.extend(commute_relations(&gens[s], &gens[t]));
                }
            }
            out
        }
        AlgebraKind::TensorOverKz { nu, orbit, .. } => {
            let left = Algebra::new(AlgebraDescriptor::klr(nu.branch_part(Branch::Plus), orbit.clone()))?;
            let mut out = Vec::new();
            for r in hecke_relations(&left) {
                out.push(SourceRelation { family: format!("[0]{}", r.family), lhs: wrap_sum(0, &r.lhs), rhs: wrap_sum(0, &r.rhs) });
            }
            for r in path_relations() {
                out.push(SourceRelation { family: format!("[1]{}", r.family), lhs: wrap_sum(1, &r.lhs), rhs: wrap_sum(1, &r.rhs) });
            }
            let g0: Vec<Gen> = generators(&left).iter().map(|g| wrap_gen(0, g)).collect();
            let g1: Vec<Gen> = [Gen::PathE(1), Gen::PathE(2), Gen::PathU(1), Gen::PathU(2)].iter().map(|g| wrap_gen(1, g)).collect();
            out.extend(commute_relations(&g0, &g1));
            out
        }
    })
}

impl HomDescriptor {
    pub fn algebras(&self) -> Result<(Algebra, Algebra)> {
        Ok((Algebra::new(self.source.clone())?, Algebra::new(self.target.clone())?))
    }

    pub fn image_of_gen(&self, g: &Gen) -> Option<&Element> {
        self.images.iter().find(|(h, _)| h == g).map(|(_, e)| e)
    }

    /// `e` as an element of the target.
    pub fn corner_unit(&self, tgt: &Algebra) -> Result<Element> {
        tgt.idem_sum(&self.corner.iter().cloned().collect::<Vec<_>>())
    }

    /// Negates the image of one generator, for mutation tests.
    pub fn corrupt(&mut self, g: &Gen) -> Result<()> {
        let slot = self
            .images
            .iter_mut()
            .find(|(h, _)| h == g)
            .ok_or_else(|| Error::InvalidToken(format!("{g:?} has no image")))?;
        slot.1 = slot.1.neg();
        Ok(())
    }

    fn table(&self) -> HashMap<&Gen, &Element> {
        self.images.iter().map(|(g, e)| (g, e)).collect()
    }
}

/// Evaluates images of source words in the target.
struct Evaluator<'a> {
    tgt: &'a Algebra,
    table: HashMap<&'a Gen, &'a Element>,
    unit: Element,
}

impl<'a> Evaluator<'a> {
    fn new(h: &'a HomDescriptor, tgt: &'a Algebra) -> Result<Self> {
        Ok(Evaluator { tgt, table: h.table(), unit: h.corner_unit(tgt)? })
    }

    fn word(&self, w: &[Gen]) -> Result<Element> {
        let mut cur = self.unit.clone();
        for g in w.iter().rev() {
            let img = self.table.get(g).ok_or_else(|| Error::InvalidToken(format!("{g:?} has no image")))?;
            cur = self.tgt.multiply(img, &cur)?;
        }
        Ok(cur)
    }

    fn sum(&self, s: &WordSum) -> Result<Element> {
        let mut acc = Element::zero();
        for (c, w) in s {
            acc.add_scaled(c, &self.word(w)?);
        }
        Ok(acc)
    }

    fn element(&self, src: &Algebra, x: &Element) -> Result<Element> {
        let mut acc = Element::zero();
        for (m, c) in x.terms() {
            acc.add_scaled(c, &self.word(&src.spell(m))?);
        }
        Ok(acc)
    }
}

/// Image of a source element.
pub fn apply(h: &HomDescriptor, src: &Algebra, tgt: &Algebra, x: &Element) -> Result<Element> {
    Evaluator::new(h, tgt)?.element(src, x)
}

/// `σ_word x^{xs} e(idem)` in the target.
fn term(tgt: &Algebra, word: &[u8], xs: &[usize], idem: &IdemSeq) -> Result<Element> {
    let mut g: Vec<Gen> = word.iter().map(|&c| Gen::S(c)).collect();
    g.extend(xs.iter().map(|&a| Gen::X(a)));
    g.push(Gen::E(idem.clone()));
    tgt.normal_form(&g, &one())
}

fn sum_terms<'a>(
    tgt: &Algebra,
    items: impl IntoIterator<Item = (Rational, Word, Vec<usize>, &'a IdemSeq)>,
) -> Result<Element> {
    let mut acc = Element::zero();
    for (c, w, xs, i) in items {
        acc.add_scaled(&c, &term(tgt, &w, &xs, i)?);
    }
    Ok(acc)
}

fn hypothesis(msg: impl Into<String>) -> Error {
    Error::Hypothesis(msg.into())
}

/// Builds the generator-image table of a catalogued homomorphism.
pub fn hom_catalog(name: HomName, params: &HomParams) -> Result<HomDescriptor> {
    match name {
        HomName::PsiSeparated => psi_separated(params),
        HomName::FIdemSubalg => f_idem_subalg(params),
        HomName::PhiMultOne => phi_mult_one(params),
        HomName::PsiPlusMinus => psi_plus_minus(params),
        HomName::PhiKzQ => phi_kz(params, ZTag::QCase),
        HomName::PhiKzP => phi_kz(params, ZTag::PCase),
    }
}

fn retag_seq(s: &[Vertex], tag: u8) -> IdemSeq {
    s.iter().map(|v| Vertex { orbit: tag, ..*v }).collect()
}

fn psi_separated(p: &HomParams) -> Result<HomDescriptor> {
    let orbit = &p.orbit;
    if !orbit.is_separated() || orbit.num_parts() != 2 {
        return Err(hypothesis("ψ needs ν supported on exactly two separated orbits"));
    }
    let nu1 = p.nu.orbit_part(0);
    let nu2 = p.nu.orbit_part(1).retag(0);
    if nu1.is_empty() || nu2.is_empty() {
        return Err(hypothesis("both separated parts of ν must be nonzero"));
    }
    let source = AlgebraDescriptor::tensor(vec![
        AlgebraDescriptor::vv(nu1, orbit.part(0).clone()),
        AlgebraDescriptor::vv(nu2, orbit.part(1).clone()),
    ]);
    let target = AlgebraDescriptor::vv(p.nu.clone(), orbit.clone());
    let src = Algebra::new(source.clone())?;
    let tgt = Algebra::new(target.clone())?;
    let parts = src.factors().ok_or(Error::AlgebraMismatch)?;
    let (h1, h2) = (parts[0].hecke().ok_or(Error::AlgebraMismatch)?, parts[1].hecke().ok_or(Error::AlgebraMismatch)?);
    let m1 = h1.m;
    let join = |i: &IdemSeq, j: &IdemSeq| -> IdemSeq {
        let mut s = i.clone();
        s.extend(retag_seq(j, 1));
        s
    };
    let all: Vec<IdemSeq> = h1.seqs.iter().flat_map(|i| h2.seqs.iter().map(move |j| join(i, j))).collect();
    let mut images = Vec::new();
    for i in &h1.seqs {
        let seqs: Vec<IdemSeq> = h2.seqs.iter().map(|j| join(i, j)).collect();
        images.push((wrap_gen(0, &Gen::E(i.clone())), sum_terms(&tgt, seqs.iter().map(|s| (one(), vec![], vec![], s)))?));
    }
    for j in &h2.seqs {
        let seqs: Vec<IdemSeq> = h1.seqs.iter().map(|i| join(i, j)).collect();
        images.push((wrap_gen(1, &Gen::E(j.clone())), sum_terms(&tgt, seqs.iter().map(|s| (one(), vec![], vec![], s)))?));
    }
    for (t, h) in [(0usize, h1), (1, h2)] {
        let shift = if t == 0 { 0 } else { m1 };
        for a in 1..=h.m {
            let img = sum_terms(&tgt, all.iter().map(|s| (one(), vec![], vec![shift + a], s)))?;
            images.push((wrap_gen(t, &Gen::X(a)), img));
        }
        for k in 0..h.m as u8 {
            let word = embed_generator_word(m1, k, t == 1);
            let img = sum_terms(&tgt, all.iter().map(|s| (one(), word.clone(), vec![], s)))?;
            images.push((wrap_gen(t, &Gen::S(k)), img));
        }
    }
    let corner = separated_block_idems(&tgt)?;
    Ok(HomDescriptor { name: HomName::PsiSeparated, source, target, images, corner })
}

fn f_idem_subalg(p: &HomParams) -> Result<HomDescriptor> {
    let nu_tilde = p.nu_tilde.as_ref().ok_or_else(|| Error::InvalidArgument("f needs a choice of ν̃".into()))?;
    let target = AlgebraDescriptor::vv(p.nu.clone(), p.orbit.clone());
    let tgt = Algebra::new(target.clone())?;
    let sub = idempotent_subalgebra(&tgt, nu_tilde)?;
    let m = nu_tilde.total() as usize;
    let mut images = Vec::new();
    for i in &sub.seqs {
        images.push((Gen::E(i.clone()), term(&tgt, &[], &[], i)?));
    }
    for a in 1..=m {
        images.push((Gen::X(a), sum_terms(&tgt, sub.seqs.iter().map(|s| (one(), vec![], vec![a], s)))?));
    }
    for k in 1..m as u8 {
        images.push((Gen::S(k), sum_terms(&tgt, sub.seqs.iter().map(|s| (one(), vec![k], vec![], s)))?));
    }
    Ok(HomDescriptor { name: HomName::FIdemSubalg, source: sub.klr, target, images, corner: sub.seqs })
}

fn phi_mult_one(p: &HomParams) -> Result<HomDescriptor> {
    let orbit = &p.orbit;
    if orbit.kind != OrbitKind::A2 {
        return Err(hypothesis("φ is defined for the orbit of q (q ∈ I, p ∉ I)"));
    }
    if !multiplicity_info(&p.nu).is_mult_one {
        return Err(hypothesis("ν must have multiplicity one"));
    }
    let (plus, minus) = plus_minus_partitions(&p.nu, orbit)?;
    let m = (p.nu.total() / 2) as usize;
    let source = AlgebraDescriptor::path_tensor_power(m);
    let target = AlgebraDescriptor::vv(p.nu.clone(), orbit.clone());
    let tgt = Algebra::new(target.clone())?;
    // (side, θ(λ), i_λ); side 1 is Π⁺, side 2 is Π⁻.
    let mut lambdas: Vec<(u8, Vec<u8>, IdemSeq)> = Vec::new();
    for (side, parts) in [(1u8, &plus), (2u8, &minus)] {
        for l in parts.iter() {
            lambdas.push((side, theta_bijection(l, orbit)?, l.seq.clone()));
        }
    }
    let find = |side: u8, tuple: &[u8]| -> Result<&IdemSeq> {
        lambdas
            .iter()
            .find(|(s, t, _)| *s == side && t.as_slice() == tuple)
            .map(|(_, _, i)| i)
            .ok_or_else(|| hypothesis(format!("no root partition with tuple {tuple:?}")))
    };
    let (_, eta) = longest_coset_rep(m);
    let mut images = Vec::new();
    for t in 0..m.saturating_sub(1) {
        for j in 1..=2u8 {
            let sel: Vec<&(u8, Vec<u8>, IdemSeq)> = lambdas.iter().filter(|(_, tu, _)| tu[t] == j).collect();
            let e_img = sum_terms(&tgt, sel.iter().map(|(_, _, i)| (one(), vec![], vec![], i)))?;
            images.push((wrap_gen(t, &Gen::PathE(j)), e_img));
            let mut u_img = Element::zero();
            for (side, tu, i) in sel {
                let mut flipped = tu.clone();
                flipped[t] = 3 - j;
                let target_seq = find(*side, &flipped)?;
                let w = sorting_word(i, target_seq)?;
                u_img = u_img.add(&term(&tgt, &w, &[], i)?);
            }
            images.push((wrap_gen(t, &Gen::PathU(j)), u_img));
        }
    }
    let last = m - 1;
    for a in 1..=2u8 {
        let sel: Vec<&IdemSeq> = lambdas.iter().filter(|(s, _, _)| *s == a).map(|(_, _, i)| i).collect();
        images.push((wrap_gen(last, &Gen::PathE(a)), sum_terms(&tgt, sel.iter().map(|i| (one(), vec![], vec![], *i)))?));
        images.push((
            wrap_gen(last, &Gen::PathU(a)),
            sum_terms(&tgt, sel.iter().map(|i| (one(), eta.clone(), vec![], *i)))?,
        ));
    }
    let corner = root_partition_idems(&p.nu, orbit)?;
    Ok(HomDescriptor { name: HomName::PhiMultOne, source, target, images, corner })
}

fn psi_plus_minus(p: &HomParams) -> Result<HomDescriptor> {
    let orbit = &p.orbit;
    if !p.nu.is_theta_symmetric(orbit) {
        return Err(Error::InvalidDimVector("ν must be θ-symmetric".into()));
    }
    let plus = p.nu.branch_part(Branch::Plus);
    let minus = p.nu.branch_part(Branch::Minus);
    let m = plus.total() as usize;
    let source = AlgebraDescriptor::klr(plus, orbit.clone());
    let target = AlgebraDescriptor::klr(minus, orbit.clone());
    let src = Algebra::new(source.clone())?;
    let tgt = Algebra::new(target.clone())?;
    let seqs = src.hecke().ok_or(Error::AlgebraMismatch)?.seqs.clone();
    let eta: Vec<(IdemSeq, IdemSeq)> = seqs.iter().map(|i| (i.clone(), eta_act(orbit, i))).collect();
    let mut images = Vec::new();
    for (i, ei) in &eta {
        images.push((Gen::E(i.clone()), term(&tgt, &[], &[], ei)?));
    }
    for j in 1..=m {
        images.push((Gen::X(j), sum_terms(&tgt, eta.iter().map(|(_, ei)| (-one(), vec![], vec![m - j + 1], ei)))?));
    }
    for k in 1..m {
        let img = sum_terms(&tgt, eta.iter().map(|(_, ei)| (one(), vec![(m - k) as u8], vec![], ei)))?;
        images.push((Gen::S(k as u8), img));
    }
    let corner: BTreeSet<IdemSeq> = tgt.hecke().ok_or(Error::AlgebraMismatch)?.seqs.iter().cloned().collect();
    Ok(HomDescriptor { name: HomName::PsiPlusMinus, source, target, images, corner })
}

fn phi_kz(p: &HomParams, tag: ZTag) -> Result<HomDescriptor> {
    let orbit = &p.orbit;
    if orbit.is_separated() {
        return Err(hypothesis("p, q ∈ I together is not treated"));
    }
    let (kind, label) = match tag {
        ZTag::QCase => (OrbitKind::A2, "mult(q) = 1"),
        ZTag::PCase => (OrbitKind::A3, "mult(p) = 2"),
    };
    if orbit.kind != kind {
        return Err(hypothesis(format!("{label} needs the orbit of {}", if kind == OrbitKind::A2 { "q" } else { "p" })));
    }
    let special = orbit.special_vertex().ok_or_else(|| hypothesis(label))?;
    let mult = p.nu.get(&special);
    let wanted = if tag == ZTag::QCase { 1 } else { 2 };
    if mult != wanted {
        return Err(hypothesis(format!("{label} fails: multiplicity is {mult}")));
    }
    let source = AlgebraDescriptor::kz(p.nu.clone(), orbit.clone(), tag);
    let target = AlgebraDescriptor::vv(p.nu.clone(), orbit.clone());
    let src = Algebra::new(source.clone())?;
    let tgt = Algebra::new(target.clone())?;
    let left = src.hecke().ok_or(Error::AlgebraMismatch)?;
    let m = left.m;
    let (_, eta) = longest_coset_rep(m);
    let pairs: Vec<(IdemSeq, IdemSeq)> = left.seqs.iter().map(|i| (i.clone(), eta_act(orbit, i))).collect();
    let f0 = |g: Gen| wrap_gen(0, &g);
    let f1 = |g: Gen| wrap_gen(1, &g);
    let mut images = Vec::new();
    for (i, ei) in &pairs {
        images.push((f0(Gen::E(i.clone())), term(&tgt, &[], &[], i)?.add(&term(&tgt, &[], &[], ei)?)));
    }
    for j in 1..=m {
        let mut img = Element::zero();
        for (i, ei) in &pairs {
            img = img.add(&term(&tgt, &[], &[j], i)?).sub(&term(&tgt, &[], &[m - j + 1], ei)?);
        }
        images.push((f0(Gen::X(j)), img));
    }
    for k in 1..m {
        let mut img = Element::zero();
        for (i, ei) in &pairs {
            img = img.add(&term(&tgt, &[k as u8], &[], i)?).add(&term(&tgt, &[(m - k) as u8], &[], ei)?);
        }
        images.push((f0(Gen::S(k as u8)), img));
    }
    let plus_side = || pairs.iter().map(|(i, _)| i);
    let minus_side = || pairs.iter().map(|(_, ei)| ei);
    images.push((f1(Gen::PathE(1)), sum_terms(&tgt, plus_side().map(|i| (one(), vec![], vec![], i)))?));
    images.push((f1(Gen::PathE(2)), sum_terms(&tgt, minus_side().map(|i| (one(), vec![], vec![], i)))?));
    images.push((f1(Gen::PathU(1)), sum_terms(&tgt, plus_side().map(|i| (one(), eta.clone(), vec![], i)))?));
    images.push((f1(Gen::PathU(2)), sum_terms(&tgt, minus_side().map(|i| (one(), eta.clone(), vec![], i)))?));
    let corner = plus_minus_idems(&p.nu, orbit, true);
    let name = if tag == ZTag::QCase { HomName::PhiKzQ } else { HomName::PhiKzP };
    Ok(HomDescriptor { name, source, target, images, corner })
}

fn family_report(
    report: &mut VerificationReport,
    prefix: &str,
    families: BTreeMap<String, (usize, Vec<String>)>,
) {
    for (family, (count, bad)) in families {
        let detail = if bad.is_empty() {
            format!("{count} instances")
        } else {
            format!("{} of {count} instances violated; first: {}", bad.len(), bad[0])
        };
        report.check(format!("{prefix}{family}"), bad.is_empty(), detail);
    }
}

/// Every source relation, and the unit, maps to an identity in `e·target·e`.
pub fn verify_hom_relations(h: &HomDescriptor) -> Result<VerificationReport> {
    let (src, tgt) = h.algebras()?;
    let ev = Evaluator::new(h, &tgt)?;
    let mut report = VerificationReport::new(format!("morita:{}", h.name)).with_config("target", "e·W·e");
    let missing: Vec<String> =
        generators(&src).into_iter().filter(|g| h.image_of_gen(g).is_none()).map(|g| src.format_gen(&g)).collect();
    report.check("images complete", missing.is_empty(), format!("missing: {missing:?}"));
    if !missing.is_empty() {
        return Ok(report);
    }
    let mut families: BTreeMap<String, (usize, Vec<String>)> = BTreeMap::new();
    for r in source_relations(&src)? {
        let diff = ev.sum(&r.lhs)?.sub(&ev.sum(&r.rhs)?);
        let entry = families.entry(r.family.clone()).or_default();
        entry.0 += 1;
        if !diff.is_zero() {
            let lhs: Vec<String> = r.lhs.first().map(|(_, w)| w.iter().map(|g| src.format_gen(g)).collect()).unwrap_or_default();
            entry.1.push(format!("{} | residue {}", lhs.join("*"), tgt.format_element(&diff)));
        }
    }
    family_report(&mut report, "relation:", families);
    let unit = ev.element(&src, &src.unit())?;
    report.check("unit ↦ e", unit == ev.unit, format!("image of 1 has {} terms", unit.len()));
    Ok(report)
}

/// `φ(e(i)z ⊗ a) = φ(e(i) ⊗ z·a)` for every `i ∈ I^{ν̃⁺}` and both `a₁`, `a₂`.
pub fn verify_balance(h: &HomDescriptor) -> Result<VerificationReport> {
    let tag = match h.name {
        HomName::PhiKzQ => ZTag::QCase,
        HomName::PhiKzP => ZTag::PCase,
        other => return Err(Error::InvalidArgument(format!("{other} is not defined over k[z]"))),
    };
    let (src, tgt) = h.algebras()?;
    let ev = Evaluator::new(h, &tgt)?;
    let left = src.hecke().ok_or(Error::AlgebraMismatch)?;
    let mut report = VerificationReport::new(format!("balance:{}", h.name));
    for a in [1u8, 2] {
        let sign = if a == 1 { one() } else { tag.a2_sign() };
        let mut bad = Vec::new();
        for i in &left.seqs {
            let mut bz = Element::zero();
            for (nb, c) in src.z_times(&HMono::idem(i.clone())) {
                bz.add_term(Mono::Kz(nb, PathMono::idem(a)), c);
            }
            let lhs = ev.element(&src, &bz)?;
            let word = vec![
                wrap_gen(1, &Gen::PathU(3 - a)),
                wrap_gen(1, &Gen::PathU(a)),
                wrap_gen(1, &Gen::PathE(a)),
                wrap_gen(0, &Gen::E(i.clone())),
            ];
            let rhs = ev.word(&word)?.scale(&sign);
            if lhs != rhs {
                let orbit = left.orbit.clone();
                bad.push(format!(
                    "e{}: φ(e(i)z⊗a{a}) = {} but φ(e(i)⊗z·a{a}) = {}",
                    SeqDisplay(&orbit, i),
                    tgt.format_element(&lhs),
                    tgt.format_element(&rhs)
                ));
            }
        }
        let rule = if a == 1 { "z·a1 = v2v1a1".to_string() } else { format!("z·a2 = {}v1v2a2", if sign == one() { "+" } else { "-" }) };
        let detail = if bad.is_empty() {
            format!("{rule}; {} idempotents", left.seqs.len())
        } else {
            format!("{rule}; {} of {} fail; first: {}", bad.len(), left.seqs.len(), bad[0])
        };
        report.check(format!("balance a{a}"), bad.is_empty(), detail);
    }
    Ok(report)
}

/// `dim_q(source) = dim_q(e·target·e)` coefficientwise up to `cap`.
pub fn verify_graded_dim_match(h: &HomDescriptor, cap: i64) -> Result<VerificationReport> {
    let (src, tgt) = h.algebras()?;
    let ht = tgt.hecke().ok_or(Error::AlgebraMismatch)?;
    let lhs = src.graded_dimension(cap);
    let rhs = corner_dimension(ht, &h.corner, cap);
    let mut report = VerificationReport::new(format!("dims:{}", h.name)).with_config("cap", cap);
    report.check(
        "graded dimension",
        series_eq_up_to(&lhs, &rhs, cap)?,
        format!("source {lhs}; e·W·e {rhs}"),
    );
    Ok(report)
}

/// For every degree up to `d`, the images of a source basis span the component of `e·target·e`.
pub fn verify_surjectivity_up_to(h: &HomDescriptor, d: i64, field: Field) -> Result<VerificationReport> {
    let (src, tgt) = h.algebras()?;
    let ht = tgt.hecke().ok_or(Error::AlgebraMismatch)?;
    let ev = Evaluator::new(h, &tgt)?;
    let mut report = VerificationReport::new(format!("surjectivity:{}", h.name)).with_config("degree", d);
    let lo = src.min_degree().min(tgt.min_degree());
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for deg in lo..=d {
        let basis: Vec<Element> =
            corner_basis(ht, &h.corner, deg).into_iter().map(|m| Element::from_mono(Mono::Hecke(m))).collect();
        let mut images = Vec::new();
        for m in src.component_basis(deg) {
            images.push(ev.word(&src.spell(&m))?);
        }
        if basis.is_empty() && images.iter().all(|x| x.is_zero()) {
            continue;
        }
        let r = rank(&images, field)?;
        let mut all = images.clone();
        all.extend(basis.iter().cloned());
        let span = rank(&all, field)?;
        summary.push(format!("deg {deg}: {r}/{}", basis.len()));
        if r != basis.len() || span != basis.len() {
            failures.push(format!("degree {deg}: image rank {r}, component dimension {}, joint rank {span}", basis.len()));
        }
    }
    let detail = if failures.is_empty() { summary.join(", ") } else { failures.join("; ") };
    report.check(format!("surjective up to degree {d}"), failures.is_empty(), detail);
    Ok(report)
}

/// All checks for one catalog entry: relations, balance (over `k[z]`), dimensions, surjectivity.
pub fn certify(h: &HomDescriptor, cap: i64, d: i64, field: Field) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("morita:{}", h.name));
    report.absorb("", verify_hom_relations(h)?);
    if matches!(h.name, HomName::PhiKzQ | HomName::PhiKzP) {
        report.absorb("", verify_balance(h)?);
    }
    report.absorb("", verify_graded_dim_match(h, cap)?);
    report.absorb("", verify_surjectivity_up_to(h, d, field)?);
    Ok(report)
}

/// Sequences of the Morita idempotent selected by `family`.
pub fn morita_idempotent(vv: &Algebra, family: TargetFamily) -> Result<BTreeSet<IdemSeq>> {
    let (nu, orbit) = match &vv.descriptor().kind {
        AlgebraKind::Vv { nu, orbit } | AlgebraKind::SeparatedVv { nu, orbit } => (nu, orbit),
        _ => return Err(Error::AlgebraMismatch),
    };
    match family {
        TargetFamily::PlusMinusKlr => Ok(plus_minus_idems(nu, orbit, orbit.kind != OrbitKind::A1)),
        TargetFamily::RootPartitionIdems => root_partition_idems(nu, orbit),
        TargetFamily::SeparatedBlock => separated_block_idems(vv),
    }
}

/// A verified witness for every `e(i)` outside the Morita idempotent.
pub fn verify_fullness(vv: &Algebra, family: TargetFamily) -> Result<VerificationReport> {
    let corner = morita_idempotent(vv, family)?;
    let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
    let orbit = h.orbit.clone();
    let mut report = VerificationReport::new("fullness").with_config("family", format!("{family:?}"));
    let mut covered = 0;
    let outside: Vec<&IdemSeq> = h.seqs.iter().filter(|s| !corner.contains(*s)).collect();
    for i in &outside {
        let name = format!("witness e{}", SeqDisplay(&orbit, i));
        match fullness_witness(vv, i, family) {
            Ok(w) => {
                let ok = corner.contains(&w.target_idem) && w.verify(vv)?;
                covered += usize::from(ok);
                report.check(name, ok, format!("ab = e(i), ba = e{}", SeqDisplay(&orbit, &w.target_idem)));
            }
            Err(e) => report.check(name, false, e.to_string()),
        }
    }
    report.check(
        "idempotents covered",
        covered == outside.len(),
        format!("{covered} of {} outside e ({} in e)", outside.len(), corner.len()),
    );
    Ok(report)
}
