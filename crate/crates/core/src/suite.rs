//! Configured verification runs and the standard fixture set.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::engine::relations::{relation_suite, Context};
use crate::engine::{corner_dimension, Algebra, AlgebraDescriptor, AlgebraKind, Element, Mono};
use crate::error::{Error, Result};
use crate::klr_vv::{admissible_nu_tildes, idempotent_subalgebra, plus_minus_idems, TargetFamily};
use crate::linalg::Field;
use crate::morita::{certify, hom_catalog, morita_idempotent, verify_fullness, HomName, HomParams};
use crate::path_tensor::{balanced_involution_check, heredity_chain_check, tensor_power_dimension_check};
use crate::quiver::{multiplicity_info, Branch, DimVector, OrbitDescriptor, OrbitKind, Vertex};
use crate::report::VerificationReport;
use crate::series::{geometric, rat, series_eq_up_to, TruncSeries, DEFAULT_CAP};

/// Default degree bound for truncated surjectivity.
pub const DEFAULT_SURJ_DEGREE: i64 = 4;

/// `ν` either as text (`"l + p2*l"`, `"2*q"`) or as `(vertex, multiplicity)` pairs.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum NuSpec {
    Text(String),
    List(Vec<(String, u32)>),
}

impl NuSpec {
    fn entries(&self) -> Result<Vec<(String, u32)>> {
        match self {
            NuSpec::List(l) => Ok(l.clone()),
            NuSpec::Text(t) => t
                .split('+')
                .map(|piece| {
                    let piece = piece.trim();
                    match piece.split_once('*') {
                        Some((c, v)) if !c.is_empty() && c.trim().bytes().all(|b| b.is_ascii_digit()) => {
                            let c = c.trim().parse().map_err(|_| Error::Config(format!("bad multiplicity in `{piece}`")))?;
                            Ok((v.trim().to_string(), c))
                        }
                        _ if piece.is_empty() => Err(Error::Config(format!("empty term in ν `{t}`"))),
                        _ => Ok((piece.to_string(), 1)),
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Display for NuSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NuSpec::Text(t) => f.write_str(t),
            NuSpec::List(l) => {
                let parts: Vec<String> =
                    l.iter().map(|(v, c)| if *c == 1 { v.clone() } else { format!("{c}*{v}") }).collect();
                f.write_str(&parts.join("+"))
            }
        }
    }
}

fn default_cap() -> i64 {
    DEFAULT_CAP
}

fn default_field() -> String {
    "Q".into()
}

/// A run configuration; field names are the keys of the TOML config file.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// `A1`, `A2`, `A3` or `separated(A1,A2,...)`.
    pub case: String,
    #[serde(default)]
    pub p_order: Option<u32>,
    /// Closed under θ automatically.
    pub nu: NuSpec,
    #[serde(default = "default_cap")]
    pub cap: i64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_field")]
    pub field: String,
}

impl SuiteConfig {
    pub fn new(case: &str, nu: &str) -> Self {
        SuiteConfig {
            case: case.into(),
            p_order: None,
            nu: NuSpec::Text(nu.into()),
            cap: DEFAULT_CAP,
            seed: 0,
            field: default_field(),
        }
    }

    pub fn orbit(&self) -> Result<OrbitDescriptor> {
        let orbit = parse_case(&self.case, self.p_order)?;
        orbit.validate().map_err(|e| match e {
            Error::Hypothesis(_) => e,
            other => Error::Config(other.to_string()),
        })?;
        Ok(orbit)
    }

    /// Checks the configuration and returns the orbit and θ-closed `ν`.
    pub fn resolve(&self) -> Result<(OrbitDescriptor, DimVector, Field)> {
        if self.cap < 0 {
            return Err(Error::Config("cap must be non-negative".into()));
        }
        let field: Field = self.field.parse()?;
        let orbit = self.orbit()?;
        let mut list = Vec::new();
        for (v, c) in self.nu.entries()? {
            let vert = orbit.parse_vertex(&v).map_err(|e| Error::Config(e.to_string()))?;
            list.push((vert, c));
        }
        let nu = DimVector::theta_closed(&list, &orbit).map_err(|e| Error::Config(e.to_string()))?;
        if nu.is_empty() {
            return Err(Error::Config("ν is zero".into()));
        }
        Ok((orbit, nu, field))
    }

    fn stamp(&self, report: VerificationReport) -> VerificationReport {
        let mut r = report
            .with_config("case", &self.case)
            .with_config("nu", &self.nu)
            .with_config("cap", self.cap)
            .with_config("seed", self.seed)
            .with_config("field", &self.field);
        if let Some(p) = self.p_order {
            r = r.with_config("p_order", p);
        }
        r
    }
}

fn parse_kind(s: &str, p_order: Option<u32>) -> Result<OrbitDescriptor> {
    let o = match s.trim() {
        "A1" => OrbitDescriptor::a1(),
        "A2" => OrbitDescriptor::a2(),
        "A3" => OrbitDescriptor::a3(),
        other => return Err(Error::Config(format!("unknown case `{other}`; expected A1, A2, A3 or separated(...)"))),
    };
    Ok(OrbitDescriptor { p_order, ..o })
}

/// `A1`, `A2`, `A3`, or `separated(K1,K2,...)`.
pub fn parse_case(case: &str, p_order: Option<u32>) -> Result<OrbitDescriptor> {
    let c = case.trim();
    if let Some(inner) = c.strip_prefix("separated(").and_then(|r| r.strip_suffix(')')) {
        let parts = inner
            .split(',')
            .map(|k| {
                let lone = if k.trim() == "A1" { p_order } else { None };
                parse_kind(k, lone)
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(OrbitDescriptor::separated(parts));
    }
    parse_kind(c, p_order)
}

/// The suites `run_suite` understands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Relations,
    Morita(HomName),
    Fullness,
    Heredity,
    Dims,
    All,
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "relations" => SuiteName::Relations,
            "fullness" => SuiteName::Fullness,
            "heredity" => SuiteName::Heredity,
            "dims" => SuiteName::Dims,
            "all" => SuiteName::All,
            other => match other.strip_prefix("morita:") {
                Some(n) => SuiteName::Morita(n.parse().map_err(|e: Error| Error::Config(e.to_string()))?),
                None => return Err(Error::Config(format!("unknown suite `{s}`"))),
            },
        })
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteName::Relations => f.write_str("relations"),
            SuiteName::Morita(n) => write!(f, "morita:{n}"),
            SuiteName::Fullness => f.write_str("fullness"),
            SuiteName::Heredity => f.write_str("heredity"),
            SuiteName::Dims => f.write_str("dims"),
            SuiteName::All => f.write_str("all"),
        }
    }
}

/// Runs one suite. Configuration problems are errors; unmet hypotheses become skipped checks.
pub fn run_suite(config: &SuiteConfig, suite: &str) -> Result<VerificationReport> {
    let name: SuiteName = suite.parse()?;
    let report = VerificationReport::new(name.to_string());
    let (orbit, nu, field) = match config.resolve() {
        Ok(x) => x,
        Err(Error::Hypothesis(why)) => {
            let mut r = report;
            r.skip("hypothesis", why);
            return Ok(config.stamp(r));
        }
        Err(e) => return Err(e),
    };
    let run = Run { orbit, nu, field, cap: config.cap, seed: config.seed };
    let mut report = report;
    match name {
        SuiteName::Relations => report.absorb("", run.relations()?),
        SuiteName::Morita(h) => report.absorb("", run.morita(h)?),
        SuiteName::Fullness => report.absorb("", run.fullness()?),
        SuiteName::Heredity => report.absorb("", run.heredity()?),
        SuiteName::Dims => report.absorb("", run.dims()?),
        SuiteName::All => {
            report.absorb("relations", run.relations()?);
            report.absorb("fullness", run.fullness()?);
            for h in run.applicable_homs() {
                report.absorb(&format!("morita:{h}"), run.morita(h)?);
            }
            report.absorb("dims", run.dims()?);
            if run.orbit.special_vertex().is_some() && !run.orbit.is_separated() {
                report.absorb("heredity", run.heredity()?);
            }
        }
    }
    Ok(config.stamp(report))
}

struct Run {
    orbit: OrbitDescriptor,
    nu: DimVector,
    field: Field,
    cap: i64,
    seed: u64,
}

impl Run {
    fn vv(&self) -> Result<Algebra> {
        Algebra::new(AlgebraDescriptor::vv(self.nu.clone(), self.orbit.clone()).with_cap(self.cap))
    }

    fn m(&self) -> usize {
        (self.nu.total() / 2) as usize
    }

    fn relations(&self) -> Result<VerificationReport> {
        let vv = self.vv()?;
        let ctx = if self.m() <= 2 { Context::WordsAndDots } else { Context::Words };
        let mut r = relation_suite(&vv, ctx)?;
        let samples = if self.m() <= 2 { 200 } else { 20 };
        r.absorb("", associativity_check(&vv, samples, self.seed)?);
        r.absorb("", anti_involution_check(&vv, samples / 2, self.seed)?);
        Ok(r)
    }

    fn applicable_homs(&self) -> Vec<HomName> {
        if self.orbit.is_separated() {
            return vec![HomName::PsiSeparated];
        }
        match self.orbit.kind {
            OrbitKind::A1 => vec![HomName::FIdemSubalg, HomName::PsiPlusMinus],
            OrbitKind::A2 => vec![HomName::PhiMultOne, HomName::PhiKzQ, HomName::PsiPlusMinus],
            _ => vec![HomName::PhiKzP, HomName::PsiPlusMinus],
        }
    }

    fn morita(&self, name: HomName) -> Result<VerificationReport> {
        let params = HomParams::new(self.nu.clone(), self.orbit.clone());
        let mut report = VerificationReport::new(format!("morita:{name}"));
        if name == HomName::FIdemSubalg {
            if self.orbit.kind != OrbitKind::A1 {
                report.skip("hypothesis", "f is defined for the generic orbit");
                return Ok(report);
            }
            let vv = self.vv()?;
            for nt in admissible_nu_tildes(&self.nu, &self.orbit) {
                let label = format!("ν̃={}", nt.format(&self.orbit));
                let h = hom_catalog(name, &params.clone().with_nu_tilde(nt.clone()))?;
                report.absorb(&label, certify(&h, self.cap, 6.min(self.cap), self.field)?);
                let sub = idempotent_subalgebra(&vv, &nt)?;
                let prods = sub.coset_products(&vv)?;
                let bad: Vec<String> =
                    prods.iter().filter(|(_, p)| !p.is_zero()).map(|(w, _)| format!("{w:?}")).collect();
                report.check(
                    format!("{label}/e σ_η e = 0"),
                    bad.is_empty(),
                    format!("{} representatives η ≠ 1; nonzero for {bad:?}", prods.len()),
                );
            }
            return Ok(report);
        }
        match hom_catalog(name, &params) {
            Ok(h) => report.absorb("", certify(&h, self.cap, DEFAULT_SURJ_DEGREE.min(self.cap), self.field)?),
            Err(Error::Hypothesis(why)) => report.skip("hypothesis", why),
            Err(e) => return Err(e),
        }
        Ok(report)
    }

    /// Morita idempotents of the summary table rows that apply, with the reason when a row's
    /// hypothesis fails.
    fn families(&self) -> Vec<(TargetFamily, Option<&'static str>)> {
        if self.orbit.is_separated() {
            return vec![(TargetFamily::SeparatedBlock, None)];
        }
        let special = self.orbit.special_vertex().map(|v| self.nu.get(&v));
        match self.orbit.kind {
            OrbitKind::A1 => vec![(TargetFamily::PlusMinusKlr, None)],
            OrbitKind::A2 => {
                let kz = (special != Some(1)).then_some("mult(q) = 1");
                let mult_one = multiplicity_info(&self.nu).is_mult_one;
                vec![
                    (TargetFamily::PlusMinusKlr, kz),
                    (TargetFamily::RootPartitionIdems, (!mult_one).then_some("mult(ν) = 1")),
                ]
            }
            _ => vec![(TargetFamily::PlusMinusKlr, (special != Some(2)).then_some("mult(p) = 2"))],
        }
    }

    fn fullness(&self) -> Result<VerificationReport> {
        let vv = self.vv()?;
        let mut report = VerificationReport::new("fullness");
        for (fam, unmet) in self.families() {
            let label = format!("{fam:?}");
            if let Some(h) = unmet {
                report.skip(label, format!("row needs {h}"));
                continue;
            }
            report.absorb(&label, verify_fullness(&vv, fam)?);
            let corner = morita_idempotent(&vv, fam)?;
            report.absorb(&label, fixes_idempotent(&vv, &corner)?);
        }
        Ok(report)
    }

    fn heredity(&self) -> Result<VerificationReport> {
        let mut report = heredity_chain_check(self.cap)?;
        report.absorb("", balanced_involution_check(4)?);
        Ok(report)
    }

    fn dims(&self) -> Result<VerificationReport> {
        let vv = self.vv()?;
        let mut report = basis_rank_check(&vv)?;
        report.absorb("", graded_dimension_consistency(&vv, self.cap)?);
        let a = Algebra::new(AlgebraDescriptor::path(crate::engine::PathWhich::A))?;
        let got = a.graded_dimension(self.cap);
        let want = geometric(1, self.cap)?.scale(&rat(2));
        report.check("dim_q A = 2/(1-q)", series_eq_up_to(&got, &want, self.cap)?, got.to_string());
        for m in 1..=3 {
            report.absorb("", tensor_power_dimension_check(m, self.cap)?);
        }
        if self.orbit.is_separated() && self.orbit.num_parts() == 2 {
            report.absorb("", separated_dimension_check(&vv, &self.nu, &self.orbit, self.cap)?);
        } else if let Some(special) = self.orbit.special_vertex() {
            let need = if self.orbit.kind == OrbitKind::A2 { 1 } else { 2 };
            if self.nu.get(&special) == need {
                report.absorb("", kz_dimension_check(&vv, &self.nu, &self.orbit, self.cap)?);
            }
        }
        Ok(report)
    }
}

fn random_monomials(alg: &Algebra, rng: &mut ChaCha8Rng, n: usize) -> Vec<Mono> {
    let lo = alg.min_degree();
    let pool: Vec<Mono> = (lo..=lo + 3).flat_map(|d| alg.component_basis(d)).collect();
    (0..n).map(|_| pool.choose(rng).expect("nonempty basis").clone()).collect()
}

/// `(ab)c = a(bc)` on seeded random basis monomials.
pub fn associativity_check(alg: &Algebra, samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mono = random_monomials(alg, &mut rng, 3 * samples);
    let mut bad = 0;
    for t in mono.chunks(3) {
        let [a, b, c] = [0, 1, 2].map(|k| Element::from_mono(t[k].clone()));
        let left = alg.multiply(&alg.multiply(&a, &b)?, &c)?;
        let right = alg.multiply(&a, &alg.multiply(&b, &c)?)?;
        bad += usize::from(left != right);
    }
    let mut r = VerificationReport::new("associativity");
    r.check("associativity", bad == 0, format!("{samples} triples, seed {seed}, {bad} mismatches"));
    Ok(r)
}

/// `i² = id` and `i(ab) = i(b)i(a)` on seeded random pairs.
pub fn anti_involution_check(alg: &Algebra, samples: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mono = random_monomials(alg, &mut rng, 2 * samples);
    let (mut square, mut anti) = (0, 0);
    for t in mono.chunks(2) {
        let (a, b) = (Element::from_mono(t[0].clone()), Element::from_mono(t[1].clone()));
        square += usize::from(alg.rho_reverse(&alg.rho_reverse(&a)?)? != a);
        let lhs = alg.rho_reverse(&alg.multiply(&a, &b)?)?;
        let rhs = alg.multiply(&alg.rho_reverse(&b)?, &alg.rho_reverse(&a)?)?;
        anti += usize::from(lhs != rhs);
    }
    let mut r = VerificationReport::new("anti_involution");
    r.check("i^2 = id", square == 0, format!("{samples} samples, {square} mismatches"));
    r.check("i(ab) = i(b)i(a)", anti == 0, format!("{samples} pairs, seed {seed}, {anti} mismatches"));
    Ok(r)
}

/// `i(e) = e` for an idempotent given by its sequences.
pub fn fixes_idempotent(alg: &Algebra, corner: &BTreeSet<Vec<Vertex>>) -> Result<VerificationReport> {
    let seqs: Vec<_> = corner.iter().cloned().collect();
    let e = alg.idem_sum(&seqs)?;
    let mut r = VerificationReport::new("i(e)");
    r.check("i(e) = e", alg.rho_reverse(&e)? == e, format!("{} summands", seqs.len()));
    Ok(r)
}

/// Exponent-free basis monomials per idempotent against `2^m·m!`.
pub fn basis_rank_check(vv: &Algebra) -> Result<VerificationReport> {
    let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
    let want: usize = (1..=h.m).product::<usize>() << h.m;
    let mut counts = std::collections::BTreeMap::new();
    for (_, idem, _) in h.word_idem_degrees() {
        *counts.entry(idem).or_insert(0usize) += 1;
    }
    let bad = h.seqs.iter().filter(|s| counts.get(*s).copied().unwrap_or(0) != want).count();
    let mut r = VerificationReport::new("basis_rank");
    r.check("rank 2^m·m! per idempotent", bad == 0, format!("m = {}, expected {want}, {bad} idempotents differ", h.m));
    Ok(r)
}

/// The closed-form graded dimension against a count of basis monomials per degree.
pub fn graded_dimension_consistency(alg: &Algebra, cap: i64) -> Result<VerificationReport> {
    let closed = alg.graded_dimension(cap);
    let lo = alg.min_degree();
    let counts: Vec<i64> = (lo..=cap).map(|d| alg.component_basis(d).len() as i64).collect();
    let counted = TruncSeries::from_coeffs_at(lo, &counts.iter().map(|&c| rat(c)).collect::<Vec<_>>(), cap);
    let mut r = VerificationReport::new("graded_dimension");
    r.check("dim_q by degree count", series_eq_up_to(&closed, &counted, cap)?, closed.to_string());
    Ok(r)
}

/// `dim_q(e𝔚e) = dim_q(𝔚_{ν₁} ⊗ 𝔚_{ν₂})` for two separated parts.
pub fn separated_dimension_check(
    vv: &Algebra,
    nu: &DimVector,
    orbit: &OrbitDescriptor,
    cap: i64,
) -> Result<VerificationReport> {
    let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
    let corner = crate::klr_vv::separated_block_idems(vv)?;
    let got = corner_dimension(h, &corner, cap);
    let a1 = Algebra::new(AlgebraDescriptor::vv(nu.orbit_part(0), orbit.part(0).clone()))?;
    let a2 = Algebra::new(AlgebraDescriptor::vv(nu.orbit_part(1).retag(0), orbit.part(1).clone()))?;
    // Negative lowest degrees shorten a truncated product; extend each factor by the other's.
    let d1 = a1.graded_dimension(cap - a2.min_degree().min(0));
    let d2 = a2.graded_dimension(cap - a1.min_degree().min(0));
    let want = d1.mul(&d2);
    let mut r = VerificationReport::new("separated_dimension");
    r.check("dim_q(e𝔚e) = dim_q(𝔚ν1⊗𝔚ν2)", series_eq_up_to(&got, &want, cap)?, got.to_string());
    Ok(r)
}

/// `dim_q(e𝔚e) = 2(1+q)·dim_q(R⁺)` for the `k[z]` cases.
pub fn kz_dimension_check(vv: &Algebra, nu: &DimVector, orbit: &OrbitDescriptor, cap: i64) -> Result<VerificationReport> {
    let h = vv.hecke().ok_or(Error::AlgebraMismatch)?;
    let corner = plus_minus_idems(nu, orbit, true);
    let got = corner_dimension(h, &corner, cap);
    let rplus = Algebra::new(AlgebraDescriptor::klr(nu.branch_part(Branch::Plus), orbit.clone()))?;
    let base = rplus.graded_dimension(cap);
    let factor = TruncSeries::from_ints(&[2, 2], cap - rplus.min_degree().min(0));
    let want = base.mul(&factor);
    let mut r = VerificationReport::new("kz_dimension");
    r.check("dim_q(e𝔚e) = 2(1+q)·dim_q(R+)", series_eq_up_to(&got, &want, cap)?, got.to_string());
    Ok(r)
}

/// One standard fixture: a named VV algebra.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub config: SuiteConfig,
}

impl Fixture {
    fn new(name: &'static str, case: &str, nu: &str) -> Self {
        Fixture { name, config: SuiteConfig::new(case, nu) }
    }

    pub fn m(&self) -> usize {
        self.config.resolve().map(|(_, nu, _)| (nu.total() / 2) as usize).unwrap_or(0)
    }

    pub fn algebra(&self) -> Result<Algebra> {
        let (orbit, nu, _) = self.config.resolve()?;
        Algebra::new(AlgebraDescriptor::vv(nu, orbit).with_cap(self.config.cap))
    }
}

/// The standard fixtures, every case with `m ≤ 3`.
pub fn standard_fixtures() -> Vec<Fixture> {
    let mut f = vec![
        Fixture::new("A1 l", "A1", "l"),
        Fixture::new("A1 l+p2l", "A1", "l + p2*l"),
        Fixture::new("A1 2l", "A1", "2*l"),
        Fixture::new("A1 l+p2l+p4l", "A1", "l + p2*l + p4*l"),
        Fixture::new("A1 2l+p2l", "A1", "2*l + p2*l"),
        Fixture::new("A2 q", "A2", "q"),
        Fixture::new("A2 q+p2q", "A2", "q + p2*q"),
        Fixture::new("A2 2q", "A2", "2*q"),
        Fixture::new("A2 q+p2q+p4q", "A2", "q + p2*q + p4*q"),
        Fixture::new("A2 q+2p2q", "A2", "q + 2*p2*q"),
        Fixture::new("A3 p", "A3", "p"),
        Fixture::new("A3 2p", "A3", "2*p"),
        Fixture::new("A3 2p+p3", "A3", "2*p + p3"),
        Fixture::new("sep l+m", "separated(A1,A1)", "l + m"),
        Fixture::new("sep l+q", "separated(A1,A2)", "l + q"),
        Fixture::new("sep l+p2l+q", "separated(A1,A2)", "l + p2*l + q"),
    ];
    let mut r3 = Fixture::new("A1 r=3 l+p2l", "A1", "l + p2*l");
    r3.config.p_order = Some(3);
    f.push(r3);
    f
}

/// The VV fixture kind of an algebra (for labels).
pub fn case_label(alg: &Algebra) -> &'static str {
    match &alg.descriptor().kind {
        AlgebraKind::SeparatedVv { .. } => "separated",
        AlgebraKind::Vv { orbit, .. } => match orbit.kind {
            OrbitKind::A1 => "A1",
            OrbitKind::A2 => "A2",
            _ => "A3",
        },
        _ => "other",
    }
}
