//! Orbits `I` with the involution `θ(i) = i⁻¹`, the quiver `Γ_I`, and dimension vectors.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitKind {
    /// Orbit of a generic `λ`: vertices `p^{2n}λ^{±1}`.
    A1,
    /// Orbit of `q`: vertices `p^{2n}q^{±1}`.
    A2,
    /// Orbit of `p`: vertices `p^{a}`, `a` odd.
    A3,
    Separated(Vec<OrbitDescriptor>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitDescriptor {
    pub kind: OrbitKind,
    /// Order `r` of `p²` when it is a root of unity; `None` for infinite order.
    pub p_order: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn flip(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// A vertex `p^{2n}x^{±1}` of sub-orbit `orbit`. In an `A3` orbit the vertex is `p^{2n+1}` on
/// the plus branch (`n >= 0`) and `p^{2n-1}` on the minus branch (`n <= 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub orbit: u8,
    pub branch: Branch,
    pub n: i32,
}

impl Vertex {
    pub fn new(orbit: u8, branch: Branch, n: i32) -> Self {
        Vertex { orbit, branch, n }
    }

    pub fn plus(n: i32) -> Self {
        Vertex::new(0, Branch::Plus, n)
    }

    pub fn minus(n: i32) -> Self {
        Vertex::new(0, Branch::Minus, n)
    }

    /// The `A3` vertex `p^a` for odd `a`.
    pub fn p_power(orbit: u8, a: i32) -> Self {
        assert!(a % 2 != 0, "p-orbit exponents are odd");
        if a > 0 {
            Vertex::new(orbit, Branch::Plus, (a - 1) / 2)
        } else {
            Vertex::new(orbit, Branch::Minus, (a + 1) / 2)
        }
    }

    /// Exponent of `p` for an `A3` vertex.
    pub fn p_exponent(&self) -> i32 {
        match self.branch {
            Branch::Plus => 2 * self.n + 1,
            Branch::Minus => 2 * self.n - 1,
        }
    }
}

const A1_SYMBOLS: [&str; 4] = ["l", "m", "u", "w"];

impl OrbitDescriptor {
    pub fn a1() -> Self {
        OrbitDescriptor { kind: OrbitKind::A1, p_order: None }
    }

    pub fn a2() -> Self {
        OrbitDescriptor { kind: OrbitKind::A2, p_order: None }
    }

    pub fn a3() -> Self {
        OrbitDescriptor { kind: OrbitKind::A3, p_order: None }
    }

    pub fn a1_root_of_unity(r: u32) -> Self {
        OrbitDescriptor { kind: OrbitKind::A1, p_order: Some(r) }
    }

    pub fn separated(parts: Vec<OrbitDescriptor>) -> Self {
        OrbitDescriptor { kind: OrbitKind::Separated(parts), p_order: None }
    }

    /// Checks the standing assumptions that can be expressed combinatorially.
    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            OrbitKind::Separated(parts) => {
                if parts.len() < 2 {
                    return Err(Error::InvalidArgument("separated orbit needs at least two parts".into()));
                }
                let q = parts.iter().filter(|o| o.kind == OrbitKind::A2).count();
                let p = parts.iter().filter(|o| o.kind == OrbitKind::A3).count();
                if q > 0 && p > 0 {
                    return Err(Error::Hypothesis("p and q both in I is not treated".into()));
                }
                if q > 1 || p > 1 {
                    return Err(Error::InvalidArgument("q and p each determine a single orbit".into()));
                }
                if parts.iter().filter(|o| o.kind == OrbitKind::A1).count() > A1_SYMBOLS.len() {
                    return Err(Error::InvalidArgument("too many generic orbits".into()));
                }
                for o in parts {
                    if matches!(o.kind, OrbitKind::Separated(_)) {
                        return Err(Error::InvalidArgument("nested separated orbits".into()));
                    }
                    o.validate()?;
                }
                Ok(())
            }
            kind => match self.p_order {
                Some(r) if r < 2 => Err(Error::InvalidArgument("p² must have order at least 2".into())),
                Some(_) if *kind != OrbitKind::A1 => Err(Error::InvalidArgument(
                    "roots of unity are supported for the generic orbit only".into(),
                )),
                _ => Ok(()),
            },
        }
    }

    /// The descriptor of sub-orbit `tag` (the whole orbit when not separated).
    pub fn part(&self, tag: u8) -> &OrbitDescriptor {
        match &self.kind {
            OrbitKind::Separated(parts) => &parts[tag as usize],
            _ => self,
        }
    }

    pub fn num_parts(&self) -> usize {
        match &self.kind {
            OrbitKind::Separated(parts) => parts.len(),
            _ => 1,
        }
    }

    pub fn is_separated(&self) -> bool {
        matches!(self.kind, OrbitKind::Separated(_))
    }

    fn reduce_n(&self, n: i32) -> i32 {
        match self.p_order {
            Some(r) => n.rem_euclid(r as i32),
            None => n,
        }
    }

    /// Canonical form of a vertex (reduces `n` modulo the order of `p²`).
    pub fn normalize(&self, v: Vertex) -> Vertex {
        let part = self.part(v.orbit);
        Vertex { n: part.reduce_n(v.n), ..v }
    }

    pub fn theta(&self, v: &Vertex) -> Vertex {
        let part = self.part(v.orbit);
        Vertex { orbit: v.orbit, branch: v.branch.flip(), n: part.reduce_n(-v.n) }
    }

    /// `p² · v`.
    pub fn shift(&self, v: &Vertex, steps: i32) -> Vertex {
        let part = self.part(v.orbit);
        match part.kind {
            OrbitKind::A3 => Vertex::p_power(v.orbit, v.p_exponent() + 2 * steps),
            _ => Vertex { n: part.reduce_n(v.n + steps), ..*v },
        }
    }

    /// Number of arrows `i → j`; arrows are `p²j → j`.
    pub fn arrow_count(&self, i: &Vertex, j: &Vertex) -> u32 {
        if i.orbit != j.orbit || i == j {
            return 0;
        }
        let part = self.part(i.orbit);
        match part.kind {
            OrbitKind::A3 => u32::from(i.p_exponent() == j.p_exponent() + 2),
            _ => u32::from(i.branch == j.branch && self.shift(j, 1) == *i),
        }
    }

    pub fn is_q(&self, v: &Vertex) -> bool {
        self.part(v.orbit).kind == OrbitKind::A2 && v.branch == Branch::Plus && v.n == 0
    }

    pub fn is_q_inv(&self, v: &Vertex) -> bool {
        self.part(v.orbit).kind == OrbitKind::A2 && v.branch == Branch::Minus && v.n == 0
    }

    pub fn is_p(&self, v: &Vertex) -> bool {
        self.part(v.orbit).kind == OrbitKind::A3 && v.p_exponent() == 1
    }

    pub fn is_p_inv(&self, v: &Vertex) -> bool {
        self.part(v.orbit).kind == OrbitKind::A3 && v.p_exponent() == -1
    }

    /// The distinguished vertex `q` or `p` of an orbit that contains one.
    pub fn special_vertex(&self) -> Option<Vertex> {
        for tag in 0..self.num_parts() {
            match self.part(tag as u8).kind {
                OrbitKind::A2 => return Some(Vertex::new(tag as u8, Branch::Plus, 0)),
                OrbitKind::A3 => return Some(Vertex::p_power(tag as u8, 1)),
                _ => {}
            }
        }
        None
    }

    fn symbol(&self, tag: u8) -> String {
        match &self.kind {
            OrbitKind::Separated(parts) => {
                let k = parts[..tag as usize].iter().filter(|o| o.kind == OrbitKind::A1).count();
                match parts[tag as usize].kind {
                    OrbitKind::A2 => "q".into(),
                    OrbitKind::A3 => "p".into(),
                    _ => A1_SYMBOLS[k].into(),
                }
            }
            OrbitKind::A2 => "q".into(),
            OrbitKind::A3 => "p".into(),
            OrbitKind::A1 => "l".into(),
        }
    }

    /// Prints a vertex in the CLI grammar (`p2*l`, `l^-1`, `p-2*q^-1`, `p3`, `p^-1`).
    pub fn format_vertex(&self, v: &Vertex) -> String {
        let part = self.part(v.orbit);
        if part.kind == OrbitKind::A3 {
            return match v.p_exponent() {
                1 => "p".into(),
                -1 => "p^-1".into(),
                a => format!("p{a}"),
            };
        }
        let base = self.symbol(v.orbit);
        let inv = if v.branch == Branch::Minus { "^-1" } else { "" };
        if v.n == 0 {
            format!("{base}{inv}")
        } else {
            format!("p{}*{base}{inv}", 2 * v.n)
        }
    }

    /// Parses a vertex written in the CLI grammar.
    pub fn parse_vertex(&self, text: &str) -> Result<Vertex> {
        let t = text.trim();
        let bad = || Error::InvalidToken(format!("unknown vertex `{text}`"));
        let (coef, base) = match t.split_once('*') {
            Some((c, b)) => (Some(c.trim()), b.trim()),
            None => (None, t),
        };
        let (name, inv) = match base.strip_suffix("^-1") {
            Some(n) => (n, true),
            None => (base, false),
        };
        if coef.is_none() && (name == "p" || name.starts_with('p')) {
            if let Some(tag) = (0..self.num_parts()).find(|&k| self.part(k as u8).kind == OrbitKind::A3) {
                let a: i32 = if name == "p" {
                    1
                } else {
                    let digits = name[1..].trim_start_matches('^');
                    digits.parse().map_err(|_| bad())?
                };
                let a = if inv { -a } else { a };
                if a % 2 == 0 {
                    return Err(bad());
                }
                return Ok(Vertex::p_power(tag as u8, a));
            }
        }
        let tag = (0..self.num_parts() as u8)
            .find(|&k| self.part(k).kind != OrbitKind::A3 && self.symbol(k) == name)
            .ok_or_else(bad)?;
        let n = match coef {
            None => 0,
            Some(c) => {
                let e: i32 = c.strip_prefix('p').ok_or_else(bad)?.trim_start_matches('^').parse().map_err(|_| bad())?;
                if e % 2 != 0 {
                    return Err(bad());
                }
                e / 2
            }
        };
        let branch = if inv { Branch::Minus } else { Branch::Plus };
        Ok(self.normalize(Vertex::new(tag, branch, n)))
    }
}

/// A finitely supported multiplicity function on vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector {
    entries: BTreeMap<Vertex, u32>,
}

impl DimVector {
    pub fn new() -> Self {
        DimVector::default()
    }

    /// A dimension vector exactly as given (for `ν̃`), merging repeated vertices.
    pub fn from_list(entries: &[(Vertex, u32)]) -> Self {
        let mut d = DimVector::new();
        for &(v, c) in entries {
            if c > 0 {
                *d.entries.entry(v).or_insert(0) += c;
            }
        }
        d
    }

    /// `ν̃ + θ(ν̃)`.
    pub fn theta_double(&self, orbit: &OrbitDescriptor) -> Self {
        let mut d = self.clone();
        for (v, &c) in &self.entries {
            *d.entries.entry(orbit.theta(v)).or_insert(0) += c;
        }
        d
    }

    /// A θ-symmetric vector: each listed vertex contributes to itself and its dual, unless
    /// the dual is listed too, in which case the two multiplicities must agree.
    pub fn theta_closed(entries: &[(Vertex, u32)], orbit: &OrbitDescriptor) -> Result<Self> {
        let given = DimVector::from_list(entries);
        let mut d = DimVector::new();
        for (v, &c) in &given.entries {
            let t = orbit.theta(v);
            if let Some(&ct) = given.entries.get(&t) {
                if ct != c {
                    return Err(Error::InvalidDimVector(format!(
                        "{} has multiplicity {c} but its dual {ct}",
                        orbit.format_vertex(v)
                    )));
                }
            }
            d.entries.insert(*v, c);
            d.entries.insert(t, c);
        }
        Ok(d)
    }

    pub fn get(&self, v: &Vertex) -> u32 {
        self.entries.get(v).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<Vertex, u32> {
        &self.entries
    }

    pub fn total(&self) -> u32 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_theta_symmetric(&self, orbit: &OrbitDescriptor) -> bool {
        self.entries.iter().all(|(v, &c)| self.get(&orbit.theta(v)) == c)
    }

    /// Restriction to one branch (the `ν̃^±` of a θ-symmetric `ν`).
    pub fn branch_part(&self, branch: Branch) -> Self {
        DimVector { entries: self.entries.iter().filter(|(v, _)| v.branch == branch).map(|(v, c)| (*v, *c)).collect() }
    }

    /// Restriction to one sub-orbit.
    pub fn orbit_part(&self, tag: u8) -> Self {
        DimVector { entries: self.entries.iter().filter(|(v, _)| v.orbit == tag).map(|(v, c)| (*v, *c)).collect() }
    }

    /// Relabels every vertex to sub-orbit `tag`.
    pub fn retag(&self, tag: u8) -> Self {
        DimVector { entries: self.entries.iter().map(|(v, c)| (Vertex { orbit: tag, ..*v }, *c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = self.clone();
        for (v, &c) in &other.entries {
            *d.entries.entry(*v).or_insert(0) += c;
        }
        d
    }

    pub fn format(&self, orbit: &OrbitDescriptor) -> String {
        if self.entries.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(v, &c)| {
                let s = orbit.format_vertex(v);
                if c == 1 {
                    s
                } else {
                    format!("{c}*{s}")
                }
            })
            .collect();
        parts.join("+")
    }
}

/// Which sequence set to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqKind {
    /// `ᶿI^ν`: sequences with `Σ (i_k + i_k⁻¹) = ν`.
    ThetaNu,
    /// `I^{ν̃⁺}`: arrangements of the plus-branch half of `ν`.
    Plus,
    /// `I^{ν̃⁻}`: arrangements of the minus-branch half of `ν`.
    Minus,
}

pub type IdemSeq = Vec<Vertex>;

/// All arrangements of the multiset `ν̃` in lexicographic order.
pub fn arrangements(nu_tilde: &DimVector) -> Vec<IdemSeq> {
    let verts: Vec<(Vertex, u32)> = nu_tilde.entries.iter().map(|(v, c)| (*v, *c)).collect();
    let mut counts: Vec<u32> = verts.iter().map(|x| x.1).collect();
    let m = nu_tilde.total() as usize;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(verts: &[(Vertex, u32)], counts: &mut [u32], cur: &mut Vec<Vertex>, m: usize, out: &mut Vec<IdemSeq>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in 0..verts.len() {
            if counts[k] > 0 {
                counts[k] -= 1;
                cur.push(verts[k].0);
                rec(verts, counts, cur, m, out);
                cur.pop();
                counts[k] += 1;
            }
        }
    }
    rec(&verts, &mut counts, &mut cur, m, &mut out);
    out
}

/// `ᶿI^ν` in lexicographic order.
pub fn theta_sequences(nu: &DimVector, orbit: &OrbitDescriptor) -> Result<Vec<IdemSeq>> {
    if !nu.is_theta_symmetric(orbit) {
        return Err(Error::InvalidDimVector("not θ-symmetric".into()));
    }
    let verts: Vec<Vertex> = nu.entries.keys().copied().collect();
    let mut counts: BTreeMap<Vertex, u32> = nu.entries.clone();
    let m = (nu.total() / 2) as usize;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(
        verts: &[Vertex],
        counts: &mut BTreeMap<Vertex, u32>,
        orbit: &OrbitDescriptor,
        cur: &mut Vec<Vertex>,
        m: usize,
        out: &mut Vec<IdemSeq>,
    ) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in verts {
            let t = orbit.theta(v);
            if counts[v] > 0 && counts[&t] > 0 {
                *counts.get_mut(v).unwrap() -= 1;
                *counts.get_mut(&t).unwrap() -= 1;
                cur.push(*v);
                rec(verts, counts, orbit, cur, m, out);
                cur.pop();
                *counts.get_mut(v).unwrap() += 1;
                *counts.get_mut(&t).unwrap() += 1;
            }
        }
    }
    rec(&verts, &mut counts, orbit, &mut cur, m, &mut out);
    Ok(out)
}

pub fn sequences_of(nu: &DimVector, kind: SeqKind, orbit: &OrbitDescriptor) -> Result<Vec<IdemSeq>> {
    match kind {
        SeqKind::ThetaNu => theta_sequences(nu, orbit),
        SeqKind::Plus => Ok(arrangements(&nu.branch_part(Branch::Plus))),
        SeqKind::Minus => Ok(arrangements(&nu.branch_part(Branch::Minus))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityInfo {
    pub is_mult_one: bool,
    pub per_vertex: BTreeMap<Vertex, u32>,
}

pub fn multiplicity_info(nu: &DimVector) -> MultiplicityInfo {
    MultiplicityInfo { is_mult_one: nu.entries.values().all(|&c| c == 1), per_vertex: nu.entries.clone() }
}

/// Position (1-based) of the first occurrence of `v` in `i`.
pub fn position_of(i: &[Vertex], v: &Vertex) -> Option<usize> {
    i.iter().position(|x| x == v).map(|k| k + 1)
}

/// Positions (1-based) of every occurrence of `v` in `i`.
pub fn positions_of(i: &[Vertex], v: &Vertex) -> Vec<usize> {
    i.iter().enumerate().filter(|(_, x)| *x == v).map(|(k, _)| k + 1).collect()
}

pub struct SeqDisplay<'a>(pub &'a OrbitDescriptor, pub &'a [Vertex]);

impl fmt::Display for SeqDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.1.iter().map(|v| self.0.format_vertex(v)).collect();
        write!(f, "({})", parts.join(","))
    }
}
