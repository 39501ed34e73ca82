//! Exact rank computations over `Q` or `GF(p)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::engine::{Element, Mono};
use crate::error::{Error, Result};
use crate::series::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Field {
    #[default]
    Rational,
    /// `GF(p)` for an odd prime `p`; coefficients are computed over `Q` and reduced.
    Prime(u64),
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Config(format!("unknown field `{s}`; expected Q or GF(p)")))?;
        let p: u64 = inner.trim().parse().map_err(|_| Error::Config(format!("bad characteristic in `{s}`")))?;
        if p <= 2 || !is_prime(p) {
            return Err(Error::Config(format!("GF({p}) needs an odd prime")));
        }
        Ok(Field::Prime(p))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn big_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// Image of a rational in `GF(p)`.
pub fn reduce_mod(c: &Rational, p: u64) -> Result<u64> {
    let d = big_mod(c.denom(), p);
    if d == 0 {
        return Err(Error::InvalidArgument(format!("coefficient {c} is not defined over GF({p})")));
    }
    let n = big_mod(c.numer(), p);
    Ok(((n as u128 * pow_mod(d, p - 2, p) as u128) % p as u128) as u64)
}

trait Scalar: Clone {
    fn is_zero(&self) -> bool;
    /// `self - c·b`
    fn sub_mul(&self, c: &Self, b: &Self) -> Self;
    fn div(&self, b: &Self) -> Self;
    fn neg_mul(c: &Self, b: &Self) -> Self;
}

impl Scalar for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, c: &Self, b: &Self) -> Self {
        self - c * b
    }
    fn div(&self, b: &Self) -> Self {
        self / b
    }
    fn neg_mul(c: &Self, b: &Self) -> Self {
        -(c * b)
    }
}

#[derive(Clone, Copy)]
struct Fp(u64, u64);

impl Scalar for Fp {
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn sub_mul(&self, c: &Self, b: &Self) -> Self {
        let p = self.1 as u128;
        let prod = (c.0 as u128 * b.0 as u128) % p;
        Fp(((self.0 as u128 + p - prod) % p) as u64, self.1)
    }
    fn div(&self, b: &Self) -> Self {
        let inv = pow_mod(b.0, self.1 - 2, self.1);
        Fp(((self.0 as u128 * inv as u128) % self.1 as u128) as u64, self.1)
    }
    fn neg_mul(c: &Self, b: &Self) -> Self {
        Fp(0, c.1).sub_mul(c, b)
    }
}

type Row<S> = BTreeMap<Mono, S>;

/// Row echelon form with pivots on leading monomials.
struct Echelon<S: Scalar> {
    pivots: BTreeMap<Mono, Row<S>>,
}

impl<S: Scalar> Echelon<S> {
    fn new() -> Self {
        Echelon { pivots: BTreeMap::new() }
    }

    fn reduce(&self, mut row: Row<S>) -> Row<S> {
        loop {
            let (lead, c) = match row.iter().find(|(m, _)| self.pivots.contains_key(*m)) {
                Some((m, c)) => (m.clone(), c.clone()),
                None => return row,
            };
            let piv = &self.pivots[&lead];
            for (m, b) in piv {
                let next = match row.get(m) {
                    Some(a) => a.sub_mul(&c, b),
                    None => S::neg_mul(&c, b),
                };
                if next.is_zero() {
                    row.remove(m);
                } else {
                    row.insert(m.clone(), next);
                }
            }
        }
    }

    /// Adds a row; returns whether it was independent.
    fn insert(&mut self, row: Row<S>) -> bool {
        let row = self.reduce(row);
        let (lead, c) = match row.iter().next() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return false,
        };
        let normalized: Row<S> = row.into_iter().map(|(m, v)| (m, v.div(&c))).collect();
        self.pivots.insert(lead, normalized);
        true
    }
}

fn rows_q(vectors: &[Element]) -> Vec<Row<Rational>> {
    vectors.iter().map(|v| v.terms().map(|(m, c)| (m.clone(), c.clone())).collect()).collect()
}

fn rows_p(vectors: &[Element], p: u64) -> Result<Vec<Row<Fp>>> {
    vectors
        .iter()
        .map(|v| {
            let mut row = Row::new();
            for (m, c) in v.terms() {
                let r = reduce_mod(c, p)?;
                if r != 0 {
                    row.insert(m.clone(), Fp(r, p));
                }
            }
            Ok(row)
        })
        .collect()
}

fn rank_of<S: Scalar>(rows: Vec<Row<S>>) -> usize {
    let mut ech = Echelon::new();
    rows.into_iter().filter(|r| ech.insert(r.clone())).count()
}

/// Dimension of the span of `vectors`.
pub fn rank(vectors: &[Element], field: Field) -> Result<usize> {
    Ok(match field {
        Field::Rational => rank_of(rows_q(vectors)),
        Field::Prime(p) => rank_of(rows_p(vectors, p)?),
    })
}

/// Whether `v` lies in the span of `basis`.
pub fn span_contains(basis: &[Element], v: &Element, field: Field) -> Result<bool> {
    let mut all = basis.to_vec();
    let r = rank(&all, field)?;
    all.push(v.clone());
    Ok(rank(&all, field)? == r)
}

/// Whether two elements agree after reduction to `field`.
pub fn equal_in(a: &Element, b: &Element, field: Field) -> Result<bool> {
    let d = a.sub(b);
    match field {
        Field::Rational => Ok(d.is_zero()),
        Field::Prime(p) => {
            for (_, c) in d.terms() {
                if reduce_mod(c, p)? != 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
