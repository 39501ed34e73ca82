//! Exact rationals and truncated power series in the grading variable `q`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact coefficient type used throughout the crate.
pub type Rational = BigRational;

/// Degree bound used for every dimension comparison unless configured otherwise.
pub const DEFAULT_CAP: i64 = 8;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A Laurent series `Σ c_n q^n` known for `lowest <= n <= cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    lowest: i64,
    cap: i64,
    coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Scale,
}

impl TruncSeries {
    /// The zero series with `lowest <= cap`.
    pub fn zero(lowest: i64, cap: i64) -> Self {
        let lowest = lowest.min(cap);
        TruncSeries { lowest, cap, coeffs: vec![Rational::zero(); (cap - lowest + 1) as usize] }
    }

    /// Builds a series from coefficients of degrees `0, 1, ...`, truncated or padded to `cap`.
    pub fn from_coeffs(coeffs: &[Rational], cap: i64) -> Self {
        Self::from_coeffs_at(0, coeffs, cap)
    }

    pub fn from_ints(coeffs: &[i64], cap: i64) -> Self {
        let c: Vec<Rational> = coeffs.iter().map(|&n| rat(n)).collect();
        Self::from_coeffs(&c, cap)
    }

    /// Coefficients starting at degree `lowest`.
    pub fn from_coeffs_at(lowest: i64, coeffs: &[Rational], cap: i64) -> Self {
        let mut s = Self::zero(lowest, cap);
        for (k, c) in coeffs.iter().enumerate() {
            s.add_at(lowest + k as i64, c.clone());
        }
        s
    }

    /// The monomial `c q^d`.
    pub fn monomial(d: i64, c: Rational, cap: i64) -> Self {
        let mut s = Self::zero(d.min(0), cap);
        s.add_at(d, c);
        s
    }

    pub fn one(cap: i64) -> Self {
        Self::monomial(0, Rational::one(), cap)
    }

    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest
    }

    /// Coefficient of `q^d`; zero outside the stored window below the cap.
    pub fn coeff(&self, d: i64) -> Rational {
        if d < self.lowest || d > self.cap {
            Rational::zero()
        } else {
            self.coeffs[(d - self.lowest) as usize].clone()
        }
    }

    /// Adds `c q^d`, silently dropping degrees above the cap.
    pub fn add_at(&mut self, d: i64, c: Rational) {
        if d > self.cap {
            return;
        }
        if d < self.lowest {
            let extra = (self.lowest - d) as usize;
            let mut v = vec![Rational::zero(); extra];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.lowest = d;
        }
        let idx = (d - self.lowest) as usize;
        self.coeffs[idx] += c;
    }

    pub fn truncate(&self, cap: i64) -> Self {
        let mut s = Self::zero(self.lowest, cap);
        for d in self.lowest..=cap.min(self.cap) {
            s.add_at(d, self.coeff(d));
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let cap = self.cap.min(other.cap);
        let mut s = Self::zero(self.lowest.min(other.lowest), cap);
        for d in s.lowest..=cap {
            s.add_at(d, self.coeff(d) + other.coeff(d));
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries {
            lowest: self.lowest,
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cauchy product truncated at the smaller cap.
    ///
    /// With negative lowest degrees a factor's cap bounds only its own known terms, so the
    /// product is exact up to `cap_a + low_b` and `cap_b + low_a`; the smallest bound becomes the cap.
    pub fn mul(&self, other: &Self) -> Self {
        let lo_a = self.min_support().unwrap_or(0).min(0);
        let lo_b = other.min_support().unwrap_or(0).min(0);
        let cap = self.cap.min(other.cap).min(self.cap + lo_b).min(other.cap + lo_a);
        let mut s = Self::zero(self.lowest + other.lowest, cap);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let da = self.lowest + i as i64;
            for (j, b) in other.coeffs.iter().enumerate() {
                let d = da + other.lowest + j as i64;
                if d > cap {
                    break;
                }
                if !b.is_zero() {
                    s.add_at(d, a * b);
                }
            }
        }
        s
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.cap);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// All coefficients in `lowest..=cap`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Smallest degree carrying a nonzero coefficient.
    pub fn min_support(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| self.lowest + k as i64)
    }
}

/// Applies a binary series operation; `Scale` multiplies `a` by the constant term of `b`.
pub fn series_arith(a: &TruncSeries, b: &TruncSeries, op: SeriesOp) -> TruncSeries {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Scale => a.scale(&b.coeff(0)),
    }
}

/// Truncation of `1/(1 - q^k)`.
pub fn geometric(k: i64, cap: i64) -> Result<TruncSeries> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("geometric step must be positive, got {k}")));
    }
    let mut s = TruncSeries::zero(0, cap);
    let mut d = 0;
    while d <= cap {
        s.add_at(d, Rational::one());
        d += k;
    }
    Ok(s)
}

/// True iff `a` and `b` agree in every degree `<= d`.
pub fn series_eq_up_to(a: &TruncSeries, b: &TruncSeries, d: i64) -> Result<bool> {
    if d > a.cap || d > b.cap {
        return Err(Error::InvalidArgument(format!(
            "comparison degree {d} exceeds cap ({}, {})",
            a.cap, b.cap
        )));
    }
    let lo = a.lowest.min(b.lowest);
    Ok((lo..=d).all(|n| a.coeff(n) == b.coeff(n)))
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = self.lowest + k as i64;
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_c = d == 0 || !mag.is_one();
            match (show_c, d) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}q")?,
                (false, 1) => write!(f, "q")?,
                (true, _) => write!(f, "{mag}q^{d}")?,
                (false, _) => write!(f, "q^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.cap + 1)
    }
}
