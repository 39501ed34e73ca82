//! Shared test helpers: an action of KLR and VV algebras on polynomials, used as an oracle
//! independent of the rewriting engine.
#![allow(dead_code)]

use std::collections::BTreeMap;

use klrvv::engine::{Algebra, Element, Gen, HeckeAlgebra, Mono};
use klrvv::quiver::{IdemSeq, OrbitDescriptor};
use klrvv::series::{rat, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Poly = BTreeMap<Vec<u32>, Rational>;
/// A vector of the polynomial module: one polynomial per idempotent.
pub type PVec = BTreeMap<IdemSeq, Poly>;

fn add_to(p: &mut Poly, e: Vec<u32>, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(e.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&e);
    }
}

fn mul_x(p: &Poly, a: usize) -> Poly {
    p.iter()
        .map(|(e, c)| {
            let mut e = e.clone();
            e[a] += 1;
            (e, c.clone())
        })
        .collect()
}

fn scale(p: &Poly, c: &Rational) -> Poly {
    let mut out = Poly::new();
    for (e, d) in p {
        add_to(&mut out, e.clone(), c * d);
    }
    out
}

fn add(p: &Poly, q: &Poly) -> Poly {
    let mut out = p.clone();
    for (e, c) in q {
        add_to(&mut out, e.clone(), c.clone());
    }
    out
}

fn swap(p: &Poly, k: usize) -> Poly {
    p.iter()
        .map(|(e, c)| {
            let mut e = e.clone();
            e.swap(k, k + 1);
            (e, c.clone())
        })
        .collect()
}

fn negate_first(p: &Poly) -> Poly {
    p.iter().map(|(e, c)| (e.clone(), if e[0] % 2 == 1 { -c.clone() } else { c.clone() })).collect()
}

/// `(s_k f − f)/(x_k − x_{k+1})`, computed monomial by monomial.
fn demazure(p: &Poly, k: usize) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        let (a, b) = (e[k], e[k + 1]);
        if a == b {
            continue;
        }
        let (lo, d, sign) = if a > b { (b, a - b, -c.clone()) } else { (a, b - a, c.clone()) };
        for j in 0..d {
            let mut f = e.clone();
            f[k] = lo + j;
            f[k + 1] = lo + d - 1 - j;
            add_to(&mut out, f, sign.clone());
        }
    }
    out
}

/// `x_k − x_{k+1}` as a multiplier.
fn times_diff(p: &Poly, k: usize) -> Poly {
    add(&mul_x(p, k), &scale(&mul_x(p, k + 1), &-Rational::one()))
}

pub struct PolyRep<'a> {
    pub h: &'a HeckeAlgebra,
}

impl<'a> PolyRep<'a> {
    pub fn new(alg: &'a Algebra) -> Self {
        PolyRep { h: alg.hecke().expect("KLR or VV algebra") }
    }

    fn orbit(&self) -> &OrbitDescriptor {
        &self.h.orbit
    }

    /// Action of one generator on `f·e(i)`.
    fn gen_on(&self, g: &Gen, i: &IdemSeq, f: &Poly) -> Option<(IdemSeq, Poly)> {
        let o = self.orbit();
        match g {
            Gen::E(j) => (j == i).then(|| (i.clone(), f.clone())),
            Gen::X(a) => Some((i.clone(), mul_x(f, a - 1))),
            Gen::S(0) => {
                let mut j = i.clone();
                j[0] = o.theta(&i[0]);
                let g = negate_first(f);
                // x_1 is carried on the way out of q⁻¹, so that π² = ±x_1 at q^{±1}.
                let g = if o.is_q_inv(&i[0]) { mul_x(&g, 0) } else { g };
                Some((j, g))
            }
            Gen::S(k) => {
                let k = *k as usize - 1;
                let mut j = i.clone();
                j.swap(k, k + 1);
                if i[k] == i[k + 1] {
                    return Some((j, demazure(f, k)));
                }
                let s = swap(f, k);
                let back = o.arrow_count(&i[k + 1], &i[k]) > 0;
                Some((j, if back { times_diff(&s, k) } else { s }))
            }
            other => panic!("not a KLR/VV generator: {other:?}"),
        }
    }

    /// Applies a generator word (rightmost letter first).
    pub fn act_word(&self, word: &[Gen], v: &PVec) -> PVec {
        let mut cur = v.clone();
        for g in word.iter().rev() {
            let mut next = PVec::new();
            for (i, f) in &cur {
                if let Some((j, p)) = self.gen_on(g, i, f) {
                    let slot = next.entry(j).or_default();
                    *slot = add(slot, &p);
                }
            }
            next.retain(|_, p| !p.is_empty());
            cur = next;
        }
        cur
    }

    pub fn act_element(&self, alg: &Algebra, a: &Element, v: &PVec) -> PVec {
        let mut out = PVec::new();
        for (m, c) in a.terms() {
            let Mono::Hecke(_) = m else { panic!("not a Hecke monomial") };
            let w = self.act_word(&alg.spell(m), v);
            for (i, p) in w {
                let slot = out.entry(i).or_default();
                *slot = add(slot, &scale(&p, c));
            }
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// A few test vectors: `x^a e(i)` for small exponents and every `i`.
    pub fn probes(&self) -> Vec<PVec> {
        let m = self.h.m;
        let mut exps: Vec<Vec<u32>> = vec![vec![0; m]];
        for a in 0..m {
            let mut e = vec![0; m];
            e[a] = 1;
            exps.push(e);
        }
        let mut e = vec![0; m];
        for (a, slot) in e.iter_mut().enumerate() {
            *slot = (a as u32 * 2 + 1) % 3;
        }
        exps.push(e);
        let mut out = Vec::new();
        for i in &self.h.seqs {
            for e in &exps {
                let mut p = Poly::new();
                p.insert(e.clone(), Rational::one());
                out.push(PVec::from([(i.clone(), p)]));
            }
        }
        out
    }

    pub fn same_action(&self, alg: &Algebra, a: &Element, word: &[Gen]) -> bool {
        self.probes().iter().all(|v| self.act_element(alg, a, v) == self.act_word(word, v))
    }

    /// Whether a linear combination of words acts as zero.
    pub fn kills(&self, sum: &[(Rational, Vec<Gen>)]) -> bool {
        self.probes().iter().all(|v| {
            let mut acc = PVec::new();
            for (c, w) in sum {
                for (i, p) in self.act_word(w, v) {
                    let slot = acc.entry(i).or_default();
                    *slot = add(slot, &scale(&p, c));
                }
            }
            acc.values().all(|p| p.is_empty())
        })
    }
}

/// A random word that is nonzero on idempotent grounds: generators chosen while tracking the
/// current idempotent, ending in `e(i)`.
pub fn random_word(h: &HeckeAlgebra, rng: &mut ChaCha8Rng, len: usize) -> Vec<Gen> {
    let i = h.seqs[rng.gen_range(0..h.seqs.len())].clone();
    let mut word = vec![Gen::E(i)];
    let lo = if h.signed { 0 } else { 1 };
    for _ in 0..len {
        let g = if rng.gen_bool(0.35) || h.m == 1 && !h.signed {
            Gen::X(rng.gen_range(1..=h.m))
        } else if h.m as u8 > lo {
            Gen::S(rng.gen_range(lo..h.m as u8))
        } else {
            Gen::X(1)
        };
        word.insert(0, g);
    }
    word
}

pub fn one() -> Rational {
    rat(1)
}
