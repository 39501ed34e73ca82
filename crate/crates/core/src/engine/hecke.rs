//! Normal forms for KLR and VV algebras on the basis `σ_ẇ x^n e(i)`.
//!
//! Multiplication is a left fold: a generator is prepended to a monomial already in normal
//! form. Prepending `x_a` slides it through the word letter by letter; prepending `σ_k` either
//! lengthens the group element, in which case `k·c(w)` is braided into the canonical word
//! `c(s_k w)`, or shortens it, in which case `c(w)` is braided into `k·c(s_k w)` and the
//! quadratic relation applies. Every braid move contributes a correction term supported on
//! strictly shorter words, which bounds the recursion.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quiver::{IdemSeq, OrbitDescriptor, Vertex};
use crate::series::{geometric, rat, Rational, TruncSeries};
use crate::weyl::{act_on_seq, all_elements, canonical_word, evaluate, reflect_index, SignedPerm, Word};

/// A basis monomial `σ_ẇ x_1^{n_1}⋯x_m^{n_m} e(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HMono {
    pub word: Word,
    pub exps: Vec<u32>,
    pub idem: IdemSeq,
}

impl HMono {
    pub fn idem(idem: IdemSeq) -> Self {
        HMono { word: Vec::new(), exps: vec![0; idem.len()], idem }
    }
}

pub type Lin = BTreeMap<HMono, Rational>;

/// A polynomial in the `x_l` as a list of (coefficient, factor indices).
pub type Poly = Vec<(Rational, Vec<usize>)>;

/// Deliberate corruptions of single rule constants, used to show the relation suite and the
/// homomorphism checks detect a wrong rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    QuadraticSign,
    BraidSign,
    DotSlideSign,
    PiSquareSign,
    PiBraidSign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum MoveKind {
    Commute,
    Braid3,
    Braid4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Move {
    pos: usize,
    kind: MoveKind,
}

impl MoveKind {
    fn span(self) -> usize {
        match self {
            MoveKind::Commute => 2,
            MoveKind::Braid3 => 3,
            MoveKind::Braid4 => 4,
        }
    }
}

fn move_applies(word: &[u8], pos: usize, kind: MoveKind) -> bool {
    let n = kind.span();
    if pos + n > word.len() {
        return false;
    }
    let w = &word[pos..pos + n];
    match kind {
        MoveKind::Commute => w[0].abs_diff(w[1]) >= 2,
        MoveKind::Braid3 => w[0] == w[2] && w[0].abs_diff(w[1]) == 1 && w[0].min(w[1]) >= 1,
        MoveKind::Braid4 => w == [0, 1, 0, 1] || w == [1, 0, 1, 0],
    }
}

fn apply_move(word: &[u8], mv: Move) -> Word {
    let mut out = word.to_vec();
    let p = mv.pos;
    match mv.kind {
        MoveKind::Commute => out.swap(p, p + 1),
        MoveKind::Braid3 => {
            let (a, b) = (word[p], word[p + 1]);
            out[p] = b;
            out[p + 1] = a;
            out[p + 2] = b;
        }
        MoveKind::Braid4 => {
            for t in 0..4 {
                out[p + t] = word[p + 1 - (t % 2)];
            }
        }
    }
    out
}

pub struct HeckeAlgebra {
    pub orbit: OrbitDescriptor,
    pub m: usize,
    /// True for VV algebras, which carry `π = σ_0`.
    pub signed: bool,
    pub seqs: Vec<IdemSeq>,
    seq_set: HashSet<IdemSeq>,
    mutation: Option<Mutation>,
    cache_s: Mutex<HashMap<(u8, HMono), Lin>>,
    cache_x: Mutex<HashMap<(usize, HMono), Lin>>,
    paths: Mutex<HashMap<(Word, Word), Vec<Move>>>,
}

pub fn lin_add(acc: &mut Lin, mono: HMono, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&mono) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                acc.remove(&mono);
            }
        }
        None => {
            acc.insert(mono, c);
        }
    }
}

pub fn lin_axpy(acc: &mut Lin, c: &Rational, other: &Lin) {
    for (k, v) in other {
        lin_add(acc, k.clone(), c * v);
    }
}

fn single(mono: HMono) -> Lin {
    let mut l = Lin::new();
    l.insert(mono, Rational::one());
    l
}

impl HeckeAlgebra {
    pub fn new(orbit: OrbitDescriptor, m: usize, signed: bool, seqs: Vec<IdemSeq>) -> Self {
        let seq_set = seqs.iter().cloned().collect();
        HeckeAlgebra {
            orbit,
            m,
            signed,
            seqs,
            seq_set,
            mutation: None,
            cache_s: Mutex::new(HashMap::new()),
            cache_x: Mutex::new(HashMap::new()),
            paths: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn has_seq(&self, seq: &[Vertex]) -> bool {
        self.seq_set.contains(seq)
    }

    fn theta(&self) -> impl Fn(&Vertex) -> Vertex + '_ {
        move |v| self.orbit.theta(v)
    }

    fn flip(&self, m: Mutation) -> Rational {
        if self.mutation == Some(m) {
            -Rational::one()
        } else {
            Rational::one()
        }
    }

    pub fn element_of(&self, word: &[u8]) -> SignedPerm {
        evaluate(word, self.m.max(1)).expect("letters in range")
    }

    /// `w·i` for the group element of `word`.
    pub fn act_word(&self, word: &[u8], idem: &[Vertex]) -> IdemSeq {
        if word.is_empty() {
            return idem.to_vec();
        }
        act_on_seq(&self.element_of(word), idem, self.theta())
    }

    pub fn left_idem(&self, mono: &HMono) -> IdemSeq {
        self.act_word(&mono.word, &mono.idem)
    }

    /// `s_c · j` for a single letter.
    pub fn act_letter(&self, c: u8, j: &[Vertex]) -> IdemSeq {
        let mut out = j.to_vec();
        if c == 0 {
            out[0] = self.orbit.theta(&j[0]);
        } else {
            out.swap(c as usize - 1, c as usize);
        }
        out
    }

    fn arrows(&self, a: &Vertex, b: &Vertex) -> (u32, u32) {
        (self.orbit.arrow_count(a, b), self.orbit.arrow_count(b, a))
    }

    /// Degree of `σ_c e(j)` (`π e(j)` when `c = 0`).
    pub fn letter_degree(&self, c: u8, j: &[Vertex]) -> i64 {
        if c == 0 {
            return i64::from(self.orbit.is_q(&j[0]) || self.orbit.is_q_inv(&j[0]));
        }
        let (a, b) = (&j[c as usize - 1], &j[c as usize]);
        if a == b {
            -2
        } else {
            let (f, r) = self.arrows(a, b);
            i64::from(f + r)
        }
    }

    /// Degree of `σ_word e(idem)`.
    pub fn word_degree(&self, word: &[u8], idem: &[Vertex]) -> i64 {
        let mut j = idem.to_vec();
        let mut d = 0;
        for &c in word.iter().rev() {
            d += self.letter_degree(c, &j);
            j = self.act_letter(c, &j);
        }
        d
    }

    pub fn degree(&self, mono: &HMono) -> i64 {
        self.word_degree(&mono.word, &mono.idem) + 2 * mono.exps.iter().map(|&e| e as i64).sum::<i64>()
    }

    /// `σ_k² e(j)`; `π² e(j)` when `k = 0`.
    fn quadratic(&self, k: u8, j: &[Vertex]) -> Poly {
        let one = Rational::one();
        if k == 0 {
            let s = self.flip(Mutation::PiSquareSign);
            return if self.orbit.is_q(&j[0]) {
                vec![(s, vec![1])]
            } else if self.orbit.is_q_inv(&j[0]) {
                vec![(-s, vec![1])]
            } else {
                vec![(one, vec![])]
            };
        }
        let k = k as usize;
        let (a, b) = (&j[k - 1], &j[k]);
        if a == b {
            return Vec::new();
        }
        let s = self.flip(Mutation::QuadraticSign);
        match self.arrows(a, b) {
            (0, 0) => vec![(one, vec![])],
            (1, 0) => vec![(s.clone(), vec![k]), (-s, vec![k + 1])],
            (0, 1) => vec![(s.clone(), vec![k + 1]), (-s, vec![k])],
            (1, 1) => vec![(-s.clone(), vec![k, k]), (rat(2) * &s, vec![k, k + 1]), (-s, vec![k + 1, k + 1])],
            other => panic!("unsupported arrow multiplicities {other:?}"),
        }
    }

    /// `(σ_{k+1}σ_kσ_{k+1} − σ_kσ_{k+1}σ_k) e(j)`.
    fn braid3(&self, k: usize, j: &[Vertex]) -> Poly {
        let (a, b, c) = (&j[k - 1], &j[k], &j[k + 1]);
        if a != c {
            return Vec::new();
        }
        let s = self.flip(Mutation::BraidSign);
        match self.arrows(a, b) {
            (0, 0) => Vec::new(),
            (1, 0) => vec![(s, vec![])],
            (0, 1) => vec![(-s, vec![])],
            (1, 1) => vec![(rat(2) * &s, vec![k + 1]), (-s.clone(), vec![k + 2]), (-s, vec![k])],
            other => panic!("unsupported arrow multiplicities {other:?}"),
        }
    }

    /// Coefficient `d` in `((σ_1π)² − (πσ_1)²) e(j) = d σ_1 e(j)`.
    fn braid4(&self, j: &[Vertex]) -> Rational {
        let s = self.flip(Mutation::PiBraidSign);
        if self.orbit.is_q(&j[0]) && self.orbit.is_q_inv(&j[1]) {
            s
        } else if self.orbit.is_q_inv(&j[0]) && self.orbit.is_q(&j[1]) {
            -s
        } else {
            Rational::zero()
        }
    }

    /// Correction `c` in `x_a σ_k e(j) = σ_k x_{s_k(a)} e(j) + c e(j)`, `k >= 1`.
    fn dot_slide(&self, a: usize, k: u8, j: &[Vertex]) -> Rational {
        let k = k as usize;
        if j[k - 1] != j[k] {
            return Rational::zero();
        }
        let s = self.flip(Mutation::DotSlideSign);
        if a == k + 1 {
            s
        } else if a == k {
            -s
        } else {
            Rational::zero()
        }
    }

    fn braid_path(&self, from: &[u8], to: &[u8]) -> Vec<Move> {
        let key = (from.to_vec(), to.to_vec());
        if let Some(p) = self.paths.lock().unwrap().get(&key) {
            return p.clone();
        }
        let mut prev: HashMap<Word, (Word, Move)> = HashMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(from.to_vec());
        let mut seen: HashSet<Word> = HashSet::new();
        seen.insert(from.to_vec());
        while let Some(w) = queue.pop_front() {
            if w == to {
                break;
            }
            for pos in 0..w.len() {
                for kind in [MoveKind::Commute, MoveKind::Braid3, MoveKind::Braid4] {
                    if move_applies(&w, pos, kind) {
                        let mv = Move { pos, kind };
                        let next = apply_move(&w, mv);
                        if seen.insert(next.clone()) {
                            prev.insert(next.clone(), (w.clone(), mv));
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to.to_vec();
        while cur != from {
            let (p, mv) = prev.get(&cur).unwrap_or_else(|| panic!("no braid path from {from:?} to {to:?}")).clone();
            path.push(mv);
            cur = p;
        }
        path.reverse();
        self.paths.lock().unwrap().insert(key, path.clone());
        path
    }

    /// Normal form of `σ_word · (rest)` by prepending letters right to left.
    pub fn fold_letters(&self, word: &[u8], lin: Lin) -> Lin {
        let mut cur = lin;
        for &c in word.iter().rev() {
            cur = self.prepend_s_lin(c, &cur);
        }
        cur
    }

    pub fn apply_poly(&self, poly: &Poly, lin: &Lin) -> Lin {
        let mut acc = Lin::new();
        for (c, factors) in poly {
            let mut cur = lin.clone();
            for &a in factors {
                cur = self.prepend_x_lin(a, &cur);
            }
            lin_axpy(&mut acc, c, &cur);
        }
        acc
    }

    /// The correction `σ_u x^n e(i) − σ_{u'} x^n e(i)` for one braid move `u → u'`.
    fn move_correction(&self, word: &[u8], mv: Move, exps: &[u32], idem: &[Vertex]) -> Lin {
        if mv.kind == MoveKind::Commute {
            return Lin::new();
        }
        let span = mv.kind.span();
        let (prefix, rest) = word.split_at(mv.pos);
        let (pattern, suffix) = rest.split_at(span);
        let base = single(HMono { word: Vec::new(), exps: exps.to_vec(), idem: idem.to_vec() });
        let tail = self.fold_letters(suffix, base);
        if tail.is_empty() {
            return tail;
        }
        let j = self.act_word(suffix, idem);
        let middle = match mv.kind {
            MoveKind::Braid3 => {
                let (b, a) = (pattern[0], pattern[1]);
                let (k, sign) = if b > a { (a as usize, Rational::one()) } else { (b as usize, -Rational::one()) };
                let mut poly = self.braid3(k, &j);
                for t in poly.iter_mut() {
                    t.0 *= &sign;
                }
                self.apply_poly(&poly, &tail)
            }
            MoveKind::Braid4 => {
                let mut d = self.braid4(&j);
                if pattern[0] == 0 {
                    d = -d;
                }
                if d.is_zero() {
                    return Lin::new();
                }
                let mut acc = Lin::new();
                lin_axpy(&mut acc, &d, &self.prepend_s_lin(1, &tail));
                acc
            }
            MoveKind::Commute => unreachable!(),
        };
        self.fold_letters(prefix, middle)
    }

    /// Corrections `C` with `σ_from x^n e(i) = σ_to x^n e(i) + C`.
    fn rewrite(&self, from: &[u8], to: &[u8], exps: &[u32], idem: &[Vertex]) -> Lin {
        let mut acc = Lin::new();
        let mut cur = from.to_vec();
        for mv in self.braid_path(from, to) {
            let corr = self.move_correction(&cur, mv, exps, idem);
            lin_axpy(&mut acc, &Rational::one(), &corr);
            cur = apply_move(&cur, mv);
        }
        acc
    }

    /// `σ_k · mono` (`π · mono` for `k = 0`).
    pub fn prepend_s(&self, k: u8, mono: &HMono) -> Lin {
        let key = (k, mono.clone());
        if let Some(r) = self.cache_s.lock().unwrap().get(&key) {
            return r.clone();
        }
        let v = self.element_of(&mono.word);
        let u = v.mul_gen_left(k);
        let cu = canonical_word(&u);
        let result = if cu.len() > mono.word.len() {
            let mut w0 = vec![k];
            w0.extend_from_slice(&mono.word);
            let main = HMono { word: cu.clone(), exps: mono.exps.clone(), idem: mono.idem.clone() };
            if w0 == cu {
                single(main)
            } else {
                let mut acc = self.rewrite(&w0, &cu, &mono.exps, &mono.idem);
                lin_add(&mut acc, main, Rational::one());
                acc
            }
        } else {
            let mut target = vec![k];
            target.extend_from_slice(&cu);
            let corr = self.rewrite(&mono.word, &target, &mono.exps, &mono.idem);
            let base = HMono { word: cu, exps: mono.exps.clone(), idem: mono.idem.clone() };
            let j = self.left_idem(&base);
            let mut acc = self.apply_poly(&self.quadratic(k, &j), &single(base));
            lin_axpy(&mut acc, &Rational::one(), &self.prepend_s_lin(k, &corr));
            acc
        };
        self.cache_s.lock().unwrap().insert(key, result.clone());
        result
    }

    /// `x_a · mono`.
    pub fn prepend_x(&self, a: usize, mono: &HMono) -> Lin {
        if mono.word.is_empty() {
            let mut out = mono.clone();
            out.exps[a - 1] += 1;
            return single(out);
        }
        let key = (a, mono.clone());
        if let Some(r) = self.cache_x.lock().unwrap().get(&key) {
            return r.clone();
        }
        let c1 = mono.word[0];
        let rest = HMono { word: mono.word[1..].to_vec(), exps: mono.exps.clone(), idem: mono.idem.clone() };
        let result = if c1 == 0 {
            let inner = self.prepend_x(a, &rest);
            let moved = self.prepend_s_lin(0, &inner);
            if a == 1 {
                moved.into_iter().map(|(k, v)| (k, -v)).collect()
            } else {
                moved
            }
        } else {
            let inner = self.prepend_x(reflect_index(c1, a), &rest);
            let mut acc = self.prepend_s_lin(c1, &inner);
            let j = self.left_idem(&rest);
            let c = self.dot_slide(a, c1, &j);
            if !c.is_zero() {
                lin_add(&mut acc, rest, c);
            }
            acc
        };
        self.cache_x.lock().unwrap().insert(key, result.clone());
        result
    }

    pub fn prepend_e(&self, j: &[Vertex], mono: &HMono) -> Lin {
        if self.left_idem(mono) == j {
            single(mono.clone())
        } else {
            Lin::new()
        }
    }

    pub fn prepend_s_lin(&self, k: u8, lin: &Lin) -> Lin {
        let mut acc = Lin::new();
        for (mono, c) in lin {
            lin_axpy(&mut acc, c, &self.prepend_s(k, mono));
        }
        acc
    }

    pub fn prepend_x_lin(&self, a: usize, lin: &Lin) -> Lin {
        let mut acc = Lin::new();
        for (mono, c) in lin {
            lin_axpy(&mut acc, c, &self.prepend_x(a, mono));
        }
        acc
    }

    pub fn prepend_e_lin(&self, j: &[Vertex], lin: &Lin) -> Lin {
        lin.iter().filter(|(mono, _)| self.left_idem(mono) == j).map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn unit(&self) -> Lin {
        self.seqs.iter().map(|i| (HMono::idem(i.clone()), Rational::one())).collect()
    }

    /// The elements of the group indexing the basis.
    pub fn group(&self) -> Vec<SignedPerm> {
        if self.m == 0 {
            return vec![SignedPerm::identity(0)];
        }
        all_elements(self.m, self.signed)
    }

    /// Pairs `(c(w), i)` with the degree of `σ_ẇ e(i)`.
    pub fn word_idem_degrees(&self) -> Vec<(Word, IdemSeq, i64)> {
        let mut out = Vec::new();
        for w in self.group() {
            let word = if self.m == 0 { Vec::new() } else { canonical_word(&w) };
            for i in &self.seqs {
                out.push((word.clone(), i.clone(), self.word_degree(&word, i)));
            }
        }
        out
    }

    pub fn min_degree(&self) -> i64 {
        self.word_idem_degrees().iter().map(|t| t.2).min().unwrap_or(0)
    }

    /// `Σ_{w,i} q^{deg σ_ẇ e(i)} / (1 − q²)^m` truncated at `cap`.
    pub fn graded_dimension(&self, cap: i64) -> TruncSeries {
        let triples = self.word_idem_degrees();
        let lo = triples.iter().map(|t| t.2).min().unwrap_or(0).min(0);
        let ext = cap - lo;
        let mut poly = TruncSeries::zero(lo, ext);
        for (_, _, d) in &triples {
            poly.add_at(*d, Rational::one());
        }
        let g = geometric(2, ext).expect("positive step").pow(self.m as u32);
        poly.mul(&g).truncate(cap)
    }

    /// Basis monomials of degree exactly `d`, in monomial order.
    pub fn component_basis(&self, d: i64) -> Vec<HMono> {
        let mut out = Vec::new();
        for (word, idem, d0) in self.word_idem_degrees() {
            let rest = d - d0;
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            for exps in compositions((rest / 2) as u32, self.m) {
                out.push(HMono { word: word.clone(), exps, idem: idem.clone() });
            }
        }
        out.sort();
        out
    }

    /// Validates a monomial: canonical word, matching rank, sequence in the algebra.
    pub fn check_mono(&self, mono: &HMono) -> Result<()> {
        if mono.exps.len() != self.m || mono.idem.len() != self.m {
            return Err(Error::InvalidArgument("monomial rank mismatch".into()));
        }
        if !self.has_seq(&mono.idem) {
            return Err(Error::IdemOutside(format!("{:?}", mono.idem)));
        }
        if !mono.word.is_empty() && canonical_word(&self.element_of(&mono.word)) != mono.word {
            return Err(Error::InvalidArgument("word is not canonical".into()));
        }
        Ok(())
    }

    /// Word of generators spelling a monomial: letters, then `x`-powers, then the idempotent.
    pub fn spell(&self, mono: &HMono) -> (Word, Vec<usize>, IdemSeq) {
        let mut xs = Vec::new();
        for (a, &e) in mono.exps.iter().enumerate() {
            for _ in 0..e {
                xs.push(a + 1);
            }
        }
        (mono.word.clone(), xs, mono.idem.clone())
    }

    /// `mono · rhs`.
    pub fn mono_times(&self, mono: &HMono, rhs: &Lin) -> Lin {
        let (word, xs, idem) = self.spell(mono);
        let mut cur = self.prepend_e_lin(&idem, rhs);
        for &a in xs.iter().rev() {
            cur = self.prepend_x_lin(a, &cur);
        }
        self.fold_letters(&word, cur)
    }

    /// The anti-involution fixing `e(i)`, `x_l`, `σ_k`, `π`: reverse the spelled word.
    pub fn reverse_mono(&self, mono: &HMono) -> Lin {
        let (word, xs, idem) = self.spell(mono);
        let rev: Word = word.iter().rev().copied().collect();
        let mut cur = self.fold_letters(&rev, self.unit());
        for &a in xs.iter().rev() {
            cur = self.prepend_x_lin(a, &cur);
        }
        self.prepend_e_lin(&idem, &cur)
    }

    /// Number of cached normal-form entries (diagnostics).
    pub fn cache_size(&self) -> usize {
        self.cache_s.lock().unwrap().len() + self.cache_x.lock().unwrap().len()
    }
}

/// All `m`-tuples of nonnegative integers summing to `total`, lexicographically.
pub fn compositions(total: u32, m: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let m = cur.len();
        if k + 1 >= m {
            if m > 0 {
                cur[m - 1] = left;
                out.push(cur.clone());
            } else if left == 0 {
                out.push(Vec::new());
            }
            return;
        }
        for v in 0..=left {
            cur[k] = v;
            rec(k + 1, left - v, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, total, &mut cur, &mut out);
    out
}
