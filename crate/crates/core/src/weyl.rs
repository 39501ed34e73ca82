//! The hyperoctahedral group `W^B_m` as signed permutations.
//!
//! Words are read left to right as products `s_{c_1} s_{c_2} ⋯`; letter 0 is `s_0` (the sign
//! change of the first coordinate) and letter `k >= 1` is the transposition `s_k`.

use std::fmt;

use crate::error::{Error, Result};

pub type Word = Vec<u8>;

/// A signed permutation, stored as its window `(w(1), …, w(m))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    window: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(m: usize) -> Self {
        SignedPerm { window: (1..=m as i8).collect() }
    }

    pub fn from_window(window: Vec<i8>) -> Result<Self> {
        let m = window.len();
        let mut seen = vec![false; m + 1];
        for &v in &window {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > m || seen[a] {
                return Err(Error::InvalidArgument(format!("not a signed permutation: {window:?}")));
            }
            seen[a] = true;
        }
        Ok(SignedPerm { window })
    }

    pub fn m(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i8] {
        &self.window
    }

    /// `w(j)` for a signed index `j`.
    pub fn apply(&self, j: i8) -> i8 {
        let v = self.window[(j.unsigned_abs() - 1) as usize];
        if j < 0 {
            -v
        } else {
            v
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0i8; self.m()];
        for (j, &v) in self.window.iter().enumerate() {
            let pos = (v.unsigned_abs() - 1) as usize;
            inv[pos] = if v < 0 { -(j as i8 + 1) } else { j as i8 + 1 };
        }
        SignedPerm { window: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(j, &v)| v == j as i8 + 1)
    }

    /// Right multiplication by a generator, i.e. the position action on the window.
    pub fn mul_gen_right(&self, letter: u8) -> Self {
        let mut w = self.window.clone();
        if letter == 0 {
            w[0] = -w[0];
        } else {
            w.swap(letter as usize - 1, letter as usize);
        }
        SignedPerm { window: w }
    }

    /// Left multiplication by a generator, i.e. the value action.
    pub fn mul_gen_left(&self, letter: u8) -> Self {
        let g = SignedPerm::identity(self.m()).mul_gen_right(letter);
        SignedPerm { window: self.window.iter().map(|&v| g.apply(v)).collect() }
    }

    /// Is `w` in the symmetric group (no sign changes)?
    pub fn is_unsigned(&self) -> bool {
        self.window.iter().all(|&v| v > 0)
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Evaluates a word as a product of generators acting on the identity window.
pub fn evaluate(word: &[u8], m: usize) -> Result<SignedPerm> {
    let mut w = SignedPerm::identity(m);
    for &c in word {
        if c as usize >= m {
            return Err(Error::LetterOutOfRange { letter: c as usize, m });
        }
        w = w.mul_gen_right(c);
    }
    Ok(w)
}

pub fn group_multiply(u: &SignedPerm, v: &SignedPerm) -> Result<SignedPerm> {
    if u.m() != v.m() {
        return Err(Error::RankMismatch(u.m(), v.m()));
    }
    Ok(SignedPerm { window: v.window.iter().map(|&j| u.apply(j)).collect() })
}

/// Coxeter length: inversions, plus negative entries, plus negative-sum pairs.
pub fn length(w: &SignedPerm) -> usize {
    let win = &w.window;
    let mut l = win.iter().filter(|&&v| v < 0).count();
    for i in 0..win.len() {
        for j in i + 1..win.len() {
            if win[i] > win[j] {
                l += 1;
            }
            if win[i] + win[j] < 0 {
                l += 1;
            }
        }
    }
    l
}

/// The block word `s_{k_1-1}⋯s_1s_0 ⋯ s_{k_r-1}⋯s_1s_0` for `k_1 < ⋯ < k_r`.
pub fn block_word(ks: &[usize]) -> Word {
    let mut word = Vec::new();
    for &k in ks {
        for c in (0..k).rev() {
            word.push(c as u8);
        }
    }
    word
}

/// The factorization `w = η·s` with `η` a minimal left coset representative of `𝔖_m`.
pub fn coset_factor(w: &SignedPerm) -> (SignedPerm, SignedPerm) {
    let mut sorted = w.window.clone();
    sorted.sort();
    let eta = SignedPerm { window: sorted };
    let s = group_multiply(&eta.inverse(), w).expect("same rank");
    (eta, s)
}

/// Staircase normal form `(s_{i_1}⋯s_{j_1})(s_{i_2}⋯s_{j_2})⋯`, `i_1 < i_2 < ⋯`, of an
/// unsigned permutation.
pub fn staircase_word(s: &SignedPerm) -> Word {
    debug_assert!(s.is_unsigned());
    let m = s.m();
    let mut word = Vec::new();
    for a in 1..m {
        let top = (a + 1) as i8;
        let j = s.window.iter().filter(|&&v| v <= top).position(|&v| v == top).unwrap() + 1;
        for c in (j..=a).rev() {
            word.push(c as u8);
        }
    }
    word
}

/// The signs a minimal coset representative introduces: `{k : -k` occurs in the window`}`.
pub fn negated_values(w: &SignedPerm) -> Vec<usize> {
    let mut ks: Vec<usize> = w.window.iter().filter(|&&v| v < 0).map(|&v| v.unsigned_abs() as usize).collect();
    ks.sort();
    ks
}

/// The canonical reduced word `c(η)·c(s)`.
pub fn canonical_word(w: &SignedPerm) -> Word {
    let (eta, s) = coset_factor(w);
    let mut word = block_word(&negated_values(&eta));
    word.extend(staircase_word(&s));
    word
}

/// The `2^m` minimal left coset representatives with their block words, ordered by length
/// then lexicographically by word.
pub fn coset_min_reps(m: usize) -> Vec<(SignedPerm, Word)> {
    let mut reps = Vec::with_capacity(1 << m);
    for mask in 0u32..(1 << m) {
        let ks: Vec<usize> = (1..=m).filter(|k| mask & (1 << (k - 1)) != 0).collect();
        let word = block_word(&ks);
        let w = evaluate(&word, m).expect("letters in range");
        reps.push((w, word));
    }
    reps.sort_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| a.1.cmp(&b.1)));
    reps
}

/// The longest minimal coset representative, window `(-m, …, -1)`.
pub fn longest_coset_rep(m: usize) -> (SignedPerm, Word) {
    let ks: Vec<usize> = (1..=m).collect();
    let word = block_word(&ks);
    (evaluate(&word, m).expect("letters in range"), word)
}

/// Every element of `W^B_m` (or of `𝔖_m` when `signed` is false), ordered by canonical word.
pub fn all_elements(m: usize, signed: bool) -> Vec<SignedPerm> {
    let mut out = Vec::new();
    let mut perm: Vec<i8> = (1..=m as i8).collect();
    permutations(&mut perm, 0, &mut |p| {
        let masks = if signed { 1u32 << m } else { 1 };
        for mask in 0..masks {
            let win: Vec<i8> = p.iter().enumerate().map(|(j, &v)| if mask & (1 << j) != 0 { -v } else { v }).collect();
            out.push(SignedPerm { window: win });
        }
    });
    out.sort_by_cached_key(|w| {
        let c = canonical_word(w);
        (c.len(), c)
    });
    out
}

fn permutations(v: &mut Vec<i8>, k: usize, f: &mut dyn FnMut(&[i8])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// Image of `(u, v)` under `W^B_{m1} × W^B_{m2} → W^B_{m1+m2}`, onto the subgroup `Q`.
///
/// Generators map as `s_i ↦ s_i`, `s_j ↦ s_{j+m1}` and the second `s_0 ↦ s_{m1}⋯s_1s_0s_1⋯s_{m1}`,
/// so `v` acts on the last `m2` coordinates with signs attached there.
pub fn embed_product_as_q(m1: usize, m2: usize, u: &SignedPerm, v: &SignedPerm) -> Result<SignedPerm> {
    if u.m() != m1 {
        return Err(Error::RankMismatch(u.m(), m1));
    }
    if v.m() != m2 {
        return Err(Error::RankMismatch(v.m(), m2));
    }
    let mut window = u.window.clone();
    for &x in &v.window {
        let shifted = x.unsigned_abs() as i8 + m1 as i8;
        window.push(if x < 0 { -shifted } else { shifted });
    }
    Ok(SignedPerm { window })
}

/// Image word of a generator of the first (`second = false`) or second factor.
pub fn embed_generator_word(m1: usize, letter: u8, second: bool) -> Word {
    if !second {
        return vec![letter];
    }
    if letter > 0 {
        return vec![letter + m1 as u8];
    }
    let mut word: Word = (1..=m1 as u8).rev().collect();
    word.push(0);
    word.extend(1..=m1 as u8);
    word
}

/// Splits an element of `Q` back into its factors.
pub fn split_q(m1: usize, w: &SignedPerm) -> Option<(SignedPerm, SignedPerm)> {
    let (a, b) = w.window.split_at(m1);
    if a.iter().any(|v| v.unsigned_abs() as usize > m1) || b.iter().any(|v| (v.unsigned_abs() as usize) <= m1) {
        return None;
    }
    let u = SignedPerm { window: a.to_vec() };
    let v = SignedPerm {
        window: b.iter().map(|&x| if x < 0 { x + m1 as i8 } else { x - m1 as i8 }).collect(),
    };
    Some((u, v))
}

/// Length of an element of `Q` counted in the renamed generators `c_i`: the letters of the
/// word `c(u)` followed by the shifted `c(v)`, one letter per generator of either factor.
pub fn q_length(m1: usize, w: &SignedPerm) -> Option<usize> {
    split_q(m1, w).map(|(u, v)| canonical_word(&u).len() + canonical_word(&v).len())
}

/// Left action on sequences: `(w·i)_{|w(j)|} = i_j`, or `θ(i_j)` when `w(j) < 0`.
pub fn act_on_seq<T: Clone>(w: &SignedPerm, seq: &[T], theta: impl Fn(&T) -> T) -> Vec<T> {
    let mut out = seq.to_vec();
    for (j, x) in seq.iter().enumerate() {
        let t = w.window[j];
        let pos = (t.unsigned_abs() - 1) as usize;
        out[pos] = if t < 0 { theta(x) } else { x.clone() };
    }
    out
}

/// `s_k(l)` on positive indices (`s_0` fixes every position).
pub fn reflect_index(letter: u8, l: usize) -> usize {
    let k = letter as usize;
    if k == 0 {
        l
    } else if l == k {
        k + 1
    } else if l == k + 1 {
        k
    } else {
        l
    }
}
