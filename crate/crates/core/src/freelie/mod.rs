//! The free Lie algebra on ordered generators, in its Lyndon-word basis.
//!
//! Brackets of basis elements are expanded by recursive rewriting with
//! antisymmetry and the Jacobi identity (memoized structure constants). The
//! embedding into the tensor algebra is implemented independently and serves
//! as the correctness oracle for the rewriting engine: the two never share a
//! code path.

mod algebra;
mod cache;

pub use algebra::{AlgebraElement, AlgebraKind, BasisElem, GradedAlgebra};
pub use cache::{BracketTableCache, CacheEntryInfo, CacheLoad, CACHE_FORMAT_VERSION};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{rat, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FreeLieError {
    #[error("not a Lyndon word: {0:?}")]
    NotLyndon(Vec<u8>),
    #[error("tensor oracle cutoff exceeded: weight {weight} > cutoff {cutoff}")]
    OracleCutoff { weight: usize, cutoff: usize },
}

/// A named generator. The total order of a run is the index order
/// (`a < b < ...`) and is fixed once the alphabet is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub symbol: char,
    pub index: u8,
}

/// The two-letter alphabet `a < b` used by all supported graded algebras.
pub fn alphabet_ab() -> Vec<Generator> {
    alphabet(&['a', 'b'])
}

pub fn alphabet(symbols: &[char]) -> Vec<Generator> {
    let mut seen = std::collections::BTreeSet::new();
    for s in symbols {
        assert!(seen.insert(*s), "generator symbols must be distinct");
    }
    symbols
        .iter()
        .enumerate()
        .map(|(i, &symbol)| Generator {
            symbol,
            index: i as u8,
        })
        .collect()
}

pub(crate) fn symbol_of(index: u8) -> char {
    (b'a' + index) as char
}

/// True iff `letters` is nonempty and strictly smaller than every proper
/// suffix, i.e. a Lyndon word.
pub fn is_lyndon(letters: &[u8]) -> bool {
    if letters.is_empty() {
        return false;
    }
    (1..letters.len()).all(|i| letters[..] < letters[i..])
}

/// A Lyndon word over generator indices; the standard bracketing of these
/// words is the basis of the free Lie algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord {
    letters: Vec<u8>,
}

impl LyndonWord {
    pub fn new(letters: Vec<u8>) -> Result<Self, FreeLieError> {
        if is_lyndon(&letters) {
            Ok(LyndonWord { letters })
        } else {
            Err(FreeLieError::NotLyndon(letters))
        }
    }

    pub fn letter(index: u8) -> Self {
        LyndonWord {
            letters: vec![index],
        }
    }

    /// The word `a^r b`; its standard bracketing is `ad_a^r(b)`.
    pub fn a_power_b(r: usize) -> Self {
        let mut letters = vec![0u8; r];
        letters.push(1);
        LyndonWord { letters }
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    /// Number of letters equal to the generator with this index.
    pub fn occurrence(&self, gen_index: u8) -> usize {
        self.letters.iter().filter(|&&l| l == gen_index).count()
    }

    /// Standard factorization `w = u v` with `v` the lexicographically least
    /// (equivalently the longest Lyndon) proper suffix. Panics on letters.
    pub fn std_factorization(&self) -> (LyndonWord, LyndonWord) {
        assert!(self.letters.len() >= 2, "letters have no factorization");
        let mut best = 1;
        for i in 2..self.letters.len() {
            if self.letters[i..] < self.letters[best..] {
                best = i;
            }
        }
        (
            LyndonWord {
                letters: self.letters[..best].to_vec(),
            },
            LyndonWord {
                letters: self.letters[best..].to_vec(),
            },
        )
    }

    fn concat(&self, other: &LyndonWord) -> Vec<u8> {
        let mut w = self.letters.clone();
        w.extend_from_slice(&other.letters);
        w
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", symbol_of(l))?;
        }
        Ok(())
    }
}

/// All Lyndon words of length at most `max_weight` over the alphabet, in
/// lexicographic order (Duval's generation).
pub fn lyndon_words(alphabet: &[Generator], max_weight: usize) -> Vec<LyndonWord> {
    assert!(max_weight >= 1, "max_weight must be at least 1");
    let d = alphabet.len() as u8;
    assert!(d >= 1);
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(LyndonWord { letters: w.clone() });
        // extend periodically to the cutoff length, then increment
        let len = w.len();
        let mut next = Vec::with_capacity(max_weight);
        for i in 0..max_weight {
            next.push(w[i % len]);
        }
        while let Some(&last) = next.last() {
            if last == d - 1 {
                next.pop();
            } else {
                break;
            }
        }
        match next.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
        w = next;
    }
    out
}

/// All Lyndon words of length `weight` containing the generator `gen` exactly
/// `occ` times, two-letter alphabet. Enumerates letter placements directly,
/// so it stays cheap at weights where the full basis is astronomically large.
pub fn lyndon_words_with_occurrence(weight: usize, gen: u8, occ: usize) -> Vec<LyndonWord> {
    assert!(gen <= 1, "occurrence enumeration is two-letter");
    let other_occ = match weight.checked_sub(occ) {
        Some(o) => o,
        None => return Vec::new(),
    };
    let ones = if gen == 1 { occ } else { other_occ };
    let mut out = Vec::new();
    let mut positions: Vec<usize> = (0..ones).collect();
    if ones == 0 {
        let w = vec![0u8; weight];
        if is_lyndon(&w) {
            out.push(LyndonWord { letters: w });
        }
        return out;
    }
    if ones > weight {
        return Vec::new();
    }
    loop {
        let mut w = vec![0u8; weight];
        for &p in &positions {
            w[p] = 1;
        }
        if is_lyndon(&w) {
            out.push(LyndonWord { letters: w });
        }
        // next combination
        let mut i = ones;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if positions[i] != i + weight - ones {
                break;
            }
        }
        positions[i] += 1;
        for j in i + 1..ones {
            positions[j] = positions[j - 1] + 1;
        }
    }
}

/// Dimension of the weight-`n` component of the free Lie algebra on
/// `alphabet_size` generators: the Witt formula `(1/n) sum_{m|n} mu(m) d^{n/m}`.
pub fn witt_dimension(alphabet_size: usize, n: usize) -> usize {
    assert!(n >= 1);
    let mut sum: i128 = 0;
    for m in 1..=n {
        if !n.is_multiple_of(m) {
            continue;
        }
        let mu = moebius(m);
        if mu == 0 {
            continue;
        }
        let mut pow: i128 = 1;
        for _ in 0..n / m {
            pow = pow
                .checked_mul(alphabet_size as i128)
                .expect("witt_dimension overflow");
        }
        sum += mu as i128 * pow;
    }
    debug_assert!(sum >= 0 && sum % n as i128 == 0);
    (sum / n as i128) as usize
}

fn moebius(mut n: usize) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Sparse rational combination of Lyndon-basis brackets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<LyndonWord, Rational>,
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn word(w: LyndonWord) -> Self {
        Self::term(w, rat(1))
    }

    pub fn term(w: LyndonWord, coeff: Rational) -> Self {
        let mut e = LieElement::zero();
        e.add_term(w, coeff);
        e
    }

    pub fn generator(index: u8) -> Self {
        Self::word(LyndonWord::letter(index))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LyndonWord, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &LyndonWord) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: LyndonWord, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, factor: &Rational) -> LieElement {
        if factor.is_zero() {
            return LieElement::zero();
        }
        LieElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * factor))
                .collect(),
        }
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&rat(-1))
    }

    /// The weight-`n` homogeneous part.
    pub fn weight_component(&self, n: usize) -> LieElement {
        LieElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(LyndonWord::weight).max()
    }

    /// Drops all terms of weight greater than `n`.
    pub fn truncate(&self, n: usize) -> LieElement {
        LieElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() <= n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", c, w)?;
        }
        Ok(())
    }
}

/// `b_r = [[..[[b,a],a]..],a] = (-1)^r ad_a^r(b)`: weight `r+1`, occurrence 1
/// in `b`. In the Lyndon basis this is the single signed word `(-1)^r a^r b`.
pub fn b_r(r: usize) -> LieElement {
    let sign = if r.is_multiple_of(2) { rat(1) } else { rat(-1) };
    LieElement::term(LyndonWord::a_power_b(r), sign)
}

/// Noncommutative polynomial in the generators: the image of Lie elements
/// under iterated commutator expansion in the tensor algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorPolynomial {
    terms: BTreeMap<Vec<u8>, Rational>,
}

impl TensorPolynomial {
    pub fn zero() -> Self {
        TensorPolynomial::default()
    }

    pub fn monomial(word: Vec<u8>, coeff: Rational) -> Self {
        let mut p = TensorPolynomial::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[u8]) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, word: Vec<u8>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        TensorPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * factor))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in self.terms() {
            for (w2, c2) in other.terms() {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

struct TensorWord<'a>(&'a [u8]);

impl fmt::Display for TensorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", c, TensorWord(w))?;
        }
        Ok(())
    }
}

impl fmt::Display for TensorWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in self.0 {
            write!(f, "{}", symbol_of(l))?;
        }
        Ok(())
    }
}

/// Memoized bracket expansion for the free Lie algebra. Tables grow lazily
/// and are shared behind a mutex; redundant recomputation under concurrent
/// misses is harmless because the expansion of a pair is unique.
pub struct FreeLieEngine {
    bracket_memo: Mutex<HashMap<(LyndonWord, LyndonWord), Arc<LieElement>>>,
    tensor_memo: Mutex<HashMap<LyndonWord, Arc<TensorPolynomial>>>,
}

impl Default for FreeLieEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl FreeLieEngine {
    pub fn new() -> Self {
        FreeLieEngine {
            bracket_memo: Mutex::new(HashMap::new()),
            tensor_memo: Mutex::new(HashMap::new()),
        }
    }

    /// `[x, y]` expanded in the Lyndon basis; bilinear and antisymmetric.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = LieElement::zero();
        for (u, cu) in x.terms() {
            for (v, cv) in y.terms() {
                let expansion = self.bracket_words(u, v);
                let factor = cu * cv;
                for (w, c) in expansion.terms() {
                    out.add_term(w.clone(), c * &factor);
                }
            }
        }
        out
    }

    /// Expansion of the bracket of two basis words.
    pub fn bracket_words(&self, u: &LyndonWord, v: &LyndonWord) -> Arc<LieElement> {
        match u.cmp(v) {
            std::cmp::Ordering::Equal => Arc::new(LieElement::zero()),
            std::cmp::Ordering::Greater => Arc::new(self.bracket_words(v, u).neg()),
            std::cmp::Ordering::Less => {
                if let Some(hit) = self
                    .bracket_memo
                    .lock()
                    .unwrap()
                    .get(&(u.clone(), v.clone()))
                {
                    return Arc::clone(hit);
                }
                let result = Arc::new(self.expand_ordered(u, v));
                self.bracket_memo
                    .lock()
                    .unwrap()
                    .insert((u.clone(), v.clone()), Arc::clone(&result));
                result
            }
        }
    }

    /// `[u, v]` for Lyndon words `u < v`. If `(u, v)` is the standard
    /// factorization of `uv` the bracket is the basis word `uv`; otherwise
    /// `u = u1 u2` is split and the Jacobi identity
    /// `[[u1,u2],v] = [u1,[u2,v]] - [u2,[u1,v]]` is applied recursively.
    fn expand_ordered(&self, u: &LyndonWord, v: &LyndonWord) -> LieElement {
        debug_assert!(u < v);
        let w = u.concat(v);
        debug_assert!(is_lyndon(&w));
        let word = LyndonWord { letters: w };
        if u.weight() == 1 || word.std_factorization().1 == *v {
            return LieElement::word(word);
        }
        let (u1, u2) = u.std_factorization();
        let inner_right = self.bracket_words(&u2, v);
        let t1 = self.bracket(&LieElement::word(u1.clone()), &inner_right);
        let inner_left = self.bracket_words(&u1, v);
        let t2 = self.bracket(&LieElement::word(u2), &inner_left);
        t1.sub(&t2)
    }

    /// Image of a basis word's standard bracketing in the tensor algebra.
    pub fn tensor_expand_word(&self, w: &LyndonWord) -> Arc<TensorPolynomial> {
        if let Some(hit) = self.tensor_memo.lock().unwrap().get(w) {
            return Arc::clone(hit);
        }
        let result = if w.weight() == 1 {
            TensorPolynomial::monomial(w.letters.clone(), rat(1))
        } else {
            let (u, v) = w.std_factorization();
            let pu = self.tensor_expand_word(&u);
            let pv = self.tensor_expand_word(&v);
            pu.commutator(&pv)
        };
        let result = Arc::new(result);
        self.tensor_memo
            .lock()
            .unwrap()
            .insert(w.clone(), Arc::clone(&result));
        result
    }

    /// Independent correctness oracle: the image of `x` under iterated
    /// commutator expansion. Linear and injective on each weight component.
    pub fn tensor_expand(
        &self,
        x: &LieElement,
        cutoff: usize,
    ) -> Result<TensorPolynomial, FreeLieError> {
        if let Some(w) = x.max_weight() {
            if w > cutoff {
                return Err(FreeLieError::OracleCutoff { weight: w, cutoff });
            }
        }
        let mut out = TensorPolynomial::zero();
        for (w, c) in x.terms() {
            let p = self.tensor_expand_word(w);
            for (word, pc) in p.terms() {
                out.add_term(word.clone(), pc * c);
            }
        }
        Ok(out)
    }

    /// Number of memoized bracket pairs (used by the on-disk cache).
    pub fn memo_len(&self) -> usize {
        self.bracket_memo.lock().unwrap().len()
    }

    /// Eagerly expands every bracket of basis-word pairs with total weight at
    /// most `max_weight` on the two-letter alphabet.
    pub fn populate_to_weight(&self, max_weight: usize) {
        let alpha = alphabet_ab();
        let words = lyndon_words(&alpha, max_weight.saturating_sub(1));
        for u in &words {
            for v in &words {
                if u < v && u.weight() + v.weight() <= max_weight {
                    self.bracket_words(u, v);
                }
            }
        }
    }

    pub(crate) fn export_memo(&self) -> Vec<((LyndonWord, LyndonWord), LieElement)> {
        let memo = self.bracket_memo.lock().unwrap();
        let mut entries: Vec<_> = memo
            .iter()
            .map(|(k, v)| (k.clone(), (**v).clone()))
            .collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries
    }

    pub(crate) fn import_memo(&self, entries: Vec<((LyndonWord, LyndonWord), LieElement)>) {
        let mut memo = self.bracket_memo.lock().unwrap();
        for (k, v) in entries {
            memo.insert(k, Arc::new(v));
        }
    }
}

#[cfg(test)]
mod tests;
