//! Graded algebras over the two generators `a < b`: the free Lie algebra,
//! its nilpotent weight truncations, and the two explicit quotients
//!
//! * `quot-k`: by the ideal generated by brackets of occurrence 2 in `b`
//!   (basis `a`, `b_r`; relations `[b_r,a] = b_{r+1}`, `[b_p,b_q] = 0`);
//! * `quot-j`: by the ideal generated by brackets of occurrence greater
//!   than 2 (additional basis `[b_p,b_q]` for `p > q >= 0`).
//!
//! The quotients are realized by explicit structure constants rather than
//! generic ideal machinery; `tests/` check them against the occurrence-graded
//! projection of the free algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::{
    alphabet_ab, lyndon_words, lyndon_words_with_occurrence, FreeLieEngine, LieElement, LyndonWord,
};
use crate::linalg::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Free,
    /// Free algebra with every component of weight >= q set to zero.
    Nilpotent(usize),
    QuotientK,
    QuotientJ,
}

/// Basis element of a supported graded algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasisElem {
    /// Lyndon word (free algebra and its truncations).
    Word(LyndonWord),
    /// The generator `a` in the quotient presentations.
    GenA,
    /// `b_r`, weight `r+1`, occurrence 1 in `b`.
    BLine(usize),
    /// `[b_p, b_q]` with `p > q`, weight `p+q+2`, occurrence 2 in `b`.
    BPair(usize, usize),
}

impl BasisElem {
    pub fn weight(&self) -> usize {
        match self {
            BasisElem::Word(w) => w.weight(),
            BasisElem::GenA => 1,
            BasisElem::BLine(r) => r + 1,
            BasisElem::BPair(p, q) => p + q + 2,
        }
    }

    /// Occurrence of the generator with this index (0 = `a`, 1 = `b`).
    pub fn occurrence(&self, gen_index: u8) -> usize {
        match self {
            BasisElem::Word(w) => w.occurrence(gen_index),
            BasisElem::GenA => usize::from(gen_index == 0),
            BasisElem::BLine(r) => {
                if gen_index == 0 {
                    *r
                } else {
                    1
                }
            }
            BasisElem::BPair(p, q) => {
                if gen_index == 0 {
                    p + q
                } else {
                    2
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            BasisElem::Word(w) => w.to_string(),
            BasisElem::GenA => "a".to_string(),
            BasisElem::BLine(r) => format!("b{}", r),
            BasisElem::BPair(p, q) => format!("[b{},b{}]", p, q),
        }
    }

    fn variant_rank(&self) -> u8 {
        match self {
            BasisElem::Word(_) => 0,
            BasisElem::GenA => 1,
            BasisElem::BLine(_) => 2,
            BasisElem::BPair(..) => 3,
        }
    }
}

impl fmt::Display for BasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Basis order: by weight, then occurrence in `b`, then a fixed tie-break.
/// This is the factor order used by the wedge normalization, so it must be
/// total and stable across runs.
impl Ord for BasisElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.occurrence(1).cmp(&other.occurrence(1)))
            .then_with(|| self.variant_rank().cmp(&other.variant_rank()))
            .then_with(|| match (self, other) {
                (BasisElem::Word(w1), BasisElem::Word(w2)) => w1.cmp(w2),
                (BasisElem::BLine(r1), BasisElem::BLine(r2)) => r1.cmp(r2),
                (BasisElem::BPair(p1, q1), BasisElem::BPair(p2, q2)) => (p1, q1).cmp(&(p2, q2)),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for BasisElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse rational combination of basis elements of one algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<BasisElem, Rational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn basis(e: BasisElem) -> Self {
        Self::term(e, rat(1))
    }

    pub fn term(e: BasisElem, coeff: Rational) -> Self {
        let mut x = Self::zero();
        x.add_term(e, coeff);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElem, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &BasisElem) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: BasisElem, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", c, e)?;
        }
        Ok(())
    }
}

/// A graded Lie algebra with an enumerable basis per weight and exact
/// structure constants. Bracket tables grow lazily inside the shared free-Lie
/// engine and are pure reads afterwards; all methods take `&self`.
pub struct GradedAlgebra {
    kind: AlgebraKind,
    name: String,
    engine: Arc<FreeLieEngine>,
}

impl GradedAlgebra {
    pub fn free() -> Arc<Self> {
        Self::free_with_engine(Arc::new(FreeLieEngine::new()))
    }

    pub fn free_with_engine(engine: Arc<FreeLieEngine>) -> Arc<Self> {
        Arc::new(GradedAlgebra {
            kind: AlgebraKind::Free,
            name: "free".to_string(),
            engine,
        })
    }

    /// The quotient with basis `{a} U {b_r}`; occurrence-2 brackets vanish.
    pub fn quotient_k() -> Arc<Self> {
        Arc::new(GradedAlgebra {
            kind: AlgebraKind::QuotientK,
            name: "quot-k".to_string(),
            engine: Arc::new(FreeLieEngine::new()),
        })
    }

    /// The quotient with basis `{a} U {b_r} U {[b_p,b_q] : p > q}`; brackets
    /// of total occurrence >= 3 vanish.
    pub fn quotient_j() -> Arc<Self> {
        Arc::new(GradedAlgebra {
            kind: AlgebraKind::QuotientJ,
            name: "quot-j".to_string(),
            engine: Arc::new(FreeLieEngine::new()),
        })
    }

    /// The free algebra with all components of weight >= q set to zero.
    pub fn nilpotent_truncation(q: usize) -> Arc<Self> {
        Self::nilpotent_truncation_with_engine(q, Arc::new(FreeLieEngine::new()))
    }

    pub fn nilpotent_truncation_with_engine(q: usize, engine: Arc<FreeLieEngine>) -> Arc<Self> {
        assert!(q >= 2, "nilpotent truncation requires q >= 2");
        Arc::new(GradedAlgebra {
            kind: AlgebraKind::Nilpotent(q),
            name: format!("nilpotent:{}", q),
            engine,
        })
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn engine(&self) -> &Arc<FreeLieEngine> {
        &self.engine
    }

    /// Deterministic basis of the weight-`weight` component, optionally
    /// restricted to elements of the given occurrence in `b`.
    pub fn basis(&self, weight: usize, occ_filter: Option<usize>) -> Vec<BasisElem> {
        if weight == 0 {
            return Vec::new();
        }
        let mut out: Vec<BasisElem> = match self.kind {
            AlgebraKind::Free => free_basis(weight, occ_filter),
            AlgebraKind::Nilpotent(q) => {
                if weight >= q {
                    Vec::new()
                } else {
                    free_basis(weight, occ_filter)
                }
            }
            AlgebraKind::QuotientK => {
                let mut v = Vec::new();
                if weight == 1 {
                    v.push(BasisElem::GenA);
                }
                v.push(BasisElem::BLine(weight - 1));
                v
            }
            AlgebraKind::QuotientJ => {
                let mut v = Vec::new();
                if weight == 1 {
                    v.push(BasisElem::GenA);
                }
                v.push(BasisElem::BLine(weight - 1));
                if weight >= 3 {
                    let total = weight - 2;
                    for p in (total + 1).div_ceil(2)..=total {
                        v.push(BasisElem::BPair(p, total - p));
                    }
                }
                v
            }
        };
        if let Some(k) = occ_filter {
            out.retain(|e| e.occurrence(1) == k);
        }
        out.sort();
        out
    }

    pub fn dim(&self, weight: usize, occ_filter: Option<usize>) -> usize {
        self.basis(weight, occ_filter).len()
    }

    /// Structure constants: `[x, y]` expanded over the basis of weight
    /// `weight(x) + weight(y)`.
    pub fn bracket_basis(&self, x: &BasisElem, y: &BasisElem) -> Vec<(BasisElem, Rational)> {
        match self.kind {
            AlgebraKind::Free => self.free_bracket(x, y),
            AlgebraKind::Nilpotent(q) => {
                if x.weight() + y.weight() >= q {
                    Vec::new()
                } else {
                    self.free_bracket(x, y)
                }
            }
            AlgebraKind::QuotientK => quotient_k_bracket(x, y),
            AlgebraKind::QuotientJ => quotient_j_bracket(x, y),
        }
    }

    fn free_bracket(&self, x: &BasisElem, y: &BasisElem) -> Vec<(BasisElem, Rational)> {
        let (BasisElem::Word(u), BasisElem::Word(v)) = (x, y) else {
            panic!("free algebra basis elements are words");
        };
        let expansion = self.engine.bracket_words(u, v);
        expansion
            .terms()
            .map(|(w, c)| (BasisElem::Word(w.clone()), c.clone()))
            .collect()
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket_elements(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (ex, cx) in x.terms() {
            for (ey, cy) in y.terms() {
                let factor = cx * cy;
                for (e, c) in self.bracket_basis(ex, ey) {
                    out.add_term(e, c * &factor);
                }
            }
        }
        out
    }

    /// `b_r` as an element of this algebra (zero when killed by truncation).
    pub fn b_r(&self, r: usize) -> AlgebraElement {
        match self.kind {
            AlgebraKind::Free => wrap_lie(&super::b_r(r)),
            AlgebraKind::Nilpotent(q) => {
                if r + 1 >= q {
                    AlgebraElement::zero()
                } else {
                    wrap_lie(&super::b_r(r))
                }
            }
            AlgebraKind::QuotientK | AlgebraKind::QuotientJ => {
                AlgebraElement::basis(BasisElem::BLine(r))
            }
        }
    }

    pub fn gen_a(&self) -> AlgebraElement {
        match self.kind {
            AlgebraKind::Free | AlgebraKind::Nilpotent(_) => {
                AlgebraElement::basis(BasisElem::Word(LyndonWord::letter(0)))
            }
            _ => AlgebraElement::basis(BasisElem::GenA),
        }
    }

    pub fn gen_b(&self) -> AlgebraElement {
        self.b_r(0)
    }

    /// Lifts a free Lie element into this algebra's basis (free and nilpotent
    /// kinds only; nilpotent drops the truncated weights).
    pub fn element_from_lie(&self, x: &LieElement) -> AlgebraElement {
        let cutoff = match self.kind {
            AlgebraKind::Free => usize::MAX,
            AlgebraKind::Nilpotent(q) => q - 1,
            _ => panic!("element_from_lie requires a word-basis algebra"),
        };
        let mut out = AlgebraElement::zero();
        for (w, c) in x.terms() {
            if w.weight() <= cutoff {
                out.add_term(BasisElem::Word(w.clone()), c.clone());
            }
        }
        out
    }

    /// Checks antisymmetry, the Jacobi identity and additivity of the weight
    /// and occurrence gradings on all stored structure constants up to the
    /// given total weight. Returns the first violation found.
    pub fn verify_axioms(&self, max_weight: usize) -> Result<(), String> {
        let by_weight: Vec<Vec<BasisElem>> =
            (0..=max_weight).map(|w| self.basis(w, None)).collect();
        for w1 in 1..max_weight {
            for w2 in 1..=(max_weight - w1) {
                for x in &by_weight[w1] {
                    for y in &by_weight[w2] {
                        let xy = self.bracket_elements(
                            &AlgebraElement::basis(x.clone()),
                            &AlgebraElement::basis(y.clone()),
                        );
                        for (e, _) in xy.terms() {
                            if e.weight() != w1 + w2 {
                                return Err(format!(
                                    "grading violated: [{x}, {y}] has a weight-{} term",
                                    e.weight()
                                ));
                            }
                            for g in [0u8, 1] {
                                if e.occurrence(g) != x.occurrence(g) + y.occurrence(g) {
                                    return Err(format!("occurrence not additive on [{x}, {y}]"));
                                }
                            }
                        }
                        let yx = self.bracket_elements(
                            &AlgebraElement::basis(y.clone()),
                            &AlgebraElement::basis(x.clone()),
                        );
                        if !xy.add(&yx).is_zero() {
                            return Err(format!("antisymmetry violated on [{x}, {y}]"));
                        }
                    }
                }
            }
        }
        for w1 in 1..max_weight {
            for w2 in w1..=(max_weight - w1) {
                if w1 + w2 >= max_weight {
                    continue;
                }
                for w3 in w2..=(max_weight - w1 - w2) {
                    for x in &by_weight[w1] {
                        for y in &by_weight[w2] {
                            for z in &by_weight[w3] {
                                let ex = AlgebraElement::basis(x.clone());
                                let ey = AlgebraElement::basis(y.clone());
                                let ez = AlgebraElement::basis(z.clone());
                                let t1 =
                                    self.bracket_elements(&ex, &self.bracket_elements(&ey, &ez));
                                let t2 =
                                    self.bracket_elements(&ey, &self.bracket_elements(&ez, &ex));
                                let t3 =
                                    self.bracket_elements(&ez, &self.bracket_elements(&ex, &ey));
                                if !t1.add(&t2).add(&t3).is_zero() {
                                    return Err(format!("Jacobi violated on ({x}, {y}, {z})"));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn wrap_lie(x: &LieElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (w, c) in x.terms() {
        out.add_term(BasisElem::Word(w.clone()), c.clone());
    }
    out
}

fn free_basis(weight: usize, occ_filter: Option<usize>) -> Vec<BasisElem> {
    match occ_filter {
        Some(k) => lyndon_words_with_occurrence(weight, 1, k)
            .into_iter()
            .map(BasisElem::Word)
            .collect(),
        None => lyndon_words(&alphabet_ab(), weight)
            .into_iter()
            .filter(|w| w.weight() == weight)
            .map(BasisElem::Word)
            .collect(),
    }
}

fn quotient_k_bracket(x: &BasisElem, y: &BasisElem) -> Vec<(BasisElem, Rational)> {
    match (x, y) {
        (BasisElem::BLine(r), BasisElem::GenA) => vec![(BasisElem::BLine(r + 1), rat(1))],
        (BasisElem::GenA, BasisElem::BLine(r)) => vec![(BasisElem::BLine(r + 1), rat(-1))],
        (BasisElem::GenA, BasisElem::GenA) | (BasisElem::BLine(_), BasisElem::BLine(_)) => {
            Vec::new()
        }
        _ => panic!("not a quot-k basis element: [{x}, {y}]"),
    }
}

fn quotient_j_bracket(x: &BasisElem, y: &BasisElem) -> Vec<(BasisElem, Rational)> {
    match (x, y) {
        (BasisElem::BLine(r), BasisElem::GenA) => vec![(BasisElem::BLine(r + 1), rat(1))],
        (BasisElem::GenA, BasisElem::BLine(r)) => vec![(BasisElem::BLine(r + 1), rat(-1))],
        (BasisElem::GenA, BasisElem::GenA) => Vec::new(),
        (BasisElem::BLine(p), BasisElem::BLine(q)) => match p.cmp(q) {
            Ordering::Greater => vec![(BasisElem::BPair(*p, *q), rat(1))],
            Ordering::Less => vec![(BasisElem::BPair(*q, *p), rat(-1))],
            Ordering::Equal => Vec::new(),
        },
        (BasisElem::BPair(p, q), BasisElem::GenA) => {
            let mut out = vec![(BasisElem::BPair(p + 1, *q), rat(1))];
            if *p > q + 1 {
                out.push((BasisElem::BPair(*p, q + 1), rat(1)));
            }
            out
        }
        (BasisElem::GenA, BasisElem::BPair(p, q)) => {
            let mut out = vec![(BasisElem::BPair(p + 1, *q), rat(-1))];
            if *p > q + 1 {
                out.push((BasisElem::BPair(*p, q + 1), rat(-1)));
            }
            out
        }
        // total occurrence of these pairs is at least 3
        (BasisElem::BPair(..), BasisElem::BLine(_))
        | (BasisElem::BLine(_), BasisElem::BPair(..))
        | (BasisElem::BPair(..), BasisElem::BPair(..)) => Vec::new(),
        _ => panic!("not a quot-j basis element: [{x}, {y}]"),
    }
}
