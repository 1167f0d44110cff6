//! Chevalley-Eilenberg chains of a graded algebra.
//!
//! A degree-p chain is a combination of wedges of p suspended basis elements;
//! wedges are stored with strictly increasing factors in the fixed basis
//! order (weight, occurrence in b, tie-break), with permutation signs from
//! inversion counting. The differential
//!
//! `d(x_1 ^ ... ^ x_p) = sum_{i<j} (-1)^{i+j} [x_i,x_j] ^ x_1 ^ ...^i...^j... ^ x_p`
//!
//! preserves both the weight and the occurrence gradings, so every (degree,
//! weight) cell is an exact finite-dimensional subcomplex.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::freelie::{AlgebraElement, BasisElem, GradedAlgebra};
use crate::linalg::{rat, Rational, RationalMatrix};

/// Wedge of suspended basis elements, factors strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wedge {
    factors: Vec<BasisElem>,
}

impl Wedge {
    /// The degree-0 unit.
    pub fn unit() -> Self {
        Wedge {
            factors: Vec::new(),
        }
    }

    /// Normalizes an arbitrary factor list: sorts with the permutation sign,
    /// returns `None` when a factor repeats (the wedge is zero).
    pub fn normalize(mut factors: Vec<BasisElem>) -> Option<(Wedge, i32)> {
        let mut sign = 1;
        // insertion sort, counting transpositions; factor lists are tiny
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1] > factors[j] {
                factors.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if factors.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Wedge { factors }, sign))
    }

    /// Builds a wedge from factors already known to be sorted and distinct.
    pub fn from_sorted(factors: Vec<BasisElem>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0] < w[1]));
        Wedge { factors }
    }

    pub fn factors(&self) -> &[BasisElem] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn weight(&self) -> usize {
        self.factors.iter().map(BasisElem::weight).sum()
    }

    pub fn occurrence(&self, gen_index: u8) -> usize {
        self.factors.iter().map(|f| f.occurrence(gen_index)).sum()
    }
}

impl fmt::Display for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, e) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "^")?;
            }
            write!(f, "{}", e)?;
        }
        Ok(())
    }
}

/// Sparse rational combination of wedge basis elements of one algebra.
#[derive(Clone)]
pub struct Chain {
    algebra: Arc<GradedAlgebra>,
    terms: BTreeMap<Wedge, Rational>,
}

impl Chain {
    pub fn zero(algebra: Arc<GradedAlgebra>) -> Self {
        Chain {
            algebra,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_wedge(algebra: Arc<GradedAlgebra>, wedge: Wedge) -> Self {
        let mut c = Chain::zero(algebra);
        c.add_term(wedge, rat(1));
        c
    }

    /// Multilinear antisymmetric wedge of algebra elements.
    pub fn wedge_of(algebra: Arc<GradedAlgebra>, elements: &[AlgebraElement]) -> Self {
        let mut partial: Vec<(Vec<BasisElem>, Rational)> = vec![(Vec::new(), rat(1))];
        for elem in elements {
            let mut next = Vec::with_capacity(partial.len() * elem.terms().count().max(1));
            for (factors, coeff) in &partial {
                for (e, c) in elem.terms() {
                    let mut f = factors.clone();
                    f.push(e.clone());
                    next.push((f, coeff * c));
                }
            }
            partial = next;
        }
        let mut chain = Chain::zero(algebra);
        for (factors, coeff) in partial {
            if let Some((wedge, sign)) = Wedge::normalize(factors) {
                chain.add_term(wedge, coeff * rat(sign.into()));
            }
        }
        chain
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Wedge, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, wedge: &Wedge) -> Rational {
        self.terms
            .get(wedge)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, wedge: Wedge, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(wedge) {
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

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Chain {
        let mut out = Chain::zero(Arc::clone(&self.algebra));
        if factor.is_zero() {
            return out;
        }
        for (w, c) in self.terms() {
            out.add_term(w.clone(), c * factor);
        }
        out
    }

    /// Exact projection onto chain degree `p` and weight `n`.
    pub fn weight_component(&self, p: usize, n: usize) -> Chain {
        let mut out = Chain::zero(Arc::clone(&self.algebra));
        for (w, c) in self.terms() {
            if w.degree() == p && w.weight() == n {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Exact projection onto total occurrence `k` in the given generator.
    pub fn occurrence_component(&self, gen_index: u8, k: usize) -> Chain {
        let mut out = Chain::zero(Arc::clone(&self.algebra));
        for (w, c) in self.terms() {
            if w.occurrence(gen_index) == k {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// Drops all terms of weight greater than `n`.
    pub fn truncate_weight(&self, n: usize) -> Chain {
        let mut out = Chain::zero(Arc::clone(&self.algebra));
        for (w, c) in self.terms() {
            if w.weight() <= n {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    /// `(degree, weight)` when the chain is homogeneous in both.
    pub fn homogeneous_bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let bidegree = (first.degree(), first.weight());
        if it.all(|w| (w.degree(), w.weight()) == bidegree) {
            Some(bidegree)
        } else {
            None
        }
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(Wedge::weight).max()
    }

    /// The Chevalley-Eilenberg differential; degree p -> p-1, weight and
    /// occurrence preserved.
    pub fn differential(&self) -> Chain {
        let mut out = Chain::zero(Arc::clone(&self.algebra));
        for (wedge, coeff) in self.terms() {
            let factors = wedge.factors();
            let p = factors.len();
            for i in 0..p {
                for j in (i + 1)..p {
                    // positions are 1-based in the sign convention
                    let pair_sign = if (i + j) % 2 == 0 { rat(1) } else { rat(-1) };
                    let rest: Vec<BasisElem> = factors
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, e)| e.clone())
                        .collect();
                    for (e, bc) in self.algebra.bracket_basis(&factors[i], &factors[j]) {
                        let mut new_factors = Vec::with_capacity(p - 1);
                        new_factors.push(e);
                        new_factors.extend(rest.iter().cloned());
                        if let Some((w, sign)) = Wedge::normalize(new_factors) {
                            out.add_term(w, coeff * &pair_sign * bc * rat(sign.into()));
                        }
                    }
                }
            }
        }
        out
    }
}

impl PartialEq for Chain {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for Chain {}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{}]({})", self.algebra.name(), self)
    }
}

impl fmt::Display for Chain {
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

/// Deterministic enumeration of the wedge basis of the (degree `p`,
/// weight `n`) cell, optionally restricted to total occurrence
/// `occurrence_filter` in `b`. Factors are generated in the fixed basis
/// order, so the result is lexicographic in that order.
pub fn basis_of(
    algebra: &GradedAlgebra,
    p: usize,
    n: usize,
    occurrence_filter: Option<usize>,
) -> Vec<Wedge> {
    if p == 0 {
        let unit_matches = n == 0 && occurrence_filter.is_none_or(|k| k == 0);
        return if unit_matches {
            vec![Wedge::unit()]
        } else {
            Vec::new()
        };
    }
    if n < p {
        return Vec::new();
    }
    let mut cells: HashMap<(usize, Option<usize>), Vec<BasisElem>> = HashMap::new();
    let mut out = Vec::new();
    let mut prefix: Vec<BasisElem> = Vec::with_capacity(p);
    extend_basis(
        algebra,
        &mut cells,
        &mut prefix,
        p,
        n,
        occurrence_filter,
        &mut out,
    );
    out
}

/// Candidates of one weight, in basis order, restricted to occurrence at most
/// `max_occ` when the enumeration is occurrence-filtered. The filtered path
/// goes through per-(weight, occurrence) cells so that weights far beyond the
/// reach of full basis enumeration stay cheap.
fn weight_candidates(
    algebra: &GradedAlgebra,
    cells: &mut HashMap<(usize, Option<usize>), Vec<BasisElem>>,
    weight: usize,
    max_occ: Option<usize>,
) -> Vec<BasisElem> {
    match max_occ {
        None => cells
            .entry((weight, None))
            .or_insert_with(|| algebra.basis(weight, None))
            .clone(),
        Some(max_occ) => {
            let max_occ = max_occ.min(weight);
            let mut out = Vec::new();
            for o in 0..=max_occ {
                out.extend(
                    cells
                        .entry((weight, Some(o)))
                        .or_insert_with(|| algebra.basis(weight, Some(o)))
                        .iter()
                        .cloned(),
                );
            }
            out
        }
    }
}

fn extend_basis(
    algebra: &GradedAlgebra,
    cells: &mut HashMap<(usize, Option<usize>), Vec<BasisElem>>,
    prefix: &mut Vec<BasisElem>,
    slots: usize,
    rem_weight: usize,
    rem_occ: Option<usize>,
    out: &mut Vec<Wedge>,
) {
    if slots == 0 {
        if rem_weight == 0 && rem_occ.is_none_or(|k| k == 0) {
            out.push(Wedge::from_sorted(prefix.clone()));
        }
        return;
    }
    if rem_weight < slots {
        return;
    }
    if let Some(k) = rem_occ {
        if k > rem_weight {
            return;
        }
    }
    let max_weight = rem_weight - (slots - 1);
    for w in 1..=max_weight {
        let candidates = weight_candidates(algebra, cells, w, rem_occ);
        for e in candidates {
            if let Some(last) = prefix.last() {
                if e <= *last {
                    continue;
                }
            }
            let occ = e.occurrence(1);
            let next_occ = match rem_occ {
                None => None,
                Some(k) => {
                    if occ > k {
                        continue;
                    }
                    Some(k - occ)
                }
            };
            prefix.push(e);
            extend_basis(
                algebra,
                cells,
                prefix,
                slots - 1,
                rem_weight - w,
                next_occ,
                out,
            );
            prefix.pop();
        }
    }
}

/// Exact matrix of `d : C_p(n) -> C_{p-1}(n)` in the enumerated bases
/// (columns indexed by the degree-p basis, rows by the degree-(p-1) basis,
/// both under the same occurrence filter).
pub fn differential_matrix(
    algebra: &Arc<GradedAlgebra>,
    p: usize,
    n: usize,
    occurrence_filter: Option<usize>,
) -> RationalMatrix {
    assert!(p >= 1, "the differential matrix starts at degree 1");
    let cols = basis_of(algebra, p, n, occurrence_filter);
    let rows = basis_of(algebra, p - 1, n, occurrence_filter);
    let row_index: BTreeMap<&Wedge, usize> = rows.iter().zip(0..).collect();
    let mut m = RationalMatrix::zero(rows.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        let image = Chain::from_wedge(Arc::clone(algebra), col.clone()).differential();
        for (w, c) in image.terms() {
            let i = *row_index.get(w).unwrap_or_else(|| {
                panic!(
                    "differential left the graded cell: d({col}) produced {w} \
                     outside C_{}({n}) with occurrence filter {occurrence_filter:?}",
                    p - 1
                )
            });
            m.set(i, j, c.clone());
        }
    }
    m
}
