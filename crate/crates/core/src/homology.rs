//! Weight-wise homology of the Chevalley-Eilenberg complex.
//!
//! The differential preserves weight, so each (degree p, weight n) cell is an
//! independent finite-dimensional complex over Q and its homology dimension
//! is `dim ker d_p - rank d_{p+1}`, computed from two exact matrices. Cells
//! are computed concurrently and assembled in index order, so tables are
//! deterministic regardless of the parallelism degree.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cechains::{basis_of, differential_matrix, Chain};
use crate::freelie::{AlgebraKind, GradedAlgebra};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("chain is not homogeneous in (degree, weight)")]
    Inhomogeneous,
    #[error("chain is not a cycle: its differential is nonzero")]
    NotACycle,
    #[error("cell C_{p}({n}) has {dim} basis elements, over the configured cutoff {cutoff}")]
    ResourceCutoff {
        p: usize,
        n: usize,
        dim: usize,
        cutoff: usize,
    },
}

/// Resource guard for table computations.
#[derive(Debug, Clone, Copy)]
pub struct ComputeLimits {
    /// Largest admissible basis size of a single (p, n) cell.
    pub max_cell_dim: usize,
}

impl Default for ComputeLimits {
    fn default() -> Self {
        ComputeLimits {
            max_cell_dim: 200_000,
        }
    }
}

/// Per-(degree, weight) homology dimensions of one algebra at a truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub algebra: String,
    pub truncation: usize,
    pub occurrence_filter: Option<usize>,
    /// (p, n) -> dim H_p(n); present for all p <= p_max, p <= n <= truncation.
    pub entries: BTreeMap<(usize, usize), usize>,
}

#[derive(Serialize)]
struct BettiEntry {
    p: usize,
    n: usize,
    dim: usize,
}

impl Serialize for BettiTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("BettiTable", 4)?;
        s.serialize_field("algebra", &self.algebra)?;
        s.serialize_field("truncation", &self.truncation)?;
        s.serialize_field("occurrence_filter", &self.occurrence_filter)?;
        let entries: Vec<BettiEntry> = self
            .entries
            .iter()
            .map(|(&(p, n), &dim)| BettiEntry { p, n, dim })
            .collect();
        s.serialize_field("entries", &entries)?;
        s.end()
    }
}

impl BettiTable {
    pub fn get(&self, p: usize, n: usize) -> Option<usize> {
        self.entries.get(&(p, n)).copied()
    }

    /// Largest degree stored: 4 unfiltered, 3 under an occurrence-2 filter
    /// (occurrence-2 wedges of degree 4 and higher vanish).
    pub fn degree_bound(occurrence_filter: Option<usize>) -> usize {
        match occurrence_filter {
            Some(2) => 3,
            _ => 4,
        }
    }
}

/// `dim H_p` of the weight-`n` cell: `dim ker d_p - rank d_{p+1}`.
pub fn homology_dimension(
    algebra: &Arc<GradedAlgebra>,
    p: usize,
    n: usize,
    occurrence_filter: Option<usize>,
) -> usize {
    let dim_p = basis_of(algebra, p, n, occurrence_filter).len();
    let rank_in = if p == 0 {
        0
    } else {
        differential_matrix(algebra, p, n, occurrence_filter).rank()
    };
    let rank_out = differential_matrix(algebra, p + 1, n, occurrence_filter).rank();
    dim_p - rank_in - rank_out
}

/// The full table for degrees up to `BettiTable::degree_bound` and weights up
/// to `truncation`.
pub fn betti_table(
    algebra: &Arc<GradedAlgebra>,
    truncation: usize,
    occurrence_filter: Option<usize>,
    limits: &ComputeLimits,
) -> Result<BettiTable, HomologyError> {
    assert!(truncation >= 1);
    let p_max = BettiTable::degree_bound(occurrence_filter);

    // Guard cell sizes before doing any matrix work.
    for n in 0..=truncation {
        for p in 0..=(p_max + 1) {
            let dim = basis_of(algebra, p, n, occurrence_filter).len();
            if dim > limits.max_cell_dim {
                return Err(HomologyError::ResourceCutoff {
                    p,
                    n,
                    dim,
                    cutoff: limits.max_cell_dim,
                });
            }
        }
    }

    // rank of d_p on every cell (p in 1..=p_max+1), computed concurrently
    let cells: Vec<(usize, usize)> = (0..=truncation)
        .flat_map(|n| (1..=(p_max + 1)).map(move |p| (p, n)))
        .collect();
    let mut ranks: Vec<((usize, usize), usize)> = cells
        .par_iter()
        .map(|&(p, n)| {
            (
                (p, n),
                differential_matrix(algebra, p, n, occurrence_filter).rank(),
            )
        })
        .collect();
    ranks.sort();
    let rank_of: BTreeMap<(usize, usize), usize> = ranks.into_iter().collect();

    let mut entries = BTreeMap::new();
    for n in 0..=truncation {
        for p in 0..=p_max.min(n) {
            if p == 0 && n > 0 {
                entries.insert((p, n), 0);
                continue;
            }
            let dim_p = basis_of(algebra, p, n, occurrence_filter).len();
            let rank_in = if p == 0 { 0 } else { rank_of[&(p, n)] };
            let rank_out = rank_of[&(p + 1, n)];
            entries.insert((p, n), dim_p - rank_in - rank_out);
        }
    }
    Ok(BettiTable {
        algebra: algebra.name().to_string(),
        truncation,
        occurrence_filter,
        entries,
    })
}

/// A preimage of `c` under the differential, or `None` when `c` is a cycle
/// but not a boundary. Cycles are required: a nonzero differential is
/// reported as [`HomologyError::NotACycle`].
pub fn is_boundary(c: &Chain) -> Result<Option<Chain>, HomologyError> {
    if c.is_zero() {
        return Ok(Some(Chain::zero(Arc::clone(c.algebra()))));
    }
    let (p, n) = c
        .homogeneous_bidegree()
        .ok_or(HomologyError::Inhomogeneous)?;
    if !c.differential().is_zero() {
        return Err(HomologyError::NotACycle);
    }
    let algebra = c.algebra();
    let rows = basis_of(algebra, p, n, None);
    let cols = basis_of(algebra, p + 1, n, None);
    let m = differential_matrix(algebra, p + 1, n, None);
    let b: Vec<_> = rows.iter().map(|w| c.coefficient(w)).collect();
    let solution = m.solve(&b).expect("row count matches by construction");
    let Some(x) = solution else {
        return Ok(None);
    };
    let mut preimage = Chain::zero(Arc::clone(algebra));
    for (wedge, coeff) in cols.into_iter().zip(x) {
        preimage.add_term(wedge, coeff);
    }
    debug_assert_eq!(&preimage.differential(), c);
    Ok(Some(preimage))
}

/// Chain-level comparison of two algebras' complexes under a common
/// occurrence filter: per (degree, weight) cell the basis dimensions and the
/// differential ranks must agree, which forces equal Betti numbers. Used for
/// the occurrence-2 comparison of `quot-j` against the free algebra.
pub fn verify_equal_chain_cells(
    left: &Arc<GradedAlgebra>,
    right: &Arc<GradedAlgebra>,
    truncation: usize,
    occurrence_filter: Option<usize>,
) -> crate::report::CertificateReport {
    let mut report = crate::report::CertificateReport::new("chain-cell-comparison")
        .param("left", left.name())
        .param("right", right.name())
        .param("max_weight", truncation)
        .param(
            "occurrence_filter",
            occurrence_filter.map_or("none".to_string(), |k| k.to_string()),
        );
    let p_max = BettiTable::degree_bound(occurrence_filter);
    let mut cells = 0;
    for n in 0..=truncation {
        for p in 0..=(p_max + 1) {
            let dim_l = basis_of(left, p, n, occurrence_filter).len();
            let dim_r = basis_of(right, p, n, occurrence_filter).len();
            if dim_l != dim_r {
                report.fail(format!(
                    "dim C_{p}({n}): {} on {} vs {} on {}",
                    dim_l,
                    left.name(),
                    dim_r,
                    right.name()
                ));
                continue;
            }
            if p >= 1 && dim_l > 0 {
                let rank_l = differential_matrix(left, p, n, occurrence_filter).rank();
                let rank_r = differential_matrix(right, p, n, occurrence_filter).rank();
                if rank_l != rank_r {
                    report.fail(format!(
                        "rank d_{p}({n}): {rank_l} on {} vs {rank_r} on {}",
                        left.name(),
                        right.name()
                    ));
                }
            }
            cells += 1;
        }
    }
    if report.pass {
        report.witness(format!(
            "dimensions and differential ranks agree on {cells} cells"
        ));
    }
    report
}

/// Violations of the homology pattern expected for an algebra, used for CLI
/// exit codes. The free algebra must show H_0 = Q, H_1 = V in weight 1 and
/// nothing above it; the differential preserves occurrence, so under an
/// occurrence filter the expected entries are the filtered parts of the same
/// classes. `quot-k` (unfiltered) must show one H_2 class in every odd
/// weight >= 3 and none in even weights. Other algebras have no pinned
/// pattern.
pub fn expected_pattern_violations(table: &BettiTable, kind: AlgebraKind) -> Vec<String> {
    let mut violations = Vec::new();
    match kind {
        AlgebraKind::Free => {
            for (&(p, n), &dim) in &table.entries {
                let expected = match (p, n, table.occurrence_filter) {
                    (0, 0, None | Some(0)) => 1,
                    (1, 1, None) => 2,
                    // the occurrence-k part of the span of the generators
                    (1, 1, Some(0)) | (1, 1, Some(1)) => 1,
                    _ => 0,
                };
                if dim != expected {
                    violations.push(format!(
                        "H_{p}({n}) = {dim}, expected {expected} for the free algebra"
                    ));
                }
            }
        }
        AlgebraKind::QuotientK if table.occurrence_filter.is_none() => {
            for (&(p, n), &dim) in &table.entries {
                if p != 2 {
                    continue;
                }
                let expected = usize::from(n >= 3 && n % 2 == 1);
                if dim != expected {
                    violations.push(format!("H_2({n}) = {dim}, expected {expected} for quot-k"));
                }
            }
        }
        _ => {}
    }
    violations
}
