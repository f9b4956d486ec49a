//! Flow-up classes with smallest leading entries, flow-up bases, and the
//! basis criteria.
//!
//! The `i`-th class vanishes on `v_1..v_{i-1}`. Its leading entry is the lcm
//! of the gcds of the zero trails of `v_i`; every later entry `f_k` is the
//! canonical solution of the congruences `f_k ≡ f_t (mod m_t)`, one per
//! smaller-indexed endpoint `t` of a constraint path from `v_k`, where `m_t`
//! is the lcm of the gcds of the paths ending at `t` and `f_t = 0` for
//! `t < i`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph, Spline};
use crate::ring::{crt_solve, lcm, CongruenceSystem, RingElem, RingError};
use crate::trails::{informative_paths, TrailError, DEFAULT_PATH_LIMIT};

#[derive(Debug, Error)]
pub enum FlowUpError {
    #[error(transparent)]
    Trail(#[from] TrailError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("flow-up index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("no flow-up class of index {index} exists: zero labels force f_{index} = 0")]
    Degenerate { index: usize },
    #[error("congruences for f_{vertex} in flow-up class {index} are incompatible: {source}")]
    Incompatible {
        index: usize,
        vertex: usize,
        source: RingError,
    },
    #[error("expected {expected} splines, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("candidate {position} is not a spline: edge ({}, {}) violated", .edge.0, .edge.1)]
    NotSpline {
        position: usize,
        edge: (usize, usize),
    },
    #[error("inexact division at index {index}: the splines do not span this spline")]
    InexactDivision { index: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub path_limit: usize,
    /// Worker threads for basis construction; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            path_limit: DEFAULT_PATH_LIMIT,
            jobs: None,
        }
    }
}

/// A spline with `f_j = 0` for `j < index` and `f_index != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowUpClass {
    pub index: usize,
    pub spline: Spline,
}

impl FlowUpClass {
    pub fn leading_entry(&self) -> &RingElem {
        self.spline.entry(self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowUpBasis {
    pub classes: Vec<FlowUpClass>,
    /// Normalized product of the leading entries.
    pub q_g: RingElem,
}

impl FlowUpBasis {
    pub fn splines(&self) -> Vec<Spline> {
        self.classes.iter().map(|c| c.spline.clone()).collect()
    }

    /// `sum c_i F^(i)`.
    pub fn combine(&self, coeffs: &[RingElem]) -> Spline {
        assert_eq!(coeffs.len(), self.classes.len());
        let mut acc = self.classes[0].spline.scale(&coeffs[0]);
        for (c, class) in coeffs.iter().zip(&self.classes).skip(1) {
            acc = acc.add(&class.spline.scale(c));
        }
        acc
    }
}

fn check_index(g: &LabeledGraph, i: usize) -> Result<(), FlowUpError> {
    let n = g.vertex_count();
    if i == 0 || i > n {
        return Err(FlowUpError::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

/// The lcm of the zero-trail gcds of `v_i` (one for `i = 1`). Zero when
/// zero labels leave no nonzero choice.
pub fn smallest_leading_entry(g: &LabeledGraph, i: usize) -> Result<RingElem, FlowUpError> {
    smallest_leading_entry_with(g, i, &Settings::default())
}

pub fn smallest_leading_entry_with(
    g: &LabeledGraph,
    i: usize,
    settings: &Settings,
) -> Result<RingElem, FlowUpError> {
    check_index(g, i)?;
    if i == 1 {
        return Ok(g.ring().one());
    }
    let paths = informative_paths(g, i, settings.path_limit)?;
    Ok(lcm_of(g, paths.iter().map(|p| &p.gcd)))
}

fn lcm_of<'a>(g: &LabeledGraph, items: impl Iterator<Item = &'a RingElem>) -> RingElem {
    items.fold(g.ring().one(), |acc, x| {
        lcm(&acc, x).expect("single-ring graph")
    })
}

pub fn build_flowup(g: &LabeledGraph, i: usize) -> Result<FlowUpClass, FlowUpError> {
    build_flowup_with(g, i, &Settings::default())
}

pub fn build_flowup_with(
    g: &LabeledGraph,
    i: usize,
    settings: &Settings,
) -> Result<FlowUpClass, FlowUpError> {
    check_index(g, i)?;
    let ring = g.ring();
    if i == 1 {
        return Ok(FlowUpClass {
            index: 1,
            spline: g.trivial_spline(&ring.one()),
        });
    }
    let lead = smallest_leading_entry_with(g, i, settings)?;
    if lead.is_zero() {
        return Err(FlowUpError::Degenerate { index: i });
    }
    let n = g.vertex_count();
    let mut values = vec![ring.zero(); n + 1];
    values[i] = lead;
    for k in (i + 1)..=n {
        let mut moduli: BTreeMap<usize, RingElem> = BTreeMap::new();
        for p in informative_paths(g, k, settings.path_limit)? {
            let m = moduli.entry(p.target()).or_insert_with(|| ring.one());
            *m = lcm(m, &p.gcd).expect("single-ring graph");
        }
        let mut sys = CongruenceSystem::new(ring);
        for (t, m) in moduli {
            sys.push(values[t].clone(), m).expect("single-ring graph");
        }
        values[k] = crt_solve(&sys).map_err(|source| FlowUpError::Incompatible {
            index: i,
            vertex: k,
            source,
        })?;
    }
    values.remove(0);
    Ok(FlowUpClass {
        index: i,
        spline: Spline::new(values),
    })
}

pub fn build_basis(g: &LabeledGraph) -> Result<FlowUpBasis, FlowUpError> {
    build_basis_with(g, &Settings::default())
}

pub fn build_basis_with(g: &LabeledGraph, settings: &Settings) -> Result<FlowUpBasis, FlowUpError> {
    let n = g.vertex_count();
    let build = || -> Result<Vec<FlowUpClass>, FlowUpError> {
        (1..=n)
            .into_par_iter()
            .map(|i| build_flowup_with(g, i, settings))
            .collect()
    };
    let classes = match settings.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(build)?,
        None => build()?,
    };
    let q_g = classes
        .iter()
        .fold(g.ring().one(), |acc, c| &acc * c.leading_entry())
        .normalize();
    Ok(FlowUpBasis { classes, q_g })
}

/// `Q_G`: normalized product of the smallest leading entries.
pub fn q_element(g: &LabeledGraph) -> Result<RingElem, FlowUpError> {
    q_element_with(g, &Settings::default())
}

pub fn q_element_with(g: &LabeledGraph, settings: &Settings) -> Result<RingElem, FlowUpError> {
    let mut acc = g.ring().one();
    for i in 1..=g.vertex_count() {
        acc = &acc * &smallest_leading_entry_with(g, i, settings)?;
    }
    Ok(acc.normalize())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisFailure {
    /// Candidate `position` is not a flow-up class of that index.
    NotTriangular {
        position: usize,
        leading_index: Option<usize>,
    },
    /// The leading entry is not an associate of the smallest one.
    LeadingMismatch {
        index: usize,
        found: RingElem,
        expected: RingElem,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisReport {
    pub failures: Vec<BasisFailure>,
}

impl BasisReport {
    pub fn is_basis(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_candidates(g: &LabeledGraph, candidate: &[Spline]) -> Result<(), FlowUpError> {
    let n = g.vertex_count();
    if candidate.len() != n {
        return Err(FlowUpError::WrongCount {
            expected: n,
            found: candidate.len(),
        });
    }
    for (pos, f) in candidate.iter().enumerate() {
        if let Some(&edge) = g.spline_violations(f)?.first() {
            return Err(FlowUpError::NotSpline {
                position: pos + 1,
                edge,
            });
        }
    }
    Ok(())
}

/// Flow-up basis criterion: the `i`-th candidate is a flow-up class of
/// index `i` whose leading entry is an associate of the smallest leading
/// entry.
pub fn is_flowup_basis(g: &LabeledGraph, candidate: &[Spline]) -> Result<BasisReport, FlowUpError> {
    is_flowup_basis_with(g, candidate, &Settings::default())
}

pub fn is_flowup_basis_with(
    g: &LabeledGraph,
    candidate: &[Spline],
    settings: &Settings,
) -> Result<BasisReport, FlowUpError> {
    check_candidates(g, candidate)?;
    let mut failures = Vec::new();
    for (pos, f) in candidate.iter().enumerate() {
        let i = pos + 1;
        let lead = f.leading_index();
        if lead != Some(i) {
            failures.push(BasisFailure::NotTriangular {
                position: i,
                leading_index: lead,
            });
            continue;
        }
        let expected = smallest_leading_entry_with(g, i, settings)?;
        if !f.entry(i).is_associate(&expected) {
            failures.push(BasisFailure::LeadingMismatch {
                index: i,
                found: f.entry(i).clone(),
                expected,
            });
        }
    }
    Ok(BasisReport { failures })
}

/// Determinant by fraction-free (Bareiss) elimination. Every division is
/// exact over an integral domain.
pub fn determinant(ring: crate::ring::RingSpec, mut m: Vec<Vec<RingElem>>) -> RingElem {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    if n == 0 {
        return ring.one();
    }
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
            }
            m[i][k] = ring.zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterminantReport {
    pub holds: bool,
    pub determinant: RingElem,
    pub q_g: RingElem,
    /// Cycles, diamonds and trees; elsewhere the criterion is unproven.
    pub validated_family: bool,
}

/// True iff the determinant of the candidate matrix (column `j` is spline
/// `j`) is a nonzero associate of `Q_G`.
pub fn determinant_criterion(
    g: &LabeledGraph,
    candidate: &[Spline],
) -> Result<DeterminantReport, FlowUpError> {
    determinant_criterion_with(g, candidate, &Settings::default())
}

pub fn determinant_criterion_with(
    g: &LabeledGraph,
    candidate: &[Spline],
    settings: &Settings,
) -> Result<DeterminantReport, FlowUpError> {
    check_candidates(g, candidate)?;
    let n = g.vertex_count();
    // det(A) = det(A^T): rows may hold the splines directly
    let rows: Vec<Vec<RingElem>> = candidate.iter().map(|f| f.values().to_vec()).collect();
    debug_assert!(rows.iter().all(|r| r.len() == n));
    let det = determinant(g.ring(), rows);
    let q_g = q_element_with(g, settings)?;
    Ok(DeterminantReport {
        holds: !det.is_zero() && det.is_associate(&q_g),
        determinant: det,
        q_g,
        validated_family: g.is_cycle() || g.is_tree() || g.is_diamond(),
    })
}

/// Coefficients of `f` in a flow-up basis, by forward substitution.
pub fn decompose(
    g: &LabeledGraph,
    basis: &FlowUpBasis,
    f: &Spline,
) -> Result<Vec<RingElem>, FlowUpError> {
    g.check_len(f)?;
    let n = g.vertex_count();
    if basis.classes.len() != n {
        return Err(FlowUpError::WrongCount {
            expected: n,
            found: basis.classes.len(),
        });
    }
    let mut rest = f.clone();
    let mut coeffs = Vec::with_capacity(n);
    for (pos, class) in basis.classes.iter().enumerate() {
        let i = pos + 1;
        let c = rest
            .entry(i)
            .div_exact(class.spline.entry(i))
            .ok_or(FlowUpError::InexactDivision { index: i })?;
        rest = rest.sub(&class.spline.scale(&c));
        coeffs.push(c);
    }
    debug_assert!(rest.values().iter().all(|v| v.is_zero()));
    Ok(coeffs)
}
