//! Brute-force ground truth for small integer instances.
//!
//! Everything here works on residue vectors. Splines modulo `M` (a multiple
//! of every nonzero label) are the solutions of the edge congruences over
//! `Z/M`, and by the CRT that solution set is the product of its
//! `p`-primary parts. Searches therefore run once per prime power `q || M`
//! with labels replaced by `(l, q)`, which keeps the spaces tiny. A zero
//! label forces exact equality; for leading entries such edges are merged
//! first so that `M Z^n` lies inside the spline module of the quotient.

use std::cell::Cell;
use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cycle::{self, CycleError};
use crate::flowup::{self, FlowUpError};
use crate::graph::{LabeledGraph, Spline};
use crate::ring::{RingElem, RingSpec};
use crate::trails::{self, TrailError};

/// Default cap on the number of residue vectors a search may range over.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("the oracle only handles graphs over Z, got {0}")]
    NotIntegers(RingSpec),
    #[error("label {0} does not fit in 64 bits")]
    LabelTooLarge(String),
    #[error("search space of {size} exceeds the budget of {budget}")]
    SearchSpaceTooLarge { size: String, budget: u64 },
    #[error("no flow-up class of index {index}: zero labels tie v_{index} to a lower vertex")]
    NoFlowUpFound { index: usize },
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("this check needs nonzero labels")]
    ZeroLabel,
    #[error("graph has more than 64 edges")]
    TooManyEdges,
    #[error(transparent)]
    Trail(#[from] TrailError),
    #[error(transparent)]
    FlowUp(#[from] FlowUpError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub check: String,
    pub instance: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub computed: String,
    pub oracle: String,
    pub agree: bool,
    pub search_space: u64,
}

fn describe(g: &LabeledGraph) -> String {
    format!(
        "{} graph, {} vertices, {} edges",
        g.ring(),
        g.vertex_count(),
        g.edges().len()
    )
}

/// `(u, v, |label|)` with 0-based vertices.
fn int_edges(g: &LabeledGraph) -> Result<Vec<(usize, usize, u64)>, OracleError> {
    if g.ring() != RingSpec::Integers {
        return Err(OracleError::NotIntegers(g.ring()));
    }
    g.edges()
        .iter()
        .map(|e| {
            let l = e
                .label
                .as_bigint()
                .expect("integer label")
                .magnitude()
                .to_u64();
            l.map(|l| (e.u - 1, e.v - 1, l))
                .ok_or_else(|| OracleError::LabelTooLarge(e.label.to_string()))
        })
        .collect()
}

fn lcm_nonzero(labels: impl IntoIterator<Item = u64>) -> Result<u64, OracleError> {
    labels
        .into_iter()
        .filter(|&l| l != 0)
        .try_fold(1u64, |acc, l| {
            let g = acc.gcd(&l);
            (acc / g)
                .checked_mul(l)
                .ok_or_else(|| OracleError::LabelTooLarge(format!("lcm {acc} * {l} / {g}")))
        })
}

/// `(p, p^e)` for each prime power exactly dividing `m`.
fn prime_powers(mut m: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut q = 1;
            while m.is_multiple_of(p) {
                m /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, m));
    }
    out
}

fn checked_space(base: u64, exp: usize) -> u64 {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .unwrap_or(u64::MAX)
}

/// Counts candidate values tried across searches and stops them once the
/// budget is spent.
struct Meter {
    budget: u64,
    used: Cell<u64>,
}

impl Meter {
    fn new(budget: u64) -> Self {
        Meter {
            budget,
            used: Cell::new(0),
        }
    }

    fn tick(&self) -> Result<(), OracleError> {
        let used = self.used.get() + 1;
        self.used.set(used);
        if used > self.budget {
            return Err(OracleError::SearchSpaceTooLarge {
                size: format!("more than {} candidates", self.budget),
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn used(&self) -> u64 {
        self.used.get()
    }
}

/// Backtracking search over vectors in `[0, size)^n` with integer
/// divisibility constraints; modulus 0 means equality.
struct Search<'m> {
    size: u64,
    adj: Vec<Vec<(usize, u64)>>,
    meter: &'m Meter,
}

impl<'m> Search<'m> {
    fn new(
        meter: &'m Meter,
        size: u64,
        n: usize,
        constraints: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v, m) in constraints {
            if m == 1 || u == v {
                continue;
            }
            adj[u].push((v, m));
            adj[v].push((u, m));
        }
        Search { size, adj, meter }
    }

    fn ok(a: u64, b: u64, m: u64) -> bool {
        if m == 0 {
            a == b
        } else {
            a.abs_diff(b).is_multiple_of(m)
        }
    }

    /// Calls `visit` on every solution agreeing with `fixed`; stops early
    /// when `visit` returns false. Returns whether the search ran to the end.
    fn run(
        &self,
        fixed: &[Option<u64>],
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> Result<bool, OracleError> {
        let n = self.adj.len();
        let mut order: Vec<usize> = (0..n).filter(|&v| fixed[v].is_some()).collect();
        order.extend((0..n).filter(|&v| fixed[v].is_none()));
        let mut vals = vec![0u64; n];
        let mut set = vec![false; n];
        self.step(&order, 0, fixed, &mut vals, &mut set, visit)
    }

    fn step(
        &self,
        order: &[usize],
        pos: usize,
        fixed: &[Option<u64>],
        vals: &mut Vec<u64>,
        set: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[u64]) -> bool,
    ) -> Result<bool, OracleError> {
        let Some(&v) = order.get(pos) else {
            return Ok(visit(vals));
        };
        // the tightest assigned neighbor fixes an arithmetic progression
        let anchor = self.adj[v]
            .iter()
            .filter(|&&(w, _)| set[w])
            .max_by_key(|&&(_, m)| if m == 0 { u64::MAX } else { m });
        let (start, stride) = match (fixed[v], anchor) {
            (Some(c), _) => (c, u64::MAX),
            (None, Some(&(w, 0))) => (vals[w], u64::MAX),
            (None, Some(&(w, m))) => (vals[w] % m, m),
            (None, None) => (0, 1),
        };
        let mut c = start;
        while c < self.size {
            self.meter.tick()?;
            if self.adj[v]
                .iter()
                .all(|&(w, m)| !set[w] || Self::ok(c, vals[w], m))
            {
                vals[v] = c;
                set[v] = true;
                let go_on = self.step(order, pos + 1, fixed, vals, set, visit)?;
                set[v] = false;
                if !go_on {
                    return Ok(false);
                }
            }
            match c.checked_add(stride) {
                Some(next) => c = next,
                None => break,
            }
        }
        Ok(true)
    }
}

/// All vectors in `{0..M-1}^n` that are splines, in lexicographic order.
/// `M` defaults to the lcm of the nonzero labels.
pub fn enumerate_splines_mod(
    g: &LabeledGraph,
    modulus: Option<u64>,
    budget: u64,
) -> Result<Vec<Spline>, OracleError> {
    let edges = int_edges(g)?;
    let m = match modulus {
        Some(m) => m,
        None => lcm_nonzero(edges.iter().map(|e| e.2))?,
    };
    let n = g.vertex_count();
    let space = checked_space(m, n);
    if space > budget {
        return Err(OracleError::SearchSpaceTooLarge {
            size: format!("{} vectors", space_string(m, n)),
            budget,
        });
    }
    let meter = Meter::new(u64::MAX);
    let search = Search::new(&meter, m, n, edges);
    let mut found: Vec<Vec<u64>> = Vec::new();
    search.run(&vec![None; n], &mut |v| {
        found.push(v.to_vec());
        true
    })?;
    found.sort();
    Ok(found
        .into_iter()
        .map(|v| {
            Spline::new(
                v.into_iter()
                    .map(|x| RingSpec::Integers.from_bigint(&x.into()))
                    .collect(),
            )
        })
        .collect())
}

fn space_string(m: u64, n: usize) -> String {
    BigUint::from(m).pow(n as u32).to_string()
}

/// Number of splines modulo the lcm `M` of the labels, counted one prime
/// power at a time. Returns `(M, count, search space)`.
pub fn count_splines_mod(
    g: &LabeledGraph,
    budget: u64,
) -> Result<(u64, BigUint, u64), OracleError> {
    let edges = int_edges(g)?;
    let m = lcm_nonzero(edges.iter().map(|e| e.2))?;
    let n = g.vertex_count();
    let pp = prime_powers(m);
    let meter = Meter::new(budget);
    let mut count = BigUint::one();
    for &(_, q) in &pp {
        let search = Search::new(&meter, q, n, local_edges(&edges, q));
        let mut local = 0u64;
        search.run(&vec![None; n], &mut |_| {
            local += 1;
            true
        })?;
        count *= local;
    }
    Ok((m, count, meter.used()))
}

fn local_edges(
    edges: &[(usize, usize, u64)],
    q: u64,
) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
    edges.iter().map(move |&(u, v, l)| (u, v, l.gcd(&q)))
}

/// Union-find classes of the zero-labeled edges, numbered by first member.
fn zero_classes(n: usize, edges: &[(usize, usize, u64)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(u, v, l) in edges {
        if l == 0 {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    roots
        .iter()
        .map(|&r| {
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            ids[r]
        })
        .collect()
}

/// Smallest positive `f_i` over splines with `f_1 = ... = f_{i-1} = 0`,
/// found by exhaustive search. Returns the value and the search space.
pub fn oracle_min_leading_entry(
    g: &LabeledGraph,
    i: usize,
    budget: u64,
) -> Result<(u64, u64), OracleError> {
    let n = g.vertex_count();
    if i == 0 || i > n {
        return Err(OracleError::IndexOutOfRange { index: i, n });
    }
    let edges = int_edges(g)?;
    let class = zero_classes(n, &edges);
    let classes = class.iter().max().map_or(0, |c| c + 1);
    if (0..i - 1).any(|j| class[j] == class[i - 1]) {
        return Err(OracleError::NoFlowUpFound { index: i });
    }
    let quotient: Vec<(usize, usize, u64)> = edges
        .iter()
        .filter(|e| e.2 != 0 && class[e.0] != class[e.1])
        .map(|&(u, v, l)| (class[u], class[v], l))
        .collect();
    let mut fixed = vec![None; classes];
    for j in 0..i - 1 {
        fixed[class[j]] = Some(0);
    }
    let target = class[i - 1];
    let m = lcm_nonzero(quotient.iter().map(|e| e.2))?;
    let meter = Meter::new(budget);
    let mut lead = 1u64;
    for (_, q) in prime_powers(m) {
        let search = Search::new(&meter, q, classes, local_edges(&quotient, q));
        let mut smallest = q;
        for c in 1..q {
            let mut fx = fixed.clone();
            fx[target] = Some(c);
            let mut any = false;
            search.run(&fx, &mut |_| {
                any = true;
                false
            })?;
            if any {
                smallest = c;
                break;
            }
        }
        lead *= smallest;
    }
    Ok((lead, meter.used()))
}

pub fn check_min_leading(
    g: &LabeledGraph,
    i: usize,
    budget: u64,
) -> Result<OracleReport, OracleError> {
    // a zero lead means no flow-up class exists
    let computed = flowup::smallest_leading_entry(g, i).and_then(|c| {
        if c.is_zero() {
            Err(FlowUpError::Degenerate { index: i })
        } else {
            Ok(c)
        }
    });
    let oracle = oracle_min_leading_entry(g, i, budget);
    let (computed, oracle, agree, space) = match (computed, oracle) {
        (Ok(c), Ok((o, s))) => {
            let agree = c.is_associate(&RingSpec::Integers.from_bigint(&o.into()));
            (c.to_string(), o.to_string(), agree, s)
        }
        (Err(FlowUpError::Degenerate { .. }), Err(OracleError::NoFlowUpFound { .. })) => {
            ("none".into(), "none".into(), true, 0)
        }
        (Err(FlowUpError::Degenerate { .. }), Ok((o, s))) => {
            ("none".into(), o.to_string(), false, s)
        }
        (Ok(c), Err(OracleError::NoFlowUpFound { .. })) => (c.to_string(), "none".into(), false, 0),
        (Err(e), _) => return Err(e.into()),
        (_, Err(e)) => return Err(e),
    };
    Ok(OracleReport {
        check: "min-leading".into(),
        instance: describe(g),
        index: Some(i),
        computed,
        oracle,
        agree,
        search_space: space,
    })
}

/// Spline count modulo `M` against `M^n / Q_G` from the flow-up basis.
pub fn check_spline_count(g: &LabeledGraph, budget: u64) -> Result<OracleReport, OracleError> {
    let edges = int_edges(g)?;
    if edges.iter().any(|e| e.2 == 0) {
        return Err(OracleError::ZeroLabel);
    }
    let (m, count, space) = count_splines_mod(g, budget)?;
    let q = flowup::q_element(g)?;
    let q = q.as_bigint().expect("integer").magnitude().clone();
    let expected = BigUint::from(m).pow(g.vertex_count() as u32) / q;
    Ok(OracleReport {
        check: "spline-count".into(),
        instance: format!("{}, M = {m}", describe(g)),
        index: None,
        agree: expected == count,
        computed: expected.to_string(),
        oracle: count.to_string(),
        search_space: space,
    })
}

/// `(target, gcd)` for every edge-distinct walk from `s` that ends at a
/// vertex of smaller index (0-based vertices).
fn all_trail_congruences(
    n: usize,
    edges: &[(usize, usize, u64)],
    s: usize,
) -> BTreeSet<(usize, u64)> {
    let mut adj = vec![Vec::new(); n];
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        adj[u].push((v, k));
        adj[v].push((u, k));
    }
    let mut out = BTreeSet::new();
    let mut seen = HashSet::new();
    let mut stack = vec![(s, 0u64, 0u64)];
    while let Some((v, used, g)) = stack.pop() {
        if !seen.insert((v, used, g)) {
            continue;
        }
        if v < s && used != 0 {
            out.insert((v, g));
        }
        for &(w, k) in &adj[v] {
            if used & (1 << k) == 0 {
                stack.push((w, used | (1 << k), g.gcd(&edges[k].2)));
            }
        }
    }
    out
}

/// Pruned constraint paths against all trails: for every `k`, the
/// congruences from sources `s <= k` have the same solutions in
/// `f_1..f_k`. Reports the number of pruned-system solutions that violate
/// some trail congruence.
pub fn check_trails_equivalence(
    g: &LabeledGraph,
    budget: u64,
) -> Result<OracleReport, OracleError> {
    let edges = int_edges(g)?;
    if edges.len() > 64 {
        return Err(OracleError::TooManyEdges);
    }
    let n = g.vertex_count();
    let m = lcm_nonzero(edges.iter().map(|e| e.2))?;
    let pp = prime_powers(m);
    let mut pruned: Vec<(usize, usize, u64)> = Vec::new();
    let mut all: Vec<(usize, usize, u64)> = Vec::new();
    let meter = Meter::new(budget);
    let mut violations = 0u64;
    let mut solutions = 0u64;
    for k in 1..=n {
        for p in trails::constraint_paths(g, k)? {
            let l = p
                .gcd
                .as_bigint()
                .expect("integer")
                .magnitude()
                .to_u64()
                .unwrap_or(0);
            pruned.push((k - 1, p.target() - 1, l));
        }
        all.extend(
            all_trail_congruences(n, &edges, k - 1)
                .into_iter()
                .map(|(t, l)| (k - 1, t, l)),
        );
        for &(_, q) in &pp {
            let search = Search::new(&meter, q, k, local_edges(&pruned, q));
            let checks: Vec<(usize, usize, u64)> = local_edges(&all, q).collect();
            search.run(&vec![None; k], &mut |f| {
                solutions += 1;
                if !checks.iter().all(|&(u, v, l)| Search::ok(f[u], f[v], l)) {
                    violations += 1;
                }
                true
            })?;
        }
    }
    Ok(OracleReport {
        check: "trails-equivalence".into(),
        instance: describe(g),
        index: None,
        computed: format!("{solutions} pruned-system solutions"),
        oracle: format!("{violations} violate an all-trails congruence"),
        agree: violations == 0,
        search_space: meter.used(),
    })
}

/// Split/contract on a cycle keeps the index-`i` classes: splines vanishing
/// below `i` and on the far arc, restricted to the near arc, coincide with
/// splines on the contracted cycle vanishing at its zero vertex; dropping the
/// far-arc zeros gives the same restriction.
pub fn check_contraction(
    g: &LabeledGraph,
    i: usize,
    budget: u64,
) -> Result<OracleReport, OracleError> {
    let edges = int_edges(g)?;
    let n = g.vertex_count();
    let layout = cycle::classify_cycle(g)?;
    let cc = cycle::split_contract(&layout, i)?;
    let (small, originals) = cc.to_graph();
    let small_edges = int_edges(&small)?;
    let m = lcm_nonzero(edges.iter().map(|e| e.2))?;
    let pp = prime_powers(m);
    let meter = Meter::new(budget);
    let arc: Vec<usize> = originals[1..].to_vec();
    let mut agree = true;
    let mut sizes = (0usize, 0usize);
    for &(_, q) in &pp {
        let restrict = |forced: bool| {
            let search = Search::new(&meter, q, n, local_edges(&edges, q));
            let mut fixed = vec![None; n];
            for f in &mut fixed[..i - 1] {
                *f = Some(0);
            }
            if forced {
                for &z in &cc.forced_zeros {
                    fixed[z - 1] = Some(0);
                }
            }
            let mut set = BTreeSet::new();
            search.run(&fixed, &mut |f| {
                set.insert(arc.iter().map(|&v| f[v - 1]).collect::<Vec<_>>());
                true
            })?;
            Ok::<_, OracleError>(set)
        };
        let with_zeros = restrict(true)?;
        let without = restrict(false)?;
        let search = Search::new(&meter, q, originals.len(), local_edges(&small_edges, q));
        let mut fixed = vec![None; originals.len()];
        fixed[0] = Some(0);
        let mut contracted = BTreeSet::new();
        search.run(&fixed, &mut |f| {
            contracted.insert(f[1..].to_vec());
            true
        })?;
        agree &= with_zeros == contracted && without == contracted;
        sizes.0 += with_zeros.len();
        sizes.1 += contracted.len();
    }
    Ok(OracleReport {
        check: "contraction".into(),
        instance: describe(g),
        index: Some(i),
        computed: format!("{} local classes on the contracted cycle", sizes.1),
        oracle: format!("{} local classes on the original cycle", sizes.0),
        agree,
        search_space: meter.used(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Tree,
    Cycle,
    General,
}

/// Random connected graph over Z with labels drawn from `labels` and
/// vertex indices shuffled.
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    topology: Topology,
    labels: std::ops::RangeInclusive<i64>,
) -> LabeledGraph {
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    match topology {
        Topology::Cycle if n >= 3 => {
            for k in 0..n {
                pairs.insert(key(perm[k], perm[(k + 1) % n]));
            }
        }
        _ => {
            for k in 1..n {
                let parent = perm[rng.gen_range(0..k)];
                pairs.insert(key(perm[k], parent));
            }
            if topology == Topology::General {
                for a in 1..=n {
                    for b in a + 1..=n {
                        if rng.gen_bool(0.3) {
                            pairs.insert((a, b));
                        }
                    }
                }
            }
        }
    }
    let edges: Vec<(usize, usize, RingElem)> = pairs
        .into_iter()
        .map(|(a, b)| (a, b, RingSpec::Integers.int(rng.gen_range(labels.clone()))))
        .collect();
    LabeledGraph::new(RingSpec::Integers, n, edges).expect("random graph is valid")
}

/// Random topology mix used by the self-test and the acceptance suite.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_n: usize,
    labels: std::ops::RangeInclusive<i64>,
) -> LabeledGraph {
    let n = rng.gen_range(2..=max_n);
    let topology = match rng.gen_range(0..3) {
        0 => Topology::Tree,
        1 if n >= 3 => Topology::Cycle,
        _ => Topology::General,
    };
    random_graph(rng, n, topology, labels)
}

/// Residue vector as integer ring elements; handy for tests.
pub fn spline_from_u64(values: &[u64]) -> Spline {
    Spline::new(
        values
            .iter()
            .map(|&v| RingSpec::Integers.from_bigint(&v.into()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zgraph(n: usize, edges: &[(usize, usize, i64)]) -> LabeledGraph {
        LabeledGraph::new(
            RingSpec::Integers,
            n,
            edges
                .iter()
                .map(|&(u, v, l)| (u, v, RingSpec::Integers.int(l))),
        )
        .unwrap()
    }

    fn contracted_c4() -> LabeledGraph {
        zgraph(4, &[(1, 2, 8), (2, 4, 9), (4, 3, 6), (3, 1, 5)])
    }

    #[test]
    fn single_edge_enumeration() {
        let g = zgraph(2, &[(1, 2, 2)]);
        let s = enumerate_splines_mod(&g, Some(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(s, vec![spline_from_u64(&[0, 0]), spline_from_u64(&[1, 1])]);
    }

    #[test]
    fn triangle_constants() {
        let g = zgraph(3, &[(1, 2, 2), (2, 3, 2), (1, 3, 2)]);
        let s = enumerate_splines_mod(&g, None, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            s,
            vec![spline_from_u64(&[0, 0, 0]), spline_from_u64(&[1, 1, 1])]
        );
    }

    #[test]
    fn budget_is_enforced() {
        let g = contracted_c4();
        assert!(matches!(
            enumerate_splines_mod(&g, None, DEFAULT_BUDGET),
            Err(OracleError::SearchSpaceTooLarge { .. })
        ));
        assert!(oracle_min_leading_entry(&g, 4, 10).is_err());
    }

    #[test]
    fn non_integer_ring_rejected() {
        let g = LabeledGraph::new(
            RingSpec::RationalPoly,
            2,
            [(1, 2, RingSpec::RationalPoly.var().unwrap())],
        )
        .unwrap();
        assert!(matches!(
            oracle_min_leading_entry(&g, 2, 100),
            Err(OracleError::NotIntegers(_))
        ));
    }

    #[test]
    fn contracted_cycle_leads() {
        let g = contracted_c4();
        let leads: Vec<u64> = (1..=4)
            .map(|i| oracle_min_leading_entry(&g, i, DEFAULT_BUDGET).unwrap().0)
            .collect();
        assert_eq!(leads, vec![1, 8, 15, 18]);
        let g = zgraph(2, &[(1, 2, 12)]);
        assert_eq!(
            oracle_min_leading_entry(&g, 2, DEFAULT_BUDGET).unwrap().0,
            12
        );
    }

    #[test]
    fn spline_count_matches_lattice_index() {
        let r = check_spline_count(&contracted_c4(), DEFAULT_BUDGET).unwrap();
        // 360^4 / (1 * 8 * 15 * 18)
        assert_eq!(r.oracle, "7776000");
        assert!(r.agree);
        // the raw enumeration agrees where it is small enough
        let g = zgraph(3, &[(1, 2, 4), (2, 3, 6), (1, 3, 2)]);
        let raw = enumerate_splines_mod(&g, None, DEFAULT_BUDGET)
            .unwrap()
            .len();
        assert_eq!(
            count_splines_mod(&g, DEFAULT_BUDGET).unwrap().1,
            BigUint::from(raw)
        );
    }

    #[test]
    fn zero_labels() {
        let g = zgraph(3, &[(1, 3, 0), (2, 3, 4)]);
        assert!(matches!(
            oracle_min_leading_entry(&g, 3, 100),
            Err(OracleError::NoFlowUpFound { index: 3 })
        ));
        let r = check_min_leading(&g, 3, 100).unwrap();
        assert!(r.agree);
        assert_eq!(oracle_min_leading_entry(&g, 2, 100).unwrap().0, 4);
        let g = zgraph(3, &[(1, 2, 6), (2, 3, 0)]);
        assert_eq!(oracle_min_leading_entry(&g, 2, 100).unwrap().0, 6);
        assert!(matches!(
            check_spline_count(&g, 100),
            Err(OracleError::ZeroLabel)
        ));
    }

    #[test]
    fn all_trails_of_a_triangle() {
        // 0-based triangle; trails from 2: direct edges and the two-edge detours
        let edges = [(0, 1, 4), (1, 2, 6), (0, 2, 10)];
        let c = all_trail_congruences(3, &edges, 2);
        assert_eq!(c, BTreeSet::from([(0, 2), (0, 10), (1, 2), (1, 6)]));
    }

    #[test]
    fn contraction_on_eight_cycle() {
        let g = zgraph(
            8,
            &[
                (1, 4, 8),
                (4, 8, 9),
                (8, 6, 6),
                (6, 3, 5),
                (3, 7, 5),
                (7, 5, 4),
                (5, 2, 12),
                (2, 1, 7),
            ],
        );
        for i in 3..=8 {
            assert!(
                check_contraction(&g, i, DEFAULT_BUDGET).unwrap().agree,
                "i = {i}"
            );
        }
    }

    #[test]
    fn random_graphs_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let g = random_instance(&mut rng, 5, 0..=12);
            for i in 1..=g.vertex_count() {
                let r = check_min_leading(&g, i, DEFAULT_BUDGET).unwrap();
                assert!(r.agree, "{}\n{r:?}", g.to_json());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn enumeration_closed_under_addition(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_instance(&mut rng, 3, 1..=6);
            let all = enumerate_splines_mod(&g, None, DEFAULT_BUDGET).unwrap();
            let m = lcm_nonzero(int_edges(&g).unwrap().iter().map(|e| e.2)).unwrap();
            let set: HashSet<Vec<u64>> = all
                .iter()
                .map(|s| s.values().iter().map(|v| v.as_bigint().unwrap().to_u64().unwrap()).collect())
                .collect();
            for a in &set {
                for b in set.iter().take(8) {
                    let sum: Vec<u64> = a.iter().zip(b).map(|(x, y)| (x + y) % m).collect();
                    prop_assert!(set.contains(&sum));
                }
            }
        }

        #[test]
        fn trails_equivalence_small_graphs(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_instance(&mut rng, 6, 0..=8);
            let r = check_trails_equivalence(&g, DEFAULT_BUDGET).unwrap();
            prop_assert!(r.agree, "{}", g.to_json());
        }

        #[test]
        fn contraction_random_cycles(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=8);
            let g = random_graph(&mut rng, n, Topology::Cycle, 0..=10);
            for i in 3..=n {
                let r = check_contraction(&g, i, DEFAULT_BUDGET).unwrap();
                prop_assert!(r.agree, "i = {} {}", i, g.to_json());
            }
        }
    }
}
