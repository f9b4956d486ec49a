//! Flow-up classes on cycles.
//!
//! On a cycle every constraint path from `v_j` runs along one of the two
//! arcs to the nearest smaller-indexed vertex on that side, so each entry
//! is fixed by two congruences. For the `i`-th class the cycle is first
//! split at the nearest smaller-indexed vertices around `v_i`: the arc that
//! does not contain `v_i` is set to zero, and the two anchors merge into a
//! single zero vertex.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::flowup::{self, FlowUpClass, FlowUpError};
use crate::graph::{LabeledGraph, Spline};
use crate::ring::{egcd, gcd, inverse_mod, lcm, RingElem};

#[derive(Debug, Error)]
pub enum CycleError {
    #[error("graph is not a cycle")]
    NotACycle,
    #[error("cycle vertices are not in cyclic order 1, 2, ..., n")]
    NotOrdered,
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("the split/contract step needs index >= 3, got {0}")]
    IndexTooSmall(usize),
    #[error("no flow-up class of index {index} exists: zero labels force f_{index} = 0")]
    Degenerate { index: usize },
    #[error("arc congruences for f_{vertex} are incompatible")]
    Incompatible { vertex: usize },
    #[error(transparent)]
    FlowUp(#[from] FlowUpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    /// Indices run `1, 2, ..., n` around the cycle.
    Ordered,
    ArbitraryOrdered,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleLayout {
    /// Cyclic vertex sequence starting at 1, continuing to its smaller
    /// neighbor.
    pub order: Vec<usize>,
    /// `labels[k]` sits on the edge `order[k] -- order[k + 1 mod n]`.
    pub labels: Vec<RingElem>,
    pub kind: CycleKind,
}

impl CycleLayout {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    fn position(&self, v: usize) -> usize {
        self.order
            .iter()
            .position(|&w| w == v)
            .expect("vertex on cycle")
    }
}

pub fn classify_cycle(g: &LabeledGraph) -> Result<CycleLayout, CycleError> {
    if !g.is_cycle() {
        return Err(CycleError::NotACycle);
    }
    let n = g.vertex_count();
    let mut order = vec![1];
    let mut labels = Vec::with_capacity(n);
    let (mut prev, mut cur) = (0, 1);
    while order.len() <= n {
        // smallest unvisited neighbor first; afterwards the one we did not come from
        let &(next, e) = g
            .neighbors(cur)
            .iter()
            .find(|&&(w, _)| w != prev)
            .expect("cycle vertices have degree 2");
        labels.push(g.edge(e).label.clone());
        if next == 1 {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    if order.len() != n || labels.len() != n {
        return Err(CycleError::NotACycle);
    }
    let kind = if order.iter().enumerate().all(|(k, &v)| v == k + 1) {
        CycleKind::Ordered
    } else {
        CycleKind::ArbitraryOrdered
    };
    Ok(CycleLayout {
        order,
        labels,
        kind,
    })
}

/// The cycle left after the split/contract step for flow-up index `index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedCycle {
    pub index: usize,
    /// Surviving vertices (original indices, all `>= index`) walking from
    /// the left anchor to the right anchor; `v_index` is among them.
    pub arc: Vec<usize>,
    /// `labels[0]` joins the zero vertex to `arc[0]`, `labels[k]` joins
    /// `arc[k-1]` to `arc[k]`, and the last joins the final arc vertex back
    /// to the zero vertex.
    pub labels: Vec<RingElem>,
    /// Original edges behind `labels`, in the same order.
    pub provenance: Vec<(usize, usize)>,
    /// Nearest smaller-indexed vertices on either side of `v_index`; they
    /// merge into the zero vertex.
    pub anchors: (usize, usize),
    /// Vertices of index above `index` on the far arc, set to zero.
    pub forced_zeros: BTreeSet<usize>,
    pub original_len: usize,
}

impl ContractedCycle {
    /// The contracted cycle as a graph: vertex 1 is the zero vertex and the
    /// arc vertices follow in increasing original index. Returns the graph
    /// and, for each new vertex, its original index (0 for the zero vertex).
    /// A one-vertex arc becomes a single edge labeled with the lcm of its two
    /// edges.
    pub fn to_graph(&self) -> (LabeledGraph, Vec<usize>) {
        let mut originals = vec![0];
        let mut sorted = self.arc.clone();
        sorted.sort_unstable();
        originals.extend(&sorted);
        let renumber = |orig: usize| originals.iter().position(|&o| o == orig).unwrap() + 1;
        let ring = self.labels[0].ring();
        let edges: Vec<(usize, usize, RingElem)> = if self.arc.len() == 1 {
            let l = lcm(&self.labels[0], &self.labels[1]).expect("single ring");
            vec![(1, 2, l)]
        } else {
            let mut ends = vec![1];
            ends.extend(self.arc.iter().map(|&v| renumber(v)));
            ends.push(1);
            ends.windows(2)
                .zip(&self.labels)
                .map(|(w, l)| (w[0], w[1], l.clone()))
                .collect()
        };
        let g =
            LabeledGraph::new(ring, originals.len(), edges).expect("contracted cycle is simple");
        (g, originals)
    }
}

/// Split/contract for flow-up index `i >= 3`.
pub fn split_contract(c: &CycleLayout, i: usize) -> Result<ContractedCycle, CycleError> {
    let n = c.len();
    if i == 0 || i > n {
        return Err(CycleError::IndexOutOfRange { index: i, n });
    }
    if i < 3 {
        return Err(CycleError::IndexTooSmall(i));
    }
    let p = c.position(i);
    let at = |k: usize| c.order[k % n];
    let mut r = p + 1;
    while at(r) > i {
        r += 1;
    }
    // walk left by stepping forward from p + n
    let mut l = p + n - 1;
    while at(l) > i {
        l -= 1;
    }
    // positions l < ... < r (mod n) bound the arc through p
    let (l, r) = (l, r + n);
    let arc: Vec<usize> = (l + 1..r).map(at).collect();
    let labels = (l..r).map(|k| c.labels[k % n].clone()).collect();
    let provenance = (l..r).map(|k| (at(k), at(k + 1))).collect();
    let forced_zeros = (r + 1..l + n).map(at).filter(|&v| v > i).collect();
    Ok(ContractedCycle {
        index: i,
        arc,
        labels,
        provenance,
        anchors: (at(l), at(r)),
        forced_zeros,
        original_len: n,
    })
}

/// gcd along `labels[from..to]`.
fn gcd_range(labels: &[RingElem], from: usize, to: usize) -> RingElem {
    labels[from..to]
        .iter()
        .fold(labels[0].ring().zero(), |acc, l| {
            gcd(&acc, l).expect("single ring")
        })
}

/// Entries of the `i`-th flow-up class from the two-arc formula, expanded to
/// the original cycle.
pub fn cycle_entry_formula(cc: &ContractedCycle) -> Result<FlowUpClass, CycleError> {
    let ring = cc.labels[0].ring();
    let m = cc.arc.len();
    let i = cc.index;
    let mut values: Vec<Option<RingElem>> = vec![None; m];
    let mut by_index: Vec<usize> = (0..m).collect();
    by_index.sort_by_key(|&q| cc.arc[q]);
    for q in by_index {
        let j = cc.arc[q];
        // nearest smaller-indexed vertex to the left (or the zero vertex)
        let left = (0..q).rev().find(|&a| cc.arc[a] < j);
        let (gl, fl) = match left {
            Some(a) => (
                gcd_range(&cc.labels, a + 1, q + 1),
                values[a].clone().unwrap(),
            ),
            None => (gcd_range(&cc.labels, 0, q + 1), ring.zero()),
        };
        let right = (q + 1..m).find(|&b| cc.arc[b] < j);
        let (gr, fr) = match right {
            Some(b) => (
                gcd_range(&cc.labels, q + 1, b + 1),
                values[b].clone().unwrap(),
            ),
            None => (gcd_range(&cc.labels, q + 1, m + 1), ring.zero()),
        };
        let f = if j == i {
            let lead = lcm(&gr, &gl).expect("single ring");
            if lead.is_zero() {
                return Err(CycleError::Degenerate { index: i });
            }
            lead
        } else {
            two_arc_entry(&fr, &gr, &fl, &gl).ok_or(CycleError::Incompatible { vertex: j })?
        };
        values[q] = Some(f);
    }
    let mut out = vec![ring.zero(); cc.original_len];
    for (q, v) in values.into_iter().enumerate() {
        out[cc.arc[q] - 1] = v.unwrap();
    }
    Ok(FlowUpClass {
        index: i,
        spline: Spline::new(out),
    })
}

/// Solves `f ≡ fr (mod gr)`, `f ≡ fl (mod gl)` as
/// `f = fr + gr * (fl - fr)/d * (gr/d)^{-1} mod gl/d` with `d = (gr, gl)`,
/// reduced modulo `[gr, gl]`.
fn two_arc_entry(fr: &RingElem, gr: &RingElem, fl: &RingElem, gl: &RingElem) -> Option<RingElem> {
    let d = gcd(gr, gl).ok()?;
    if d.is_zero() {
        return (fl == fr).then(|| fr.clone());
    }
    let step = (fl - fr).div_exact(&d)?;
    let a = gr.div_exact(&d)?;
    let b = gl.div_exact(&d)?;
    let (g, inv, _) = egcd(&a, &b).ok()?;
    assert!(g.is_unit(), "cofactors of the gcd must be coprime");
    let f = fr + &(&(gr * &step) * &inv);
    Some(f.reduce_mod(&lcm(gr, gl).ok()?))
}

/// Flow-up class on an ordered cycle from the closed-form entries:
/// `f_k = [l_{k-1}, (l_k, ..., l_n)]`, then for `i > k` with
/// `G_i = (l_i, ..., l_n)`: `f_i = G_i` if `l_{i-1} / G_{i-1}` is a unit,
/// otherwise `f_i = f_{i-1} * (G_i/G_{i-1}) * (G_i/G_{i-1})^{-1}` with the
/// inverse taken modulo `l_{i-1}/G_{i-1}`. Here `l_j` labels `v_j v_{j+1}`
/// and `l_n` labels `v_n v_1`.
pub fn ordered_cycle_flowup(c: &CycleLayout, k: usize) -> Result<FlowUpClass, CycleError> {
    if c.kind != CycleKind::Ordered {
        return Err(CycleError::NotOrdered);
    }
    let n = c.len();
    if k == 0 || k > n {
        return Err(CycleError::IndexOutOfRange { index: k, n });
    }
    let ring = c.labels[0].ring();
    if k == 1 {
        return Ok(FlowUpClass {
            index: 1,
            spline: Spline::new(vec![ring.one(); n]),
        });
    }
    let l = |j: usize| &c.labels[j - 1];
    // suffix[j] = (l_j, ..., l_n), suffix[n + 1] = 0
    let mut suffix = vec![ring.zero(); n + 2];
    for j in (1..=n).rev() {
        suffix[j] = gcd(l(j), &suffix[j + 1]).expect("single ring");
    }
    let mut f = vec![ring.zero(); n + 1];
    f[k] = lcm(l(k - 1), &suffix[k]).expect("single ring");
    if f[k].is_zero() {
        return Err(CycleError::Degenerate { index: k });
    }
    for i in k + 1..=n {
        let prev_g = &suffix[i - 1];
        let ratio = if prev_g.is_zero() {
            None
        } else {
            l(i - 1).div_exact(prev_g)
        };
        f[i] = match ratio {
            Some(m) if !m.is_unit() => {
                let a = suffix[i].div_exact(prev_g).expect("suffix gcds divide");
                let inv = inverse_mod(&a, &m)
                    .expect("single ring")
                    .ok_or(CycleError::Incompatible { vertex: i })?;
                &(&f[i - 1] * &a) * &inv
            }
            _ => suffix[i].clone(),
        };
    }
    f.remove(0);
    Ok(FlowUpClass {
        index: k,
        spline: Spline::new(f),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Constraint paths and CRT, as for any graph.
    General,
    /// Split/contract plus the two-arc formula.
    Formula,
    /// Closed form for ordered cycles.
    Ordered,
}

/// The `i`-th flow-up class of a cycle by the chosen method. Indices 1 and
/// 2 go to the general construction under [`Method::Formula`].
pub fn cycle_flowup(g: &LabeledGraph, i: usize, method: Method) -> Result<FlowUpClass, CycleError> {
    let layout = classify_cycle(g)?;
    match method {
        Method::General => Ok(flowup::build_flowup(g, i)?),
        Method::Formula if i < 3 => Ok(flowup::build_flowup(g, i)?),
        Method::Formula => cycle_entry_formula(&split_contract(&layout, i)?),
        Method::Ordered => ordered_cycle_flowup(&layout, i),
    }
}
