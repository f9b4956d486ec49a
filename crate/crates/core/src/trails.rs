//! Constraint paths.
//!
//! For a vertex `v_k`, a constraint path is a simple path that leaves `v_k`,
//! travels only through vertices of index greater than `k`, and stops at the
//! first vertex of index smaller than `k`. The gcd of its edge labels bounds
//! how far `f_k` may differ from the value at the endpoint. Trails that
//! repeat a vertex contain a shorter path with the same endpoints and a
//! coarser gcd, and trails that pass through a smaller-indexed vertex are
//! implied by their prefix up to that vertex, so these paths carry all the
//! constraints.

use thiserror::Error;

use crate::graph::LabeledGraph;
use crate::ring::{gcd, RingElem};

pub const DEFAULT_PATH_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrailError {
    #[error("more than {limit} constraint paths from vertex {vertex}")]
    PathLimitExceeded { vertex: usize, limit: usize },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintPath {
    /// Vertex sequence from the source to the target.
    pub vertices: Vec<usize>,
    /// Edge indices into [`LabeledGraph::edges`], in path order.
    pub edges: Vec<usize>,
    pub edge_labels: Vec<RingElem>,
    /// Normalized gcd of `edge_labels`.
    pub gcd: RingElem,
}

impl ConstraintPath {
    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    /// `l: [9,6,5] gcd=1 target=4`; targets below `zero_below` print as 0.
    pub fn describe(&self, zero_below: Option<usize>) -> String {
        let labels: Vec<String> = self.edge_labels.iter().map(|l| l.to_string()).collect();
        let target = match zero_below {
            Some(i) if self.target() < i => 0,
            _ => self.target(),
        };
        format!(
            "l: [{}] gcd={} target={}",
            labels.join(","),
            self.gcd,
            target
        )
    }
}

struct Walker<'g> {
    g: &'g LabeledGraph,
    source: usize,
    skip_units: bool,
    limit: usize,
    on_path: Vec<bool>,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    out: Vec<ConstraintPath>,
}

impl Walker<'_> {
    fn visit(&mut self, v: usize, running: &RingElem) -> Result<(), TrailError> {
        let g = self.g;
        for &(w, e) in g.neighbors(v) {
            if self.on_path[w] {
                continue;
            }
            let d = gcd(running, &g.edge(e).label).expect("single-ring graph");
            if self.skip_units && d.is_unit() {
                continue;
            }
            self.vertices.push(w);
            self.edges.push(e);
            if w < self.source {
                if self.out.len() == self.limit {
                    return Err(TrailError::PathLimitExceeded {
                        vertex: self.source,
                        limit: self.limit,
                    });
                }
                self.out.push(ConstraintPath {
                    vertices: self.vertices.clone(),
                    edges: self.edges.clone(),
                    edge_labels: self
                        .edges
                        .iter()
                        .map(|&i| g.edge(i).label.clone())
                        .collect(),
                    gcd: d,
                });
            } else {
                self.on_path[w] = true;
                self.visit(w, &d)?;
                self.on_path[w] = false;
            }
            self.vertices.pop();
            self.edges.pop();
        }
        Ok(())
    }
}

fn walk(
    g: &LabeledGraph,
    k: usize,
    skip_units: bool,
    limit: usize,
) -> Result<Vec<ConstraintPath>, TrailError> {
    let n = g.vertex_count();
    if k == 0 || k > n {
        return Err(TrailError::VertexOutOfRange { vertex: k, n });
    }
    let mut w = Walker {
        g,
        source: k,
        skip_units,
        limit,
        on_path: vec![false; n + 1],
        vertices: vec![k],
        edges: Vec::new(),
        out: Vec::new(),
    };
    w.on_path[k] = true;
    w.visit(k, &g.ring().zero())?;
    Ok(w.out)
}

/// All constraint paths from `v_k`, in lexicographic order of their vertex
/// sequences. Vertex 1 has none.
pub fn constraint_paths(g: &LabeledGraph, k: usize) -> Result<Vec<ConstraintPath>, TrailError> {
    constraint_paths_with_limit(g, k, DEFAULT_PATH_LIMIT)
}

pub fn constraint_paths_with_limit(
    g: &LabeledGraph,
    k: usize,
    limit: usize,
) -> Result<Vec<ConstraintPath>, TrailError> {
    walk(g, k, false, limit)
}

/// Constraint paths whose gcd is not a unit. A unit gcd constrains nothing
/// and so does every extension of a unit-gcd prefix, so whole subtrees are
/// skipped.
pub fn informative_paths(
    g: &LabeledGraph,
    k: usize,
    limit: usize,
) -> Result<Vec<ConstraintPath>, TrailError> {
    walk(g, k, true, limit)
}

/// gcds of the zero trails of `v_i`: the constraint paths from `v_i`, all
/// of which end at a vertex that is zero in an `i`-th flow-up class.
/// Duplicates are kept.
pub fn zero_trail_gcds(g: &LabeledGraph, i: usize) -> Result<Vec<RingElem>, TrailError> {
    Ok(constraint_paths(g, i)?.into_iter().map(|p| p.gcd).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{gcd_all, RingSpec};
    use proptest::prelude::*;

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

    fn label_seqs(paths: &[ConstraintPath]) -> Vec<Vec<String>> {
        paths
            .iter()
            .map(|p| p.edge_labels.iter().map(|l| l.to_string()).collect())
            .collect()
    }

    /// Five-vertex graph with six zero trails from `v_3`. Edge `l_k`
    /// carries the integer label `10 + k` so label sequences name the
    /// edges: l7 = v3v5, l4 = v5v1, l6 = v3v4, l5 = v4v5, l3 = v4v1,
    /// l2 = v4v2, l1 = v1v2.
    fn zero_trail_example() -> LabeledGraph {
        zgraph(
            5,
            &[
                (1, 2, 11),
                (2, 4, 12),
                (1, 4, 13),
                (1, 5, 14),
                (4, 5, 15),
                (3, 4, 16),
                (3, 5, 17),
            ],
        )
    }

    #[test]
    fn zero_trails_of_five_vertex_example() {
        let g = zero_trail_example();
        let mut got = label_seqs(&constraint_paths(&g, 3).unwrap());
        got.sort();
        let mut want: Vec<Vec<String>> = [
            vec!["17", "14"],
            vec!["17", "15", "13"],
            vec!["17", "15", "12"],
            vec!["16", "13"],
            vec!["16", "12"],
            vec!["16", "15", "14"],
        ]
        .iter()
        .map(|v| v.iter().map(|s| s.to_string()).collect())
        .collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn contracted_four_cycle() {
        // zero vertex 1, then v4 -> 2, v6 -> 3, v8 -> 4
        let g = zgraph(4, &[(1, 2, 8), (2, 4, 9), (3, 4, 6), (1, 3, 5)]);
        let paths = constraint_paths(&g, 3).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(
            (paths[0].target(), paths[0].gcd.to_string()),
            (1, "5".into())
        );
        assert_eq!(paths[1].vertices, vec![3, 4, 2]);
        assert_eq!(paths[1].gcd.to_string(), "3");
        let gcds: Vec<String> = zero_trail_gcds(&g, 2)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(gcds, vec!["8", "1"]);
        assert_eq!(paths[1].describe(None), "l: [6,9] gcd=3 target=2");
        assert_eq!(paths[1].describe(Some(3)), "l: [6,9] gcd=3 target=0");
    }

    #[test]
    fn path_graph_and_first_vertex() {
        let g = zgraph(3, &[(1, 2, 4), (2, 3, 6)]);
        let p = constraint_paths(&g, 3).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].vertices, vec![3, 2]);
        assert!(constraint_paths(&g, 1).unwrap().is_empty());
        assert!(matches!(
            constraint_paths(&g, 4),
            Err(TrailError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn star_center_last() {
        let g = zgraph(5, &[(1, 5, 2), (2, 5, 3), (3, 5, 4), (4, 5, 7)]);
        let gcds: Vec<String> = zero_trail_gcds(&g, 5)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(gcds, vec!["2", "3", "4", "7"]);
    }

    #[test]
    fn path_limit_is_enforced() {
        let mut edges = Vec::new();
        for u in 1..=7 {
            for v in (u + 1)..=7 {
                edges.push((u, v, 2));
            }
        }
        let g = zgraph(7, &edges);
        assert!(matches!(
            constraint_paths_with_limit(&g, 1 + 1, 10),
            Err(TrailError::PathLimitExceeded {
                vertex: 2,
                limit: 10
            })
        ));
        assert!(constraint_paths_with_limit(&g, 2, 100_000).is_ok());
    }

    #[test]
    fn informative_paths_drop_unit_gcds() {
        let g = zgraph(4, &[(1, 2, 8), (2, 4, 9), (3, 4, 6), (1, 3, 5)]);
        let p = informative_paths(&g, 2, DEFAULT_PATH_LIMIT).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].gcd.to_string(), "8");
    }

    fn arb_graph() -> impl Strategy<Value = LabeledGraph> {
        (2usize..=7)
            .prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (1..=n)
                    .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
                    .collect();
                let m = pairs.len();
                (
                    Just(n),
                    Just(pairs),
                    prop::collection::vec((any::<bool>(), 1i64..13), m),
                    prop::collection::vec(1i64..13, n),
                )
            })
            .prop_map(|(n, pairs, picks, tree_labels)| {
                let mut edges = Vec::new();
                // spanning path keeps it connected
                for v in 2..=n {
                    edges.push((v - 1, v, tree_labels[v - 1]));
                }
                for ((u, v), (keep, l)) in pairs.into_iter().zip(picks) {
                    if keep && v != u + 1 {
                        edges.push((u, v, l));
                    }
                }
                zgraph(n, &edges)
            })
    }

    proptest! {
        #[test]
        fn paths_satisfy_invariants(g in arb_graph()) {
            for k in 1..=g.vertex_count() {
                let paths = constraint_paths(&g, k).unwrap();
                for p in &paths {
                    prop_assert_eq!(p.source(), k);
                    prop_assert!(p.target() < k);
                    let inner = &p.vertices[1..p.vertices.len() - 1];
                    prop_assert!(inner.iter().all(|&v| v > k));
                    let mut seen = p.vertices.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    prop_assert_eq!(seen.len(), p.vertices.len());
                    prop_assert_eq!(&p.gcd, &gcd_all(g.ring(), &p.edge_labels).unwrap());
                }
                // lexicographic order
                for w in paths.windows(2) {
                    prop_assert!(w[0].vertices < w[1].vertices);
                }
                // superset-freeness
                for a in &paths {
                    for b in &paths {
                        if a != b && a.target() == b.target() {
                            let sa: std::collections::BTreeSet<_> = a.edges.iter().collect();
                            let sb: std::collections::BTreeSet<_> = b.edges.iter().collect();
                            prop_assert!(!(sb.is_subset(&sa) && sb.len() < sa.len()));
                        }
                    }
                }
            }
        }

        #[test]
        fn independent_of_edge_order(g in arb_graph(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut edges: Vec<_> = g.edges().iter().map(|e| (e.v, e.u, e.label.clone())).collect();
            edges.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let h = LabeledGraph::new(g.ring(), g.vertex_count(), edges).unwrap();
            for k in 1..=g.vertex_count() {
                let a: Vec<_> = constraint_paths(&g, k).unwrap().into_iter().map(|p| (p.vertices, p.gcd)).collect();
                let b: Vec<_> = constraint_paths(&h, k).unwrap().into_iter().map(|p| (p.vertices, p.gcd)).collect();
                prop_assert_eq!(a, b);
            }
        }
    }
}
