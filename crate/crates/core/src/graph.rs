//! Edge-labeled graphs and splines.
//!
//! Vertices are numbered `1..=n`; the numbering is the order the flow-up
//! machinery works in, so it is always explicit in the file format.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{RingElem, RingError, RingSpec};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("graph is disconnected (vertex {0} is unreachable from vertex 1)")]
    Disconnected(usize),
    #[error("duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: usize, n: usize },
    /// `index` counts edges from 1 in input order.
    #[error("edge {index}: {source}")]
    Label { index: usize, source: RingError },
    #[error("spline entry {index}: {source}")]
    Entry { index: usize, source: RingError },
    #[error("expected {expected} spline entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl GraphError {
    /// True for malformed input (as opposed to a well-formed but
    /// unsupported graph).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            GraphError::Schema(_)
                | GraphError::Label { .. }
                | GraphError::Entry { .. }
                | GraphError::Ring(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: RingElem,
}

/// A simple connected graph on vertices `1..=n` with ring-element edge
/// labels. Edges are stored with `u < v`, sorted; adjacency lists are sorted
/// by neighbor index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    ring: RingSpec,
    n: usize,
    edges: Vec<Edge>,
    // adj[v] = (neighbor, edge index); adj[0] unused
    adj: Vec<Vec<(usize, usize)>>,
}

impl LabeledGraph {
    pub fn new(
        ring: RingSpec,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, RingElem)>,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Schema(
                "a graph needs at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for (index, (a, b, label)) in edges.into_iter().enumerate() {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if label.ring() != ring {
                return Err(GraphError::Label {
                    index: index + 1,
                    source: RingError::MixedRings {
                        left: ring,
                        right: label.ring(),
                    },
                });
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            list.push(Edge { u, v, label });
        }
        list.sort_by_key(|e| (e.u, e.v));
        let mut adj = vec![Vec::new(); n + 1];
        for (i, e) in list.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let g = LabeledGraph {
            ring,
            n,
            edges: list,
            adj,
        };
        if let Some(v) = g.first_unreachable() {
            return Err(GraphError::Disconnected(v));
        }
        Ok(g)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        (1..=self.n).find(|&v| !seen[v])
    }

    /// Parses and validates a graph document.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Schema(e.to_string()))?;
        let ring: RingSpec = doc.ring.parse()?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (index, e) in doc.edges.into_iter().enumerate() {
            let label = ring.parse(&e.label).map_err(|source| GraphError::Label {
                index: index + 1,
                source,
            })?;
            edges.push((e.u, e.v, label));
        }
        LabeledGraph::new(ring, doc.vertices, edges)
    }

    /// Canonical document: edges sorted with `u < v`, labels printed in
    /// parseable form.
    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            ring: self.ring.to_string(),
            vertices: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    u: e.u,
                    v: e.v,
                    label: e.label.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph documents serialize")
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// `(neighbor, edge index)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn label_between(&self, a: usize, b: usize) -> Option<&RingElem> {
        self.adj
            .get(a)?
            .iter()
            .find(|&&(w, _)| w == b)
            .map(|&(_, i)| &self.edges[i].label)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    pub fn is_cycle(&self) -> bool {
        self.n >= 3 && self.edges.len() == self.n && (1..=self.n).all(|v| self.degree(v) == 2)
    }

    /// K4 minus one edge.
    pub fn is_diamond(&self) -> bool {
        if self.n != 4 || self.edges.len() != 5 {
            return false;
        }
        let mut degrees: Vec<usize> = (1..=4).map(|v| self.degree(v)).collect();
        degrees.sort_unstable();
        degrees == [2, 2, 3, 3]
    }

    pub fn trivial_spline(&self, r: &RingElem) -> Spline {
        assert_eq!(r.ring(), self.ring, "constant from a different ring");
        Spline::new(vec![r.clone(); self.n])
    }

    pub fn zero_spline(&self) -> Spline {
        self.trivial_spline(&self.ring.zero())
    }

    pub fn check_len(&self, f: &Spline) -> Result<(), GraphError> {
        if f.len() != self.n {
            return Err(GraphError::LengthMismatch {
                expected: self.n,
                found: f.len(),
            });
        }
        if let Some((i, e)) = f
            .values
            .iter()
            .enumerate()
            .find(|(_, e)| e.ring() != self.ring)
        {
            return Err(GraphError::Entry {
                index: i + 1,
                source: RingError::MixedRings {
                    left: self.ring,
                    right: e.ring(),
                },
            });
        }
        Ok(())
    }

    /// Edges `(u, v)` whose label does not divide `f_u - f_v`, in edge
    /// order. Empty means `f` is a spline.
    pub fn spline_violations(&self, f: &Spline) -> Result<Vec<(usize, usize)>, GraphError> {
        self.check_len(f)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| !e.label.divides(&(f.entry(e.u) - f.entry(e.v))))
            .map(|e| (e.u, e.v))
            .collect())
    }

    pub fn is_spline(&self, f: &Spline) -> Result<bool, GraphError> {
        Ok(self.spline_violations(f)?.is_empty())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDoc {
    ring: String,
    vertices: usize,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    u: usize,
    v: usize,
    label: String,
}

/// A vertex labeling `(f_1, ..., f_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spline {
    values: Vec<RingElem>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SplineDoc {
    values: Vec<String>,
}

#[derive(Debug, Deserialize)]
struct SplineListDoc {
    splines: Vec<SplineDoc>,
}

impl Spline {
    pub fn new(values: Vec<RingElem>) -> Self {
        Spline { values }
    }

    pub fn values(&self) -> &[RingElem] {
        &self.values
    }

    pub fn into_values(self) -> Vec<RingElem> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at 1-based vertex index `i`.
    pub fn entry(&self, i: usize) -> &RingElem {
        &self.values[i - 1]
    }

    /// Index of the first nonzero entry (1-based).
    pub fn leading_index(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_zero()).map(|p| p + 1)
    }

    pub fn add(&self, other: &Spline) -> Spline {
        assert_eq!(self.len(), other.len());
        Spline::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Spline) -> Spline {
        assert_eq!(self.len(), other.len());
        Spline::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, r: &RingElem) -> Spline {
        Spline::new(self.values.iter().map(|v| v * r).collect())
    }

    fn from_doc(ring: RingSpec, doc: SplineDoc) -> Result<Spline, GraphError> {
        doc.values
            .iter()
            .enumerate()
            .map(|(i, s)| {
                ring.parse(s).map_err(|source| GraphError::Entry {
                    index: i + 1,
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Spline::new)
    }

    /// Parses `{"values": [...]}` with entries in the given ring.
    pub fn from_json(ring: RingSpec, text: &str) -> Result<Spline, GraphError> {
        let doc: SplineDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Schema(e.to_string()))?;
        Spline::from_doc(ring, doc)
    }

    /// Parses `{"splines": [{"values": [...]}, ...]}`.
    pub fn list_from_json(ring: RingSpec, text: &str) -> Result<Vec<Spline>, GraphError> {
        let doc: SplineListDoc =
            serde_json::from_str(text).map_err(|e| GraphError::Schema(e.to_string()))?;
        doc.splines
            .into_iter()
            .map(|d| Spline::from_doc(ring, d))
            .collect()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({ "values": self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("splines serialize")
    }

    /// Column rendering with `f_n` on top and `f_1` at the bottom.
    pub fn render_column(&self) -> String {
        let rows: Vec<(String, String)> = self
            .values
            .iter()
            .enumerate()
            .rev()
            .map(|(i, v)| (format!("f_{}", i + 1), v.to_string()))
            .collect();
        let wn = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        let wv = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
        rows.iter()
            .map(|(name, v)| format!("{name:>wn$} | {v:<wv$} |\n"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FIG1: &str = r#"{"ring": "Q[x]", "vertices": 3,
        "edges": [{"u": 1, "v": 2, "label": "x"}, {"u": 2, "v": 3, "label": "x+1"}]}"#;

    fn q(t: &str) -> RingElem {
        RingSpec::RationalPoly.parse(t).unwrap()
    }

    fn spline(vals: &[&str]) -> Spline {
        Spline::new(vals.iter().map(|t| q(t)).collect())
    }

    #[test]
    fn membership_on_three_vertex_path() {
        let g = LabeledGraph::from_json(FIG1).unwrap();
        assert!(g.is_spline(&spline(&["1", "x+1", "x^2+2*x+1"])).unwrap());
        let bad = g
            .spline_violations(&spline(&["1", "x+2", "x^2+2*x+1"]))
            .unwrap();
        assert!(bad.contains(&(1, 2)));
        assert!(g.is_spline(&g.trivial_spline(&q("x"))).unwrap());
        assert!(g.is_spline(&g.zero_spline()).unwrap());
        assert_eq!(g.trivial_spline(&q("1")), spline(&["1", "1", "1"]));
    }

    #[test]
    fn length_mismatch() {
        let g = LabeledGraph::from_json(FIG1).unwrap();
        assert!(matches!(
            g.is_spline(&spline(&["1", "1"])),
            Err(GraphError::LengthMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn rejects_malformed_graphs() {
        let doc = |edges: &str, n: usize| {
            LabeledGraph::from_json(&format!(
                r#"{{"ring":"Z","vertices":{n},"edges":[{edges}]}}"#
            ))
        };
        assert!(matches!(
            doc(r#"{"u":1,"v":1,"label":"2"}"#, 1),
            Err(GraphError::SelfLoop(1))
        ));
        assert!(matches!(
            doc(r#"{"u":1,"v":2,"label":"2"},{"u":2,"v":1,"label":"3"}"#, 2),
            Err(GraphError::DuplicateEdge { u: 1, v: 2 })
        ));
        assert!(matches!(
            doc(r#"{"u":1,"v":2,"label":"2"}"#, 3),
            Err(GraphError::Disconnected(3))
        ));
        assert!(matches!(
            doc(r#"{"u":1,"v":4,"label":"2"}"#, 3),
            Err(GraphError::VertexOutOfRange { v: 4, n: 3 })
        ));
        assert!(matches!(
            doc(r#"{"u":1,"v":2,"label":"x"}"#, 2),
            Err(GraphError::Label { index: 1, .. })
        ));
        assert!(matches!(
            LabeledGraph::from_json("{}"),
            Err(GraphError::Schema(_))
        ));
        assert!(matches!(
            LabeledGraph::from_json(r#"{"ring":"Z[y]","vertices":1,"edges":[]}"#),
            Err(GraphError::Ring(RingError::UnknownRing(_)))
        ));
        assert!(doc("", 1).is_ok());
    }

    #[test]
    fn zero_and_unit_labels_are_admitted() {
        let g = LabeledGraph::from_json(
            r#"{"ring":"Z","vertices":3,"edges":[{"u":1,"v":2,"label":"0"},{"u":2,"v":3,"label":"-1"}]}"#,
        )
        .unwrap();
        let z = |v: i64| RingSpec::Integers.int(v);
        assert!(g.is_spline(&Spline::new(vec![z(4), z(4), z(-9)])).unwrap());
        assert!(!g.is_spline(&Spline::new(vec![z(4), z(5), z(-9)])).unwrap());
    }

    #[test]
    fn canonical_document_round_trip() {
        let g = LabeledGraph::from_json(
            r#"{"ring":"GF(5)[x]","vertices":3,"edges":[{"u":3,"v":1,"label":"2*x+6"},{"u":2,"v":1,"label":"x"}]}"#,
        )
        .unwrap();
        let text = g.to_json();
        let again = LabeledGraph::from_json(&text).unwrap();
        assert_eq!(again, g);
        assert_eq!(again.to_json(), text);
        assert_eq!(g.edges()[1].label.to_string(), "2*x+1");
    }

    #[test]
    fn shape_predicates() {
        let z = |v: i64| RingSpec::Integers.int(v);
        let c4 = LabeledGraph::new(
            RingSpec::Integers,
            4,
            [(1, 2, z(1)), (2, 3, z(1)), (3, 4, z(1)), (4, 1, z(1))],
        )
        .unwrap();
        assert!(c4.is_cycle() && !c4.is_tree() && !c4.is_diamond());
        let diamond = LabeledGraph::new(
            RingSpec::Integers,
            4,
            [
                (1, 2, z(1)),
                (2, 3, z(1)),
                (3, 4, z(1)),
                (4, 1, z(1)),
                (1, 3, z(1)),
            ],
        )
        .unwrap();
        assert!(diamond.is_diamond() && !diamond.is_cycle());
        let path = LabeledGraph::new(RingSpec::Integers, 3, [(1, 2, z(1)), (2, 3, z(1))]).unwrap();
        assert!(path.is_tree() && !path.is_cycle());
    }

    #[test]
    fn column_rendering_puts_first_entry_last() {
        let text = spline(&["1", "x+1", "x^2+2*x+1"]).render_column();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("f_3"));
        assert!(lines[2].starts_with("f_1"));
    }

    proptest! {
        // splines on a labeled 4-cycle are closed under + and scalar *
        #[test]
        fn module_closure(labels in prop::array::uniform4(1i64..9),
                          a in prop::array::uniform4(-3i64..4),
                          b in prop::array::uniform4(-3i64..4),
                          r in -5i64..5) {
            let z = |v: i64| RingSpec::Integers.int(v);
            let g = LabeledGraph::new(RingSpec::Integers, 4, [
                (1, 2, z(labels[0])), (2, 3, z(labels[1])), (3, 4, z(labels[2])), (4, 1, z(labels[3]))
            ]).unwrap();
            let l: i64 = labels.iter().product();
            // multiples of the label product along with constants are splines
            let mk = |c: [i64; 4], k: i64| Spline::new(c.iter().map(|&x| z(x * l + k)).collect());
            let f = mk(a, 2);
            let h = mk(b, -1);
            prop_assert!(g.is_spline(&f).unwrap() && g.is_spline(&h).unwrap());
            prop_assert!(g.is_spline(&f.add(&h)).unwrap());
            prop_assert!(g.is_spline(&f.scale(&z(r))).unwrap());
        }
    }
}
