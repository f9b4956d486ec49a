//! Generalized splines on edge-labeled graphs over principal ideal domains.
//!
//! A spline assigns a ring element to every vertex so that the values at the
//! ends of each edge agree modulo the edge label. Over a PID the splines form
//! a free module with a *flow-up basis*: for every vertex index `i` a spline
//! vanishing on `v_1..v_{i-1}` whose `i`-th entry is as small as possible.
//! This crate computes those bases from constraint paths of the graph,
//! checks basis criteria, and implements the specialized cycle algorithms.
//!
//! Modules, bottom to top: [`ring`] (exact PID arithmetic and the CRT
//! solver), [`graph`], [`trails`], [`flowup`], [`cycle`], [`oracle`]
//! (brute-force ground truth for small integer instances) and [`cli`].

pub mod cli;
pub mod cycle;
pub mod flowup;
pub mod graph;
pub mod oracle;
pub mod ring;
pub mod trails;

pub use graph::{LabeledGraph, Spline};
pub use ring::{RingElem, RingSpec};
