//! Command-line front end. `run` parses arguments, dispatches and renders;
//! it never exits the process so tests can drive it in-memory.
//!
//! Exit codes: 0 success, 1 domain failure (degenerate class, incompatible
//! system, failed check), 2 bad input (unreadable file, parse or schema
//! error, bad flags).

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cycle::{self, CycleKind, Method};
use crate::flowup::{self, BasisFailure, FlowUpClass, Settings};
use crate::graph::{LabeledGraph, Spline};
use crate::oracle::{self, OracleReport};
use crate::trails;

#[derive(Debug, Parser)]
#[command(
    name = "gspline",
    version,
    about = "Generalized splines on edge-labeled graphs over PIDs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format.
    #[arg(
        long,
        global = true,
        value_enum,
        default_value = "human",
        env = "GSPLINE_FORMAT"
    )]
    format: Format,
    /// Worker threads for basis construction.
    #[arg(long, global = true, env = "GSPLINE_JOBS")]
    jobs: Option<usize>,
    /// Abort when a vertex has more constraint paths than this.
    #[arg(long, global = true, default_value_t = trails::DEFAULT_PATH_LIMIT, env = "GSPLINE_PATH_LIMIT")]
    path_limit: usize,
    /// Seed for the randomized self-test.
    #[arg(long, global = true, default_value_t = 0, env = "GSPLINE_SEED")]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    General,
    Formula,
    Ordered,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::General => Method::General,
            MethodArg::Formula => Method::Formula,
            MethodArg::Ordered => Method::Ordered,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleCheck {
    MinLeading,
    SplineCount,
    TrailsEquivalence,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test whether a vertex labeling is a spline.
    Check { graph: PathBuf, spline: PathBuf },
    /// List the constraint paths from a vertex.
    Trails {
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        /// Print targets below this flow-up index as 0.
        #[arg(long)]
        flow_index: Option<usize>,
    },
    /// Flow-up class with smallest leading entry.
    Flowup {
        graph: PathBuf,
        #[arg(long)]
        index: usize,
    },
    /// Full flow-up basis.
    Basis { graph: PathBuf },
    /// Test a candidate family against the basis criteria.
    CheckBasis { graph: PathBuf, splines: PathBuf },
    /// Coefficients of a spline in the flow-up basis.
    Decompose { graph: PathBuf, spline: PathBuf },
    /// Flow-up class on a cycle by a specialized method.
    Cycle {
        graph: PathBuf,
        #[arg(long)]
        index: usize,
        #[arg(long, value_enum, default_value = "formula")]
        method: MethodArg,
        /// Run every applicable method and report agreement.
        #[arg(long)]
        compare: bool,
    },
    /// Compare against brute-force search on a small integer graph.
    Oracle {
        graph: PathBuf,
        #[arg(long, value_enum)]
        check: OracleCheck,
        /// Restrict min-leading to one index.
        #[arg(long)]
        index: Option<usize>,
        /// Largest residue search space allowed.
        #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Product of the smallest leading entries.
    Qelem { graph: PathBuf },
    /// Random cross-checks against the oracle and the cycle formulas.
    Selftest {
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

enum Failure {
    Input(String),
    Domain(String),
    /// Already reported on stdout.
    Negative,
}

impl Failure {
    fn input(path: &Path, e: impl Display) -> Failure {
        Failure::Input(format!("{}: {e}", path.display()))
    }
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

type Outcome = Result<(), Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        format: cli.global.format,
        settings: Settings {
            path_limit: cli.global.path_limit,
            jobs: cli.global.jobs,
        },
        seed: cli.global.seed,
        out: String::new(),
    };
    let result = ctx.dispatch(cli.command);
    let _ = out.write_all(ctx.out.as_bytes());
    match result {
        Ok(()) => 0,
        Err(Failure::Negative) => 1,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

struct Ctx {
    format: Format,
    settings: Settings,
    seed: u64,
    out: String,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(path, e))
}

fn load_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    LabeledGraph::from_json(&read(path)?).map_err(|e| Failure::input(path, e))
}

fn load_spline(g: &LabeledGraph, path: &Path) -> Result<Spline, Failure> {
    let f = Spline::from_json(g.ring(), &read(path)?).map_err(|e| Failure::input(path, e))?;
    g.check_len(&f).map_err(|e| Failure::input(path, e))?;
    Ok(f)
}

fn strings(values: &[crate::RingElem]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn class_json(c: &FlowUpClass) -> Value {
    json!({ "index": c.index, "values": strings(c.spline.values()) })
}

impl Ctx {
    fn json(&mut self, v: Value) {
        self.out
            .push_str(&serde_json::to_string_pretty(&v).expect("json values serialize"));
        self.out.push('\n');
    }

    fn line(&mut self, s: impl Display) {
        self.out.push_str(&format!("{s}\n"));
    }

    fn human(&self) -> bool {
        self.format == Format::Human
    }

    fn class(&mut self, c: &FlowUpClass) {
        self.line(format_args!("F^({})", c.index));
        self.out.push_str(&c.spline.render_column());
        self.line(format_args!("leading entry: {}", c.leading_entry()));
    }

    fn dispatch(&mut self, command: Command) -> Outcome {
        match command {
            Command::Check { graph, spline } => self.check(&graph, &spline),
            Command::Trails {
                graph,
                vertex,
                flow_index,
            } => self.trails(&graph, vertex, flow_index),
            Command::Flowup { graph, index } => self.flowup(&graph, index),
            Command::Basis { graph } => self.basis(&graph),
            Command::CheckBasis { graph, splines } => self.check_basis(&graph, &splines),
            Command::Decompose { graph, spline } => self.decompose(&graph, &spline),
            Command::Cycle {
                graph,
                index,
                method,
                compare,
            } => self.cycle(&graph, index, method, compare),
            Command::Oracle {
                graph,
                check,
                index,
                budget,
            } => self.oracle(&graph, check, index, budget),
            Command::Qelem { graph } => self.qelem(&graph),
            Command::Selftest { count } => self.selftest(count),
        }
    }

    fn check(&mut self, graph: &Path, spline: &Path) -> Outcome {
        let g = load_graph(graph)?;
        let f = load_spline(&g, spline)?;
        let bad = g.spline_violations(&f).map_err(domain)?;
        let label =
            |&(u, v): &(usize, usize)| g.label_between(u, v).expect("edge exists").to_string();
        if self.human() {
            self.line(format_args!(
                "spline: {}",
                if bad.is_empty() { "yes" } else { "no" }
            ));
            for e in &bad {
                self.line(format_args!(
                    "violated edge: ({}, {}) label {}",
                    e.0,
                    e.1,
                    label(e)
                ));
            }
        } else {
            let v: Vec<Value> = bad
                .iter()
                .map(|e| json!({ "u": e.0, "v": e.1, "label": label(e) }))
                .collect();
            self.json(json!({ "spline": bad.is_empty(), "violations": v }));
        }
        Ok(())
    }

    fn trails(&mut self, graph: &Path, vertex: usize, flow_index: Option<usize>) -> Outcome {
        let g = load_graph(graph)?;
        let n = g.vertex_count();
        if vertex == 0 || vertex > n {
            return Err(Failure::Input(format!(
                "--vertex {vertex} out of range 1..={n}"
            )));
        }
        let paths = trails::constraint_paths_with_limit(&g, vertex, self.settings.path_limit)
            .map_err(domain)?;
        if self.human() {
            self.line(format_args!(
                "constraint paths from v_{vertex}: {}",
                paths.len()
            ));
            for p in &paths {
                self.line(p.describe(flow_index));
            }
        } else {
            let v: Vec<Value> = paths
                .iter()
                .map(|p| {
                    json!({
                        "vertices": p.vertices,
                        "labels": strings(&p.edge_labels),
                        "gcd": p.gcd.to_string(),
                        "target": p.target(),
                    })
                })
                .collect();
            self.json(json!({ "vertex": vertex, "paths": v }));
        }
        Ok(())
    }

    fn flowup(&mut self, graph: &Path, index: usize) -> Outcome {
        let g = load_graph(graph)?;
        let c = flowup::build_flowup_with(&g, index, &self.settings).map_err(domain)?;
        if self.human() {
            self.class(&c);
        } else {
            self.json(class_json(&c));
        }
        Ok(())
    }

    fn basis(&mut self, graph: &Path) -> Outcome {
        let g = load_graph(graph)?;
        let b = flowup::build_basis_with(&g, &self.settings).map_err(domain)?;
        if self.human() {
            for c in &b.classes {
                self.class(c);
                self.line("");
            }
            self.line(format_args!("Q_G = {}", b.q_g));
        } else {
            let classes: Vec<Value> = b.classes.iter().map(class_json).collect();
            self.json(json!({ "ring": g.ring().to_string(), "q_g": b.q_g.to_string(), "splines": classes }));
        }
        Ok(())
    }

    fn check_basis(&mut self, graph: &Path, splines: &Path) -> Outcome {
        let g = load_graph(graph)?;
        let family = Spline::list_from_json(g.ring(), &read(splines)?)
            .map_err(|e| Failure::input(splines, e))?;
        for f in &family {
            g.check_len(f).map_err(|e| Failure::input(splines, e))?;
        }
        let report = flowup::is_flowup_basis_with(&g, &family, &self.settings).map_err(domain)?;
        let det =
            flowup::determinant_criterion_with(&g, &family, &self.settings).map_err(domain)?;
        let failures: Vec<String> = report
            .failures
            .iter()
            .map(|f| match f {
                BasisFailure::NotTriangular { position, leading_index } => match leading_index {
                    Some(l) => format!("spline {position} is not a flow-up class of index {position} (first nonzero entry f_{l})"),
                    None => format!("spline {position} is zero"),
                },
                BasisFailure::LeadingMismatch { index, found, expected } => {
                    format!("spline {index} has leading entry {found}, smallest possible is {expected}")
                }
            })
            .collect();
        if self.human() {
            self.line(format_args!(
                "flow-up basis: {}",
                if report.is_basis() { "yes" } else { "no" }
            ));
            for f in &failures {
                self.line(format_args!("  {f}"));
            }
            self.line(format_args!("determinant: {}", det.determinant));
            self.line(format_args!("Q_G: {}", det.q_g));
            let verdict = if det.holds { "holds" } else { "fails" };
            if det.validated_family {
                self.line(format_args!("determinant criterion: {verdict}"));
            } else {
                self.line(format_args!(
                    "determinant criterion: {verdict} (proven only for cycles, diamonds and trees)"
                ));
            }
        } else {
            self.json(json!({
                "is_basis": report.is_basis(),
                "failures": failures,
                "determinant": det.determinant.to_string(),
                "q_g": det.q_g.to_string(),
                "determinant_criterion": det.holds,
                "validated_family": det.validated_family,
            }));
        }
        Ok(())
    }

    fn decompose(&mut self, graph: &Path, spline: &Path) -> Outcome {
        let g = load_graph(graph)?;
        let f = load_spline(&g, spline)?;
        if let Some(&(u, v)) = g.spline_violations(&f).map_err(domain)?.first() {
            return Err(Failure::Domain(format!(
                "input is not a spline: edge ({u}, {v}) violated"
            )));
        }
        let b = flowup::build_basis_with(&g, &self.settings).map_err(domain)?;
        let coeffs = flowup::decompose(&g, &b, &f).map_err(domain)?;
        if self.human() {
            for (i, c) in coeffs.iter().enumerate() {
                self.line(format_args!("c_{} = {c}", i + 1));
            }
        } else {
            self.json(json!({ "coefficients": strings(&coeffs) }));
        }
        Ok(())
    }

    fn cycle(&mut self, graph: &Path, index: usize, method: MethodArg, compare: bool) -> Outcome {
        let g = load_graph(graph)?;
        let layout = cycle::classify_cycle(&g).map_err(domain)?;
        let kind = match layout.kind {
            CycleKind::Ordered => "ordered",
            CycleKind::ArbitraryOrdered => "arbitrary ordered",
        };
        let order: Vec<String> = layout.order.iter().map(|v| v.to_string()).collect();
        if !compare {
            let c = cycle::cycle_flowup(&g, index, method.into()).map_err(domain)?;
            if self.human() {
                self.line(format_args!("cycle: {} ({kind})", order.join(" ")));
                self.class(&c);
            } else {
                let mut v = class_json(&c);
                v["kind"] = json!(kind);
                v["order"] = json!(layout.order);
                self.json(v);
            }
            return Ok(());
        }
        let methods = [MethodArg::General, MethodArg::Formula, MethodArg::Ordered];
        let results: Vec<(MethodArg, Result<FlowUpClass, cycle::CycleError>)> = methods
            .iter()
            .map(|&m| (m, cycle::cycle_flowup(&g, index, m.into())))
            .collect();
        let ok: Vec<&FlowUpClass> = results
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok())
            .collect();
        let agree = ok
            .windows(2)
            .all(|w| w[0].leading_entry().is_associate(w[1].leading_entry()))
            && ok.iter().all(|c| g.is_spline(&c.spline).unwrap_or(false));
        let name = |m: MethodArg| m.to_possible_value().expect("named").get_name().to_string();
        if self.human() {
            self.line(format_args!("cycle: {} ({kind})", order.join(" ")));
            let w = results
                .iter()
                .map(|(m, _)| name(*m).len())
                .max()
                .unwrap_or(0);
            for (m, r) in &results {
                let text = match r {
                    Ok(c) => format!(
                        "[{}] leading {}",
                        strings(c.spline.values()).join(", "),
                        c.leading_entry()
                    ),
                    Err(e) => format!("n/a ({e})"),
                };
                self.line(format_args!("{:<w$}  {text}", name(*m)));
            }
            self.line(format_args!(
                "agreement: {}",
                if agree { "yes" } else { "no" }
            ));
        } else {
            let rows: Vec<Value> = results
                .iter()
                .map(|(m, r)| match r {
                    Ok(c) => json!({ "method": name(*m), "values": strings(c.spline.values()), "leading": c.leading_entry().to_string() }),
                    Err(e) => json!({ "method": name(*m), "error": e.to_string() }),
                })
                .collect();
            self.json(json!({ "index": index, "kind": kind, "comparison": rows, "agree": agree }));
        }
        if agree {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }

    fn reports(&mut self, reports: &[OracleReport]) -> Outcome {
        let all = reports.iter().all(|r| r.agree);
        if self.human() {
            for r in reports {
                let at = r.index.map(|i| format!(" i={i}")).unwrap_or_default();
                self.line(format_args!(
                    "{}{at}: computed {}, oracle {}, {} (search space {})",
                    r.check,
                    r.computed,
                    r.oracle,
                    if r.agree { "agree" } else { "DISAGREE" },
                    r.search_space
                ));
            }
        } else {
            self.json(json!({ "reports": reports, "all_agree": all }));
        }
        if all {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }

    fn oracle(
        &mut self,
        graph: &Path,
        check: OracleCheck,
        index: Option<usize>,
        budget: u64,
    ) -> Outcome {
        let g = load_graph(graph)?;
        let reports = match check {
            OracleCheck::MinLeading => {
                let indices: Vec<usize> = match index {
                    Some(i) => vec![i],
                    None => (1..=g.vertex_count()).collect(),
                };
                indices
                    .into_iter()
                    .map(|i| oracle::check_min_leading(&g, i, budget))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(domain)?
            }
            OracleCheck::SplineCount => {
                vec![oracle::check_spline_count(&g, budget).map_err(domain)?]
            }
            OracleCheck::TrailsEquivalence => {
                vec![oracle::check_trails_equivalence(&g, budget).map_err(domain)?]
            }
        };
        self.reports(&reports)
    }

    fn qelem(&mut self, graph: &Path) -> Outcome {
        let g = load_graph(graph)?;
        let q = flowup::q_element_with(&g, &self.settings).map_err(domain)?;
        if self.human() {
            self.line(format_args!("Q_G = {q}"));
        } else {
            self.json(json!({ "q_g": q.to_string() }));
        }
        Ok(())
    }

    fn selftest(&mut self, count: usize) -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut checks = 0usize;
        let mut failures: Vec<String> = Vec::new();
        for _ in 0..count {
            let g = oracle::random_instance(&mut rng, 5, 1..=12);
            for problem in selftest_graph(&g, &self.settings, &mut checks) {
                failures.push(format!(
                    "{problem}: {}",
                    g.to_json().split_whitespace().collect::<String>()
                ));
            }
        }
        let seed = self.seed;
        if self.human() {
            self.line(format_args!(
                "selftest seed={seed}: {count} graphs, {checks} checks, {} failures",
                failures.len()
            ));
            for f in &failures {
                self.line(format_args!("  {f}"));
            }
        } else {
            self.json(
                json!({ "seed": seed, "graphs": count, "checks": checks, "failures": failures }),
            );
        }
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Failure::Negative)
        }
    }
}

/// Oracle leading entries, basis criteria and, on cycles, the formula
/// methods for one graph. Returns descriptions of whatever failed.
fn selftest_graph(g: &LabeledGraph, settings: &Settings, checks: &mut usize) -> Vec<String> {
    let mut problems = Vec::new();
    for i in 1..=g.vertex_count() {
        *checks += 1;
        match oracle::check_min_leading(g, i, oracle::DEFAULT_BUDGET) {
            Ok(r) if r.agree => {}
            Ok(r) => problems.push(format!(
                "min-leading i={i}: computed {} oracle {}",
                r.computed, r.oracle
            )),
            Err(e) => problems.push(format!("min-leading i={i}: {e}")),
        }
    }
    *checks += 1;
    match flowup::build_basis_with(g, settings) {
        Ok(b) => {
            let splines = b.splines();
            match flowup::is_flowup_basis_with(g, &splines, settings) {
                Ok(r) if r.is_basis() => {}
                Ok(r) => problems.push(format!("basis criterion: {:?}", r.failures)),
                Err(e) => problems.push(format!("basis criterion: {e}")),
            }
            if g.is_cycle() || g.is_tree() {
                *checks += 1;
                match flowup::determinant_criterion_with(g, &splines, settings) {
                    Ok(d) if d.holds => {}
                    Ok(d) => {
                        problems.push(format!("determinant {} vs Q_G {}", d.determinant, d.q_g))
                    }
                    Err(e) => problems.push(format!("determinant: {e}")),
                }
            }
        }
        Err(e) => problems.push(format!("basis: {e}")),
    }
    if g.is_cycle() {
        for i in 1..=g.vertex_count() {
            *checks += 1;
            let general = cycle::cycle_flowup(g, i, Method::General);
            let formula = cycle::cycle_flowup(g, i, Method::Formula);
            match (general, formula) {
                (Ok(a), Ok(b))
                    if a.leading_entry().is_associate(b.leading_entry())
                        && g.is_spline(&b.spline).unwrap_or(false) => {}
                (a, b) => problems.push(format!("cycle i={i}: general {a:?} formula {b:?}")),
            }
        }
    }
    problems
}
