//! Command surface of the `primkg` binary, kept in a library so it can be
//! driven from tests.

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use primkg::io::{self, GraphDocument, QueryBlock};
use primkg::kgraph::Degree;
use primkg::primtop::{enumerate_prim, PrimSpace};
use primkg::repr::{vertex_kernel_probe, Representation};
use primkg::selfsim::SelfSimilarGraph;
use primkg::Bounds;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Tails,
    Per,
    Prim,
    Hypotheses,
    Closure,
    SpecOrder,
    ReprCheck,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub bound: Option<Vec<u32>>,
    pub depth: Option<usize>,
}

/// JSON for stdout, and DOT text when the command produces a graph.
#[derive(Clone, Debug)]
pub struct Output {
    pub json: Value,
    pub dot: Option<String>,
}

fn bounds_for(k: usize, opts: &Options) -> Result<Bounds> {
    let mut b = Bounds::new(k);
    if let Some(d) = &opts.bound {
        if d.len() != k {
            bail!("--bound has {} entries, the graph has k = {k}", d.len());
        }
        b = b.with_degree(Degree::from_vec(d.clone()));
    }
    if let Some(n) = opts.depth {
        b = b.with_depth(n);
    }
    Ok(b)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialise")
}

pub fn run(command: Command, text: &str, opts: &Options) -> Result<Output> {
    let doc = io::parse(text).context("parse error")?;
    let built = doc.build();
    if command == Command::Validate {
        let json = match built {
            Ok(ss) => json!({
                "valid": true,
                "k": ss.graph().k(),
                "vertices": ss.graph().vertex_count(),
                "edges": ss.graph().edge_count(),
                "group_order": ss.group().order(),
            }),
            Err(e) => json!({ "valid": false, "error": e.to_string() }),
        };
        return Ok(Output { json, dot: None });
    }
    let ss = built.context("invalid graph")?;
    let bounds = bounds_for(ss.graph().k(), opts)?;
    let bound_json = to_value(&bounds);
    let plain = |json: Value| Ok(Output { json, dot: None });
    match command {
        Command::Validate => unreachable!("handled above"),
        Command::Tails => {
            let space = PrimSpace::build(&ss, &bounds)?;
            plain(json!({ "bounds": bound_json, "tails": to_value(&space.summaries()) }))
        }
        Command::Per => {
            let space = PrimSpace::build(&ss, &bounds)?;
            let tails: Vec<Value> = space
                .strata()
                .iter()
                .map(|s| {
                    json!({
                        "tail": s.tail_names(space.graph()),
                        "basis": s.per.basis(),
                        "rank": s.per.rank(),
                        "invariants": s.per.invariants(),
                        "smith_basis": s.per.smith_basis(),
                        "exact": s.per_bound.is_none(),
                        "bound": s.per_bound,
                    })
                })
                .collect();
            plain(json!({ "bounds": bound_json, "tails": tails }))
        }
        Command::Prim => {
            let space = enumerate_prim(&ss, &bounds)?;
            plain(json!({
                "bounds": bound_json,
                "strata": to_value(&space.summaries()),
                "caveats": space.caveats(),
            }))
        }
        Command::Hypotheses => {
            let space = PrimSpace::build(&ss, &bounds)?;
            plain(to_value(space.hypotheses()))
        }
        Command::Closure => {
            let space = PrimSpace::build(&ss, &bounds)?;
            plain(closure(&space, &doc)?)
        }
        Command::SpecOrder => {
            let space = PrimSpace::build(&ss, &bounds)?;
            let order = space.specialization_preorder();
            Ok(Output { json: to_value(&order), dot: Some(order.to_dot()) })
        }
        Command::ReprCheck => {
            let space = PrimSpace::build(&ss, &bounds)?;
            plain(repr_check(&space, &ss, &bounds)?)
        }
    }
}

fn describe(q: &QueryBlock) -> String {
    let doc = GraphDocument { queries: vec![q.clone()], ..Default::default() };
    doc.serialize()
        .lines()
        .filter_map(|l| l.strip_prefix("query "))
        .collect::<Vec<_>>()
        .join("; ")
}

fn closure(space: &PrimSpace, doc: &GraphDocument) -> Result<Value> {
    let queries = doc.prim_queries();
    if queries.is_empty() {
        bail!("the document has no query section");
    }
    let names = |set: &[usize]| -> Vec<String> {
        set.iter().map(|&v| space.graph().vertex_name(v).to_string()).collect()
    };
    let mut answers = Vec::new();
    for (q, block) in queries.iter().zip(&doc.queries) {
        let a = space.closure(q)?;
        answers.push(json!({
            "query": describe(block),
            "verdict": a.verdict,
            "case": a.case,
            "witness": a.witness.iter().map(|w| names(w)).collect::<Vec<_>>(),
            "caveats": a.caveats,
        }));
    }
    Ok(if answers.len() == 1 { answers.pop().expect("one answer") } else { Value::Array(answers) })
}

fn repr_check(space: &PrimSpace, ss: &SelfSimilarGraph, bounds: &Bounds) -> Result<Value> {
    let graph = ss.graph();
    let mut strata = Vec::new();
    for (i, s) in space.strata().iter().enumerate() {
        let f = s.per.trivial_character();
        let rep = Representation::for_point(space, i, &f, bounds.depth)?;
        let relations = rep.check_relations();
        let pres = space.ideal_presentation(i, &f)?;
        let presentation = rep.check_presentation(&pres, s.h_t.vertices());
        let mut probes = Vec::new();
        for v in 0..graph.vertex_count() {
            let zero = vertex_kernel_probe(space, i, &f, v, bounds.depth)?;
            probes.push(json!({
                "vertex": graph.vertex_name(v),
                "acts_as_zero": zero,
                "outside_tail": !s.tail().contains(&v),
            }));
        }
        strata.push(json!({
            "tail": s.tail_names(graph),
            "character": f.to_string(),
            "basis_size": rep.basis().len(),
            "relations": to_value(&relations),
            "presentation": to_value(&presentation),
            "vertex_probes": probes,
        }));
    }
    Ok(json!({ "depth": bounds.depth, "strata": strata }))
}

pub fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values render")
}
