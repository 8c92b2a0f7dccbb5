//! Text, JSON and CSV renderings of command results.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::Serialize;

use crate::exprs::{Chart, ScalarExpr};
use crate::fields::{one_based, Alternating};
use crate::loopspace::{ClosureTable, FlowReport};
use crate::twistcheck::{Report, CALIBRATED_SIGN};

fn components<V>(t: &Alternating<V>, chart: &Chart) -> IndexMap<String, String> {
    t.components()
        .map(|(k, v)| {
            (
                k.iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                v.display_with(chart).to_string(),
            )
        })
        .collect()
}

fn structure_label(i: usize, j: usize, k: usize, dim: usize) -> String {
    if dim > 9 {
        format!("c^{{{},{}}}_{}", i + 1, j + 1, k + 1)
    } else {
        format!("c^{{{}{}}}_{}", i + 1, j + 1, k + 1)
    }
}

fn nonzero_structure(
    c: &BTreeMap<(usize, usize, usize), ScalarExpr>,
) -> impl Iterator<Item = (&(usize, usize, usize), &ScalarExpr)> {
    c.iter().filter(|(_, v)| !v.is_zero())
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CheckJson {
    dimension: usize,
    coordinates: Vec<String>,
    calibrated_sign: i32,
    h_closed: bool,
    is_poisson: bool,
    is_twisted_poisson: bool,
    effective_h: IndexMap<String, String>,
    jacobiator: IndexMap<String, String>,
    contraction: IndexMap<String, String>,
    residual: IndexMap<String, String>,
    structure_functions: IndexMap<String, String>,
}

pub fn check_json(r: &Report, chart: &Chart) -> String {
    let n = chart.dim();
    json(&CheckJson {
        dimension: n,
        coordinates: chart.names().to_vec(),
        calibrated_sign: CALIBRATED_SIGN,
        h_closed: r.h_closed,
        is_poisson: r.is_poisson,
        is_twisted_poisson: r.is_twisted_poisson,
        effective_h: components(&r.effective_h, chart),
        jacobiator: components(&r.jacobiator, chart),
        contraction: components(&r.contraction, chart),
        residual: components(&r.residual, chart),
        structure_functions: nonzero_structure(&r.structure_functions)
            .map(|(&(i, j, k), v)| {
                (
                    structure_label(i, j, k, n),
                    v.display_with(chart).to_string(),
                )
            })
            .collect(),
    })
}

pub fn check_text(r: &Report, chart: &Chart) -> String {
    let mut out = format!(
        "poisson: {}, twisted_poisson: {}\nh_closed: {}\n",
        r.is_poisson, r.is_twisted_poisson, r.h_closed
    );
    for (name, t) in [("jacobiator", &r.jacobiator), ("residual", &r.residual)] {
        if t.is_zero() {
            out += &format!("{name}: 0\n");
        } else {
            out += &format!("{name}:\n");
            for (k, v) in t.components() {
                out += &format!("  {}: {}\n", one_based(k), v.display_with(chart));
            }
        }
    }
    out
}

pub fn check_csv(r: &Report, chart: &Chart) -> String {
    let mut rows = vec![
        vec!["h_closed".into(), String::new(), r.h_closed.to_string()],
        vec!["is_poisson".into(), String::new(), r.is_poisson.to_string()],
        vec![
            "is_twisted_poisson".into(),
            String::new(),
            r.is_twisted_poisson.to_string(),
        ],
    ];
    for (name, t) in [
        ("effective_h", components(&r.effective_h, chart)),
        ("jacobiator", components(&r.jacobiator, chart)),
        ("contraction", components(&r.contraction, chart)),
        ("residual", components(&r.residual, chart)),
    ] {
        rows.extend(t.into_iter().map(|(k, v)| vec![name.to_string(), k, v]));
    }
    csv_string(&["quantity", "indices", "value"], rows)
}

#[derive(Serialize)]
struct StructureRow {
    i: usize,
    j: usize,
    k: usize,
    value: String,
}

fn structure_rows(
    c: &BTreeMap<(usize, usize, usize), ScalarExpr>,
    chart: &Chart,
) -> Vec<StructureRow> {
    nonzero_structure(c)
        .map(|(&(i, j, k), v)| StructureRow {
            i: i + 1,
            j: j + 1,
            k: k + 1,
            value: v.display_with(chart).to_string(),
        })
        .collect()
}

pub fn structure_text(c: &BTreeMap<(usize, usize, usize), ScalarExpr>, chart: &Chart) -> String {
    nonzero_structure(c)
        .map(|(&(i, j, k), v)| {
            format!(
                "{} = {}\n",
                structure_label(i, j, k, chart.dim()),
                v.display_with(chart)
            )
        })
        .collect()
}

pub fn structure_json(c: &BTreeMap<(usize, usize, usize), ScalarExpr>, chart: &Chart) -> String {
    json(&structure_rows(c, chart))
}

pub fn structure_csv(c: &BTreeMap<(usize, usize, usize), ScalarExpr>, chart: &Chart) -> String {
    let rows = structure_rows(c, chart)
        .into_iter()
        .map(|r| vec![r.i.to_string(), r.j.to_string(), r.k.to_string(), r.value])
        .collect();
    csv_string(&["i", "j", "k", "value"], rows)
}

#[derive(Serialize)]
struct LatticeRowJson {
    sites: usize,
    max_constraint: f64,
    closure_residual: f64,
    ratio_to_previous: Option<f64>,
}

#[derive(Serialize)]
struct LatticeJson {
    scheme: String,
    seed: u64,
    active_coordinates: Vec<usize>,
    rows: Vec<LatticeRowJson>,
    passed: bool,
}

pub fn lattice_json(t: &ClosureTable, seed: u64) -> String {
    json(&LatticeJson {
        scheme: t.scheme.to_string(),
        seed,
        active_coordinates: t.active.iter().map(|i| i + 1).collect(),
        rows: t
            .rows
            .iter()
            .map(|r| LatticeRowJson {
                sites: r.sites,
                max_constraint: r.max_constraint,
                closure_residual: r.residual,
                ratio_to_previous: r.ratio,
            })
            .collect(),
        passed: t.passed,
    })
}

/// Shortest round-trip form in scientific notation.
fn sci(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(|r| format!("{r:.4}")).unwrap_or_else(|| "-".into())
}

pub fn lattice_text(t: &ClosureTable, seed: u64) -> String {
    let mut out = format!(
        "scheme: {}, seed: {}, loop coordinates: {}\n{:>6}  {:>14}  {:>16}  {:>8}\n",
        t.scheme,
        seed,
        one_based(&t.active),
        "N",
        "max_constraint",
        "closure_residual",
        "ratio"
    );
    for r in &t.rows {
        out += &format!(
            "{:>6}  {:>14.3e}  {:>16.6e}  {:>8}\n",
            r.sites,
            r.max_constraint,
            r.residual,
            opt(r.ratio)
        );
    }
    out += &format!("closure: {}\n", if t.passed { "pass" } else { "fail" });
    out
}

pub fn lattice_csv(t: &ClosureTable) -> String {
    let rows = t
        .rows
        .iter()
        .map(|r| {
            vec![
                r.sites.to_string(),
                sci(r.max_constraint),
                sci(r.residual),
                r.ratio.map(|v| v.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    csv_string(&["N", "max_constraint", "closure_residual", "ratio"], rows)
}

#[derive(Serialize)]
struct FlowJson {
    sites: usize,
    dt: f64,
    steps: usize,
    seed: u64,
    lambda_scale: f64,
    active_coordinates: Vec<usize>,
    initial_max_constraint: f64,
    final_max_constraint: f64,
    drift: f64,
    envelope: f64,
    within_envelope: bool,
}

pub fn flow_json(r: &FlowReport, seed: u64) -> String {
    json(&FlowJson {
        sites: r.sites,
        dt: r.dt,
        steps: r.steps,
        seed,
        lambda_scale: r.lambda_scale,
        active_coordinates: r.active.iter().map(|i| i + 1).collect(),
        initial_max_constraint: r.initial,
        final_max_constraint: r.last,
        drift: r.drift,
        envelope: r.envelope,
        within_envelope: r.within,
    })
}

pub fn flow_text(r: &FlowReport, seed: u64) -> String {
    format!(
        "N: {}, dt: {}, steps: {}, seed: {}, lambda_scale: {}\ninitial max |phi|: {:.6e}\nfinal max |phi|: {:.6e}\ndrift: {:.6e}\nenvelope: {:.6e}\nwithin envelope: {}\n",
        r.sites, r.dt, r.steps, seed, r.lambda_scale, r.initial, r.last, r.drift, r.envelope, r.within
    )
}

pub fn flow_csv(r: &FlowReport) -> String {
    csv_string(
        &[
            "N",
            "dt",
            "steps",
            "lambda_scale",
            "initial",
            "final",
            "drift",
            "envelope",
            "within",
        ],
        vec![vec![
            r.sites.to_string(),
            r.dt.to_string(),
            r.steps.to_string(),
            r.lambda_scale.to_string(),
            sci(r.initial),
            sci(r.last),
            sci(r.drift),
            sci(r.envelope),
            r.within.to_string(),
        ]],
    )
}
