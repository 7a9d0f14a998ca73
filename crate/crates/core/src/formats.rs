//! File formats: JSON emission with pinned float formatting and JSON parsing
//! for graphs and measurement families, plus the sweep CSV row format.
//!
//! Floats are emitted with 17 significant digits ({:.16e}), enough for an
//! exact f64 round trip, so re-verifying a written family reproduces every
//! report value bit for bit. Emitters write keys in a fixed order; identical
//! inputs produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use crate::construction::MeasurementFamily;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::majorana::Constellation;
use crate::optimize::OptimizationOutcome;
use crate::precision::{OncThreshold, SimulationResult};
use crate::vector::ComplexVector;
use crate::verification::{ClassicalAnalysis, VerificationReport};

/// Formats a float with 17 significant digits (exact round trip).
pub fn fmt_f64(x: f64) -> String {
    debug_assert!(x.is_finite(), "JSON floats must be finite");
    format!("{x:.16e}")
}

fn amplitude_list(v: &ComplexVector) -> String {
    let mut s = String::from("[");
    for (i, c) in v.components().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "[{},{}]", fmt_f64(c.re), fmt_f64(c.im));
    }
    s.push(']');
    s
}

/// `{"n":7,"d":5,"state":[[re,im],...],"vectors":{"1":[[re,im],...],...}}`
pub fn family_to_json(family: &MeasurementFamily) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{{\"n\":{},\"d\":{},\"state\":{},\"vectors\":{{",
        family.n(),
        family.d(),
        amplitude_list(family.state())
    );
    for (i, (vertex, vector)) in family.vectors().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "\"{vertex}\":{}", amplitude_list(vector));
    }
    s.push_str("}}");
    s
}

#[derive(Deserialize)]
struct FamilyJson {
    n: u32,
    d: usize,
    state: Vec<[f64; 2]>,
    vectors: BTreeMap<String, Vec<[f64; 2]>>,
}

fn to_vector(pairs: &[[f64; 2]]) -> ComplexVector {
    ComplexVector::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
}

pub fn family_from_json(text: &str) -> Result<MeasurementFamily> {
    let raw: FamilyJson = serde_json::from_str(text).map_err(|e| Error::MalformedJson {
        what: "family",
        detail: e.to_string(),
    })?;
    if raw.d != raw.n as usize - 2 {
        return Err(Error::MalformedJson {
            what: "family",
            detail: format!("d = {} but n = {} requires d = n - 2", raw.d, raw.n),
        });
    }
    let mut vectors = BTreeMap::new();
    for (key, pairs) in &raw.vectors {
        let vertex: u32 = key.parse().map_err(|_| Error::MalformedJson {
            what: "family",
            detail: format!("vector key {key:?} is not a vertex number"),
        })?;
        vectors.insert(vertex, to_vector(pairs));
    }
    MeasurementFamily::new(raw.n, vectors, to_vector(&raw.state))
}

/// `{"n":7,"edges":[[1,3],...],"part_a":[2,3,4],"part_b":[5,6,7]}`
pub fn graph_to_json(graph: &Graph) -> String {
    let mut s = String::new();
    let _ = write!(s, "{{\"n\":{},\"edges\":[", graph.n());
    for (i, (a, b)) in graph.edges().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "[{a},{b}]");
    }
    s.push_str("],\"part_a\":[");
    for (i, v) in graph.part_a().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s.push_str("],\"part_b\":[");
    for (i, v) in graph.part_b().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s.push_str("]}");
    s
}

#[derive(Deserialize)]
struct GraphJson {
    n: u32,
    edges: Vec<[u32; 2]>,
    #[serde(default)]
    part_a: Vec<u32>,
    #[serde(default)]
    part_b: Vec<u32>,
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| Error::MalformedJson {
        what: "graph",
        detail: e.to_string(),
    })?;
    Graph::new(
        raw.n,
        raw.edges.iter().map(|e| (e[0], e[1])),
        raw.part_a,
        raw.part_b,
    )
}

fn opt_bool(value: Option<bool>) -> &'static str {
    match value {
        Some(true) => "true",
        Some(false) => "false",
        None => "null",
    }
}

fn opt_edge(edge: Option<(u32, u32)>) -> String {
    match edge {
        Some((a, b)) => format!("[{a},{b}]"),
        None => "null".into(),
    }
}

/// Full verification report with per-edge worst offenders.
pub fn report_to_json(report: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{{\"n\":{},\"d\":{},\"tol\":{},\"exclusivity_ok\":{},\"worst_edge_overlap\":{},\"worst_edge\":{},\"min_nonedge_overlap\":{},\"hardy_conditions_ok\":{},\"residual_a\":{},\"residual_b\":{},\"p11\":{},\"beta\":{},\"classical_alpha\":{},\"classical_hardy_possible_with_x1\":{},\"classical_hardy_p11\":{},\"worst_edges\":[",
        report.n,
        report.d,
        fmt_f64(report.tol),
        report.exclusivity_ok,
        fmt_f64(report.worst_edge_overlap),
        opt_edge(report.worst_edge),
        fmt_f64(report.min_nonedge_overlap),
        report.hardy_conditions_ok,
        fmt_f64(report.residual_a),
        fmt_f64(report.residual_b),
        fmt_f64(report.p11),
        fmt_f64(report.beta),
        report.classical_alpha,
        opt_bool(report.classical_hardy_possible_with_x1),
        report
            .classical_hardy_p11
            .map(fmt_f64)
            .unwrap_or_else(|| "null".into()),
    );
    for (i, ((a, b), overlap)) in report.worst_edges.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{{\"edge\":[{a},{b}],\"overlap\":{}}}", fmt_f64(*overlap));
    }
    let _ = write!(s, "],\"all_pass\":{}}}", report.all_pass());
    s
}

/// `{"d":5,"points":[{"theta":...,"phi":...,"mult":1},...]}` with the south
/// pole included as a theta = pi entry, points sorted by (theta, phi).
pub fn constellation_to_json(c: &Constellation) -> String {
    let mut entries: Vec<(f64, f64, u32)> = c
        .points()
        .iter()
        .map(|p| (p.theta, p.phi, p.multiplicity))
        .collect();
    if c.south_pole_count() > 0 {
        entries.push((std::f64::consts::PI, 0.0, c.south_pole_count()));
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut s = String::new();
    let _ = write!(s, "{{\"d\":{},\"points\":[", c.dim());
    for (i, (theta, phi, mult)) in entries.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "{{\"theta\":{},\"phi\":{},\"mult\":{mult}}}",
            fmt_f64(*theta),
            fmt_f64(*phi)
        );
    }
    s.push_str("]}");
    s
}

/// Constellations for a whole family: the state under "psi" plus one entry
/// per vertex.
pub fn family_constellations_to_json(
    n: u32,
    d: usize,
    state: &Constellation,
    vectors: &BTreeMap<u32, Constellation>,
) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{{\"n\":{n},\"d\":{d},\"state\":{},\"vectors\":{{",
        constellation_to_json(state)
    );
    for (i, (vertex, c)) in vectors.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "\"{vertex}\":{}", constellation_to_json(c));
    }
    s.push_str("}}");
    s
}

pub fn optimization_to_json(outcome: &OptimizationOutcome) -> String {
    format!(
        "{{\"lambda_max\":{},\"state\":{},\"restarts_used\":{},\"converged\":{},\"iterations\":{}}}",
        fmt_f64(outcome.lambda_max),
        amplitude_list(&outcome.state),
        outcome.restarts_used,
        outcome.converged,
        outcome.iterations
    )
}

pub fn onc_to_json(threshold: &OncThreshold) -> String {
    format!(
        "{{\"n\":{},\"delta\":{},\"epsilon_bound\":{}}}",
        threshold.n,
        fmt_f64(threshold.delta),
        fmt_f64(threshold.epsilon_bound)
    )
}

pub fn kcbs_to_json(n: u32, beta: f64, classical_bound: u32) -> String {
    format!(
        "{{\"n\":{n},\"beta\":{},\"classical_bound\":{classical_bound},\"violation\":{}}}",
        fmt_f64(beta),
        fmt_f64(beta - classical_bound as f64)
    )
}

pub fn hardy_to_json(n: u32, p11: f64, residual_a: f64, residual_b: f64, ok: bool) -> String {
    format!(
        "{{\"n\":{n},\"p11\":{},\"residual_a\":{},\"residual_b\":{},\"conditions_ok\":{ok}}}",
        fmt_f64(p11),
        fmt_f64(residual_a),
        fmt_f64(residual_b)
    )
}

pub fn classical_to_json(graph: &Graph, analysis: &ClassicalAnalysis) -> String {
    format!(
        "{{\"graph\":{},\"alpha\":{},\"hardy_possible_with_x1\":{},\"hardy_consistent_assignments\":{}}}",
        graph_to_json(graph),
        analysis.alpha,
        opt_bool(analysis.hardy_possible_with_x1),
        analysis.hardy_consistent_assignments
    )
}

/// Outcome masks rendered as 0/1 strings, one character per context position.
fn outcome_string(mask: u32, len: usize) -> String {
    (0..len)
        .map(|pos| if mask & (1 << pos) != 0 { '1' } else { '0' })
        .collect()
}

/// Simulation summary. The epsilon proxy is labeled `epsilon_estimate_tv`:
/// it is a total-variation gap, not the defining counterfactual probability.
pub fn simulation_to_json(n: u32, result: &SimulationResult) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{{\"n\":{n},\"shots\":{},\"seed\":{},\"eta\":{},\"empirical_beta\":{},\"empirical_exclusivity_violation\":{},\"epsilon_estimate_tv\":{},\"contexts\":[",
        result.shots,
        result.seed,
        fmt_f64(result.eta),
        fmt_f64(result.empirical_beta),
        fmt_f64(result.empirical_exclusivity_violation),
        fmt_f64(result.epsilon_estimate),
    );
    for (i, hist) in result.histograms.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str("{\"vertices\":[");
        for (j, v) in hist.context.vertices().iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v}");
        }
        s.push_str("],\"counts\":{");
        for (j, (mask, count)) in hist.counts.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            let _ = write!(
                s,
                "\"{}\":{count}",
                outcome_string(*mask, hist.context.len())
            );
        }
        s.push_str("}}");
    }
    s.push_str("]}");
    s
}

/// Header for the sweep CSV output.
pub const SWEEP_CSV_HEADER: &str = "n,eta,seed,shots,empirical_beta,epsilon_estimate,epsilon_bound";

/// One sweep CSV row; floats use shortest exact formatting.
pub fn sweep_csv_row(
    n: u32,
    eta: f64,
    seed: u64,
    shots: u64,
    empirical_beta: f64,
    epsilon_estimate: f64,
    epsilon_bound: f64,
) -> String {
    format!("{n},{eta},{seed},{shots},{empirical_beta},{epsilon_estimate},{epsilon_bound}")
}
