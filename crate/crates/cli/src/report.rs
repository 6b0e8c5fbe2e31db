//! JSON reports with reproducible number formatting.

use serde_json::{json, Map, Value};

use schemex_core::detect::RouteVerdict;
use schemex_core::graph::SpectralExcessReport;
use schemex_core::DetectionReport;

/// `v` rounded to 12 significant digits; `-0` becomes `0`, non-finite `null`.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    json!(rounded)
}

fn nums(v: impl IntoIterator<Item = f64>) -> Value {
    Value::Array(v.into_iter().map(num).collect())
}

fn route(r: &RouteVerdict) -> Value {
    json!({
        "verdict": r.verdict.to_string(),
        "ordering": r.ordering,
        "l": r.l,
        "max_residual": num(r.max_residual),
        "witness": r.witness,
    })
}

pub fn detection(report: &DetectionReport, tol: f64) -> Value {
    let sd = &report.spectral;
    let d = report.d;
    let mut routes = Map::new();
    for r in report.routes() {
        routes.insert(r.route.to_string(), route(r));
    }
    let mut residuals = Map::new();
    residuals.insert("pq".into(), num(sd.pq_residual()));
    residuals.insert("q_cross_check".into(), num(sd.q_cross_check()));
    if let Some(kt) = &report.krein {
        residuals.insert("krein_expansion".into(), num(kt.expansion_residual()));
    }
    residuals.insert("coincidence".into(), report.coincidence_residual.map_or(Value::Null, num));
    json!({
        "n": report.n,
        "d": d,
        "valencies": report.valencies,
        "theta": nums(sd.theta()),
        "multiplicities": nums(sd.multiplicities().iter().copied()),
        "P": Value::Array(sd.p_matrix().rows().into_iter().map(|r| nums(r.iter().copied())).collect()),
        "Q": Value::Array(sd.q_matrix().rows().into_iter().map(|r| nums(r.iter().copied())).collect()),
        "krein_min": report.krein.as_ref().map_or(Value::Null, |kt| num(kt.min())),
        "kappa": report.kappa.as_ref().map_or(Value::Null, |k| nums(k.iter().copied())),
        "routes": routes,
        "consensus": report.consensus.to_string(),
        "outcome": report.outcome().to_string(),
        "ordering": report.ordering(),
        "l": report.l(),
        "residuals": residuals,
        "tol": num(tol),
    })
}

pub fn graph(n: usize, r: &SpectralExcessReport) -> Value {
    json!({
        "n": n,
        "theta": nums(r.spectrum.theta().iter().copied()),
        "multiplicities": r.spectrum.multiplicities(),
        "d": r.d,
        "diameter": r.diameter,
        "excess": r.excess,
        "excess_mean": num(r.arithmetic_mean),
        "excess_harmonic_mean": num(r.harmonic_mean),
        "pd_theta0": num(r.pd_at_theta0),
        "drg": r.distance_regular,
        "obstruction": r.obstruction,
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
