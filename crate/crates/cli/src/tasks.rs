//! Task execution: each config task maps to core computations, one JSON
//! report and possibly a CSV curve file. Errors that mean the request can
//! never succeed (wrong dimension, unsupported order, bad domain) are
//! usage errors; errors from a computation that ran out of accuracy or
//! budget mark the task as failed instead.

use crate::config::{IdentityVariant, TaskSpec};
use crate::report::Emitter;
use serde_json::{json, Map, Value};
use ssf_core::error::SsfError;
use ssf_core::invariants::{heat_invariant_closed, heat_invariant_recurrence, xn, MAX_HEAT, MAX_XN};
use ssf_core::potential::Potential;
use ssf_core::radial3d;
use ssf_core::scattering1d as s1d;
use ssf_core::tracelab;

pub enum TaskError {
    /// The request is malformed or outside the capability envelope.
    Usage(String),
    /// Emission failed (I/O and similar).
    Io(String),
}

/// Split core errors by whether a retry with the same config could help.
fn classify(e: SsfError) -> Result<String, TaskError> {
    match e {
        SsfError::Unsupported(_) | SsfError::Invalid(_) | SsfError::Domain(_) => {
            Err(TaskError::Usage(e.to_string()))
        }
        SsfError::Accuracy { .. } | SsfError::Budget(_) => Ok(e.to_string()),
    }
}

/// Run one task; returns whether its pass flag is set. `order` is the
/// execution position used in artifact names.
pub fn run_task(
    p: &Potential,
    order: usize,
    task: &TaskSpec,
    em: &Emitter,
) -> Result<bool, TaskError> {
    let name = format!("report_{:02}_{}.json", order, task.kind_name());
    match task {
        TaskSpec::Invariants { max_n } => invariants_task(p, &name, *max_n, em),
        TaskSpec::Ssf { grid } => ssf_task(p, &name, order, grid, em),
        TaskSpec::Identities {
            variant,
            orders,
            tolerance,
        } => identities_task(p, &name, *variant, orders, *tolerance, em),
        TaskSpec::Heat { times, tolerance } => heat_task(p, &name, times, *tolerance, em),
        TaskSpec::Resolvent { z, power, tolerance } => {
            resolvent_task(p, &name, *z, *power, *tolerance, em)
        }
        TaskSpec::CheckAll { tolerance } => check_all_task(p, &name, *tolerance, em),
    }
}

fn invariants_task(
    p: &Potential,
    name: &str,
    max_n: u32,
    em: &Emitter,
) -> Result<bool, TaskError> {
    let d = p.dim();
    if max_n > MAX_HEAT {
        return Err(TaskError::Usage(format!(
            "invariants task order {max_n} exceeds cap {MAX_HEAT}"
        )));
    }
    let mut entries = Vec::new();
    let mut pass = true;
    for n in 1..=max_n {
        let closed = heat_invariant_closed(n, d).map_err(|e| TaskError::Usage(e.to_string()))?;
        let recurrence =
            heat_invariant_recurrence(n, d).map_err(|e| TaskError::Usage(e.to_string()))?;
        let routes_agree = closed == recurrence;
        pass &= routes_agree;
        entries.push(json!({
            "order": n,
            "density": closed.emit(),
            "routes_agree": routes_agree,
        }));
    }
    let mut operators = Vec::new();
    for n in 1..=max_n.min(MAX_XN) {
        let op = xn(n, d).map_err(|e| TaskError::Usage(e.to_string()))?;
        operators.push(json!({ "order": n, "operator": op.emit() }));
    }
    let mut body = Map::new();
    body.insert("dim".into(), json!(d));
    body.insert("invariants".into(), Value::Array(entries));
    body.insert("operators".into(), Value::Array(operators));
    em.json_report(name, "invariants", &["heat_expansion"], pass, body)
        .map_err(TaskError::Io)?;
    Ok(pass)
}

fn ssf_task(
    p: &Potential,
    name: &str,
    order: usize,
    grid: &[f64],
    em: &Emitter,
) -> Result<bool, TaskError> {
    let csv_name = format!("ssf_curve_{:02}.csv", order);
    let mut body = Map::new();
    match p.dim() {
        1 => {
            let curve = match s1d::ssf_1d(p, grid) {
                Ok(c) => c,
                Err(e) => {
                    let msg = classify(e)?;
                    body.insert("error".into(), Value::String(msg));
                    em.json_report(
                        name,
                        "ssf",
                        &["spectral_shift", "perturbation_determinant"],
                        false,
                        body,
                    )
                    .map_err(TaskError::Io)?;
                    return Ok(false);
                }
            };
            let rows: Vec<Vec<String>> = curve
                .lambda
                .iter()
                .zip(&curve.det)
                .zip(&curve.xi)
                .map(|((l, d), x)| {
                    vec![em.cell(*l), em.cell(d.re), em.cell(d.im), em.cell(*x)]
                })
                .collect();
            let csv = em
                .csv(&csv_name, &["lambda", "re_det", "im_det", "xi"], &rows)
                .map_err(TaskError::Io)?;
            let th = s1d::threshold_report_1d(p).map_err(|e| TaskError::Usage(e.to_string()))?;
            body.insert("curve_file".into(), json!(csv.file_name().unwrap().to_str()));
            body.insert("nodes".into(), json!(curve.lambda.len()));
            body.insert("negative_levels".into(), json!(curve.negative_part));
            body.insert("anchor_defect".into(), em.num(curve.anchor_defect));
            body.insert(
                "threshold".into(),
                json!({
                    "xi_zero_plus": th.xi_zero_plus,
                    "extrapolation_error": th.extrapolation_error,
                    "bound_count": th.bound_count,
                    "resonant": th.resonant,
                }),
            );
            em.json_report(
                name,
                "ssf",
                &["spectral_shift", "perturbation_determinant"],
                true,
                body,
            )
            .map_err(TaskError::Io)?;
            Ok(true)
        }
        3 => {
            let curve = match radial3d::ssf_3d(p, grid) {
                Ok(c) => c,
                Err(e) => {
                    let msg = classify(e)?;
                    body.insert("error".into(), Value::String(msg));
                    em.json_report(name, "ssf", &["spectral_shift", "partial_wave_sum"], false, body)
                        .map_err(TaskError::Io)?;
                    return Ok(false);
                }
            };
            let reg = radial3d::regularized_values(p, &curve)
                .map_err(|e| TaskError::Usage(e.to_string()))?;
            let rows: Vec<Vec<String>> = curve
                .lambda
                .iter()
                .zip(&curve.xi)
                .zip(reg.iter())
                .zip(curve.l_max.iter().zip(&curve.tail_error))
                .map(|(((l, x), r), (lm, te))| {
                    vec![
                        em.cell(*l),
                        em.cell(*x),
                        em.cell(*r),
                        lm.to_string(),
                        em.cell(*te),
                    ]
                })
                .collect();
            let csv = em
                .csv(
                    &csv_name,
                    &["lambda", "xi", "xi_regularized", "l_max", "tail_error"],
                    &rows,
                )
                .map_err(TaskError::Io)?;
            body.insert("curve_file".into(), json!(csv.file_name().unwrap().to_str()));
            body.insert("nodes".into(), json!(curve.lambda.len()));
            body.insert("negative_levels".into(), json!(curve.negative_part));
            em.json_report(name, "ssf", &["spectral_shift", "partial_wave_sum"], true, body)
                .map_err(TaskError::Io)?;
            Ok(true)
        }
        d => Err(TaskError::Usage(format!(
            "no shift-function route in dimension {d}"
        ))),
    }
}

fn identity_value(p: &Potential, variant: IdentityVariant, n: u32) -> ssf_core::error::Result<tracelab::IdentityReport> {
    match variant {
        IdentityVariant::Integer => tracelab::trace_identity_integer(p, n),
        IdentityVariant::Half => tracelab::trace_identity_half(p, n),
    }
}

fn identities_task(
    p: &Potential,
    name: &str,
    variant: IdentityVariant,
    orders: &[u32],
    tolerance: f64,
    em: &Emitter,
) -> Result<bool, TaskError> {
    let tag = match variant {
        IdentityVariant::Integer => "integer_trace_identity",
        IdentityVariant::Half => "half_integer_trace_identity",
    };
    let mut reports = Vec::new();
    let mut pass = true;
    for &n in orders {
        match identity_value(p, variant, n) {
            Ok(rep) => {
                let ok = rep.pass && rep.residual <= tolerance;
                pass &= ok;
                let mut v = serde_json::to_value(&rep)
                    .map_err(|e| TaskError::Io(format!("cannot serialize report: {e}")))?;
                if let Value::Object(ref mut m) = v {
                    m.insert("within_tolerance".into(), Value::Bool(ok));
                }
                reports.push(v);
            }
            Err(e) => {
                let msg = classify(e)?;
                pass = false;
                reports.push(json!({ "order": n, "error": msg }));
            }
        }
    }
    let mut body = Map::new();
    body.insert("tolerance".into(), em.num(tolerance));
    body.insert("reports".into(), Value::Array(reports));
    em.json_report(name, tag, &[tag, "spectral_shift"], pass, body)
        .map_err(TaskError::Io)?;
    Ok(pass)
}

fn heat_task(
    p: &Potential,
    name: &str,
    times: &[f64],
    tolerance: f64,
    em: &Emitter,
) -> Result<bool, TaskError> {
    let mut rows = Vec::new();
    let mut pass = true;
    for &t in times {
        match tracelab::heat_trace_diff(p, t) {
            Ok(r) => {
                let vals = [r.via_ssf, r.via_oracle, r.via_series];
                let mut gap: f64 = 0.0;
                for i in 0..3 {
                    for j in i + 1..3 {
                        let scale = vals[i].abs().max(vals[j].abs()).max(f64::MIN_POSITIVE);
                        gap = gap.max((vals[i] - vals[j]).abs() / scale);
                    }
                }
                let ok = gap <= tolerance;
                pass &= ok;
                rows.push(json!({
                    "t": t,
                    "via_ssf": r.via_ssf,
                    "via_oracle": r.via_oracle,
                    "via_series": r.via_series,
                    "max_pairwise_rel": gap,
                    "within_tolerance": ok,
                }));
            }
            Err(e) => {
                let msg = classify(e)?;
                pass = false;
                rows.push(json!({ "t": t, "error": msg }));
            }
        }
    }
    let mut body = Map::new();
    body.insert("tolerance".into(), em.num(tolerance));
    body.insert("times".into(), Value::Array(rows));
    em.json_report(
        name,
        "heat",
        &["heat_expansion", "trace_formula"],
        pass,
        body,
    )
    .map_err(TaskError::Io)?;
    Ok(pass)
}

fn resolvent_task(
    p: &Potential,
    name: &str,
    z: [f64; 2],
    power: u32,
    tolerance: f64,
    em: &Emitter,
) -> Result<bool, TaskError> {
    let zc = ssf_core::Complex64::new(z[0], z[1]);
    let mut body = Map::new();
    body.insert("z".into(), json!([z[0], z[1]]));
    body.insert("power".into(), json!(power));
    body.insert("tolerance".into(), em.num(tolerance));
    let pass = match tracelab::resolvent_trace_diff(p, zc, power) {
        Ok(r) => {
            let scale = r.via_ssf.norm().max(f64::MIN_POSITIVE);
            let rel = (r.via_series - r.via_ssf).norm() / scale;
            let ok = rel <= tolerance;
            body.insert(
                "via_ssf".into(),
                json!([r.via_ssf.re, r.via_ssf.im]),
            );
            body.insert(
                "via_series".into(),
                json!([r.via_series.re, r.via_series.im]),
            );
            body.insert(
                "via_oracle".into(),
                json!([r.via_oracle.re, r.via_oracle.im]),
            );
            body.insert(
                "series_terms".into(),
                Value::Array(
                    r.series_terms
                        .iter()
                        .map(|c| json!([c.re, c.im]))
                        .collect(),
                ),
            );
            body.insert("series_vs_quadrature_rel".into(), em.num(rel));
            ok
        }
        Err(e) => {
            let msg = classify(e)?;
            body.insert("error".into(), Value::String(msg));
            false
        }
    };
    em.json_report(
        name,
        "resolvent",
        &["resolvent_expansion", "trace_formula"],
        pass,
        body,
    )
    .map_err(TaskError::Io)?;
    Ok(pass)
}

struct SubCheck {
    name: &'static str,
    value: f64,
    bound: f64,
}

impl SubCheck {
    fn passes(&self) -> bool {
        self.value.is_finite() && self.value <= self.bound
    }
}

fn check_all_task(
    p: &Potential,
    name: &str,
    tolerance: f64,
    em: &Emitter,
) -> Result<bool, TaskError> {
    let mut checks: Vec<SubCheck> = Vec::new();
    let mut errors: Vec<String> = Vec::new();
    match p.dim() {
        1 => {
            match s1d::threshold_report_1d(p) {
                Ok(th) => checks.push(SubCheck {
                    name: "threshold_step_rule",
                    value: th.integer_defect.min(th.half_defect),
                    bound: (10.0 * th.extrapolation_error).max(2e-3),
                }),
                Err(e) => errors.push(classify(e)?),
            }
            match tracelab::birman_krein_check(p, &[0.5, 1.0, 2.0, 4.0, 8.0]) {
                Ok(bk) => checks.push(SubCheck {
                    name: "determinant_phase_defect",
                    value: bk.residual,
                    bound: tolerance,
                }),
                Err(e) => errors.push(classify(e)?),
            }
            match tracelab::trace_identity_integer(p, 1) {
                Ok(rep) => checks.push(SubCheck {
                    name: "integer_identity_n1",
                    value: rep.residual,
                    bound: tolerance,
                }),
                Err(e) => errors.push(classify(e)?),
            }
            match tracelab::trace_identity_half(p, 0) {
                Ok(rep) => checks.push(SubCheck {
                    name: "half_identity_n0",
                    value: rep.residual,
                    bound: tolerance,
                }),
                Err(e) => errors.push(classify(e)?),
            }
        }
        3 => {
            match radial3d::levinson_check_3d(p) {
                Ok(th) => checks.push(SubCheck {
                    name: "threshold_step_rule",
                    value: th.integer_defect.min(th.half_defect),
                    bound: (10.0 * th.extrapolation_error).max(2e-3),
                }),
                Err(e) => errors.push(classify(e)?),
            }
            match tracelab::birman_krein_check(p, &[1.0, 4.0, 9.0]) {
                Ok(bk) => checks.push(SubCheck {
                    name: "determinant_phase_defect",
                    value: bk.residual,
                    bound: tolerance.max(1e-3),
                }),
                Err(e) => errors.push(classify(e)?),
            }
            match tracelab::trace_identity_integer(p, 1) {
                Ok(rep) => checks.push(SubCheck {
                    name: "integer_identity_n1",
                    value: rep.residual,
                    bound: tolerance.max(1e-2),
                }),
                Err(e) => errors.push(classify(e)?),
            }
        }
        d => {
            return Err(TaskError::Usage(format!(
                "no consistency sweep in dimension {d}"
            )))
        }
    }
    let pass = errors.is_empty() && checks.iter().all(SubCheck::passes);
    let mut body = Map::new();
    body.insert("tolerance".into(), em.num(tolerance));
    body.insert(
        "checks".into(),
        Value::Array(
            checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "value": c.value,
                        "bound": c.bound,
                        "pass": c.passes(),
                    })
                })
                .collect(),
        ),
    );
    if !errors.is_empty() {
        body.insert(
            "errors".into(),
            Value::Array(errors.into_iter().map(Value::String).collect()),
        );
    }
    let quantities: &[&str] = if p.dim() == 1 {
        &[
            "levinson",
            "birman_krein",
            "integer_trace_identity",
            "half_integer_trace_identity",
        ]
    } else {
        &["levinson", "birman_krein", "integer_trace_identity"]
    };
    em.json_report(name, "check_all", quantities, pass, body)
        .map_err(TaskError::Io)?;
    Ok(pass)
}
