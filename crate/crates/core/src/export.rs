//! JSON and CSV renderings of the library's data and reports.
//!
//! High-precision reals are written as decimal strings and rationals as
//! `"num/den"`, so no value passes through a binary double. A CSV column and
//! the JSON field it mirrors carry the same string.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::condition::ConditionReport;
use crate::energy::EnergyReport;
use crate::points::PointSet;
use crate::polynomial::{DensePolynomial, FactorizedPolynomial};
use crate::precision::{float_string, rational_string};
use crate::sums::SumCheck;
use crate::verification::VerificationReport;

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize infallibly");
    s.push('\n');
    s
}

/// Adds a `provenance` object in front of the fields of a JSON object.
pub fn with_provenance(doc: Value, provenance: &Value) -> Value {
    match doc {
        Value::Object(fields) => {
            let mut out = Map::new();
            out.insert("provenance".into(), provenance.clone());
            out.extend(fields);
            Value::Object(out)
        }
        other => json!({ "provenance": provenance, "data": other }),
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// `{M, N, parallels: [{j, r, h, phase}], points: [[x, y, z]]}`.
pub fn point_set_json(set: &PointSet) -> Value {
    let parallels: Vec<Value> = set
        .parallels()
        .iter()
        .map(|p| json!({"j": p.j, "r": p.r, "h": rational_string(&p.h), "phase": p.phase}))
        .collect();
    let points: Vec<Value> = set
        .iter()
        .map(|(_, p)| json!([float_string(&p.x), float_string(&p.y), float_string(&p.z)]))
        .collect();
    json!({"M": set.m(), "N": set.n(), "parallels": parallels, "points": points})
}

/// `x,y,z,parallel_index`.
pub fn points_csv(set: &PointSet) -> String {
    csv_string(
        &["x", "y", "z", "parallel_index"],
        set.iter().map(|(j, p)| {
            vec![float_string(&p.x), float_string(&p.y), float_string(&p.z), j.to_string()]
        }),
    )
}

/// `{N, factors: [{r, s}]}`.
pub fn factors_json(f: &FactorizedPolynomial) -> Value {
    let factors: Vec<Value> = f
        .factors()
        .iter()
        .map(|x| json!({"r": x.r, "s": rational_string(&x.s)}))
        .collect();
    json!({"N": f.degree(), "factors": factors})
}

/// `index,r,s`.
pub fn factors_csv(f: &FactorizedPolynomial) -> String {
    csv_string(
        &["index", "r", "s"],
        f.factors()
            .iter()
            .enumerate()
            .map(|(i, x)| vec![i.to_string(), x.r.to_string(), rational_string(&x.s)]),
    )
}

/// `{N, coeffs: ["num/den", ...]}`, lowest degree first.
pub fn dense_json(d: &DensePolynomial) -> Value {
    let coeffs: Vec<String> = d.coeffs().iter().map(rational_string).collect();
    json!({"N": d.degree(), "coeffs": coeffs})
}

/// `index,numerator,denominator`.
pub fn coeffs_csv(d: &DensePolynomial) -> String {
    csv_string(
        &["index", "numerator", "denominator"],
        d.coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| vec![i.to_string(), a.numer().to_string(), a.denom().to_string()]),
    )
}

pub fn condition_json(r: &ConditionReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn verdict(v: Option<bool>) -> String {
    match v {
        Some(true) => "true".into(),
        Some(false) => "false".into(),
        None => "inconclusive".into(),
    }
}

pub const CONDITION_CSV_HEADER: [&str; 11] = [
    "M",
    "N",
    "route",
    "precision_bits",
    "mu_max",
    "log_mu_max",
    "mu_over_sqrt_np1",
    "le_N",
    "le_19half_sqrt",
    "ge_lower",
    "certified",
];

pub fn condition_csv_row(r: &ConditionReport) -> Vec<String> {
    vec![
        r.m.to_string(),
        r.n.to_string(),
        r.route.name().to_string(),
        r.precision_bits.to_string(),
        float_string(&r.mu_max),
        float_string(&r.log_mu_max),
        float_string(&r.mu_over_sqrt_np1()),
        verdict(r.verdicts.le_n),
        verdict(r.verdicts.le_19half_sqrt),
        verdict(r.verdicts.ge_lower),
        r.certified.to_string(),
    ]
}

/// One summary row per report.
pub fn condition_csv(reports: &[ConditionReport]) -> String {
    csv_string(&CONDITION_CSV_HEADER, reports.iter().map(condition_csv_row))
}

pub fn verification_json(r: &VerificationReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

fn params_string(p: &std::collections::BTreeMap<String, String>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

/// One row per cell: `lemma,params,side,lhs,rhs,margin`.
pub fn verification_csv(reports: &[VerificationReport]) -> String {
    csv_string(
        &["lemma", "params", "side", "lhs", "rhs", "margin"],
        reports.iter().flat_map(|r| {
            r.cells.iter().map(move |c| {
                vec![
                    r.lemma.clone(),
                    params_string(&c.params),
                    match c.side {
                        crate::verification::Side::Lower => "lower".into(),
                        crate::verification::Side::Upper => "upper".into(),
                    },
                    float_string(&c.lhs),
                    float_string(&c.rhs),
                    float_string(&c.margin),
                ]
            })
        }),
    )
}

/// One row per report: `lemma,M_lo,M_hi,informational,cells,worst_margin,pass`.
pub fn verification_summary_csv(reports: &[VerificationReport]) -> String {
    csv_string(
        &["lemma", "M_lo", "M_hi", "informational", "cells", "worst_margin", "pass"],
        reports.iter().map(|r| {
            vec![
                r.lemma.clone(),
                r.m_range[0].to_string(),
                r.m_range[1].to_string(),
                r.informational.to_string(),
                r.cells.len().to_string(),
                r.worst_margin.as_ref().map_or_else(String::new, float_string),
                r.pass.to_string(),
            ]
        }),
    )
}

/// `M,N,E,kappaN2,halfNlogN,residual`.
pub fn energy_csv(reports: &[EnergyReport]) -> String {
    csv_string(
        &["M", "N", "E", "kappaN2", "halfNlogN", "residual"],
        reports.iter().map(|r| {
            vec![
                r.m.to_string(),
                r.n.to_string(),
                float_string(&r.energy),
                float_string(&r.kappa_n2),
                float_string(&r.half_n_log_n),
                float_string(&r.residual),
            ]
        }),
    )
}

/// `id,params,value,bound,margin,pass`.
pub fn sums_csv(checks: &[SumCheck]) -> String {
    csv_string(
        &["id", "params", "value", "bound", "margin", "pass"],
        checks.iter().map(|c| {
            vec![
                c.id.clone(),
                params_string(&c.params),
                c.exact.clone().unwrap_or_else(|| float_string(&c.value)),
                float_string(&c.bound),
                float_string(&c.margin),
                c.pass.to_string(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::build_point_set;
    use crate::polynomial::{canonical_polynomial, expand};
    use crate::precision::Precision;

    #[test]
    fn factor_json_matches_exact_table() {
        let v = factors_json(&canonical_polynomial(2).unwrap());
        assert_eq!(v["N"], 16);
        let pairs: Vec<(u64, &str)> = v["factors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|f| (f["r"].as_u64().unwrap(), f["s"].as_str().unwrap()))
            .collect();
        assert_eq!(pairs, [(8, "1/1"), (4, "49/1"), (4, "1/49")]);
    }

    #[test]
    fn points_csv_rows() {
        let set = build_point_set(1, None, Precision::default()).unwrap();
        let csv = points_csv(&set);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,z,parallel_index");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].ends_with(",1"));
    }

    #[test]
    fn coeff_csv_and_json() {
        let d = expand(&canonical_polynomial(1).unwrap());
        assert_eq!(coeffs_csv(&d), "index,numerator,denominator\n0,-1,1\n1,0,1\n2,0,1\n3,0,1\n4,1,1\n");
        assert_eq!(dense_json(&d)["coeffs"][0], "-1/1");
    }

    #[test]
    fn provenance_goes_first() {
        let v = with_provenance(json!({"a": 1}), &json!({"tool": "x"}));
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.starts_with("{\"provenance\""));
    }
}
