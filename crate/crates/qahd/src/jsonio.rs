//! JSON views of expressions, frequency expressions, pairings, and law
//! reports. Complex scalars serialize as {"re": .., "im": ..}; fields
//! that do not apply to a family are omitted rather than set to null.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{QahdError, Result};
use crate::freq::{FreqExpr, FreqTerm};
use crate::laws::{IndependenceReport, LawReport};
use crate::pairing::PairingResult;
use crate::term::{canonicalize, delta, pfminus, pfplus, xminus, xplus, QahdExpr, QahdTerm};

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn complex_from(value: &Value, what: &str) -> Result<Complex64> {
    let bad = || QahdError::Precondition(format!("json: {what} must be {{re, im}}"));
    let obj = value.as_object().ok_or_else(bad)?;
    let re = obj.get("re").and_then(Value::as_f64).ok_or_else(bad)?;
    let im = obj.get("im").and_then(Value::as_f64).ok_or_else(bad)?;
    Ok(Complex64::new(re, im))
}

/// Expression as a list of term records:
/// {family, degree?, n?, k?, m?, coeff}.
pub fn expr_to_json(expr: &QahdExpr) -> Value {
    let terms: Vec<Value> = expr
        .terms()
        .iter()
        .map(|&(term, coeff)| match term {
            QahdTerm::XPlusLog { degree, log_power } => json!({
                "family": "xplus",
                "degree": complex_json(degree),
                "k": log_power,
                "coeff": complex_json(coeff),
            }),
            QahdTerm::XMinusLog { degree, log_power } => json!({
                "family": "xminus",
                "degree": complex_json(degree),
                "k": log_power,
                "coeff": complex_json(coeff),
            }),
            QahdTerm::PfPlusLog { pole_order, log_power } => json!({
                "family": "pfplus",
                "n": pole_order,
                "k": log_power,
                "coeff": complex_json(coeff),
            }),
            QahdTerm::PfMinusLog { pole_order, log_power } => json!({
                "family": "pfminus",
                "n": pole_order,
                "k": log_power,
                "coeff": complex_json(coeff),
            }),
            QahdTerm::DeltaDeriv { delta_order } => json!({
                "family": "delta",
                "m": delta_order,
                "coeff": complex_json(coeff),
            }),
        })
        .collect();
    Value::Array(terms)
}

fn field_u32(obj: &Map<String, Value>, key: &str, family: &str) -> Result<u32> {
    obj.get(key)
        .and_then(Value::as_u64)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| {
            QahdError::Precondition(format!(
                "json: family {family} needs a small nonnegative integer field '{key}'"
            ))
        })
}

/// Inverse of expr_to_json, recanonicalizing on the way in.
pub fn expr_from_json(value: &Value) -> Result<QahdExpr> {
    let records = value
        .as_array()
        .ok_or_else(|| QahdError::Precondition("json: expression must be an array".into()))?;
    let mut raw = Vec::with_capacity(records.len());
    for record in records {
        let obj = record.as_object().ok_or_else(|| {
            QahdError::Precondition("json: each term must be an object".into())
        })?;
        let family = obj
            .get("family")
            .and_then(Value::as_str)
            .ok_or_else(|| QahdError::Precondition("json: term needs a 'family'".into()))?;
        let coeff = complex_from(
            obj.get("coeff")
                .ok_or_else(|| QahdError::Precondition("json: term needs a 'coeff'".into()))?,
            "coeff",
        )?;
        let term = match family {
            "xplus" | "xminus" => {
                let degree = complex_from(
                    obj.get("degree").ok_or_else(|| {
                        QahdError::Precondition(format!(
                            "json: family {family} needs a 'degree'"
                        ))
                    })?,
                    "degree",
                )?;
                let k = field_u32(obj, "k", family)?;
                if family == "xplus" { xplus(degree, k)? } else { xminus(degree, k)? }
            }
            "pfplus" | "pfminus" => {
                let n = field_u32(obj, "n", family)?;
                let k = field_u32(obj, "k", family)?;
                if family == "pfplus" { pfplus(n, k)? } else { pfminus(n, k)? }
            }
            "delta" => delta(field_u32(obj, "m", family)?),
            other => {
                return Err(QahdError::Precondition(format!(
                    "json: unknown family '{other}'"
                )))
            }
        };
        raw.push((term, coeff));
    }
    canonicalize(raw)
}

/// Frequency expression as a list of term records:
/// {family, degree?, n?, k, coeff}.
pub fn freq_to_json(expr: &FreqExpr) -> Value {
    let terms: Vec<Value> = expr
        .terms()
        .iter()
        .map(|&(term, coeff)| match term {
            FreqTerm::XiPlusI0PowLog { exponent, log_power } => json!({
                "family": "xiplusi0",
                "degree": complex_json(exponent),
                "k": log_power,
                "coeff": complex_json(coeff),
            }),
            FreqTerm::XiMinusI0PowLog { exponent, log_power } => json!({
                "family": "ximinusi0",
                "degree": complex_json(exponent),
                "k": log_power,
                "coeff": complex_json(coeff),
            }),
            FreqTerm::XiPolyLogPlus { poly_power, log_power } => json!({
                "family": "xipolylog",
                "n": poly_power,
                "k": log_power,
                "coeff": complex_json(coeff),
            }),
        })
        .collect();
    Value::Array(terms)
}

/// Pairing outcome: {value: {re, im}, error_estimate}.
pub fn pairing_to_json(result: &PairingResult) -> Value {
    json!({
        "value": complex_json(result.value),
        "error_estimate": result.abs_error_estimate,
    })
}

/// Law verification report with all samples.
pub fn law_report_to_json(report: &LawReport) -> Value {
    let samples: Vec<Value> = report
        .samples
        .iter()
        .map(|s| {
            json!({
                "parameters": s.parameters,
                "lhs": complex_json(s.lhs),
                "rhs": complex_json(s.rhs),
                "residual": s.residual,
            })
        })
        .collect();
    json!({
        "law": report.law,
        "tolerance": report.tolerance,
        "samples": samples,
        "max_residual": report.max_residual,
        "passed": report.passed,
    })
}

/// Singular-value summary of an independence check.
pub fn independence_to_json(report: &IndependenceReport) -> Value {
    json!({
        "min_singular_value": report.min_singular_value,
        "max_singular_value": report.max_singular_value,
        "ratio": report.ratio,
        "passed": report.passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::fourier;
    use crate::textio::parse_expr;

    #[test]
    fn expression_terms_carry_only_their_own_fields() {
        let expr = parse_expr("1.5*xplus(-0.5+0.4i,2) + pfplus(2,1) - delta(3)").unwrap();
        let value = expr_to_json(&expr);
        let records = value.as_array().unwrap();
        assert_eq!(records.len(), 3);

        let power = &records[0];
        assert_eq!(power["family"], "xplus");
        assert_eq!(power["degree"]["re"], -0.5);
        assert_eq!(power["degree"]["im"], 0.4);
        assert_eq!(power["k"], 2);
        assert!(power.get("n").is_none());
        assert!(power.get("m").is_none());

        let pf = &records[1];
        assert_eq!(pf["family"], "pfplus");
        assert_eq!(pf["n"], 2);
        assert_eq!(pf["k"], 1);
        assert!(pf.get("degree").is_none());

        let d = &records[2];
        assert_eq!(d["family"], "delta");
        assert_eq!(d["m"], 3);
        assert_eq!(d["coeff"]["re"], -1.0);
        assert!(d.get("k").is_none());
    }

    #[test]
    fn expression_round_trips_through_json() {
        let inputs = [
            "xplus(0.5,1)",
            "-xminus(-0.5+0.4i,2) + 1.25e-3*delta(4)",
            "2-3i*pfplus(3,2) - pfminus(1,0)",
        ];
        for input in inputs {
            let expr = parse_expr(input).unwrap();
            let back = expr_from_json(&expr_to_json(&expr)).unwrap();
            assert_eq!(back, expr);
        }
        assert!(expr_from_json(&expr_to_json(&QahdExpr::zero()))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn bad_json_is_rejected_with_context() {
        assert!(expr_from_json(&json!({"not": "an array"})).is_err());
        assert!(expr_from_json(&json!([{ "family": "nope", "coeff": {"re": 1.0, "im": 0.0} }]))
            .is_err());
        assert!(expr_from_json(&json!([{ "family": "delta" }])).is_err());
        assert!(
            expr_from_json(&json!([{ "family": "xplus", "degree": 3.0,
                "k": 0, "coeff": {"re": 1.0, "im": 0.0} }]))
            .is_err()
        );
    }

    #[test]
    fn frequency_terms_use_their_schema_names() {
        let expr = parse_expr("xplus(0.5,0) + delta(1)").unwrap();
        let value = freq_to_json(&fourier(&expr).unwrap());
        let records = value.as_array().unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0]["family"], "xiplusi0");
        assert_eq!(records[0]["degree"]["re"], -1.5);
        assert_eq!(records[1]["family"], "xipolylog");
        assert_eq!(records[1]["n"], 1);
        assert_eq!(records[1]["k"], 0);
    }

    #[test]
    fn report_serialization_exposes_all_sections() {
        use crate::laws::verify_scaling;
        use crate::testfn::TestFunction;
        let expr = parse_expr("delta(1)").unwrap();
        let phi = TestFunction::hermite(&[0.0, 1.0]).unwrap();
        let report = verify_scaling(&expr, &[phi], &[2.0, 5.0], 1e-9).unwrap();
        let value = law_report_to_json(&report);
        assert_eq!(value["law"], "scaling");
        assert_eq!(value["samples"].as_array().unwrap().len(), 2);
        assert_eq!(value["samples"][0]["parameters"]["a"], 2.0);
        assert!(value["passed"].as_bool().unwrap());
        assert!(value["max_residual"].as_f64().unwrap() <= 1e-9);
    }
}
