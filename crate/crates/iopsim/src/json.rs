//! JSON encodings for operators, measurement systems, condensation
//! structures, branch decompositions and scenario reports.
//!
//! Operators use `{"dim": n, "entries": [[re, im], ...]}` in row-major order.
//! Report objects are keyed maps with sorted keys, so identical reports
//! serialise to identical bytes. Non-finite numbers never appear as JSON
//! numbers: they are written as the strings `"inf"`, `"-inf"` or `"nan"`.

use iopsim_core::composite::BranchDecomposition;
use iopsim_core::condensation::CondensationStructure;
use iopsim_core::scenarios::{Check, ScenarioReport, Value};
use iopsim_core::{CMatrix, Complex64, MeasurementSystem};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value as Json};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl OperatorJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        assert!(m.is_square(), "operator JSON holds square matrices");
        Self {
            dim: m.rows(),
            entries: m.as_slice().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        if self.dim == 0 {
            return Err(CliError::Parse("operator dim must be positive".into()));
        }
        let expected = self.dim.checked_mul(self.dim).unwrap_or(usize::MAX);
        if self.entries.len() != expected {
            return Err(CliError::Parse(format!(
                "operator of dim {} needs {} entries, found {}",
                self.dim,
                expected,
                self.entries.len()
            )));
        }
        let data = self.entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        Ok(CMatrix::new(self.dim, self.dim, data)?)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(OperatorJson),
    Many(Vec<OperatorJson>),
}

/// Parses a single operator object or an array of them.
pub fn parse_operators(text: &str) -> Result<Vec<CMatrix>, CliError> {
    let parsed: OneOrMany =
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("operator file: {e}")))?;
    let list = match parsed {
        OneOrMany::One(op) => vec![op],
        OneOrMany::Many(ops) => ops,
    };
    if list.is_empty() {
        return Err(CliError::Parse("operator file holds no operators".into()));
    }
    list.iter().map(OperatorJson::to_matrix).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementJson {
    pub labels: Vec<String>,
    /// Scale value `f(m)` per label.
    pub values: Vec<f64>,
    pub kraus: Vec<OperatorJson>,
}

impl MeasurementJson {
    pub fn from_system(ms: &MeasurementSystem) -> Self {
        Self {
            labels: ms.labels().to_vec(),
            values: ms.values().to_vec(),
            kraus: ms.kraus().iter().map(OperatorJson::from_matrix).collect(),
        }
    }

    pub fn to_system(&self) -> Result<MeasurementSystem, CliError> {
        let kraus = self.kraus.iter().map(OperatorJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
        Ok(MeasurementSystem::new(self.labels.clone(), kraus, self.values.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondensationJson {
    pub labels: Vec<String>,
    pub projectors: Vec<OperatorJson>,
    pub period: [f64; 2],
}

impl CondensationJson {
    pub fn from_structure(c: &CondensationStructure) -> Self {
        let (t1, t2) = c.period();
        Self {
            labels: c.labels().to_vec(),
            projectors: c.projectors().iter().map(OperatorJson::from_matrix).collect(),
            period: [t1, t2],
        }
    }

    pub fn to_structure(&self) -> Result<CondensationStructure, CliError> {
        let projectors = self
            .projectors
            .iter()
            .map(OperatorJson::to_matrix)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CondensationStructure::new(
            self.labels.clone(),
            projectors,
            (self.period[0], self.period[1]),
        )?)
    }
}

/// A finite number, or its name as a string.
pub fn number(x: f64) -> Json {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn numbers(xs: &[f64]) -> Json {
    Json::Array(xs.iter().map(|x| number(*x)).collect())
}

pub fn operator(m: &CMatrix) -> Json {
    if m.is_square() {
        json!({
            "dim": m.rows(),
            "entries": m.as_slice().iter().map(|z| vec![number(z.re), number(z.im)]).collect::<Vec<_>>(),
        })
    } else {
        json!({
            "rows": m.rows(),
            "cols": m.cols(),
            "entries": m.as_slice().iter().map(|z| vec![number(z.re), number(z.im)]).collect::<Vec<_>>(),
        })
    }
}

pub fn branches(b: &BranchDecomposition) -> Json {
    Json::Array(
        b.branches
            .iter()
            .map(|br| {
                json!({
                    "label": br.label,
                    "weight": number(br.weight),
                    "residual": number(br.residual),
                    "rho_s": operator(br.rho_s.matrix()),
                    "rho_t": operator(br.rho_t.matrix()),
                })
            })
            .collect(),
    )
}

pub fn value(v: &Value) -> Json {
    match v {
        Value::Bool(b) => json!(b),
        Value::Int(i) => json!(i),
        Value::Real(x) => number(*x),
        Value::Text(s) => json!(s),
        Value::Reals(xs) => numbers(xs),
        Value::Texts(ts) => json!(ts),
        Value::Labeled(pairs) => {
            Json::Array(pairs.iter().map(|(l, x)| json!({"label": l, "value": number(*x)})).collect())
        }
        Value::Series(rows) => Json::Array(rows.iter().map(|r| numbers(r)).collect()),
        Value::Matrix(m) => operator(m),
        Value::Branches(b) => branches(b),
    }
}

fn check(c: &Check) -> Json {
    json!({
        "description": c.description,
        "kind": c.kind.as_str(),
        "passed": c.passed,
        "residual": number(c.residual),
        "tolerance": number(c.tolerance),
    })
}

fn keyed(pairs: &[(String, Value)]) -> Json {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.clone(), value(v));
    }
    Json::Object(map)
}

pub fn report(r: &ScenarioReport) -> Json {
    json!({
        "scenario": r.name,
        "passed": r.all_passed(),
        "inputs": keyed(&r.inputs),
        "outputs": keyed(&r.outputs),
        "checks": r.checks.iter().map(check).collect::<Vec<_>>(),
        "notes": r.notes,
    })
}

/// Pretty-printed report followed by a newline.
pub fn report_string(r: &ScenarioReport) -> String {
    let mut s = serde_json::to_string_pretty(&report(r)).expect("report JSON is always serialisable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use iopsim_core::iop::max_iop;

    #[test]
    fn operator_round_trip() {
        let m = CMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.5, 0.0),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&OperatorJson::from_matrix(&m)).unwrap();
        assert_eq!(parse_operators(&text).unwrap(), vec![m]);
    }

    #[test]
    fn array_of_operators() {
        let text = r#"[{"dim":1,"entries":[[1,0]]},{"dim":1,"entries":[[0.5,0]]}]"#;
        assert_eq!(parse_operators(text).unwrap().len(), 2);
    }

    #[test]
    fn malformed_operators() {
        assert!(parse_operators(r#"{"dim":2,"entries":[[1,0]]}"#).is_err());
        assert!(parse_operators(r#"{"dim":0,"entries":[]}"#).is_err());
        assert!(parse_operators(r#"{"dim":1,"entries":[[1,0]],"extra":1}"#).is_err());
        assert!(parse_operators("[]").is_err());
        assert!(parse_operators("not json").is_err());
    }

    #[test]
    fn non_finite_numbers_become_strings() {
        assert_eq!(number(f64::INFINITY), json!("inf"));
        assert_eq!(number(f64::NEG_INFINITY), json!("-inf"));
        assert_eq!(number(f64::NAN), json!("nan"));
        assert_eq!(number(0.25), json!(0.25));
    }

    #[test]
    fn matrix_value_uses_operator_schema() {
        let j = value(&Value::Matrix(max_iop(2).into_matrix()));
        assert_eq!(j["dim"], json!(2));
        assert_eq!(j["entries"][0], json!([0.5, 0.0]));
        assert_eq!(j["entries"][1], json!([0.0, 0.0]));
    }
}
