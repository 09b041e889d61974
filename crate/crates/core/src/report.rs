//! The full verification suite and its JSON report.
//!
//! Everything inside `checks` is a pure function of the degree bound, so the
//! serialized report is byte-identical across runs. Wall-clock timings live in
//! the separate `timings` field, which is only populated on request.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{AlgebraElement, DegreeBound};
use crate::error::{Error, Result};
use crate::fpgroup;
use crate::stable::{StableCohomology, StableCohomologyTable, TwistedElement};

pub const ARTIFACT_VERSION: &str = concat!("mmm-verify/", env!("CARGO_PKG_VERSION"));

pub const TOR_J_MAX: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_id: &'static str,
    pub statement: &'static str,
    pub status: Status,
    pub per_degree_data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckResult {
    fn new(id: CheckId, data: Value, counterexample: Option<Value>) -> Self {
        CheckResult {
            check_id: id.id(),
            statement: id.statement(),
            status: if counterexample.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            per_degree_data: data,
            counterexample,
        }
    }

    fn from_error(id: CheckId, err: Error) -> Self {
        let counterexample = match &err {
            Error::Falsified { degree, detail, .. } => json!({
                "internal_degree": degree,
                "detail": detail,
            }),
            other => json!({ "error": other.to_string() }),
        };
        CheckResult::new(id, Value::Array(Vec::new()), Some(counterexample))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub artifact_version: &'static str,
    pub degree_bound: usize,
    pub checks: Vec<CheckResult>,
    /// Milliseconds per check id; excluded from the determinism contract.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, u128>>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn check(&self, id: CheckId) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check_id == id.id())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per scalar field of every `per_degree_data` record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,status,record,field,value\n");
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "fail" };
            let records: Vec<&Value> = match &c.per_degree_data {
                Value::Array(items) => items.iter().collect(),
                other => vec![other],
            };
            for (k, record) in records.iter().enumerate() {
                let mut fields = Vec::new();
                flatten("", record, &mut fields);
                for (field, value) in fields {
                    out.push_str(&format!(
                        "{},{status},{k},{field},{}\n",
                        c.check_id,
                        csv_escape(&value)
                    ));
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} (degree bound {})\n",
            self.artifact_version, self.degree_bound
        );
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {:<28} {}\n", c.check_id, c.statement));
            if let Some(ce) = &c.counterexample {
                out.push_str(&format!("     counterexample: {ce}\n"));
            }
        }
        if let Some(t) = &self.timings {
            for (id, ms) in t {
                out.push_str(&format!("     {id}: {ms} ms\n"));
            }
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) => {
            for (k, v) in items.iter().enumerate() {
                flatten(&join(&k.to_string()), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// The checks run by the full suite, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckId {
    ContractionFormula,
    FormsIdentities,
    ContractionSequenceExact,
    CupProductInjective,
    ContractionSurjective,
    KernelCrossOracle,
    GeneratorsMij,
    TorDimensions,
    ExactSequence,
    BraidGroupH1,
}

impl CheckId {
    pub const ALL: [CheckId; 10] = [
        CheckId::ContractionFormula,
        CheckId::FormsIdentities,
        CheckId::ContractionSequenceExact,
        CheckId::CupProductInjective,
        CheckId::ContractionSurjective,
        CheckId::KernelCrossOracle,
        CheckId::GeneratorsMij,
        CheckId::TorDimensions,
        CheckId::ExactSequence,
        CheckId::BraidGroupH1,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CheckId::ContractionFormula => "contraction_formula",
            CheckId::FormsIdentities => "forms_identities",
            CheckId::ContractionSequenceExact => "contraction_sequence_exact",
            CheckId::CupProductInjective => "cup_product_injective",
            CheckId::ContractionSurjective => "contraction_surjective",
            CheckId::KernelCrossOracle => "kernel_cross_oracle",
            CheckId::GeneratorsMij => "generators_mij",
            CheckId::TorDimensions => "tor_dimensions",
            CheckId::ExactSequence => "exact_sequence",
            CheckId::BraidGroupH1 => "braid_group_h1",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            CheckId::ContractionFormula => {
                "μ(m_{l,1}, m_{l',1}) = −e_{l+l'−1}, symmetric in l and l'"
            }
            CheckId::FormsIdentities => {
                "d∘d = 0, p_D∘p_D = 0, and d∘p_D + p_D∘d acts on f·de_I by (#factors of f + |I|)"
            }
            CheckId::ContractionSequenceExact => {
                "... → Ω^2 → Ω^1 → Ω^0 → Q → 0 under p_D is exact in every positive internal degree"
            }
            CheckId::CupProductInjective => {
                "m_{1,1} ∪ − : H_st(Q) → H_st(H) is injective with cokernel free on m_{a,1}, a ≥ 2"
            }
            CheckId::ContractionSurjective => {
                "μ(m_{1,1}, −) : H_st(H) → H_st(Q) is onto positive degrees, so H_st^even(H̃) = Qθ"
            }
            CheckId::KernelCrossOracle => {
                "ker μ(m_{1,1}, −) in degree 2k+1 matches ker(p_D: Ω^1 → Ω^0) in internal degree 2k+2, with μ(m_{1,1}, −) = −p_D under m_{i,1} ↔ de_i"
            }
            CheckId::GeneratorsMij => {
                "H_st^odd(H̃) is generated by M_{i,j} = e_i m_{j,1} − e_j m_{i,1} subject to e_i M_{j,k} + e_j M_{k,i} + e_k M_{i,j} = 0"
            }
            CheckId::TorDimensions => {
                "Tor_j(Q, H_st(H̃)) ≅ Λ^j E ⊕ Λ^{j+2} E for j ≥ 1 and Tor_0 ≅ Λ^2 E ⊕ Qθ, so H_st(H̃) is not free"
            }
            CheckId::ExactSequence => {
                "0 → ker → H_st(H) → H_st(Q) → Q → 0 has vanishing Euler characteristic in every internal degree"
            }
            CheckId::BraidGroupH1 => {
                "H^1(B_3; Z^2) = 0 for σ_1 ↦ (1 1; 0 1), σ_2 ↦ (1 0; −1 1)"
            }
        }
    }
}

/// Runs every check at the given bound. Work inside each check is spread over
/// the current rayon pool.
pub fn run_suite(bound: DegreeBound, timings: bool) -> Result<VerificationReport> {
    let mut clock = BTreeMap::new();
    let start = Instant::now();
    let stable = StableCohomology::new(bound)?;
    clock.insert("setup".to_string(), start.elapsed().as_millis());

    let mut checks = Vec::with_capacity(CheckId::ALL.len());
    for id in CheckId::ALL {
        let start = Instant::now();
        let result = run_check(&stable, id).unwrap_or_else(|e| CheckResult::from_error(id, e));
        clock.insert(id.id().to_string(), start.elapsed().as_millis());
        checks.push(result);
    }
    Ok(VerificationReport {
        artifact_version: ARTIFACT_VERSION,
        degree_bound: bound.get(),
        checks,
        timings: timings.then_some(clock),
    })
}

pub fn run_check(stable: &StableCohomology, id: CheckId) -> Result<CheckResult> {
    match id {
        CheckId::ContractionFormula => contraction_formula(stable),
        CheckId::FormsIdentities => forms_identities(stable),
        CheckId::ContractionSequenceExact => contraction_sequence_exact(stable),
        CheckId::CupProductInjective => table_check(id, stable.stable_cohomology_tilde_dual()),
        CheckId::ContractionSurjective => table_check(id, stable.stable_cohomology_tilde()),
        CheckId::KernelCrossOracle => kernel_cross_oracle(stable),
        CheckId::GeneratorsMij => {
            let r = stable.verify_generators_mij()?;
            let ce = r.counterexample.clone().map(Value::String);
            Ok(CheckResult::new(
                id,
                serde_json::to_value(&r.per_degree)?,
                ce,
            ))
        }
        CheckId::TorDimensions => tor_dimensions(stable),
        CheckId::ExactSequence => {
            let audit = stable.exact_sequence_audit();
            let ce = audit
                .blocks
                .iter()
                .find(|b| b.alternating_sum != 0)
                .map(serde_json::to_value)
                .transpose()?;
            Ok(CheckResult::new(
                id,
                serde_json::to_value(&audit.blocks)?,
                ce,
            ))
        }
        CheckId::BraidGroupH1 => braid_group_h1(),
    }
}

fn contraction_formula(stable: &StableCohomology) -> Result<CheckResult> {
    let b = stable.bound().get() as u32;
    let mut rows = Vec::new();
    let mut counterexample = None;
    for l in 1..=b / 2 {
        for l2 in 1..=b / 2 {
            if 2 * (l + l2 - 1) > b {
                continue;
            }
            let x = TwistedElement::m(l);
            let y = TwistedElement::m(l2);
            let value = stable.contraction_pairing(&x, &y)?;
            let swapped = stable.contraction_pairing(&y, &x)?;
            let expected = AlgebraElement::generator(l + l2 - 1).neg();
            if (value != expected || swapped != expected) && counterexample.is_none() {
                counterexample = Some(json!({ "l": l, "l_prime": l2, "value": value.to_string() }));
            }
            rows.push(json!({
                "l": l,
                "l_prime": l2,
                "internal_degree": 2 * (l + l2 - 1),
                "value": value.to_string(),
            }));
        }
    }
    Ok(CheckResult::new(
        CheckId::ContractionFormula,
        Value::Array(rows),
        counterexample,
    ))
}

fn forms_identities(stable: &StableCohomology) -> Result<CheckResult> {
    use rayon::prelude::*;
    let forms = stable.forms();
    let b = stable.bound().get();
    let bidegrees: Vec<(usize, usize)> = (0..=b)
        .flat_map(|d| (0..=forms.max_form_degree()).map(move |n| (n, d)))
        .collect();
    let rows = bidegrees
        .par_iter()
        .map(|&(n, d)| {
            Ok((
                n,
                d,
                forms.dim(n, d),
                forms.verify_d_squared(n, d)?,
                forms.verify_p_squared(n, d)?,
                forms.verify_cartan(n, d)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let counterexample = rows
        .iter()
        .find(|r| !(r.3 && r.4 && r.5))
        .map(|r| json!({ "form_degree": r.0, "internal_degree": r.1, "d_squared": r.3, "p_squared": r.4, "cartan": r.5 }));
    let data = rows
        .iter()
        .filter(|r| r.2 > 0)
        .map(|r| {
            json!({
                "form_degree": r.0,
                "internal_degree": r.1,
                "dim": r.2,
                "d_squared_zero": r.3,
                "p_squared_zero": r.4,
                "cartan_diagonal": r.5,
            })
        })
        .collect();
    Ok(CheckResult::new(
        CheckId::FormsIdentities,
        Value::Array(data),
        counterexample,
    ))
}

fn contraction_sequence_exact(stable: &StableCohomology) -> Result<CheckResult> {
    use rayon::prelude::*;
    let b = stable.bound().get();
    let reports = (1..=b)
        .into_par_iter()
        .map(|d| stable.forms().verify_exactness(d))
        .collect::<Result<Vec<_>>>()?;
    let counterexample = reports
        .iter()
        .find(|r| !r.exact)
        .map(serde_json::to_value)
        .transpose()?;
    Ok(CheckResult::new(
        CheckId::ContractionSequenceExact,
        serde_json::to_value(&reports)?,
        counterexample,
    ))
}

fn table_check(id: CheckId, table: Result<StableCohomologyTable>) -> Result<CheckResult> {
    match table {
        Ok(t) => {
            let rows: Vec<Value> = t
                .dims
                .iter()
                .map(|(c, dim)| {
                    let mut row = json!({ "cohomological_degree": c, "dim": dim });
                    if let Some(g) = t.generator_report.as_ref().and_then(|g| g.get(c)) {
                        row["minimal_generators"] = json!(g);
                    }
                    row
                })
                .collect();
            Ok(CheckResult::new(id, Value::Array(rows), None))
        }
        Err(e @ Error::Falsified { .. }) => Ok(CheckResult::from_error(id, e)),
        Err(e) => Err(e),
    }
}

fn kernel_cross_oracle(stable: &StableCohomology) -> Result<CheckResult> {
    let cross = stable.kernel_matches_interior_product()?;
    let counterexample = match (cross.first_mismatch, cross.first_matrix_mismatch) {
        (Some((d, ours, forms)), _) => Some(json!({
            "internal_degree": d,
            "kernel_dim": ours,
            "interior_kernel_dim": forms,
        })),
        (None, Some(d)) => Some(json!({ "internal_degree": d, "matrices_differ": true })),
        (None, None) => None,
    };
    Ok(CheckResult::new(
        CheckId::KernelCrossOracle,
        serde_json::to_value(&cross.degrees)?,
        counterexample,
    ))
}

fn tor_dimensions(stable: &StableCohomology) -> Result<CheckResult> {
    let r = stable.verify_tor_theorem(TOR_J_MAX)?;
    let mut counterexample = r.mismatches.first().map(serde_json::to_value).transpose()?;
    if counterexample.is_none() && r.non_free_certificate == Some(0) {
        counterexample = Some(json!({ "j": 1, "internal_degree": 2, "computed": 0 }));
    }
    let data = r
        .results
        .iter()
        .flat_map(|t| {
            t.dims
                .iter()
                .filter(|(d, _)| *d % 2 == 0)
                .map(move |(d, dim)| json!({ "j": t.j, "internal_degree": d, "dim": dim }))
        })
        .collect();
    Ok(CheckResult::new(
        CheckId::TorDimensions,
        Value::Array(data),
        counterexample,
    ))
}

fn braid_group_h1() -> Result<CheckResult> {
    let (pres, rep) = fpgroup::braid_group_b3();
    let cert = fpgroup::h1_certificate(&pres, &rep)?;
    let data = json!([{
        "cocycle_dim": cert.cocycles.len(),
        "coboundary_dim": cert.coboundaries.len(),
        "h1_dim": cert.dimension,
    }]);
    let counterexample = (cert.dimension != 0).then(|| json!({ "h1_dim": cert.dimension }));
    Ok(CheckResult::new(
        CheckId::BraidGroupH1,
        data,
        counterexample,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = run_suite(DegreeBound::new(8).unwrap(), false).unwrap();
        assert!(report.all_pass(), "{}", report.to_text());
        assert_eq!(report.checks.len(), CheckId::ALL.len());
        assert!(report.timings.is_none());
        assert!(!report.to_json().contains("timings"));
    }

    #[test]
    fn minimal_bound_is_valid() {
        let report = run_suite(DegreeBound::new(2).unwrap(), true).unwrap();
        assert!(report.all_pass(), "{}", report.to_text());
        assert!(report.timings.is_some());
    }

    #[test]
    fn falsified_table_becomes_a_failing_check() {
        let err = Error::Falsified {
            check: "x",
            degree: 4,
            detail: "kernel of dimension 1".into(),
        };
        let c = table_check(CheckId::CupProductInjective, Err(err)).unwrap();
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.counterexample.unwrap()["internal_degree"], 4);
    }

    #[test]
    fn csv_is_flat() {
        let report = run_suite(DegreeBound::new(4).unwrap(), false).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("check_id,status,record,field,value\n"));
        assert!(csv
            .lines()
            .skip(1)
            .all(|l| l.starts_with(|c: char| c.is_ascii_lowercase())));
        assert!(csv.contains("braid_group_h1,pass,0,h1_dim,0"));
    }

    #[test]
    fn check_ids_are_unique() {
        let mut ids: Vec<_> = CheckId::ALL.iter().map(|c| c.id()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CheckId::ALL.len());
    }
}
