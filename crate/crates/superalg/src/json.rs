//! Serialized formats: elements as term lists with string coefficients,
//! generator declarations, matrices, instances, decomposition results, and
//! the report records the CLI emits. Exact-mode output is byte-deterministic
//! because element terms serialize in canonical monomial order.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Element, GenId, GeneratorDecl, GeneratorTable, Parity};
use crate::error::{Error, Result};
use crate::hopf::{AxiomRecord, AxiomSuiteReport, FactorizationReport};
use crate::iwasawa::{DecompositionResult, InstanceSpec, VerificationReport};
use crate::scalar::Scalar;
use crate::supermatrix::{SuperDims, SuperMatrix};

/// One term: `{"coeff": [re, im], "monomial": [generator ids]}` with decimal
/// strings in float mode and `p/q` rational strings in exact mode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: [String; 2],
    pub monomial: Vec<GenId>,
}

pub type ElementJson = Vec<TermJson>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub id: GenId,
    pub parity: String,
    pub star_partner: GenId,
    pub star_sign: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<Vec<ElementJson>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    pub m: usize,
    pub degree: usize,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub generators: Vec<GeneratorJson>,
    pub matrix: MatrixJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub phi: MatrixJson,
    pub psi: MatrixJson,
    pub norms: Vec<ElementJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<[usize; 2]>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub witnesses: Vec<WitnessJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationJson {
    pub checks: Vec<CheckJson>,
    pub all_passed: bool,
}

/// Axiom record: `{"axiom": "(1)".."(6b)", "status": pass|fail,
/// "counterexample": element or null}`. The counterexample is the input the
/// axiom failed on.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomRecordJson {
    pub axiom: String,
    pub status: String,
    pub counterexample: Option<ElementJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Eq17RecordJson {
    pub element: String,
    pub status: String,
}

/// Decomposition output: the factorization payload plus the verification
/// block the exit code is derived from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecomposeOutputJson {
    #[serde(flatten)]
    pub decomposition: DecompositionJson,
    pub verification: VerificationJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HopfOutputJson {
    pub n: usize,
    pub m: usize,
    pub degree: usize,
    pub kind: String,
    pub seed: u64,
    pub axioms: Vec<AxiomRecordJson>,
    pub factorization: Vec<Eq17RecordJson>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleOutputJson {
    pub n: usize,
    pub samples: u64,
    pub max_phi_deviation: f64,
    pub max_psi_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdetOutputJson {
    pub sdet: ElementJson,
    pub sdet_alt: Option<ElementJson>,
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InvertOutputJson {
    pub inverse: MatrixJson,
    pub verified: bool,
}

pub fn element_to_json<C: Scalar>(e: &Element<C>) -> ElementJson {
    e.terms()
        .map(|(m, c)| TermJson {
            coeff: c.encode(),
            monomial: m.ids().to_vec(),
        })
        .collect()
}

pub fn element_from_json<C: Scalar>(
    table: &Arc<GeneratorTable>,
    json: &ElementJson,
) -> Result<Element<C>> {
    Element::from_terms(
        table,
        json.iter()
            .map(|t| Ok((t.monomial.clone(), C::decode(&t.coeff[0], &t.coeff[1])?)))
            .collect::<Result<Vec<_>>>()?,
    )
}

pub fn matrix_to_json<C: Scalar>(m: &SuperMatrix<C>) -> MatrixJson {
    let dims = m.dims();
    let t = dims.total();
    MatrixJson {
        n: dims.n,
        m: dims.m,
        entries: (0..t)
            .map(|i| (0..t).map(|j| element_to_json(m.entry(i, j))).collect())
            .collect(),
    }
}

/// Loads a matrix; the even parity pattern is validated.
pub fn matrix_from_json<C: Scalar>(
    table: &Arc<GeneratorTable>,
    json: &MatrixJson,
) -> Result<SuperMatrix<C>> {
    let dims = SuperDims::new(json.n, json.m)?;
    let t = dims.total();
    if json.entries.len() != t || json.entries.iter().any(|r| r.len() != t) {
        return Err(Error::Malformed(format!(
            "matrix entries must form a {t}×{t} grid"
        )));
    }
    let rows = json
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| element_from_json(table, e))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SuperMatrix::from_rows(dims, table, rows)
}

pub fn table_to_json(table: &GeneratorTable) -> Vec<GeneratorJson> {
    table
        .decls()
        .iter()
        .map(|d| GeneratorJson {
            id: d.id,
            parity: match d.parity {
                Parity::Even => "even".into(),
                Parity::Odd => "odd".into(),
            },
            star_partner: d.star_partner,
            star_sign: d.star_sign,
        })
        .collect()
}

pub fn table_from_json(generators: &[GeneratorJson], degree: usize) -> Result<Arc<GeneratorTable>> {
    let decls = generators
        .iter()
        .map(|g| {
            let parity = match g.parity.as_str() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                other => return Err(Error::Malformed(format!("unknown parity {other:?}"))),
            };
            Ok(GeneratorDecl {
                id: g.id,
                parity,
                star_partner: g.star_partner,
                star_sign: g.star_sign,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorTable::new(decls, degree)
}

pub fn instance_to_json<C: Scalar>(spec: &InstanceSpec<C>) -> InstanceJson {
    InstanceJson {
        n: spec.dims.n,
        m: spec.dims.m,
        degree: spec.degree,
        mode: C::MODE.to_string(),
        seed: spec.seed,
        generators: table_to_json(&spec.table),
        matrix: matrix_to_json(&spec.matrix),
    }
}

/// Typed load of an instance. The declared mode must match the coefficient
/// type, the dims must agree with the embedded matrix header, and the parity
/// pattern is validated.
pub fn instance_from_json<C: Scalar>(json: &InstanceJson) -> Result<InstanceSpec<C>> {
    if json.mode != C::MODE {
        return Err(Error::Malformed(format!(
            "instance mode {:?} does not match the requested {:?} arithmetic",
            json.mode,
            C::MODE
        )));
    }
    if json.n != json.matrix.n || json.m != json.matrix.m {
        return Err(Error::Malformed(
            "instance dims disagree with the matrix header".into(),
        ));
    }
    let dims = SuperDims::new(json.n, json.m)?;
    let table = table_from_json(&json.generators, json.degree)?;
    let matrix = matrix_from_json(&table, &json.matrix)?;
    Ok(InstanceSpec {
        dims,
        degree: json.degree,
        table,
        matrix,
        seed: json.seed,
    })
}

pub fn decomposition_to_json<C: Scalar>(result: &DecompositionResult<C>) -> DecompositionJson {
    DecompositionJson {
        phi: matrix_to_json(&result.phi),
        psi: matrix_to_json(&result.psi),
        norms: result.norms.iter().map(element_to_json).collect(),
    }
}

pub fn verification_to_json(report: &VerificationReport) -> VerificationJson {
    VerificationJson {
        checks: report
            .checks
            .iter()
            .map(|(name, r)| CheckJson {
                name: name.clone(),
                passed: r.passed,
                witnesses: r
                    .witnesses
                    .iter()
                    .map(|w| WitnessJson {
                        check: w.check.clone(),
                        location: w.location.map(|(i, j)| [i, j]),
                        detail: w.detail.clone(),
                    })
                    .collect(),
            })
            .collect(),
        all_passed: report.all_passed,
    }
}

pub fn axiom_record_to_json<C: Scalar>(record: &AxiomRecord<C>) -> AxiomRecordJson {
    AxiomRecordJson {
        axiom: record.axiom.clone(),
        status: if record.passed {
            "pass".into()
        } else {
            "fail".into()
        },
        counterexample: record.counterexample.as_ref().map(element_to_json),
    }
}

pub fn axiom_suite_to_json<C: Scalar>(report: &AxiomSuiteReport<C>) -> Vec<AxiomRecordJson> {
    report.records.iter().map(axiom_record_to_json).collect()
}

pub fn factorization_to_json(report: &FactorizationReport) -> Vec<Eq17RecordJson> {
    report
        .records
        .iter()
        .map(|(label, ok)| Eq17RecordJson {
            element: label.clone(),
            status: if *ok { "pass".into() } else { "fail".into() },
        })
        .collect()
}
