//! Command-line driver: generate instances, run decompositions and the Hopf
//! verification suites, and emit machine-readable JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 an identity check failed, 2 malformed
//! input or unsupported mode, 3 a precondition failed (SL constraint,
//! singular bodies).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use superalg::hopf::{GeneratorMatrixContext, RealFormKind};
use superalg::iwasawa::{
    compare_with_classical, decompose, generate_instance, random_sl_matrix_float,
    verify_decomposition, InstanceSpec,
};
use superalg::json::{
    self, DecomposeOutputJson, HopfOutputJson, InstanceJson, InvertOutputJson, OracleOutputJson,
    SdetOutputJson,
};
use superalg::{ComplexF64, Element, Error, GaussianRational, Scalar, SuperDims, SuperMatrix};

#[derive(Parser)]
#[command(
    name = "superalg",
    version,
    about = "Super Gram-Schmidt factorization and Hopf verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor an instance into Φ·Ψ and verify every invariant
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the real-form axiom suite and the factorization identity
    Hopf {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// "graded" checks (5b)/(6b); "normal" checks (5a)/(6a)
        #[arg(long, default_value = "graded")]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a seeded random instance with sdet = 1
    Gen {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// "exact" (Gaussian rationals) or "float"
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the float-mode decomposition against classical QR (m = 0)
    Oracle {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Superdeterminant of an instance matrix through both block routes
    Sdet {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Block inverse of an instance matrix, verified by the round trip
    Invert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Malformed(_)
            | Error::UnknownGenerator(_)
            | Error::IncompatibleContext
            | Error::DimensionMismatch(_) => 2,
            Error::NotInvertible(_) | Error::Parity(_) | Error::Domain(_) => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Decompose { input, output } => {
            let instance = read_instance(&input)?;
            match instance.mode.as_str() {
                "exact" => cmd_decompose::<GaussianRational>(&instance, &output),
                "float" => cmd_decompose::<ComplexF64>(&instance, &output),
                other => Err(Failure::malformed(format!("unknown mode {other:?}"))),
            }
        }
        Command::Hopf {
            n,
            m,
            degree,
            kind,
            seed,
            output,
        } => cmd_hopf(n, m, degree, &kind, seed, &output),
        Command::Gen {
            n,
            m,
            degree,
            seed,
            mode,
            output,
        } => {
            let dims = SuperDims::new(n, m)?;
            let json = match mode.as_str() {
                "exact" => json::instance_to_json(&generate_instance::<GaussianRational>(
                    dims, degree, seed, 1.0,
                )?),
                "float" => json::instance_to_json(&generate_instance::<ComplexF64>(
                    dims, degree, seed, 1.0,
                )?),
                other => return Err(Failure::malformed(format!("unknown mode {other:?}"))),
            };
            emit(&output, &json)?;
            Ok(0)
        }
        Command::Oracle {
            n,
            m,
            samples,
            seed,
            output,
        } => cmd_oracle(n, m, samples, seed, &output),
        Command::Sdet { input, output } => {
            let instance = read_instance(&input)?;
            match instance.mode.as_str() {
                "exact" => cmd_sdet::<GaussianRational>(&instance, &output),
                "float" => cmd_sdet::<ComplexF64>(&instance, &output),
                other => Err(Failure::malformed(format!("unknown mode {other:?}"))),
            }
        }
        Command::Invert { input, output } => {
            let instance = read_instance(&input)?;
            match instance.mode.as_str() {
                "exact" => cmd_invert::<GaussianRational>(&instance, &output),
                "float" => cmd_invert::<ComplexF64>(&instance, &output),
                other => Err(Failure::malformed(format!("unknown mode {other:?}"))),
            }
        }
    }
}

fn read_instance(path: &PathBuf) -> Result<InstanceJson, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::malformed(format!("bad instance JSON: {e}")))
}

fn emit<T: serde::Serialize>(output: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::malformed(format!("serialization failed: {e}")))?;
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Exact-mode instances must be δ + soul; the decomposition preconditions
/// also require sdet(M) = 1 in both modes.
fn check_preconditions<C: Scalar>(spec: &InstanceSpec<C>) -> Result<(), Failure> {
    if C::EXACT {
        let t = spec.dims.total();
        for i in 0..t {
            for j in 0..t {
                let body = spec.matrix.entry(i, j).body();
                let ok = if i == j {
                    body.is_one()
                } else {
                    body.is_zero()
                };
                if !ok {
                    return Err(Failure::precondition(format!(
                        "exact-mode instances must have the identity body (entry ({i},{j}))"
                    )));
                }
            }
        }
    }
    let sdet = spec.matrix.sdet().map_err(Failure::from)?;
    if sdet != Element::one(&spec.table) {
        return Err(Failure::precondition(
            "the SL constraint fails: sdet(M) ≠ 1, decomposition requires unit superdeterminant",
        ));
    }
    Ok(())
}

fn cmd_decompose<C: Scalar>(
    instance: &InstanceJson,
    output: &Option<PathBuf>,
) -> Result<u8, Failure> {
    let spec = json::instance_from_json::<C>(instance)?;
    check_preconditions(&spec)?;
    let result = decompose(&spec.matrix)?;
    let report = verify_decomposition(&spec.matrix, &result)?;
    let payload = DecomposeOutputJson {
        decomposition: json::decomposition_to_json(&result),
        verification: json::verification_to_json(&report),
    };
    emit(output, &payload)?;
    Ok(if report.all_passed { 0 } else { 1 })
}

fn cmd_hopf(
    n: usize,
    m: usize,
    degree: usize,
    kind: &str,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<u8, Failure> {
    let kind = RealFormKind::parse(kind)?;
    let dims = SuperDims::new(n, m)?;
    let ctx = GeneratorMatrixContext::<GaussianRational>::new(dims, degree)?;
    let axioms = ctx.verify_real_form_axioms(kind, seed);
    let factorization = ctx.verify_factorization()?;
    let passed = axioms.passed && factorization.passed;
    let payload = HopfOutputJson {
        n,
        m,
        degree,
        kind: kind.as_str().to_string(),
        seed,
        axioms: json::axiom_suite_to_json(&axioms),
        factorization: json::factorization_to_json(&factorization),
        passed,
    };
    emit(output, &payload)?;
    Ok(if passed { 0 } else { 1 })
}

fn cmd_oracle(
    n: usize,
    m: usize,
    samples: u64,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<u8, Failure> {
    if m != 0 {
        return Err(Failure::malformed(
            "unsupported mode: the classical oracle requires m = 0",
        ));
    }
    if n == 0 || samples == 0 {
        return Err(Failure::malformed("oracle needs n ≥ 1 and samples ≥ 1"));
    }
    const TOLERANCE: f64 = 1e-10;
    let mut max_phi = 0.0f64;
    let mut max_psi = 0.0f64;
    for s in 0..samples {
        let matrix = random_sl_matrix_float(n, seed.wrapping_add(s))?;
        let (phi_dev, psi_dev) = compare_with_classical(&matrix)?;
        max_phi = max_phi.max(phi_dev);
        max_psi = max_psi.max(psi_dev);
    }
    let passed = max_phi <= TOLERANCE && max_psi <= TOLERANCE;
    let payload = OracleOutputJson {
        n,
        samples,
        max_phi_deviation: max_phi,
        max_psi_deviation: max_psi,
        tolerance: TOLERANCE,
        passed,
    };
    emit(output, &payload)?;
    Ok(if passed { 0 } else { 1 })
}

fn cmd_sdet<C: Scalar>(instance: &InstanceJson, output: &Option<PathBuf>) -> Result<u8, Failure> {
    let spec = json::instance_from_json::<C>(instance)?;
    let sdet = spec.matrix.sdet().map_err(Failure::from)?;
    // the alternate route needs an invertible A-block body; report it when defined
    let (alt, agree) = match spec.matrix.sdet_alt() {
        Ok(alt) => {
            let agree = alt == sdet;
            (Some(json::element_to_json(&alt)), Some(agree))
        }
        Err(_) => (None, None),
    };
    let disagreement = agree == Some(false);
    let payload = SdetOutputJson {
        sdet: json::element_to_json(&sdet),
        sdet_alt: alt,
        agree,
    };
    emit(output, &payload)?;
    Ok(if disagreement { 1 } else { 0 })
}

fn cmd_invert<C: Scalar>(instance: &InstanceJson, output: &Option<PathBuf>) -> Result<u8, Failure> {
    let spec = json::instance_from_json::<C>(instance)?;
    let inverse = spec.matrix.block_inverse().map_err(Failure::from)?;
    let identity = SuperMatrix::identity(spec.dims, &spec.table);
    let verified =
        spec.matrix.matmul(&inverse)? == identity && inverse.matmul(&spec.matrix)? == identity;
    let payload = InvertOutputJson {
        inverse: json::matrix_to_json(&inverse),
        verified,
    };
    emit(output, &payload)?;
    Ok(if verified { 0 } else { 1 })
}
