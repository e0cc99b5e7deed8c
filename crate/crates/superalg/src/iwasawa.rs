//! The super Gram-Schmidt factorization M = Φ·Ψ of an even supermatrix with
//! unit superdeterminant: Φ unitary in the graded sense (a SU(n,m)-supermatrix)
//! and Ψ upper triangular with star-real normalized diagonal (a
//! s(AN)-supermatrix). Also the membership predicates, seeded instance
//! generation, and the classical QR oracle the m = 0 case degenerates to.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Element, GeneratorTable};
use crate::error::{Error, Result};
use crate::scalar::{ComplexF64, Scalar};
use crate::supermatrix::{scalar_product, SuperDims, SuperMatrix, SuperVector};

/// The factorization output: the factors, the orthogonal family V₁..V_{n+m}
/// behind them, and the norms used for normalization.
#[derive(Clone, Debug)]
pub struct DecompositionResult<C: Scalar> {
    pub phi: SuperMatrix<C>,
    pub psi: SuperMatrix<C>,
    pub orthogonal_family: Vec<SuperVector<C>>,
    pub norms: Vec<Element<C>>,
}

/// One failed sub-check of a predicate or verification run.
#[derive(Clone, Debug)]
pub struct Witness {
    pub check: String,
    pub location: Option<(usize, usize)>,
    pub detail: String,
}

/// Pass/fail with the list of failed entries.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub passed: bool,
    pub witnesses: Vec<Witness>,
}

impl WitnessReport {
    fn new() -> Self {
        WitnessReport {
            passed: true,
            witnesses: Vec::new(),
        }
    }

    fn fail(&mut self, check: &str, location: Option<(usize, usize)>, detail: String) {
        self.passed = false;
        self.witnesses.push(Witness {
            check: check.to_string(),
            location,
            detail,
        });
    }
}

/// Orthogonalizes the columns of M by the super Gram-Schmidt recursion
/// V₁ = M₁, V_l = M_l − Σ_{k<l} V_k·(V_k,V_k)⁻¹(V_k,M_l), returning the
/// family and the norms ‖V_l‖.
///
/// Preconditions (not checked here beyond the parity pattern): sdet(M) = 1
/// and, in exact mode, M = δ + soul so every (V_l,V_l) is a normalized
/// series. Non-invertible scalar products abort with the failing column.
pub fn gram_schmidt<C: Scalar>(
    m: &SuperMatrix<C>,
) -> Result<(Vec<SuperVector<C>>, Vec<Element<C>>)> {
    m.require_even_pattern()?;
    let t = m.dims().total();
    let mut family: Vec<SuperVector<C>> = Vec::with_capacity(t);
    let mut gram_inverses: Vec<Element<C>> = Vec::with_capacity(t);
    let mut norms: Vec<Element<C>> = Vec::with_capacity(t);
    for l in 0..t {
        let column = m.column(l);
        let mut v = column.clone();
        for k in 0..l {
            let overlap = scalar_product(&family[k], &column)?;
            let coefficient = gram_inverses[k].try_mul(&overlap)?;
            if coefficient.is_zero_element() {
                continue;
            }
            v = v.sub(&family[k].scale_right(&coefficient)?)?;
        }
        let gram = scalar_product(&v, &v)?;
        let gram_inv = gram.invert_even().map_err(|e| column_failure(e, l))?;
        let n = gram.sqrt_even().map_err(|e| column_failure(e, l))?;
        family.push(v);
        gram_inverses.push(gram_inv);
        norms.push(n);
    }
    Ok((family, norms))
}

fn column_failure(e: Error, l: usize) -> Error {
    match e {
        Error::NotInvertible(d) => {
            Error::NotInvertible(format!("(V_{0},V_{0}) in column {0}: {d}", l + 1))
        }
        Error::Domain(d) => Error::Domain(format!("(V_{0},V_{0}) in column {0}: {d}", l + 1)),
        other => other,
    }
}

/// Full factorization: Φ_l = V_l·‖V_l‖⁻¹ and Ψ = Φ⁻¹M through the block
/// inverse.
pub fn decompose<C: Scalar>(m: &SuperMatrix<C>) -> Result<DecompositionResult<C>> {
    let (family, norms) = gram_schmidt(m)?;
    let mut columns = Vec::with_capacity(family.len());
    for (v, n) in family.iter().zip(&norms) {
        columns.push(v.scale_right(&n.invert_even()?)?);
    }
    let phi = SuperMatrix::from_columns(columns)?;
    let psi = phi.block_inverse()?.matmul(m)?;
    Ok(DecompositionResult {
        phi,
        psi,
        orthogonal_family: family,
        norms,
    })
}

/// SU(n,m)-supermatrix predicate: sdet(P) = 1, normalized diagonal, and
/// P^{‡st}P = δ. Failures are reported entry by entry.
pub fn is_su_supermatrix<C: Scalar>(p: &SuperMatrix<C>) -> WitnessReport {
    let mut report = WitnessReport::new();
    if let Err(e) = p.require_even_pattern() {
        report.fail("even-pattern", None, e.to_string());
        return report;
    }
    let table = p.table();
    let one = Element::one(table);
    match p.sdet() {
        Ok(s) => {
            if s != one {
                report.fail("sdet", None, format!("sdet = {s}, expected 1"));
            }
        }
        Err(e) => report.fail("sdet", None, e.to_string()),
    }
    let t = p.dims().total();
    for i in 0..t {
        if !p.entry(i, i).body().is_one() {
            report.fail(
                "normalized-diagonal",
                Some((i, i)),
                format!("body = {}", p.entry(i, i).body()),
            );
        }
    }
    let unitarity = p.dagger().supertranspose().and_then(|st| st.matmul(p));
    match unitarity {
        Ok(u) => {
            let id = SuperMatrix::identity(p.dims(), table);
            for i in 0..t {
                for j in 0..t {
                    if u.entry(i, j) != id.entry(i, j) {
                        report.fail(
                            "unitarity",
                            Some((i, j)),
                            format!("(P‡ˢᵗP)_{{{i},{j}}} = {}", u.entry(i, j)),
                        );
                    }
                }
            }
        }
        Err(e) => report.fail("unitarity", None, e.to_string()),
    }
    report
}

/// s(AN)-supermatrix predicate: sdet(Q) = 1, strictly upper triangular below
/// the diagonal, and star-real normalized diagonal.
pub fn is_san_supermatrix<C: Scalar>(q: &SuperMatrix<C>) -> WitnessReport {
    let mut report = WitnessReport::new();
    if let Err(e) = q.require_even_pattern() {
        report.fail("even-pattern", None, e.to_string());
        return report;
    }
    let one = Element::one(q.table());
    match q.sdet() {
        Ok(s) => {
            if s != one {
                report.fail("sdet", None, format!("sdet = {s}, expected 1"));
            }
        }
        Err(e) => report.fail("sdet", None, e.to_string()),
    }
    let t = q.dims().total();
    for i in 0..t {
        for j in 0..i {
            if !q.entry(i, j).is_zero_element() {
                report.fail(
                    "upper-triangular",
                    Some((i, j)),
                    format!("entry = {}", q.entry(i, j)),
                );
            }
        }
    }
    for i in 0..t {
        let d = q.entry(i, i);
        if !d.body().is_one() {
            report.fail(
                "normalized-diagonal",
                Some((i, i)),
                format!("body = {}", d.body()),
            );
        }
        if !d.is_star_real() {
            report.fail("star-real-diagonal", Some((i, i)), format!("entry = {d}"));
        }
    }
    report
}

/// True iff "P is both a SU- and a s(AN)-supermatrix" implies P = δ; the
/// implication is vacuous when either predicate fails.
pub fn intersection_is_identity_check<C: Scalar>(p: &SuperMatrix<C>) -> bool {
    if is_su_supermatrix(p).passed && is_san_supermatrix(p).passed {
        *p == SuperMatrix::identity(p.dims(), p.table())
    } else {
        true
    }
}

/// A serialized decomposition problem: the dimensions, truncation degree,
/// generator table, and an even supermatrix of the form δ + soul.
#[derive(Clone, Debug)]
pub struct InstanceSpec<C: Scalar> {
    pub dims: SuperDims,
    pub degree: usize,
    pub table: Arc<GeneratorTable>,
    pub matrix: SuperMatrix<C>,
    pub seed: Option<u64>,
}

/// Builds a seeded random instance M = δ + soul over the Grassmann pool with
/// n+m odd pairs and two even generators, then rescales the first column so
/// that sdet(M) = 1 exactly. `density` in [0,1] controls the soul terms per
/// entry (0 yields δ).
pub fn generate_instance<C: Scalar>(
    dims: SuperDims,
    degree: usize,
    seed: u64,
    density: f64,
) -> Result<InstanceSpec<C>> {
    if degree == 0 {
        return Err(Error::Malformed(
            "truncation degree must be positive".into(),
        ));
    }
    let table = GeneratorTable::grassmann_pool(dims.total(), 2, degree);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = (density.clamp(0.0, 1.0) * 2.0).round() as usize;
    let t = dims.total();
    let mut matrix = SuperMatrix::identity(dims, &table);
    for i in 0..t {
        for j in 0..t {
            let parity = dims.slot_parity(i).combine(dims.slot_parity(j));
            let soul = Element::random(&mut rng, &table, Some(parity), terms, 2);
            matrix.set(i, j, matrix.entry(i, j).add_ref(&soul));
        }
    }
    let sdet = matrix.sdet()?;
    // Rescaling an even first column by λ multiplies sdet by λ; an odd first
    // column (n = 0) multiplies it by λ⁻¹.
    let lambda = if dims.n > 0 {
        sdet.invert_even()?
    } else {
        sdet
    };
    let scaled = matrix.column(0).scale_right(&lambda)?;
    for i in 0..t {
        matrix.set(i, 0, scaled.entry(i).clone());
    }
    debug_assert_eq!(matrix.sdet()?, Element::one(&table));
    Ok(InstanceSpec {
        dims,
        degree,
        table,
        matrix,
        seed: Some(seed),
    })
}

/// Named verification results for a decomposition run.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<(String, WitnessReport)>,
    pub all_passed: bool,
}

/// Runs the full invariant suite for a decomposition of `m`: the
/// factorization residual, its conjugate, both membership predicates, and
/// pairwise orthogonality of the family.
pub fn verify_decomposition<C: Scalar>(
    m: &SuperMatrix<C>,
    result: &DecompositionResult<C>,
) -> Result<VerificationReport> {
    let mut checks: Vec<(String, WitnessReport)> = Vec::new();
    let t = m.dims().total();

    let mut factorization = WitnessReport::new();
    let product = result.phi.matmul(&result.psi)?;
    for i in 0..t {
        for j in 0..t {
            if product.entry(i, j) != m.entry(i, j) {
                factorization.fail(
                    "phi-psi-product",
                    Some((i, j)),
                    format!("(ΦΨ)_{{{i},{j}}} ≠ M_{{{i},{j}}}"),
                );
            }
        }
    }
    checks.push(("factorization".into(), factorization));

    let mut conjugate = WitnessReport::new();
    let dagger_product = result.phi.dagger().matmul(&result.psi.dagger())?;
    let m_dagger = m.dagger();
    for i in 0..t {
        for j in 0..t {
            if dagger_product.entry(i, j) != m_dagger.entry(i, j) {
                conjugate.fail(
                    "dagger-product",
                    Some((i, j)),
                    format!("(Φ‡Ψ‡)_{{{i},{j}}} ≠ M‡_{{{i},{j}}}"),
                );
            }
        }
    }
    checks.push(("conjugate-factorization".into(), conjugate));

    checks.push(("su-predicate".into(), is_su_supermatrix(&result.phi)));
    checks.push(("san-predicate".into(), is_san_supermatrix(&result.psi)));

    let mut orthogonality = WitnessReport::new();
    for k in 0..t {
        for l in 0..t {
            if k == l {
                continue;
            }
            let s = scalar_product(&result.orthogonal_family[k], &result.orthogonal_family[l])?;
            if !s.is_zero_element() {
                orthogonality.fail(
                    "orthogonal-family",
                    Some((k, l)),
                    format!("(V_{k},V_{l}) = {s}"),
                );
            }
        }
    }
    checks.push(("orthogonality".into(), orthogonality));

    let all_passed = checks.iter().all(|(_, r)| r.passed);
    Ok(VerificationReport { checks, all_passed })
}

/// Classical Gram-Schmidt QR of an invertible complex matrix, with R's
/// diagonal real positive by construction. This is the independent oracle
/// the m = 0 float path is compared against.
pub fn classical_oracle(
    m: &[Vec<ComplexF64>],
) -> Result<(Vec<Vec<ComplexF64>>, Vec<Vec<ComplexF64>>)> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(
            "oracle needs a square matrix".into(),
        ));
    }
    let mut q: Vec<Vec<ComplexF64>> = vec![vec![ComplexF64::zero(); n]; n];
    let mut r: Vec<Vec<ComplexF64>> = vec![vec![ComplexF64::zero(); n]; n];
    for l in 0..n {
        let mut v: Vec<ComplexF64> = (0..n).map(|i| m[i][l]).collect();
        for k in 0..l {
            // (q_k, a_l) with the conjugation on the first slot
            let mut overlap = ComplexF64::zero();
            for i in 0..n {
                overlap = overlap.add(&q[i][k].conj().mul(&m[i][l]));
            }
            r[k][l] = overlap;
            for i in 0..n {
                v[i] = v[i].sub(&q[i][k].mul(&overlap));
            }
        }
        let norm_sq: f64 = v.iter().map(|c| c.re * c.re + c.im * c.im).sum();
        let norm = norm_sq.sqrt();
        if norm <= 1e-9 {
            return Err(Error::NotInvertible(format!(
                "numerically singular input (column {})",
                l + 1
            )));
        }
        r[l][l] = ComplexF64::new(norm, 0.0);
        let inv = ComplexF64::new(1.0 / norm, 0.0);
        for i in 0..n {
            q[i][l] = v[i].mul(&inv);
        }
    }
    Ok((q, r))
}

/// A seeded random complex n×n matrix with determinant exactly normalized to
/// one (first column rescaled), entries uniform in [−1,1]². Resamples when
/// the determinant is too small to scale safely.
pub fn random_sl_matrix_float(n: usize, seed: u64) -> Result<SuperMatrix<ComplexF64>> {
    let dims = SuperDims::new(n, 0)?;
    let table = GeneratorTable::grassmann_pool(0, 0, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut matrix = SuperMatrix::zero(dims, &table);
        for i in 0..n {
            for j in 0..n {
                let c = ComplexF64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                matrix.set(i, j, Element::scalar(&table, c));
            }
        }
        let det = matrix.sdet()?.body();
        if det.modulus() < 0.1 {
            continue;
        }
        let lambda = Element::scalar(&table, det.inv().expect("determinant checked above"));
        let scaled = matrix.column(0).scale_right(&lambda)?;
        for i in 0..n {
            matrix.set(i, 0, scaled.entry(i).clone());
        }
        return Ok(matrix);
    }
}

/// Reads the degree-0 part of a float supermatrix as a plain complex matrix.
pub fn body_matrix(m: &SuperMatrix<ComplexF64>) -> Vec<Vec<ComplexF64>> {
    let t = m.dims().total();
    (0..t)
        .map(|i| (0..t).map(|j| m.entry(i, j).body()).collect())
        .collect()
}

/// Decomposes a numeric m = 0 matrix with the super algorithm and compares
/// against [`classical_oracle`]; returns the worst entry deviations of Φ vs
/// Q and Ψ vs R.
pub fn compare_with_classical(m: &SuperMatrix<ComplexF64>) -> Result<(f64, f64)> {
    if m.dims().m != 0 {
        return Err(Error::Domain(
            "the classical oracle only covers m = 0".into(),
        ));
    }
    let result = decompose(m)?;
    let (q, r) = classical_oracle(&body_matrix(m))?;
    let n = m.dims().total();
    let mut phi_dev = 0.0f64;
    let mut psi_dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            phi_dev = phi_dev.max(result.phi.entry(i, j).body().deviation(&q[i][j]));
            psi_dev = psi_dev.max(result.psi.entry(i, j).body().deviation(&r[i][j]));
        }
    }
    Ok((phi_dev, psi_dev))
}
