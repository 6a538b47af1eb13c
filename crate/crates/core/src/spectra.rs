//! Eigenvalue oracles, matrix-class predicates, diagonal-stability
//! certificates and seeded falsification over diagonal scalings.

use nalgebra::{Cholesky, DMatrix, DVector, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dominance::is_ndd;
use crate::error::{Error, Result};
use crate::linalg::{
    check_square, comparison_matrix, lambda_max_sym, max_abs, scale_rows, ComplexPoint, Matrix,
    STRUCT_TOL,
};
use crate::regions::Region;

/// Margin below which an eigenvalue is reported as marginal rather than
/// inside or outside.
pub const TOL_MARGIN: f64 = 1e-9;

/// Required negativity of `lambda_max(DA + A^T D)` for a certificate.
pub const TOL_CERT: f64 = 1e-9;

/// Largest order for which all principal minors are enumerated.
pub const P_MINOR_CAP: usize = 12;

/// Environment variable capping the worker threads used by sampling.
pub const THREADS_ENV: &str = "REGDOM_THREADS";

fn sort_spectrum(ev: &mut [Complex64]) {
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Eigenvalues of a real square matrix with multiplicity, sorted by real
/// part then imaginary part. Complex eigenvalues come in exact conjugate
/// pairs.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    let n = check_square(a)?;
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 1000 * n.max(10))
        .ok_or(Error::NoConvergence)?;
    let mut ev: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NoConvergence);
    }
    sort_spectrum(&mut ev);
    Ok(ev)
}

/// Eigenvalues of a complex square matrix, sorted as in [`eigenvalues`].
pub fn eigenvalues_complex(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if a.ncols() != n {
        return Err(Error::NotSquare { rows: n, cols: a.ncols() });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 1000 * n.max(10))
        .ok_or(Error::NoConvergence)?;
    let mut ev: Vec<Complex64> = schur
        .eigenvalues()
        .ok_or(Error::NoConvergence)?
        .iter()
        .copied()
        .collect();
    sort_spectrum(&mut ev);
    Ok(ev)
}

/// Largest real part of the spectrum.
pub fn spectral_abscissa(a: &Matrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumVerdict {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<ComplexPoint>,
    pub inside: Vec<bool>,
    /// Smallest depth of an eigenvalue inside the region, measured by the
    /// negated defining scalar; negative when some eigenvalue is outside.
    pub worst_margin: f64,
    pub verdict: SpectrumVerdict,
}

impl SpectrumReport {
    /// Builds a report from per-eigenvalue depths (positive inside).
    pub fn from_depths(ev: &[Complex64], depth: &[f64]) -> Self {
        let worst = depth.iter().copied().fold(f64::INFINITY, f64::min);
        let verdict = if worst > TOL_MARGIN {
            SpectrumVerdict::Stable
        } else if worst < -TOL_MARGIN {
            SpectrumVerdict::Unstable
        } else {
            SpectrumVerdict::Marginal
        };
        Self {
            eigenvalues: ev.iter().copied().map(ComplexPoint::from).collect(),
            inside: depth.iter().map(|&d| d > 0.0).collect(),
            worst_margin: worst,
            verdict,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.verdict == SpectrumVerdict::Stable
    }

    /// Eigenvalues as `re,im` lines with 17 significant digits.
    pub fn to_csv(&self) -> String {
        eigenvalues_csv(self.eigenvalues.iter().map(|p| Complex64::from(*p)))
    }
}

pub fn eigenvalues_csv(ev: impl IntoIterator<Item = Complex64>) -> String {
    let mut out = String::from("re,im\n");
    for z in ev {
        out.push_str(&format!("{:.16e},{:.16e}\n", z.re, z.im));
    }
    out
}

pub fn region_report(ev: &[Complex64], region: &Region) -> SpectrumReport {
    let depth: Vec<f64> = ev.iter().map(|&z| -region.defining_value(z)).collect();
    let mut r = SpectrumReport::from_depths(ev, &depth);
    r.inside = ev.iter().map(|&z| region.contains(z)).collect();
    r
}

/// Spectrum of `a` tested against `region`.
pub fn is_region_stable(a: &Matrix, region: &Region) -> Result<SpectrumReport> {
    Ok(region_report(&eigenvalues(a)?, region))
}

fn scale_tol(a: &Matrix) -> f64 {
    STRUCT_TOL * max_abs(a).max(1.0)
}

/// Off-diagonal entries nonpositive.
pub fn is_z_matrix(a: &Matrix) -> Result<bool> {
    let n = check_square(a)?;
    let tol = STRUCT_TOL;
    Ok((0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] <= tol)))
}

/// Nonsingular M-matrix: a Z-matrix whose eigenvalues have positive real
/// parts.
pub fn is_m_matrix(a: &Matrix) -> Result<bool> {
    if !is_z_matrix(a)? {
        return Ok(false);
    }
    let tol = scale_tol(a);
    Ok(eigenvalues(a)?.iter().all(|z| z.re > tol))
}

/// All principal minors positive, for `n <= P_MINOR_CAP`.
pub fn is_p_matrix(a: &Matrix) -> Result<bool> {
    is_p_matrix_capped(a, P_MINOR_CAP)
}

pub fn is_p_matrix_capped(a: &Matrix, cap: usize) -> Result<bool> {
    let n = check_square(a)?;
    if n > cap {
        return Err(Error::DimensionTooLarge { n, cap });
    }
    let scale = max_abs(a).max(1.0);
    for mask in 1u32..(1u32 << n) {
        let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        let sub = Matrix::from_fn(k, k, |r, c| a[(idx[r], idx[c])]);
        if sub.determinant() <= STRUCT_TOL * scale.powi(k as i32) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Positive diagonal and a comparison matrix that is a nonsingular
/// M-matrix.
pub fn is_h_plus_matrix(a: &Matrix) -> Result<bool> {
    let n = check_square(a)?;
    if (0..n).any(|i| a[(i, i)] <= 0.0) {
        return Ok(false);
    }
    is_m_matrix(&comparison_matrix(a))
}

/// `A A^T = A^T A` up to `1e-10 * max(1, |A|_max^2)`.
pub fn is_normal(a: &Matrix) -> Result<bool> {
    check_square(a)?;
    let at = a.transpose();
    let comm = a * &at - &at * a;
    Ok(max_abs(&comm) <= 1e-10 * max_abs(a).powi(2).max(1.0))
}

pub fn is_negative_definite_sym_part(a: &Matrix) -> Result<bool> {
    check_square(a)?;
    Ok(lambda_max_sym(a) < -scale_tol(a))
}

pub fn is_tridiagonal(a: &Matrix) -> Result<bool> {
    let n = check_square(a)?;
    Ok((0..n).all(|i| (0..n).all(|j| i.abs_diff(j) <= 1 || a[(i, j)].abs() <= STRUCT_TOL)))
}

/// Upper or lower triangular.
pub fn is_triangular(a: &Matrix) -> Result<bool> {
    let n = check_square(a)?;
    let upper = (0..n).all(|i| (0..i).all(|j| a[(i, j)].abs() <= STRUCT_TOL));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| a[(i, j)].abs() <= STRUCT_TOL));
    Ok(upper || lower)
}

fn is_hurwitz(a: &Matrix) -> Result<bool> {
    Ok(spectral_abscissa(a)? < -scale_tol(a))
}

/// Classes of matrices known to be diagonally stable, plus the numeric
/// fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertMethod {
    SymmetricPartNegativeDefinite,
    NegatedMMatrix,
    TwoByTwo,
    NormalStable,
    TriangularStable,
    Ndd,
    NegatedTridiagonalP,
    NegatedNonsingularHPlus,
    NumericSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalStabilityCertificate {
    pub method: CertMethod,
    /// Diagonal of `D`, when the method produces one.
    pub d: Option<Vec<f64>>,
    /// `lambda_max(DA + A^T D)` for the returned `D`.
    pub w_max_eig: Option<f64>,
}

impl DiagonalStabilityCertificate {
    pub fn by_class_membership(&self) -> bool {
        self.d.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum CertOutcome {
    Certified(DiagonalStabilityCertificate),
    Inconclusive { reason: String },
    NotDiagStable { reason: String },
}

impl CertOutcome {
    pub fn certificate(&self) -> Option<&DiagonalStabilityCertificate> {
        match self {
            CertOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }
}

/// `lambda_max(DA + A^T D)`.
pub fn w_max_eig(a: &Matrix, d: &[f64]) -> f64 {
    let da = scale_rows(d, a);
    lambda_max_sym(&(&da + da.transpose()))
}

fn normalize_geometric(d: &mut [f64]) {
    let g = (d.iter().map(|v| v.ln()).sum::<f64>() / d.len() as f64).exp();
    d.iter_mut().for_each(|v| *v /= g);
}

fn with_d(a: &Matrix, method: CertMethod, mut d: Vec<f64>) -> Option<DiagonalStabilityCertificate> {
    if d.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return None;
    }
    normalize_geometric(&mut d);
    let w = w_max_eig(a, &d);
    (w < -TOL_CERT).then_some(DiagonalStabilityCertificate {
        method,
        d: Some(d),
        w_max_eig: Some(w),
    })
}

fn by_class(method: CertMethod) -> Option<DiagonalStabilityCertificate> {
    Some(DiagonalStabilityCertificate {
        method,
        d: None,
        w_max_eig: None,
    })
}

/// `D = diag(1, d)` for a 2x2 matrix with negative diagonal and positive
/// determinant; `d` maximizes the determinant of `DA + A^T D`.
fn two_by_two_d(a: &Matrix) -> Vec<f64> {
    let (a11, a12, a21, a22) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let d = if a21 != 0.0 {
        (4.0 * a11 * a22 - 2.0 * a12 * a21) / (2.0 * a21 * a21)
    } else {
        a12 * a12 / (2.0 * a11 * a22) + 1.0
    };
    vec![1.0, d]
}

/// `D = diag(y_i / x_i)` with `x = C^{-1} 1`, `y = C^{-T} 1` for the
/// comparison matrix `C` of an NDD matrix.
fn ndd_d(a: &Matrix) -> Option<Vec<f64>> {
    let n = a.nrows();
    let c = comparison_matrix(a);
    let ones = DVector::from_element(n, 1.0);
    let x = c.clone().lu().solve(&ones)?;
    let y = c.transpose().lu().solve(&ones)?;
    Some((0..n).map(|i| y[i] / x[i]).collect())
}

fn numeric_search(a: &Matrix) -> Option<DiagonalStabilityCertificate> {
    let n = a.nrows();
    let target = -1e-6 * max_abs(a).max(1e-3);
    let eval = |logd: &[f64]| {
        let mut d: Vec<f64> = logd.iter().map(|v| v.exp()).collect();
        normalize_geometric(&mut d);
        w_max_eig(a, &d)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for restart in 0..10 {
        let mut x: Vec<f64> = if restart == 0 {
            vec![0.0; n]
        } else {
            (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()
        };
        let mut best = eval(&x);
        let mut step = 1.0;
        for _ in 0..200 {
            if best < target {
                break;
            }
            let mut improved = false;
            for i in 0..n {
                for s in [step, -step] {
                    x[i] += s;
                    let v = eval(&x);
                    if v < best {
                        best = v;
                        improved = true;
                        break;
                    }
                    x[i] -= s;
                }
            }
            if !improved {
                step *= 0.5;
                if step < 1e-8 {
                    break;
                }
            }
        }
        if let Some(c) = with_d(a, CertMethod::NumericSearch, x.iter().map(|v| v.exp()).collect()) {
            return Some(c);
        }
    }
    None
}

/// Tries the known diagonally stable classes in a fixed order, then a
/// bounded numeric search. Any returned `D` has been re-verified.
pub fn diagonal_stability_certificate(a: &Matrix) -> Result<CertOutcome> {
    let n = check_square(a)?;
    if let Some(i) = (0..n).find(|&i| a[(i, i)] >= 0.0) {
        return Ok(CertOutcome::NotDiagStable {
            reason: format!("diagonal entry {i} is not negative"),
        });
    }
    if is_negative_definite_sym_part(a)? {
        if let Some(c) = with_d(a, CertMethod::SymmetricPartNegativeDefinite, vec![1.0; n]) {
            return Ok(CertOutcome::Certified(c));
        }
    }
    if n == 2 {
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        if det <= 0.0 {
            return Ok(CertOutcome::NotDiagStable {
                reason: format!("2x2 determinant {det} is not positive"),
            });
        }
        if let Some(c) = with_d(a, CertMethod::TwoByTwo, two_by_two_d(a)) {
            return Ok(CertOutcome::Certified(c));
        }
    }
    if !is_hurwitz(a)? {
        return Ok(CertOutcome::NotDiagStable {
            reason: "matrix is not Hurwitz stable".into(),
        });
    }
    if is_triangular(a)? {
        return Ok(CertOutcome::Certified(by_class(CertMethod::TriangularStable).unwrap()));
    }
    if is_ndd(a, None)?.ndd {
        if let Some(c) = ndd_d(a).and_then(|d| with_d(a, CertMethod::Ndd, d)) {
            return Ok(CertOutcome::Certified(c));
        }
    }
    if is_normal(a)? {
        return Ok(CertOutcome::Certified(by_class(CertMethod::NormalStable).unwrap()));
    }
    let neg = -a;
    if is_m_matrix(&neg)? {
        return Ok(CertOutcome::Certified(by_class(CertMethod::NegatedMMatrix).unwrap()));
    }
    if is_tridiagonal(a)? && n <= P_MINOR_CAP && is_p_matrix(&neg)? {
        return Ok(CertOutcome::Certified(by_class(CertMethod::NegatedTridiagonalP).unwrap()));
    }
    if is_h_plus_matrix(&neg)? {
        return Ok(CertOutcome::Certified(by_class(CertMethod::NegatedNonsingularHPlus).unwrap()));
    }
    match numeric_search(a) {
        Some(c) => Ok(CertOutcome::Certified(c)),
        None => Ok(CertOutcome::Inconclusive {
            reason: "no class matched and the numeric search found no D".into(),
        }),
    }
}

/// Lyapunov test: `lambda_max(HA + A^T H) < -TOL_CERT` for symmetric
/// positive definite `H`.
pub fn lyapunov_verify(a: &Matrix, h: &Matrix) -> Result<bool> {
    let n = check_square(a)?;
    if check_square(h)? != n {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, A is {n}x{n}",
            h.nrows(),
            h.ncols()
        )));
    }
    if max_abs(&(h - h.transpose())) > scale_tol(h) || Cholesky::new(h.clone()).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let ha = h * a;
    Ok(lambda_max_sym(&(&ha + ha.transpose())) < -TOL_CERT)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalingTag {
    #[serde(rename = "all")]
    AllPositiveD,
    #[serde(rename = "unit")]
    UnitIntervalD,
    #[serde(rename = "geq1")]
    GeqOneD,
}

/// A class of positive diagonal matrices with log-uniform sampling bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingClass {
    pub tag: ScalingTag,
    pub log_range: (f64, f64),
}

impl ScalingClass {
    pub fn new(tag: ScalingTag) -> Self {
        let log_range = match tag {
            ScalingTag::AllPositiveD => (1e-3, 1e3),
            ScalingTag::UnitIntervalD => (1e-3, 1.0),
            ScalingTag::GeqOneD => (1.0, 1e3),
        };
        Self { tag, log_range }
    }

    pub fn with_range(tag: ScalingTag, lo: f64, hi: f64) -> Result<Self> {
        let ok = lo > 0.0
            && lo <= hi
            && hi.is_finite()
            && match tag {
                ScalingTag::AllPositiveD => true,
                ScalingTag::UnitIntervalD => hi <= 1.0,
                ScalingTag::GeqOneD => lo >= 1.0,
            };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "sampling range [{lo}, {hi}] not inside the class {tag:?}"
            )));
        }
        Ok(Self { tag, log_range: (lo, hi) })
    }

    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Vec<f64> {
        let (lo, hi) = (self.log_range.0.ln(), self.log_range.1.ln());
        (0..n).map(|_| rng.random_range(lo..=hi).exp()).collect()
    }

    pub fn contains(&self, d: &[f64]) -> bool {
        d.iter().all(|&v| {
            v > 0.0
                && match self.tag {
                    ScalingTag::AllPositiveD => true,
                    ScalingTag::UnitIntervalD => v <= 1.0,
                    ScalingTag::GeqOneD => v >= 1.0,
                }
        })
    }
}

/// Random generator for trial `trial` of a run seeded with `seed`: a
/// ChaCha stream keyed by the seed, one stream per trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Thread cap from `REGDOM_THREADS`, if set to a positive integer.
pub fn thread_cap_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Runs `trial(i, rng)` for `i in 0..trials` in parallel and returns the
/// lowest-index hit (or the lowest-index error). The result does not depend
/// on the number of threads.
pub fn falsify<T, F>(trials: usize, seed: u64, threads: Option<usize>, trial: F) -> Result<Option<(usize, T)>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Option<T>> + Sync,
{
    let run = || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(seed, i);
                trial(i, &mut rng).map(|hit| hit.map(|t| (i, t)))
            })
            .find_map_first(Result::transpose)
            .transpose()
    };
    match threads.or_else(thread_cap_from_env) {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub d: Vec<f64>,
    pub eigenvalue: ComplexPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingVerdict {
    pub trials: usize,
    pub seed: u64,
    pub class: ScalingClass,
    pub counterexample: Option<Counterexample>,
}

impl SamplingVerdict {
    pub fn found_counterexample(&self) -> bool {
        self.counterexample.is_some()
    }

    pub fn summary(&self) -> String {
        match &self.counterexample {
            Some(c) => format!("counterexample at trial {}", c.trial),
            None => format!("no counterexample in {} trials", self.trials),
        }
    }
}

/// Samples `D` from `class` and checks `sigma(DA)` against `region`;
/// returns the lowest-index counterexample, if any.
pub fn d_stability_sample(
    a: &Matrix,
    region: &Region,
    class: ScalingClass,
    trials: usize,
    seed: u64,
) -> Result<SamplingVerdict> {
    d_stability_sample_with(a, region, class, trials, seed, None)
}

pub fn d_stability_sample_with(
    a: &Matrix,
    region: &Region,
    class: ScalingClass,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SamplingVerdict> {
    let n = check_square(a)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let hit = falsify(trials, seed, threads, |_, rng| {
        let d = class.sample(n, rng);
        let ev = eigenvalues(&scale_rows(&d, a))?;
        Ok(ev
            .into_iter()
            .find(|&z| !region.contains(z))
            .map(|z| (d, z)))
    })?;
    Ok(SamplingVerdict {
        trials,
        seed,
        class,
        counterexample: hit.map(|(trial, (d, z))| Counterexample {
            trial,
            d,
            eigenvalue: z.into(),
        }),
    })
}
