//! Second-order systems `x'' = A x' + B x`.
//!
//! The spectrum of the system is that of the companion matrix
//! `[[A, B], [I, 0]]`, equivalently the roots of
//! `det(l^2 I - l A - B) = 0`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dominance::is_region_dominant;
use crate::error::{Error, Result};
use crate::linalg::{
    check_square, from_rows, is_diagonal, max_abs, multiset_distance, scale_rows, to_rows,
    ComplexPoint, Matrix, STRUCT_TOL,
};
use crate::regions::Region;
use crate::report::{CheckReport, Hypothesis, Verdict};
use crate::spectra::{
    diagonal_stability_certificate, eigenvalues, falsify, CertOutcome, Counterexample,
    DiagonalStabilityCertificate, SamplingVerdict, ScalingClass, ScalingTag,
};

/// Default relative tolerance of the commutation gate used by
/// [`rh_analysis`].
pub const COMMUTE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SystemRows", into = "SystemRows")]
pub struct SecondOrderSystem {
    pub a: Matrix,
    pub b: Matrix,
}

#[derive(Serialize, Deserialize)]
struct SystemRows {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
}

impl TryFrom<SystemRows> for SecondOrderSystem {
    type Error = Error;

    fn try_from(r: SystemRows) -> Result<Self> {
        Self::new(from_rows(&r.a)?, from_rows(&r.b)?)
    }
}

impl From<SecondOrderSystem> for SystemRows {
    fn from(s: SecondOrderSystem) -> Self {
        Self {
            a: to_rows(&s.a),
            b: to_rows(&s.b),
        }
    }
}

impl SecondOrderSystem {
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        let n = check_square(&a)?;
        let m = check_square(&b)?;
        if n != m {
            return Err(Error::DimensionMismatch(format!("A is {n}x{n}, B is {m}x{m}")));
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

/// `[[A, B], [I, 0]]`.
pub fn companion(sys: &SecondOrderSystem) -> Matrix {
    let n = sys.dim();
    let mut m = Matrix::zeros(2 * n, 2 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&sys.a);
    m.view_mut((0, n), (n, n)).copy_from(&sys.b);
    m.view_mut((n, 0), (n, n)).fill_with_identity();
    m
}

fn complexify(m: &Matrix) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

/// `G(l) = l^2 I - l A - B`.
pub fn pencil_at(sys: &SecondOrderSystem, l: Complex64) -> DMatrix<Complex64> {
    let n = sys.dim();
    DMatrix::<Complex64>::identity(n, n) * (l * l) - complexify(&sys.a) * l - complexify(&sys.b)
}

/// Smallest singular value of `G(l)` relative to the size of its terms.
pub fn pencil_residual(sys: &SecondOrderSystem, l: Complex64) -> f64 {
    let g = pencil_at(sys, l);
    let smin = g
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let scale = l.norm_sqr() + l.norm() * sys.a.norm() + sys.b.norm();
    smin / scale.max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilSpectrum {
    pub roots: Vec<ComplexPoint>,
    /// Largest relative residual `sigma_min(G(l))` over the roots.
    pub max_residual: f64,
}

impl PencilSpectrum {
    pub fn roots(&self) -> Vec<Complex64> {
        self.roots.iter().map(|&p| p.into()).collect()
    }
}

pub fn pencil_spectrum(sys: &SecondOrderSystem) -> Result<PencilSpectrum> {
    let roots = eigenvalues(&companion(sys))?;
    let max_residual = roots
        .iter()
        .map(|&l| pencil_residual(sys, l))
        .fold(0.0, f64::max);
    Ok(PencilSpectrum {
        roots: roots.into_iter().map(ComplexPoint::from).collect(),
        max_residual,
    })
}

fn strictly_lower_small(m: &Matrix, tol: f64) -> bool {
    (0..m.nrows()).all(|i| (0..i).all(|j| m[(i, j)].abs() <= tol))
}

fn both_triangular(sys: &SecondOrderSystem) -> bool {
    let upper = strictly_lower_small(&sys.a, STRUCT_TOL) && strictly_lower_small(&sys.b, STRUCT_TOL);
    let lower = strictly_lower_small(&sys.a.transpose(), STRUCT_TOL)
        && strictly_lower_small(&sys.b.transpose(), STRUCT_TOL);
    upper || lower
}

/// Roots of `l^2 - p l - q = 0` for complex `p`, `q`, computed without
/// cancellation.
pub fn quadratic_roots(p: Complex64, q: Complex64) -> [Complex64; 2] {
    let disc = (p * p + q * 4.0).sqrt();
    // Pick the sign that avoids subtracting nearly equal numbers.
    let big = if (p + disc).norm() >= (p - disc).norm() { p + disc } else { p - disc };
    if big.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    let r1 = big / 2.0;
    // Product of the roots is -q.
    [r1, -q / r1]
}

/// Closed-form spectrum for a pair of upper (or lower) triangular `A`, `B`:
/// the roots of `l^2 - a_ii l - b_ii` for each `i`.
pub fn triangular_spectrum(sys: &SecondOrderSystem) -> Result<Vec<Complex64>> {
    if !both_triangular(sys) {
        return Err(Error::NotTriangular);
    }
    Ok((0..sys.dim())
        .flat_map(|i| {
            quadratic_roots(
                Complex64::new(sys.a[(i, i)], 0.0),
                Complex64::new(sys.b[(i, i)], 0.0),
            )
        })
        .collect())
}

/// Exact test of `Re l < alpha` for triangular pairs:
/// `a_ii / 2 < alpha` and `b_ii < alpha^2 - alpha a_ii` for every `i`.
pub fn triangular_shifted_stable(sys: &SecondOrderSystem, alpha: f64) -> Result<bool> {
    if !both_triangular(sys) {
        return Err(Error::NotTriangular);
    }
    Ok((0..sys.dim()).all(|i| {
        let (a, b) = (sys.a[(i, i)], sys.b[(i, i)]);
        a / 2.0 < alpha && b < alpha * alpha - alpha * a
    }))
}

/// The per-row bound on `b_ii` used for the shifted half-plane with shift
/// `alpha`: `-alpha^2` for `alpha >= 0`, `3 alpha^2 - 2 a_ii alpha` otherwise.
fn b_bound(alpha: f64, a_ii: f64) -> f64 {
    if alpha >= 0.0 {
        -alpha * alpha
    } else {
        3.0 * alpha * alpha - 2.0 * a_ii * alpha
    }
}

fn shifted_dominance(a: &Matrix, shift: f64) -> Result<bool> {
    Ok(is_region_dominant(a, &Region::half_plane(shift)?)?.holds())
}

/// Sufficient test that the real number `alpha` is not an eigenvalue of
/// the companion matrix. Requires diagonal `B` and `A` diagonally dominant
/// with respect to `Re z < 2 alpha`.
pub fn real_eigenvalue_excluded(sys: &SecondOrderSystem, alpha: f64) -> Result<bool> {
    if !is_diagonal(&sys.b, STRUCT_TOL) {
        return Err(Error::PreconditionFailed("B is not diagonal".into()));
    }
    if !shifted_dominance(&sys.a, 2.0 * alpha)? {
        return Err(Error::PreconditionFailed(format!(
            "A is not diagonally dominant for Re z < {}",
            2.0 * alpha
        )));
    }
    Ok((0..sys.dim()).all(|i| sys.b[(i, i)] < b_bound(alpha, sys.a[(i, i)])))
}

fn is_negative_diagonal(b: &Matrix) -> bool {
    is_diagonal(b, STRUCT_TOL) && (0..b.nrows()).all(|i| b[(i, i)] < 0.0)
}

/// Sufficient condition for `Re l < alpha` on the companion spectrum:
/// negative diagonal `B` with the row bounds on `b_ii`, and `A` diagonally
/// dominant for `Re z < 2 alpha`.
pub fn t2_shifted_stable(sys: &SecondOrderSystem, alpha: f64) -> Result<CheckReport> {
    let n = sys.dim();
    let b_diag = is_diagonal(&sys.b, STRUCT_TOL);
    let b_neg = (0..n).all(|i| sys.b[(i, i)] < 0.0);
    let bad_rows: Vec<usize> = (0..n)
        .filter(|&i| sys.b[(i, i)] >= b_bound(alpha, sys.a[(i, i)]))
        .collect();
    let dom = is_region_dominant(&sys.a, &Region::half_plane(2.0 * alpha)?)?;
    let hyps = vec![
        Hypothesis::new(
            "B diagonal",
            b_diag,
            if b_diag { String::new() } else { "B has nonzero off-diagonal entries".into() },
        ),
        Hypothesis::new("B diagonal entries negative", b_neg, ""),
        Hypothesis::new(
            "b_ii below the shift bound",
            bad_rows.is_empty(),
            if bad_rows.is_empty() {
                String::new()
            } else {
                format!("violated in rows {bad_rows:?}")
            },
        ),
        Hypothesis::new(
            "A diagonally dominant for Re z < 2 alpha",
            dom.holds(),
            format!("minimum row margin {}", dom.min_margin()),
        ),
    ];
    Ok(CheckReport::sufficient(
        format!("companion spectrum in Re z < {alpha}"),
        &["Thm-T2", "Lem-lem"],
        hyps,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhData {
    pub mu: ComplexPoint,
    pub nu: ComplexPoint,
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_hat: f64,
    pub d_hat: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// `delta2` recomputed from the unshifted `a, b, c, d`.
    pub delta2_expanded: f64,
    /// `a^2 b + a c d + d^2` (must be negative), reported when `alpha = 0`.
    pub delta2_at_zero: Option<f64>,
}

impl RhData {
    pub fn new(mu: Complex64, nu: Complex64, alpha: f64) -> Self {
        let (a, c, b, d) = (mu.re, mu.im, nu.re, nu.im);
        let a_hat = 2.0 * alpha - a;
        let c_hat = -c;
        let b_hat = alpha * alpha - a * alpha - b;
        let d_hat = -alpha * c - d;
        let delta2 = a_hat * a_hat * b_hat + a_hat * c_hat * d_hat - d_hat * d_hat;
        let e = alpha * c + d;
        let delta2_expanded = (2.0 * alpha - a).powi(2) * (alpha * alpha - a * alpha - b)
            + (2.0 * alpha - a) * c * e
            - e * e;
        Self {
            mu: mu.into(),
            nu: nu.into(),
            a_hat,
            b_hat,
            c_hat,
            d_hat,
            delta1: a_hat,
            delta2,
            delta2_expanded,
            delta2_at_zero: (alpha == 0.0).then_some(a * a * b + a * c * d + d * d),
        }
    }

    pub fn passes(&self) -> bool {
        self.delta1 > 0.0 && self.delta2 > 0.0
    }

    /// Roots of `l^2 - mu l - nu`.
    pub fn roots(&self) -> [Complex64; 2] {
        quadratic_roots(self.mu.into(), self.nu.into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhReport {
    pub alpha: f64,
    pub pairs: Vec<RhData>,
    /// `Pass` iff the companion spectrum lies in `Re z < alpha`.
    pub verdict: Verdict,
    /// Matching distance between the roots implied by the pairs and the
    /// companion eigenvalues.
    pub pairing_residual: f64,
    pub cites: Vec<String>,
}

/// Joint triangularization of a commuting pair: complex Schur form of
/// `A + tB` for a few fixed `t`, accepted when it triangularizes both.
fn joint_diagonals(sys: &SecondOrderSystem, tri_tol: f64) -> Option<Vec<(Complex64, Complex64)>> {
    let n = sys.dim();
    let ca = complexify(&sys.a);
    let cb = complexify(&sys.b);
    let off_ok = |t: &DMatrix<Complex64>, scale: f64| {
        (0..n).all(|i| (0..i).all(|j| t[(i, j)].norm() <= tri_tol * scale.max(1.0)))
    };
    for t in [0.0, 0.618_033_988_7, -std::f64::consts::SQRT_2, std::f64::consts::E, std::f64::consts::FRAC_1_PI] {
        let c = &ca + &cb * Complex64::new(t, 0.0);
        let Some(schur) = Schur::try_new(c, f64::EPSILON, 1000 * n.max(10)) else {
            continue;
        };
        let (q, _) = schur.unpack();
        let qh = q.adjoint();
        let ta = &qh * &ca * &q;
        let tb = &qh * &cb * &q;
        if off_ok(&ta, sys.a.norm()) && off_ok(&tb, sys.b.norm()) {
            return Some((0..n).map(|i| (ta[(i, i)], tb[(i, i)])).collect());
        }
    }
    None
}

/// Routh-Hurwitz analysis for commuting `A`, `B` at the default gate
/// tolerance.
pub fn rh_analysis(sys: &SecondOrderSystem, alpha: f64) -> Result<RhReport> {
    rh_analysis_with_tol(sys, alpha, COMMUTE_TOL)
}

/// Exact test of `Re l < alpha` for simultaneously triangularizable pairs,
/// accepted when `|AB - BA|_max <= tol |A| |B|`. Each eigenvalue pair
/// `(mu_i, nu_i)` gives the quadratic `l^2 - mu_i l - nu_i`, whose shifted
/// Hurwitz determinants must both be positive.
pub fn rh_analysis_with_tol(sys: &SecondOrderSystem, alpha: f64, tol: f64) -> Result<RhReport> {
    let comm = &sys.a * &sys.b - &sys.b * &sys.a;
    let gate = tol * sys.a.norm() * sys.b.norm();
    if max_abs(&comm) > gate {
        return Err(Error::NotSimultaneouslyTriangularizable(format!(
            "|AB - BA|_max = {:e} exceeds {:e}",
            max_abs(&comm),
            gate
        )));
    }
    let pairs = joint_diagonals(sys, tol.sqrt().max(1e-10)).ok_or_else(|| {
        Error::NotSimultaneouslyTriangularizable("no joint Schur basis found".into())
    })?;
    let pairs: Vec<RhData> = pairs
        .into_iter()
        .map(|(mu, nu)| RhData::new(mu, nu, alpha))
        .collect();
    let implied: Vec<Complex64> = pairs.iter().flat_map(RhData::roots).collect();
    let pairing_residual = multiset_distance(&implied, &eigenvalues(&companion(sys))?);
    let stable = pairs.iter().all(RhData::passes);
    Ok(RhReport {
        alpha,
        pairs,
        verdict: if stable { Verdict::Pass } else { Verdict::Fail },
        pairing_residual,
        cites: vec!["Thm-RH".into()],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationForm {
    /// `x'' = D(A x' + B x)`.
    Full,
    /// `x'' = DA x' + B x`.
    FormI,
    /// `x'' = A x' + DB x`.
    FormII,
}

pub fn check_diagonal(d: &[f64], n: usize) -> Result<()> {
    if d.len() != n || d.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::BadDiagonal { expected: n });
    }
    Ok(())
}

pub fn perturb(sys: &SecondOrderSystem, d: &[f64], form: PerturbationForm) -> Result<SecondOrderSystem> {
    check_diagonal(d, sys.dim())?;
    let (a, b) = match form {
        PerturbationForm::Full => (scale_rows(d, &sys.a), scale_rows(d, &sys.b)),
        PerturbationForm::FormI => (scale_rows(d, &sys.a), sys.b.clone()),
        PerturbationForm::FormII => (sys.a.clone(), scale_rows(d, &sys.b)),
    };
    Ok(SecondOrderSystem { a, b })
}

/// Samples `D` from `class`, perturbs `sys` in `form`, and checks the
/// companion spectrum against `region`.
pub fn sample_perturbed(
    sys: &SecondOrderSystem,
    form: PerturbationForm,
    class: ScalingClass,
    region: &Region,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SamplingVerdict> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let n = sys.dim();
    let hit = falsify(trials, seed, threads, |_, rng| {
        let d = class.sample(n, rng);
        let p = perturb(sys, &d, form)?;
        let ev = eigenvalues(&companion(&p))?;
        Ok(ev.into_iter().find(|&z| !region.contains(z)).map(|z| (d, z)))
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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DStabilityReport {
    #[serde(flatten)]
    pub check: CheckReport,
    pub certificate: Option<DiagonalStabilityCertificate>,
    /// Eigenvector matrix `S` of `B` when the similarity path was used.
    pub similarity: Option<Vec<Vec<f64>>>,
}

/// Real eigenvector basis of `B` when `B` is diagonalizable with real
/// negative eigenvalues.
fn negative_real_eigenbasis(b: &Matrix) -> std::result::Result<Matrix, String> {
    let n = b.nrows();
    let scale = max_abs(b).max(1.0);
    let ev = eigenvalues(b).map_err(|e| e.to_string())?;
    if ev.iter().any(|z| z.im.abs() > 1e-10 * scale) {
        return Err("B has non-real eigenvalues".into());
    }
    if ev.iter().any(|z| z.re >= 0.0) {
        return Err("B has a nonnegative eigenvalue".into());
    }
    let mut vals: Vec<f64> = ev.iter().map(|z| z.re).collect();
    vals.sort_by(f64::total_cmp);
    let cluster_tol = 1e-8 * scale;
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for v in vals {
        match groups.last_mut() {
            Some((c, k)) if (v - *c).abs() <= cluster_tol => *k += 1,
            _ => groups.push((v, 1)),
        }
    }
    let mut cols: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(n);
    for (nu, mult) in groups {
        let shifted = b - Matrix::identity(n, n) * nu;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let null: Vec<usize> = (0..n)
            .filter(|&k| svd.singular_values[k] <= 1e-7 * scale)
            .collect();
        if null.len() < mult {
            return Err(format!("B is not diagonalizable at eigenvalue {nu}"));
        }
        cols.extend(null.iter().take(mult).map(|&k| vt.row(k).transpose()));
    }
    let s = Matrix::from_columns(&cols);
    let sv = s.singular_values();
    let cond = sv.max() / sv.min();
    if !(cond < 1e12) {
        return Err(format!("eigenvector matrix is ill-conditioned (cond {cond:e})"));
    }
    Ok(s)
}

/// Sufficient conditions for stability of the system and its diagonal
/// perturbations.
///
/// With `B` negative diagonal and `A` diagonally stable the system is
/// D-stable. Otherwise, with `B` diagonalizable over negative reals by `S`
/// and `S^{-1} A S` diagonally stable, the unperturbed system is stable.
pub fn sufficient_d_stability(sys: &SecondOrderSystem) -> Result<DStabilityReport> {
    let n = sys.dim();
    let b_negdiag = is_negative_diagonal(&sys.b);
    let cert_a = diagonal_stability_certificate(&sys.a)?;
    let a_cert = cert_a.certificate().cloned();
    let mut hyps = vec![
        Hypothesis::new("B negative diagonal", b_negdiag, ""),
        Hypothesis::new("A diagonally stable", a_cert.is_some(), cert_detail(&cert_a)),
    ];
    if b_negdiag {
        if let Some(cert) = a_cert {
            let mut cites = vec!["Thm-perst", "Thm-diagcrit"];
            if cert.method == crate::spectra::CertMethod::Ndd {
                cites.push("Cor-Crit1");
            }
            if n <= 2 {
                cites.push("Cor-Crit11");
            }
            let check = CheckReport::sufficient("D-stable", &cites, hyps)
                .with_note(format!("diagonal stability of A via {:?}", cert.method));
            return Ok(DStabilityReport {
                check,
                certificate: Some(cert),
                similarity: None,
            });
        }
    }
    match negative_real_eigenbasis(&sys.b) {
        Ok(s) => {
            let s_inv = s.clone().try_inverse().ok_or_else(|| {
                Error::PreconditionFailed("eigenvector matrix of B is singular".into())
            })?;
            let similar = &s_inv * &sys.a * &s;
            let cert = diagonal_stability_certificate(&similar)?;
            hyps.push(Hypothesis::new("B diagonalizable with negative real spectrum", true, ""));
            hyps.push(Hypothesis::new(
                "S^-1 A S diagonally stable",
                cert.certificate().is_some(),
                cert_detail(&cert),
            ));
            let holds = cert.certificate().is_some();
            let mut check = CheckReport {
                verdict: if holds { Verdict::Pass } else { Verdict::Inconclusive },
                claim: holds.then(|| "stable".to_string()),
                cites: vec!["Thm-diagcrit".into()],
                hypotheses: hyps,
                notes: Vec::new(),
            };
            if holds {
                check.notes.push("the D-stability path did not apply; stability of the unperturbed system only".into());
            }
            Ok(DStabilityReport {
                check,
                certificate: cert.certificate().cloned(),
                similarity: Some(to_rows(&s)),
            })
        }
        Err(reason) => {
            hyps.push(Hypothesis::new(
                "B diagonalizable with negative real spectrum",
                false,
                reason,
            ));
            let check = CheckReport {
                verdict: Verdict::Inconclusive,
                claim: None,
                cites: vec!["Thm-perst".into(), "Thm-diagcrit".into()],
                hypotheses: hyps,
                notes: Vec::new(),
            };
            Ok(DStabilityReport {
                check,
                certificate: None,
                similarity: None,
            })
        }
    }
}

fn cert_detail(c: &CertOutcome) -> String {
    match c {
        CertOutcome::Certified(cert) => format!("{:?}", cert.method),
        CertOutcome::Inconclusive { reason } | CertOutcome::NotDiagStable { reason } => reason.clone(),
    }
}

/// Sufficient condition for relative D-stability with minimal decay rate
/// `alpha > 0`: `A` diagonally dominant for `Re z < -2 alpha`, `B` negative
/// diagonal, and `b_ii < 2 a_ii alpha`.
pub fn relative_d_stability_check(sys: &SecondOrderSystem, alpha: f64) -> Result<CheckReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("decay rate {alpha} must be positive")));
    }
    let n = sys.dim();
    let dom = is_region_dominant(&sys.a, &Region::half_plane(-2.0 * alpha)?)?;
    let bad: Vec<usize> = (0..n)
        .filter(|&i| sys.b[(i, i)] >= 2.0 * sys.a[(i, i)] * alpha)
        .collect();
    let hyps = vec![
        Hypothesis::new(
            "A diagonally dominant for Re z < -2 alpha",
            dom.holds(),
            format!("minimum row margin {}", dom.min_margin()),
        ),
        Hypothesis::new("B negative diagonal", is_negative_diagonal(&sys.b), ""),
        Hypothesis::new(
            "b_ii < 2 a_ii alpha",
            bad.is_empty(),
            if bad.is_empty() { String::new() } else { format!("violated in rows {bad:?}") },
        ),
    ];
    Ok(CheckReport::sufficient(
        format!("relatively D-stable with minimal decay rate {alpha}"),
        &["Thm-relative-decay", "Thm-T2", "Lem-hyp"],
        hyps,
    ))
}

/// Consistency sampling for [`relative_d_stability_check`]: full-form
/// perturbations with `D >= I` must keep the companion spectrum in
/// `Re z < -alpha`.
pub fn relative_d_stability_sample(
    sys: &SecondOrderSystem,
    alpha: f64,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SamplingVerdict> {
    sample_perturbed(
        sys,
        PerturbationForm::Full,
        ScalingClass::new(ScalingTag::GeqOneD),
        &Region::half_plane(-alpha)?,
        trials,
        seed,
        threads,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Form2StabilityPart {
    /// `Fail` when some `D` (the identity or a sample) moves `sigma(DB)`
    /// out of the parabola; otherwise `Inconclusive` (sampling cannot
    /// prove the universal statement).
    pub verdict: Verdict,
    pub region: Region,
    pub identity_inside: bool,
    pub sampling: SamplingVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Form2Report {
    pub a: f64,
    pub stability: Form2StabilityPart,
    pub dominance: CheckReport,
    pub decay: Option<Form2StabilityPart>,
    pub decay_rate: Option<f64>,
}

/// Scalar `a` when `A = aI` with `a < 0`.
pub fn scalar_negative(a: &Matrix) -> Result<f64> {
    let n = check_square(a)?;
    let s = a[(0, 0)];
    if !(s < 0.0)
        || !is_diagonal(a, STRUCT_TOL)
        || (0..n).any(|i| (a[(i, i)] - s).abs() > STRUCT_TOL)
    {
        return Err(Error::NotScalarA);
    }
    Ok(s)
}

fn parabola_part(
    b: &Matrix,
    region: Region,
    class: ScalingClass,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<Form2StabilityPart> {
    let identity_inside = eigenvalues(b)?.iter().all(|&z| region.contains(z));
    let sampling = crate::spectra::d_stability_sample_with(b, &region, class, trials, seed, threads)?;
    let verdict = if !identity_inside || sampling.found_counterexample() {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(Form2StabilityPart {
        verdict,
        region,
        identity_inside,
        sampling,
    })
}

/// Form II perturbations `x'' = aI x' + DB x` with `a < 0`.
///
/// Stability is preserved for every positive `D` exactly when `sigma(DB)`
/// stays in the parabola `y^2 < -a^2 x`; this is tested by sampling.
/// Diagonal dominance of `B` for that parabola certifies it for
/// `D in (0, 1]`. For a decay rate `delta > 0`, the shifted parabola
/// `y^2 < -k^2 (x - delta (delta + a))` with `k = -2 delta - a` takes its
/// place; it is sampled over `D >= I` because its apex is negative.
pub fn form2_parabola_analysis(
    sys: &SecondOrderSystem,
    decay_rate: Option<f64>,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<Form2Report> {
    let a = scalar_negative(&sys.a)?;
    let par = Region::parabola(-a)?;
    let stability = parabola_part(
        &sys.b,
        par.clone(),
        ScalingClass::new(ScalingTag::AllPositiveD),
        trials,
        seed,
        threads,
    )?;
    let dom = is_region_dominant(&sys.b, &par)?;
    let dominance = CheckReport::sufficient(
        "Form II stable for every D in (0, 1]",
        &["Thm-form2-dominance", "Thm-par", "Cor-2type"],
        vec![Hypothesis::new(
            format!("B diagonally dominant for {par}"),
            dom.holds(),
            format!("minimum row margin {}", dom.min_margin()),
        )],
    );
    let decay = match decay_rate {
        None => None,
        Some(delta) => {
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(Error::InvalidArgument(format!("decay rate {delta} must be positive")));
            }
            let k = -2.0 * delta - a;
            if k <= 0.0 {
                // The shifted Hurwitz determinant 2(-delta) - a is not
                // positive, so even D = I misses the decay rate.
                let region = Region::half_plane(-delta)?;
                Some(Form2StabilityPart {
                    verdict: Verdict::Fail,
                    region,
                    identity_inside: false,
                    sampling: SamplingVerdict {
                        trials: 0,
                        seed,
                        class: ScalingClass::new(ScalingTag::GeqOneD),
                        counterexample: None,
                    },
                })
            } else {
                let region = Region::shifted_parabola(k, delta * (delta + a))?;
                Some(parabola_part(
                    &sys.b,
                    region,
                    ScalingClass::new(ScalingTag::GeqOneD),
                    trials,
                    seed,
                    threads,
                )?)
            }
        }
    };
    Ok(Form2Report {
        a,
        stability,
        dominance,
        decay,
        decay_rate,
    })
}
