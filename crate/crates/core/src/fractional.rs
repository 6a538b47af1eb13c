//! Fractional-order systems `d^g x = A x`.
//!
//! The system is asymptotically stable iff every eigenvalue satisfies
//! `|arg l| > g pi / 2`. That set is not convex, so it is tested directly on
//! arguments rather than through [`Region`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dominance::{is_ndd, is_region_dominant, is_strictly_dd, Side};
use crate::error::{Error, Result};
use crate::linalg::{check_square, off_diagonal_row_sum, ComplexPoint, Matrix, STRUCT_TOL};
use crate::regions::Region;
use crate::report::{CheckReport, Hypothesis, Verdict};
use crate::second_order::{pencil_spectrum, SecondOrderSystem};
use crate::spectra::{
    eigenvalues, falsify, Counterexample, SamplingVerdict, ScalingClass, ScalingTag,
    SpectrumReport, TOL_MARGIN,
};

/// Tolerance on angle comparisons (radians).
pub const TOL_ANGLE: f64 = TOL_MARGIN;

/// Largest accepted condition number of `A12`.
pub const A12_COND_CAP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalSystem {
    #[serde(rename = "A", with = "rows")]
    pub a: Matrix,
    pub gamma: f64,
}

mod rows {
    use super::Matrix;
    use crate::linalg::{from_rows, to_rows};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix, D::Error> {
        from_rows(&Vec::<Vec<f64>>::deserialize(d)?).map_err(D::Error::custom)
    }
}

impl FractionalSystem {
    pub fn new(a: Matrix, gamma: f64) -> Result<Self> {
        check_square(&a)?;
        if !(gamma > 0.0 && gamma <= 2.0) {
            return Err(Error::InvalidArgument(format!("order {gamma} outside (0, 2]")));
        }
        Ok(Self { a, gamma })
    }
}

/// Half-angle `g pi / 2` of the sector the spectrum must avoid.
pub fn stability_angle(gamma: f64) -> f64 {
    gamma * FRAC_PI_2
}

/// Dominance cone half-angle `pi/2 - theta` used for `0 < g <= 1/2`,
/// where `theta = g pi / 2`.
pub fn low_gamma_cone(theta: f64) -> f64 {
    FRAC_PI_2 - theta
}

/// Cone half-angle `pi (1 - g/2)` used for `1 <= g < 2`.
pub fn high_gamma_cone(gamma: f64) -> f64 {
    PI * (1.0 - gamma / 2.0)
}

/// `|arg z|`, with `arg 0 = 0`.
pub fn abs_arg(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        0.0
    } else {
        z.im.atan2(z.re).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FracReport {
    pub gamma: f64,
    pub theta: f64,
    pub args: Vec<f64>,
    #[serde(flatten)]
    pub spectrum: SpectrumReport,
}

fn sector_report(ev: &[Complex64], gamma: f64) -> FracReport {
    let theta = stability_angle(gamma);
    let args: Vec<f64> = ev.iter().map(|&z| abs_arg(z)).collect();
    let depth: Vec<f64> = args.iter().map(|a| a - theta).collect();
    FracReport {
        gamma,
        theta,
        args,
        spectrum: SpectrumReport::from_depths(ev, &depth),
    }
}

/// Sector test `|arg l| > g pi / 2` on the spectrum of `A`; eigenvalues
/// within [`TOL_ANGLE`] of the boundary make the verdict marginal.
pub fn is_frac_stable(fsys: &FractionalSystem) -> Result<FracReport> {
    Ok(sector_report(&eigenvalues(&fsys.a)?, fsys.gamma))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReduction {
    #[serde(with = "rows")]
    pub a11: Matrix,
    #[serde(with = "rows")]
    pub a12: Matrix,
    #[serde(with = "rows")]
    pub a21: Matrix,
    #[serde(with = "rows")]
    pub a22: Matrix,
    #[serde(with = "rows")]
    pub a_hat: Matrix,
    #[serde(with = "rows")]
    pub b_hat: Matrix,
    pub cond_a12: f64,
    /// Relative residual of `A12 (A_hat - A22) = A11 A12`.
    pub residual: f64,
}

impl BlockReduction {
    pub fn pencil(&self) -> SecondOrderSystem {
        SecondOrderSystem {
            a: self.a_hat.clone(),
            b: self.b_hat.clone(),
        }
    }

    /// Roots of `det(l^2 I - A_hat l - B_hat)`.
    pub fn pencil_roots(&self) -> Result<Vec<Complex64>> {
        Ok(pencil_spectrum(&self.pencil())?.roots())
    }
}

fn blocks(a: &Matrix) -> Result<(usize, [Matrix; 4])> {
    let n = check_square(a)?;
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let k = n / 2;
    let b = |r, c| a.view((r, c), (k, k)).into_owned();
    Ok((k, [b(0, 0), b(0, k), b(k, 0), b(k, k)]))
}

/// Reduces an even-dimensional `A` to the quadratic pencil
/// `l^2 I - A_hat l - B_hat` with the same spectrum, where
/// `A_hat = A12^-1 A11 A12 + A22` and
/// `B_hat = A21 A12 - A22 A12^-1 A11 A12`.
pub fn block_reduce(a: &Matrix) -> Result<BlockReduction> {
    let (_, [a11, a12, a21, a22]) = blocks(a)?;
    let sv = a12.singular_values();
    let cond = sv.max() / sv.min();
    if !(cond < A12_COND_CAP) {
        return Err(Error::SingularA12 { cond });
    }
    let lu = a12.clone().lu();
    let sim = lu
        .solve(&(&a11 * &a12))
        .ok_or(Error::SingularA12 { cond })?;
    let a_hat = &sim + &a22;
    let b_hat = &a21 * &a12 - &a22 * &sim;
    let lhs = &a12 * &sim;
    let rhs = &a11 * &a12;
    let scale = (a11.norm() * a12.norm()).max(f64::MIN_POSITIVE);
    let residual = (lhs - rhs).norm() / scale;
    Ok(BlockReduction {
        a11,
        a12,
        a21,
        a22,
        a_hat,
        b_hat,
        cond_a12: cond,
        residual,
    })
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= PI / 4.0 + 1e-15) {
        return Err(Error::InvalidArgument(format!("sector angle {theta} outside (0, pi/4]")));
    }
    Ok(())
}

/// Negative diagonal with strict row dominance. This is the form of the
/// NDD hypothesis the sector argument uses: with only generalized
/// dominance the conclusion can fail.
fn row_ndd(b: &Matrix) -> Hypothesis {
    let n = b.nrows();
    let bad: Vec<usize> = (0..n)
        .filter(|&i| !(b[(i, i)] < 0.0 && -b[(i, i)] - off_diagonal_row_sum(b, i) > 0.0))
        .collect();
    let generalized = is_ndd(b, None).map(|o| o.ndd).unwrap_or(false);
    let holds = bad.is_empty()
        && is_strictly_dd(b, Side::Row).map(|r| r.holds()).unwrap_or(false);
    let detail = if holds {
        String::new()
    } else if generalized {
        format!("generalized NDD only; strict row dominance fails in rows {bad:?}")
    } else {
        format!("not NDD; rows {bad:?}")
    };
    Hypothesis::new("B_hat negative and strictly row dominant", holds, detail)
}

fn cone_dominance(m: &Matrix, half_angle: f64, name: &str) -> Result<Hypothesis> {
    let r = is_region_dominant(m, &Region::cone(0.0, half_angle)?)?;
    Ok(Hypothesis::new(
        format!("{name} diagonally dominant for cone:alpha=0,theta={half_angle}"),
        r.holds(),
        format!("minimum row margin {}", r.min_margin()),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorCheck {
    #[serde(flatten)]
    pub check: CheckReport,
    pub theta: f64,
    pub args: Vec<f64>,
    /// Whether every eigenvalue satisfies `|arg l| > theta`, computed
    /// directly. Must be true whenever the verdict is `Pass`.
    pub conclusion_holds: bool,
    pub eigenvalues: Vec<ComplexPoint>,
}

fn sector_conclusion(a: &Matrix, theta: f64) -> Result<(Vec<Complex64>, Vec<f64>, bool)> {
    let ev = eigenvalues(a)?;
    let args: Vec<f64> = ev.iter().map(|&z| abs_arg(z)).collect();
    let ok = args.iter().all(|&x| x > theta);
    Ok((ev, args, ok))
}

fn finish(a: &Matrix, theta: f64, check: CheckReport) -> Result<SectorCheck> {
    let (ev, args, ok) = sector_conclusion(a, theta)?;
    let mut check = check;
    if check.verdict == Verdict::Pass && !ok {
        check = check.with_note("consistency failure: some eigenvalue lies in the sector");
    }
    Ok(SectorCheck {
        check,
        theta,
        args,
        conclusion_holds: ok,
        eigenvalues: ev.into_iter().map(ComplexPoint::from).collect(),
    })
}

/// Sufficient condition for `|arg l| > theta` on `sigma(A)`, `theta` in
/// `(0, pi/4]`: `A_hat` diagonally dominant for the cone of half-angle
/// `pi/2 - theta` and `B_hat` NDD.
pub fn block_sector_check(a: &Matrix, theta: f64) -> Result<SectorCheck> {
    check_theta(theta)?;
    let red = block_reduce(a)?;
    let hyps = vec![
        cone_dominance(&red.a_hat, low_gamma_cone(theta), "A_hat")?,
        row_ndd(&red.b_hat),
    ];
    let check = CheckReport::sufficient(
        format!("every eigenvalue has |arg| > {theta}"),
        &["Thm-sector", "Lem-block"],
        hyps,
    );
    finish(a, theta, check)
}

fn a12_identity(a12: &Matrix) -> Result<()> {
    let k = a12.nrows();
    if (a12 - Matrix::identity(k, k)).amax() > STRUCT_TOL {
        return Err(Error::A12NotIdentity);
    }
    Ok(())
}

/// The sector condition for `A12 = I`, where `A_hat = A11 + A22` and
/// `B_hat = A21 - A22 A11` need no inverse. Dominance of `A11` and `A22`
/// separately implies that of their sum; the sum is checked directly when
/// one of them (such as `A22 = 0`) is not dominant itself.
pub fn corollary_cor_check(a: &Matrix, theta: f64) -> Result<SectorCheck> {
    check_theta(theta)?;
    let (_, [a11, a12, a21, a22]) = blocks(a)?;
    a12_identity(&a12)?;
    let cone = low_gamma_cone(theta);
    let h11 = cone_dominance(&a11, cone, "A11")?;
    let h22 = cone_dominance(&a22, cone, "A22")?;
    let sum = cone_dominance(&(&a11 + &a22), cone, "A11 + A22")?;
    let b_hat = &a21 - &a22 * &a11;
    let hb = row_ndd(&b_hat);
    let dom_ok = (h11.holds && h22.holds) || sum.holds;
    let hb_ok = hb.holds;
    let mut hypotheses = vec![h11, h22];
    let mut notes = Vec::new();
    if !(hypotheses[0].holds && hypotheses[1].holds) {
        notes.push(format!(
            "blockwise dominance fails; A11 + A22 {} dominant",
            if sum.holds { "is" } else { "is not" }
        ));
        hypotheses.push(sum);
    }
    hypotheses.push(Hypothesis {
        name: "A21 - A22 A11 negative and strictly row dominant".into(),
        ..hb
    });
    let pass = dom_ok && hb_ok;
    let check = CheckReport {
        verdict: if pass { Verdict::Pass } else { Verdict::Inconclusive },
        claim: pass.then(|| format!("every eigenvalue has |arg| > {theta}")),
        cites: vec!["Cor-cor".into(), "Thm-sector".into()],
        hypotheses,
        notes,
    };
    finish(a, theta, check)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub gamma: f64,
    #[serde(flatten)]
    pub sector: SectorCheck,
    pub sampling: SamplingVerdict,
    /// Report for a user-supplied `D_hat`, when given.
    pub supplied: Option<FracReport>,
}

fn worst_eigenvalue(r: &FracReport) -> Option<Complex64> {
    r.spectrum
        .eigenvalues
        .iter()
        .zip(&r.args)
        .filter(|(_, &x)| x - r.theta <= TOL_ANGLE)
        .map(|(&z, _)| z.into())
        .next()
}

fn sample_family<F>(
    k: usize,
    gamma: f64,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
    build: F,
) -> Result<SamplingVerdict>
where
    F: Fn(&[f64]) -> Matrix + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let class = ScalingClass::new(ScalingTag::AllPositiveD);
    let hit = falsify(trials, seed, threads, |_, rng| {
        let d = class.sample(k, rng);
        let r = sector_report(&eigenvalues(&build(&d))?, gamma);
        Ok(worst_eigenvalue(&r).map(|z| (d, z)))
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

fn scale_lower_half(a: &Matrix, d_hat: &[f64]) -> Matrix {
    let k = d_hat.len();
    let mut m = a.clone();
    for (i, &s) in d_hat.iter().enumerate() {
        m.row_mut(k + i).scale_mut(s);
    }
    m
}

/// Stability of `d^g x = A x` and of every `d^g x = D A x` with
/// `D = diag(I, D_hat)`, for `0 < g <= 1/2` and `A12 = I`. The hypotheses
/// are those of [`corollary_cor_check`] at `theta = g pi / 2`; sampled
/// `D_hat` serve as a consistency check.
pub fn perturbed_family_check(
    a: &Matrix,
    gamma: f64,
    d_hat: Option<&[f64]>,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<FamilyCheck> {
    if !(gamma > 0.0 && gamma <= 0.5) {
        return Err(Error::InvalidArgument(format!("order {gamma} outside (0, 1/2]")));
    }
    let theta = stability_angle(gamma);
    let mut sector = corollary_cor_check(a, theta)?;
    sector.check.cites = vec!["Thm-block-family".into(), "Cor-cor".into(), "Lem-obv".into()];
    sector.check.claim = (sector.check.verdict == Verdict::Pass)
        .then(|| format!("stable for order {gamma} under every D = diag(I, D_hat)"));
    let k = a.nrows() / 2;
    let supplied = match d_hat {
        None => None,
        Some(d) => {
            crate::second_order::check_diagonal(d, k)?;
            Some(sector_report(&eigenvalues(&scale_lower_half(a, d))?, gamma))
        }
    };
    let sampling = sample_family(k, gamma, trials, seed, threads, |d| scale_lower_half(a, d))?;
    Ok(FamilyCheck {
        gamma,
        sector,
        sampling,
        supplied,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HighGammaCheck {
    pub gamma: f64,
    /// Cone half-angle `pi (1 - g/2)`.
    pub theta: f64,
    #[serde(flatten)]
    pub check: CheckReport,
    pub sampling: SamplingVerdict,
}

/// Stability of `d^g x = D A x` for every positive diagonal `D`, `1 <= g < 2`:
/// diagonal dominance of `A` for the cone of half-angle `pi (1 - g/2)`.
pub fn high_gamma_check(
    fsys: &FractionalSystem,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<HighGammaCheck> {
    let gamma = fsys.gamma;
    if !(1.0..2.0).contains(&gamma) {
        return Err(Error::InvalidArgument(format!("order {gamma} outside [1, 2)")));
    }
    let theta = high_gamma_cone(gamma);
    let check = CheckReport::sufficient(
        format!("stable for order {gamma} under every positive diagonal D"),
        &["Thm-high-order", "Thm-mmain", "Lem-obv"],
        vec![cone_dominance(&fsys.a, theta, "A")?],
    );
    let n = fsys.a.nrows();
    let sampling = sample_family(n, gamma, trials, seed, threads, |d| {
        crate::linalg::scale_rows(d, &fsys.a)
    })?;
    Ok(HighGammaCheck {
        gamma,
        theta,
        check,
        sampling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::multiset_distance;
    use crate::spectra::SpectrumVerdict;
    use std::f64::consts::FRAC_PI_4;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j])
    }

    fn assemble(a11: &Matrix, a12: &Matrix, a21: &Matrix, a22: &Matrix) -> Matrix {
        let k = a11.nrows();
        let mut a = Matrix::zeros(2 * k, 2 * k);
        a.view_mut((0, 0), (k, k)).copy_from(a11);
        a.view_mut((0, k), (k, k)).copy_from(a12);
        a.view_mut((k, 0), (k, k)).copy_from(a21);
        a.view_mut((k, k), (k, k)).copy_from(a22);
        a
    }

    pub(crate) fn stable_block() -> Matrix {
        assemble(
            &m(&[&[-2.0, 1.8], &[1.8, -2.0]]),
            &m(&[&[-1.0, 0.8], &[-0.8, -1.0]]),
            &Matrix::identity(2, 2),
            &Matrix::zeros(2, 2),
        )
    }

    pub(crate) fn identity_coupled_block() -> Matrix {
        assemble(
            &m(&[&[-10.0, 3.0], &[2.0, -10.0]]),
            &Matrix::identity(2, 2),
            &m(&[&[20.0, 1.0], &[2.0, 37.0]]),
            &m(&[&[-8.0, 4.0], &[3.0, -8.0]]),
        )
    }

    #[test]
    fn angle_mappings() {
        assert_eq!(stability_angle(0.5), FRAC_PI_4);
        assert_eq!(low_gamma_cone(FRAC_PI_4), FRAC_PI_4);
        // Both spellings of the low-order dominance cone agree.
        for g in [0.1, 0.25, 0.5] {
            assert!((low_gamma_cone(stability_angle(g)) - FRAC_PI_2 * (1.0 - g)).abs() < 1e-15);
        }
        assert_eq!(high_gamma_cone(1.0), FRAC_PI_2);
        assert!((high_gamma_cone(1.5) - FRAC_PI_4).abs() < 1e-15);
        assert!((high_gamma_cone(1.9) - 0.05 * PI).abs() < 1e-12);
    }

    #[test]
    fn frac_stable_examples() {
        let r = is_frac_stable(&FractionalSystem::new(stable_block(), 0.5).unwrap()).unwrap();
        assert_eq!(r.spectrum.verdict, SpectrumVerdict::Stable);
        let mut args = r.args.clone();
        args.sort_by(f64::total_cmp);
        assert!((args[0] - 1.5856).abs() < 1e-4 && (args[1] - 1.5856).abs() < 1e-4);
        assert!((args[3] - PI).abs() < 1e-12);

        let r = is_frac_stable(&FractionalSystem::new(m(&[&[1.0]]), 0.3).unwrap()).unwrap();
        assert_eq!(r.spectrum.verdict, SpectrumVerdict::Unstable);
        let r = is_frac_stable(&FractionalSystem::new(m(&[&[0.0]]), 0.3).unwrap()).unwrap();
        assert_eq!(r.args, vec![0.0]);
        assert!(!r.spectrum.is_stable());
        assert!(FractionalSystem::new(m(&[&[1.0]]), 2.5).is_err());
    }

    #[test]
    fn block_reduce_examples() {
        let r = block_reduce(&stable_block()).unwrap();
        let ahat = m(&[&[-0.24391, 0.39515], &[0.39512, -3.7561]]);
        let bhat = m(&[&[-1.0, 0.8], &[-0.8, -1.0]]);
        assert!((&r.a_hat - ahat).amax() < 1e-4);
        assert!((&r.b_hat - bhat).amax() < 1e-12);
        assert!(r.residual < 1e-12);
        let want = eigenvalues(&stable_block()).unwrap();
        assert!(multiset_distance(&r.pencil_roots().unwrap(), &want) < 1e-9);

        let a11 = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let i = Matrix::identity(2, 2);
        let r = block_reduce(&assemble(&a11, &i, &i, &Matrix::zeros(2, 2))).unwrap();
        assert_eq!(r.a_hat, a11);
        assert_eq!(r.b_hat, i);

        assert_eq!(block_reduce(&Matrix::identity(3, 3)).unwrap_err(), Error::OddDimension(3));
        let z = Matrix::zeros(2, 2);
        assert!(matches!(block_reduce(&assemble(&i, &z, &i, &i)), Err(Error::SingularA12 { .. })));
    }

    #[test]
    fn sector_check_stable_block_is_inconclusive_but_holds() {
        let r = block_sector_check(&stable_block(), FRAC_PI_4).unwrap();
        assert_eq!(r.check.verdict, Verdict::Inconclusive);
        assert!(!r.check.hypotheses[0].holds);
        assert!(r.check.hypotheses[1].holds);
        assert!(r.conclusion_holds);
    }

    #[test]
    fn sector_check_diagonal_case() {
        let i = Matrix::identity(2, 2);
        // A12 = I, A22 = 0: A_hat = A11, B_hat = A21.
        let a = assemble(&(&i * -10.0), &i, &(-&i), &Matrix::zeros(2, 2));
        let r = block_sector_check(&a, FRAC_PI_4).unwrap();
        assert_eq!(r.check.verdict, Verdict::Pass);
        assert!(r.conclusion_holds);
    }

    #[test]
    fn generalized_ndd_is_not_enough() {
        // B_hat is NDD only in the generalized sense; the sector
        // conclusion fails, so the check must not pass.
        let a_hat = m(&[&[-0.75233242, -0.43704841], &[-2.75487415, -4.86341778]]);
        let b_hat = m(&[&[-1.84977813, -88.88866631], &[0.39188602, -58.22097068]]);
        assert!(is_ndd(&b_hat, None).unwrap().ndd);
        let i = Matrix::identity(2, 2);
        // With A12 = I and A22 = 0 the reduction returns A11 and A21.
        let a = assemble(&a_hat, &i, &b_hat, &Matrix::zeros(2, 2));
        let r = block_sector_check(&a, FRAC_PI_4).unwrap();
        assert!(r.check.hypotheses[0].holds);
        assert!(!r.check.hypotheses[1].holds);
        assert!(!r.conclusion_holds);
        assert_eq!(r.check.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn corollary_examples() {
        let r = corollary_cor_check(&identity_coupled_block(), FRAC_PI_4).unwrap();
        assert_eq!(r.check.verdict, Verdict::Pass);
        assert!(r.conclusion_holds);
        let ev: Vec<Complex64> = r.eigenvalues.iter().map(|&p| p.into()).collect();
        let want: Vec<Complex64> =
            [-17.23, -0.3017, -11.52, -6.945].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        assert!(multiset_distance(&ev, &want) < 1e-2);

        let i = Matrix::identity(2, 2);
        let a = assemble(&m(&[&[-10.0, 3.0], &[2.0, -10.0]]), &i, &m(&[&[-5.0, 1.0], &[1.0, -5.0]]), &Matrix::zeros(2, 2));
        assert_eq!(corollary_cor_check(&a, FRAC_PI_4).unwrap().check.verdict, Verdict::Pass);

        let mut bad = identity_coupled_block();
        bad[(0, 0)] = 10.0;
        let r = corollary_cor_check(&bad, FRAC_PI_4).unwrap();
        assert_eq!(r.check.verdict, Verdict::Inconclusive);
        assert!(!r.check.hypotheses[0].holds);

        assert_eq!(corollary_cor_check(&stable_block(), FRAC_PI_4).unwrap_err(), Error::A12NotIdentity);
    }

    #[test]
    fn family_examples() {
        let r = perturbed_family_check(&identity_coupled_block(), 0.5, None, 500, 0, None).unwrap();
        assert_eq!(r.sector.check.verdict, Verdict::Pass);
        assert!(!r.sampling.found_counterexample());

        let r = perturbed_family_check(&identity_coupled_block(), 0.5, Some(&[1.0, 1.0]), 10, 0, None).unwrap();
        assert!(r.supplied.unwrap().spectrum.is_stable());

        let mut bad = identity_coupled_block();
        bad[(0, 0)] = 10.0;
        let r = perturbed_family_check(&bad, 0.5, None, 50, 0, None).unwrap();
        assert_eq!(r.sector.check.verdict, Verdict::Inconclusive);
        assert_eq!(r.sampling.trials, 50);

        assert_eq!(
            perturbed_family_check(&identity_coupled_block(), 0.5, Some(&[1.0]), 10, 0, None).unwrap_err(),
            Error::BadDiagonal { expected: 2 }
        );
    }

    #[test]
    fn high_gamma_examples() {
        let a = m(&[&[-10.0, 3.0], &[2.0, -10.0]]);
        for g in [1.0, 1.5] {
            let r = high_gamma_check(&FractionalSystem::new(a.clone(), g).unwrap(), 500, 0, None).unwrap();
            assert_eq!(r.check.verdict, Verdict::Pass, "order {g}");
            assert!(!r.sampling.found_counterexample());
        }
        let r = high_gamma_check(&FractionalSystem::new(a, 1.9).unwrap(), 10, 0, None).unwrap();
        assert_eq!(r.check.verdict, Verdict::Inconclusive);
    }
}
