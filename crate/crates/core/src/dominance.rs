//! Classical and region-relative diagonal dominance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_square, comparison_matrix, off_diagonal_row_sum, Matrix};
use crate::regions::Region;
use crate::spectra::{is_m_matrix, ScalingTag};

/// Absolute tolerance on row margins separating `Holds`/`Fails` from
/// `Marginal`.
pub const TOL_STRICT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GershgorinDisk {
    pub center: f64,
    pub radius: f64,
}

pub fn gershgorin_disks(a: &Matrix) -> Result<Vec<GershgorinDisk>> {
    let n = check_square(a)?;
    Ok((0..n)
        .map(|i| GershgorinDisk {
            center: a[(i, i)],
            radius: off_diagonal_row_sum(a, i),
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    Holds,
    Fails,
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowDominance {
    /// Whether the diagonal entry lies in the region's real interval.
    pub diag_ok: bool,
    /// `r(a_ii)`, absent when `a_ii` is outside the real interval.
    pub radius: Option<f64>,
    pub off_diagonal_sum: f64,
    /// `r(a_ii) - sum_{j != i} |a_ij|`, absent with `radius`.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub region: String,
    pub per_row: Vec<RowDominance>,
    pub verdict: DominanceVerdict,
}

impl DominanceReport {
    fn from_rows(region: String, per_row: Vec<RowDominance>) -> Self {
        let fails = per_row.iter().any(|r| match r.margin {
            None => true,
            Some(m) => !r.diag_ok || m < -TOL_STRICT,
        });
        let marginal = per_row
            .iter()
            .any(|r| r.margin.is_some_and(|m| m.abs() <= TOL_STRICT));
        let verdict = if fails {
            DominanceVerdict::Fails
        } else if marginal {
            DominanceVerdict::Marginal
        } else {
            DominanceVerdict::Holds
        };
        Self {
            region,
            per_row,
            verdict,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == DominanceVerdict::Holds
    }

    /// Smallest row margin (`-inf` when some diagonal entry is outside the
    /// real interval).
    pub fn min_margin(&self) -> f64 {
        self.per_row
            .iter()
            .map(|r| r.margin.unwrap_or(f64::NEG_INFINITY))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Row,
    Column,
}

/// Strict diagonal dominance `|a_ii| > sum_{j != i} |a_ij|` by rows or
/// columns.
pub fn is_strictly_dd(a: &Matrix, side: Side) -> Result<DominanceReport> {
    let n = check_square(a)?;
    let m = match side {
        Side::Row => a.clone(),
        Side::Column => a.transpose(),
    };
    let per_row = (0..n)
        .map(|i| {
            let radius = m[(i, i)].abs();
            let s = off_diagonal_row_sum(&m, i);
            RowDominance {
                diag_ok: true,
                radius: Some(radius),
                off_diagonal_sum: s,
                margin: Some(radius - s),
            }
        })
        .collect();
    let label = match side {
        Side::Row => "strict-row",
        Side::Column => "strict-column",
    };
    Ok(DominanceReport::from_rows(label.into(), per_row))
}

/// Positive weights `m` for generalized diagonal dominance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub m: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GddOutcome {
    Gdd(Weights),
    NotGdd(String),
}

impl GddOutcome {
    pub fn weights(&self) -> Option<&Weights> {
        match self {
            GddOutcome::Gdd(w) => Some(w),
            GddOutcome::NotGdd(_) => None,
        }
    }
}

/// Checks `tau * m_i |a_ii| > sum_{j != i} m_j |a_ij|` for every row.
pub fn weights_satisfy(a: &Matrix, m: &[f64], tau: f64) -> bool {
    let n = a.nrows();
    m.len() == n
        && m.iter().all(|&v| v > 0.0 && v.is_finite())
        && (0..n).all(|i| {
            let off: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| m[j] * a[(i, j)].abs())
                .sum();
            tau * m[i] * a[(i, i)].abs() > off
        })
}

fn gdd_with_strength(a: &Matrix, tau: f64) -> Result<GddOutcome> {
    let n = check_square(a)?;
    if let Some(i) = (0..n).find(|&i| a[(i, i)] == 0.0) {
        return Ok(GddOutcome::NotGdd(format!("diagonal entry {i} is zero")));
    }
    let mut c = comparison_matrix(a);
    for i in 0..n {
        c[(i, i)] *= tau;
    }
    if !is_m_matrix(&c)? {
        return Ok(GddOutcome::NotGdd(
            "comparison matrix is not a nonsingular M-matrix".into(),
        ));
    }
    let Some(m) = c.clone().lu().solve(&nalgebra::DVector::from_element(n, 1.0)) else {
        return Ok(GddOutcome::NotGdd("comparison matrix is numerically singular".into()));
    };
    let m: Vec<f64> = m.iter().copied().collect();
    if weights_satisfy(a, &m, tau) {
        Ok(GddOutcome::Gdd(Weights { m }))
    } else {
        Ok(GddOutcome::NotGdd(
            "weights from the comparison matrix failed re-verification".into(),
        ))
    }
}

/// Weights for generalized diagonal dominance, from `m = C^{-1} 1` where `C`
/// is the comparison matrix.
pub fn find_gdd_weights(a: &Matrix) -> Result<GddOutcome> {
    gdd_with_strength(a, 1.0)
}

/// Diagonal dominance with respect to `region`: every `a_ii` lies in the
/// region's real interval and `r(a_ii)` exceeds the off-diagonal row sum.
pub fn is_region_dominant(a: &Matrix, region: &Region) -> Result<DominanceReport> {
    let n = check_square(a)?;
    let (lo, hi) = region.real_interval()?;
    let mut per_row = Vec::with_capacity(n);
    for i in 0..n {
        let s = off_diagonal_row_sum(a, i);
        let row = match region.radius_in(a[(i, i)], lo, hi) {
            Ok(r) => RowDominance {
                diag_ok: true,
                radius: Some(r),
                off_diagonal_sum: s,
                margin: Some(r - s),
            },
            Err(Error::OutOfInterval { .. }) => RowDominance {
                diag_ok: false,
                radius: None,
                off_diagonal_sum: s,
                margin: None,
            },
            Err(e) => return Err(e),
        };
        per_row.push(row);
    }
    Ok(DominanceReport::from_rows(region.to_string(), per_row))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NddOutcome {
    pub ndd: bool,
    pub weights: Option<Weights>,
}

/// Negative diagonal dominance: negative diagonal and generalized diagonal
/// dominance, optionally with strength factor `tau` in `(0, 1)`.
pub fn is_ndd(a: &Matrix, tau: Option<f64>) -> Result<NddOutcome> {
    let n = check_square(a)?;
    let tau = tau.unwrap_or(1.0);
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "strength factor {tau} outside (0, 1]"
        )));
    }
    if (0..n).any(|i| a[(i, i)] >= 0.0) {
        return Ok(NddOutcome {
            ndd: false,
            weights: None,
        });
    }
    let weights = gdd_with_strength(a, tau)?.weights().cloned();
    Ok(NddOutcome {
        ndd: weights.is_some(),
        weights,
    })
}

/// The class of positive diagonal matrices `D` for which diagonal
/// dominance of `A` with respect to `region` carries over to `DA`.
pub fn scaling_closure_class(region: &Region) -> Option<ScalingTag> {
    match *region {
        Region::ShiftedHalfPlane { alpha } | Region::ConicSector { alpha, .. } => {
            if alpha == 0.0 {
                Some(ScalingTag::AllPositiveD)
            } else if alpha < 0.0 {
                Some(ScalingTag::GeqOneD)
            } else {
                None
            }
        }
        Region::Parabola { .. } => Some(ScalingTag::UnitIntervalD),
        _ => None,
    }
}
