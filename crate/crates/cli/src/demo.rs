//! Feedback design example: a second-order loop with velocity and position
//! feedback, damping ratio chosen to minimize the integrated squared output.
//!
//! With `k1, k2` the normalized gains the closed-loop matrix is
//! `[[-2 zeta w k1, -w^2 k2], [1, 0]]`, and the optimal ratio satisfies
//! `4 k1^2 w^2 zeta^2 = k2 w^2 + 1`. The poles then lie on `3x^2 - y^2 = 1`,
//! which bounds the hyperbolic region `H(sqrt 3, 1)`; they sit inside the
//! smaller region `H(3, 1)` as well. The poles are complex only when
//! `3 k2 w^2 > 1`; below that the loop is overdamped and the point leaves
//! the locus.

use serde::{Deserialize, Serialize};

use regdom::spectra::eigenvalues;
use regdom::{ComplexPoint, Matrix, Region};

use crate::{CliError, CliResult};

/// Gain grid: `k1` values and the offsets `k2 - k1`.
pub const K1_GRID: [f64; 4] = [1.25, 1.5, 2.0, 3.0];
pub const K2_OFFSETS: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];

/// Number of samples on each boundary polyline.
pub const POLYLINE_POINTS: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoPoint {
    pub k1: f64,
    pub k2: f64,
    pub zeta: f64,
    pub poles: [ComplexPoint; 2],
    /// `max |3x^2 - y^2 - 1|` over the two poles.
    pub locus_residual: f64,
    pub in_closure: bool,
    /// Whether `k2 > k1 > 1` holds.
    pub in_parameter_set: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoReport {
    pub omega_n: f64,
    pub region: Region,
    pub points: Vec<DemoPoint>,
    pub max_locus_residual: f64,
    pub all_in_closure: bool,
}

impl DemoReport {
    pub fn poles_csv(&self) -> String {
        let mut out = String::from("k1,k2,zeta,re,im,locus_residual,in_closure,in_parameter_set\n");
        for p in &self.points {
            for z in &p.poles {
                out.push_str(&format!(
                    "{},{},{:.16e},{:.16e},{:.16e},{:e},{},{}\n",
                    p.k1, p.k2, p.zeta, z.re, z.im, p.locus_residual, p.in_closure, p.in_parameter_set
                ));
            }
        }
        out
    }
}

pub fn closed_loop_matrix(omega_n: f64, zeta: f64, k1: f64, k2: f64) -> Matrix {
    Matrix::from_row_slice(2, 2, &[-2.0 * zeta * omega_n * k1, -omega_n * omega_n * k2, 1.0, 0.0])
}

/// Optimal damping ratio `sqrt(k2 + 1/w^2) / (2 k1)`.
pub fn optimal_zeta(omega_n: f64, k1: f64, k2: f64) -> f64 {
    (k2 + 1.0 / (omega_n * omega_n)).sqrt() / (2.0 * k1)
}

fn point(omega_n: f64, k1: f64, k2: f64, region: &Region) -> CliResult<DemoPoint> {
    let zeta = optimal_zeta(omega_n, k1, k2);
    let mut ev = eigenvalues(&closed_loop_matrix(omega_n, zeta, k1, k2))?;
    ev.sort_by(|a, b| b.im.total_cmp(&a.im));
    let residual = ev
        .iter()
        .map(|z| (3.0 * z.re * z.re - z.im * z.im - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(DemoPoint {
        k1,
        k2,
        zeta,
        poles: [ev[0].into(), ev[1].into()],
        locus_residual: residual,
        in_closure: ev.iter().all(|&z| region.in_closure(z)),
        in_parameter_set: k2 > k1 && k1 > 1.0,
    })
}

/// Sweeps the gain grid plus the degenerate corner `k1 = k2 = 1`.
pub fn feedback_demo(omega_n: f64) -> CliResult<DemoReport> {
    if !(omega_n > 0.0 && omega_n.is_finite()) {
        return Err(CliError::Input(format!("omega_n {omega_n} must be positive")));
    }
    let region = Region::hyperbola(3.0, 1.0)?;
    let mut points = Vec::new();
    for &k1 in &K1_GRID {
        for &off in &K2_OFFSETS {
            points.push(point(omega_n, k1, k1 + off, &region)?);
        }
    }
    points.push(point(omega_n, 1.0, 1.0, &region)?);
    let max_locus_residual = points.iter().map(|p| p.locus_residual).fold(0.0, f64::max);
    let all_in_closure = points.iter().all(|p| p.in_closure);
    Ok(DemoReport {
        omega_n,
        region,
        points,
        max_locus_residual,
        all_in_closure,
    })
}

/// Upper halves of the locus `3x^2 - y^2 = 1` and of the boundary
/// `9x^2 - y^2 = 1` of `H(3, 1)`, sampled on `[x_min, x_max]`.
pub fn boundary_csv(x_min: f64, x_max: f64) -> CliResult<String> {
    if !(x_min < x_max && x_max <= -1.0 / 3f64.sqrt()) {
        return Err(CliError::Input(format!(
            "x-window [{x_min}, {x_max}] must satisfy x_min < x_max <= -1/sqrt(3)"
        )));
    }
    let mut out = String::from("x,locus_y,region_y\n");
    for i in 0..POLYLINE_POINTS {
        let x = x_min + (x_max - x_min) * i as f64 / (POLYLINE_POINTS - 1) as f64;
        let locus = (3.0 * x * x - 1.0).max(0.0).sqrt();
        let region = (9.0 * x * x - 1.0).max(0.0).sqrt();
        out.push_str(&format!("{x:.16e},{locus:.16e},{region:.16e}\n"));
    }
    Ok(out)
}
