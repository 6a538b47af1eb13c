//! LMI stability regions.
//!
//! A region is an open convex subset of the complex plane, symmetric about
//! the real axis, of the form `{z : L + M z + M^T conj(z) < 0}`. The named
//! families use their scalar defining inequalities directly; `GenericLmi`
//! works from the generating pair `(L, M)` and finds its geometric
//! characteristics (real interval, boundary height, recession angle) by
//! numerical probing.
//!
//! The quantity the dominance tests consume is the radius function `r(x)`:
//! for `x` in the real interval `(alpha, beta)` it is the radius of a disk
//! centred at `x` that is guaranteed to lie in the closure of the region.
//! With `m = min(|x - alpha|, |x - beta|)` and boundary height `y(x)`:
//!
//! * bounded above, some endpoint finite: `r = m y / sqrt(m^2 + y^2)`;
//! * horizontal stripe (both endpoints infinite): `r = y`;
//! * unbounded above: `r = m`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{from_rows, lambda_max_hermitian, to_rows, Matrix, STRUCT_TOL};

/// Points with defining scalar below `-MEMBERSHIP_TOL` are inside; points
/// with defining scalar at most `MEMBERSHIP_TOL` are in the closure.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Absolute accuracy of the bisections used by `GenericLmi` probing.
pub const PROBE_TOL: f64 = 1e-10;

/// Beyond this magnitude a probe treats the region as unbounded.
const PROBE_HORIZON: f64 = 1e12;

/// Radius at which recession rays are tested.
const RAY_RADIUS: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// `Re z < alpha`.
    ShiftedHalfPlane { alpha: f64 },
    /// Sector around the negative real direction with apex `alpha` and
    /// half-angle `theta` in `(0, pi/2]`; `theta = pi/2` is the half-plane.
    ConicSector { alpha: f64, theta: f64 },
    /// Region left of the left branch of `a^2 x^2 - b^2 y^2 = 1`.
    Hyperbola { a: f64, b: f64 },
    /// `y^2 < -eps^2 x`.
    Parabola { eps: f64 },
    /// `|Im z| < c`.
    HorizontalStripe { c: f64 },
    /// `alpha < Re z < beta`.
    VerticalStripe { alpha: f64, beta: f64 },
    /// `L + M z + M^T conj(z)` negative definite.
    GenericLmi { l: Matrix, m: Matrix },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RecessionKind {
    Cone { theta0: f64 },
    RayRMinus,
    HalfPlane,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionTraits {
    #[serde(with = "crate::serde_ext")]
    pub alpha_r: f64,
    #[serde(with = "crate::serde_ext")]
    pub beta_r: f64,
    #[serde(with = "crate::serde_ext")]
    pub x_max: f64,
    #[serde(with = "crate::serde_ext::option")]
    pub theta0: Option<f64>,
    pub recession: RecessionKind,
}

impl RegionTraits {
    pub fn real_interval(&self) -> (f64, f64) {
        (self.alpha_r, self.beta_r)
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRegion(format!("{name} must be finite")))
    }
}

impl Region {
    pub fn half_plane(alpha: f64) -> Result<Self> {
        Self::ShiftedHalfPlane { alpha }.validated()
    }

    pub fn cone(alpha: f64, theta: f64) -> Result<Self> {
        Self::ConicSector { alpha, theta }.validated()
    }

    pub fn hyperbola(a: f64, b: f64) -> Result<Self> {
        Self::Hyperbola { a, b }.validated()
    }

    pub fn parabola(eps: f64) -> Result<Self> {
        Self::Parabola { eps }.validated()
    }

    pub fn horizontal_stripe(c: f64) -> Result<Self> {
        Self::HorizontalStripe { c }.validated()
    }

    pub fn vertical_stripe(alpha: f64, beta: f64) -> Result<Self> {
        Self::VerticalStripe { alpha, beta }.validated()
    }

    pub fn lmi(l: Matrix, m: Matrix) -> Result<Self> {
        Self::GenericLmi { l, m }.validated()
    }

    /// The parabola `y^2 < -eps^2 (x - apex)` as a generic LMI region.
    pub fn shifted_parabola(eps: f64, apex: f64) -> Result<Self> {
        check_finite("apex", apex)?;
        let (l, m) = Self::parabola(eps)?.characteristic_matrices();
        // Substituting z - apex shifts L by -apex (M + M^T).
        let l = l - (&m + m.transpose()) * apex;
        Self::lmi(l, m)
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Region::ShiftedHalfPlane { alpha } => check_finite("alpha", alpha),
            Region::ConicSector { alpha, theta } => {
                check_finite("alpha", alpha)?;
                if !(theta > 0.0 && theta <= FRAC_PI_2) {
                    return Err(Error::InvalidRegion(format!(
                        "cone half-angle {theta} outside (0, pi/2]"
                    )));
                }
                Ok(())
            }
            Region::Hyperbola { a, b } => {
                check_finite("a", a)?;
                check_finite("b", b)?;
                if a == 0.0 || b == 0.0 {
                    return Err(Error::InvalidRegion("hyperbola needs a != 0 and b != 0".into()));
                }
                Ok(())
            }
            Region::Parabola { eps } => {
                check_finite("eps", eps)?;
                if eps == 0.0 {
                    return Err(Error::InvalidRegion("parabola needs eps != 0".into()));
                }
                Ok(())
            }
            Region::HorizontalStripe { c } => {
                check_finite("c", c)?;
                if c <= 0.0 {
                    return Err(Error::InvalidRegion("stripe half-width must be positive".into()));
                }
                Ok(())
            }
            Region::VerticalStripe { alpha, beta } => {
                check_finite("alpha", alpha)?;
                check_finite("beta", beta)?;
                if alpha >= beta {
                    return Err(Error::InvalidRegion("vertical stripe needs alpha < beta".into()));
                }
                Ok(())
            }
            Region::GenericLmi { ref l, ref m } => {
                let k = l.nrows();
                if k == 0 || l.ncols() != k || m.nrows() != k || m.ncols() != k {
                    return Err(Error::InvalidRegion(
                        "L and M must be non-empty square matrices of equal size".into(),
                    ));
                }
                if l.iter().chain(m.iter()).any(|v| !v.is_finite()) {
                    return Err(Error::InvalidRegion("L and M must be finite".into()));
                }
                let asym = (l - l.transpose()).amax();
                if asym > STRUCT_TOL * l.amax().max(1.0) {
                    return Err(Error::InvalidRegion("L must be symmetric".into()));
                }
                Ok(())
            }
        }
    }

    /// Characteristic matrices `(L, M)` of the region. Named regions use the
    /// standard generating pairs; the hyperbola uses `|a|, |b|` so that the
    /// pair describes the left branch.
    pub fn characteristic_matrices(&self) -> (Matrix, Matrix) {
        let m2 = |v: [f64; 4]| Matrix::from_row_slice(2, 2, &v);
        match *self {
            Region::ShiftedHalfPlane { alpha } => (
                Matrix::from_element(1, 1, -2.0 * alpha),
                Matrix::from_element(1, 1, 1.0),
            ),
            Region::ConicSector { alpha, theta } => {
                let (s, c) = theta.sin_cos();
                (
                    Matrix::identity(2, 2) * (-2.0 * alpha * s),
                    m2([s, c, -c, s]),
                )
            }
            Region::Hyperbola { a, b } => {
                let (a, b) = (a.abs(), b.abs());
                (m2([2.0, 0.0, 0.0, -2.0]), m2([a, b, -b, a]))
            }
            Region::Parabola { eps } => (m2([-eps * eps, 0.0, 0.0, 0.0]), m2([0.5, -1.0, 0.0, 0.5])),
            Region::HorizontalStripe { c } => {
                (Matrix::identity(2, 2) * (-2.0 * c), m2([0.0, 1.0, -1.0, 0.0]))
            }
            Region::VerticalStripe { alpha, beta } => {
                (m2([-2.0 * beta, 0.0, 0.0, 2.0 * alpha]), m2([1.0, 0.0, 0.0, -1.0]))
            }
            Region::GenericLmi { ref l, ref m } => (l.clone(), m.clone()),
        }
    }

    /// Signed defining scalar: negative inside, zero on the boundary.
    pub fn defining_value(&self, z: Complex64) -> f64 {
        let (x, y) = (z.re, z.im);
        match *self {
            Region::ShiftedHalfPlane { alpha } => x - alpha,
            Region::ConicSector { alpha, theta } => {
                let (s, c) = theta.sin_cos();
                y.abs() * c - (alpha - x) * s
            }
            Region::Hyperbola { a, b } => {
                let branch = x + 1.0 / a.abs();
                let conic = 1.0 - a * a * x * x + b * b * y * y;
                branch.max(conic)
            }
            Region::Parabola { eps } => y * y + eps * eps * x,
            Region::HorizontalStripe { c } => y.abs() - c,
            Region::VerticalStripe { alpha, beta } => (alpha - x).max(x - beta),
            Region::GenericLmi { ref l, ref m } => {
                let mt = m.transpose();
                let re = l + (m + &mt) * x;
                let im = (m - &mt) * y;
                lambda_max_hermitian(&re, &im)
            }
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.defining_value(z) < -MEMBERSHIP_TOL
    }

    pub fn in_closure(&self, z: Complex64) -> bool {
        self.defining_value(z) <= MEMBERSHIP_TOL
    }

    fn contains_real(&self, x: f64) -> bool {
        self.contains(Complex64::new(x, 0.0))
    }

    /// Open interval `(alpha, beta)` of the real axis inside the region.
    pub fn real_interval(&self) -> Result<(f64, f64)> {
        let inf = f64::INFINITY;
        Ok(match *self {
            Region::ShiftedHalfPlane { alpha } | Region::ConicSector { alpha, .. } => (-inf, alpha),
            Region::Hyperbola { a, .. } => (-inf, -1.0 / a.abs()),
            Region::Parabola { .. } => (-inf, 0.0),
            Region::HorizontalStripe { .. } => (-inf, inf),
            Region::VerticalStripe { alpha, beta } => (alpha, beta),
            Region::GenericLmi { .. } => self.probe_real_interval()?,
        })
    }

    fn probe_real_interval(&self) -> Result<(f64, f64)> {
        let start = std::iter::once(0.0)
            .chain((0..=50).flat_map(|k| {
                let s = 2f64.powi(k);
                [s, -s]
            }))
            .find(|&x| self.contains_real(x))
            .ok_or(Error::EmptyRegion)?;
        let hi = self.probe_endpoint(start, 1.0);
        let lo = self.probe_endpoint(start, -1.0);
        Ok((lo, hi))
    }

    /// Walks from an interior real point in direction `dir` and returns the
    /// first boundary crossing, or `dir * inf`.
    fn probe_endpoint(&self, start: f64, dir: f64) -> f64 {
        let mut inside = start;
        let mut step = 1.0;
        let outside = loop {
            let cand = start + dir * step;
            if !self.contains_real(cand) {
                break cand;
            }
            inside = cand;
            if step > PROBE_HORIZON {
                return dir * f64::INFINITY;
            }
            step *= 2.0;
        };
        bisect(inside, outside, |x| self.contains_real(x))
    }

    /// Supremum `y >= 0` such that `x + iy` is in the closure; `+inf` when
    /// the region is unbounded above at `x`.
    pub fn boundary_height(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.real_interval()?;
        self.boundary_height_in(x, lo, hi)
    }

    fn boundary_height_in(&self, x: f64, lo: f64, hi: f64) -> Result<f64> {
        if !(x > lo && x < hi) {
            return Err(Error::OutOfInterval { x, lo, hi });
        }
        let inf = f64::INFINITY;
        Ok(match *self {
            Region::ShiftedHalfPlane { .. } | Region::VerticalStripe { .. } => inf,
            Region::ConicSector { alpha, theta } => {
                if theta >= FRAC_PI_2 {
                    inf
                } else {
                    (alpha - x) * theta.tan()
                }
            }
            Region::Hyperbola { a, b } => ((a * a * x * x - 1.0).max(0.0)).sqrt() / b.abs(),
            Region::Parabola { eps } => eps.abs() * (-x).sqrt(),
            Region::HorizontalStripe { c } => c,
            Region::GenericLmi { .. } => self.probe_height(x),
        })
    }

    fn probe_height(&self, x: f64) -> f64 {
        let at = |y: f64| self.contains(Complex64::new(x, y));
        if !at(0.0) {
            return 0.0;
        }
        if at(PROBE_HORIZON) {
            return f64::INFINITY;
        }
        let mut inside = 0.0;
        let mut y = 1.0;
        while at(y) {
            inside = y;
            y *= 2.0;
        }
        bisect(inside, y, at)
    }

    /// Radius function `r(x)` for `x` in the open real interval.
    pub fn radius(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.real_interval()?;
        self.radius_in(x, lo, hi)
    }

    /// `radius` with a precomputed real interval (avoids re-probing generic
    /// regions once per matrix row).
    pub fn radius_in(&self, x: f64, lo: f64, hi: f64) -> Result<f64> {
        if !(x > lo && x < hi) {
            return Err(Error::OutOfInterval { x, lo, hi });
        }
        Ok(match *self {
            Region::ShiftedHalfPlane { alpha } => (x - alpha).abs(),
            Region::ConicSector { alpha, theta } => theta.sin() * (x - alpha).abs(),
            Region::Parabola { eps } => (eps * x).abs() / (eps * eps - x).sqrt(),
            Region::HorizontalStripe { c } => c,
            Region::VerticalStripe { alpha, beta } => (x - alpha).abs().min((x - beta).abs()),
            Region::Hyperbola { .. } | Region::GenericLmi { .. } => {
                let y = self.boundary_height_in(x, lo, hi)?;
                radius_from_geometry(x, lo, hi, y)?
            }
        })
    }

    /// Real interval, `x_max`, recession angle and recession kind.
    pub fn traits(&self) -> Result<RegionTraits> {
        let (alpha_r, beta_r) = self.real_interval()?;
        let (theta0, recession) = match *self {
            Region::ShiftedHalfPlane { .. } => (Some(FRAC_PI_2), RecessionKind::HalfPlane),
            Region::ConicSector { theta, .. } => {
                if theta >= FRAC_PI_2 {
                    (Some(FRAC_PI_2), RecessionKind::HalfPlane)
                } else {
                    (Some(theta), RecessionKind::Cone { theta0: theta })
                }
            }
            Region::Hyperbola { a, b } => {
                let t = (a / b).abs().atan();
                (Some(t), RecessionKind::Cone { theta0: t })
            }
            Region::Parabola { .. } => (None, RecessionKind::RayRMinus),
            Region::HorizontalStripe { .. } | Region::VerticalStripe { .. } => {
                (None, RecessionKind::None)
            }
            Region::GenericLmi { .. } => self.probe_recession(alpha_r, beta_r),
        };
        Ok(RegionTraits {
            alpha_r,
            beta_r,
            x_max: beta_r,
            theta0,
            recession,
        })
    }

    fn probe_recession(&self, lo: f64, hi: f64) -> (Option<f64>, RecessionKind) {
        if !hi.is_finite() || lo.is_finite() {
            return (None, RecessionKind::None);
        }
        let apex = hi - 1.0;
        let apex = if self.contains_real(apex) { apex } else { hi - PROBE_TOL.sqrt() };
        let ray_inside = |phi: f64, radius: f64| {
            let dir = Complex64::from_polar(1.0, PI - phi);
            self.contains(Complex64::new(apex, 0.0) + dir * radius)
        };
        let angle_at = |radius: f64| -> f64 {
            if ray_inside(FRAC_PI_2, radius) {
                return FRAC_PI_2;
            }
            if !ray_inside(0.0, radius) {
                return 0.0;
            }
            bisect(0.0, FRAC_PI_2, |phi| ray_inside(phi, radius))
        };
        let far = angle_at(RAY_RADIUS);
        if far == 0.0 {
            return (None, RecessionKind::None);
        }
        if far >= FRAC_PI_2 - PROBE_TOL {
            return (Some(FRAC_PI_2), RecessionKind::HalfPlane);
        }
        // A genuine cone keeps its opening angle as the probe radius grows;
        // a region whose recession cone is the negative ray (parabola-like)
        // closes up roughly like 1/sqrt(radius).
        let near = angle_at(RAY_RADIUS * 1e-3);
        if far < 0.5 * near {
            (None, RecessionKind::RayRMinus)
        } else {
            (Some(far), RecessionKind::Cone { theta0: far })
        }
    }

    /// The inscribed shifted cone with apex `x_max` and half-angle `theta0`.
    pub fn shifted_cone_of(&self) -> Result<Region> {
        let t = self.traits()?;
        match (t.x_max.is_finite(), t.theta0, t.recession) {
            (_, _, RecessionKind::RayRMinus) => Err(Error::NoCone(
                "recession cone is the negative real ray".into(),
            )),
            (true, Some(theta0), _) if theta0 > 0.0 && theta0 <= FRAC_PI_2 => {
                Region::cone(t.x_max, theta0)
            }
            _ => Err(Error::NoCone("x_max or recession angle undefined".into())),
        }
    }
}

/// Largest argument in `[inside, outside]` (or `[outside, inside]`) for which
/// `pred` holds, assuming `pred(inside)` and `!pred(outside)`.
fn bisect(mut inside: f64, mut outside: f64, pred: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        if (outside - inside).abs() <= PROBE_TOL {
            break;
        }
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if pred(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Altitude-to-hypotenuse radius from the distance to the nearest real
/// endpoint and the boundary height.
fn radius_from_geometry(x: f64, lo: f64, hi: f64, y: f64) -> Result<f64> {
    let m = (x - lo).abs().min((hi - x).abs());
    if y.is_infinite() {
        if m.is_infinite() {
            return Err(Error::UnsupportedRadius(
                "region is the whole plane".into(),
            ));
        }
        return Ok(m);
    }
    if m.is_infinite() {
        return Ok(y);
    }
    Ok(m * y / m.hypot(y))
}

fn fmt_matrix_json(m: &Matrix) -> String {
    serde_json::to_string(&to_rows(m)).expect("finite matrix serializes")
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::ShiftedHalfPlane { alpha } => write!(f, "half-plane:alpha={alpha}"),
            Region::ConicSector { alpha, theta } => write!(f, "cone:alpha={alpha},theta={theta}"),
            Region::Hyperbola { a, b } => write!(f, "hyperbola:a={a},b={b}"),
            Region::Parabola { eps } => write!(f, "parabola:eps={eps}"),
            Region::HorizontalStripe { c } => write!(f, "hstripe:c={c}"),
            Region::VerticalStripe { alpha, beta } => write!(f, "vstripe:alpha={alpha},beta={beta}"),
            Region::GenericLmi { l, m } => {
                write!(f, "lmi:L={};M={}", fmt_matrix_json(l), fmt_matrix_json(m))
            }
        }
    }
}

fn parse_params(body: &str, expected: &[&str]) -> Result<Vec<f64>> {
    let mut values = vec![None; expected.len()];
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidRegion(format!("expected key=value, got {part:?}")))?;
        let idx = expected
            .iter()
            .position(|k| *k == key.trim())
            .ok_or_else(|| Error::InvalidRegion(format!("unknown parameter {key:?}")))?;
        let v: f64 = val
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRegion(format!("bad number {val:?} for {key}")))?;
        values[idx] = Some(v);
    }
    values
        .into_iter()
        .zip(expected)
        .map(|(v, k)| v.ok_or_else(|| Error::InvalidRegion(format!("missing parameter {k}"))))
        .collect()
}

fn parse_json_matrix(text: &str) -> Result<Matrix> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text.trim())
        .map_err(|e| Error::InvalidRegion(format!("bad matrix JSON: {e}")))?;
    from_rows(&rows).map_err(|e| Error::InvalidRegion(e.to_string()))
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::InvalidRegion(format!("expected <kind>:<params>, got {s:?}")))?;
        match kind.trim() {
            "half-plane" => {
                let p = parse_params(body, &["alpha"])?;
                Region::half_plane(p[0])
            }
            "cone" => {
                let p = parse_params(body, &["alpha", "theta"])?;
                Region::cone(p[0], p[1])
            }
            "hyperbola" => {
                let p = parse_params(body, &["a", "b"])?;
                Region::hyperbola(p[0], p[1])
            }
            "parabola" => {
                let p = parse_params(body, &["eps"])?;
                Region::parabola(p[0])
            }
            "hstripe" => {
                let p = parse_params(body, &["c"])?;
                Region::horizontal_stripe(p[0])
            }
            "vstripe" => {
                let p = parse_params(body, &["alpha", "beta"])?;
                Region::vertical_stripe(p[0], p[1])
            }
            "lmi" => {
                let (first, second) = body
                    .split_once(';')
                    .ok_or_else(|| Error::InvalidRegion("lmi needs L=<json>;M=<json>".into()))?;
                let take = |part: &str, key: &str| -> Result<Matrix> {
                    let (k, v) = part
                        .split_once('=')
                        .ok_or_else(|| Error::InvalidRegion(format!("expected {key}=<json>")))?;
                    if k.trim() != key {
                        return Err(Error::InvalidRegion(format!("expected {key}, got {k:?}")));
                    }
                    parse_json_matrix(v)
                };
                Region::lmi(take(first, "L")?, take(second, "M")?)
            }
            other => Err(Error::InvalidRegion(format!("unknown region kind {other:?}"))),
        }
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        assert!(Region::half_plane(0.0).unwrap().contains(c(-1.0, 0.0)));
        // x_max = -1/|a| is a boundary point, hence outside the open region.
        assert!(!Region::hyperbola(3.0, 1.0).unwrap().contains(c(-1.0 / 3.0, 0.0)));
        let lhp = Region::lmi(
            Matrix::from_element(1, 1, 0.0),
            Matrix::from_element(1, 1, 1.0),
        )
        .unwrap();
        assert!(lhp.contains(c(-0.5, 2.0)));
        assert!(!lhp.contains(c(0.5, 2.0)));
    }

    #[test]
    fn real_interval_examples() {
        let (lo, hi) = Region::hyperbola(3.0, 1.0).unwrap().real_interval().unwrap();
        assert_eq!(lo, f64::NEG_INFINITY);
        assert_abs_diff_eq!(hi, -1.0 / 3.0);
        assert_eq!(
            Region::parabola(2.0).unwrap().real_interval().unwrap(),
            (f64::NEG_INFINITY, 0.0)
        );
        assert_eq!(
            Region::vertical_stripe(-2.0, -1.0).unwrap().real_interval().unwrap(),
            (-2.0, -1.0)
        );
    }

    #[test]
    fn boundary_height_examples() {
        assert_abs_diff_eq!(Region::parabola(2.0).unwrap().boundary_height(-1.0).unwrap(), 2.0);
        assert_abs_diff_eq!(
            Region::hyperbola(3.0, 1.0).unwrap().boundary_height(-1.0).unwrap(),
            8f64.sqrt(),
            epsilon = 1e-12
        );
        assert_eq!(
            Region::half_plane(0.0).unwrap().boundary_height(-1.0).unwrap(),
            f64::INFINITY
        );
        assert!(matches!(
            Region::parabola(2.0).unwrap().boundary_height(1.0),
            Err(Error::OutOfInterval { .. })
        ));
    }

    #[test]
    fn radius_examples() {
        let cone = Region::cone(0.0, PI / 6.0).unwrap();
        assert_abs_diff_eq!(cone.radius(-2.0).unwrap(), 1.0, epsilon = 1e-12);
        let par = Region::parabola(2.0).unwrap();
        assert_abs_diff_eq!(par.radius(-3.0).unwrap(), 6.0 / 7f64.sqrt(), epsilon = 1e-12);
        // Closed form agrees with the altitude formula using y(-3) = 2 sqrt(3).
        let general = radius_from_geometry(-3.0, f64::NEG_INFINITY, 0.0, 2.0 * 3f64.sqrt()).unwrap();
        assert_abs_diff_eq!(par.radius(-3.0).unwrap(), general, epsilon = 1e-12);
        assert_abs_diff_eq!(Region::half_plane(-1.0).unwrap().radius(-4.0).unwrap(), 3.0);
        assert!(matches!(par.radius(0.5), Err(Error::OutOfInterval { .. })));
    }

    #[test]
    fn hyperbola_radius_matches_corrected_closed_form() {
        // Closed form with u = -|a|x - 1:
        //   r = u sqrt(1 - |a|x) / sqrt(b^2 u + a^2 (1 - |a|x)).
        for &(a, b) in &[(3.0, 1.0), (-2.0, 0.5), (1.0, -4.0)] {
            let h = Region::hyperbola(a, b).unwrap();
            let aa: f64 = f64::abs(a);
            for &x in &[-0.34 / aa * 3.0, -1.0 / aa - 1e-3, -2.0, -10.0, -250.0] {
                if x >= -1.0 / aa {
                    continue;
                }
                let u = -aa * x - 1.0;
                let w = 1.0 - aa * x;
                let closed = u * w.sqrt() / (b * b * u + a * a * w).sqrt();
                assert_abs_diff_eq!(h.radius(x).unwrap(), closed, epsilon = 1e-10 * closed.max(1.0));
            }
        }
    }

    #[test]
    fn traits_examples() {
        let t = Region::hyperbola(3.0, 1.0).unwrap().traits().unwrap();
        assert_abs_diff_eq!(t.theta0.unwrap(), 3f64.atan());
        assert_abs_diff_eq!(t.theta0.unwrap(), 1.249046, epsilon = 1e-6);
        assert_abs_diff_eq!(t.x_max, -1.0 / 3.0);
        let t = Region::half_plane(2.0).unwrap().traits().unwrap();
        assert_eq!(t.theta0, Some(FRAC_PI_2));
        assert_eq!(t.x_max, 2.0);
        let t = Region::parabola(1.0).unwrap().traits().unwrap();
        assert_eq!(t.recession, RecessionKind::RayRMinus);
        assert_eq!(t.x_max, 0.0);
    }

    #[test]
    fn shifted_cone_examples() {
        let cone = Region::hyperbola(3.0, 1.0).unwrap().shifted_cone_of().unwrap();
        match cone {
            Region::ConicSector { alpha, theta } => {
                assert_abs_diff_eq!(alpha, -1.0 / 3.0);
                assert_abs_diff_eq!(theta, 3f64.atan());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            Region::half_plane(-0.7).unwrap().shifted_cone_of().unwrap(),
            Region::ConicSector { alpha: -0.7, theta: FRAC_PI_2 }
        );
        assert!(matches!(
            Region::parabola(1.5).unwrap().shifted_cone_of(),
            Err(Error::NoCone(_))
        ));
    }

    #[test]
    fn generic_probing_recovers_named_characteristics() {
        let h = Region::hyperbola(3.0, 1.0).unwrap();
        let (l, m) = h.characteristic_matrices();
        let g = Region::lmi(l, m).unwrap();
        let t = g.traits().unwrap();
        assert_eq!(t.alpha_r, f64::NEG_INFINITY);
        assert_abs_diff_eq!(t.x_max, -1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(t.theta0.unwrap(), 3f64.atan(), epsilon = 1e-4);
        assert_abs_diff_eq!(g.boundary_height(-1.0).unwrap(), 8f64.sqrt(), epsilon = 1e-8);
        assert_abs_diff_eq!(g.radius(-2.0).unwrap(), h.radius(-2.0).unwrap(), epsilon = 1e-8);

        let p = Region::parabola(1.0).unwrap();
        let (l, m) = p.characteristic_matrices();
        let t = Region::lmi(l, m).unwrap().traits().unwrap();
        assert_eq!(t.recession, RecessionKind::RayRMinus);
        assert_abs_diff_eq!(t.x_max, 0.0, epsilon = 1e-9);

        let hp = Region::half_plane(1.5).unwrap();
        let (l, m) = hp.characteristic_matrices();
        let t = Region::lmi(l, m).unwrap().traits().unwrap();
        assert_eq!(t.recession, RecessionKind::HalfPlane);
        assert_abs_diff_eq!(t.x_max, 1.5, epsilon = 1e-9);

        let vs = Region::vertical_stripe(-3.0, -1.0).unwrap();
        let (l, m) = vs.characteristic_matrices();
        let g = Region::lmi(l, m).unwrap();
        let (lo, hi) = g.real_interval().unwrap();
        assert_abs_diff_eq!(lo, -3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g.radius(-2.5).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn whole_plane_radius_is_rejected() {
        let g = Region::lmi(Matrix::from_element(1, 1, -1.0), Matrix::zeros(1, 1)).unwrap();
        assert!(matches!(g.radius(0.0), Err(Error::UnsupportedRadius(_))));
    }

    #[test]
    fn empty_generic_region_is_reported() {
        let g = Region::lmi(Matrix::from_element(1, 1, 1.0), Matrix::zeros(1, 1)).unwrap();
        assert_eq!(g.real_interval(), Err(Error::EmptyRegion));
    }

    #[test]
    fn shifted_parabola_moves_the_apex() {
        let g = Region::shifted_parabola(2.0, -1.0).unwrap();
        // y^2 < -4 (x + 1)
        assert!(g.contains(c(-2.0, 1.9)));
        assert!(!g.contains(c(-2.0, 2.1)));
        assert!(!g.contains(c(-0.9, 0.0)));
    }

    #[test]
    fn validation_rejects_degenerate_parameters() {
        assert!(Region::cone(0.0, 0.0).is_err());
        assert!(Region::cone(0.0, 1.6).is_err());
        assert!(Region::cone(0.0, FRAC_PI_2).is_ok());
        assert!(Region::hyperbola(0.0, 1.0).is_err());
        assert!(Region::parabola(0.0).is_err());
        assert!(Region::horizontal_stripe(-1.0).is_err());
        assert!(Region::vertical_stripe(1.0, 1.0).is_err());
        assert!(Region::lmi(
            Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            Matrix::identity(2, 2)
        )
        .is_err());
    }

    #[test]
    fn grammar_round_trips() {
        for text in [
            "half-plane:alpha=0",
            "cone:alpha=0,theta=0.785398",
            "hyperbola:a=3,b=1",
            "parabola:eps=2",
            "hstripe:c=1.5",
            "vstripe:alpha=-2,beta=-1",
            "lmi:L=[[0.0]];M=[[1.0]]",
        ] {
            let r: Region = text.parse().unwrap();
            let again: Region = r.to_string().parse().unwrap();
            assert_eq!(r, again, "{text}");
        }
        assert!("cone:alpha=0".parse::<Region>().is_err());
        assert!("disk:r=1".parse::<Region>().is_err());
        assert!("half-plane:alpha=x".parse::<Region>().is_err());
    }
}
