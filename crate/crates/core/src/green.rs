//! Dirichlet Green function, its regular part and the Robin function of the
//! annulus `{rho < |x| < 1}` in `R^N`, evaluated through their expansions in
//! zonal harmonics.
//!
//! The regular part is summed directly as `(1/omega) sum_m Q_m(|x|,|y|) Z_m(x.y)`,
//! which stays smooth across the diagonal; the Green function is the free-space
//! kernel minus that sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{sum_series, BoundaryPolicy, Majorant, SeriesControl, SeriesValue};
use crate::specfun::{sphere_area, zonal_scale, BinomialWeights, GegenbauerSeq};

/// Radii within this relative distance of `rho` or `1` are snapped onto the boundary.
const BOUNDARY_SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGeometry {
    dim: usize,
    rho: f64,
}

impl AnnulusGeometry {
    pub fn new(dim: usize, rho: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::domain(format!("rho = {rho} must lie in (0,1)")));
        }
        Ok(Self { dim, rho })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Surface measure of the unit sphere in `R^N`.
    pub fn omega(&self) -> f64 {
        sphere_area(self.dim).expect("dimension validated")
    }

    pub(crate) fn exponent(&self, m: usize) -> f64 {
        2.0 * m as f64 + self.dim as f64 - 2.0
    }

    fn check_closed(&self, s: f64, what: &str) -> Result<()> {
        if !(s >= self.rho && s <= 1.0) {
            return Err(Error::domain(format!(
                "{what}: radius {s} outside [{}, 1]",
                self.rho
            )));
        }
        Ok(())
    }

    pub(crate) fn check_interior(&self, s: f64, what: &str) -> Result<()> {
        if !(s > self.rho && s < 1.0) {
            return Err(Error::domain(format!(
                "{what}: radius {s} outside the open annulus ({}, 1)",
                self.rho
            )));
        }
        Ok(())
    }

    /// Validates a radius under the boundary policy, snapping near-boundary radii.
    fn admit_radius(&self, s: f64, policy: BoundaryPolicy, what: &str) -> Result<f64> {
        match policy {
            BoundaryPolicy::Reject => {
                self.check_interior(s, what)?;
                Ok(s)
            }
            BoundaryPolicy::Allow => {
                let snapped = if (s - 1.0).abs() <= BOUNDARY_SNAP {
                    1.0
                } else if (s - self.rho).abs() <= BOUNDARY_SNAP * self.rho {
                    self.rho
                } else {
                    s
                };
                self.check_closed(snapped, what)?;
                Ok(snapped)
            }
        }
    }
}

/// A point of `R^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn radius(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Unit direction `x / |x|`; `None` at the origin.
    pub fn direction(&self) -> Option<Vec<f64>> {
        let r = self.radius();
        (r > 0.0).then(|| self.coords.iter().map(|c| c / r).collect())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

/// `1 - x^a` for `0 <= x <= 1`, accurate when `x^a` is close to one.
fn one_minus_pow(x: f64, a: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        -(a * x.ln()).exp_m1()
    }
}

/// Radial coefficient `Q_m(s)` of the Robin function.
pub fn q_radial(geom: &AnnulusGeometry, m: usize, s: f64) -> Result<f64> {
    geom.check_closed(s, "q_radial")?;
    let a = geom.exponent(m);
    let rho = geom.rho;
    // numerator and denominator divided by s^a
    let numer = (rho / s).powf(a) - 2.0 * rho.powf(a) + s.powf(a);
    let denom = a * s.powf(geom.dim as f64 - 2.0) * one_minus_pow(rho, a);
    Ok(numer / denom)
}

/// Two-radius coefficient `Q_m(s, t)` of the Green function.
pub fn q_pair(geom: &AnnulusGeometry, m: usize, s: f64, t: f64) -> Result<f64> {
    geom.check_closed(s, "q_pair")?;
    geom.check_closed(t, "q_pair")?;
    Ok(q_pair_unchecked(geom, m, s, t))
}

/// With `sigma = sqrt(s t)` the numerator splits into
/// `sigma^a (1 - (rho/s)^a)(1 - (rho/t)^a) + (rho/sigma)^a (1 - rho^a)`, both non-negative.
fn q_pair_unchecked(geom: &AnnulusGeometry, m: usize, s: f64, t: f64) -> f64 {
    let a = geom.exponent(m);
    let rho = geom.rho;
    let sigma = (s * t).sqrt();
    let lead = a * sigma.powf(geom.dim as f64 - 2.0);
    let outer = sigma.powf(a) * one_minus_pow(rho / s, a) * one_minus_pow(rho / t, a)
        / one_minus_pow(rho, a);
    let inner = (rho / sigma).powf(a);
    (outer + inner) / lead
}

/// First and second derivatives `(Q_m'(r), Q_m''(r))` of the radial coefficient.
pub fn q_radial_derivatives(geom: &AnnulusGeometry, m: usize, r: f64) -> Result<(f64, f64)> {
    geom.check_closed(r, "q_radial_derivatives")?;
    Ok(q_radial_derivatives_unchecked(geom, m, r))
}

pub(crate) fn q_radial_derivatives_unchecked(geom: &AnnulusGeometry, m: usize, r: f64) -> (f64, f64) {
    let n = geom.dim as f64;
    let a = geom.exponent(m);
    let two_m = 2.0 * m as f64;
    let rho = geom.rho;
    let inner = (rho / r).powf(a);
    let rho_a = rho.powf(a);
    let outer = r.powf(a);
    let base = a * one_minus_pow(rho, a);
    let first = (-(a + n - 2.0) * inner + 2.0 * (n - 2.0) * rho_a + two_m * outer)
        / (base * r.powf(n - 1.0));
    let second = ((a + n - 2.0) * (a + n - 1.0) * inner - 2.0 * (n - 2.0) * (n - 1.0) * rho_a
        + two_m * (two_m - 1.0) * outer)
        / (base * r.powf(n));
    (first, second)
}

/// Majorant for `sum_m d_m Q_m(s, t)` scaled by `1/omega`, with `sigma = sqrt(s t)`.
pub(crate) fn pair_majorant(geom: &AnnulusGeometry, sigma: f64) -> Majorant {
    let n = geom.dim as f64;
    let q = sigma.max(geom.rho / sigma);
    let fact: f64 = (1..geom.dim - 2).map(|i| i as f64).product();
    let scale = 2.0 * q.powf(n - 2.0)
        / ((n - 2.0) * sigma.powf(n - 2.0) * one_minus_pow(geom.rho, n - 2.0) * fact * geom.omega());
    Majorant::binomial(geom.dim, scale, q * q)
}

fn check_point(geom: &AnnulusGeometry, x: &Point) -> Result<()> {
    if x.dim() != geom.dim {
        return Err(Error::DimensionMismatch {
            expected: geom.dim,
            got: x.dim(),
        });
    }
    Ok(())
}

/// Robin function `tau_rho(x)`, the regular part on the diagonal.
pub fn robin(geom: &AnnulusGeometry, ctrl: &SeriesControl, x: &Point) -> Result<SeriesValue> {
    ctrl.validate()?;
    check_point(geom, x)?;
    let s = x.radius();
    geom.check_interior(s, "robin")?;
    robin_radial(geom, ctrl, s)
}

/// Robin function as a function of the radius alone.
pub fn robin_radial(geom: &AnnulusGeometry, ctrl: &SeriesControl, s: f64) -> Result<SeriesValue> {
    geom.check_interior(s, "robin")?;
    let omega = geom.omega();
    let n = geom.dim as f64;
    let mut weights = BinomialWeights::new(geom.dim);
    sum_series(ctrl, &pair_majorant(geom, s), |m| {
        let d_m = weights.next().expect("infinite") * geom.exponent(m) / (n - 2.0);
        d_m * q_radial_unchecked(geom, m, s) / omega
    })
}

fn q_radial_unchecked(geom: &AnnulusGeometry, m: usize, s: f64) -> f64 {
    let a = geom.exponent(m);
    let rho = geom.rho;
    let numer = (rho / s).powf(a) - 2.0 * rho.powf(a) + s.powf(a);
    numer / (a * s.powf(geom.dim as f64 - 2.0) * one_minus_pow(rho, a))
}

struct PairData {
    s: f64,
    t: f64,
    cos: f64,
    distance: f64,
}

fn pair_data(geom: &AnnulusGeometry, ctrl: &SeriesControl, x: &Point, y: &Point) -> Result<PairData> {
    ctrl.validate()?;
    check_point(geom, x)?;
    check_point(geom, y)?;
    let s = geom.admit_radius(x.radius(), ctrl.boundary, "x")?;
    let t = geom.admit_radius(y.radius(), ctrl.boundary, "y")?;
    let cos = (x.dot(y) / (x.radius() * y.radius())).clamp(-1.0, 1.0);
    Ok(PairData {
        s,
        t,
        cos,
        distance: x.distance(y),
    })
}

fn regular_series(geom: &AnnulusGeometry, ctrl: &SeriesControl, p: &PairData) -> Result<SeriesValue> {
    let omega = geom.omega();
    let lambda = (geom.dim as f64 - 2.0) / 2.0;
    let mut poly = GegenbauerSeq::new_unchecked(lambda, p.cos);
    let sigma = (p.s * p.t).sqrt();
    sum_series(ctrl, &pair_majorant(geom, sigma), |m| {
        let z = zonal_scale(geom.dim, m) * poly.next().expect("infinite");
        q_pair_unchecked(geom, m, p.s, p.t) * z / omega
    })
}

/// Free-space kernel `1 / (omega (N-2) |x-y|^{N-2})`.
pub fn singular_kernel(geom: &AnnulusGeometry, distance: f64) -> f64 {
    let n = geom.dim as f64;
    1.0 / (geom.omega() * (n - 2.0) * distance.powf(n - 2.0))
}

/// Dirichlet Green function `G_rho(x, y)`.
pub fn green(geom: &AnnulusGeometry, ctrl: &SeriesControl, x: &Point, y: &Point) -> Result<SeriesValue> {
    let p = pair_data(geom, ctrl, x, y)?;
    let clearance = ctrl.clearance * (1.0 - geom.rho);
    if !(p.distance >= clearance) || p.distance == 0.0 {
        return Err(Error::Singularity {
            distance: p.distance,
            clearance,
        });
    }
    let kernel = singular_kernel(geom, p.distance);
    Ok(regular_series(geom, ctrl, &p)?.map(|h| kernel - h))
}

/// Regular part `H(x, y)`; finite across the diagonal with `H(x, x) = tau_rho(x)`.
pub fn regular_part(
    geom: &AnnulusGeometry,
    ctrl: &SeriesControl,
    x: &Point,
    y: &Point,
) -> Result<SeriesValue> {
    let p = pair_data(geom, ctrl, x, y)?;
    regular_series(geom, ctrl, &p)
}
