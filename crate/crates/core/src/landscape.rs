//! The profile of `Lambda_1(r)`: its unique minimizer, the threshold function
//! `h(rho) = min_r r^{N-2} Lambda_1(r)`, the critical inner radius `rho_k`
//! and the analytic sign certificates for `h`.

use serde::Serialize;

use crate::configuration::frak_c;
use crate::error::{Error, Result};
use crate::green::{q_radial_derivatives_unchecked, AnnulusGeometry};
use crate::series::{sum_series, Majorant, SeriesControl, SeriesValue};
use crate::specfun::sphere_area;
use crate::spectrum::{alpha_table, lambda1_with, RadialExpansion};

/// Default width of the final `rho_k` bracket.
pub const THRESHOLD_TOL: f64 = 1e-8;

/// Initial clearance of r-searches from the boundary, as a fraction of `1 - rho`.
const INITIAL_CLEARANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimizer {
    pub r0: f64,
    pub lambda1_at_r0: f64,
    pub second_derivative: f64,
    /// Final bisection bracket around `r0`.
    pub bracket: (f64, f64),
    /// The interval `[rho + delta, 1 - delta]` the search ran on.
    pub domain: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub rho_k: f64,
    pub bracket: (f64, f64),
    pub frak_a: f64,
    pub lower_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Positivity,
    Negativity,
}

/// A closed-form bound on `omega (N-2) h(rho)`; `fired` when its sign settles the sign of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignCertificate {
    pub kind: CertificateKind,
    pub margin: f64,
    pub fired: bool,
}

/// `(Lambda_1'(r), Lambda_1''(r))` by term-wise differentiation.
pub fn lambda1_derivatives(
    geom: &AnnulusGeometry,
    ctrl: &SeriesControl,
    k: usize,
    r: f64,
) -> Result<(SeriesValue, SeriesValue)> {
    geom.check_interior(r, "lambda1_derivatives")?;
    let expansion = RadialExpansion::new(geom, ctrl, k)?;
    derivatives_with(&expansion, ctrl, r)
}

fn derivatives_with(
    expansion: &RadialExpansion,
    ctrl: &SeriesControl,
    r: f64,
) -> Result<(SeriesValue, SeriesValue)> {
    let geom = &expansion.geom;
    geom.check_interior(r, "lambda1_derivatives")?;
    let n = geom.dim() as f64;
    let omega = geom.omega();
    let rho = geom.rho();
    let q = r.max(rho / r);
    let fact: f64 = (1..geom.dim() - 2).map(|i| i as f64).product();
    let base = expansion.k as f64 * q.powf(n - 2.0)
        / ((n - 2.0) * (1.0 - rho.powf(n - 2.0)) * fact * omega);

    // |c alpha Q_m'| <= 4 k A_{N,m} (m + N - 2) q^a / ((N-2)(1 - rho^{N-2}) r^{N-1})
    let first_major = Majorant::binomial(geom.dim(), 4.0 * base / r.powf(n - 1.0), q * q).with_shift(n - 2.0);
    // |c alpha Q_m''| <= 12 k A_{N,m} (m + N - 3/2)^2 q^a / ((N-2)(1 - rho^{N-2}) r^N)
    let second_major = Majorant::binomial(geom.dim(), 12.0 * base / r.powf(n), q * q)
        .with_shift(n - 1.5)
        .with_shift(n - 1.5);

    let first = sum_series(ctrl, &first_major, |m| {
        expansion.weight(m) * q_radial_derivatives_unchecked(geom, m, r).0 / omega
    })?;
    let second = sum_series(ctrl, &second_major, |m| {
        expansion.weight(m) * q_radial_derivatives_unchecked(geom, m, r).1 / omega
    })?;
    let c = expansion.frak_c / omega;
    Ok((
        first.map(|v| v + c / r.powf(n - 1.0)),
        second.map(|v| v - (n - 1.0) * c / r.powf(n)),
    ))
}

/// The clamped interval `[rho + delta_lo, 1 - delta_hi]` used by r-searches.
///
/// Both clearances start at `1e-4 (1 - rho)`. Each one widens by a factor of four
/// while the derivative series fails to converge at its endpoint or the endpoint
/// does not yet show its boundary sign (`Lambda_1' < 0` inside, `> 0` outside).
/// The ends are handled separately since for small `rho` the inner series converges
/// much closer to the boundary than the outer one.
pub fn working_interval(geom: &AnnulusGeometry, ctrl: &SeriesControl, k: usize) -> Result<(f64, f64)> {
    let expansion = RadialExpansion::new(geom, ctrl, k)?;
    search_interval(&expansion, ctrl)
}

fn search_interval(expansion: &RadialExpansion, ctrl: &SeriesControl) -> Result<(f64, f64)> {
    let rho = expansion.geom.rho();
    let width = 1.0 - rho;
    let slope = |r| derivatives_with(expansion, ctrl, r).map(|d| d.0.value);
    let clear = |endpoint: &dyn Fn(f64) -> f64, want: f64| -> Result<f64> {
        let mut delta = INITIAL_CLEARANCE * width;
        while delta < 0.25 * width {
            match slope(endpoint(delta)) {
                Ok(v) if v.signum() == want && v != 0.0 => return Ok(endpoint(delta)),
                Err(e) if !e.is_non_convergence() => return Err(e),
                _ => delta *= 4.0,
            }
        }
        Err(Error::Bracket(format!(
            "Lambda_1' shows no sign change on any clamped subinterval of ({rho}, 1); \
             consider raising max_terms"
        )))
    };
    let lo = clear(&|delta| rho + delta, -1.0)?;
    let hi = clear(&|delta| 1.0 - delta, 1.0)?;
    Ok((lo, hi))
}

/// Locates the unique critical point of `Lambda_1` by bisection on `Lambda_1'`
/// over [`working_interval`].
pub fn minimize_lambda1(geom: &AnnulusGeometry, ctrl: &SeriesControl, k: usize) -> Result<Minimizer> {
    let expansion = RadialExpansion::new(geom, ctrl, k)?;
    let (lo, hi) = search_interval(&expansion, ctrl)?;

    let (mut a, mut b) = (lo, hi);
    while b - a > 4.0 * f64::EPSILON * b {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let d = derivatives_with(&expansion, ctrl, mid)?.0.value;
        if d < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let r0 = 0.5 * (a + b);
    let (_, second) = derivatives_with(&expansion, ctrl, r0)?;
    let value = lambda1_with(&expansion, ctrl, r0)?;
    Ok(Minimizer {
        r0,
        lambda1_at_r0: value.value,
        second_derivative: second.value,
        bracket: (a, b),
        domain: (lo, hi),
    })
}

fn check_inputs(dim: usize, k: usize, rho: f64) -> Result<()> {
    if dim < 3 {
        return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
    }
    if k < 2 {
        return Err(Error::domain(format!("k = {k} must be at least 2")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::domain(format!("rho = {rho} must lie in (0,1)")));
    }
    Ok(())
}

/// `h(rho) = f(sqrt(rho)) = (sum_m alpha_m 2 rho^{a/2} / (1 + rho^{a/2}) - c_{k,N}) / (omega (N-2))`.
pub fn h_of_rho(dim: usize, k: usize, rho: f64, ctrl: &SeriesControl) -> Result<SeriesValue> {
    check_inputs(dim, k, rho)?;
    ctrl.validate()?;
    let n = dim as f64;
    let norm = sphere_area(dim)? * (n - 2.0);
    let alpha = alpha_table(k, dim, ctrl.max_terms + 1);
    let fact: f64 = (1..dim - 2).map(|i| i as f64).product();
    let majorant = Majorant::binomial(dim, 2.0 * k as f64 * rho.powf((n - 2.0) / 2.0) / (fact * norm), rho);
    let sqrt_rho = rho.sqrt();
    let series = sum_series(ctrl, &majorant, |m| {
        let p = sqrt_rho.powf(2.0 * m as f64 + n - 2.0);
        alpha[m] * 2.0 * p / (1.0 + p) / norm
    })?;
    let c = frak_c(k, dim)? / norm;
    Ok(series.map(|v| v - c))
}

/// `a_{k,N} = (c_{k,N} / (2k (N-2)^{N-3}))^{2/(N-2)}`.
pub fn frak_a(dim: usize, k: usize) -> Result<f64> {
    check_inputs(dim, k, 0.5)?;
    let n = dim as f64;
    let base = frak_c(k, dim)? / (2.0 * k as f64 * (n - 2.0).powi(dim as i32 - 3));
    Ok(base.powf(2.0 / (n - 2.0)))
}

/// Smaller root of `a rho^2 - (2a + 1) rho + a`, below which the negativity certificate fires.
pub fn threshold_lower_bound(dim: usize, k: usize) -> Result<f64> {
    let a = frak_a(dim, k)?;
    // (2a + 1 - sqrt(4a + 1)) / (2a), rationalized to avoid cancellation for small a
    Ok(2.0 * a / (2.0 * a + 1.0 + (4.0 * a + 1.0).sqrt()))
}

/// The unique zero `rho_k` of `h`, bracketed to width [`THRESHOLD_TOL`].
pub fn threshold(dim: usize, k: usize, ctrl: &SeriesControl) -> Result<ThresholdResult> {
    threshold_with_tol(dim, k, ctrl, THRESHOLD_TOL)
}

pub fn threshold_with_tol(dim: usize, k: usize, ctrl: &SeriesControl, tol: f64) -> Result<ThresholdResult> {
    check_inputs(dim, k, 0.5)?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance {tol} must be positive")));
    }
    let fa = frak_a(dim, k)?;
    let lower = threshold_lower_bound(dim, k)?;
    let h = |rho: f64| h_of_rho(dim, k, rho, ctrl).map(|v| v.value);

    let mut lo = lower;
    if h(lo)? >= 0.0 {
        return Err(Error::Bracket(format!("h is not negative at the lower bound {lower}")));
    }
    // walk towards 1 until h turns positive; h is increasing, so the first hit brackets the root
    let cap = 1.0 - 1e-6;
    let mut hi = None;
    for j in 1..=60 {
        let t = (lower + (1.0 - lower) * (1.0 - 0.5f64.powi(j))).min(cap);
        let v = h(t)?;
        if v > 0.0 {
            hi = Some(t);
            break;
        }
        lo = t;
        if t >= cap {
            break;
        }
    }
    let mut hi = hi.ok_or_else(|| Error::Bracket(format!("h does not turn positive on [{lower}, {cap}]")))?;

    let mut rho_k = 0.5 * (lo + hi);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        rho_k = mid;
        let v = h(mid)?;
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol && v.abs() <= ctrl.tail_tol {
            break;
        }
    }
    Ok(ThresholdResult {
        rho_k,
        bracket: (lo, hi),
        frak_a: fa,
        lower_bound: lower,
    })
}

/// Lower bound on `omega (N-2) h(rho)` from keeping only the even coefficients.
///
/// `N = 3`: `-(k/4) sqrt(rho) log(1 - rho^2) - c_{k,3}`;
/// `N >= 4`: `k rho^{(N-2)/2} / (1 - rho^2) - c_{k,N}`.
pub fn positivity_certificate(dim: usize, k: usize, rho: f64) -> Result<SignCertificate> {
    check_inputs(dim, k, rho)?;
    let c = frak_c(k, dim)?;
    let kf = k as f64;
    let bound = if dim == 3 {
        -0.25 * kf * rho.sqrt() * (-rho * rho).ln_1p()
    } else {
        kf * rho.powf((dim as f64 - 2.0) / 2.0) / (1.0 - rho * rho)
    };
    let margin = bound - c;
    Ok(SignCertificate {
        kind: CertificateKind::Positivity,
        margin,
        fired: margin > 0.0,
    })
}

/// Upper bound on `omega (N-2) h(rho)`: `2k (N-2)^{N-3} rho^{(N-2)/2} / (1 - rho)^{N-2} - c_{k,N}`.
pub fn negativity_certificate(dim: usize, k: usize, rho: f64) -> Result<SignCertificate> {
    check_inputs(dim, k, rho)?;
    let n = dim as f64;
    let c = frak_c(k, dim)?;
    let bound = 2.0 * k as f64 * (n - 2.0).powi(dim as i32 - 3) * rho.powf((n - 2.0) / 2.0)
        / (1.0 - rho).powf(n - 2.0);
    let margin = bound - c;
    Ok(SignCertificate {
        kind: CertificateKind::Negativity,
        margin,
        fired: margin < 0.0,
    })
}

/// `gamma_N = (N-2)^{N-3} / (N-3)!`, so that `A_{N,m} <= gamma_N m^{N-3}` for `m >= 1`.
pub fn gamma_n(dim: usize) -> Result<f64> {
    if dim < 3 {
        return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
    }
    let n = dim as f64;
    let fact: f64 = (1..dim - 2).map(|i| i as f64).product();
    Ok((n - 2.0).powi(dim as i32 - 3) / fact)
}
