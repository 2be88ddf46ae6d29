//! Reduced energies `Psi(d, r)` of the four almost-critical problems, their
//! critical scalings, a boundary-sign test for the Brouwer degree on
//! rectangles, concentration rates and the existence verdicts.

use serde::Serialize;

use crate::error::{Edge, Error, Result};
use crate::green::AnnulusGeometry;
use crate::landscape::{minimize_lambda1, threshold, Minimizer, ThresholdResult};
use crate::series::SeriesControl;
use crate::spectrum::{eigenvalues, lambda1_with, CirculantRow, RadialExpansion};

/// Samples per rectangle edge in [`degree_check`].
pub const EDGE_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Slightly subcritical power, `-log d` term.
    PMinus,
    /// Slightly supercritical power, `+log d` term.
    PPlus,
    /// Brezis-Nirenberg with `-eps u`, `-d^2` term.
    BnPlus,
    /// Brezis-Nirenberg with `+eps u`, `+d^2` term.
    BnMinus,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::PMinus, Family::PPlus, Family::BnPlus, Family::BnMinus];

    pub fn name(&self) -> &'static str {
        match self {
            Family::PMinus => "P-",
            Family::PPlus => "P+",
            Family::BnPlus => "BN+",
            Family::BnMinus => "BN-",
        }
    }

    fn is_brezis_nirenberg(&self) -> bool {
        matches!(self, Family::BnPlus | Family::BnMinus)
    }

    /// Whether a solution needs `Lambda_1 > 0` (a minimum of `Psi`) rather than `Lambda_1 < 0`.
    pub fn needs_positive_lambda(&self) -> bool {
        matches!(self, Family::PMinus | Family::BnPlus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProblemVariant {
    pub family: Family,
    pub dim: usize,
}

impl ProblemVariant {
    pub fn new(family: Family, dim: usize) -> Result<Self> {
        if dim < 3 {
            return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
        }
        Ok(Self { family, dim })
    }

    /// The closed forms in `d` exist for `P+-` with `N >= 3` and for the Brezis-Nirenberg pair with `N >= 5`.
    fn require_closed_form(&self) -> Result<()> {
        if self.family.is_brezis_nirenberg() && self.dim < 5 {
            return Err(Error::Unsupported(format!(
                "{} reduced energy needs N >= 5, got N = {}",
                self.family.name(),
                self.dim
            )));
        }
        Ok(())
    }

    fn n(&self) -> f64 {
        self.dim as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyConstants {
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Default for EnergyConstants {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            d1: 1.0,
            d2: 1.0,
        }
    }
}

impl EnergyConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c1", self.c1), ("c2", self.c2), ("d1", self.d1), ("d2", self.d2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    /// Coefficient `B` of the general functionals: `c2` for the log terms, `d2` for the quadratic ones.
    pub fn b(&self, family: Family) -> f64 {
        if family.is_brezis_nirenberg() {
            self.d2
        } else {
            self.c2
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            c1: self.c1 * factor,
            c2: self.c2 * factor,
            d1: self.d1 * factor,
            d2: self.d2 * factor,
        }
    }

    /// `(leading coefficient, d-term coefficient)` for a family.
    fn pair(&self, family: Family) -> (f64, f64) {
        if family.is_brezis_nirenberg() {
            (self.d1, self.d2)
        } else {
            (self.c1, self.c2)
        }
    }
}

fn check_d(d: f64) -> Result<()> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::domain(format!("d = {d} must be positive")));
    }
    Ok(())
}

/// `Psi(d, r)` given `Lambda_1(r)`.
pub fn psi(variant: &ProblemVariant, consts: &EnergyConstants, d: f64, lambda1_value: f64) -> Result<f64> {
    variant.require_closed_form()?;
    consts.validate()?;
    check_d(d)?;
    let (lead, tail) = consts.pair(variant.family);
    let main = lead * d.powf(variant.n() - 2.0) * lambda1_value;
    Ok(match variant.family {
        Family::PMinus => main - tail * d.ln(),
        Family::PPlus => main + tail * d.ln(),
        Family::BnPlus => main - tail * d * d,
        Family::BnMinus => main + tail * d * d,
    })
}

/// `dPsi/dd`.
pub fn psi_d(variant: &ProblemVariant, consts: &EnergyConstants, d: f64, lambda1_value: f64) -> Result<f64> {
    variant.require_closed_form()?;
    consts.validate()?;
    check_d(d)?;
    let n = variant.n();
    let (lead, tail) = consts.pair(variant.family);
    let main = (n - 2.0) * lead * d.powf(n - 3.0) * lambda1_value;
    Ok(match variant.family {
        Family::PMinus => main - tail / d,
        Family::PPlus => main + tail / d,
        Family::BnPlus => main - 2.0 * tail * d,
        Family::BnMinus => main + 2.0 * tail * d,
    })
}

/// `dPsi/dr = lead d^{N-2} Lambda_1'(r)`.
pub fn psi_r(variant: &ProblemVariant, consts: &EnergyConstants, d: f64, lambda1_slope: f64) -> Result<f64> {
    variant.require_closed_form()?;
    consts.validate()?;
    check_d(d)?;
    let (lead, _) = consts.pair(variant.family);
    Ok(lead * d.powf(variant.n() - 2.0) * lambda1_slope)
}

/// The unique positive zero of `dPsi/dd`.
pub fn critical_d(variant: &ProblemVariant, consts: &EnergyConstants, lambda1_value: f64) -> Result<f64> {
    variant.require_closed_form()?;
    consts.validate()?;
    let n = variant.n();
    let (lead, tail) = consts.pair(variant.family);
    let wanted_positive = variant.family.needs_positive_lambda();
    let ok = if wanted_positive {
        lambda1_value > 0.0
    } else {
        lambda1_value < 0.0
    };
    if !ok {
        return Err(Error::Sign(format!(
            "{} needs Lambda_1 {} 0, got {lambda1_value}",
            variant.family.name(),
            if wanted_positive { ">" } else { "<" }
        )));
    }
    let lam = lambda1_value.abs();
    Ok(if variant.family.is_brezis_nirenberg() {
        (2.0 * tail / ((n - 2.0) * lead * lam)).powf(1.0 / (n - 4.0))
    } else {
        (tail / ((n - 2.0) * lead * lam)).powf(1.0 / (n - 2.0))
    })
}

fn check_dvec(row: &CirculantRow, dvec: &[f64]) -> Result<()> {
    if dvec.len() != row.k() {
        return Err(Error::DimensionMismatch {
            expected: row.k(),
            got: dvec.len(),
        });
    }
    dvec.iter().try_for_each(|&d| check_d(d))
}

/// `1/2 (M u, u)` with `u = d^{(N-2)/2}`, plus `+-B log(d_1 ... d_k)` or `-+B/2 sum d_j^2`.
pub fn psi_general(
    row: &CirculantRow,
    dvec: &[f64],
    variant: &ProblemVariant,
    consts: &EnergyConstants,
) -> Result<f64> {
    variant.require_closed_form()?;
    consts.validate()?;
    check_dvec(row, dvec)?;
    let half = (variant.n() - 2.0) / 2.0;
    let u: Vec<f64> = dvec.iter().map(|d| d.powf(half)).collect();
    let mu = row.apply(&u)?;
    let quad = 0.5 * mu.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
    let b = consts.b(variant.family);
    let logs: f64 = dvec.iter().map(|d| d.ln()).sum();
    let squares: f64 = dvec.iter().map(|d| d * d).sum();
    Ok(match variant.family {
        Family::PPlus => quad + b * logs,
        Family::PMinus => quad - b * logs,
        Family::BnPlus => quad - 0.5 * b * squares,
        Family::BnMinus => quad + 0.5 * b * squares,
    })
}

/// Gradient of [`psi_general`] in `dvec`.
pub fn psi_general_gradient(
    row: &CirculantRow,
    dvec: &[f64],
    variant: &ProblemVariant,
    consts: &EnergyConstants,
) -> Result<Vec<f64>> {
    variant.require_closed_form()?;
    consts.validate()?;
    check_dvec(row, dvec)?;
    let half = (variant.n() - 2.0) / 2.0;
    let u: Vec<f64> = dvec.iter().map(|d| d.powf(half)).collect();
    let mu = row.apply(&u)?;
    let b = consts.b(variant.family);
    Ok(dvec
        .iter()
        .zip(&mu)
        .map(|(&d, &m)| {
            let quad = m * half * d.powf(half - 1.0);
            match variant.family {
                Family::PPlus => quad + b / d,
                Family::PMinus => quad - b / d,
                Family::BnPlus => quad - b * d,
                Family::BnMinus => quad + b * d,
            }
        })
        .collect())
}

/// Closed rectangle `[d_lo, d_hi] x [r_lo, r_hi]` in the `(d, r)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub d_lo: f64,
    pub d_hi: f64,
    pub r_lo: f64,
    pub r_hi: f64,
}

impl Rect {
    fn validate(&self, geom: &AnnulusGeometry) -> Result<()> {
        if !(self.d_lo > 0.0 && self.d_lo < self.d_hi && self.d_hi.is_finite()) {
            return Err(Error::domain(format!("bad d-range [{}, {}]", self.d_lo, self.d_hi)));
        }
        if !(self.r_lo > geom.rho() && self.r_lo < self.r_hi && self.r_hi < 1.0) {
            return Err(Error::domain(format!(
                "r-range [{}, {}] must sit inside ({}, 1)",
                self.r_lo,
                self.r_hi,
                geom.rho()
            )));
        }
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Degree of `grad Psi` on `rect`, read off from the boundary signs.
///
/// On the `r`-edges `dPsi/dr` must be negative at `r_lo` and positive at `r_hi`.
/// On the `d`-edges the minimum pattern (`-` at `d_lo`, `+` at `d_hi`) gives `+1`
/// and is expected for `P-` and `BN+`; the saddle pattern (`+` then `-`) gives `-1`
/// and is expected for `P+` and `BN-`.
pub fn degree_check(
    variant: &ProblemVariant,
    consts: &EnergyConstants,
    geom: &AnnulusGeometry,
    ctrl: &SeriesControl,
    k: usize,
    rect: &Rect,
) -> Result<i32> {
    variant.require_closed_form()?;
    consts.validate()?;
    if variant.dim != geom.dim() {
        return Err(Error::DimensionMismatch {
            expected: geom.dim(),
            got: variant.dim,
        });
    }
    rect.validate(geom)?;
    let expansion = RadialExpansion::new(geom, ctrl, k)?;
    let minimum = variant.family.needs_positive_lambda();
    let d_lo_sign = if minimum { -1.0 } else { 1.0 };

    let check = |edge: Edge, d: f64, r: f64, value: f64, want: f64| -> Result<()> {
        if !value.is_finite() || value == 0.0 {
            return Err(Error::Inconclusive(format!(
                "gradient component {value} on edge {edge} at (d, r) = ({d}, {r})"
            )));
        }
        if value.signum() != want {
            return Err(Error::BoundaryViolation { edge, d, r, value });
        }
        Ok(())
    };

    for r in linspace(rect.r_lo, rect.r_hi, EDGE_SAMPLES) {
        let lam = lambda1_with(&expansion, ctrl, r)?.value;
        check(Edge::DLow, rect.d_lo, r, psi_d(variant, consts, rect.d_lo, lam)?, d_lo_sign)?;
        check(Edge::DHigh, rect.d_hi, r, psi_d(variant, consts, rect.d_hi, lam)?, -d_lo_sign)?;
    }
    let slope = |r| crate::landscape::lambda1_derivatives(geom, ctrl, k, r).map(|d| d.0.value);
    let (s_lo, s_hi) = (slope(rect.r_lo)?, slope(rect.r_hi)?);
    for d in linspace(rect.d_lo, rect.d_hi, EDGE_SAMPLES) {
        check(Edge::RLow, d, rect.r_lo, psi_r(variant, consts, d, s_lo)?, -1.0)?;
        check(Edge::RHigh, d, rect.r_hi, psi_r(variant, consts, d, s_hi)?, 1.0)?;
    }
    Ok(if minimum { 1 } else { -1 })
}

/// Rectangle `(mu, 1/mu) x (a, b)` around `r0` on which `Lambda_1 < 0`, with `mu`
/// shrunk from 0.1 until the `d`-edge signs of the saddle pattern hold.
pub fn saddle_rectangle(
    variant: &ProblemVariant,
    consts: &EnergyConstants,
    geom: &AnnulusGeometry,
    ctrl: &SeriesControl,
    k: usize,
    min: &Minimizer,
) -> Result<Rect> {
    if variant.family.needs_positive_lambda() {
        return Err(Error::Sign(format!("{} has no saddle pattern", variant.family.name())));
    }
    if !(min.lambda1_at_r0 < 0.0) {
        return Err(Error::Sign(format!("Lambda_1(r0) = {} is not negative", min.lambda1_at_r0)));
    }
    let expansion = RadialExpansion::new(geom, ctrl, k)?;
    let lam = |r| lambda1_with(&expansion, ctrl, r).map(|v| v.value);
    let (a, b) = shrink_around(min, geom, |r| Ok(lam(r)? < 0.0))?;
    let samples: Vec<f64> = linspace(a, b, EDGE_SAMPLES)
        .map(lam)
        .collect::<Result<_>>()?;
    let mut mu = 0.1;
    for _ in 0..60 {
        let mut holds = true;
        for &l in &samples {
            if !(psi_d(variant, consts, mu, l)? > 0.0 && psi_d(variant, consts, 1.0 / mu, l)? < 0.0) {
                holds = false;
                break;
            }
        }
        if holds {
            return Ok(Rect {
                d_lo: mu,
                d_hi: 1.0 / mu,
                r_lo: a,
                r_hi: b,
            });
        }
        mu *= 0.5;
    }
    Err(Error::Inconclusive("no mu found for the saddle rectangle".into()))
}

/// Rectangle `[d*/2, 2 d*] x (a, b)` around the nondegenerate minimum `(d*, r0)`.
pub fn minimum_rectangle(
    variant: &ProblemVariant,
    consts: &EnergyConstants,
    geom: &AnnulusGeometry,
    ctrl: &SeriesControl,
    k: usize,
    min: &Minimizer,
) -> Result<Rect> {
    if !variant.family.needs_positive_lambda() {
        return Err(Error::Sign(format!("{} has no minimum pattern", variant.family.name())));
    }
    let d_star = critical_d(variant, consts, min.lambda1_at_r0)?;
    let expansion = RadialExpansion::new(geom, ctrl, k)?;
    let cap = 1.5 * min.lambda1_at_r0;
    let (a, b) = shrink_around(min, geom, |r| Ok(lambda1_with(&expansion, ctrl, r)?.value < cap))?;
    Ok(Rect {
        d_lo: 0.5 * d_star,
        d_hi: 2.0 * d_star,
        r_lo: a,
        r_hi: b,
    })
}

/// Largest `[r0 - t, r0 + t]` (halving `t`) whose endpoints satisfy `ok`.
fn shrink_around(
    min: &Minimizer,
    geom: &AnnulusGeometry,
    ok: impl Fn(f64) -> Result<bool>,
) -> Result<(f64, f64)> {
    let mut t = 0.5 * (min.r0 - geom.rho()).min(1.0 - min.r0);
    for _ in 0..50 {
        let (a, b) = (min.r0 - t, min.r0 + t);
        if ok(a)? && ok(b)? {
            return Ok((a, b));
        }
        t *= 0.5;
    }
    Err(Error::Inconclusive("could not find an r-interval around r0".into()))
}

/// Concentration scale `delta(eps)` of the bubbles.
pub fn concentration_rate(variant: &ProblemVariant, eps: f64, d: f64, lambda1_at_r0: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::domain(format!("eps = {eps} must be positive")));
    }
    check_d(d)?;
    let n = variant.n();
    match (variant.family, variant.dim) {
        (Family::PMinus | Family::PPlus, _) => Ok(eps.powf(1.0 / (n - 2.0)) * d),
        (_, 3) => Err(Error::Unsupported(
            "Brezis-Nirenberg concentration in dimension 3 depends on an implicit critical parameter".into(),
        )),
        (family, 4) => {
            let positive = family.needs_positive_lambda();
            if (positive && lambda1_at_r0 > 0.0) || (!positive && lambda1_at_r0 < 0.0) {
                Ok((-lambda1_at_r0.abs() / eps).exp())
            } else {
                Err(Error::Sign(format!(
                    "{} in dimension 4 needs Lambda_1(r0) {} 0",
                    family.name(),
                    if positive { ">" } else { "<" }
                )))
            }
        }
        _ => Ok(eps.powf(1.0 / (n - 4.0)) * d),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// A family of solutions concentrating on the circle of radius `r0`.
    Exists { r0: f64, lambda1_at_r0: f64 },
    NoneOfThisForm,
    /// `rho` lies within the numerical bracket of `rho_k`; existence is only claimed on either open side.
    AtThreshold,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyVerdict {
    pub family: Family,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub dim: usize,
    pub k: usize,
    pub rho: f64,
    pub threshold: ThresholdResult,
    pub minimizer: Minimizer,
    pub verdicts: Vec<FamilyVerdict>,
}

/// Which of the four problems admit `k`-peak solutions on the annulus of inner radius `rho`.
pub fn existence_verdict(dim: usize, k: usize, rho: f64, ctrl: &SeriesControl) -> Result<VerdictReport> {
    let geom = AnnulusGeometry::new(dim, rho)?;
    let th = threshold(dim, k, ctrl)?;
    let min = minimize_lambda1(&geom, ctrl, k)?;
    let at_threshold = rho >= th.bracket.0 && rho <= th.bracket.1;
    let verdicts = Family::ALL
        .iter()
        .map(|&family| {
            let verdict = if family == Family::BnMinus && dim < 4 {
                Verdict::NotApplicable
            } else if at_threshold {
                Verdict::AtThreshold
            } else if family.needs_positive_lambda() == (rho > th.rho_k) {
                Verdict::Exists {
                    r0: min.r0,
                    lambda1_at_r0: min.lambda1_at_r0,
                }
            } else {
                Verdict::NoneOfThisForm
            };
            FamilyVerdict { family, verdict }
        })
        .collect();
    Ok(VerdictReport {
        dim,
        k,
        rho,
        threshold: th,
        minimizer: min,
        verdicts,
    })
}

/// `Lambda_1` of a row through the circulant eigenvalue formula.
pub fn row_lambda1(row: &CirculantRow) -> Result<f64> {
    Ok(eigenvalues(row)?.lambdas[0])
}
