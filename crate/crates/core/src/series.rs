//! Truncation control and certified tails for the radial series.
//!
//! Every series in this crate has terms dominated by a majorant of the form
//! `K q^m prod_i (m + c_i)` with `0 <= q < 1` and `c_i > 0`. The ratio of
//! consecutive majorant terms is then non-increasing in `m`, so the tail from
//! index `M` is bounded by the geometric sum `b_M / (1 - t_M)` with `t_M` the
//! ratio at `M`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truncation {
    /// Sum exactly `max_terms` terms and report the tail bound.
    Fixed,
    /// Stop once the certified tail bound drops below `tail_tol`.
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryPolicy {
    Reject,
    Allow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub tail_tol: f64,
    pub strategy: Truncation,
    /// Minimal `|x - y|` accepted by the Green function, as a fraction of `1 - rho`.
    pub clearance: f64,
    pub boundary: BoundaryPolicy,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 5000,
            tail_tol: 1e-10,
            strategy: Truncation::Adaptive,
            clearance: 1e-3,
            boundary: BoundaryPolicy::Reject,
        }
    }
}

impl SeriesControl {
    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }

    pub fn fixed(mut self, terms: usize) -> Self {
        self.strategy = Truncation::Fixed;
        self.max_terms = terms;
        self
    }

    pub fn allow_boundary(mut self) -> Self {
        self.boundary = BoundaryPolicy::Allow;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::domain("max_terms must be positive"));
        }
        if !(self.tail_tol > 0.0) || !self.tail_tol.is_finite() {
            return Err(Error::domain("tail_tol must be a positive finite number"));
        }
        if !(self.clearance >= 0.0) || !self.clearance.is_finite() {
            return Err(Error::domain("clearance must be non-negative"));
        }
        Ok(())
    }
}

/// A truncated series value together with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: usize,
}

impl SeriesValue {
    pub(crate) fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        Self {
            value: f(self.value),
            ..self
        }
    }

    pub(crate) fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            tail_bound: self.tail_bound * factor.abs(),
            terms: self.terms,
        }
    }
}

/// Majorant `scale * ratio^m * prod_i (m + shifts_i)` for the absolute terms of a series.
#[derive(Debug, Clone)]
pub(crate) struct Majorant {
    scale: f64,
    ratio: f64,
    shifts: Vec<f64>,
}

impl Majorant {
    pub(crate) fn new(scale: f64, ratio: f64, shifts: Vec<f64>) -> Self {
        debug_assert!(shifts.iter().all(|&c| c > 0.0));
        Self {
            scale,
            ratio,
            shifts,
        }
    }

    /// Majorant with polynomial factor `prod_{i=1}^{N-3} (m + i)`, i.e. `(N-3)! A_{N,m}`.
    pub(crate) fn binomial(dim: usize, scale: f64, ratio: f64) -> Self {
        Self::new(scale, ratio, (1..dim - 2).map(|i| i as f64).collect())
    }

    pub(crate) fn scaled(mut self, factor: f64) -> Self {
        self.scale *= factor;
        self
    }

    pub(crate) fn with_shift(mut self, c: f64) -> Self {
        self.shifts.push(c);
        self
    }

    fn term(&self, m: usize) -> f64 {
        let mf = m as f64;
        let poly: f64 = self.shifts.iter().map(|c| mf + c).product();
        self.scale * self.ratio.powf(mf) * poly
    }

    /// Upper bound on `sum_{n >= m} |term_n|`, or infinity when not yet geometric.
    pub(crate) fn tail(&self, m: usize) -> f64 {
        if self.scale == 0.0 || self.ratio == 0.0 {
            return 0.0;
        }
        let mf = m as f64;
        let growth: f64 = self.shifts.iter().map(|c| (mf + 1.0 + c) / (mf + c)).product();
        let t = self.ratio * growth;
        if t >= 1.0 || !t.is_finite() {
            return f64::INFINITY;
        }
        self.term(m) / (1.0 - t)
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sums `term(0) + term(1) + ...` according to `ctrl`, using `majorant` for the tail.
pub(crate) fn sum_series(
    ctrl: &SeriesControl,
    majorant: &Majorant,
    mut term: impl FnMut(usize) -> f64,
) -> Result<SeriesValue> {
    let mut acc = CompensatedSum::default();
    match ctrl.strategy {
        Truncation::Fixed => {
            for m in 0..ctrl.max_terms {
                acc.add(term(m));
            }
            Ok(SeriesValue {
                value: acc.value(),
                tail_bound: majorant.tail(ctrl.max_terms),
                terms: ctrl.max_terms,
            })
        }
        Truncation::Adaptive => {
            let mut tail = f64::INFINITY;
            for m in 0..ctrl.max_terms {
                acc.add(term(m));
                tail = majorant.tail(m + 1);
                if tail <= ctrl.tail_tol {
                    return Ok(SeriesValue {
                        value: acc.value(),
                        tail_bound: tail,
                        terms: m + 1,
                    });
                }
            }
            Err(Error::NonConvergence {
                terms: ctrl.max_terms,
                tail,
            })
        }
    }
}
