//! The circulant interaction matrix of a symmetric configuration, its
//! eigenvalues, the coefficients `alpha_{k,m,N}` and the two routes to the
//! least eigenvalue `Lambda_1(r)`.
//!
//! The series route expands `Lambda_1` radially:
//!
//! ```text
//! Lambda_1(r) = (1/omega) [ -c_{k,N} / ((N-2) r^{N-2}) + sum_m c_{N,m} alpha_{k,m,N} Q_m(r) ]
//! ```
//!
//! The matrix route assembles the first row from the Robin and Green functions
//! and reads off the eigenvalue; it exists to cross-check the series.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::configuration::{frak_c, SymmetricConfig};
use crate::error::{Error, Result};
use crate::green::{green, pair_majorant, q_radial, robin, AnnulusGeometry};
use crate::series::{sum_series, SeriesControl, SeriesValue};
use crate::specfun::{
    binomial, central_binomial_quarter, gegenbauer, multiplicities, turn_cos_sin, zonal_scale,
};

/// First row `(a_0, ..., a_{k-1})` of the circulant interaction matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CirculantRow {
    a: Vec<f64>,
}

impl CirculantRow {
    /// Wraps a row; use [`build_row`] to assemble one from a configuration.
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::domain("a circulant row needs at least two entries"));
        }
        Ok(Self { a })
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// Entry `(i, j)` of the full matrix.
    pub fn matrix_entry(&self, i: usize, j: usize) -> f64 {
        let k = self.k();
        self.a[(j + k - i % k) % k]
    }

    /// Largest `|a_j - a_{k-j}|`.
    pub fn palindrome_defect(&self) -> f64 {
        let k = self.k();
        (1..k).map(|j| (self.a[j] - self.a[k - j]).abs()).fold(0.0, f64::max)
    }

    /// Product `M v` with the full circulant matrix.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let k = self.k();
        if v.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: v.len(),
            });
        }
        Ok((0..k)
            .map(|i| (0..k).map(|j| self.matrix_entry(i, j) * v[j]).sum())
            .collect())
    }
}

/// Eigenvalues in DFT order and the eigenvector of `Lambda_1`, normalized so its first entry is 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub lambdas: Vec<f64>,
    pub e1: Vec<f64>,
}

/// `a_0 = tau(xi_1)` and `a_j = -G(xi_1, xi_{j+1})`.
pub fn build_row(geom: &AnnulusGeometry, ctrl: &SeriesControl, cfg: &SymmetricConfig) -> Result<CirculantRow> {
    geom.check_interior(cfg.r(), "build_row")?;
    let k = cfg.k();
    let pts = cfg.points(geom.dim())?;
    let mut a = vec![0.0; k];
    a[0] = robin(geom, ctrl, &pts[0])?.value;
    // evaluate each chord once so that a_j = a_{k-j} holds exactly
    for j in 1..=k / 2 {
        a[j] = -green(geom, ctrl, &pts[0], &pts[j])?.value;
        a[k - j] = a[j];
    }
    CirculantRow::new(a)
}

/// `Lambda_l = a_0 + sum_j a_j cos(2 pi j (l-1) / k)`; the sine parts cancel for a palindromic row.
pub fn eigenvalues(row: &CirculantRow) -> Result<Spectrum> {
    let k = row.k();
    let scale = row.a.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let defect = row.palindrome_defect();
    if defect > 1e-8 * scale {
        return Err(Error::Asymmetry(defect));
    }
    let lambdas = (0..k)
        .map(|l| {
            row.a
                .iter()
                .enumerate()
                .map(|(j, a)| a * turn_cos_sin(j * l, k).0)
                .sum()
        })
        .collect();
    Ok(Spectrum {
        lambdas,
        e1: vec![1.0; k],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaEntry {
    /// `alpha_{k,m,N} = A_{N,m} + S_{k,m,N}`.
    pub alpha: f64,
    /// `S_{k,m,N} = sum_{j=1}^{k-1} C_m^{(N-2)/2}(cos 2 pi j / k)`.
    pub s: f64,
    /// `A_{N,m}`.
    pub a: u128,
}

fn check_kn(k: usize, dim: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::domain(format!("k = {k} must be at least 2")));
    }
    if dim < 3 {
        return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
    }
    Ok(())
}

/// `alpha_{k,m,N}` from the recursions, which keep every value non-negative.
///
/// `N = 3` uses the central binomial representation, `N = 4` the integer
/// recursion and `N >= 5` the recursion in the dimension.
pub fn alpha(k: usize, m: usize, dim: usize) -> Result<AlphaEntry> {
    check_kn(k, dim)?;
    let a = multiplicities(dim, m)?.a;
    let alpha = alpha_table(k, dim, m + 1)[m];
    Ok(AlphaEntry {
        alpha,
        s: alpha - a as f64,
        a,
    })
}

/// `A_{N,m} + sum_{j=1}^{k-1} C_m^{(N-2)/2}(cos 2 pi j / k)` summed directly.
pub fn alpha_direct(k: usize, m: usize, dim: usize) -> Result<f64> {
    check_kn(k, dim)?;
    let lambda = (dim as f64 - 2.0) / 2.0;
    let mut s = 0.0;
    for j in 1..k {
        s += gegenbauer(m, lambda, turn_cos_sin(j, k).0)?;
    }
    Ok(multiplicities(dim, m)?.a as f64 + s)
}

/// `alpha_{k,m,4}` from `alpha_m = alpha_{m-2} + 2k [k | m]` seeded by `k, 0`.
pub fn alpha_n4_recursive(k: usize, m: usize) -> Result<f64> {
    check_kn(k, 4)?;
    Ok(n4_table(k, m + 1)[m])
}

/// `alpha_{k,m,N}` from the recursion in the dimension, bottoming out at `N = 3` or `N = 4`.
pub fn alpha_cross_dimension(k: usize, m: usize, dim: usize) -> Result<f64> {
    check_kn(k, dim)?;
    Ok(build_table(k, dim, m + 1)[m])
}

/// `alpha_{k,m,3} = k 4^{-m} sum_{l : k | m - 2l} C(2(m-l), m-l) C(2l, l)`.
///
/// Exact up to the final rounding for `m <= 62`, where the integer sum fits in `u128`.
pub fn alpha_gamma_n3(k: usize, m: usize) -> Result<f64> {
    check_kn(k, 3)?;
    if m <= EXACT_GAMMA_MAX {
        return gamma_exact(k, m);
    }
    let g: Vec<f64> = central_binomial_quarters(m + 1);
    Ok(gamma_sum(k, m, &g))
}

const EXACT_GAMMA_MAX: usize = 62;

fn gamma_exact(k: usize, m: usize) -> Result<f64> {
    let mut total: u128 = 0;
    for l in 0..=m {
        if (m as i64 - 2 * l as i64).rem_euclid(k as i64) == 0 {
            let (x, y) = (m - l, l);
            total += binomial(2 * x as u64, x as u64)? * binomial(2 * y as u64, y as u64)?;
        }
    }
    Ok(k as f64 * total as f64 / 4f64.powi(m as i32))
}

fn central_binomial_quarters(len: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(len);
    let mut acc = 1.0;
    for l in 0..len {
        if l > 0 {
            acc *= (l as f64 - 0.5) / l as f64;
        }
        g.push(acc);
    }
    debug_assert!(len == 0 || (g[len - 1] - central_binomial_quarter(len - 1)).abs() < 1e-12);
    g
}

fn gamma_sum(k: usize, m: usize, g: &[f64]) -> f64 {
    let mut s = 0.0;
    // l runs over the residues with 2l = m (mod k)
    for start in (0..k.min(m + 1)).filter(|l| (2 * l) % k == m % k) {
        for l in (start..=m).step_by(k) {
            s += g[l] * g[m - l];
        }
    }
    k as f64 * s
}

fn n4_table(k: usize, len: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(len.max(2));
    t.push(k as f64);
    t.push(0.0);
    for m in 2..len {
        let jump = if m % k == 0 { 2.0 * k as f64 } else { 0.0 };
        t.push(t[m - 2] + jump);
    }
    t.truncate(len);
    t
}

fn build_table(k: usize, dim: usize, len: usize) -> Vec<f64> {
    match dim {
        3 => {
            let g = central_binomial_quarters(len);
            (0..len)
                .map(|m| match m {
                    0..=EXACT_GAMMA_MAX => gamma_exact(k, m).expect("fits in u128"),
                    _ => gamma_sum(k, m, &g),
                })
                .collect()
        }
        4 => n4_table(k, len),
        _ => {
            let lower = alpha_table(k, dim - 2, len);
            let n = dim as f64;
            let mut t = Vec::with_capacity(len.max(2));
            t.push(k as f64);
            t.push(0.0);
            for j in 2..len {
                // alpha_{m+1} = alpha_{m-1} + (2m + N - 2)/(N - 4) alpha_{m+1, N-2} with m = j - 1
                let m = (j - 1) as f64;
                t.push(t[j - 2] + (2.0 * m + n - 2.0) / (n - 4.0) * lower[j]);
            }
            t.truncate(len);
            t
        }
    }
}

type AlphaCache = Mutex<HashMap<(usize, usize), Arc<Vec<f64>>>>;

fn alpha_cache() -> &'static AlphaCache {
    static CACHE: OnceLock<AlphaCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared table of `alpha_{k,m,N}` for `m < len` (possibly longer).
pub(crate) fn alpha_table(k: usize, dim: usize, len: usize) -> Arc<Vec<f64>> {
    if let Some(t) = alpha_cache().lock().expect("alpha cache poisoned").get(&(k, dim)) {
        if t.len() >= len {
            return Arc::clone(t);
        }
    }
    let target = len.max(64).div_ceil(1024) * 1024;
    let table = Arc::new(build_table(k, dim, target));
    let mut cache = alpha_cache().lock().expect("alpha cache poisoned");
    let slot = cache.entry((k, dim)).or_insert_with(|| Arc::clone(&table));
    if slot.len() < table.len() {
        *slot = Arc::clone(&table);
    }
    table
}

/// Weights `c_{N,m} alpha_{k,m,N} / omega` with the constant `c_{k,N}` of the radial expansion.
#[derive(Debug, Clone)]
pub(crate) struct RadialExpansion {
    pub(crate) geom: AnnulusGeometry,
    pub(crate) k: usize,
    pub(crate) frak_c: f64,
    pub(crate) alpha: Arc<Vec<f64>>,
}

impl RadialExpansion {
    pub(crate) fn new(geom: &AnnulusGeometry, ctrl: &SeriesControl, k: usize) -> Result<Self> {
        ctrl.validate()?;
        check_kn(k, geom.dim())?;
        Ok(Self {
            geom: *geom,
            k,
            frak_c: frak_c(k, geom.dim())?,
            alpha: alpha_table(k, geom.dim(), ctrl.max_terms + 1),
        })
    }

    pub(crate) fn weight(&self, m: usize) -> f64 {
        zonal_scale(self.geom.dim(), m) * self.alpha[m]
    }

    /// `sum_m c alpha Q_m(r) / omega`.
    pub(crate) fn interaction(&self, ctrl: &SeriesControl, r: f64) -> Result<SeriesValue> {
        let omega = self.geom.omega();
        let majorant = pair_majorant(&self.geom, r).scaled(self.k as f64);
        sum_series(ctrl, &majorant, |m| {
            self.weight(m) * q_radial(&self.geom, m, r).expect("radius validated") / omega
        })
    }

    pub(crate) fn singular(&self, r: f64) -> f64 {
        let n = self.geom.dim() as f64;
        -self.frak_c / ((n - 2.0) * r.powf(n - 2.0) * self.geom.omega())
    }
}

/// `f(r) = r^{N-2} Lambda_1(r)`.
pub fn f_series(geom: &AnnulusGeometry, ctrl: &SeriesControl, k: usize, r: f64) -> Result<SeriesValue> {
    let rn = r.powf(geom.dim() as f64 - 2.0);
    Ok(lambda1(geom, ctrl, k, r)?.scale(rn))
}

/// `Lambda_1(r)` through the radial series.
pub fn lambda1(geom: &AnnulusGeometry, ctrl: &SeriesControl, k: usize, r: f64) -> Result<SeriesValue> {
    geom.check_interior(r, "lambda1")?;
    let expansion = RadialExpansion::new(geom, ctrl, k)?;
    lambda1_with(&expansion, ctrl, r)
}

pub(crate) fn lambda1_with(expansion: &RadialExpansion, ctrl: &SeriesControl, r: f64) -> Result<SeriesValue> {
    expansion.geom.check_interior(r, "lambda1")?;
    let singular = expansion.singular(r);
    Ok(expansion.interaction(ctrl, r)?.map(|v| v + singular))
}

/// `Lambda_1(r)` as the least eigenvalue of the assembled circulant matrix.
pub fn lambda1_matrix(geom: &AnnulusGeometry, ctrl: &SeriesControl, k: usize, r: f64) -> Result<f64> {
    let cfg = SymmetricConfig::new(k, r)?;
    let row = build_row(geom, ctrl, &cfg)?;
    Ok(eigenvalues(&row)?.lambdas[0])
}

/// `Lambda(r) = k Lambda_1(r)`, the sum over all peaks.
pub fn lambda_total(geom: &AnnulusGeometry, ctrl: &SeriesControl, k: usize, r: f64) -> Result<SeriesValue> {
    Ok(lambda1(geom, ctrl, k, r)?.scale(k as f64))
}
