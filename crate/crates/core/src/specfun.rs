//! Special functions and exact combinatorial constants.
//!
//! Everything here is a pure function of its arguments. Integer quantities
//! (binomial multiplicities, Eulerian numbers, the cosine sums over roots of
//! unity) are computed exactly; only the Gegenbauer polynomials and the sphere
//! area are floating point.

use num_rational::Ratio;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Evaluates the Gegenbauer polynomial `C_m^lambda(x)`.
///
/// Uses the ascending three-term recurrence seeded with `C_0 = 1` and
/// `C_1 = 2 lambda x`, which is forward-stable on `[-1, 1]`.
pub fn gegenbauer(m: usize, lambda: f64, x: f64) -> Result<f64> {
    check_gegenbauer_args(lambda, x)?;
    Ok(GegenbauerSeq::new_unchecked(lambda, x)
        .nth(m)
        .expect("gegenbauer sequence is infinite"))
}

fn check_gegenbauer_args(lambda: f64, x: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("gegenbauer: lambda = {lambda} must be positive")));
    }
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("gegenbauer: |x| = {} exceeds 1", x.abs())));
    }
    Ok(())
}

/// Iterator over `C_0^lambda(x), C_1^lambda(x), ...` at a fixed argument.
#[derive(Debug, Clone)]
pub struct GegenbauerSeq {
    lambda: f64,
    x: f64,
    m: usize,
    prev: f64,
    cur: f64,
}

impl GegenbauerSeq {
    pub fn new(lambda: f64, x: f64) -> Result<Self> {
        check_gegenbauer_args(lambda, x)?;
        Ok(Self::new_unchecked(lambda, x))
    }

    pub(crate) fn new_unchecked(lambda: f64, x: f64) -> Self {
        Self {
            lambda,
            x,
            m: 0,
            prev: 0.0,
            cur: 1.0,
        }
    }
}

impl Iterator for GegenbauerSeq {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let m = self.m + 1;
        let next = if m == 1 {
            2.0 * self.lambda * self.x
        } else {
            let mf = m as f64;
            (2.0 * self.x * (mf + self.lambda - 1.0) * self.cur
                - (mf + 2.0 * self.lambda - 2.0) * self.prev)
                / mf
        };
        self.prev = self.cur;
        self.cur = next;
        self.m = m;
        Some(out)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 3 {
        return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
    }
    Ok(())
}

/// Zonal harmonic of degree `m` on the unit sphere of `R^N`, as a function of
/// the cosine `c` of the angle between its two arguments.
pub fn zonal(dim: usize, m: usize, c: f64) -> Result<f64> {
    check_dim(dim)?;
    let lambda = (dim as f64 - 2.0) / 2.0;
    let poly = gegenbauer(m, lambda, c)?;
    Ok(zonal_scale(dim, m) * poly)
}

/// `c_{N,m} = (N + 2m - 2) / (N - 2)` as a float.
pub(crate) fn zonal_scale(dim: usize, m: usize) -> f64 {
    (dim as f64 + 2.0 * m as f64 - 2.0) / (dim as f64 - 2.0)
}

/// Exact binomial coefficient, reporting overflow of `u128`.
pub fn binomial(n: u64, r: u64) -> Result<u128> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 1..=r as u128 {
        let factor = (n - r) as u128 + i;
        acc = acc
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow(format!("binomial({n}, {r})")))?
            / i;
    }
    Ok(acc)
}

/// Dimension data of degree-`m` spherical harmonics in `R^N`.
///
/// `a` is the binomial count `A_{N,m} = C(N+m-3, N-3)`, `c` the rational
/// factor `(N+2m-2)/(N-2)` and `d = a * c` the dimension of the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityTriple {
    pub a: u128,
    pub c: Ratio<u128>,
    pub d: u128,
}

pub fn multiplicities(dim: usize, m: usize) -> Result<MultiplicityTriple> {
    check_dim(dim)?;
    let (n, m64) = (dim as u64, m as u64);
    let a = binomial(n + m64 - 3, n - 3)?;
    let c = Ratio::new((n + 2 * m64 - 2) as u128, (n - 2) as u128);
    let d = binomial(m64 + n - 2, n - 2)?
        .checked_add(binomial(m64 + n - 3, n - 2)?)
        .ok_or_else(|| Error::Overflow(format!("d_m for N = {dim}, m = {m}")))?;
    Ok(MultiplicityTriple { a, c, d })
}

/// Yields `A_{N,0}, A_{N,1}, ...` as floats, for use inside series loops.
#[derive(Debug, Clone)]
pub(crate) struct BinomialWeights {
    shift: f64,
    m: usize,
    a: f64,
}

impl BinomialWeights {
    pub(crate) fn new(dim: usize) -> Self {
        Self {
            shift: dim as f64 - 2.0,
            m: 0,
            a: 1.0,
        }
    }
}

impl Iterator for BinomialWeights {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.a;
        let mf = self.m as f64;
        self.a *= (mf + self.shift) / (mf + 1.0);
        self.m += 1;
        Some(out)
    }
}

/// `sum_{j=1}^{k-1} cos(2 pi p j / k)`, which is `k - 1` when `k` divides `p`
/// and `-1` otherwise.
pub fn cos_sum(k: usize, p: i64) -> i64 {
    debug_assert!(k >= 2);
    if p.rem_euclid(k as i64) == 0 {
        k as i64 - 1
    } else {
        -1
    }
}

/// Row `n` of the Eulerian triangle: `A(n, 0), ..., A(n, max(n-1, 0))`.
pub fn eulerian_row(n: usize) -> Result<Vec<u128>> {
    let mut row: Vec<u128> = vec![1];
    for size in 2..=n {
        let mut next = vec![0u128; size];
        for (l, slot) in next.iter_mut().enumerate() {
            let keep = if l < row.len() {
                (l as u128 + 1).checked_mul(row[l])
            } else {
                Some(0)
            };
            let shift = if l >= 1 {
                ((size - l) as u128).checked_mul(row[l - 1])
            } else {
                Some(0)
            };
            *slot = keep
                .zip(shift)
                .and_then(|(x, y)| x.checked_add(y))
                .ok_or_else(|| Error::Overflow(format!("Eulerian row {n}")))?;
        }
        row = next;
    }
    Ok(row)
}

/// Eulerian number `A(n, l)`.
pub fn eulerian(n: usize, l: usize) -> Result<u128> {
    let max_l = n.saturating_sub(1);
    if l > max_l {
        return Err(Error::Index(format!("Eulerian A({n}, {l}): l must be at most {max_l}")));
    }
    Ok(eulerian_row(n)?[l])
}

/// Surface measure `omega_{N-1} = 2 pi^{N/2} / Gamma(N/2)` of the unit sphere in `R^N`.
pub fn sphere_area(dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::domain(format!("sphere_area: N = {dim} must be at least 2")));
    }
    // omega_{N-1} = 2 pi omega_{N-3} / (N - 2), seeded by the circle and the 2-sphere.
    let (mut n, mut area) = if dim % 2 == 0 {
        (2usize, 2.0 * PI)
    } else {
        (3usize, 4.0 * PI)
    };
    while n < dim {
        n += 2;
        area *= 2.0 * PI / (n as f64 - 2.0);
    }
    Ok(area)
}

/// `Gamma(1/2 + m) / m!` via the product `sqrt(pi) prod_{t=1}^m (t - 1/2)/t`.
pub fn half_gamma_ratio(m: usize) -> f64 {
    PI.sqrt() * central_binomial_quarter(m)
}

/// `C(2m, m) / 4^m = Gamma(1/2 + m) / (sqrt(pi) m!)`.
pub(crate) fn central_binomial_quarter(m: usize) -> f64 {
    (1..=m).fold(1.0, |acc, t| acc * (t as f64 - 0.5) / t as f64)
}

/// `(cos, sin)` of the angle `2 pi num / den`, exact at multiples of a quarter turn.
pub(crate) fn turn_cos_sin(num: usize, den: usize) -> (f64, f64) {
    let num = num % den;
    if (4 * num) % den == 0 {
        return match 4 * num / den {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * num as f64 / den as f64;
    (theta.cos(), theta.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gegenbauer_low_degrees() {
        assert_eq!(gegenbauer(0, 1.5, 0.3).unwrap(), 1.0);
        assert_eq!(gegenbauer(1, 2.0, 0.25).unwrap(), 1.0);
        // C_2^1(cos(pi/2)) = sin(3 pi/2) / sin(pi/2)
        assert!((gegenbauer(2, 1.0, 0.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn gegenbauer_domain_errors() {
        assert!(gegenbauer(3, 0.0, 0.2).is_err());
        assert!(gegenbauer(3, -1.0, 0.2).is_err());
        assert!(gegenbauer(3, 1.0, 1.0001).is_err());
        assert!(gegenbauer(3, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn chebyshev_second_kind_route() {
        for i in 1..200 {
            let t = PI * i as f64 / 200.0;
            let seq: Vec<f64> = GegenbauerSeq::new(1.0, t.cos()).unwrap().take(61).collect();
            for (m, value) in seq.iter().enumerate() {
                let expected = ((m as f64 + 1.0) * t).sin() / t.sin();
                assert!((value - expected).abs() < 1e-10, "m={m} t={t}");
            }
            for m in 2..=60 {
                let rhs = 2.0 * (m as f64 * t).cos() + seq[m - 2];
                assert!((seq[m] - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cross_dimension_identity() {
        for lambda in [1.5, 2.0, 2.5, 3.0] {
            for i in 0..=40 {
                let x = -1.0 + 2.0 * i as f64 / 40.0;
                let upper: Vec<f64> = GegenbauerSeq::new(lambda, x).unwrap().take(42).collect();
                let lower: Vec<f64> =
                    GegenbauerSeq::new(lambda - 1.0, x).unwrap().take(42).collect();
                for m in 1..=40 {
                    let lhs = (m as f64 + lambda) * lower[m + 1];
                    let rhs = (lambda - 1.0) * (upper[m + 1] - upper[m - 1]);
                    assert!(
                        (lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()),
                        "lambda={lambda} m={m} x={x}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn legendre_normalization() {
        for (m, v) in GegenbauerSeq::new(0.5, 1.0).unwrap().take(61).enumerate() {
            assert!((v - 1.0).abs() < 1e-12, "P_{m}(1) = {v}");
        }
    }

    #[test]
    fn half_gamma_ratio_lower_bound() {
        assert!((half_gamma_ratio(0) - PI.sqrt()).abs() < 1e-15);
        assert!((half_gamma_ratio(1) - PI.sqrt() / 2.0).abs() < 1e-15);
        for m in 1..=100 {
            let bound = PI.sqrt() / (2.0 * (m as f64).sqrt());
            assert!(half_gamma_ratio(m) >= bound, "m = {m}");
        }
    }

    #[test]
    fn zonal_examples() {
        for dim in 3..=8 {
            for m in 0..=12 {
                let d = multiplicities(dim, m).unwrap().d as f64;
                assert!((zonal(dim, m, 1.0).unwrap() - d).abs() < 1e-9 * d);
            }
        }
        assert_eq!(zonal(3, 1, 0.0).unwrap(), 0.0);
        assert!((zonal(4, 2, 1.0).unwrap() - 9.0).abs() < 1e-12);
        assert!(zonal(2, 1, 0.0).is_err());
        assert!(zonal(3, 1, 1.5).is_err());
    }

    #[test]
    fn zonal_bounded_by_dimension() {
        for dim in 3..=7 {
            for m in 0..=30 {
                let d = multiplicities(dim, m).unwrap().d as f64;
                for i in 0..=100 {
                    let c = -1.0 + 2.0 * i as f64 / 100.0;
                    assert!(zonal(dim, m, c).unwrap().abs() <= d * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn multiplicity_examples() {
        let t = multiplicities(3, 5).unwrap();
        assert_eq!((t.a, t.c, t.d), (1, Ratio::from_integer(11), 11));
        let t = multiplicities(4, 3).unwrap();
        assert_eq!((t.a, t.c, t.d), (4, Ratio::from_integer(4), 16));
        let t = multiplicities(5, 0).unwrap();
        assert_eq!((t.a, t.c, t.d), (1, Ratio::from_integer(1), 1));
        assert!(multiplicities(2, 0).is_err());
    }

    #[test]
    fn multiplicities_at_the_required_range() {
        for dim in 3..=12 {
            let t = multiplicities(dim, 10_000).unwrap();
            assert_eq!(Ratio::from_integer(t.a) * t.c, Ratio::from_integer(t.d));
        }
    }

    #[test]
    fn binomial_overflow_is_reported() {
        assert!(matches!(binomial(400, 200), Err(Error::Overflow(_))));
        assert_eq!(binomial(5, 7).unwrap(), 0);
        assert_eq!(binomial(10, 3).unwrap(), 120);
    }

    #[test]
    fn binomial_weights_match_exact() {
        for dim in 3..=9 {
            let w: Vec<f64> = BinomialWeights::new(dim).take(60).collect();
            for (m, wm) in w.iter().enumerate() {
                let exact = multiplicities(dim, m).unwrap().a as f64;
                assert!((wm - exact).abs() <= 1e-12 * exact);
            }
        }
    }

    #[test]
    fn binomial_count_bound() {
        for dim in 3..=8u64 {
            let e = (dim - 3) as u32;
            let fact: u128 = (1..=(dim - 3) as u128).product();
            for m in 1..=200u128 {
                let a = multiplicities(dim as usize, m as usize).unwrap().a;
                // A (N-3)! <= m^{N-3} (N-2)^{N-3}, exactly in integers
                let lhs = a * fact;
                let rhs = m.pow(e) * ((dim - 2) as u128).pow(e);
                assert!(lhs <= rhs, "N={dim} m={m}");
            }
        }
    }

    #[test]
    fn cos_sum_examples() {
        assert_eq!(cos_sum(3, 3), 2);
        assert_eq!(cos_sum(3, 1), -1);
        assert_eq!(cos_sum(5, 0), 4);
        assert_eq!(cos_sum(4, -8), 3);
    }

    #[test]
    fn eulerian_rows() {
        assert_eq!(eulerian(1, 0).unwrap(), 1);
        assert_eq!(eulerian_row(2).unwrap(), vec![1, 1]);
        assert_eq!(eulerian_row(3).unwrap(), vec![1, 4, 1]);
        assert_eq!(eulerian_row(0).unwrap(), vec![1]);
        assert!(matches!(eulerian(3, 3), Err(Error::Index(_))));
        for n in 1..=20usize {
            let total: u128 = eulerian_row(n).unwrap().iter().sum();
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(total, fact, "row {n}");
        }
    }

    #[test]
    fn eulerian_power_series() {
        // sum_m m^n x^m = x A_n(x) / (1 - x)^{n+1}
        let x: f64 = 0.3;
        for n in 1..=8usize {
            let direct: f64 = (0..400).map(|m| (m as f64).powi(n as i32) * x.powi(m)).sum();
            let row = eulerian_row(n).unwrap();
            let numer: f64 = row
                .iter()
                .enumerate()
                .map(|(l, &a)| a as f64 * x.powi(l as i32 + 1))
                .sum();
            let closed = numer / (1.0 - x).powi(n as i32 + 1);
            assert!((direct - closed).abs() < 1e-10 * closed);
        }
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4).unwrap() - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(5).unwrap() - 8.0 * PI * PI / 3.0).abs() < 1e-13);
        assert!(sphere_area(1).is_err());
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(turn_cos_sin(1, 4), (0.0, 1.0));
        assert_eq!(turn_cos_sin(2, 4), (-1.0, 0.0));
        assert_eq!(turn_cos_sin(3, 6), (-1.0, 0.0));
        assert_eq!(turn_cos_sin(0, 7), (1.0, 0.0));
    }

    proptest! {
        #[test]
        fn gegenbauer_parity(m in 0usize..50, lambda in 0.25f64..6.0, x in -1.0f64..=1.0) {
            let a = gegenbauer(m, lambda, x).unwrap();
            let b = gegenbauer(m, lambda, -x).unwrap();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(a, sign * b);
        }

        #[test]
        fn multiplicity_invariants(dim in 3usize..=12, m in 0usize..2000) {
            let t = multiplicities(dim, m).unwrap();
            prop_assert_eq!(Ratio::from_integer(t.a) * t.c, Ratio::from_integer(t.d));
            if m == 0 {
                prop_assert_eq!((t.a, t.d), (1, 1));
            }
        }

        #[test]
        fn cos_sum_matches_float(k in 2usize..16, p in 0i64..100) {
            let float: f64 = (1..k)
                .map(|j| (2.0 * PI * p as f64 * j as f64 / k as f64).cos())
                .sum();
            prop_assert!((float - cos_sum(k, p) as f64).abs() < 1e-9);
        }
    }
}
