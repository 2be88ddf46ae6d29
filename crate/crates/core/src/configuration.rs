//! Symmetric `k`-point configurations on a circle of radius `r` in the
//! `(x1, x2)`-plane, and the trigonometric constant they induce.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::green::Point;
use crate::series::CompensatedSum;
use crate::specfun::turn_cos_sin;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricConfig {
    k: usize,
    r: f64,
}

impl SymmetricConfig {
    pub fn new(k: usize, r: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::domain(format!("k = {k} must be at least 2")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("radius r = {r} must be positive")));
        }
        Ok(Self { k, r })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The points `xi_j = r (cos 2 pi (j-1)/k, sin 2 pi (j-1)/k, 0, ..., 0)`.
    pub fn points(&self, dim: usize) -> Result<Vec<Point>> {
        if dim < 3 {
            return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
        }
        Ok((0..self.k)
            .map(|j| {
                let (c, s) = turn_cos_sin(j, self.k);
                let mut coords = vec![0.0; dim];
                coords[0] = self.r * c;
                coords[1] = self.r * s;
                Point::new(coords)
            })
            .collect())
    }

    /// Distance `|xi_1 - xi_{j+1}| = 2 r sin(pi j / k)`.
    pub fn chord(&self, j: usize) -> Result<f64> {
        if j == 0 || j >= self.k {
            return Err(Error::Index(format!("chord index {j} outside 1..={}", self.k - 1)));
        }
        Ok(2.0 * self.r * chord_sin(j, self.k))
    }
}

/// `sin(pi j / k)`, folded so that the symmetric pair `j, k - j` agree bit for bit.
fn chord_sin(j: usize, k: usize) -> f64 {
    let j = j.min(k - j);
    if 2 * j == k {
        1.0
    } else {
        (PI * j as f64 / k as f64).sin()
    }
}

/// `sum_{j=1}^{k-1} (2 sin(pi j / k))^{-(N-2)}`.
pub fn frak_c(k: usize, dim: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("k = {k} must be at least 2")));
    }
    if dim < 3 {
        return Err(Error::domain(format!("dimension N = {dim} must be at least 3")));
    }
    let power = dim as i32 - 2;
    // smallest terms sit at j near k/2; walk outwards from there
    let mut order: Vec<usize> = (1..k).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(j.min(k - j)));
    let mut acc = CompensatedSum::default();
    for j in order {
        acc.add((2.0 * chord_sin(j, k)).powi(-power));
    }
    Ok(acc.value())
}
