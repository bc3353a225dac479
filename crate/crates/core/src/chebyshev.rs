//! Chebyshev-Lobatto grids on `[0, r_max]`: barycentric interpolation,
//! collocation differentiation and Clenshaw-Curtis quadrature.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, sin};
use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Chebyshev-Lobatto nodes `r_k = r_max (1 - cos(pi k / K)) / 2`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r_max: f64,
    k_max: usize,
    nodes: Vec<f64>,
    bary_weights: Vec<f64>,
    quad_weights: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_max: f64, k_max: usize) -> Result<Self> {
        if !(r_max > 0.0 && r_max.is_finite()) {
            return Err(Error::domain(format!("r_max must be positive, got {r_max}")));
        }
        if k_max < 2 {
            return Err(Error::domain(format!("k_max must be at least 2, got {k_max}")));
        }
        let kf = k_max as f64;
        let lower = |k: usize| {
            let s = sin(0.5 * PI * k as f64 / kf);
            r_max * s * s
        };
        // mirror the upper half so the grid is symmetric about r_max / 2
        let nodes = (0..=k_max)
            .map(|k| match k {
                0 => 0.0,
                k if k == k_max => r_max,
                k if 2 * k == k_max => 0.5 * r_max,
                k if 2 * k < k_max => lower(k),
                k => r_max - lower(k_max - k),
            })
            .collect();
        let bary_weights = (0..=k_max)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                if k == 0 || k == k_max {
                    0.5 * sign
                } else {
                    sign
                }
            })
            .collect();
        let quad_weights = clenshaw_curtis(k_max).into_iter().map(|w| 0.5 * r_max * w).collect();
        Ok(Self {
            r_max,
            k_max,
            nodes,
            bary_weights,
            quad_weights,
        })
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn bary_weights(&self) -> &[f64] {
        &self.bary_weights
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    /// `r_i - r_j` without cancellation, from the product form of the cosine difference.
    fn node_difference(&self, i: usize, j: usize) -> f64 {
        let h = PI / self.k_max as f64;
        let (ti, tj) = (i as f64 * h, j as f64 * h);
        self.r_max * sin(0.5 * (ti + tj)) * sin(0.5 * (ti - tj))
    }

    /// First-derivative collocation matrix `D1`, `(K+1) x (K+1)`.
    ///
    /// Off-diagonal entries are `(w_j / w_i) / (r_i - r_j)`; each diagonal
    /// entry is the negated sum of its row.
    pub fn diff_matrix(&self) -> DMatrix<f64> {
        let n = self.k_max + 1;
        let w = &self.bary_weights;
        let mut d = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                if i != j {
                    let v = (w[j] / w[i]) / self.node_difference(i, j);
                    d[(i, j)] = v;
                    row_sum += v;
                }
            }
            d[(i, i)] = -row_sum;
        }
        d
    }

    /// `D2 = D1 * D1`.
    pub fn second_diff_matrix(&self) -> DMatrix<f64> {
        let d = self.diff_matrix();
        &d * &d
    }

    /// Barycentric interpolant through `values` at `r`.
    pub fn interpolate(&self, values: &[f64], r: f64) -> Result<f64> {
        if values.len() != self.nodes.len() {
            return Err(Error::domain(format!(
                "expected {} nodal values, got {}",
                self.nodes.len(),
                values.len()
            )));
        }
        if !(0.0..=self.r_max).contains(&r) {
            return Err(Error::domain(format!("r = {r} outside [0, {}]", self.r_max)));
        }
        Ok(self.interpolate_unchecked(values, r))
    }

    pub(crate) fn interpolate_unchecked(&self, values: &[f64], r: f64) -> f64 {
        let guard = 1e-14 * self.r_max;
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&rk, &wk), &fk) in self.nodes.iter().zip(&self.bary_weights).zip(values) {
            let dr = r - rk;
            if dr.abs() < guard {
                return fk;
            }
            let t = wk / dr;
            num += t * fk;
            den += t;
        }
        num / den
    }

    /// Clenshaw-Curtis approximation of `\int_0^{r_max} f dr` from nodal values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.quad_weights.iter().zip(values).map(|(w, f)| w * f).sum()
    }
}

/// Clenshaw-Curtis weights on `[-1, 1]` for `K + 1` Lobatto points.
fn clenshaw_curtis(k_max: usize) -> Vec<f64> {
    let n = k_max;
    let nf = n as f64;
    let mut w = alloc::vec![0.0; n + 1];
    let half = n / 2;
    if n % 2 == 0 {
        w[0] = 1.0 / (nf * nf - 1.0);
    } else {
        w[0] = 1.0 / (nf * nf);
    }
    w[n] = w[0];
    for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
        let theta = PI * i as f64 / nf;
        let mut v = 1.0;
        let kmax = if n % 2 == 0 { half - 1 } else { half };
        for k in 1..=kmax {
            let kf = k as f64;
            v -= 2.0 * cos(2.0 * kf * theta) / (4.0 * kf * kf - 1.0);
        }
        if n % 2 == 0 {
            v -= cos(nf * theta) / (nf * nf - 1.0);
        }
        *wi = 2.0 * v / nf;
    }
    w
}

/// Nodal values on a grid; evaluation by the barycentric formula.
#[derive(Debug, Clone)]
pub struct Interpolant<'g> {
    grid: &'g RadialGrid,
    values: Vec<f64>,
}

impl<'g> Interpolant<'g> {
    pub fn new(grid: &'g RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes.len() {
            return Err(Error::domain(format!(
                "expected {} nodal values, got {}",
                grid.nodes.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F: FnMut(f64) -> f64>(grid: &'g RadialGrid, f: F) -> Self {
        let values = grid.nodes.iter().copied().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &'g RadialGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        self.grid.interpolate(&self.values, r)
    }
}

pub fn build_grid(r_max: f64, k_max: usize) -> Result<RadialGrid> {
    RadialGrid::new(r_max, k_max)
}

pub fn interpolate(f: &Interpolant<'_>, r: f64) -> Result<f64> {
    f.eval(r)
}

pub fn diff_matrix(grid: &RadialGrid) -> DMatrix<f64> {
    grid.diff_matrix()
}

pub fn quad_integrate(f: &Interpolant<'_>) -> f64 {
    f.grid.integrate(&f.values)
}
