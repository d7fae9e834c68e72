//! Discretized phase-space field with trapezoidal measure.

use crate::{Error, Result};

/// Uniform nodal grid over [q_min, q_max] × [p_min, p_max].
///
/// `values` is row-major with q as the slow index: the node (i, j) lives at
/// `values[i * np + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
    pub values: Vec<f64>,
}

/// Trapezoidal mass and first/second central moments of a grid field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMoments {
    pub mass: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub cov_qp: f64,
}

fn trapez_weight(k: usize, n: usize) -> f64 {
    if k == 0 || k == n - 1 {
        0.5
    } else {
        1.0
    }
}

impl PhaseSpaceGrid {
    pub fn new(
        q_min: f64,
        q_max: f64,
        p_min: f64,
        p_max: f64,
        nq: usize,
        np: usize,
    ) -> Result<Self> {
        if nq < 16 || np < 16 {
            return Err(Error::Grid("at least 16 nodes per axis"));
        }
        if ![q_min, q_max, p_min, p_max].iter().all(|v| v.is_finite()) {
            return Err(Error::Grid("extents must be finite"));
        }
        if q_min >= q_max || p_min >= p_max {
            return Err(Error::Grid("extents must be strictly ordered"));
        }
        Ok(PhaseSpaceGrid {
            q_min,
            q_max,
            p_min,
            p_max,
            nq,
            np,
            values: vec![0.0; nq * np],
        })
    }

    pub fn from_fn(
        q_min: f64,
        q_max: f64,
        p_min: f64,
        p_max: f64,
        nq: usize,
        np: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self> {
        let mut grid = Self::new(q_min, q_max, p_min, p_max, nq, np)?;
        grid.fill(f);
        Ok(grid)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q_at(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.dq()
    }

    pub fn p_at(&self, j: usize) -> f64 {
        self.p_min + j as f64 * self.dp()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.np + j]
    }

    pub fn fill(&mut self, f: impl Fn(f64, f64) -> f64) {
        let (nq, np) = (self.nq, self.np);
        for i in 0..nq {
            let q = self.q_at(i);
            for j in 0..np {
                self.values[i * np + j] = f(q, self.p_at(j));
            }
        }
    }

    /// Trapezoidal ∫∫ values dq dp.
    pub fn integral(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.nq {
            let wi = trapez_weight(i, self.nq);
            let mut row = 0.0;
            for j in 0..self.np {
                row += trapez_weight(j, self.np) * self.at(i, j);
            }
            sum += wi * row;
        }
        sum * self.dq() * self.dp()
    }

    /// Mass and central moments; the mass must be positive.
    pub fn moments(&self) -> Result<GridMoments> {
        let mut raw = [0.0f64; 6];
        for i in 0..self.nq {
            let wi = trapez_weight(i, self.nq);
            let q = self.q_at(i);
            for j in 0..self.np {
                let w = wi * trapez_weight(j, self.np) * self.at(i, j);
                let p = self.p_at(j);
                raw[0] += w;
                raw[1] += w * q;
                raw[2] += w * p;
                raw[3] += w * q * q;
                raw[4] += w * p * p;
                raw[5] += w * q * p;
            }
        }
        let cell = self.dq() * self.dp();
        let mass = raw[0] * cell;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::Grid("moments need positive finite mass"));
        }
        let mean_q = raw[1] / raw[0];
        let mean_p = raw[2] / raw[0];
        Ok(GridMoments {
            mass,
            mean_q,
            mean_p,
            var_q: raw[3] / raw[0] - mean_q * mean_q,
            var_p: raw[4] / raw[0] - mean_p * mean_p,
            cov_qp: raw[5] / raw[0] - mean_q * mean_p,
        })
    }

    pub fn normalize(&mut self) -> Result<()> {
        let total = self.integral();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Grid("normalization needs positive finite mass"));
        }
        for v in &mut self.values {
            *v /= total;
        }
        Ok(())
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}
