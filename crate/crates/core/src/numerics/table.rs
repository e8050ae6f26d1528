//! Cubic Hermite interpolation of positive functions on a log-log grid.

use alloc::vec::Vec;

use crate::math::{exp, log};

/// Tabulates `ln y` against `ln x` on a uniform grid together with the
/// log-log slope `x y'(x) / y(x)`, and interpolates with cubic Hermite
/// polynomials. Positive, power-law-like functions are reproduced to high
/// relative accuracy with modest node counts.
#[derive(Debug, Clone, PartialEq)]
pub struct LogHermiteTable {
    ln_x0: f64,
    step: f64,
    ln_y: Vec<f64>,
    slope: Vec<f64>,
}

impl LogHermiteTable {
    /// Samples `sample(x) -> (y, dy/dx)` at `x_min · e^{i·step}` up to `x_max`.
    /// Every `y` must be strictly positive.
    pub fn build<E>(
        x_min: f64,
        x_max: f64,
        max_step: f64,
        mut sample: impl FnMut(f64) -> Result<(f64, f64), E>,
    ) -> Result<Self, E> {
        assert!(x_min > 0.0 && x_max > x_min && max_step > 0.0);
        let ln_x0 = log(x_min);
        let span = log(x_max) - ln_x0;
        let intervals = libm::ceil(span / max_step).max(1.0) as usize;
        let step = span / intervals as f64;
        let mut ln_y = Vec::with_capacity(intervals + 1);
        let mut slope = Vec::with_capacity(intervals + 1);
        for i in 0..=intervals {
            let x = exp(ln_x0 + step * i as f64);
            let (y, dy) = sample(x)?;
            assert!(
                y > 0.0 && y.is_finite(),
                "tabulated value must be positive, got {y} at {x}"
            );
            ln_y.push(log(y));
            slope.push(x * dy / y);
        }
        Ok(Self {
            ln_x0,
            step,
            ln_y,
            slope,
        })
    }

    pub fn x_min(&self) -> f64 {
        exp(self.ln_x0)
    }

    pub fn x_max(&self) -> f64 {
        exp(self.ln_x_max())
    }

    fn ln_x_max(&self) -> f64 {
        self.ln_x0 + self.step * (self.ln_y.len() - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.ln_y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_y.is_empty()
    }

    /// First and last `(ln y, slope)` pairs, for extrapolation by the caller.
    pub fn left_end(&self) -> (f64, f64) {
        (self.ln_y[0], self.slope[0])
    }

    pub fn right_end(&self) -> (f64, f64) {
        let n = self.ln_y.len() - 1;
        (self.ln_y[n], self.slope[n])
    }

    /// `ln y` at `ln x`; outside the grid the end slope is continued linearly
    /// (power-law extrapolation).
    pub fn ln_eval(&self, ln_x: f64) -> f64 {
        let n = self.ln_y.len() - 1;
        let u = (ln_x - self.ln_x0) / self.step;
        if u <= 0.0 {
            return self.ln_y[0] + self.slope[0] * (ln_x - self.ln_x0);
        }
        if u >= n as f64 {
            return self.ln_y[n] + self.slope[n] * (ln_x - self.ln_x_max());
        }
        let i = (u as usize).min(n - 1);
        let t = u - i as f64;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ln_y[i]
            + h10 * self.step * self.slope[i]
            + h01 * self.ln_y[i + 1]
            + h11 * self.step * self.slope[i + 1]
    }

    /// `y(x)` for `x > 0`.
    pub fn eval(&self, x: f64) -> f64 {
        exp(self.ln_eval(log(x)))
    }
}
