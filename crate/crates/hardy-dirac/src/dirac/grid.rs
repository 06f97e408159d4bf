use ndarray::{ArrayD, IxDyn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform periodic grid on `[-R, R]^n`.
///
/// Grid point `i` along an axis sits at `-R + i * (2R / N)`; the right
/// endpoint is identified with the left one. Test functions are supported in
/// an annulus strictly inside the box, so the periodic identification never
/// touches them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub points_per_axis: usize,
    pub halfwidth: f64,
}

impl GridSpec {
    /// `n >= 1`, an even `points_per_axis >= 16`, and a positive halfwidth.
    pub fn new(n: usize, points_per_axis: usize, halfwidth: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        if points_per_axis < 16 || points_per_axis % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis must be even and >= 16, got {points_per_axis}"
            )));
        }
        if !(halfwidth > 0.0 && halfwidth.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "halfwidth must be positive, got {halfwidth}"
            )));
        }
        Ok(GridSpec {
            n,
            points_per_axis,
            halfwidth,
        })
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.points_per_axis; self.n]
    }

    pub fn num_points(&self) -> usize {
        self.points_per_axis.pow(self.n as u32)
    }

    /// Grid spacing `2R / N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.halfwidth / self.points_per_axis as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    /// Coordinate of index `i` along any axis.
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.halfwidth + i as f64 * self.spacing()
    }

    pub fn coords_1d(&self) -> Vec<f64> {
        (0..self.points_per_axis).map(|i| self.coordinate(i)).collect()
    }

    /// Fourier wavenumbers in standard FFT order; the unmatched Nyquist mode
    /// is dropped from odd-order derivatives.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.points_per_axis;
        let base = std::f64::consts::PI / self.halfwidth;
        (0..n)
            .map(|i| {
                if i < n / 2 {
                    base * i as f64
                } else if i == n / 2 {
                    0.0
                } else {
                    base * (i as f64 - n as f64)
                }
            })
            .collect()
    }

    /// `|x|` at every grid point.
    pub fn radius_array(&self) -> ArrayD<f64> {
        let coords = self.coords_1d();
        ArrayD::from_shape_fn(IxDyn(&self.shape()), |idx| {
            (0..self.n)
                .map(|d| coords[idx[d]] * coords[idx[d]])
                .sum::<f64>()
                .sqrt()
        })
    }

    /// The coordinate `x_axis` at every grid point.
    pub fn coord_array(&self, axis: usize) -> ArrayD<f64> {
        let coords = self.coords_1d();
        ArrayD::from_shape_fn(IxDyn(&self.shape()), |idx| coords[idx[axis]])
    }

    /// Largest resolved wavenumber magnitude (just below Nyquist).
    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI / self.halfwidth * (self.points_per_axis as f64 / 2.0 - 1.0)
    }
}
