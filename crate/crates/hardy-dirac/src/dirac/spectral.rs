//! FFT plumbing: in-place transforms along axes of dynamic-dimension arrays
//! and Fourier-multiplier application.

use std::cell::RefCell;
use std::sync::Arc;

use ndarray::{ArrayD, Axis};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::GridSpec;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(len)
        } else {
            p.plan_fft_inverse(len)
        }
    })
}

/// Unnormalized transform of every lane along `axis`.
pub fn fft_axis(arr: &mut ArrayD<Complex64>, axis: usize, forward: bool) {
    let len = arr.shape()[axis];
    let fft = plan(len, forward);
    let mut buf = vec![Complex64::default(); len];
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for mut lane in arr.lanes_mut(Axis(axis)) {
        for (b, v) in buf.iter_mut().zip(lane.iter()) {
            *b = *v;
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        for (v, b) in lane.iter_mut().zip(buf.iter()) {
            *v = *b;
        }
    }
}

/// Forward transform over all axes (unnormalized).
pub fn fftn(arr: &mut ArrayD<Complex64>) {
    for axis in 0..arr.ndim() {
        fft_axis(arr, axis, true);
    }
}

/// Inverse transform over all axes, normalized so `ifftn(fftn(u)) = u`.
pub fn ifftn(arr: &mut ArrayD<Complex64>) {
    let total: usize = arr.shape().iter().product();
    for axis in 0..arr.ndim() {
        fft_axis(arr, axis, false);
    }
    let scale = Complex64::new(1.0 / total as f64, 0.0);
    arr.mapv_inplace(|z| z * scale);
}

/// Multiply every lane along `axis` elementwise by `factors`.
pub fn scale_lanes(arr: &mut ArrayD<Complex64>, axis: usize, factors: &[f64]) {
    for mut lane in arr.lanes_mut(Axis(axis)) {
        for (v, &f) in lane.iter_mut().zip(factors) {
            *v *= f;
        }
    }
}

/// Spectral partial derivative along `axis` of grid-sampled data.
pub fn derivative_axis(
    arr: &ArrayD<Complex64>,
    axis: usize,
    grid: &GridSpec,
) -> ArrayD<Complex64> {
    let mut hat = arr.clone();
    fft_axis(&mut hat, axis, true);
    let ik: Vec<Complex64> = grid
        .wavenumbers()
        .iter()
        .map(|&k| Complex64::new(0.0, k))
        .collect();
    for mut lane in hat.lanes_mut(Axis(axis)) {
        for (v, f) in lane.iter_mut().zip(&ik) {
            *v *= f;
        }
    }
    fft_axis(&mut hat, axis, false);
    let scale = Complex64::new(1.0 / grid.points_per_axis as f64, 0.0);
    hat.mapv_inplace(|z| z * scale);
    hat
}

/// Fraction of spectral energy carried by the top decade of wavenumbers
/// (any axis index within the highest 10% below Nyquist).
pub fn tail_energy_fraction(arr: &ArrayD<Complex64>) -> f64 {
    let mut hat = arr.clone();
    fftn(&mut hat);
    let shape: Vec<usize> = hat.shape().to_vec();
    let mut total = 0.0;
    let mut tail = 0.0;
    for (idx, z) in hat.indexed_iter() {
        let e = z.norm_sqr();
        total += e;
        let mut in_tail = false;
        for d in 0..shape.len() {
            let n = shape[d];
            let f = if idx[d] <= n / 2 { idx[d] } else { n - idx[d] };
            if f as f64 >= 0.9 * (n as f64 / 2.0) {
                in_tail = true;
            }
        }
        if in_tail {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::IxDyn;

    #[test]
    fn roundtrip_identity() {
        let g = GridSpec::new(2, 16, 1.5).unwrap();
        let mut arr = ArrayD::from_shape_fn(IxDyn(&g.shape()), |idx| {
            Complex64::new((idx[0] * 3 + idx[1]) as f64, idx[1] as f64 * 0.5)
        });
        let orig = arr.clone();
        fftn(&mut arr);
        ifftn(&mut arr);
        let err = (&arr - &orig).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn derivative_of_resolved_mode_is_exact() {
        let g = GridSpec::new(1, 32, 2.0).unwrap();
        let k = 3.0 * std::f64::consts::PI / g.halfwidth;
        let arr = ArrayD::from_shape_fn(IxDyn(&g.shape()), |idx| {
            Complex64::new(0.0, k * g.coordinate(idx[0])).exp()
        });
        let d = derivative_axis(&arr, 0, &g);
        let err = d
            .iter()
            .zip(arr.iter())
            .map(|(du, u)| (du - Complex64::new(0.0, k) * u).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn tail_fraction_detects_rough_data() {
        let g = GridSpec::new(1, 64, 1.0).unwrap();
        let smooth = ArrayD::from_shape_fn(IxDyn(&g.shape()), |idx| {
            Complex64::new((std::f64::consts::PI * g.coordinate(idx[0])).cos(), 0.0)
        });
        assert!(tail_energy_fraction(&smooth) < 1e-20);
        let rough = ArrayD::from_shape_fn(IxDyn(&g.shape()), |idx| {
            Complex64::new(if idx[0] % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        });
        assert!(tail_energy_fraction(&rough) > 0.5);
    }
}
