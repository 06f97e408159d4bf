use std::io::Write;
use std::ops::{Add, Mul, Sub};

use ndarray::{ArrayD, IxDyn, Zip};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::GridSpec;
use super::spectral;
use crate::error::{Error, Result};
use crate::rng::gaussian;
use crate::weights::RadialWeight;

/// An `m`-component complex field sampled on a uniform periodic grid.
///
/// `support_annulus` records that the field vanishes outside
/// `r_min <= |x| <= r_max`; constructors set it exactly, operators preserve it
/// up to spectral residue (`<= 1e-14` in magnitude). Weighted norms quadrate
/// over the declared support, which keeps weights singular at the origin (or
/// growing at infinity) out of the sum.
#[derive(Debug, Clone)]
pub struct SpinorField {
    grid: GridSpec,
    comps: Vec<ArrayD<Complex64>>,
    support_annulus: Option<(f64, f64)>,
}

impl SpinorField {
    pub fn zeros(grid: GridSpec, m: usize) -> Self {
        let comps = (0..m)
            .map(|_| ArrayD::zeros(IxDyn(&grid.shape())))
            .collect();
        SpinorField {
            grid,
            comps,
            support_annulus: None,
        }
    }

    /// Sample `f(x) -> (m components)` at every grid point.
    pub fn from_fn(
        grid: GridSpec,
        m: usize,
        mut f: impl FnMut(&[f64]) -> Vec<Complex64>,
    ) -> Self {
        let coords = grid.coords_1d();
        let mut field = SpinorField::zeros(grid, m);
        let mut x = vec![0.0; grid.n];
        let shape = grid.shape();
        for flat in 0..grid.num_points() {
            let idx = unflatten(flat, &shape);
            for d in 0..grid.n {
                x[d] = coords[idx[d]];
            }
            let vals = f(&x);
            debug_assert_eq!(vals.len(), m);
            for (c, v) in vals.into_iter().enumerate() {
                field.comps[c][IxDyn(&idx)] = v;
            }
        }
        field
    }

    pub fn from_components(grid: GridSpec, comps: Vec<ArrayD<Complex64>>) -> Self {
        SpinorField {
            grid,
            comps,
            support_annulus: None,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn spinor_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, c: usize) -> &ArrayD<Complex64> {
        &self.comps[c]
    }

    pub fn components(&self) -> &[ArrayD<Complex64>] {
        &self.comps
    }

    pub fn components_mut(&mut self) -> &mut [ArrayD<Complex64>] {
        &mut self.comps
    }

    pub fn support_annulus(&self) -> Option<(f64, f64)> {
        self.support_annulus
    }

    /// Declare the support annulus, validating the vanishing invariant
    /// (`<= 1e-14` in magnitude outside) and `r_max < R`.
    pub fn with_annulus(mut self, r_min: f64, r_max: f64) -> Result<Self> {
        check_annulus(&self.grid, r_min, r_max)?;
        let radius = self.grid.radius_array();
        for comp in &self.comps {
            for (z, &r) in comp.iter().zip(radius.iter()) {
                if (r < r_min || r > r_max) && z.norm() > 1e-14 {
                    return Err(Error::InvalidParameter(format!(
                        "field does not vanish outside the annulus: |u| = {:.3e} at r = {r}",
                        z.norm()
                    )));
                }
            }
        }
        self.support_annulus = Some((r_min, r_max));
        Ok(self)
    }

    /// Propagate support metadata from another field (operators keep the
    /// support of their input).
    pub(crate) fn inherit_annulus(mut self, other: &SpinorField) -> Self {
        self.support_annulus = other.support_annulus;
        self
    }

    /// `sum_x |u(x)|^2 dV` over the whole grid.
    pub fn l2_norm_sq(&self) -> f64 {
        let dv = self.grid.cell_volume();
        self.comps
            .iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            * dv
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `<u, v> = sum_x conj(u) . v dV`.
    pub fn inner(&self, other: &SpinorField) -> Complex64 {
        let dv = self.grid.cell_volume();
        let mut acc = Complex64::default();
        for (a, b) in self.comps.iter().zip(&other.comps) {
            for (za, zb) in a.iter().zip(b.iter()) {
                acc += za.conj() * zb;
            }
        }
        acc * dv
    }

    /// Quadrature of `|w(|x|) u(x)|^2` over the declared support annulus
    /// (over all points with `|x| > 0` and `|u| > 0` when no annulus is set).
    pub fn weighted_norm_sq(&self, w: &RadialWeight) -> Result<f64> {
        let radius = self.grid.radius_array();
        let dv = self.grid.cell_volume();
        let mask = self.support_annulus;
        let mut acc = 0.0;
        for (flat, &r) in radius.iter().enumerate() {
            let dens: f64 = self
                .comps
                .iter()
                .map(|c| c.as_slice().expect("standard layout")[flat].norm_sqr())
                .sum();
            if let Some((lo, hi)) = mask {
                if r < lo || r > hi {
                    continue;
                }
            } else if dens == 0.0 {
                continue;
            }
            let wv = w.eval(r);
            if !(wv > 0.0 && wv.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    label: w.label().to_string(),
                    r,
                    value: wv,
                });
            }
            acc += wv * wv * dens;
        }
        Ok(acc * dv)
    }

    /// Largest `|u|` at grid points outside the declared annulus.
    pub fn max_abs_outside_annulus(&self) -> f64 {
        let Some((lo, hi)) = self.support_annulus else {
            return 0.0;
        };
        let radius = self.grid.radius_array();
        let mut worst = 0.0f64;
        for comp in &self.comps {
            for (z, &r) in comp.iter().zip(radius.iter()) {
                if r < lo || r > hi {
                    worst = worst.max(z.norm());
                }
            }
        }
        worst
    }

    /// Pointwise multiplication by a complex scalar field.
    pub fn scale_by_field(&self, factor: &ArrayD<Complex64>) -> SpinorField {
        let comps = self.comps.iter().map(|c| c * factor).collect();
        SpinorField {
            grid: self.grid,
            comps,
            support_annulus: self.support_annulus,
        }
    }

    /// Fraction of spectral energy in the top wavenumber band, summed over
    /// components.
    pub fn spectral_tail_fraction(&self) -> f64 {
        self.comps
            .iter()
            .map(spectral::tail_energy_fraction)
            .fold(0.0, f64::max)
    }

    /// Write the field as CSV: a `#` metadata header, then one row per grid
    /// point with coordinates and `re,im` per spinor component.
    pub fn export_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        let g = &self.grid;
        write!(
            out,
            "# n={} points_per_axis={} halfwidth={} m={}",
            g.n,
            g.points_per_axis,
            g.halfwidth,
            self.spinor_dim()
        )?;
        match self.support_annulus {
            Some((lo, hi)) => writeln!(out, " annulus={lo},{hi}")?,
            None => writeln!(out)?,
        }
        for d in 0..g.n {
            write!(out, "x{d},")?;
        }
        let m = self.spinor_dim();
        for c in 0..m {
            write!(out, "re{c},im{c}{}", if c + 1 == m { "\n" } else { "," })?;
        }
        let coords = g.coords_1d();
        let shape = g.shape();
        for flat in 0..g.num_points() {
            let idx = unflatten(flat, &shape);
            for d in 0..g.n {
                write!(out, "{},", coords[idx[d]])?;
            }
            for c in 0..m {
                let z = self.comps[c].as_slice().expect("standard layout")[flat];
                write!(out, "{},{}{}", z.re, z.im, if c + 1 == m { "\n" } else { "," })?;
            }
        }
        Ok(())
    }
}

impl Add for &SpinorField {
    type Output = SpinorField;
    fn add(self, rhs: &SpinorField) -> SpinorField {
        let comps = self
            .comps
            .iter()
            .zip(&rhs.comps)
            .map(|(a, b)| a + b)
            .collect();
        SpinorField {
            grid: self.grid,
            comps,
            support_annulus: self.support_annulus,
        }
    }
}

impl Sub for &SpinorField {
    type Output = SpinorField;
    fn sub(self, rhs: &SpinorField) -> SpinorField {
        let comps = self
            .comps
            .iter()
            .zip(&rhs.comps)
            .map(|(a, b)| a - b)
            .collect();
        SpinorField {
            grid: self.grid,
            comps,
            support_annulus: self.support_annulus,
        }
    }
}

impl Mul<Complex64> for &SpinorField {
    type Output = SpinorField;
    fn mul(self, rhs: Complex64) -> SpinorField {
        let comps = self.comps.iter().map(|c| c.mapv(|z| z * rhs)).collect();
        SpinorField {
            grid: self.grid,
            comps,
            support_annulus: self.support_annulus,
        }
    }
}

fn unflatten(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for d in (0..shape.len()).rev() {
        idx[d] = flat % shape[d];
        flat /= shape[d];
    }
    idx
}

fn check_annulus(grid: &GridSpec, r_min: f64, r_max: f64) -> Result<()> {
    if !(0.0 < r_min && r_min < r_max && r_max < grid.halfwidth) {
        return Err(Error::InvalidAnnulus {
            r_min,
            r_max,
            halfwidth: grid.halfwidth,
        });
    }
    Ok(())
}

/// The scaled bump profile: 1 at the annulus midpoint, identically zero
/// outside `(r_min, r_max)`, infinitely flat at both edges.
pub fn bump_profile(r: f64, r_min: f64, r_max: f64) -> f64 {
    if r <= r_min || r >= r_max {
        return 0.0;
    }
    let w = r_max - r_min;
    (4.0 - w * w / ((r - r_min) * (r_max - r))).exp()
}

/// A smooth spinor field supported in the annulus `r_min < |x| < r_max`:
/// the bump profile times a seeded trigonometric polynomial per component
/// (integer modes with `|k| <= 4`). Deterministic in `seed`.
pub fn make_annulus_bump(
    grid: &GridSpec,
    m: usize,
    r_min: f64,
    r_max: f64,
    seed: u64,
) -> Result<SpinorField> {
    check_annulus(grid, r_min, r_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_pts = grid.points_per_axis;
    let base = std::f64::consts::PI / grid.halfwidth;
    const MODES: usize = 6;

    // Per-axis phase tables: e^{i k x} for each chosen integer mode.
    let mut field = SpinorField::zeros(*grid, m);
    let coords = grid.coords_1d();
    let radius = grid.radius_array();
    let mut profile = radius.mapv(|r| bump_profile(r, r_min, r_max));
    let peak = profile.iter().cloned().fold(0.0f64, f64::max);
    if peak > 0.0 {
        profile.mapv_inplace(|p| p / peak);
    }

    for comp in field.comps.iter_mut() {
        let mut modulation: ArrayD<Complex64> = ArrayD::zeros(IxDyn(&grid.shape()));
        for _ in 0..MODES {
            let ks: Vec<i32> = (0..grid.n).map(|_| rng.random_range(-4..=4)).collect();
            let coeff = Complex64::new(gaussian(&mut rng), gaussian(&mut rng));
            let tables: Vec<Vec<Complex64>> = ks
                .iter()
                .map(|&k| {
                    (0..n_pts)
                        .map(|i| Complex64::new(0.0, base * k as f64 * coords[i]).exp())
                        .collect()
                })
                .collect();
            for (idx, z) in modulation.indexed_iter_mut() {
                let mut phase = coeff;
                for d in 0..grid.n {
                    phase *= tables[d][idx[d]];
                }
                *z += phase;
            }
        }
        Zip::from(comp)
            .and(&modulation)
            .and(&profile)
            .for_each(|z, &mz, &p| *z = mz * p);
    }
    field.support_annulus = Some((r_min, r_max));
    Ok(field)
}

/// Pointwise multiplication by `e^{i phi(x)}`; preserves every `L^2` norm.
pub fn gauge_transform(field: &SpinorField, phi: &ArrayD<f64>) -> SpinorField {
    let factor = phi.mapv(|p| Complex64::new(0.0, p).exp());
    field.scale_by_field(&factor)
}

/// A gradient magnetic potential `A = grad(phi)`, with the gradient taken
/// spectrally on the grid.
#[derive(Debug, Clone)]
pub struct MagneticPotential {
    grid: GridSpec,
    phi: Option<ArrayD<f64>>,
    components: Vec<ArrayD<f64>>,
}

impl MagneticPotential {
    pub fn from_phi(grid: &GridSpec, phi: ArrayD<f64>) -> Self {
        let phi_c = phi.mapv(|p| Complex64::new(p, 0.0));
        let components = (0..grid.n)
            .map(|axis| spectral::derivative_axis(&phi_c, axis, grid).mapv(|z| z.re))
            .collect();
        MagneticPotential {
            grid: *grid,
            phi: Some(phi),
            components,
        }
    }

    /// A potential given directly by its components (no gauge generator
    /// attached); callers are responsible for it being curl-free.
    pub fn from_components(grid: &GridSpec, components: Vec<ArrayD<f64>>) -> Self {
        MagneticPotential {
            grid: *grid,
            phi: None,
            components,
        }
    }

    /// Gauge generator `phi(x) = amplitude * exp(-|x - center|^2 / (2 sigma^2))`.
    /// The Gaussian must decay below roundoff at the box boundary to stay
    /// spectrally clean; keep `sigma` well under `halfwidth / 6`.
    pub fn gaussian(grid: &GridSpec, amplitude: f64, center: &[f64], sigma: f64) -> Result<Self> {
        if center.len() != grid.n {
            return Err(Error::DimensionMismatch {
                context: "gaussian center vs grid",
                expected: grid.n,
                got: center.len(),
            });
        }
        if !(sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {sigma}"
            )));
        }
        let coords = grid.coords_1d();
        let phi = ArrayD::from_shape_fn(IxDyn(&grid.shape()), |idx| {
            let d2: f64 = (0..grid.n)
                .map(|d| {
                    let dx = coords[idx[d]] - center[d];
                    dx * dx
                })
                .sum();
            amplitude * (-d2 / (2.0 * sigma * sigma)).exp()
        });
        Ok(Self::from_phi(grid, phi))
    }

    pub fn phi(&self) -> Option<&ArrayD<f64>> {
        self.phi.as_ref()
    }

    pub fn component(&self, j: usize) -> &ArrayD<f64> {
        &self.components[j]
    }

    /// Largest `|d_j A_k - d_k A_j|` over the grid; vanishes spectrally for a
    /// gradient field.
    pub fn curl_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.grid.n {
            for k in (j + 1)..self.grid.n {
                let aj = self.components[j].mapv(|v| Complex64::new(v, 0.0));
                let ak = self.components[k].mapv(|v| Complex64::new(v, 0.0));
                let djak = spectral::derivative_axis(&ak, j, &self.grid);
                let dkaj = spectral::derivative_axis(&aj, k, &self.grid);
                let defect = (&djak - &dkaj)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                worst = worst.max(defect);
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid2() -> GridSpec {
        GridSpec::new(2, 32, 3.0).unwrap()
    }

    #[test]
    fn bump_vanishes_outside_annulus_exactly() {
        let f = make_annulus_bump(&grid2(), 2, 1.0, 2.0, 7).unwrap();
        let radius = f.grid().radius_array();
        for comp in f.components() {
            for (z, &r) in comp.iter().zip(radius.iter()) {
                if r <= 1.0 || r >= 2.0 {
                    assert_eq!(z.norm(), 0.0, "nonzero at r = {r}");
                }
            }
        }
        assert_eq!(f.support_annulus(), Some((1.0, 2.0)));
    }

    #[test]
    fn bump_is_deterministic_in_seed() {
        let a = make_annulus_bump(&grid2(), 2, 1.0, 2.0, 42).unwrap();
        let b = make_annulus_bump(&grid2(), 2, 1.0, 2.0, 42).unwrap();
        for (ca, cb) in a.components().iter().zip(b.components()) {
            assert_eq!(ca, cb);
        }
        let c = make_annulus_bump(&grid2(), 2, 1.0, 2.0, 43).unwrap();
        assert!((c.component(0) - a.component(0)).iter().any(|z| z.norm() > 0.0));
    }

    #[test]
    fn profile_peaks_at_midpoint() {
        let (r_min, r_max) = (1.0, 2.0);
        let mid = 0.5 * (r_min + r_max);
        assert_relative_eq!(bump_profile(mid, r_min, r_max), 1.0, epsilon = 1e-15);
        for r in [1.1, 1.3, 1.7, 1.9] {
            assert!(bump_profile(r, r_min, r_max) < 1.0);
        }
        assert_eq!(bump_profile(1.0, r_min, r_max), 0.0);
        assert_eq!(bump_profile(2.0, r_min, r_max), 0.0);
    }

    #[test]
    fn bump_rejects_bad_annulus() {
        assert!(make_annulus_bump(&grid2(), 2, 0.0, 2.0, 1).is_err());
        assert!(make_annulus_bump(&grid2(), 2, 2.0, 1.0, 1).is_err());
        assert!(make_annulus_bump(&grid2(), 2, 1.0, 3.5, 1).is_err());
    }

    #[test]
    fn gauge_preserves_norm_and_inverts() {
        let f = make_annulus_bump(&grid2(), 2, 1.0, 2.0, 5).unwrap();
        let phi = ArrayD::from_shape_fn(IxDyn(&grid2().shape()), |idx| {
            (idx[0] as f64 * 0.1).sin() + idx[1] as f64 * 0.01
        });
        let g = gauge_transform(&f, &phi);
        assert_relative_eq!(g.l2_norm(), f.l2_norm(), epsilon = 1e-12);
        let back = gauge_transform(&g, &phi.mapv(|p| -p));
        let err = back
            .components()
            .iter()
            .zip(f.components())
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-14);
    }

    #[test]
    fn weighted_norm_of_unit_weight_is_l2() {
        let f = make_annulus_bump(&grid2(), 2, 1.0, 2.0, 9).unwrap();
        let one = RadialWeight::from_derivatives(
            "1",
            Default::default(),
            |_| 1.0,
            |_| 0.0,
            |_| 0.0,
        );
        assert_relative_eq!(
            f.weighted_norm_sq(&one).unwrap(),
            f.l2_norm_sq(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn weighted_norm_monotone_bounds() {
        // For w = r^(tau/2) on an annulus field the weighted norm sits
        // between r_min^tau and r_max^tau times the plain norm.
        let tau = 1.4;
        let f = make_annulus_bump(&grid2(), 2, 1.0, 2.0, 11).unwrap();
        let w = crate::weights::pair_power(tau).a;
        let v = f.weighted_norm_sq(&w).unwrap();
        let base = f.l2_norm_sq();
        assert!(v >= 1.0f64.powf(tau) * base * 0.999);
        assert!(v <= 2.0f64.powf(tau) * base * 1.001);
    }

    #[test]
    fn weighted_norm_converges_under_resolution_doubling() {
        // Same seed means the same continuum field sampled on both grids.
        let w = crate::weights::pair_poly(1.0).b;
        let coarse = GridSpec::new(2, 128, 3.0).unwrap();
        let fine = GridSpec::new(2, 256, 3.0).unwrap();
        let uc = make_annulus_bump(&coarse, 2, 1.0, 2.0, 5).unwrap();
        let uf = make_annulus_bump(&fine, 2, 1.0, 2.0, 5).unwrap();
        let vc = uc.weighted_norm_sq(&w).unwrap();
        let vf = uf.weighted_norm_sq(&w).unwrap();
        assert!(((vf - vc) / vf).abs() <= 1e-6, "rel diff {}", ((vf - vc) / vf).abs());
    }

    #[test]
    fn magnetic_potential_is_curl_free() {
        let g = grid2();
        let pot = MagneticPotential::gaussian(&g, 0.8, &[0.2, -0.1], 0.4).unwrap();
        assert!(pot.curl_residual() <= 1e-8);
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let g = GridSpec::new(1, 16, 1.0).unwrap();
        let f = SpinorField::zeros(g, 2);
        let mut buf = Vec::new();
        f.export_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# n=1 points_per_axis=16"));
        assert_eq!(lines.next().unwrap(), "x0,re0,im0,re1,im1");
        assert_eq!(lines.count(), 16);
    }
}
