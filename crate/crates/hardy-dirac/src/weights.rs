//! Radial weight functions, catalogue weight pairs, and the scalar radial
//! reductions of the positivity criteria.
//!
//! Every weight carries analytic first and second derivatives. Catalogue
//! entries use the log-safe form `w(r) = C r^p exp(s(r))`, which keeps the
//! criteria computable even where `w` itself overflows (large `tau r^alpha`
//! exponents); user-defined weights supply plain `eval`/`d1`/`d2` closures
//! and must pass the finite-difference consistency gate.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum WeightForm {
    /// `w(r) = exp(ln_coeff) * r^power * exp(s(r))`; derivatives of `s` given.
    PowerExp {
        ln_coeff: f64,
        power: f64,
        s: ScalarFn,
        s1: ScalarFn,
        s2: ScalarFn,
    },
    /// Direct closures for `w`, `w'`, `w''`.
    Custom {
        eval: ScalarFn,
        d1: ScalarFn,
        d2: ScalarFn,
    },
}

/// A radial function `r -> w(r)` with analytic first and second derivatives.
#[derive(Clone)]
pub struct RadialWeight {
    label: String,
    params: BTreeMap<String, f64>,
    form: WeightForm,
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialWeight")
            .field("label", &self.label)
            .field("params", &self.params)
            .finish()
    }
}

impl RadialWeight {
    /// Weight in the log-safe form `C r^p exp(s(r))`. `s1`, `s2` are the
    /// first and second derivatives of `s`.
    pub fn power_exp(
        label: impl Into<String>,
        params: BTreeMap<String, f64>,
        power: f64,
        s: impl Fn(f64) -> f64 + Send + Sync + 'static,
        s1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        s2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        RadialWeight {
            label: label.into(),
            params,
            form: WeightForm::PowerExp {
                ln_coeff: 0.0,
                power,
                s: Arc::new(s),
                s1: Arc::new(s1),
                s2: Arc::new(s2),
            },
        }
    }

    /// User-defined weight from plain closures. Call [`check_derivatives`]
    /// before trusting the criteria built on `d1`/`d2`.
    ///
    /// [`check_derivatives`]: RadialWeight::check_derivatives
    pub fn from_derivatives(
        label: impl Into<String>,
        params: BTreeMap<String, f64>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        RadialWeight {
            label: label.into(),
            params,
            form: WeightForm::Custom {
                eval: Arc::new(eval),
                d1: Arc::new(d1),
                d2: Arc::new(d2),
            },
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn eval(&self, r: f64) -> f64 {
        match &self.form {
            WeightForm::PowerExp {
                ln_coeff,
                power,
                s,
                ..
            } => (ln_coeff + power * r.ln() + s(r)).exp(),
            WeightForm::Custom { eval, .. } => eval(r),
        }
    }

    pub fn d1(&self, r: f64) -> f64 {
        match &self.form {
            WeightForm::PowerExp { power, s1, .. } => self.eval(r) * (power / r + s1(r)),
            WeightForm::Custom { d1, .. } => d1(r),
        }
    }

    pub fn d2(&self, r: f64) -> f64 {
        match &self.form {
            WeightForm::PowerExp {
                power, s1, s2, ..
            } => {
                let l1 = power / r + s1(r);
                let l2 = -power / (r * r) + s2(r);
                self.eval(r) * (l1 * l1 + l2)
            }
            WeightForm::Custom { d2, .. } => d2(r),
        }
    }

    /// `ln w(r)`, finite even where `w` itself overflows (log-safe form).
    pub fn ln_eval(&self, r: f64) -> Result<f64> {
        match &self.form {
            WeightForm::PowerExp {
                ln_coeff,
                power,
                s,
                ..
            } => Ok(ln_coeff + power * r.ln() + s(r)),
            WeightForm::Custom { eval, .. } => {
                let w = eval(r);
                if w > 0.0 {
                    Ok(w.ln())
                } else {
                    Err(self.nonpositive(r, w))
                }
            }
        }
    }

    /// Logarithmic derivative `w'(r) / w(r)`.
    pub fn log_deriv(&self, r: f64) -> Result<f64> {
        match &self.form {
            WeightForm::PowerExp { power, s1, .. } => Ok(power / r + s1(r)),
            WeightForm::Custom { eval, d1, .. } => {
                let w = eval(r);
                if w > 0.0 {
                    Ok(d1(r) / w)
                } else {
                    Err(self.nonpositive(r, w))
                }
            }
        }
    }

    /// `(ln w)''(r) = w''/w - (w'/w)^2`.
    pub fn log_curv(&self, r: f64) -> Result<f64> {
        match &self.form {
            WeightForm::PowerExp {
                power, s2, ..
            } => Ok(-power / (r * r) + s2(r)),
            WeightForm::Custom { eval, d1, d2 } => {
                let w = eval(r);
                if w > 0.0 {
                    let l1 = d1(r) / w;
                    Ok(d2(r) / w - l1 * l1)
                } else {
                    Err(self.nonpositive(r, w))
                }
            }
        }
    }

    /// `ln(self(r) / other(r))`, grouping the power and exponent parts so
    /// that shared terms cancel before any large magnitudes appear. For
    /// same-family pairs (identical `s`) the exponent difference is exactly
    /// zero instead of a difference of huge logs.
    pub fn ln_ratio(&self, other: &RadialWeight, r: f64) -> Result<f64> {
        match (&self.form, &other.form) {
            (
                WeightForm::PowerExp {
                    ln_coeff: c1,
                    power: p1,
                    s: s1,
                    ..
                },
                WeightForm::PowerExp {
                    ln_coeff: c2,
                    power: p2,
                    s: s2,
                    ..
                },
            ) => Ok((c1 - c2) + (p1 - p2) * r.ln() + (s1(r) - s2(r))),
            _ => Ok(self.ln_eval(r)? - other.ln_eval(r)?),
        }
    }

    /// The weight scaled by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        out.label = format!("{}*{lambda}", self.label);
        match &mut out.form {
            WeightForm::PowerExp { ln_coeff, .. } => *ln_coeff += lambda.ln(),
            WeightForm::Custom { eval, d1, d2 } => {
                let (e, a, b) = (eval.clone(), d1.clone(), d2.clone());
                *eval = Arc::new(move |r| lambda * e(r));
                *d1 = Arc::new(move |r| lambda * a(r));
                *d2 = Arc::new(move |r| lambda * b(r));
            }
        }
        out
    }

    /// Check `d1` against a centered difference of `eval` and `d2` against a
    /// centered difference of `d1`, step `1e-5 * max(1, r)`, relative
    /// tolerance `1e-6`.
    pub fn check_derivatives(&self, rs: &[f64]) -> Result<()> {
        for &r in rs {
            let h = 1e-5 * r.abs().max(1.0);
            let fd1 = (self.eval(r + h) - self.eval(r - h)) / (2.0 * h);
            let a1 = self.d1(r);
            let scale1 = a1.abs().max(self.eval(r).abs() / r.abs().max(1.0)).max(f64::MIN_POSITIVE);
            if ((fd1 - a1) / scale1).abs() > 1e-6 {
                return Err(Error::DerivativeMismatch {
                    label: self.label.clone(),
                    order: 1,
                    r,
                    rel_err: ((fd1 - a1) / scale1).abs(),
                });
            }
            let fd2 = (self.d1(r + h) - self.d1(r - h)) / (2.0 * h);
            let a2 = self.d2(r);
            let scale2 = a2.abs().max(a1.abs() / r.abs().max(1.0)).max(f64::MIN_POSITIVE);
            if ((fd2 - a2) / scale2).abs() > 1e-6 {
                return Err(Error::DerivativeMismatch {
                    label: self.label.clone(),
                    order: 2,
                    r,
                    rel_err: ((fd2 - a2) / scale2).abs(),
                });
            }
        }
        Ok(())
    }

    fn nonpositive(&self, r: f64, value: f64) -> Error {
        Error::NonPositiveWeight {
            label: self.label.clone(),
            r,
            value,
        }
    }
}

/// How the two weights of a pair are related.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// No structural relation assumed.
    General,
    /// `b(x) = |x|^(1/2) a(x)`.
    HalfPower,
}

/// A weight pair `(a, b)` for the two sides of `c ||a u|| <= ||b H u||`.
#[derive(Debug, Clone)]
pub struct WeightPair {
    pub a: RadialWeight,
    pub b: RadialWeight,
    pub pairing: Pairing,
}

impl WeightPair {
    pub fn new(a: RadialWeight, b: RadialWeight, pairing: Pairing) -> Self {
        WeightPair { a, b, pairing }
    }

    /// Verify `|b(r) - sqrt(r) a(r)| <= 1e-10 b(r)` at the sampled radii for
    /// pairs tagged [`Pairing::HalfPower`].
    pub fn validate_half_power(&self, rs: &[f64]) -> Result<()> {
        if self.pairing != Pairing::HalfPower {
            return Err(Error::HalfPowerRequired(self.b.label().to_string()));
        }
        for &r in rs {
            let b = self.b.eval(r);
            let want = r.sqrt() * self.a.eval(r);
            if (b - want).abs() > 1e-10 * b.abs() {
                return Err(Error::InvalidParameter(format!(
                    "pair ({}, {}) violates b = sqrt(r) a at r = {r}",
                    self.a.label(),
                    self.b.label()
                )));
            }
        }
        Ok(())
    }
}

/// Scalar coefficient of `alpha_hat` in `B` for radial `b`: `b'(r)/b(r)`.
pub fn radial_b_coefficient(b: &RadialWeight, r: f64) -> Result<f64> {
    check_radius(r)?;
    b.log_deriv(r)
}

/// `M_0(r) = (b(r)^{-1} b'(r) r)'`, evaluated analytically.
///
/// Writing `l1 = (ln b)'` and `l2 = (ln b)''`, this is `l1 + r l2`.
pub fn radial_m0(b: &RadialWeight, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(b.log_deriv(r)? + r * b.log_curv(r)?)
}

/// `M(r) = r^{-1} (b^{-1} b' r)' b(r)^2 a(r)^{-2}`, computed through
/// logarithms so the `b^2 / a^2` ratio never overflows.
pub fn radial_m(pair: &WeightPair, r: f64) -> Result<f64> {
    check_radius(r)?;
    let ratio = (2.0 * pair.b.ln_ratio(&pair.a, r)?).exp();
    Ok(radial_m0(&pair.b, r)? / r * ratio)
}

/// `inf_r ((b^{-1} b' r)' - 1)` over the sample grid. Positive values certify
/// the half-power criterion on the sampled interval.
pub fn radial_condition_c(b: &RadialWeight, r_samples: &[f64]) -> Result<f64> {
    fold_min(r_samples, |r| Ok(radial_m0(b, r)? - 1.0))
}

/// `gamma = inf_r (phi''(r) r + phi'(r))` over the sample grid.
pub fn gamma_condition(phi: &RadialWeight, r_samples: &[f64]) -> Result<f64> {
    fold_min(r_samples, |r| {
        check_radius(r)?;
        Ok(phi.d2(r) * r + phi.d1(r))
    })
}

fn fold_min(rs: &[f64], mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    if rs.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut min = f64::INFINITY;
    for &r in rs {
        let v = f(r)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteSample(format!("value {v} at r = {r}")));
        }
        min = min.min(v);
    }
    Ok(min)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::EmptySamples)
    }
}

/// `count` logarithmically spaced radii on `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Log-spaced radii with a fixed density per decade (at least two points).
pub fn log_spaced_per_decade(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = ((per_decade as f64 * decades).ceil() as usize).max(2);
    log_spaced(lo, hi, count)
}

fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// `(1 + r^2)^(e/2)` with derivative data for the exponent `e`.
fn poly_weight(label: &str, tau: f64, exponent: f64) -> RadialWeight {
    RadialWeight::power_exp(
        label,
        params(&[("tau", tau)]),
        0.0,
        move |r| 0.5 * exponent * (1.0 + r * r).ln(),
        move |r| exponent * r / (1.0 + r * r),
        move |r| {
            let q = 1.0 + r * r;
            exponent * (1.0 - r * r) / (q * q)
        },
    )
}

/// Pair `b = (1+r^2)^(tau/2)`, `a = (1+r^2)^((tau-2)/2)`; `M(r) = 2 tau`.
pub fn pair_poly(tau: f64) -> WeightPair {
    WeightPair::new(
        poly_weight("(1+r^2)^((tau-2)/2)", tau, tau - 2.0),
        poly_weight("(1+r^2)^(tau/2)", tau, tau),
        Pairing::General,
    )
}

fn exp_power(label: &str, tau: f64, alpha: f64, power: f64) -> RadialWeight {
    RadialWeight::power_exp(
        label,
        params(&[("tau", tau), ("alpha", alpha)]),
        power,
        move |r| 0.5 * tau * r.powf(alpha),
        move |r| 0.5 * tau * alpha * r.powf(alpha - 1.0),
        move |r| 0.5 * tau * alpha * (alpha - 1.0) * r.powf(alpha - 2.0),
    )
}

/// Pair `b = exp(tau r^alpha / 2)`, `a = r^((alpha-2)/2) b`; `M(r) = tau alpha^2 / 2`.
pub fn pair_exp_power(tau: f64, alpha: f64) -> WeightPair {
    WeightPair::new(
        exp_power("r^((alpha-2)/2) exp(tau r^alpha/2)", tau, alpha, 0.5 * (alpha - 2.0)),
        exp_power("exp(tau r^alpha/2)", tau, alpha, 0.0),
        Pairing::General,
    )
}

fn log_sq(label: &str, tau: f64, power: f64) -> RadialWeight {
    RadialWeight::power_exp(
        label,
        params(&[("tau", tau)]),
        power,
        move |r| {
            let l = r.ln();
            0.5 * tau * l * l
        },
        move |r| tau * r.ln() / r,
        move |r| tau * (1.0 - r.ln()) / (r * r),
    )
}

/// Pair `b = exp(tau (log r)^2 / 2)`, `a = r^{-1} b`; `M(r) = tau`.
pub fn pair_log_sq(tau: f64) -> WeightPair {
    WeightPair::new(
        log_sq("r^-1 exp(tau (log r)^2/2)", tau, -1.0),
        log_sq("exp(tau (log r)^2/2)", tau, 0.0),
        Pairing::General,
    )
}

/// Power pair `a = r^(tau/2)`, `b = r^((tau+2)/2)`. Here `b = r a` rather
/// than `r^(1/2) a`, `M` vanishes identically, and the estimate comes from
/// the spherical-decomposition route instead.
pub fn pair_power(tau: f64) -> WeightPair {
    WeightPair::new(
        pure_power("r^(tau/2)", tau, 0.5 * tau),
        pure_power("r^((tau+2)/2)", tau, 0.5 * (tau + 2.0)),
        Pairing::General,
    )
}

/// The monomial `r^power`.
pub fn pure_power(label: &str, tau: f64, power: f64) -> RadialWeight {
    RadialWeight::power_exp(
        label,
        params(&[("tau", tau)]),
        power,
        |_| 0.0,
        |_| 0.0,
        |_| 0.0,
    )
}

/// Pair `a = r^(-1/2) exp(tau phi)`, `b = exp(tau phi)` for a radial phase
/// `phi`; carries the half-power pairing, and `M_0 = tau (phi'' r + phi')`.
pub fn pair_radial_phase(phi: &RadialWeight, tau: f64) -> WeightPair {
    let mut p = phi.params().clone();
    p.insert("tau".to_string(), tau);
    let mk = |label: String, power: f64| {
        let ph = phi.clone();
        let ph1 = phi.clone();
        let ph2 = phi.clone();
        RadialWeight::power_exp(
            label,
            p.clone(),
            power,
            move |r| tau * ph.eval(r),
            move |r| tau * ph1.d1(r),
            move |r| tau * ph2.d2(r),
        )
    };
    WeightPair::new(
        mk(format!("r^(-1/2) exp(tau {})", phi.label()), -0.5),
        mk(format!("exp(tau {})", phi.label()), 0.0),
        Pairing::HalfPower,
    )
}

/// Phase `phi(r) = r`.
pub fn phi_linear() -> RadialWeight {
    RadialWeight::from_derivatives("phi=r", params(&[]), |r| r, |_| 1.0, |_| 0.0)
}

/// Phase `phi(r) = r^2`.
pub fn phi_quadratic() -> RadialWeight {
    RadialWeight::from_derivatives("phi=r^2", params(&[]), |r| r * r, |r| 2.0 * r, |_| 2.0)
}

/// Phase `phi(r) = log r`, the boundary case `phi'' r + phi' = 0`.
pub fn phi_log() -> RadialWeight {
    RadialWeight::from_derivatives(
        "phi=log r",
        params(&[]),
        f64::ln,
        |r| 1.0 / r,
        |r| -1.0 / (r * r),
    )
}
