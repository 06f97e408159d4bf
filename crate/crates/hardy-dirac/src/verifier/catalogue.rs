//! The catalogue of verifiable inequalities: weight pair, operator choice,
//! and predicted constant per case, addressed by stable id strings.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::weights::{
    self, gamma_condition, log_spaced, phi_linear, phi_log, phi_quadratic, RadialWeight,
    WeightPair,
};

use super::report::{ConditionResult, CriterionKind};
use super::thm5_constant;

/// Radial phase shape for the `thm3.1` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKind {
    Linear,
    Quadratic,
    Log,
}

impl PhiKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "r" | "linear" => Ok(PhiKind::Linear),
            "r^2" | "r2" | "quadratic" => Ok(PhiKind::Quadratic),
            "log" | "log_r" => Ok(PhiKind::Log),
            other => Err(Error::InvalidParameter(format!(
                "unknown phi kind '{other}' (expected r, r^2 or log)"
            ))),
        }
    }

    pub fn id_fragment(&self) -> &'static str {
        match self {
            PhiKind::Linear => "r",
            PhiKind::Quadratic => "r^2",
            PhiKind::Log => "log",
        }
    }

    pub fn weight(&self) -> RadialWeight {
        match self {
            PhiKind::Linear => phi_linear(),
            PhiKind::Quadratic => phi_quadratic(),
            PhiKind::Log => phi_log(),
        }
    }
}

/// One verifiable inequality with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum InequalityCase {
    /// `2 tau` against the `(1 + r^2)` weights.
    Poly { tau: f64 },
    /// The `tau = 1` special case of `Poly`, constant 2.
    Agmon,
    /// The `tau = 2` special case of `Poly`, constant 4.
    Hardy,
    /// `tau alpha^2 / 2` against `exp(tau r^alpha / 2)` weights.
    ExpPower { tau: f64, alpha: f64 },
    /// The `alpha = 2` special case of `ExpPower`, constant `2 tau`.
    Treve { tau: f64 },
    /// `tau` against the squared-logarithm weights.
    LogSq { tau: f64 },
    /// `tau gamma - 1` for the radial-phase family (massive operator).
    RadialPhase { phi: PhiKind, tau: f64 },
    /// `d^2 / 4` for the pure power weights.
    Power { tau: f64 },
}

impl InequalityCase {
    /// Build a case from its id string plus named parameters.
    pub fn from_id(id: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let tau = |default: Option<f64>| -> Result<f64> {
            match (params.get("tau"), default) {
                (Some(&t), _) => Ok(t),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(Error::InvalidParameter(format!(
                    "inequality '{id}' needs a tau parameter"
                ))),
            }
        };
        let case = match id {
            "example_4.1" => InequalityCase::Poly { tau: tau(None)? },
            "agmon_4.2" => InequalityCase::Agmon,
            "hardy_4.3" => InequalityCase::Hardy,
            "example_4.2" => InequalityCase::ExpPower {
                tau: tau(None)?,
                alpha: *params.get("alpha").ok_or_else(|| {
                    Error::InvalidParameter("example_4.2 needs an alpha parameter".into())
                })?,
            },
            "treve_4.6" => InequalityCase::Treve { tau: tau(None)? },
            "log_4.8" => InequalityCase::LogSq { tau: tau(None)? },
            "thm3.1" => {
                let phi = match params.get("phi") {
                    Some(&p) if p == 1.0 => PhiKind::Linear,
                    Some(&p) if p == 2.0 => PhiKind::Quadratic,
                    Some(_) => {
                        return Err(Error::InvalidParameter(
                            "thm3.1 phi parameter must be 1 (phi = r) or 2 (phi = r^2)".into(),
                        ))
                    }
                    None => PhiKind::Linear,
                };
                InequalityCase::RadialPhase {
                    phi,
                    tau: tau(Some(2.0))?,
                }
            }
            "thm5.1" => InequalityCase::Power { tau: tau(None)? },
            other => return Err(Error::UnknownInequality(other.to_string())),
        };
        case.validate()?;
        Ok(case)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        match self {
            InequalityCase::Poly { tau }
            | InequalityCase::Treve { tau }
            | InequalityCase::LogSq { tau }
            | InequalityCase::RadialPhase { tau, .. } => positive("tau", *tau),
            InequalityCase::ExpPower { tau, alpha } => {
                positive("tau", *tau)?;
                if *alpha == 0.0 {
                    return Err(Error::InvalidParameter("alpha must be nonzero".into()));
                }
                Ok(())
            }
            InequalityCase::Agmon | InequalityCase::Hardy | InequalityCase::Power { .. } => Ok(()),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            InequalityCase::Poly { .. } => "example_4.1",
            InequalityCase::Agmon => "agmon_4.2",
            InequalityCase::Hardy => "hardy_4.3",
            InequalityCase::ExpPower { .. } => "example_4.2",
            InequalityCase::Treve { .. } => "treve_4.6",
            InequalityCase::LogSq { .. } => "log_4.8",
            InequalityCase::RadialPhase { .. } => "thm3.1",
            InequalityCase::Power { .. } => "thm5.1",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let mut p = BTreeMap::new();
        match self {
            InequalityCase::Poly { tau }
            | InequalityCase::Treve { tau }
            | InequalityCase::LogSq { tau }
            | InequalityCase::Power { tau } => {
                p.insert("tau".into(), *tau);
            }
            InequalityCase::Agmon => {
                p.insert("tau".into(), 1.0);
            }
            InequalityCase::Hardy => {
                p.insert("tau".into(), 2.0);
            }
            InequalityCase::ExpPower { tau, alpha } => {
                p.insert("tau".into(), *tau);
                p.insert("alpha".into(), *alpha);
            }
            InequalityCase::RadialPhase { phi, tau } => {
                p.insert("tau".into(), *tau);
                p.insert(
                    "phi".into(),
                    match phi {
                        PhiKind::Linear => 1.0,
                        PhiKind::Quadratic => 2.0,
                        PhiKind::Log => 0.0,
                    },
                );
            }
        }
        p
    }

    pub fn weight_pair(&self) -> WeightPair {
        match self {
            InequalityCase::Poly { tau } => weights::pair_poly(*tau),
            InequalityCase::Agmon => weights::pair_poly(1.0),
            InequalityCase::Hardy => weights::pair_poly(2.0),
            InequalityCase::ExpPower { tau, alpha } => weights::pair_exp_power(*tau, *alpha),
            InequalityCase::Treve { tau } => weights::pair_exp_power(*tau, 2.0),
            InequalityCase::LogSq { tau } => weights::pair_log_sq(*tau),
            InequalityCase::RadialPhase { phi, tau } => {
                weights::pair_radial_phase(&phi.weight(), *tau)
            }
            InequalityCase::Power { tau } => weights::pair_power(*tau),
        }
    }

    /// Whether the inequality is stated for the operator with the mass term.
    pub fn uses_mass(&self) -> bool {
        matches!(self, InequalityCase::RadialPhase { .. })
    }

    /// Predicted constant bounding the squared-norm quotient from below.
    ///
    /// Interval-dependent constants (the radial-phase family) also return the
    /// criterion evaluation that produced them; `n` matters only for the
    /// power weights.
    pub fn paper_constant(
        &self,
        n: usize,
        sample_interval: (f64, f64),
        sample_count: usize,
    ) -> Result<(f64, Option<ConditionResult>)> {
        match self {
            InequalityCase::Poly { tau } => Ok((2.0 * tau, None)),
            InequalityCase::Agmon => Ok((2.0, None)),
            InequalityCase::Hardy => Ok((4.0, None)),
            InequalityCase::ExpPower { tau, alpha } => Ok((0.5 * tau * alpha * alpha, None)),
            InequalityCase::Treve { tau } => Ok((2.0 * tau, None)),
            InequalityCase::LogSq { tau } => Ok((*tau, None)),
            InequalityCase::RadialPhase { phi, tau } => {
                let radii = log_spaced(sample_interval.0, sample_interval.1, sample_count);
                let gamma = gamma_condition(&phi.weight(), &radii)?;
                let cond = ConditionResult::new(
                    CriterionKind::Gamma,
                    sample_interval,
                    radii.len(),
                    gamma,
                );
                Ok((tau * gamma - 1.0, Some(cond)))
            }
            InequalityCase::Power { tau } => {
                let case = thm5_constant(*tau, n)?;
                if case.degenerate {
                    return Err(Error::DegenerateTau {
                        tau: *tau,
                        n,
                        k: case.k_star,
                    });
                }
                Ok((case.c, None))
            }
        }
    }
}
