//! Hermitian anticommuting matrix families (Clifford representations).
//!
//! A spatial dimension `n` gets a family of `n` Hermitian matrices
//! `alpha_1 .. alpha_n` plus one more Hermitian matrix `beta`, all of size
//! `m x m` with `m = 2^(n/2)` for even `n` and `m = 2^((n+1)/2)` for odd `n`,
//! satisfying
//!
//! ```text
//! alpha_j alpha_k + alpha_k alpha_j = 2 delta_jk,
//! alpha_j beta + beta alpha_j = 0,        beta^2 = 1.
//! ```
//!
//! The construction is a fixed recursion over the dimension, so the matrices
//! are reproducible bit for bit:
//!
//! * `n = 1`: `alpha_1 = sigma_1`, `beta = sigma_3` (Pauli matrices).
//! * even `n -> n + 1` (size doubles): with generators `g_1 .. g_{n+1}` being
//!   the current `alpha`s followed by `beta`, the new family is
//!   `alpha_j = sigma_1 (x) g_j` and `beta = sigma_3 (x) Id`.
//! * odd `n -> n + 1` (size unchanged): the product `alpha_1 ... alpha_n beta`
//!   anticommutes with every generator; multiplied by `i` when needed to make
//!   it Hermitian, it becomes `alpha_{n+1}`.
//!
//! For `n = 3` this reproduces the standard block form
//! `alpha_j = [[0, sigma_j], [sigma_j, 0]]`, `beta = diag(1, 1, -1, -1)`.
//! All matrix entries stay in `{0, +-1, +-i}`, so the anticommutation
//! relations hold exactly in floating point, not just approximately.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn pauli(k: usize) -> CMatrix {
    match k {
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => unreachable!("pauli index must be 1, 2 or 3"),
    }
}

/// Spinor dimension for spatial dimension `n`: `2^(n/2)` (even) or
/// `2^((n+1)/2)` (odd).
pub fn spinor_dimension(n: usize) -> usize {
    1 << n.div_ceil(2)
}

/// A concrete representation of the anticommutation relations in dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep {
    n: usize,
    m: usize,
    alphas: Vec<CMatrix>,
    beta: CMatrix,
}

impl CliffordRep {
    /// Build the representation for spatial dimension `n >= 1`.
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension(n));
        }
        let mut alphas = vec![pauli(1)];
        let mut beta = pauli(3);
        for dim in 2..=n {
            if dim % 2 == 0 {
                alphas.push(hermitian_product(&alphas, &beta));
            } else {
                let mut generators = alphas.clone();
                generators.push(beta);
                let m = generators[0].nrows();
                alphas = generators
                    .iter()
                    .map(|g| pauli(1).kronecker(g))
                    .collect();
                beta = pauli(3).kronecker(&CMatrix::identity(m, m));
            }
        }
        let m = beta.nrows();
        debug_assert_eq!(m, spinor_dimension(n));
        Ok(CliffordRep { n, m, alphas, beta })
    }

    pub fn spatial_dim(&self) -> usize {
        self.n
    }

    pub fn spinor_dim(&self) -> usize {
        self.m
    }

    pub fn alpha(&self, j: usize) -> &CMatrix {
        &self.alphas[j]
    }

    pub fn alphas(&self) -> &[CMatrix] {
        &self.alphas
    }

    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }

    /// Direction-contracted matrix `sum_j omega_j alpha_j`; Hermitian and an
    /// involution for unit `omega`.
    pub fn alpha_hat(&self, dir: &UnitDirection) -> Result<CMatrix> {
        if dir.dim() != self.n {
            return Err(Error::DimensionMismatch {
                context: "direction vs representation",
                expected: self.n,
                got: dir.dim(),
            });
        }
        let mut out = CMatrix::zeros(self.m, self.m);
        for (alpha, &w) in self.alphas.iter().zip(dir.components()) {
            out += alpha * Complex64::new(w, 0.0);
        }
        Ok(out)
    }

    /// The Hermitian matrix `-i alpha_hat beta`, with spectrum `{+1, -1}`.
    pub fn minus_i_alphahat_beta(&self, dir: &UnitDirection) -> Result<CMatrix> {
        let ahat = self.alpha_hat(dir)?;
        Ok(ahat * &self.beta * (-I))
    }

    /// Largest entrywise magnitude over all defects of the anticommutation
    /// relations. Zero (exactly) for every constructed representation.
    pub fn max_relation_defect(&self) -> f64 {
        let id = CMatrix::identity(self.m, self.m);
        let mut worst = 0.0f64;
        let mut track = |m: &CMatrix| {
            let d = m.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
            worst = worst.max(d);
        };
        for j in 0..self.n {
            for k in 0..self.n {
                let target = if j == k { &id * Complex64::new(2.0, 0.0) } else { CMatrix::zeros(self.m, self.m) };
                let anti = &self.alphas[j] * &self.alphas[k] + &self.alphas[k] * &self.alphas[j];
                track(&(anti - target));
            }
            track(&(&self.alphas[j] * &self.beta + &self.beta * &self.alphas[j]));
            track(&(&self.alphas[j] - self.alphas[j].adjoint()));
        }
        track(&(&self.beta * &self.beta - id));
        track(&(&self.beta - self.beta.adjoint()));
        worst
    }
}

/// Hermitian completion `alpha_{n+1} = phase * alpha_1 ... alpha_n beta` used
/// by the odd-to-even step. The product of an even number of pairwise
/// anticommuting involutions anticommutes with each factor; it is either
/// Hermitian or anti-Hermitian, fixed by multiplying with `i` at most once.
fn hermitian_product(alphas: &[CMatrix], beta: &CMatrix) -> CMatrix {
    let m = beta.nrows();
    let mut p = CMatrix::identity(m, m);
    for a in alphas {
        p = p * a;
    }
    p = p * beta;
    let defect = (&p - p.adjoint()).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if defect > 0.0 {
        p *= I;
    }
    p
}

/// A point on the unit sphere, `omega = x / |x|`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDirection {
    omega: Vec<f64>,
}

impl UnitDirection {
    /// Wrap an already-normalized vector; the norm must be 1 within `1e-12`.
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        let norm = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(UnitDirection { omega })
    }

    /// Normalize an arbitrary nonzero vector onto the sphere.
    pub fn from_vector(x: &[f64]) -> Result<Self> {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(UnitDirection {
            omega: x.iter().map(|v| v / norm).collect(),
        })
    }

    /// Uniformly random direction (normalized Gaussian components).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let x: Vec<f64> = (0..n).map(|_| gaussian(rng)).collect();
            if let Ok(dir) = Self::from_vector(&x) {
                return dir;
            }
        }
    }

    /// The coordinate axis `e_j`.
    pub fn axis(n: usize, j: usize) -> Self {
        let mut omega = vec![0.0; n];
        omega[j] = 1.0;
        UnitDirection { omega }
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.omega
    }
}

/// Standard normal via Box-Muller, so only `Rng::random` is needed.
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = nalgebra::linalg::SymmetricEigen::new(m.clone());
    let mut ev: Vec<f64> = sym.eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}
