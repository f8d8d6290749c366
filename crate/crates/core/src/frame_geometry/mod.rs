//! Algebra-level geometry of a left-invariant metric.
//!
//! Everything here works in a fixed left-invariant frame `F_1..F_n` with
//! constant metric coefficients, so the connection and curvature are arrays of
//! exact rationals. Indices are 0-based in code and 1-based in rendered text.
//!
//! Conventions:
//! * `[F_i, F_j] = Σ_k C^k_{ij} F_k`
//! * `∇_{F_i} F_j = Σ_k Γ^k_{ij} F_k` (row `i` is the derivative direction)
//! * `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}`, `R(F_i,F_j)F_k = Σ_l R^l_{kij} F_l`
//! * `Ric_{jk} = Σ_i R^i_{kij}` (trace over the first slot)

mod connection;
mod curvature;

use std::fmt;

use num_traits::Zero;

use crate::linalg::{QMatrix, Rational};

pub use connection::{ad_adjoint_matrix, ad_matrix, levi_civita_ad, levi_civita_koszul, Connection};
pub use curvature::{
    constant_curvature_check, einstein_check, ricci, riemann, scalar_curvature,
    sectional_curvatures, ConstantCurvature, CurvatureData, Riemann, Sectional,
};

/// Dense rank-3 array indexed `(i, j, k)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Array3 {
    n: usize,
    data: Vec<Rational>,
}

impl Array3 {
    pub fn zeros(n: usize) -> Array3 {
        Array3 {
            n,
            data: vec![Rational::zero(); n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.data[(i * self.n + j) * self.n + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Rational) {
        let n = self.n;
        self.data[(i * n + j) * n + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// The `n` components along the last index.
    pub fn fiber(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.n + j) * self.n;
        &self.data[start..start + self.n]
    }
}

impl fmt::Debug for Array3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Array3[")?;
        for i in 0..self.n {
            for j in 0..self.n {
                let v: Vec<String> = self.fiber(i, j).iter().map(|x| x.to_string()).collect();
                write!(f, " ({},{}):[{}]", i + 1, j + 1, v.join(","))?;
            }
        }
        f.write_str(" ]")
    }
}

/// Renders a frame vector `Σ c_k F_k` as e.g. `1/2*F3 - F1`.
pub fn render_combination(coeffs: &[Rational], symbol: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != Rational::from_integer(1.into()) {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(&format!("{symbol}{}", k + 1));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Structure constants `C^k_{ij}` stored as `get(i, j, k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StructureConstants {
    c: Array3,
}

impl StructureConstants {
    pub fn abelian(n: usize) -> Self {
        StructureConstants { c: Array3::zeros(n) }
    }

    /// Builds antisymmetric constants from the listed brackets
    /// `[F_i, F_j] = Σ_k coeffs[k] F_k` (0-based `i`, `j`).
    pub fn from_brackets(n: usize, brackets: &[(usize, usize, Vec<Rational>)]) -> Self {
        let mut c = Array3::zeros(n);
        for (i, j, v) in brackets {
            assert_eq!(v.len(), n, "bracket value dimension");
            for (k, x) in v.iter().enumerate() {
                c.set(*i, *j, k, x.clone());
                c.set(*j, *i, k, -x.clone());
            }
        }
        StructureConstants { c }
    }

    /// Raw constants, not forced antisymmetric; see [`validate_structure`].
    pub fn from_array(c: Array3) -> Self {
        StructureConstants { c }
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// `C^k_{ij}`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        self.c.get(i, j, k)
    }

    /// Frame components of `[F_i, F_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &[Rational] {
        self.c.fiber(i, j)
    }

    /// Bracket of two frame vectors with rational components.
    pub fn bracket_vectors(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = Rational::zero();
                for i in 0..n {
                    if x[i].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        s += &x[i] * &y[j] * self.get(i, j, k);
                    }
                }
                s
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureViolation {
    /// `C^k_{ij} + C^k_{ji} ≠ 0`.
    Antisymmetry { k: usize, i: usize, j: usize },
    /// Jacobi identity fails for the component `l` of `(i, j, k)`.
    Jacobi { i: usize, j: usize, k: usize, l: usize, value: Rational },
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureViolation::Antisymmetry { k, i, j } => write!(
                f,
                "antisymmetry violated at ({},{},{}): C^{}_{{{}{}}} != -C^{}_{{{}{}}}",
                k + 1,
                i + 1,
                j + 1,
                k + 1,
                i + 1,
                j + 1,
                k + 1,
                j + 1,
                i + 1
            ),
            StructureViolation::Jacobi { i, j, k, l, value } => write!(
                f,
                "Jacobi identity violated for (F{}, F{}, F{}), component {}: {}",
                i + 1,
                j + 1,
                k + 1,
                l + 1,
                value
            ),
        }
    }
}

/// Checks antisymmetry and the Jacobi identity; returns every violation.
pub fn validate_structure(c: &StructureConstants) -> Vec<StructureViolation> {
    let n = c.dim();
    let mut out = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                if !(c.get(i, j, k) + c.get(j, i, k)).is_zero() {
                    out.push(StructureViolation::Antisymmetry { k, i, j });
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut s = Rational::zero();
                    for m in 0..n {
                        s += c.get(i, j, m) * c.get(m, k, l)
                            + c.get(j, k, m) * c.get(m, i, l)
                            + c.get(k, i, m) * c.get(m, j, l);
                    }
                    if !s.is_zero() {
                        out.push(StructureViolation::Jacobi { i, j, k, l, value: s });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("frame metric is not symmetric")]
    NotSymmetric,
    #[error("frame metric is degenerate")]
    Degenerate,
}

/// Constant inner products `G_{ij} = g(F_i, F_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameMetric {
    g: QMatrix,
    inv: QMatrix,
    signature: (usize, usize),
}

impl FrameMetric {
    pub fn new(g: QMatrix) -> Result<FrameMetric, MetricError> {
        if !g.is_symmetric() {
            return Err(MetricError::NotSymmetric);
        }
        let inv = g.inverse().ok_or(MetricError::Degenerate)?;
        let signature = g.inertia();
        Ok(FrameMetric { g, inv, signature })
    }

    pub fn diagonal(diag: &[Rational]) -> Result<FrameMetric, MetricError> {
        FrameMetric::new(QMatrix::diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.g
    }

    pub fn inverse(&self) -> &QMatrix {
        &self.inv
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.g[(i, j)]
    }

    /// `(positive, negative)` eigenvalue counts.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_lorentzian(&self) -> bool {
        self.signature.1 == 1 && self.dim() > 1
    }

    pub fn inner(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let n = self.dim();
        let mut s = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                s += &x[i] * &self.g[(i, j)] * &y[j];
            }
        }
        s
    }
}

#[cfg(test)]
mod tests;
