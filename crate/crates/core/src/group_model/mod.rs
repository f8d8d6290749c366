//! Coordinate realizations of left-invariant frames.
//!
//! A [`GroupModel`] ties the algebra-level data (structure constants, frame
//! metric) to explicit coordinate vector fields `F_i = Σ_μ F_i^μ ∂_μ` and their
//! dual coframe `θ^i = Σ_μ θ^i_μ dx^μ`. Vector fields with non-constant frame
//! components can then be differentiated exactly, which is what soliton and
//! Killing equations need.

mod coordinate;

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::frame_geometry::{
    levi_civita_ad, validate_structure, Connection, CurvatureData, FrameMetric,
    StructureConstants, StructureViolation,
};
use crate::linalg::Rational;
use crate::scalar_expr::{Chart, Expr};

pub use coordinate::{CoordinateGeometry, OracleError};

pub type ExprMatrix = Vec<Vec<Expr>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("{what} has dimension {found}, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("frame component lives on a different chart")]
    ChartMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelViolation {
    Structure(StructureViolation),
    /// `θ^i(F_j) − δ^i_j ≠ 0`.
    Duality { i: usize, j: usize, residual: Expr },
    /// Coordinate bracket `[F_i, F_j]` minus `Σ_k C^k_{ij} F_k`, component `mu`.
    Bracket { i: usize, j: usize, mu: usize, residual: Expr },
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelViolation::Structure(v) => write!(f, "{v}"),
            ModelViolation::Duality { i, j, residual } => write!(
                f,
                "duality violated at ({},{}): theta^{}(F{}) - delta = {}",
                i + 1,
                j + 1,
                i + 1,
                j + 1,
                residual
            ),
            ModelViolation::Bracket { i, j, mu, residual } => write!(
                f,
                "bracket violated at ({},{}): component {} of [F{},F{}] differs by {}",
                i + 1,
                j + 1,
                residual.chart().name(*mu),
                i + 1,
                j + 1,
                residual
            ),
        }
    }
}

/// `X = Σ_k X^k F_k` with expression-valued components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    pub components: Vec<Expr>,
}

impl VectorField {
    pub fn new(components: Vec<Expr>) -> VectorField {
        VectorField { components }
    }

    pub fn zero(chart: &Arc<Chart>, n: usize) -> VectorField {
        VectorField {
            components: vec![Expr::zero(chart); n],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> VectorField {
        VectorField::new(self.components.iter().map(|c| c.scale(s)).collect())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                if c.num_terms() > 1 {
                    format!("({c})*F{}", k + 1)
                } else {
                    format!("{c}*F{}", k + 1)
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolitonClass {
    Shrinking,
    Steady,
    Expanding,
}

impl SolitonClass {
    /// Sign convention of `2Ric + L_X g + αg = 0`: negative α shrinks.
    pub fn from_alpha(alpha: &Rational) -> SolitonClass {
        if alpha.is_negative() {
            SolitonClass::Shrinking
        } else if alpha.is_zero() {
            SolitonClass::Steady
        } else {
            SolitonClass::Expanding
        }
    }
}

impl fmt::Display for SolitonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolitonClass::Shrinking => "shrinking",
            SolitonClass::Steady => "steady",
            SolitonClass::Expanding => "expanding",
        })
    }
}

/// Entry `(i, j)` of the curl matrix that certifies `X ≠ ∇f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientWitness {
    pub i: usize,
    pub j: usize,
    pub value: Expr,
}

#[derive(Clone, Debug)]
pub struct SolitonReport {
    pub alpha: Rational,
    /// `2Ric + L_X g + αG` in the frame.
    pub residual: ExprMatrix,
    pub residual_zero: bool,
    /// `∇_i X_j − ∇_j X_i`.
    pub curl: ExprMatrix,
    pub gradient_obstruction_witness: Option<GradientWitness>,
    pub class: SolitonClass,
}

#[derive(Clone, Debug)]
pub struct KillingReport {
    pub field: VectorField,
    pub residual: ExprMatrix,
    pub is_killing: bool,
}

fn all_zero(m: &ExprMatrix) -> bool {
    m.iter().flatten().all(Expr::is_zero)
}

#[derive(Clone, Debug)]
pub struct GroupModel {
    chart: Arc<Chart>,
    frame: ExprMatrix,
    coframe: ExprMatrix,
    algebra: StructureConstants,
    metric: FrameMetric,
    connection: Connection,
}

impl GroupModel {
    /// `frame[i][μ]` is `F_i^μ`; `coframe[i][μ]` is `θ^i_μ`. Shapes are
    /// checked here; use [`GroupModel::validate`] for duality and brackets.
    pub fn new(
        chart: Arc<Chart>,
        frame: ExprMatrix,
        coframe: ExprMatrix,
        algebra: StructureConstants,
        metric: FrameMetric,
    ) -> Result<GroupModel, ModelError> {
        let n = chart.dim();
        let check = |what, found| {
            if found == n {
                Ok(())
            } else {
                Err(ModelError::Dimension {
                    what,
                    expected: n,
                    found,
                })
            }
        };
        check("frame", frame.len())?;
        check("coframe", coframe.len())?;
        check("structure constants", algebra.dim())?;
        check("metric", metric.dim())?;
        for row in frame.iter().chain(&coframe) {
            check("frame row", row.len())?;
            if row.iter().any(|e| **e.chart() != *chart) {
                return Err(ModelError::ChartMismatch);
            }
        }
        let connection = levi_civita_ad(&algebra, &metric);
        Ok(GroupModel {
            chart,
            frame,
            coframe,
            algebra,
            metric,
            connection,
        })
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn frame(&self) -> &ExprMatrix {
        &self.frame
    }

    pub fn coframe(&self) -> &ExprMatrix {
        &self.coframe
    }

    pub fn algebra(&self) -> &StructureConstants {
        &self.algebra
    }

    pub fn metric(&self) -> &FrameMetric {
        &self.metric
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn curvature(&self) -> CurvatureData {
        CurvatureData::compute(&self.algebra, &self.connection, &self.metric)
    }

    fn constant(&self, q: &Rational) -> Expr {
        Expr::constant(&self.chart, q.clone())
    }

    /// `F_i(f) = Σ_μ F_i^μ ∂_μ f`.
    pub fn frame_derivative(&self, i: usize, f: &Expr) -> Expr {
        self.frame[i]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(Expr::zero(&self.chart), |acc, (mu, c)| acc + c * f.diff(mu))
    }

    /// Checks duality `θ^i(F_j) = δ^i_j` and that the coordinate brackets of
    /// the frame fields match the structure constants.
    pub fn validate(&self) -> Vec<ModelViolation> {
        let n = self.dim();
        let mut out: Vec<ModelViolation> = validate_structure(&self.algebra)
            .into_iter()
            .map(ModelViolation::Structure)
            .collect();
        for i in 0..n {
            for j in 0..n {
                let mut pairing = Expr::zero(&self.chart);
                for mu in 0..n {
                    pairing = pairing + &self.coframe[i][mu] * &self.frame[j][mu];
                }
                if i == j {
                    pairing = pairing - Expr::one(&self.chart);
                }
                if !pairing.is_zero() {
                    out.push(ModelViolation::Duality {
                        i,
                        j,
                        residual: pairing,
                    });
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let realized = self.coordinate_bracket(&self.frame[i], &self.frame[j]);
                for (mu, r) in realized.iter().enumerate() {
                    let mut expected = Expr::zero(&self.chart);
                    for k in 0..n {
                        let c = self.algebra.get(i, j, k);
                        if !c.is_zero() {
                            expected = expected + self.frame[k][mu].scale(c);
                        }
                    }
                    let residual = r - &expected;
                    if !residual.is_zero() {
                        out.push(ModelViolation::Bracket { i, j, mu, residual });
                    }
                }
            }
        }
        out
    }

    /// Coordinate components `X^μ = Σ_k X^k F_k^μ`.
    pub fn to_coordinates(&self, x: &VectorField) -> Vec<Expr> {
        let n = self.dim();
        (0..n)
            .map(|mu| {
                (0..n).fold(Expr::zero(&self.chart), |acc, k| {
                    acc + &x.components[k] * &self.frame[k][mu]
                })
            })
            .collect()
    }

    /// Frame components `X^k = Σ_μ θ^k_μ X^μ`.
    pub fn from_coordinates(&self, coords: &[Expr]) -> VectorField {
        let n = self.dim();
        VectorField::new(
            (0..n)
                .map(|k| {
                    (0..n).fold(Expr::zero(&self.chart), |acc, mu| {
                        acc + &self.coframe[k][mu] * &coords[mu]
                    })
                })
                .collect(),
        )
    }

    fn coordinate_bracket(&self, x: &[Expr], y: &[Expr]) -> Vec<Expr> {
        let n = self.dim();
        (0..n)
            .map(|mu| {
                let mut s = Expr::zero(&self.chart);
                for nu in 0..n {
                    if !x[nu].is_zero() {
                        s = s + &x[nu] * y[mu].diff(nu);
                    }
                    if !y[nu].is_zero() {
                        s = s - &y[nu] * x[mu].diff(nu);
                    }
                }
                s
            })
            .collect()
    }

    /// Lie bracket of two vector fields, returned in frame components.
    pub fn field_bracket(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let b = self.coordinate_bracket(&self.to_coordinates(x), &self.to_coordinates(y));
        self.from_coordinates(&b)
    }

    /// `∇_i X_j = Σ_k G_{jk} (F_i(X^k) + Σ_l Γ^k_{il} X^l)`.
    pub fn covariant_derivative_matrix(&self, x: &VectorField) -> ExprMatrix {
        let n = self.dim();
        // upper-index covariant derivative ∇_i X^k
        let upper: ExprMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let mut e = self.frame_derivative(i, &x.components[k]);
                        for l in 0..n {
                            let gamma = self.connection.get(i, l, k);
                            if !gamma.is_zero() {
                                e = e + x.components[l].scale(gamma);
                            }
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(Expr::zero(&self.chart), |acc, k| {
                            acc + upper[i][k].scale(self.metric.get(j, k))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// `(L_X g)_{ij} = ∇_i X_j + ∇_j X_i`.
    pub fn lie_derivative_metric(&self, x: &VectorField) -> ExprMatrix {
        let cov = self.covariant_derivative_matrix(x);
        symmetrize(&cov)
    }

    pub fn curl(&self, x: &VectorField) -> ExprMatrix {
        let cov = self.covariant_derivative_matrix(x);
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| &cov[i][j] - &cov[j][i]).collect())
            .collect()
    }

    /// Evaluates `2Ric + L_X g + αG` and the gradient obstruction.
    pub fn soliton_residual(&self, x: &VectorField, alpha: &Rational) -> SolitonReport {
        let n = self.dim();
        let ric = self.curvature().ricci;
        let cov = self.covariant_derivative_matrix(x);
        let lie = symmetrize(&cov);
        let two = Rational::from_integer(2.into());
        let residual: ExprMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = &ric[(i, j)] * &two + alpha * self.metric.get(i, j);
                        &lie[i][j] + self.constant(&c)
                    })
                    .collect()
            })
            .collect();
        let curl: ExprMatrix = (0..n)
            .map(|i| (0..n).map(|j| &cov[i][j] - &cov[j][i]).collect())
            .collect();
        let witness = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !curl[i][j].is_zero())
            .map(|(i, j)| GradientWitness {
                i,
                j,
                value: curl[i][j].clone(),
            });
        SolitonReport {
            alpha: alpha.clone(),
            residual_zero: all_zero(&residual),
            residual,
            curl,
            gradient_obstruction_witness: witness,
            class: SolitonClass::from_alpha(alpha),
        }
    }

    pub fn killing_residual(&self, y: &VectorField) -> KillingReport {
        let residual = self.lie_derivative_metric(y);
        KillingReport {
            field: y.clone(),
            is_killing: all_zero(&residual),
            residual,
        }
    }

    /// `g_{μν} = Σ_{ij} G_{ij} θ^i_μ θ^j_ν`.
    pub fn coordinate_metric(&self) -> ExprMatrix {
        let n = self.dim();
        (0..n)
            .map(|mu| {
                (0..n)
                    .map(|nu| {
                        let mut s = Expr::zero(&self.chart);
                        for i in 0..n {
                            for j in 0..n {
                                let gij = self.metric.get(i, j);
                                if gij.is_zero() {
                                    continue;
                                }
                                s = s + (&self.coframe[i][mu] * &self.coframe[j][nu]).scale(gij);
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }

    /// Coordinate components of the metric dual 1-form `X♭`.
    pub fn flat_one_form(&self, x: &VectorField) -> Vec<Expr> {
        let n = self.dim();
        (0..n)
            .map(|mu| {
                let mut s = Expr::zero(&self.chart);
                for i in 0..n {
                    for j in 0..n {
                        let gij = self.metric.get(i, j);
                        if gij.is_zero() {
                            continue;
                        }
                        s = s + (&x.components[i] * &self.coframe[j][mu]).scale(gij);
                    }
                }
                s
            })
            .collect()
    }

    /// `d(X♭)` evaluated on frame pairs, `d(X♭)(F_i, F_j)`; computed purely in
    /// coordinates, so it is independent of the connection.
    pub fn exterior_derivative_of_flat(&self, x: &VectorField) -> ExprMatrix {
        let n = self.dim();
        let form = self.flat_one_form(x);
        let d: ExprMatrix = (0..n)
            .map(|mu| (0..n).map(|nu| form[nu].diff(mu) - form[mu].diff(nu)).collect())
            .collect();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut s = Expr::zero(&self.chart);
                        for mu in 0..n {
                            for nu in 0..n {
                                if d[mu][nu].is_zero() {
                                    continue;
                                }
                                s = s + &self.frame[i][mu] * &self.frame[j][nu] * &d[mu][nu];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }
}

fn symmetrize(m: &ExprMatrix) -> ExprMatrix {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| &m[i][j] + &m[j][i]).collect())
        .collect()
}

#[cfg(test)]
mod tests;
