//! Coordinate Christoffel / Ricci computation, used as an oracle for the
//! frame-level results. Nothing here touches structure constants or the
//! frame connection.

use num_traits::Zero;

use super::{ExprMatrix, GroupModel, VectorField};
use crate::frame_geometry::Riemann;
use crate::linalg::{QMatrix, Rational};
use crate::scalar_expr::Expr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("coordinate metric determinant `{0}` is not invertible in the expression algebra")]
    NonInvertibleDeterminant(String),
    #[error("pulled-back component ({0}) is not constant: {1}")]
    NonConstant(String, String),
}

/// Levi-Civita data of the coordinate metric `g_{μν}`.
pub struct CoordinateGeometry {
    pub metric: ExprMatrix,
    pub inverse: ExprMatrix,
    /// `Γ^λ_{μν}` at `[λ][μ][ν]`.
    pub christoffel: Vec<Vec<Vec<Expr>>>,
    /// `R^ρ_{σμν}` at `[ρ][σ][μ][ν]`, `R(∂_μ,∂_ν)∂_σ = R^ρ_{σμν} ∂_ρ`.
    pub riemann: Vec<Vec<Vec<Vec<Expr>>>>,
    /// `Ric_{σν} = Σ_μ R^μ_{νμσ}`.
    pub ricci: ExprMatrix,
}

fn det(m: &ExprMatrix) -> Expr {
    let n = m.len();
    match n {
        0 => unreachable!("empty matrix"),
        1 => m[0][0].clone(),
        _ => {
            let mut s = Expr::zero(m[0][0].chart());
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let term = &m[0][j] * det(&minor(m, 0, j));
                s = if j % 2 == 0 { s + term } else { s - term };
            }
            s
        }
    }
}

fn minor(m: &ExprMatrix, row: usize, col: usize) -> ExprMatrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// Exact inverse by cofactors; the determinant must be a unit of the algebra.
pub(crate) fn invert(m: &ExprMatrix) -> Result<ExprMatrix, OracleError> {
    let n = m.len();
    let d = det(m);
    let inv_det = d
        .unit_inverse()
        .ok_or_else(|| OracleError::NonInvertibleDeterminant(d.to_string()))?;
    if n == 1 {
        return Ok(vec![vec![inv_det]]);
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adjugate: transpose of the cofactor matrix
                    let c = det(&minor(m, j, i)) * &inv_det;
                    if (i + j) % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect())
}

impl CoordinateGeometry {
    pub fn compute(model: &GroupModel) -> Result<CoordinateGeometry, OracleError> {
        let n = model.dim();
        let chart = model.chart();
        let g = model.coordinate_metric();
        let ginv = invert(&g)?;
        let dg: Vec<ExprMatrix> = (0..n)
            .map(|a| (0..n).map(|b| (0..n).map(|c| g[b][c].diff(a)).collect()).collect())
            .collect();
        // Γ^λ_{μν} = ½ g^{λσ} (∂_μ g_{σν} + ∂_ν g_{σμ} − ∂_σ g_{μν})
        let half = Rational::new(1.into(), 2.into());
        let christoffel: Vec<Vec<Vec<Expr>>> = (0..n)
            .map(|l| {
                (0..n)
                    .map(|mu| {
                        (0..n)
                            .map(|nu| {
                                let mut s = Expr::zero(chart);
                                for sg in 0..n {
                                    if ginv[l][sg].is_zero() {
                                        continue;
                                    }
                                    let k = &dg[mu][sg][nu] + &dg[nu][sg][mu] - &dg[sg][mu][nu];
                                    s = s + &ginv[l][sg] * k;
                                }
                                s.scale(&half)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        // R^ρ_{σμν} = ∂_μ Γ^ρ_{νσ} − ∂_ν Γ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}
        let riemann: Vec<Vec<Vec<Vec<Expr>>>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|s| {
                        (0..n)
                            .map(|mu| {
                                (0..n)
                                    .map(|nu| {
                                        let mut e = christoffel[r][nu][s].diff(mu)
                                            - christoffel[r][mu][s].diff(nu);
                                        for l in 0..n {
                                            e = e + &christoffel[r][mu][l] * &christoffel[l][nu][s]
                                                - &christoffel[r][nu][l] * &christoffel[l][mu][s];
                                        }
                                        e
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let ricci: ExprMatrix = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        (0..n).fold(Expr::zero(chart), |acc, mu| acc + &riemann[mu][b][mu][a])
                    })
                    .collect()
            })
            .collect();
        Ok(CoordinateGeometry {
            metric: g,
            inverse: ginv,
            christoffel,
            riemann,
            ricci,
        })
    }

    /// Ricci tensor evaluated on frame pairs; must come out constant.
    pub fn frame_ricci(&self, model: &GroupModel) -> Result<QMatrix, OracleError> {
        let n = model.dim();
        let f = model.frame();
        let mut out = QMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Expr::zero(model.chart());
                for mu in 0..n {
                    for nu in 0..n {
                        if self.ricci[mu][nu].is_zero() {
                            continue;
                        }
                        s = s + &f[i][mu] * &f[j][nu] * &self.ricci[mu][nu];
                    }
                }
                out[(i, j)] = constant(&s, &format!("{},{}", i + 1, j + 1))?;
            }
        }
        Ok(out)
    }

    /// Curvature pulled back to the frame, `R^l_{kij}` in the frame layout:
    /// `R(F_i,F_j)F_k` expanded in `F_l` via the coframe.
    pub fn frame_riemann(&self, model: &GroupModel) -> Result<Riemann, OracleError> {
        let n = model.dim();
        let f = model.frame();
        let th = model.coframe();
        let chart = model.chart();
        let mut out = Riemann::zeros(n);
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut s = Expr::zero(chart);
                        for rho in 0..n {
                            if th[l][rho].is_zero() {
                                continue;
                            }
                            for sg in 0..n {
                                if f[k][sg].is_zero() {
                                    continue;
                                }
                                for mu in 0..n {
                                    if f[i][mu].is_zero() {
                                        continue;
                                    }
                                    for nu in 0..n {
                                        let r = &self.riemann[rho][sg][mu][nu];
                                        if f[j][nu].is_zero() || r.is_zero() {
                                            continue;
                                        }
                                        s = s + &th[l][rho] * &f[k][sg] * &f[i][mu] * &f[j][nu] * r;
                                    }
                                }
                            }
                        }
                        let at = format!("{},{},{},{}", l + 1, k + 1, i + 1, j + 1);
                        out.set(l, k, i, j, constant(&s, &at)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `2Ric + L_X g + αg` in coordinates, with
    /// `(L_X g)_{μν} = X^λ∂_λ g_{μν} + g_{λν}∂_μ X^λ + g_{μλ}∂_ν X^λ`.
    pub fn soliton_residual(&self, model: &GroupModel, x: &VectorField, alpha: &Rational) -> ExprMatrix {
        let n = model.dim();
        let xc = model.to_coordinates(x);
        let g = &self.metric;
        let two = Rational::from_integer(2.into());
        (0..n)
            .map(|mu| {
                (0..n)
                    .map(|nu| {
                        let mut s = self.ricci[mu][nu].scale(&two) + g[mu][nu].scale(alpha);
                        for l in 0..n {
                            s = s + &xc[l] * g[mu][nu].diff(l)
                                + &g[l][nu] * xc[l].diff(mu)
                                + &g[mu][l] * xc[l].diff(nu);
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    }
}

fn constant(e: &Expr, at: &str) -> Result<Rational, OracleError> {
    if e.is_zero() {
        return Ok(Rational::zero());
    }
    e.as_constant()
        .ok_or_else(|| OracleError::NonConstant(at.to_string(), e.to_string()))
}
