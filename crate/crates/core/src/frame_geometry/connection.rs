use num_traits::Zero;

use super::{Array3, FrameMetric, StructureConstants};
use crate::linalg::{rat, QMatrix, Rational};

/// Christoffel symbols `Γ^k_{ij}` of a left-invariant connection.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Connection {
    gamma: Array3,
}

impl Connection {
    pub fn from_array(gamma: Array3) -> Connection {
        Connection { gamma }
    }

    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    /// `Γ^k_{ij}`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        self.gamma.get(i, j, k)
    }

    /// Frame components of `∇_{F_i} F_j`.
    pub fn covariant(&self, i: usize, j: usize) -> &[Rational] {
        self.gamma.fiber(i, j)
    }

    pub fn array(&self) -> &Array3 {
        &self.gamma
    }

    /// Failing `(k, i, j)` of `Γ^k_{ij} − Γ^k_{ji} = C^k_{ij}`.
    pub fn torsion_defects(&self, c: &StructureConstants) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.get(i, j, k) - self.get(j, i, k) != *c.get(i, j, k) {
                        out.push((k, i, j));
                    }
                }
            }
        }
        out
    }

    /// Failing `(i, j, k)` of `g(∇_i F_j, F_k) + g(F_j, ∇_i F_k) = 0`.
    pub fn compatibility_defects(&self, g: &FrameMetric) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut s = Rational::zero();
                    for m in 0..n {
                        s += self.get(i, k, m) * g.get(m, j) + self.get(i, j, m) * g.get(k, m);
                    }
                    if !s.is_zero() {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }
}

/// Matrix of `Y ↦ [X, Y]`; column `j` holds the image of `F_j`.
pub fn ad_matrix(c: &StructureConstants, x: &[Rational]) -> QMatrix {
    let n = c.dim();
    let mut m = QMatrix::zeros(n);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for j in 0..n {
            for k in 0..n {
                let v = xi * c.get(i, j, k);
                m[(k, j)] += v;
            }
        }
    }
    m
}

/// Metric adjoint of `ad X`: the `M` with `g(MY, Z) = g(Y, [X, Z])`,
/// i.e. `M = G⁻¹ (ad X)ᵀ G`.
pub fn ad_adjoint_matrix(c: &StructureConstants, g: &FrameMetric, x: &[Rational]) -> QMatrix {
    let ad = ad_matrix(c, x);
    &(g.inverse() * &ad.transpose()) * g.matrix()
}

fn basis(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::from_integer(1.into());
    v
}

/// `∇_X Y = ½{[X,Y] − (ad X)′Y − (ad Y)′X}` on basis pairs.
pub fn levi_civita_ad(c: &StructureConstants, g: &FrameMetric) -> Connection {
    let n = c.dim();
    let half = rat(1, 2);
    let adj: Vec<QMatrix> = (0..n).map(|i| ad_adjoint_matrix(c, g, &basis(n, i))).collect();
    let mut gamma = Array3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = c.get(i, j, k) - &adj[i][(k, j)] - &adj[j][(k, i)];
                gamma.set(i, j, k, v * &half);
            }
        }
    }
    Connection { gamma }
}

/// Koszul formula for a constant metric:
/// `2g(∇_i F_j, F_k) = g([F_i,F_j],F_k) − g([F_j,F_k],F_i) + g([F_k,F_i],F_j)`.
pub fn levi_civita_koszul(c: &StructureConstants, g: &FrameMetric) -> Connection {
    let n = c.dim();
    let half = rat(1, 2);
    // lowered bracket: b(i, j, k) = g([F_i, F_j], F_k)
    let lowered = |i: usize, j: usize, k: usize| -> Rational {
        (0..n).map(|m| c.get(i, j, m) * g.get(m, k)).sum()
    };
    let mut gamma = Array3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let cov: Vec<Rational> = (0..n)
                .map(|k| (lowered(i, j, k) - lowered(j, k, i) + lowered(k, i, j)) * &half)
                .collect();
            for l in 0..n {
                let v: Rational = (0..n).map(|k| &g.inverse()[(l, k)] * &cov[k]).sum();
                gamma.set(i, j, l, v);
            }
        }
    }
    Connection { gamma }
}
