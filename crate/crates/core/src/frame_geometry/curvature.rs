use num_traits::Zero;

use super::{Connection, FrameMetric, StructureConstants};
use crate::linalg::{QMatrix, Rational};

/// `R^l_{kij}` stored at `(l, k, i, j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Riemann {
    n: usize,
    data: Vec<Rational>,
}

impl Riemann {
    pub fn zeros(n: usize) -> Riemann {
        Riemann {
            n,
            data: vec![Rational::zero(); n * n * n * n],
        }
    }

    fn idx(&self, l: usize, k: usize, i: usize, j: usize) -> usize {
        ((l * self.n + k) * self.n + i) * self.n + j
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> &Rational {
        &self.data[self.idx(l, k, i, j)]
    }

    pub fn set(&mut self, l: usize, k: usize, i: usize, j: usize, v: Rational) {
        let at = self.idx(l, k, i, j);
        self.data[at] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `R_{lkij} = Σ_m G_{lm} R^m_{kij}`, stored in the same layout.
    pub fn lowered(&self, g: &FrameMetric) -> Riemann {
        let n = self.n;
        let mut out = Riemann::zeros(n);
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let v = (0..n).map(|m| g.get(l, m) * self.get(m, k, i, j)).sum();
                        out.set(l, k, i, j, v);
                    }
                }
            }
        }
        out
    }

    /// `(l, k, i, j)` where `R^l_{kij} + R^l_{kji} ≠ 0`.
    pub fn antisymmetry_defects(&self) -> Vec<[usize; 4]> {
        self.defects(|r, [l, k, i, j]| r.get(l, k, i, j) + r.get(l, k, j, i))
    }

    /// `(l, k, i, j)` where the cyclic sum over `(k, i, j)` is nonzero.
    pub fn bianchi_defects(&self) -> Vec<[usize; 4]> {
        self.defects(|r, [l, k, i, j]| r.get(l, k, i, j) + r.get(l, i, j, k) + r.get(l, j, k, i))
    }

    /// On a lowered tensor: `(l, k, i, j)` where `R_{lkij} ≠ R_{ijlk}`.
    pub fn pair_symmetry_defects(&self) -> Vec<[usize; 4]> {
        self.defects(|r, [l, k, i, j]| r.get(l, k, i, j) - r.get(i, j, l, k))
    }

    fn defects(&self, f: impl Fn(&Riemann, [usize; 4]) -> Rational) -> Vec<[usize; 4]> {
        let n = self.n;
        let mut out = Vec::new();
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if !f(self, [l, k, i, j]).is_zero() {
                            out.push([l, k, i, j]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Riemann tensor, Ricci tensor and scalar curvature of one metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureData {
    pub riemann: Riemann,
    pub ricci: QMatrix,
    pub scalar: Rational,
}

impl CurvatureData {
    pub fn compute(c: &StructureConstants, gamma: &Connection, g: &FrameMetric) -> CurvatureData {
        let riemann = riemann(c, gamma);
        let ricci = ricci(&riemann);
        let scalar = scalar_curvature(&ricci, g);
        CurvatureData {
            riemann,
            ricci,
            scalar,
        }
    }
}

/// `R^l_{kij} = Σ_m (Γ^m_{jk}Γ^l_{im} − Γ^m_{ik}Γ^l_{jm}) − Σ_m C^m_{ij}Γ^l_{mk}`.
pub fn riemann(c: &StructureConstants, gamma: &Connection) -> Riemann {
    let n = c.dim();
    let mut r = Riemann::zeros(n);
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = Rational::zero();
                    for m in 0..n {
                        s += gamma.get(j, k, m) * gamma.get(i, m, l)
                            - gamma.get(i, k, m) * gamma.get(j, m, l)
                            - c.get(i, j, m) * gamma.get(m, k, l);
                    }
                    r.set(l, k, i, j, s);
                }
            }
        }
    }
    r
}

/// `Ric_{jk} = Σ_i R^i_{kij}`.
pub fn ricci(r: &Riemann) -> QMatrix {
    let n = r.dim();
    let mut ric = QMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            ric[(j, k)] = (0..n).map(|i| r.get(i, k, i, j).clone()).sum();
        }
    }
    ric
}

pub fn scalar_curvature(ric: &QMatrix, g: &FrameMetric) -> Rational {
    let n = ric.dim();
    let mut s = Rational::zero();
    for j in 0..n {
        for k in 0..n {
            s += &g.inverse()[(j, k)] * &ric[(j, k)];
        }
    }
    s
}

/// `Some(λ)` when `Ric = λG` exactly.
pub fn einstein_check(ric: &QMatrix, g: &FrameMetric) -> Option<Rational> {
    let n = ric.dim();
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !g.get(i, j).is_zero())?;
    let lambda = &ric[(i, j)] / g.get(i, j);
    (ric == &g.matrix().scale(&lambda)).then_some(lambda)
}

/// Sectional curvature of the plane spanned by `F_a`, `F_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sectional {
    pub a: usize,
    pub b: usize,
    pub value: Rational,
}

/// Sectional curvatures of all nondegenerate coordinate planes `a < b`:
/// `K = R_{abab} / (G_aa G_bb − G_ab²)`.
pub fn sectional_curvatures(r: &Riemann, g: &FrameMetric) -> Vec<Sectional> {
    let n = r.dim();
    let low = r.lowered(g);
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let den = g.get(a, a) * g.get(b, b) - g.get(a, b) * g.get(a, b);
            if den.is_zero() {
                continue;
            }
            out.push(Sectional {
                a,
                b,
                value: low.get(a, b, a, b) / den,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstantCurvature {
    Constant(Rational),
    NotConstant { sectional: Vec<Sectional> },
}

impl ConstantCurvature {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            ConstantCurvature::Constant(k) => Some(k),
            ConstantCurvature::NotConstant { .. } => None,
        }
    }
}

/// Tests `R_{lkij} = κ(G_{li}G_{kj} − G_{lj}G_{ki})` on every component.
pub fn constant_curvature_check(r: &Riemann, g: &FrameMetric) -> ConstantCurvature {
    let n = r.dim();
    let low = r.lowered(g);
    let model = |l: usize, k: usize, i: usize, j: usize| -> Rational {
        g.get(l, i) * g.get(k, j) - g.get(l, j) * g.get(k, i)
    };
    let mut kappa: Option<Rational> = None;
    'search: for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let m = model(l, k, i, j);
                    if !m.is_zero() {
                        kappa = Some(low.get(l, k, i, j) / m);
                        break 'search;
                    }
                }
            }
        }
    }
    let kappa = kappa.unwrap_or_else(Rational::zero);
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if *low.get(l, k, i, j) != &kappa * model(l, k, i, j) {
                        return ConstantCurvature::NotConstant {
                            sectional: sectional_curvatures(r, g),
                        };
                    }
                }
            }
        }
    }
    ConstantCurvature::Constant(kappa)
}
