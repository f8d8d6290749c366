//! Ricci flow of diagonal left-invariant metrics on the Heisenberg group.
//!
//! The metric is `g(t) = A (θ¹)² + B (θ²)² ± C (θ³)²` in the frame with the single
//! bracket `[F2, F3] = F1`. The flow `∂g/∂t = -2σ Ric` reduces to a
//! three-dimensional ODE with two conserved quantities `AB` and `AC`, which
//! gives a closed form used as the accuracy oracle for the integrator.

mod integrate;

use std::fmt;
use std::str::FromStr;

use num_traits::{Num, Signed};

use crate::frame_geometry::{
    levi_civita_ad, CurvatureData, FrameMetric, StructureConstants,
};
use crate::linalg::{int, Rational};

pub use integrate::{
    conserved_quantities, format_float, integrate, write_csv, ConservedReport, FlowEvent,
    IntegrateOptions, Trajectory,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SystemKind {
    RiemannianForward,
    RiemannianBackward,
    LorentzForward,
}

impl SystemKind {
    pub const ALL: [SystemKind; 3] = [
        SystemKind::RiemannianForward,
        SystemKind::RiemannianBackward,
        SystemKind::LorentzForward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::RiemannianForward => "riemannian-forward",
            SystemKind::RiemannianBackward => "riemannian-backward",
            SystemKind::LorentzForward => "lorentz-forward",
        }
    }

    /// `σ` in `∂g/∂t = -2σ Ric`.
    pub fn sigma(self) -> i64 {
        match self {
            SystemKind::RiemannianBackward => -1,
            _ => 1,
        }
    }

    pub fn is_lorentz(self) -> bool {
        self == SystemKind::LorentzForward
    }

    /// Sign of `(ABC)' = ±A²`; also the direction of `ABC` along the flow.
    pub fn volume_sign(self) -> f64 {
        match self {
            SystemKind::RiemannianForward => 1.0,
            _ => -1.0,
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SystemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FlowError::UnknownSystem(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("unknown flow system `{0}` (expected riemannian-forward, riemannian-backward or lorentz-forward)")]
    UnknownSystem(String),
    #[error("state must be positive, got A={0}, B={1}, C={2}")]
    NonPositive(String, String, String),
    #[error("step size must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("end time {end} precedes start time {start}")]
    BadInterval { start: f64, end: f64 },
}

/// A flow system together with the Lie algebra it lives on.
#[derive(Clone, Debug)]
pub struct FlowSystem {
    pub kind: SystemKind,
    pub algebra: StructureConstants,
}

impl FlowSystem {
    pub fn heisenberg(kind: SystemKind) -> FlowSystem {
        FlowSystem {
            kind,
            algebra: StructureConstants::from_brackets(3, &[(1, 2, vec![int(1), int(0), int(0)])]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl FlowState {
    pub fn new(t: f64, a: f64, b: f64, c: f64) -> FlowState {
        FlowState { t, a, b, c }
    }

    pub fn abc(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }
}

/// The hand-reduced right-hand side:
/// forward `(-A²/(BC), A/C, A/B)`; backward and Lorentz the negatives.
pub fn flow_rhs_reduced<T>(kind: SystemKind, [a, b, c]: [T; 3]) -> Result<[T; 3], FlowError>
where
    T: Clone + Num + Signed + PartialOrd + fmt::Display,
{
    if !(a.is_positive() && b.is_positive() && c.is_positive()) {
        return Err(FlowError::NonPositive(a.to_string(), b.to_string(), c.to_string()));
    }
    let da = -(a.clone() * a.clone()) / (b.clone() * c.clone());
    let db = a.clone() / c;
    let dc = a / b;
    Ok(match kind {
        SystemKind::RiemannianForward => [da, db, dc],
        _ => [-da, -db, -dc],
    })
}

/// Right-hand side read off the frame Ricci tensor of `diag(A, B, ±C)`.
pub fn flow_rhs_derived(system: &FlowSystem, [a, b, c]: [Rational; 3]) -> Result<[Rational; 3], FlowError> {
    if !(a.is_positive() && b.is_positive() && c.is_positive()) {
        return Err(FlowError::NonPositive(a.to_string(), b.to_string(), c.to_string()));
    }
    let c_entry = if system.kind.is_lorentz() { -c } else { c };
    let g = FrameMetric::diagonal(&[a, b, c_entry]).expect("positive entries are nondegenerate");
    let conn = levi_civita_ad(&system.algebra, &g);
    let ric = CurvatureData::compute(&system.algebra, &conn, &g).ricci;
    let k = int(-2 * system.kind.sigma());
    let dg = |i: usize| &ric[(i, i)] * &k;
    // dg₃₃ = -dC on the Lorentz template
    let dc = if system.kind.is_lorentz() { -dg(2) } else { dg(2) };
    Ok([dg(0), dg(1), dc])
}

/// Exact solution through a positive initial state.
///
/// With `k₁ = A₀B₀`, `k₂ = A₀C₀` the system reduces to `A' = ∓A⁴/(k₁k₂)`, so
/// `A(t) = (A₀⁻³ ± 3(t - t₀)/(k₁k₂))^(-1/3)`, `B = k₁/A`, `C = k₂/A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedForm {
    pub kind: SystemKind,
    pub t0: f64,
    pub a0: f64,
    pub k1: f64,
    pub k2: f64,
}

impl ClosedForm {
    pub fn new(kind: SystemKind, initial: FlowState) -> Result<ClosedForm, FlowError> {
        let FlowState { t, a, b, c } = initial;
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(FlowError::NonPositive(a.to_string(), b.to_string(), c.to_string()));
        }
        Ok(ClosedForm {
            kind,
            t0: t,
            a0: a,
            k1: a * b,
            k2: a * c,
        })
    }

    fn rate(&self) -> f64 {
        3.0 * self.kind.volume_sign() / (self.k1 * self.k2)
    }

    fn base(&self, t: f64) -> f64 {
        self.a0.powi(-3) + self.rate() * (t - self.t0)
    }

    /// Distance from `t₀` to the finite end of the existence interval.
    pub fn horizon(&self) -> f64 {
        self.k1 * self.k2 / (3.0 * self.a0.powi(3))
    }

    /// Maximal open existence interval, with infinite ends as `±∞`.
    pub fn interval(&self) -> (f64, f64) {
        let h = self.horizon();
        match self.kind {
            SystemKind::RiemannianForward => (self.t0 - h, f64::INFINITY),
            _ => (f64::NEG_INFINITY, self.t0 + h),
        }
    }

    /// Finite forward time at which `A → ∞` and `B, C → 0`, if any.
    pub fn blow_up_time(&self) -> Option<f64> {
        match self.kind {
            SystemKind::RiemannianForward => None,
            _ => Some(self.t0 + self.horizon()),
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        let (lo, hi) = self.interval();
        lo < t && t < hi
    }

    /// `(A, B, C)` at `t`, or `None` outside the existence interval.
    pub fn state(&self, t: f64) -> Option<[f64; 3]> {
        if !self.contains(t) {
            return None;
        }
        let a = self.base(t).powf(-1.0 / 3.0);
        Some([a, self.k1 / a, self.k2 / a])
    }

    /// Time derivative by the chain rule on the closed form.
    pub fn derivative(&self, t: f64) -> Option<[f64; 3]> {
        let [a, ..] = self.state(t)?;
        let da = -self.rate() / 3.0 * self.base(t).powf(-4.0 / 3.0);
        Some([da, -self.k1 * da / (a * a), -self.k2 * da / (a * a)])
    }
}
