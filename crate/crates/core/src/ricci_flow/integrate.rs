use std::fmt;
use std::io::{self, Write};

use super::{flow_rhs_reduced, ClosedForm, FlowError, FlowState, SystemKind};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrateOptions {
    /// Split a step in half while `max |dY|·h/Y` exceeds this.
    pub halving_threshold: Option<f64>,
    pub max_halvings: u32,
    /// Components below this end the trajectory.
    pub positivity_floor: f64,
    /// Cap on RK4 steps, substeps included.
    pub max_steps: u64,
    /// A single step changing some component by more than this fraction is
    /// taken as a finite-time singularity.
    pub blowup_ratio: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            halving_threshold: None,
            max_halvings: 30,
            positivity_floor: 1e-12,
            max_steps: 10_000_000,
            blowup_ratio: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowEvent {
    /// Integration stopped at `t` (the last valid state); `predicted` is the
    /// closed-form singular time.
    BlowUp { t: f64, predicted: Option<f64> },
    PositivityLost { t: f64, component: char },
    MaxSteps { t: f64 },
}

impl FlowEvent {
    pub fn t(&self) -> f64 {
        match self {
            FlowEvent::BlowUp { t, .. } | FlowEvent::PositivityLost { t, .. } | FlowEvent::MaxSteps { t } => *t,
        }
    }
}

impl fmt::Display for FlowEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowEvent::BlowUp { t, predicted } => {
                write!(f, "blow-up detected after t={}", format_float(*t, 12))?;
                if let Some(p) = predicted {
                    write!(f, " (closed-form singularity at t={})", format_float(*p, 12))?;
                }
                Ok(())
            }
            FlowEvent::PositivityLost { t, component } => {
                write!(f, "positivity lost in {component} after t={}", format_float(*t, 12))
            }
            FlowEvent::MaxSteps { t } => write!(f, "step cap reached at t={}", format_float(*t, 12)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub kind: SystemKind,
    pub states: Vec<FlowState>,
    pub events: Vec<FlowEvent>,
    /// RK4 steps taken, substeps included.
    pub steps: u64,
}

impl Trajectory {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Whether integration ended before the requested end time.
    pub fn truncated(&self) -> bool {
        !self.events.is_empty()
    }
}

enum StepFailure {
    BlowUp,
    Positivity(char),
}

struct Stepper {
    kind: SystemKind,
    opts: IntegrateOptions,
    steps: u64,
}

fn axpy(y: &[f64; 3], h: f64, k: &[f64; 3]) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

impl Stepper {
    fn rhs(&self, y: [f64; 3]) -> Result<[f64; 3], StepFailure> {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(StepFailure::BlowUp);
        }
        flow_rhs_reduced(self.kind, y).map_err(|_| StepFailure::BlowUp)
    }

    fn rk4(&mut self, y: &mut [f64; 3], comp: &mut [f64; 3], h: f64) -> Result<(), StepFailure> {
        let k1 = self.rhs(*y)?;
        let k2 = self.rhs(axpy(y, h / 2.0, &k1))?;
        let k3 = self.rhs(axpy(y, h / 2.0, &k2))?;
        let k4 = self.rhs(axpy(y, h, &k3))?;
        self.steps += 1;
        let mut next = *y;
        let mut next_comp = *comp;
        for i in 0..3 {
            let incr = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            // compensated update keeps round-off below the truncation error
            let adj = incr - next_comp[i];
            let sum = next[i] + adj;
            next_comp[i] = (sum - next[i]) - adj;
            next[i] = sum;
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(StepFailure::BlowUp);
        }
        let ratio = (0..3).map(|i| ((next[i] - y[i]) / y[i]).abs()).fold(0.0, f64::max);
        if ratio > self.opts.blowup_ratio {
            return Err(StepFailure::BlowUp);
        }
        if let Some(i) = (0..3).find(|&i| next[i] < self.opts.positivity_floor) {
            return Err(StepFailure::Positivity(['A', 'B', 'C'][i]));
        }
        *y = next;
        *comp = next_comp;
        Ok(())
    }

    fn advance(&mut self, y: &mut [f64; 3], comp: &mut [f64; 3], h: f64, depth: u32) -> Result<(), StepFailure> {
        if let Some(threshold) = self.opts.halving_threshold {
            if depth < self.opts.max_halvings {
                let k = self.rhs(*y)?;
                let rel = (0..3).map(|i| (k[i] * h / y[i]).abs()).fold(0.0, f64::max);
                if rel > threshold {
                    self.advance(y, comp, h / 2.0, depth + 1)?;
                    return self.advance(y, comp, h / 2.0, depth + 1);
                }
            }
        }
        self.rk4(y, comp, h)
    }
}

/// Classical RK4 on the grid `t₀ + k·dt`, the last step shortened to land on
/// `t_end`. One state is recorded per grid point.
pub fn integrate(
    kind: SystemKind,
    initial: FlowState,
    t_end: f64,
    dt: f64,
    opts: &IntegrateOptions,
) -> Result<Trajectory, FlowError> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(FlowError::BadStep(dt));
    }
    let FlowState { t: t0, a, b, c } = initial;
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(FlowError::NonPositive(a.to_string(), b.to_string(), c.to_string()));
    }
    if t_end.is_nan() || t_end < t0 {
        return Err(FlowError::BadInterval { start: t0, end: t_end });
    }
    let span = (t_end - t0) / dt;
    let whole = span.round();
    let n = if (span - whole).abs() < 1e-9 { whole as u64 } else { span.ceil() as u64 };

    let mut stepper = Stepper {
        kind,
        opts: *opts,
        steps: 0,
    };
    let mut states = vec![initial];
    let mut events = Vec::new();
    let mut y = [a, b, c];
    let mut comp = [0.0; 3];
    for k in 1..=n {
        let t_prev = states.last().unwrap().t;
        let t_next = if k == n { t_end } else { t0 + k as f64 * dt };
        if stepper.steps >= opts.max_steps {
            events.push(FlowEvent::MaxSteps { t: t_prev });
            break;
        }
        match stepper.advance(&mut y, &mut comp, t_next - t_prev, 0) {
            Ok(()) => states.push(FlowState::new(t_next, y[0], y[1], y[2])),
            Err(StepFailure::BlowUp) => {
                let predicted = ClosedForm::new(kind, initial).ok().and_then(|cf| cf.blow_up_time());
                events.push(FlowEvent::BlowUp { t: t_prev, predicted });
                break;
            }
            Err(StepFailure::Positivity(component)) => {
                events.push(FlowEvent::PositivityLost { t: t_prev, component });
                break;
            }
        }
    }
    Ok(Trajectory {
        kind,
        states,
        events,
        steps: stepper.steps,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConservedReport {
    pub ab: Vec<f64>,
    pub ac: Vec<f64>,
    pub abc: Vec<f64>,
    /// Largest `|AB(t) - AB(t₀)| / |AB(t₀)|`.
    pub max_drift_ab: f64,
    pub max_drift_ac: f64,
    /// Largest relative gap between the central difference of `ABC` and
    /// `±A²` at interior states.
    pub max_volume_rate_error: f64,
    /// `ABC` strictly moves in the direction its derivative predicts.
    pub volume_monotone: bool,
}

pub fn conserved_quantities(traj: &Trajectory) -> ConservedReport {
    let s = &traj.states;
    let ab: Vec<f64> = s.iter().map(|x| x.a * x.b).collect();
    let ac: Vec<f64> = s.iter().map(|x| x.a * x.c).collect();
    let abc: Vec<f64> = s.iter().map(|x| x.a * x.b * x.c).collect();
    let drift = |v: &[f64]| v.iter().map(|x| ((x - v[0]) / v[0]).abs()).fold(0.0, f64::max);
    let sign = traj.kind.volume_sign();
    let mut rate_err: f64 = 0.0;
    for i in 1..s.len().saturating_sub(1) {
        let fd = (abc[i + 1] - abc[i - 1]) / (s[i + 1].t - s[i - 1].t);
        let exact = sign * s[i].a * s[i].a;
        rate_err = rate_err.max(((fd - exact) / exact).abs());
    }
    let volume_monotone = abc.windows(2).all(|w| sign * (w[1] - w[0]) > 0.0);
    ConservedReport {
        max_drift_ab: drift(&ab),
        max_drift_ac: drift(&ac),
        max_volume_rate_error: rate_err,
        volume_monotone,
        ab,
        ac,
        abc,
    }
}

/// Renders `x` with `digits` significant digits, fixed-point for moderate
/// magnitudes and scientific otherwise; trailing zeros are dropped.
pub fn format_float(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `t,A,B,C,AB,AC,ABC` rows for every `stride`-th state (the last
/// state is always included), then the events as `#` lines.
pub fn write_csv<W: Write>(traj: &Trajectory, out: &mut W, stride: usize, digits: usize) -> io::Result<()> {
    let stride = stride.max(1);
    writeln!(out, "t,A,B,C,AB,AC,ABC")?;
    let last = traj.states.len() - 1;
    for (i, s) in traj.states.iter().enumerate() {
        if i % stride != 0 && i != last {
            continue;
        }
        let row = [s.t, s.a, s.b, s.c, s.a * s.b, s.a * s.c, s.a * s.b * s.c];
        let cells: Vec<String> = row.iter().map(|v| format_float(*v, digits)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    for e in &traj.events {
        writeln!(out, "# {e}")?;
    }
    Ok(())
}
