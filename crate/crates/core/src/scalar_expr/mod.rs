//! Exact scalar functions on a coordinate chart.
//!
//! An [`Expr`] is a finite sum of rational multiples of atoms
//!
//! ```text
//!   Π_c  c^p · sin(c)^s · cos(c)^ε · e^{k·c}        ε ∈ {0, 1}
//! ```
//!
//! where trigonometric atoms are only allowed on coordinates declared
//! [`CoordKind::Trig`] and exponential atoms only on coordinates declared
//! [`CoordKind::Exp`]. Every `cos²` is rewritten as `1 − sin²` as soon as it
//! appears, so the atom family is linearly independent and the normal form is
//! canonical: an expression is the zero function iff it has no terms.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Rational;

pub use parse::{parse_rational, ParseError};

/// Which transcendental atoms a coordinate may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordKind {
    /// Polynomial dependence only.
    Poly,
    /// Polynomial times `sin`/`cos` of the coordinate.
    Trig,
    /// Polynomial times `e^{k·coord}`, `k ∈ ℤ`.
    Exp,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordDecl {
    pub name: String,
    pub kind: CoordKind,
}

impl CoordDecl {
    pub fn new(name: impl Into<String>, kind: CoordKind) -> Self {
        CoordDecl {
            name: name.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error("expressions live on different charts")]
    ChartMismatch,
    #[error("duplicate coordinate name `{0}`")]
    DuplicateCoordinate(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("point is missing a value for coordinate `{0}`")]
    MissingCoordinate(String),
}

/// An ordered list of distinct coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    coords: Vec<CoordDecl>,
}

impl Chart {
    pub fn new(coords: Vec<CoordDecl>) -> Result<Arc<Chart>, ExprError> {
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].iter().any(|d| d.name == c.name) {
                return Err(ExprError::DuplicateCoordinate(c.name.clone()));
            }
        }
        Ok(Arc::new(Chart { coords }))
    }

    /// A chart whose coordinates are all polynomial.
    pub fn polynomial(names: &[&str]) -> Result<Arc<Chart>, ExprError> {
        Chart::new(
            names
                .iter()
                .map(|n| CoordDecl::new(*n, CoordKind::Poly))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[CoordDecl] {
        &self.coords
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.coords[idx].name
    }

    pub fn kind(&self, idx: usize) -> CoordKind {
        self.coords[idx].kind
    }
}

/// Atoms attached to one coordinate inside a term.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Atom {
    pub(crate) pow: u32,
    pub(crate) sin: u32,
    pub(crate) cos: u32,
    pub(crate) exp: i32,
}

impl Atom {
    fn is_one(&self) -> bool {
        *self == Atom::default()
    }
}

/// The signature of a term: one [`Atom`] per chart coordinate.
type Signature = Vec<Atom>;

/// Exact scalar function in canonical normal form.
#[derive(Clone)]
pub struct Expr {
    chart: Arc<Chart>,
    terms: BTreeMap<Signature, Rational>,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for Expr {}

fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Expr {
    pub fn zero(chart: &Arc<Chart>) -> Expr {
        Expr {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Arc<Chart>) -> Expr {
        Expr::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Arc<Chart>, value: Rational) -> Expr {
        let mut e = Expr::zero(chart);
        e.push(vec![Atom::default(); chart.dim()], value);
        e
    }

    pub fn integer(chart: &Arc<Chart>, value: i64) -> Expr {
        Expr::constant(chart, Rational::from_integer(BigInt::from(value)))
    }

    /// The coordinate function itself.
    pub fn coord(chart: &Arc<Chart>, name: &str) -> Result<Expr, ExprError> {
        let idx = chart
            .index_of(name)
            .ok_or_else(|| ExprError::UnknownCoordinate(name.to_string()))?;
        Ok(Expr::atom(chart, idx, Atom { pow: 1, ..Atom::default() }))
    }

    pub(crate) fn atom(chart: &Arc<Chart>, idx: usize, atom: Atom) -> Expr {
        let mut sig = vec![Atom::default(); chart.dim()];
        sig[idx] = atom;
        let mut e = Expr::zero(chart);
        e.push_raw(sig, Rational::one());
        e
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The rational value if the expression is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (sig, c) = self.terms.iter().next()?;
                sig.iter().all(Atom::is_one).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Multiplicative inverse when it stays inside the atom family, i.e. for a
    /// single term built from a nonzero constant and exponential atoms.
    pub fn unit_inverse(&self) -> Option<Expr> {
        if self.terms.len() != 1 {
            return None;
        }
        let (sig, c) = self.terms.iter().next()?;
        if sig.iter().any(|a| a.pow != 0 || a.sin != 0 || a.cos != 0) {
            return None;
        }
        let inv: Signature = sig
            .iter()
            .map(|a| Atom {
                exp: -a.exp,
                ..Atom::default()
            })
            .collect();
        let mut e = Expr::zero(&self.chart);
        e.push(inv, c.recip());
        Some(e)
    }

    pub fn scale(&self, factor: &Rational) -> Expr {
        if factor.is_zero() {
            return Expr::zero(&self.chart);
        }
        Expr {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), c * factor))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Expr) -> Result<Expr, ExprError> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(ExprError::ChartMismatch);
        }
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.push(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Expr) -> Result<Expr, ExprError> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Expr) -> Result<Expr, ExprError> {
        if !same_chart(&self.chart, &other.chart) {
            return Err(ExprError::ChartMismatch);
        }
        let mut out = Expr::zero(&self.chart);
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                let sig: Signature = sa
                    .iter()
                    .zip(sb)
                    .map(|(a, b)| Atom {
                        pow: a.pow + b.pow,
                        sin: a.sin + b.sin,
                        cos: a.cos + b.cos,
                        exp: a.exp + b.exp,
                    })
                    .collect();
                out.push_raw(sig, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one(&self.chart);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact partial derivative with respect to chart coordinate `idx`.
    pub fn diff(&self, idx: usize) -> Expr {
        assert!(idx < self.chart.dim(), "coordinate index out of range");
        let mut out = Expr::zero(&self.chart);
        for (sig, c) in &self.terms {
            let a = sig[idx];
            if a.pow > 0 {
                let mut s = sig.clone();
                s[idx].pow -= 1;
                out.push_raw(s, c * Rational::from_integer(a.pow.into()));
            }
            if a.sin > 0 {
                // d sin^s = s sin^{s-1} cos
                let mut s = sig.clone();
                s[idx].sin -= 1;
                s[idx].cos += 1;
                out.push_raw(s, c * Rational::from_integer(a.sin.into()));
            }
            if a.cos > 0 {
                // d cos^m = -m sin cos^{m-1}
                let mut s = sig.clone();
                s[idx].sin += 1;
                s[idx].cos -= 1;
                out.push_raw(s, -(c * Rational::from_integer(a.cos.into())));
            }
            if a.exp != 0 {
                out.push_raw(sig.clone(), c * Rational::from_integer(a.exp.into()));
            }
        }
        out
    }

    /// Partial derivative by coordinate name.
    pub fn diff_by(&self, name: &str) -> Result<Expr, ExprError> {
        let idx = self
            .chart
            .index_of(name)
            .ok_or_else(|| ExprError::UnknownCoordinate(name.to_string()))?;
        Ok(self.diff(idx))
    }

    /// Floating-point evaluation; `point` is indexed like the chart.
    pub fn eval(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.chart.dim(), "point dimension");
        self.terms
            .iter()
            .map(|(sig, c)| {
                let mut v = c.to_f64().unwrap_or(f64::NAN);
                for (a, &x) in sig.iter().zip(point) {
                    if a.pow > 0 {
                        v *= x.powi(a.pow as i32);
                    }
                    if a.sin > 0 {
                        v *= x.sin().powi(a.sin as i32);
                    }
                    if a.cos > 0 {
                        v *= x.cos().powi(a.cos as i32);
                    }
                    if a.exp != 0 {
                        v *= (a.exp as f64 * x).exp();
                    }
                }
                v
            })
            .sum()
    }

    /// Floating-point evaluation at a named point.
    pub fn eval_named(&self, point: &BTreeMap<String, f64>) -> Result<f64, ExprError> {
        let values = self
            .chart
            .coords()
            .iter()
            .map(|c| {
                point
                    .get(&c.name)
                    .copied()
                    .ok_or_else(|| ExprError::MissingCoordinate(c.name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.eval(&values))
    }

    /// Parses the textual form produced by `Display` (and ordinary infix
    /// arithmetic over the chart's coordinates).
    pub fn parse(chart: &Arc<Chart>, src: &str) -> Result<Expr, ParseError> {
        parse::parse(chart, src, &BTreeMap::new())
    }

    /// Like [`Expr::parse`], with identifiers in `params` replaced by the
    /// given rational values.
    pub fn parse_with(
        chart: &Arc<Chart>,
        src: &str,
        params: &BTreeMap<String, Rational>,
    ) -> Result<Expr, ParseError> {
        parse::parse(chart, src, params)
    }

    /// Coefficients of a homogeneous linear form in the chart coordinates;
    /// `None` if the expression is anything else.
    pub fn linear_coefficients(&self) -> Option<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.chart.dim()];
        for (sig, c) in &self.terms {
            let mut hit = None;
            for (i, a) in sig.iter().enumerate() {
                if a.is_one() {
                    continue;
                }
                if hit.is_some() || *a != (Atom { pow: 1, ..Atom::default() }) {
                    return None;
                }
                hit = Some(i);
            }
            out[hit?] = c.clone();
        }
        Some(out)
    }

    /// Adds a term that may carry `cos^m` with `m ≥ 2`, reducing it.
    fn push_raw(&mut self, mut sig: Signature, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let Some(idx) = sig.iter().position(|a| a.cos >= 2) else {
            self.push(sig, coeff);
            return;
        };
        // cos^m = cos^{m-2} (1 - sin^2)
        sig[idx].cos -= 2;
        let mut with_sin = sig.clone();
        with_sin[idx].sin += 2;
        self.push_raw(sig, coeff.clone());
        self.push_raw(with_sin, -coeff);
    }

    fn push(&mut self, sig: Signature, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        debug_assert!(sig.iter().all(|a| a.cos <= 1));
        let entry = self.terms.entry(sig);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(s, c)| (s.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

// Operators panic on chart mismatch; use the `try_*` methods when mixing
// expressions from untrusted sources.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                self.$try(rhs).expect("chart mismatch")
            }
        }
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                (&self).$try(&rhs).expect("chart mismatch")
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                (&self).$try(rhs).expect("chart mismatch")
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                self.$try(&rhs).expect("chart mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (sig, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let factors = render_factors(&self.chart, sig);
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

fn render_factors(chart: &Chart, sig: &Signature) -> Vec<String> {
    let mut out = Vec::new();
    for (i, a) in sig.iter().enumerate() {
        let name = chart.name(i);
        match a.pow {
            0 => {}
            1 => out.push(name.to_string()),
            p => out.push(format!("{name}^{p}")),
        }
        match a.sin {
            0 => {}
            1 => out.push(format!("sin({name})")),
            s => out.push(format!("sin({name})^{s}")),
        }
        if a.cos > 0 {
            out.push(format!("cos({name})"));
        }
        match a.exp {
            0 => {}
            1 => out.push(format!("exp({name})")),
            -1 => out.push(format!("exp(-{name})")),
            k => out.push(format!("exp({k}*{name})")),
        }
    }
    out
}
