//! Claim evaluation and the per-entry verification report.
//!
//! Every claim ends in one of three statuses. A claim whose stated value is
//! reproduced passes; a mismatch is a failure unless the catalog flagged the
//! claim as a known discrepancy, in which case the mismatch is reported as
//! such. The process exit code follows the worst status.

mod crosscheck;

use std::fmt::{self, Write as _};

use num_traits::Zero;
use serde::Serialize;

use crate::catalog::{alpha_value, CatalogEntry, Claim, ClaimKind, ParamSet, Source};
use crate::frame_geometry::{
    constant_curvature_check, einstein_check, render_combination, ConstantCurvature, FrameMetric,
    Riemann,
};
use crate::group_model::{CoordinateGeometry, ExprMatrix, GroupModel};
use crate::linalg::{QMatrix, Rational};
use crate::scalar_expr::Expr;

pub use crosscheck::{crosscheck, CheckOutcome, CrossCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Discrepancy,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Discrepancy => "DISCREPANCY",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimOutcome {
    /// 1-based position in the entry's claim list.
    pub index: usize,
    pub kind: &'static str,
    pub source: Source,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionalEntry {
    /// 1-based frame indices of the plane.
    pub plane: [usize; 2],
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub discrepancy: usize,
    pub fail: usize,
    pub exit_code: i32,
}

/// Verification report of one catalog entry.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub id: String,
    pub title: String,
    /// Counts of positive and negative directions of the frame metric.
    pub signature: [usize; 2],
    /// Row `i`, column `j`: `∇_{F_i} F_j`.
    pub connection: Vec<Vec<String>>,
    pub ricci: Vec<Vec<String>>,
    pub scalar_curvature: String,
    /// Einstein constant, absent when the metric is not Einstein.
    pub einstein: Option<String>,
    /// Curvature constant, absent when the curvature is not constant.
    pub constant_curvature: Option<String>,
    pub sectional: Vec<SectionalEntry>,
    pub claims: Vec<ClaimOutcome>,
    pub summary: Summary,
}

fn render_rational_matrix(m: &QMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect()
}

fn render_expr_matrix(m: &ExprMatrix) -> Vec<Vec<String>> {
    m.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect()
}

/// `diag(a, b, c)` for diagonal tables, nested brackets otherwise.
pub fn matrix_text(rows: &[Vec<String>]) -> String {
    let diagonal = rows
        .iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, s)| i == j || s == "0"));
    if diagonal && rows.len() > 1 {
        let d: Vec<&str> = rows.iter().enumerate().map(|(i, r)| r[i].as_str()).collect();
        return format!("diag({})", d.join(", "));
    }
    let inner: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", inner.join(", "))
}

fn render_connection(entries: impl Fn(usize, usize) -> Vec<Rational>, n: usize) -> Vec<Vec<String>> {
    (0..n)
        .map(|i| (0..n).map(|j| render_combination(&entries(i, j), "F")).collect())
        .collect()
}

fn params_text(p: &ParamSet) -> String {
    if p.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{}: ", parts.join(", "))
}

fn curvature_text(c: &ConstantCurvature) -> String {
    match c {
        ConstantCurvature::Constant(k) => format!("constant curvature {k}"),
        ConstantCurvature::NotConstant { sectional } => {
            let parts: Vec<String> = sectional
                .iter()
                .map(|s| format!("K({},{}) = {}", s.a + 1, s.b + 1, s.value))
                .collect();
            format!("not constant; sectional {}", parts.join(", "))
        }
    }
}

fn einstein_text(e: &Option<Rational>) -> String {
    match e {
        Some(l) => format!("Einstein, Ric = {l}*g"),
        None => "not Einstein".to_string(),
    }
}

/// Entries where two matrices differ, as `(i,j): a vs b` lines.
fn matrix_differences(expected: &[Vec<String>], computed: &[Vec<String>]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, (er, cr)) in expected.iter().zip(computed).enumerate() {
        for (j, (e, c)) in er.iter().zip(cr).enumerate() {
            if e != c {
                out.push(format!("({},{}): expected {e}, computed {c}", i + 1, j + 1));
            }
        }
    }
    out
}

struct Verdict {
    matched: bool,
    expected: String,
    computed: String,
    details: Vec<String>,
    /// A mismatch caused by the tool disagreeing with itself, never
    /// downgraded to a discrepancy.
    internal_error: bool,
}

impl Verdict {
    fn new(matched: bool, expected: String, computed: String) -> Verdict {
        Verdict {
            matched,
            expected,
            computed,
            details: Vec::new(),
            internal_error: false,
        }
    }

    fn with_details(mut self, details: Vec<String>) -> Verdict {
        self.details = details;
        self
    }

    fn internal(expected: String, computed: String, detail: String) -> Verdict {
        Verdict {
            matched: false,
            expected,
            computed,
            details: vec![detail],
            internal_error: true,
        }
    }
}

/// Lazily computed data shared by the claims of one entry.
struct Context<'a> {
    entry: &'a CatalogEntry,
    riemann: Riemann,
    ricci: QMatrix,
    coordinate: Option<Result<CoordinateGeometry, String>>,
}

impl<'a> Context<'a> {
    fn new(entry: &'a CatalogEntry) -> Context<'a> {
        let curv = entry.model.curvature();
        Context {
            entry,
            riemann: curv.riemann,
            ricci: curv.ricci,
            coordinate: None,
        }
    }

    fn model(&self) -> &GroupModel {
        &self.entry.model
    }

    fn metric(&self) -> &FrameMetric {
        self.entry.model.metric()
    }

    fn coordinate(&mut self) -> Result<&CoordinateGeometry, String> {
        let model = &self.entry.model;
        self.coordinate
            .get_or_insert_with(|| CoordinateGeometry::compute(model).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn coordinate_riemann(&mut self) -> Result<Riemann, String> {
        let entry = self.entry;
        let geo = self.coordinate()?;
        geo.frame_riemann(&entry.model).map_err(|e| e.to_string())
    }

    fn field(&self, name: &str, p: &ParamSet) -> Result<crate::group_model::VectorField, String> {
        self.entry.vector_field(name, p).map_err(|e| e.to_string())
    }

    fn parse(&self, src: &str, p: &ParamSet) -> Result<Expr, String> {
        Expr::parse_with(self.model().chart(), src, p).map_err(|e| e.to_string())
    }
}

fn evaluate(ctx: &mut Context, claim: &Claim) -> Result<Verdict, String> {
    let n = ctx.model().dim();
    Ok(match &claim.kind {
        ClaimKind::Connection(expected) => {
            let conn = ctx.model().connection();
            let exp = render_connection(|i, j| expected.fiber(i, j).to_vec(), n);
            let got = render_connection(|i, j| conn.covariant(i, j).to_vec(), n);
            Verdict::new(expected == conn.array(), matrix_text(&exp), matrix_text(&got))
                .with_details(matrix_differences(&exp, &got))
        }
        ClaimKind::Ricci(expected) => {
            let exp = render_rational_matrix(expected);
            let got = render_rational_matrix(&ctx.ricci);
            Verdict::new(*expected == ctx.ricci, matrix_text(&exp), matrix_text(&got))
                .with_details(matrix_differences(&exp, &got))
        }
        ClaimKind::Flat => {
            let frame_flat = ctx.riemann.is_zero();
            let coord_flat = ctx.coordinate_riemann().map(|r| r.is_zero());
            let computed = if frame_flat { "Riemann tensor = 0" } else { "Riemann tensor != 0" }.to_string();
            match coord_flat {
                Ok(c) if c == frame_flat => Verdict::new(frame_flat, "flat".into(), computed),
                Ok(_) => Verdict::internal("flat".into(), computed, "frame and coordinate curvature disagree".into()),
                Err(e) => Verdict::internal("flat".into(), computed, format!("coordinate oracle: {e}")),
            }
        }
        ClaimKind::Einstein(expected) => {
            let got = einstein_check(&ctx.ricci, ctx.metric());
            Verdict::new(*expected == got, einstein_text(expected), einstein_text(&got))
        }
        ClaimKind::ConstantCurvature(expected) => {
            let frame = constant_curvature_check(&ctx.riemann, ctx.metric());
            let computed = curvature_text(&frame);
            let expected_text = match expected {
                Some(k) => format!("constant curvature {k}"),
                None => "not constant".to_string(),
            };
            let coord = ctx.coordinate_riemann();
            let metric = ctx.metric();
            match coord.map(|r| constant_curvature_check(&r, metric)) {
                Ok(c) if c == frame => {
                    let details = vec![format!("coordinate route agrees: {}", curvature_text(&c))];
                    Verdict::new(frame.value() == expected.as_ref(), expected_text, computed).with_details(details)
                }
                Ok(c) => Verdict::internal(
                    expected_text,
                    computed,
                    format!("coordinate route disagrees: {}", curvature_text(&c)),
                ),
                Err(e) => Verdict::internal(expected_text, computed, format!("coordinate oracle: {e}")),
            }
        }
        ClaimKind::CoordinateMetric(expected) => {
            let got = ctx.model().coordinate_metric();
            let (e, c) = (render_expr_matrix(expected), render_expr_matrix(&got));
            Verdict::new(*expected == got, matrix_text(&e), matrix_text(&c)).with_details(matrix_differences(&e, &c))
        }
        ClaimKind::CovariantDerivative { field, params, expected } => {
            let x = ctx.field(field, params)?;
            let got = ctx.model().covariant_derivative_matrix(&x);
            let (e, c) = (render_expr_matrix(expected), render_expr_matrix(&got));
            let mut details = vec![format!("{}field {field}", params_text(params))];
            details.extend(matrix_differences(&e, &c));
            Verdict::new(*expected == got, matrix_text(&e), matrix_text(&c)).with_details(details)
        }
        ClaimKind::Soliton {
            field,
            alpha,
            instances,
            class,
        } => {
            let mut all_zero = true;
            let mut classes_ok = true;
            let mut details = Vec::new();
            for p in instances {
                let x = ctx.field(field, p)?;
                let a = alpha_value(ctx.model().chart(), alpha, p).map_err(|e| e.to_string())?;
                let rep = ctx.model().soliton_residual(&x, &a);
                all_zero &= rep.residual_zero;
                classes_ok &= class.is_none_or(|c| c == rep.class);
                let residual = if rep.residual_zero {
                    "residual = 0".to_string()
                } else {
                    format!("residual = {}", matrix_text(&render_expr_matrix(&rep.residual)))
                };
                let witness = match &rep.gradient_obstruction_witness {
                    Some(w) => format!("non-gradient, curl ({},{}) = {}", w.i + 1, w.j + 1, w.value),
                    None => "curl = 0".to_string(),
                };
                details.push(format!("{}alpha = {a}, {residual}, {}, {witness}", params_text(p), rep.class));
            }
            let class_text = class.map(|c| format!(", {c}")).unwrap_or_default();
            let expected = format!("2Ric + L_{field} g + ({alpha})g = 0{class_text}");
            let computed = format!(
                "residual {} at {} parameter set(s){}",
                if all_zero { "vanishes" } else { "nonzero" },
                instances.len(),
                if classes_ok { class_text.clone() } else { ", class differs".to_string() }
            );
            Verdict::new(all_zero && classes_ok, expected, computed).with_details(details)
        }
        ClaimKind::NonGradient {
            field,
            instances,
            i,
            j,
            expected,
        } => {
            let (i, j) = (*i, *j);
            let mut ok = true;
            let mut details = Vec::new();
            let mut last = String::new();
            for p in instances {
                let x = ctx.field(field, p)?;
                let curl = &ctx.model().curl(&x)[i][j];
                let mut line = format!("{}curl ({},{}) = {curl}", params_text(p), i + 1, j + 1);
                if curl.is_zero() {
                    ok = false;
                    line.push_str(" (vanishes)");
                }
                if let Some(e) = expected {
                    let want = ctx.parse(e, p)?;
                    if want != *curl {
                        ok = false;
                        line.push_str(&format!(", expected {want}"));
                    }
                }
                last = curl.to_string();
                details.push(line);
            }
            let lhs = format!("nabla_{} {field}_{} - nabla_{} {field}_{}", i + 1, j + 1, j + 1, i + 1);
            let expected_text = match expected {
                Some(e) => format!("{lhs} = {e} != 0"),
                None => format!("{lhs} != 0"),
            };
            let computed = if instances.len() == 1 {
                format!("{lhs} = {last}")
            } else {
                format!("{lhs} evaluated at {} parameter sets", instances.len())
            };
            Verdict::new(ok, expected_text, computed).with_details(details)
        }
        ClaimKind::Killing { field, params, expected } => {
            let y = ctx.field(field, params)?;
            let rep = ctx.model().killing_residual(&y);
            let text = |k: bool| if k { format!("L_{field} g = 0") } else { format!("L_{field} g != 0") };
            let mut v = Verdict::new(rep.is_killing == *expected, text(*expected), text(rep.is_killing));
            if !rep.is_killing {
                v.details.push(format!("L_{field} g = {}", matrix_text(&render_expr_matrix(&rep.residual))));
            }
            v
        }
        ClaimKind::Bracket { left, right, expected } => {
            let none = ParamSet::new();
            let (x, y) = (ctx.field(left, &none)?, ctx.field(right, &none)?);
            let got = ctx.model().field_bracket(&x, &y);
            let mut want = crate::group_model::VectorField::zero(ctx.model().chart(), n);
            for (c, name) in expected {
                if !c.is_zero() {
                    want = want.add(&ctx.field(name, &none)?.scale(c));
                }
            }
            let coeffs: Vec<Rational> = expected.iter().map(|(c, _)| c.clone()).collect();
            let names: Vec<&str> = expected.iter().map(|(_, n)| n.as_str()).collect();
            Verdict::new(
                got == want,
                format!("[{left}, {right}] = {}", render_named(&coeffs, &names)),
                format!("[{left}, {right}] = {got}"),
            )
        }
    })
}

fn render_named(coeffs: &[Rational], names: &[&str]) -> String {
    // reuse the frame renderer, then swap the placeholder symbols for names
    let mut s = render_combination(coeffs, "\u{1}");
    for (k, name) in names.iter().enumerate().rev() {
        s = s.replace(&format!("\u{1}{}", k + 1), name);
    }
    s
}

fn evaluate_claim(ctx: &mut Context, index: usize, claim: &Claim) -> ClaimOutcome {
    let verdict = evaluate(ctx, claim)
        .unwrap_or_else(|e| Verdict::internal(String::new(), String::new(), format!("evaluation error: {e}")));
    let status = if verdict.matched {
        Status::Pass
    } else if claim.discrepancy.is_some() && !verdict.internal_error {
        Status::Discrepancy
    } else {
        Status::Fail
    };
    ClaimOutcome {
        index: index + 1,
        kind: claim.kind.label(),
        source: claim.source,
        status,
        expected: verdict.expected,
        computed: verdict.computed,
        details: verdict.details,
        note: claim.note.clone(),
        discrepancy: claim.discrepancy.clone(),
    }
}

impl Report {
    pub fn build(entry: &CatalogEntry) -> Report {
        let mut ctx = Context::new(entry);
        let claims: Vec<ClaimOutcome> = entry
            .claims
            .iter()
            .enumerate()
            .map(|(k, c)| evaluate_claim(&mut ctx, k, c))
            .collect();
        let model = &entry.model;
        let n = model.dim();
        let g = model.metric();
        let conn = model.connection();
        let curv = model.curvature();
        let cc = constant_curvature_check(&curv.riemann, g);
        let sectional = crate::frame_geometry::sectional_curvatures(&curv.riemann, g)
            .into_iter()
            .map(|s| SectionalEntry {
                plane: [s.a + 1, s.b + 1],
                value: s.value.to_string(),
            })
            .collect();
        let count = |s: Status| claims.iter().filter(|c| c.status == s).count();
        let (pass, discrepancy, fail) = (count(Status::Pass), count(Status::Discrepancy), count(Status::Fail));
        let exit_code = if fail > 0 {
            1
        } else if discrepancy > 0 {
            2
        } else {
            0
        };
        let (pos, neg) = g.signature();
        Report {
            id: entry.id.clone(),
            title: entry.title.clone(),
            signature: [pos, neg],
            connection: render_connection(|i, j| conn.covariant(i, j).to_vec(), n),
            ricci: render_rational_matrix(&curv.ricci),
            scalar_curvature: curv.scalar.to_string(),
            einstein: einstein_check(&curv.ricci, g).map(|l| l.to_string()),
            constant_curvature: cc.value().map(|k| k.to_string()),
            sectional,
            claims,
            summary: Summary {
                pass,
                discrepancy,
                fail,
                exit_code,
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    /// Deterministic human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.id, self.title);
        let _ = writeln!(s, "signature: ({}, {})", self.signature[0], self.signature[1]);
        let _ = writeln!(s, "connection (row i, column j: nabla_Fi Fj):");
        write_table(&mut s, &self.connection);
        let _ = writeln!(s, "ricci:");
        write_table(&mut s, &self.ricci);
        let _ = writeln!(s, "scalar curvature: {}", self.scalar_curvature);
        let _ = writeln!(
            s,
            "einstein: {}",
            self.einstein.as_ref().map_or("no".to_string(), |l| format!("yes, Ric = {l}*g"))
        );
        let _ = writeln!(
            s,
            "constant curvature: {}",
            self.constant_curvature.as_ref().map_or("no".to_string(), |k| format!("yes, {k}"))
        );
        if !self.sectional.is_empty() {
            let parts: Vec<String> = self
                .sectional
                .iter()
                .map(|e| format!("K({},{}) = {}", e.plane[0], e.plane[1], e.value))
                .collect();
            let _ = writeln!(s, "sectional: {}", parts.join(", "));
        }
        let _ = writeln!(s, "claims:");
        for c in &self.claims {
            let source = match c.source {
                Source::Published => "published",
                Source::Derived => "derived",
            };
            let _ = writeln!(s, "  [{}] #{} {} ({source})", c.status, c.index, c.kind);
            let _ = writeln!(s, "      expected: {}", c.expected);
            let _ = writeln!(s, "      computed: {}", c.computed);
            for d in &c.details {
                let _ = writeln!(s, "        {d}");
            }
            if let Some(n) = &c.note {
                let _ = writeln!(s, "      note: {n}");
            }
            if c.status == Status::Discrepancy {
                if let Some(d) = &c.discrepancy {
                    let _ = writeln!(s, "      discrepancy: {d}");
                }
            }
        }
        let _ = writeln!(
            s,
            "summary: {} pass, {} discrepancy, {} fail (exit {})",
            self.summary.pass, self.summary.discrepancy, self.summary.fail, self.summary.exit_code
        );
        s
    }
}

fn write_table(s: &mut String, rows: &[Vec<String>]) {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(s, "  [ {} ]", cells.join("  "));
    }
}
