//! Shipped example metrics and their claims, plus the loader for user models.
//!
//! Each model is a TOML document (see [`format::EntrySpec`]). The shipped
//! documents are compiled into the library; `load_str`/`load_file` accept the
//! same format from users.

pub mod format;

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::frame_geometry::{Array3, FrameMetric, MetricError, StructureConstants};
use crate::group_model::{ExprMatrix, GroupModel, ModelError, ModelViolation, SolitonClass, VectorField};
use crate::linalg::{QMatrix, Rational};
use crate::scalar_expr::{parse_rational, Chart, CoordDecl, Expr};

pub use format::{EntrySpec, Source};

const SHIPPED: [(&str, &str); 8] = [
    ("h3.g1", include_str!("../../catalog/h3.g1.toml")),
    ("h3.g2", include_str!("../../catalog/h3.g2.toml")),
    ("h3.g3", include_str!("../../catalog/h3.g3.toml")),
    ("e2.g1", include_str!("../../catalog/e2.g1.toml")),
    ("e2.g2", include_str!("../../catalog/e2.g2.toml")),
    ("e11.g1", include_str!("../../catalog/e11.g1.toml")),
    ("e11.g2", include_str!("../../catalog/e11.g2.toml")),
    ("r2.gaussian", include_str!("../../catalog/r2.gaussian.toml")),
];

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model document: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("{context}: {message}")]
    Content { context: String, message: String },
    #[error("model `{id}` fails validation:\n  {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("\n  "))]
    Invalid {
        id: String,
        violations: Vec<ModelViolation>,
    },
}

fn content(context: impl Into<String>, message: impl ToString) -> CatalogError {
    CatalogError::Content {
        context: context.into(),
        message: message.to_string(),
    }
}

pub type ParamSet = BTreeMap<String, Rational>;

/// A named vector field whose components may depend on rational parameters.
#[derive(Debug, Clone)]
pub struct FieldTemplate {
    pub name: String,
    pub params: Vec<String>,
    pub components: Vec<String>,
}

impl FieldTemplate {
    pub fn instantiate(&self, chart: &Arc<Chart>, params: &ParamSet) -> Result<VectorField, CatalogError> {
        for p in &self.params {
            if !params.contains_key(p) {
                return Err(content(format!("field {}", self.name), format!("missing parameter `{p}`")));
            }
        }
        let comps = self
            .components
            .iter()
            .map(|src| Expr::parse_with(chart, src, params))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| content(format!("field {}", self.name), e))?;
        Ok(VectorField::new(comps))
    }
}

#[derive(Debug, Clone)]
pub enum ClaimKind {
    Connection(Array3),
    Ricci(QMatrix),
    Flat,
    Einstein(Option<Rational>),
    ConstantCurvature(Option<Rational>),
    CoordinateMetric(ExprMatrix),
    CovariantDerivative {
        field: String,
        params: ParamSet,
        expected: ExprMatrix,
    },
    Soliton {
        field: String,
        alpha: String,
        instances: Vec<ParamSet>,
        class: Option<SolitonClass>,
    },
    /// 0-based curl entry `(i, j)`.
    NonGradient {
        field: String,
        instances: Vec<ParamSet>,
        i: usize,
        j: usize,
        expected: Option<String>,
    },
    Killing {
        field: String,
        params: ParamSet,
        expected: bool,
    },
    Bracket {
        left: String,
        right: String,
        expected: Vec<(Rational, String)>,
    },
}

impl ClaimKind {
    pub fn label(&self) -> &'static str {
        match self {
            ClaimKind::Connection(_) => "connection",
            ClaimKind::Ricci(_) => "ricci",
            ClaimKind::Flat => "flat",
            ClaimKind::Einstein(_) => "einstein",
            ClaimKind::ConstantCurvature(_) => "constant-curvature",
            ClaimKind::CoordinateMetric(_) => "coordinate-metric",
            ClaimKind::CovariantDerivative { .. } => "covariant-derivative",
            ClaimKind::Soliton { .. } => "soliton",
            ClaimKind::NonGradient { .. } => "non-gradient",
            ClaimKind::Killing { .. } => "killing",
            ClaimKind::Bracket { .. } => "bracket",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Claim {
    pub source: Source,
    pub note: Option<String>,
    pub discrepancy: Option<String>,
    pub kind: ClaimKind,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub title: String,
    pub model: GroupModel,
    pub fields: Vec<FieldTemplate>,
    pub claims: Vec<Claim>,
    pub spec: EntrySpec,
}

impl CatalogEntry {
    pub fn field(&self, name: &str) -> Option<&FieldTemplate> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Instantiates a named field; unknown names are content errors.
    pub fn vector_field(&self, name: &str, params: &ParamSet) -> Result<VectorField, CatalogError> {
        self.field(name)
            .ok_or_else(|| content(&self.id, format!("unknown field `{name}`")))?
            .instantiate(self.model.chart(), params)
    }
}

/// Shipped ids in their stable order.
pub fn catalog_list() -> Vec<&'static str> {
    SHIPPED.iter().map(|(id, _)| *id).collect()
}

pub fn catalog_get(id: &str) -> Result<CatalogEntry, CatalogError> {
    load_str(shipped_source(id)?)
}

/// The TOML document of a shipped entry, for export and editing.
pub fn shipped_source(id: &str) -> Result<&'static str, CatalogError> {
    SHIPPED
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, src)| *src)
        .ok_or_else(|| CatalogError::UnknownId(id.to_string()))
}

pub fn load_file(path: impl AsRef<Path>) -> Result<CatalogEntry, CatalogError> {
    compile(read_spec(path)?)
}

/// Parses and validates a model document.
pub fn load_str(text: &str) -> Result<CatalogEntry, CatalogError> {
    compile(parse_spec(text)?)
}

pub fn parse_spec(text: &str) -> Result<EntrySpec, CatalogError> {
    Ok(toml::from_str(text)?)
}

pub fn read_spec(path: impl AsRef<Path>) -> Result<EntrySpec, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text)
}

/// Builds the model without running [`GroupModel::validate`].
pub fn compile_unvalidated(spec: EntrySpec) -> Result<CatalogEntry, CatalogError> {
    let id = spec.id.clone();
    let chart = Chart::new(
        spec.coordinates
            .iter()
            .map(|c| CoordDecl::new(c.name.clone(), c.kind))
            .collect(),
    )
    .map_err(|e| content(&id, e))?;
    let n = chart.dim();
    let expr_matrix = |rows: &[Vec<String>], what: &str| -> Result<ExprMatrix, CatalogError> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(content(&id, format!("{what} must be {n}x{n}")));
        }
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|s| Expr::parse(&chart, s).map_err(|e| content(format!("{id}: {what}"), e)))
                    .collect()
            })
            .collect()
    };
    let frame = expr_matrix(&spec.frame.fields, "frame")?;
    let coframe = expr_matrix(&spec.frame.coframe, "coframe")?;
    let metric = FrameMetric::new(rational_matrix(&spec.frame.metric, n, &format!("{id}: metric"))?)
        .map_err(|e: MetricError| content(&id, e))?;

    let frame_symbols: Vec<String> = (1..=n).map(|k| format!("F{k}")).collect();
    let mut brackets = Vec::new();
    for b in &spec.frame.brackets {
        let [i, j] = b.pair;
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(content(&id, format!("bad bracket pair {:?}", b.pair)));
        }
        let value = linear_combination(&b.value, &frame_symbols, &format!("{id}: bracket"))?;
        brackets.push((i - 1, j - 1, value));
    }
    let algebra = StructureConstants::from_brackets(n, &brackets);
    let model = GroupModel::new(chart.clone(), frame, coframe, algebra, metric)
        .map_err(|e: ModelError| content(&id, e))?;

    let fields: Vec<FieldTemplate> = spec
        .fields
        .iter()
        .map(|f| FieldTemplate {
            name: f.name.clone(),
            params: f.params.clone(),
            components: f.components.clone(),
        })
        .collect();
    for (k, f) in fields.iter().enumerate() {
        if f.components.len() != n {
            return Err(content(&id, format!("field {} needs {n} components", f.name)));
        }
        if fields[..k].iter().any(|g| g.name == f.name) {
            return Err(content(&id, format!("duplicate field `{}`", f.name)));
        }
    }

    let mut entry = CatalogEntry {
        id: id.clone(),
        title: spec.title.clone(),
        model,
        fields,
        claims: Vec::new(),
        spec: spec.clone(),
    };
    let claims = spec
        .claims
        .iter()
        .enumerate()
        .map(|(k, c)| compile_claim(&entry, c).map_err(|e| content(format!("{id}: claim {}", k + 1), e)))
        .collect::<Result<Vec<_>, _>>()?;
    entry.claims = claims;
    Ok(entry)
}

/// Builds the model and rejects it unless duality and brackets hold exactly.
pub fn compile(spec: EntrySpec) -> Result<CatalogEntry, CatalogError> {
    let entry = compile_unvalidated(spec)?;
    let violations = entry.model.validate();
    if violations.is_empty() {
        Ok(entry)
    } else {
        Err(CatalogError::Invalid {
            id: entry.id,
            violations,
        })
    }
}

fn rational(src: &str, ctx: &str) -> Result<Rational, CatalogError> {
    parse_rational(src).ok_or_else(|| content(ctx, format!("`{src}` is not a rational literal")))
}

fn optional_rational(src: &str, ctx: &str) -> Result<Option<Rational>, CatalogError> {
    if src.trim() == "none" {
        Ok(None)
    } else {
        rational(src, ctx).map(Some)
    }
}

fn rational_matrix(rows: &[Vec<String>], n: usize, ctx: &str) -> Result<QMatrix, CatalogError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(content(ctx, format!("matrix must be {n}x{n}")));
    }
    Ok(QMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|s| rational(s, ctx)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?,
    ))
}

/// Parses a rational combination of the given symbols, e.g. `1/2*F3 - F1`.
pub fn linear_combination(src: &str, symbols: &[String], ctx: &str) -> Result<Vec<Rational>, CatalogError> {
    let names: Vec<&str> = symbols.iter().map(String::as_str).collect();
    let chart = Chart::polynomial(&names).map_err(|e| content(ctx, e))?;
    Expr::parse(&chart, src)
        .map_err(|e| content(ctx, e))?
        .linear_coefficients()
        .ok_or_else(|| content(ctx, format!("`{src}` is not a linear combination of {}", names.join(", "))))
}

fn params(spec: &format::ParamSpec, ctx: &str) -> Result<ParamSet, CatalogError> {
    spec.iter()
        .map(|(k, v)| Ok((k.clone(), rational(v, ctx)?)))
        .collect()
}

/// Parameter sets of a claim; no sets means one empty set.
fn instances_of(specs: &[format::ParamSpec]) -> Result<Vec<ParamSet>, CatalogError> {
    let mut sets = specs.iter().map(|i| params(i, "claim")).collect::<Result<Vec<_>, _>>()?;
    if sets.is_empty() {
        sets.push(ParamSet::new());
    }
    Ok(sets)
}

fn compile_claim(entry: &CatalogEntry, spec: &format::ClaimSpec) -> Result<Claim, CatalogError> {
    use format::ClaimBody as B;
    let n = entry.model.dim();
    let chart = entry.model.chart();
    let ctx = "claim";
    let parsed_matrix = |rows: &[Vec<String>], p: &ParamSet| -> Result<ExprMatrix, CatalogError> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(content(ctx, format!("matrix must be {n}x{n}")));
        }
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|s| Expr::parse_with(chart, s, p).map_err(|e| content(ctx, e)))
                    .collect()
            })
            .collect()
    };
    let check_field = |name: &str, p: &ParamSet| -> Result<(), CatalogError> {
        entry.vector_field(name, p).map(|_| ())
    };
    let kind = match &spec.body {
        B::Connection { expected } => {
            if expected.len() != n || expected.iter().any(|r| r.len() != n) {
                return Err(content(ctx, format!("connection table must be {n}x{n}")));
            }
            let symbols: Vec<String> = (1..=n).map(|k| format!("F{k}")).collect();
            let mut gamma = Array3::zeros(n);
            for (i, row) in expected.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    for (k, v) in linear_combination(cell, &symbols, ctx)?.into_iter().enumerate() {
                        gamma.set(i, j, k, v);
                    }
                }
            }
            ClaimKind::Connection(gamma)
        }
        B::Ricci { expected } => ClaimKind::Ricci(rational_matrix(expected, n, ctx)?),
        B::Flat {} => ClaimKind::Flat,
        B::Einstein { expected } => ClaimKind::Einstein(optional_rational(expected, ctx)?),
        B::ConstantCurvature { expected } => ClaimKind::ConstantCurvature(optional_rational(expected, ctx)?),
        B::CoordinateMetric { expected } => ClaimKind::CoordinateMetric(parsed_matrix(expected, &ParamSet::new())?),
        B::CovariantDerivative { field, params: p, expected } => {
            let p = params(p, ctx)?;
            check_field(field, &p)?;
            ClaimKind::CovariantDerivative {
                field: field.clone(),
                expected: parsed_matrix(expected, &p)?,
                params: p,
            }
        }
        B::Soliton {
            field,
            alpha,
            instances,
            class,
        } => {
            let sets = instances_of(instances)?;
            for p in &sets {
                check_field(field, p)?;
                alpha_value(chart, alpha, p)?;
            }
            ClaimKind::Soliton {
                field: field.clone(),
                alpha: alpha.clone(),
                instances: sets,
                class: *class,
            }
        }
        B::NonGradient {
            field,
            instances,
            i,
            j,
            expected,
        } => {
            if *i == 0 || *j == 0 || *i > n || *j > n || i == j {
                return Err(content(ctx, "curl indices must be distinct and in 1..=n"));
            }
            let sets = instances_of(instances)?;
            for p in &sets {
                check_field(field, p)?;
                if let Some(e) = expected {
                    Expr::parse_with(chart, e, p).map_err(|e| content(ctx, e))?;
                }
            }
            ClaimKind::NonGradient {
                field: field.clone(),
                instances: sets,
                i: i - 1,
                j: j - 1,
                expected: expected.clone(),
            }
        }
        B::Killing { field, params: p, expected } => {
            let p = params(p, ctx)?;
            check_field(field, &p)?;
            ClaimKind::Killing {
                field: field.clone(),
                params: p,
                expected: *expected,
            }
        }
        B::Bracket { left, right, expected } => {
            let none = ParamSet::new();
            check_field(left, &none)?;
            check_field(right, &none)?;
            let names: Vec<String> = entry.fields.iter().map(|f| f.name.clone()).collect();
            let coeffs = linear_combination(expected, &names, ctx)?;
            ClaimKind::Bracket {
                left: left.clone(),
                right: right.clone(),
                expected: coeffs.into_iter().zip(names).collect(),
            }
        }
    };
    Ok(Claim {
        source: spec.source,
        note: spec.note.clone(),
        discrepancy: spec.discrepancy.clone(),
        kind,
    })
}

/// Evaluates the soliton constant of a claim for one parameter set.
pub fn alpha_value(chart: &Arc<Chart>, alpha: &str, params: &ParamSet) -> Result<Rational, CatalogError> {
    Expr::parse_with(chart, alpha, params)
        .map_err(|e| content("alpha", e))?
        .as_constant()
        .ok_or_else(|| content("alpha", format!("`{alpha}` is not constant")))
}
