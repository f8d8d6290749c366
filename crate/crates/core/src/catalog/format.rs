//! On-disk schema of a model file (TOML).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group_model::SolitonClass;
use crate::scalar_expr::CoordKind;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(rename = "coordinate")]
    pub coordinates: Vec<CoordinateSpec>,
    pub frame: FrameSpec,
    #[serde(default, rename = "field")]
    pub fields: Vec<FieldSpec>,
    #[serde(default, rename = "claim")]
    pub claims: Vec<ClaimSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinateSpec {
    pub name: String,
    pub kind: CoordKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    /// Row `i` lists the coordinate components of `F_i`.
    pub fields: Vec<Vec<String>>,
    /// Row `i` lists the coordinate components of `θ^i`.
    pub coframe: Vec<Vec<String>>,
    /// `g(F_i, F_j)` as rational literals.
    pub metric: Vec<Vec<String>>,
    /// Nonzero brackets; unlisted pairs commute.
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    /// 1-based frame indices.
    pub pair: [usize; 2],
    /// Linear combination of `F1..Fn`, e.g. `"-F3"`.
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    #[serde(default)]
    pub params: Vec<String>,
    /// Frame components `X^k` as expressions.
    pub components: Vec<String>,
}

pub type ParamSpec = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Value stated in the literature the model is taken from.
    Published,
    /// Value computed independently for this catalog.
    Derived,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimSpec {
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Set when the stated value is known not to reproduce; the mismatch is
    /// then reported as a discrepancy instead of a failure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
    #[serde(flatten)]
    pub body: ClaimBody,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClaimBody {
    /// Frame connection: entry `(i, j)` is `∇_{F_i} F_j` as a combination of `F_k`.
    Connection { expected: Vec<Vec<String>> },
    Ricci { expected: Vec<Vec<String>> },
    Flat {},
    /// `"none"` or the Einstein constant.
    Einstein { expected: String },
    /// `"none"` or the curvature constant.
    ConstantCurvature { expected: String },
    CoordinateMetric { expected: Vec<Vec<String>> },
    CovariantDerivative {
        field: String,
        #[serde(default)]
        params: ParamSpec,
        expected: Vec<Vec<String>>,
    },
    Soliton {
        field: String,
        alpha: String,
        #[serde(default)]
        instances: Vec<ParamSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<SolitonClass>,
    },
    /// The curl entry `∇_i X_j − ∇_j X_i` (1-based) is nonzero at every
    /// instance, and equals `expected` when given.
    NonGradient {
        field: String,
        #[serde(default)]
        instances: Vec<ParamSpec>,
        i: usize,
        j: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<String>,
    },
    Killing {
        field: String,
        #[serde(default)]
        params: ParamSpec,
        expected: bool,
    },
    Bracket {
        left: String,
        right: String,
        /// Linear combination of field names, e.g. `"-Y3"` or `"0"`.
        expected: String,
    },
}
