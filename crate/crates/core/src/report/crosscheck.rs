//! Internal consistency checks: every quantity that can be computed along two
//! independent routes is computed both ways and compared.

use serde::Serialize;

use crate::catalog::{alpha_value, CatalogEntry, ClaimKind};
use crate::frame_geometry::{levi_civita_ad, levi_civita_koszul};
use crate::group_model::CoordinateGeometry;
use crate::linalg::{rat, QMatrix};
use crate::ricci_flow::{flow_rhs_derived, flow_rhs_reduced, FlowSystem, SystemKind};

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub id: String,
    pub checks: Vec<CheckOutcome>,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("crosscheck {}\n", self.id);
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            s.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        s.push_str(&format!("{} checks, {failed} failed\n", self.checks.len()));
        s
    }
}

fn defects_detail<T: std::fmt::Debug>(d: &[T]) -> String {
    match d.first() {
        None => "none".to_string(),
        Some(first) => format!("{} defect(s), first at {first:?} (0-based)", d.len()),
    }
}

fn inline(m: &QMatrix) -> String {
    let rows: Vec<Vec<String>> = m.rows().iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect();
    super::matrix_text(&rows)
}

pub fn crosscheck(entry: &CatalogEntry) -> CrossCheck {
    let model = &entry.model;
    let c = model.algebra();
    let g = model.metric();
    let n = model.dim();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(CheckOutcome {
            name: name.to_string(),
            passed,
            detail,
        })
    };

    let violations = model.validate();
    push(
        "frame/coframe/brackets",
        violations.is_empty(),
        if violations.is_empty() {
            "coframe dual to frame, brackets reproduce structure constants".into()
        } else {
            violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
        },
    );

    let ad = levi_civita_ad(c, g);
    let koszul = levi_civita_koszul(c, g);
    let mut first_diff = None;
    'outer: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if ad.get(i, j, k) != koszul.get(i, j, k) {
                    first_diff = Some(format!(
                        "Gamma^{}_{}{}: ad route {}, Koszul route {}",
                        k + 1,
                        i + 1,
                        j + 1,
                        ad.get(i, j, k),
                        koszul.get(i, j, k)
                    ));
                    break 'outer;
                }
            }
        }
    }
    push(
        "connection: ad vs Koszul",
        first_diff.is_none(),
        first_diff.unwrap_or_else(|| "identical".into()),
    );

    let conn = model.connection();
    let torsion = conn.torsion_defects(c);
    push("torsion-free", torsion.is_empty(), defects_detail(&torsion));
    let compat = conn.compatibility_defects(g);
    push("metric compatible", compat.is_empty(), defects_detail(&compat));

    let curv = model.curvature();
    let anti = curv.riemann.antisymmetry_defects();
    push("Riemann antisymmetry", anti.is_empty(), defects_detail(&anti));
    let bianchi = curv.riemann.bianchi_defects();
    push("first Bianchi identity", bianchi.is_empty(), defects_detail(&bianchi));
    let pairs = curv.riemann.lowered(g).pair_symmetry_defects();
    push("Riemann pair symmetry", pairs.is_empty(), defects_detail(&pairs));
    push(
        "Ricci symmetric",
        curv.ricci.is_symmetric(),
        format!("Ric = {}", inline(&curv.ricci)),
    );

    let coord = CoordinateGeometry::compute(model);
    match &coord {
        Ok(geo) => {
            match geo.frame_riemann(model) {
                Ok(r) => push(
                    "Riemann: frame vs coordinates",
                    r == curv.riemann,
                    if r == curv.riemann { "identical".into() } else { "components differ".into() },
                ),
                Err(e) => push("Riemann: frame vs coordinates", false, e.to_string()),
            }
            match geo.frame_ricci(model) {
                Ok(r) => push(
                    "Ricci: frame vs coordinates",
                    r == curv.ricci,
                    format!("coordinate route {}", inline(&r)),
                ),
                Err(e) => push("Ricci: frame vs coordinates", false, e.to_string()),
            }
        }
        Err(e) => push("coordinate oracle", false, e.to_string()),
    }

    for claim in &entry.claims {
        let ClaimKind::Soliton {
            field,
            alpha,
            instances,
            ..
        } = &claim.kind
        else {
            continue;
        };
        for p in instances {
            let label: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let label = if label.is_empty() {
                field.clone()
            } else {
                format!("{field}({})", label.join(", "))
            };
            let (x, a) = match (entry.vector_field(field, p), alpha_value(model.chart(), alpha, p)) {
                (Ok(x), Ok(a)) => (x, a),
                (Err(e), _) | (_, Err(e)) => {
                    push(&format!("soliton {label}"), false, e.to_string());
                    continue;
                }
            };
            let frame = model.soliton_residual(&x, &a);
            if let Ok(geo) = &coord {
                let coord_zero = geo
                    .soliton_residual(model, &x, &a)
                    .iter()
                    .flatten()
                    .all(|e| e.is_zero());
                push(
                    &format!("soliton {label}: frame vs coordinate residual"),
                    coord_zero == frame.residual_zero,
                    format!(
                        "frame {}, coordinates {}",
                        if frame.residual_zero { "zero" } else { "nonzero" },
                        if coord_zero { "zero" } else { "nonzero" }
                    ),
                );
            }
            let d_flat = model.exterior_derivative_of_flat(&x);
            push(
                &format!("soliton {label}: curl vs d(X flat)"),
                d_flat == frame.curl,
                if d_flat == frame.curl { "identical".into() } else { "differ".into() },
            );
        }
    }

    // deterministic positive rational states
    let states = [
        [rat(1, 1), rat(1, 1), rat(1, 1)],
        [rat(2, 1), rat(1, 3), rat(5, 7)],
        [rat(1, 2), rat(3, 1), rat(2, 5)],
        [rat(7, 4), rat(9, 2), rat(1, 9)],
    ];
    for kind in SystemKind::ALL {
        let system = FlowSystem::heisenberg(kind);
        let bad: Vec<String> = states
            .iter()
            .filter(|s| flow_rhs_reduced(kind, (*s).clone()).ok() != flow_rhs_derived(&system, (*s).clone()).ok())
            .map(|s| format!("({}, {}, {})", s[0], s[1], s[2]))
            .collect();
        push(
            &format!("flow {kind}: reduced vs derived RHS"),
            bad.is_empty(),
            if bad.is_empty() {
                format!("agree at {} rational states", states.len())
            } else {
                format!("differ at {}", bad.join(", "))
            },
        );
    }

    CrossCheck {
        id: entry.id.clone(),
        checks,
    }
}
