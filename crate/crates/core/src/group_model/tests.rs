use super::*;
use crate::catalog::{catalog_get, catalog_list, ParamSet};
use crate::linalg::{int, rat};

fn entry(id: &str) -> crate::catalog::CatalogEntry {
    catalog_get(id).unwrap()
}

fn parse_matrix(chart: &Arc<Chart>, rows: &[[&str; 3]]) -> ExprMatrix {
    rows.iter()
        .map(|r| r.iter().map(|s| Expr::parse(chart, s).unwrap()).collect())
        .collect()
}

fn params(pairs: &[(&str, i64)]) -> ParamSet {
    pairs.iter().map(|(k, v)| (k.to_string(), int(*v))).collect()
}

fn diag(chart: &Arc<Chart>, d: [i64; 3]) -> ExprMatrix {
    (0..3)
        .map(|i| {
            (0..3)
                .map(|j| Expr::integer(chart, if i == j { d[i] } else { 0 }))
                .collect()
        })
        .collect()
}

#[test]
fn shipped_models_validate() {
    for id in catalog_list() {
        assert_eq!(entry(id).model.validate(), vec![], "{id}");
    }
}

#[test]
fn sign_flipped_frame_is_caught() {
    let e = entry("h3.g1");
    let m = &e.model;
    let chart = m.chart();
    let mut frame = m.frame().clone();
    frame[1][2] = Expr::parse(chart, "x").unwrap();
    let mut coframe = m.coframe().clone();
    coframe[0][1] = Expr::parse(chart, "-x").unwrap();
    let bad = GroupModel::new(chart.clone(), frame, coframe, m.algebra().clone(), m.metric().clone()).unwrap();
    let violations = bad.validate();
    assert!(!violations.is_empty());
    assert!(violations
        .iter()
        .all(|v| matches!(v, ModelViolation::Bracket { i: 1, j: 2, .. })));
    assert!(violations[0].to_string().starts_with("bracket violated at (2,3)"));
}

#[test]
fn shape_errors() {
    let e = entry("h3.g1");
    let m = &e.model;
    let mut short = m.frame().clone();
    short.pop();
    assert!(matches!(
        GroupModel::new(m.chart().clone(), short, m.coframe().clone(), m.algebra().clone(), m.metric().clone()),
        Err(ModelError::Dimension { what: "frame", .. })
    ));
}

#[test]
fn heisenberg_covariant_derivative() {
    let e = entry("h3.g1");
    let m = &e.model;
    let x = e.vector_field("X", &ParamSet::new()).unwrap();
    let expected = parse_matrix(
        m.chart(),
        &[
            ["2", "1/2*x", "-1/2*y"],
            ["-1/2*x", "1", "-1/2*(2*z + x*y)"],
            ["1/2*y", "1/2*(2*z + x*y)", "-1"],
        ],
    );
    assert_eq!(m.covariant_derivative_matrix(&x), expected);
    assert_eq!(m.lie_derivative_metric(&x), diag(m.chart(), [4, 2, -2]));
    let zero = VectorField::zero(m.chart(), 3);
    assert!(m.covariant_derivative_matrix(&zero).iter().flatten().all(Expr::is_zero));
    assert!(m.lie_derivative_metric(&zero).iter().flatten().all(Expr::is_zero));
}

#[test]
fn heisenberg_soliton() {
    let e = entry("h3.g1");
    let x = e.vector_field("X", &ParamSet::new()).unwrap();
    let rep = e.model.soliton_residual(&x, &int(-3));
    assert!(rep.residual_zero);
    assert_eq!(rep.class, SolitonClass::Shrinking);
    let w = rep.gradient_obstruction_witness.unwrap();
    assert_eq!((w.i, w.j, w.value.to_string()), (0, 1, "x".to_string()));
    assert!(!e.model.soliton_residual(&x, &int(3)).residual_zero);
}

#[test]
fn e2_soliton_and_lie_derivative() {
    let e = entry("e2.g1");
    let m = &e.model;
    let x = e.vector_field("X", &ParamSet::new()).unwrap();
    assert_eq!(m.lie_derivative_metric(&x), diag(m.chart(), [4, 0, -4]));
    let rep = m.soliton_residual(&x, &int(-4));
    assert!(rep.residual_zero);
    let w = rep.gradient_obstruction_witness.unwrap();
    assert_eq!((w.i, w.j), (0, 1));
    assert_eq!(w.value, Expr::parse(m.chart(), "-4*(-z*sin(y) + x*cos(y))").unwrap());
    // X = 2x∂x + 2z∂z in coordinates
    let coords = m.to_coordinates(&x);
    assert_eq!(coords, ["2*x", "0", "2*z"].map(|s| Expr::parse(m.chart(), s).unwrap()));
    assert_eq!(m.from_coordinates(&coords), x);
}

#[test]
fn e11_soliton_family() {
    let e = entry("e11.g1");
    let m = &e.model;
    for (a, b, c) in [(0, 0, 0), (1, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 2), (3, -2, 5)] {
        let p = params(&[("a", a), ("b", b), ("c", c)]);
        let x = e.vector_field("X", &p).unwrap();
        let rep = m.soliton_residual(&x, &int(-4));
        assert!(rep.residual_zero, "(a,b,c) = ({a},{b},{c})");
        let expected = Expr::parse_with(
            m.chart(),
            "8*a*x*exp(z) + 8*(1 - a)*y*exp(-z) + 2*b*exp(z) + 2*c*exp(-z)",
            &p,
        )
        .unwrap();
        assert_eq!(rep.curl[2][1], expected);
        assert_eq!(m.exterior_derivative_of_flat(&x)[2][1], expected);
        assert!(rep.gradient_obstruction_witness.is_some());
    }
}

#[test]
fn e11_covariant_derivative_is_not_symmetric() {
    let e = entry("e11.g1");
    let m = &e.model;
    let x = e.vector_field("X", &params(&[("a", 1), ("b", 0), ("c", 0)])).unwrap();
    let cov = m.covariant_derivative_matrix(&x);
    let expected = parse_matrix(
        m.chart(),
        &[
            ["2", "0", "-4*x*exp(z)"],
            ["0", "2", "-4*x*exp(z)"],
            ["4*x*exp(z)", "4*x*exp(z)", "0"],
        ],
    );
    assert_eq!(cov, expected);
}

#[test]
fn killing_fields_and_brackets() {
    let e = entry("e11.g1");
    let m = &e.model;
    let none = ParamSet::new();
    let y = |n: &str| e.vector_field(n, &none).unwrap();
    for name in ["Y1", "Y2", "Y3"] {
        let rep = m.killing_residual(&y(name));
        assert!(rep.is_killing, "{name}");
    }
    let f3 = m.killing_residual(&y("F3"));
    assert!(!f3.is_killing);
    // L_{∂z} g = 4e^{2z}dx² - 4e^{-2z}dy² in coordinates; in the frame the
    // nonzero block sits on (F1, F2)
    assert!(f3.residual[2].iter().all(Expr::is_zero));

    assert_eq!(m.field_bracket(&y("Y2"), &y("Y1")), y("Y2"));
    assert_eq!(m.field_bracket(&y("Y3"), &y("Y1")), y("Y3").scale(&int(-1)));
    assert!(m.field_bracket(&y("Y2"), &y("Y3")).is_zero());
    assert!(m.field_bracket(&y("Y1"), &y("Y1")).is_zero());

    // coordinate forms: Y1 = x∂x - y∂y - ∂z, Y2 = ∂x, Y3 = ∂y
    let c = |s: [&str; 3]| s.map(|t| Expr::parse(m.chart(), t).unwrap()).to_vec();
    assert_eq!(m.to_coordinates(&y("Y1")), c(["x", "-y", "-1"]));
    assert_eq!(m.to_coordinates(&y("Y2")), c(["1", "0", "0"]));
    assert_eq!(m.to_coordinates(&y("Y3")), c(["0", "1", "0"]));
}

#[test]
fn coordinate_metrics() {
    let h = entry("h3.g1");
    assert_eq!(
        h.model.coordinate_metric(),
        parse_matrix(h.model.chart(), &[["-1", "0", "0"], ["0", "1 + x^2", "x"], ["0", "x", "1"]])
    );
    let e = entry("e2.g2");
    assert_eq!(e.model.coordinate_metric(), diag(e.model.chart(), [1, -1, 1]));
    let l = entry("e11.g2");
    assert_eq!(
        l.model.coordinate_metric(),
        parse_matrix(l.model.chart(), &[["0", "2", "0"], ["2", "0", "0"], ["0", "0", "1"]])
    );
}

#[test]
fn exterior_derivative_of_flat_equals_curl() {
    let cases: [(&str, ParamSet); 4] = [
        ("h3.g1", ParamSet::new()),
        ("e2.g1", ParamSet::new()),
        ("e11.g1", params(&[("a", 1), ("b", 2), ("c", -1)])),
        ("r2.gaussian", [("alpha".to_string(), rat(1, 2)), ("beta".to_string(), int(3))].into()),
    ];
    for (id, p) in cases {
        let e = entry(id);
        let x = e.vector_field("X", &p).unwrap();
        let curl = e.model.curl(&x);
        assert_eq!(e.model.exterior_derivative_of_flat(&x), curl, "{id}");
        assert!(curl.iter().flatten().any(|c| !c.is_zero()), "{id}");
    }
}

#[test]
fn soliton_residual_is_symmetric_and_curl_antisymmetric() {
    let e = entry("e11.g1");
    let x = e.vector_field("X", &params(&[("a", 2), ("b", -1), ("c", 3)])).unwrap();
    for alpha in [int(-4), int(1), rat(2, 7)] {
        let rep = e.model.soliton_residual(&x, &alpha);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(rep.residual[i][j], rep.residual[j][i]);
                assert_eq!(rep.curl[i][j], -&rep.curl[j][i]);
            }
        }
    }
}

#[test]
fn gaussian_soliton() {
    let e = entry("r2.gaussian");
    for (a, b) in [(rat(-1, 1), int(2)), (int(2), int(0)), (rat(1, 2), rat(-5, 3))] {
        let p: ParamSet = [("alpha".to_string(), a.clone()), ("beta".to_string(), b.clone())].into();
        let x = e.vector_field("X", &p).unwrap();
        let rep = e.model.soliton_residual(&x, &a);
        assert!(rep.residual_zero);
        match rep.gradient_obstruction_witness {
            Some(w) => assert_eq!(w.value.as_constant(), Some(b)),
            None => assert_eq!(b, int(0)),
        }
    }
}

#[test]
fn coordinate_soliton_residual_agrees() {
    for (id, alpha, p) in [
        ("e2.g1", int(-4), ParamSet::new()),
        ("h3.g1", int(-3), ParamSet::new()),
        ("e11.g1", int(-4), params(&[("a", 1), ("b", 1), ("c", 1)])),
    ] {
        let e = entry(id);
        let x = e.vector_field("X", &p).unwrap();
        let geo = CoordinateGeometry::compute(&e.model).unwrap();
        let res = geo.soliton_residual(&e.model, &x, &alpha);
        assert!(res.iter().flatten().all(Expr::is_zero), "{id}");
        let off = geo.soliton_residual(&e.model, &x, &(&alpha + int(1)));
        assert!(off.iter().flatten().any(|c| !c.is_zero()), "{id}");
    }
}

#[test]
fn coordinate_riemann_matches_frame_riemann() {
    for id in catalog_list() {
        let e = entry(id);
        let geo = CoordinateGeometry::compute(&e.model).unwrap();
        assert_eq!(geo.frame_riemann(&e.model).unwrap(), e.model.curvature().riemann, "{id}");
    }
}

#[test]
fn cofactor_inverse() {
    let e = entry("h3.g1");
    let g = e.model.coordinate_metric();
    let inv = coordinate::invert(&g).unwrap();
    let chart = e.model.chart();
    for i in 0..3 {
        for j in 0..3 {
            let s = (0..3).fold(Expr::zero(chart), |acc, k| acc + &g[i][k] * &inv[k][j]);
            assert_eq!(s, Expr::integer(chart, i64::from(i == j)));
        }
    }
    let singular = parse_matrix(chart, &[["x", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]);
    assert!(matches!(coordinate::invert(&singular), Err(OracleError::NonInvertibleDeterminant(_))));
}
