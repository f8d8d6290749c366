use super::*;
use crate::linalg::{int, rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

fn h3() -> StructureConstants {
    StructureConstants::from_brackets(3, &[(1, 2, v(&[1, 0, 0]))])
}

fn e2() -> StructureConstants {
    StructureConstants::from_brackets(3, &[(0, 1, v(&[0, 0, -1])), (1, 2, v(&[-1, 0, 0]))])
}

fn e11() -> StructureConstants {
    StructureConstants::from_brackets(3, &[(1, 2, v(&[1, 0, 0])), (2, 0, v(&[0, -1, 0]))])
}

/// Heisenberg algebra in the basis used for the metric with [e1,e2] = -e3.
fn h3_alt() -> StructureConstants {
    StructureConstants::from_brackets(3, &[(0, 1, v(&[0, 0, -1]))])
}

fn lorentz() -> FrameMetric {
    FrameMetric::diagonal(&v(&[1, 1, -1])).unwrap()
}

/// Nonzero entries of a connection as ((i, j), components), 0-based.
fn nonzero(conn: &Connection) -> Vec<((usize, usize), Vec<Rational>)> {
    let n = conn.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = conn.covariant(i, j);
            if c.iter().any(|x| !x.is_zero()) {
                out.push(((i, j), c.to_vec()));
            }
        }
    }
    out
}

#[test]
fn structure_validation() {
    assert!(validate_structure(&h3()).is_empty());
    assert!(validate_structure(&e2()).is_empty());
    assert!(validate_structure(&e11()).is_empty());
    assert!(validate_structure(&StructureConstants::abelian(3)).is_empty());

    let mut raw = Array3::zeros(3);
    raw.set(1, 2, 0, int(1));
    raw.set(2, 1, 0, int(1));
    let bad = validate_structure(&StructureConstants::from_array(raw));
    assert!(bad.contains(&StructureViolation::Antisymmetry { k: 0, i: 1, j: 2 }));
    assert!(bad[0].to_string().starts_with("antisymmetry violated at (1,2,3)"));

    // antisymmetric but not a Lie algebra: [F1,F2] = F1 + F3, [F2,F3] = F2
    let broken = StructureConstants::from_brackets(3, &[(0, 1, v(&[1, 0, 1])), (1, 2, v(&[0, 1, 0]))]);
    assert!(validate_structure(&broken)
        .iter()
        .any(|x| matches!(x, StructureViolation::Jacobi { .. })));
}

#[test]
fn ad_matrices() {
    let ad = ad_matrix(&h3(), &v(&[0, 1, 0]));
    let mut expected = QMatrix::zeros(3);
    expected[(0, 2)] = int(1);
    assert_eq!(ad, expected);
    assert!(ad_matrix(&e2(), &v(&[0, 0, 0])).is_zero());

    let ad = ad_matrix(&e11(), &v(&[0, 0, 1]));
    let mut expected = QMatrix::zeros(3);
    expected[(1, 0)] = int(-1);
    expected[(0, 1)] = int(-1);
    assert_eq!(ad, expected);
}

#[test]
fn ad_adjoint_defining_relation() {
    let g = lorentz();
    for c in [h3(), e2(), e11()] {
        for xi in 0..3 {
            let mut x = v(&[0, 0, 0]);
            x[xi] = int(1);
            let m = ad_adjoint_matrix(&c, &g, &x);
            for y in 0..3 {
                for z in 0..3 {
                    let ey = (0..3).map(|k| if k == y { int(1) } else { int(0) }).collect::<Vec<_>>();
                    let ez = (0..3).map(|k| if k == z { int(1) } else { int(0) }).collect::<Vec<_>>();
                    let lhs = g.inner(&m.apply(&ey), &ez);
                    let rhs = g.inner(&ey, &c.bracket_vectors(&x, &ez));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
    assert!(ad_adjoint_matrix(&StructureConstants::abelian(3), &g, &v(&[1, 2, 3])).is_zero());
    // H3 g1, X = F2: ad'(F2)F3 = 0
    let m = ad_adjoint_matrix(&h3(), &g, &v(&[0, 1, 0]));
    assert_eq!(m.apply(&v(&[0, 0, 1])), v(&[0, 0, 0]));
}

#[test]
fn heisenberg_g1_connection() {
    let conn = levi_civita_ad(&h3(), &lorentz());
    let h = rat(1, 2);
    let z = int(0);
    let expected = vec![
        ((0, 1), vec![z.clone(), z.clone(), h.clone()]),
        ((0, 2), vec![z.clone(), h.clone(), z.clone()]),
        ((1, 0), vec![z.clone(), z.clone(), h.clone()]),
        ((1, 2), vec![h.clone(), z.clone(), z.clone()]),
        ((2, 0), vec![z.clone(), h.clone(), z.clone()]),
        ((2, 1), vec![-h.clone(), z.clone(), z.clone()]),
    ];
    assert_eq!(nonzero(&conn), expected);
    assert_eq!(levi_civita_koszul(&h3(), &lorentz()), conn);
}

#[test]
fn e11_g1_connection() {
    let conn = levi_civita_ad(&e11(), &lorentz());
    let expected = vec![
        ((0, 1), v(&[0, 0, 1])),
        ((0, 2), v(&[0, 1, 0])),
        ((1, 0), v(&[0, 0, 1])),
        ((1, 2), v(&[1, 0, 0])),
    ];
    assert_eq!(nonzero(&conn), expected);
}

#[test]
fn e2_g1_connection_by_koszul() {
    let conn = levi_civita_koszul(&e2(), &lorentz());
    let expected = vec![
        ((0, 1), v(&[0, 0, -1])),
        ((0, 2), v(&[0, -1, 0])),
        ((2, 0), v(&[0, -1, 0])),
        ((2, 1), v(&[1, 0, 0])),
    ];
    assert_eq!(nonzero(&conn), expected);
    assert_eq!(levi_civita_ad(&e2(), &lorentz()), conn);
}

#[test]
fn abelian_is_flat() {
    let g = FrameMetric::diagonal(&v(&[2, -3, 5])).unwrap();
    let c = StructureConstants::abelian(3);
    let conn = levi_civita_ad(&c, &g);
    assert!(conn.array().is_zero());
    assert!(riemann(&c, &conn).is_zero());
}

fn curvature(c: &StructureConstants, g: &FrameMetric) -> CurvatureData {
    CurvatureData::compute(c, &levi_civita_ad(c, g), g)
}

#[test]
fn ricci_of_the_soliton_metrics() {
    let g = lorentz();
    assert_eq!(
        curvature(&h3(), &g).ricci,
        QMatrix::diagonal(&[rat(-1, 2), rat(1, 2), rat(-1, 2)])
    );
    assert_eq!(curvature(&e2(), &g).ricci, QMatrix::diagonal(&v(&[0, 2, 0])));
    assert_eq!(curvature(&e11(), &g).ricci, QMatrix::diagonal(&v(&[0, 0, -2])));
}

#[test]
fn heisenberg_g1_scalar_and_einstein() {
    let g = lorentz();
    let data = curvature(&h3(), &g);
    // -1/2 + 1/2 - (-1/2)
    assert_eq!(data.scalar, rat(1, 2));
    assert_eq!(einstein_check(&data.ricci, &g), None);
}

#[test]
fn heisenberg_g2_is_not_constant_curvature() {
    let g = lorentz();
    let data = curvature(&h3_alt(), &g);
    // R(e1,e2)e2 = 3/4 e1
    assert_eq!(data.riemann.get(0, 1, 0, 1), &rat(3, 4));
    match constant_curvature_check(&data.riemann, &g) {
        ConstantCurvature::NotConstant { sectional } => {
            let vals: Vec<_> = sectional.iter().map(|s| (s.a, s.b, s.value.clone())).collect();
            assert_eq!(vals, vec![(0, 1, rat(3, 4)), (0, 2, rat(-1, 4)), (1, 2, rat(-1, 4))]);
        }
        other => panic!("unexpected {other:?}"),
    }
    // Ric = 1/2 (θ1⊗θ1 + θ2⊗θ2 + θ3⊗θ3)
    assert_eq!(data.ricci, QMatrix::diagonal(&[rat(1, 2), rat(1, 2), rat(1, 2)]));
}

#[test]
fn constant_curvature_of_flat_and_abelian() {
    let g = FrameMetric::diagonal(&v(&[1, -1, 1])).unwrap();
    let c = StructureConstants::abelian(3);
    let conn = levi_civita_ad(&c, &g);
    let r = riemann(&c, &conn);
    assert_eq!(constant_curvature_check(&r, &g), ConstantCurvature::Constant(int(0)));
    assert_eq!(einstein_check(&ricci(&r), &g), Some(int(0)));
}

#[test]
fn metric_construction() {
    assert_eq!(lorentz().signature(), (2, 1));
    assert!(lorentz().is_lorentzian());
    let asym = QMatrix::from_rows(vec![vec![int(1), int(1)], vec![int(0), int(1)]]);
    assert_eq!(FrameMetric::new(asym), Err(MetricError::NotSymmetric));
    assert_eq!(FrameMetric::diagonal(&v(&[1, 0])), Err(MetricError::Degenerate));
}

#[test]
fn lorentz_diagonal_ricci_matches_flow_rhs() {
    // -2 Ric = (dA, dB, -dC) with dA = A²/(BC), dB = -A/C, dC = -A/B
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let a = rat(rng.gen_range(1..40), rng.gen_range(1..12));
        let b = rat(rng.gen_range(1..40), rng.gen_range(1..12));
        let c = rat(rng.gen_range(1..40), rng.gen_range(1..12));
        let g = FrameMetric::diagonal(&[a.clone(), b.clone(), -c.clone()]).unwrap();
        let ric = curvature(&h3(), &g).ricci;
        let m2 = int(-2);
        assert_eq!(&ric[(0, 0)] * &m2, &a * &a / (&b * &c));
        assert_eq!(&ric[(1, 1)] * &m2, -(&a / &c));
        assert_eq!(&ric[(2, 2)] * &m2, &a / &b);
        assert!(ric[(0, 1)].is_zero() && ric[(0, 2)].is_zero() && ric[(1, 2)].is_zero());
    }
}

#[test]
fn randomized_connection_and_curvature_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let algebras = [h3(), e2(), e11()];
    for n in 0..100 {
        let c = &algebras[n % 3];
        let diag: Vec<Rational> = (0..3)
            .map(|_| {
                let x = rat(rng.gen_range(1..30), rng.gen_range(1..9));
                if rng.gen_bool(0.4) {
                    -x
                } else {
                    x
                }
            })
            .collect();
        let g = FrameMetric::diagonal(&diag).unwrap();
        let conn = levi_civita_ad(c, &g);
        assert_eq!(conn, levi_civita_koszul(c, &g));
        assert!(conn.torsion_defects(c).is_empty());
        assert!(conn.compatibility_defects(&g).is_empty());
        let data = CurvatureData::compute(c, &conn, &g);
        assert!(data.riemann.antisymmetry_defects().is_empty());
        assert!(data.riemann.bianchi_defects().is_empty());
        assert!(data.riemann.lowered(&g).pair_symmetry_defects().is_empty());
        assert!(data.ricci.is_symmetric());
    }
}

#[test]
fn non_diagonal_metric_identities() {
    let g = FrameMetric::new(QMatrix::from_rows(vec![
        vec![int(2), int(1), int(0)],
        vec![int(1), int(-1), rat(1, 3)],
        vec![int(0), rat(1, 3), int(3)],
    ]))
    .unwrap();
    for c in [h3(), e2(), e11()] {
        let conn = levi_civita_ad(&c, &g);
        assert_eq!(conn, levi_civita_koszul(&c, &g));
        assert!(conn.torsion_defects(&c).is_empty());
        assert!(conn.compatibility_defects(&g).is_empty());
        let data = CurvatureData::compute(&c, &conn, &g);
        assert!(data.riemann.bianchi_defects().is_empty());
        assert!(data.riemann.lowered(&g).pair_symmetry_defects().is_empty());
        assert!(data.ricci.is_symmetric());
    }
}

#[test]
fn combination_rendering() {
    assert_eq!(render_combination(&[int(-1), int(0), rat(1, 2)], "F"), "-F1 + 1/2*F3");
    assert_eq!(render_combination(&v(&[0, 0]), "F"), "0");
}
