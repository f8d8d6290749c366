use proptest::prelude::*;

use soliton_core::catalog::{catalog_get, catalog_list, load_str, shipped_source, ParamSet};
use soliton_core::linalg::{rat, Rational};
use soliton_core::report::{crosscheck, Report, Status};

fn params(a: Rational, b: Rational, c: Rational) -> ParamSet {
    [("a".to_string(), a), ("b".to_string(), b), ("c".to_string(), c)].into()
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

#[test]
fn exported_documents_reload_identically() {
    for id in catalog_list() {
        let reloaded = load_str(shipped_source(id).unwrap()).unwrap();
        let direct = catalog_get(id).unwrap();
        assert_eq!(Report::build(&reloaded).to_text(), Report::build(&direct).to_text());
    }
}

#[test]
fn shipped_reports_have_no_failures() {
    for id in catalog_list() {
        let r = Report::build(&catalog_get(id).unwrap());
        assert!(r.claims.iter().all(|c| c.status != Status::Fail), "{}", r.to_text());
        assert!(crosscheck(&catalog_get(id).unwrap()).passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // the family is a soliton for every rational (a, b, c), not only on the shipped grid
    #[test]
    fn e11_family_is_soliton_everywhere(a in small_rational(), b in small_rational(), c in small_rational()) {
        let e = catalog_get("e11.g1").unwrap();
        let x = e.vector_field("X", &params(a, b, c)).unwrap();
        let rep = e.model.soliton_residual(&x, &rat(-4, 1));
        prop_assert!(rep.residual_zero);
        prop_assert_eq!(rep.curl.clone(), e.model.exterior_derivative_of_flat(&x));
    }

    #[test]
    fn gaussian_soliton_constant_tracks_alpha(alpha in small_rational(), beta in small_rational()) {
        let e = catalog_get("r2.gaussian").unwrap();
        let p: ParamSet = [("alpha".to_string(), alpha.clone()), ("beta".to_string(), beta.clone())].into();
        let x = e.vector_field("X", &p).unwrap();
        prop_assert!(e.model.soliton_residual(&x, &alpha).residual_zero);
        let off = e.model.soliton_residual(&x, &(alpha + rat(1, 1)));
        prop_assert!(!off.residual_zero);
        prop_assert_eq!(off.gradient_obstruction_witness.is_some(), beta != rat(0, 1));
    }
}
