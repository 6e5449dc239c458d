use num_traits::Zero;
use purefull::catalog;
use purefull::families::{self, constraints_consistent, same_span, sweep, Deformation, FamilySpec, Sample};
use purefull::linalg::Matrix;
use purefull::manifest::Loaded;
use purefull::scalar::frac;
use purefull::Rational;

fn loaded(name: &str) -> Loaded {
    catalog::load(name).unwrap().load().unwrap()
}

fn l_at(spec: &FamilySpec, values: &[Rational]) -> Matrix<Rational> {
    let Deformation::L(rows) = &spec.deformation else { panic!("{} has no L", spec.name) };
    let env = spec.env(values);
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|a| a.eval_rational(&env).unwrap()).collect()).collect())
}

fn find<'a>(samples: &'a [Sample], values: &[Rational]) -> &'a Sample {
    samples.iter().find(|s| s.params.iter().map(|(_, v)| v).eq(values.iter())).unwrap()
}

#[test]
fn sol3xr_curve_is_calibrated_pure_full_and_matches_the_printed_matrix() {
    let l = loaded("sol3xR");
    let spec = &l.families["Jt"];
    let samples = sweep(Some(&l.lie), spec).unwrap();
    for t in [frac(0, 1), frac(1, 4), frac(1, 2)] {
        let s = find(&samples, &[t, frac(1, 2)]);
        let v = s.result.as_ref().unwrap();
        assert!(s.satisfies_constraints());
        assert_eq!(v.calibrated, Some(true));
        assert_eq!(v.h2_is_h11(), Some(true));
        assert!(matches!(v.matches_printed, Some(Ok(true))));
        let pf = v.pure_full.as_ref().unwrap();
        assert!(pf.pure && pf.full);
    }
}

#[test]
fn sol3xr_singular_at_ta_one() {
    let l = loaded("sol3xR");
    let s = l.families["Jt"].evaluate(Some(&l.lie), &[frac(2, 1), frac(1, 2)]);
    assert_eq!(s.result.as_ref().unwrap_err(), "singular matrix: I+L");
    assert!(!s.satisfies_constraints());
}

#[test]
fn constraint_is_sufficient_for_calibration_on_every_family() {
    for l in ["sol3xR", "nil3_B", "solsol6"].map(loaded) {
        for spec in l.families.values() {
            let samples = sweep(Some(&l.lie), spec).unwrap();
            for s in samples.iter().filter(|s| s.satisfies_constraints()) {
                let v = s.result.as_ref().unwrap();
                assert_ne!(v.tamed, Some(false), "{}/{} {:?}", l.manifest.name, spec.name, s.params);
            }
        }
    }
}

/// Violating a printed inequality should lose taming or invertibility.
#[test]
fn printed_inequalities_are_sharp() {
    for l in ["sol3xR", "nil3_B", "solsol6"].map(loaded) {
        for spec in l.families.values() {
            let samples = sweep(Some(&l.lie), spec).unwrap();
            assert!(constraints_consistent(&samples), "{}/{}", l.manifest.name, spec.name);
        }
    }
}

#[test]
fn sol3xr_stays_calibrated_beyond_the_printed_inequality() {
    let l = loaded("sol3xR");
    let s = l.families["Jt"].evaluate(Some(&l.lie), &[frac(1, 1), frac(1, 2)]);
    assert!(!s.satisfies_constraints());
    assert_eq!(s.result.unwrap().calibrated, Some(true));
}

#[test]
fn sweep_is_ordered_and_matches_sequential_evaluation() {
    let l = loaded("nil3_B");
    let spec = &l.families["Jt"];
    let par = sweep(Some(&l.lie), spec).unwrap();
    let seq: Vec<Sample> = spec.samples().unwrap().iter().map(|v| spec.evaluate(Some(&l.lie), v)).collect();
    assert_eq!(par.len(), seq.len());
    for (a, b) in par.iter().zip(&seq) {
        assert_eq!(a.params, b.params);
        assert_eq!(a.violated, b.violated);
        assert_eq!(a.result.as_ref().map(|v| v.matrix.clone()), b.result.as_ref().map(|v| v.matrix.clone()));
    }
}

#[test]
fn nil3_b_four_parameter_point_has_h2_equal_to_h11() {
    let l = loaded("nil3_B");
    let s = l.families["Jt"].evaluate(Some(&l.lie), &[frac(1, 1), frac(0, 1), frac(1, 1), frac(0, 1), frac(1, 2)]);
    let v = s.result.unwrap();
    assert_eq!(v.calibrated, Some(true));
    assert_eq!(v.h2_is_h11(), Some(true));
}

#[test]
fn solsol6_tamed_family_round_trips_through_the_chart() {
    let l = loaded("solsol6");
    let spec = &l.families["Jt_tilde"];
    let t = [frac(1, 2)];
    let s = spec.evaluate(Some(&l.lie), &t);
    let v = s.result.unwrap();
    assert_eq!(v.tamed, Some(true));
    assert_eq!(v.calibrated, Some(false));
    assert!(matches!(v.coframe_matches, Some(Ok(true))));
    let j0 = spec.base.coframe_matrix();
    let l_tilde = l_at(spec, &t);
    assert_eq!(families::audin_chart(&v.matrix, &j0).unwrap(), l_tilde);
    assert_eq!(families::audin_tamed(&j0, &l_tilde).unwrap(), v.matrix);
}

#[test]
fn sol3xr_curve_round_trips_to_an_anticommuting_chart_point() {
    let l = loaded("sol3xR");
    let spec = &l.families["Jt"];
    let v = spec.evaluate(None, &[frac(1, 2), frac(1, 2)]).result.unwrap();
    let j0 = spec.base.coframe_matrix();
    let chart = families::audin_chart(&v.matrix, &j0).unwrap();
    assert_eq!(j0.mul(&chart), chart.mul(&j0).neg());
    assert_eq!(families::audin_tamed(&j0, &chart).unwrap(), v.matrix);
    assert_eq!(families::audin_chart(&j0, &j0).unwrap(), Matrix::zeros(4, 4));
}

#[test]
fn j_alpha_at_zero_is_the_base_structure() {
    for name in ["sol3xR", "nil3_B"] {
        let l = loaded(name);
        let spec = &l.families["Jalpha"];
        let (j, s) = spec.construct(&[frac(0, 1), frac(0, 1)]).unwrap();
        assert_eq!(j, spec.base);
        assert!(s.unwrap().is_zero());
    }
}

#[test]
fn printed_j_alpha_matrix_matches_at_every_sample() {
    let l = loaded("sol3xR");
    for s in sweep(Some(&l.lie), &l.families["Jalpha"]).unwrap() {
        assert!(matches!(s.result.unwrap().matches_printed, Some(Ok(true))), "{:?}", s.params);
    }
}

/// The printed second `(1,0)`-form of the `sol3xR` curve, taken literally.
#[test]
fn sol3xr_printed_coframe_spans_the_constructed_coframe() {
    let l = loaded("sol3xR");
    let spec = &l.families["Jt"];
    let values = [frac(1, 4), frac(1, 2)];
    let env = spec.env(&values);
    let printed: Vec<_> = spec.printed_coframe.as_ref().unwrap().iter().map(|a| a.eval_form(&env, 1).unwrap()).collect();
    let (j, _) = spec.construct(&values).unwrap();
    assert!(same_span(&printed, j.coframe()), "printed coframe {printed:?} vs constructed {:?}", j.coframe());
}
