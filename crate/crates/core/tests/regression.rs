use waldschmidt_core::analysis::{
    bounds_report, demailly_check, els_degree_check, ev_check, ev_ratio, main_theorem_check, ratio,
    AlphaTable, Engine,
};
use waldschmidt_core::configs::{
    fermat12_configuration, random_configuration, star_configuration, PointConfiguration,
    ProjectivePoint,
};
use waldschmidt_core::exactla::rank_kernel;
use waldschmidt_core::fields::FieldSpec;
use waldschmidt_core::interpolation::{build_hasse_matrix, build_matrix};

/// Least degree with a nonzero form, found by exact elimination on the
/// matrix of all Hasse derivatives. Shares no rank code with the engine's
/// default modular path and uses a different condition matrix.
fn hasse_alpha(z: &PointConfiguration, m: u32) -> u32 {
    (0..)
        .find(|&d| rank_kernel(&build_hasse_matrix(z, m, d).unwrap().matrix).kernel_dim > 0)
        .unwrap()
}

fn fermat() -> PointConfiguration {
    fermat12_configuration(FieldSpec::Eisenstein).unwrap()
}

fn single_point() -> PointConfiguration {
    let f = FieldSpec::Rational;
    let p = ProjectivePoint::new(vec![f.one(), f.from_i64(2), f.from_i64(-3)]).unwrap();
    PointConfiguration::new(2, f, vec![p], "point").unwrap()
}

fn table(z: &PointConfiguration, m_max: u32) -> AlphaTable {
    Engine::default().alpha_table(z, m_max).unwrap()
}

#[test]
fn fermat_table() {
    let z = fermat();
    let t = table(&z, 6);
    let a = t.alphas();
    assert_eq!((a[1], a[2], a[4], a[5]), (8, 9, 17, 18));
    assert_eq!(a[0], hasse_alpha(&z, 1));
    assert_eq!(a[3], hasse_alpha(&z, 4));
    for v in &t.values {
        assert!(v
            .certificate
            .as_ref()
            .unwrap()
            .vanishes_on(&z, v.m)
            .unwrap());
    }
}

#[test]
fn fermat_matrix_shape_and_rank_below_alpha() {
    let z = fermat();
    let c = build_matrix(&z, 2, 8).unwrap();
    assert_eq!((c.matrix.rows(), c.matrix.cols()), (36, 45));
    let r = rank_kernel(&build_matrix(&z, 2, 7).unwrap().matrix);
    assert_eq!((r.rank, r.kernel_dim), (36, 0));
}

#[test]
fn fermat_bounds() {
    let t = AlphaTable::from_values(2, 12, FieldSpec::Eisenstein, &[4, 8, 9, 13, 17, 18]);
    let b = bounds_report(&t);
    assert_eq!(b.waldschmidt_upper, ratio(3, 1));
    assert_eq!(b.ev_lower, ratio(3, 1));
    assert_eq!(b.demailly_ratios[4], (5, ratio(3, 1)));
    assert!(b.chain_holds && b.ev.holds());
    let d = demailly_check(&t);
    assert!(d.holds());
    assert!(d.equalities.contains(&(2, 3)) && d.equalities.contains(&(5, 3)));
    assert!(ev_ratio(8, 2, 2) <= ratio(9, 3));
    assert!(ev_ratio(9, 3, 2) <= ratio(17, 5));
    let els = els_degree_check(&t, 1).unwrap();
    assert!(els.holds && els.alpha_nr == 8);
}

#[test]
fn star_values() {
    let z = star_configuration(2, 5, FieldSpec::Rational, 11).unwrap();
    let e = Engine::default();
    assert_eq!(e.alpha(&z, 1).unwrap().alpha, 4);
    assert_eq!(e.alpha(&z, 3).unwrap().alpha, 9);
}

#[test]
fn star_d3_table_and_bounds() {
    let z = star_configuration(2, 3, FieldSpec::Rational, 5).unwrap();
    let t = table(&z, 3);
    assert_eq!(t.alphas(), vec![2, hasse_alpha(&z, 2), 5]);
    let b = bounds_report(&t);
    assert_eq!(b.els_lower, ratio(1, 1));
    assert_eq!(b.ev_lower, ratio(3, 2));
    assert_eq!(b.waldschmidt_upper, ratio(3, 2));
    assert_eq!(b.demailly_ratios[0], (1, ratio(3, 2)));
    let d = demailly_check(&t);
    assert!(d.holds());
    assert!(d.equalities.iter().any(|&(m, _)| m == 1) && d.equalities.iter().any(|&(m, _)| m == 3));
    // xyz through three non-collinear points: α(2Z) = 3 ≥ 1·α(Z)
    let els = els_degree_check(&t, 1).unwrap();
    assert!(els.holds);
    assert_eq!((els.alpha_nr, els.r_alpha), (3, 2));
}

#[test]
fn single_point_is_linear() {
    let z = single_point();
    let t = table(&z, 4);
    assert_eq!(t.alphas(), vec![1, 2, 3, 4]);
    let b = bounds_report(&t);
    assert_eq!(
        (b.waldschmidt_upper.clone(), b.ev_lower.clone()),
        (ratio(1, 1), ratio(1, 1))
    );
    assert_eq!(b.els_lower, ratio(1, 2));
    assert!(ev_check(&t).holds());
}

#[test]
fn artificial_violation_is_flagged() {
    let t = AlphaTable::from_values(2, 3, FieldSpec::Rational, &[5, 5]);
    let d = demailly_check(&t);
    assert!(!d.table_issues.is_empty());
    assert!(d.violations.contains(&(1, 2)));
}

#[test]
fn main_theorem_instances() {
    let e = Engine::default();
    for seed in 0..20 {
        let z = random_configuration(3, 8, FieldSpec::Rational, seed).unwrap();
        let t = e.alpha_table(&z, 1).unwrap();
        let v = main_theorem_check(3, 1, 8, &t).unwrap();
        assert_eq!((v.k, v.degree_bound), (2, 4));
        assert!(v.holds(), "seed {seed}: {v:?}");
    }
    let z = random_configuration(2, 4, FieldSpec::Rational, 1).unwrap();
    let t = e.alpha_table(&z, 1).unwrap();
    let v = main_theorem_check(2, 1, 4, &t).unwrap();
    assert_eq!((v.alpha, v.degree_bound), (2, 3));
    let z = random_configuration(2, 9, FieldSpec::Rational, 1).unwrap();
    let t = e.alpha_table(&z, 2).unwrap();
    let v = main_theorem_check(2, 2, 9, &t).unwrap();
    assert_eq!(v.degree_bound, 8);
    assert!(v.holds() && v.applicable);
}

#[test]
fn linear_scan_and_exact_mode_agree() {
    let z = star_configuration(2, 4, FieldSpec::Rational, 2).unwrap();
    let modular = Engine::default();
    let exact = Engine::exact();
    for m in 1..=3 {
        let a = modular.alpha(&z, m).unwrap();
        assert_eq!(a.alpha, modular.alpha_linear_scan(&z, m).unwrap().alpha);
        let b = exact.alpha(&z, m).unwrap();
        assert_eq!(a.alpha, b.alpha);
        assert_eq!(a.certificate, b.certificate, "m = {m}");
    }
}

#[test]
fn prime_field_alpha_matches_oracle() {
    let z = random_configuration(2, 6, FieldSpec::Prime(101), 4).unwrap();
    for m in 1..=3 {
        assert_eq!(
            Engine::default().alpha(&z, m).unwrap().alpha,
            hasse_alpha(&z, m)
        );
    }
}
