use num_bigint::BigInt;
use waldschmidt_core::interpolation::binomial;
use waldschmidt_core::lemma::{discriminant, dk, dn, u, verify_lemma, CheckKind, LemmaDomain};

/// C(kq+1, N) − C(q, N)(k+1)^N straight from binomials.
fn gap(n: u64, m: u64, k: u64) -> BigInt {
    let q = m + n - 1;
    BigInt::from(binomial(k * q + 1, n))
        - BigInt::from(binomial(q, n)) * BigInt::from(k + 1).pow(n as u32)
}

#[test]
fn default_box_has_no_failures() {
    let r = verify_lemma(&LemmaDomain::default()).unwrap();
    assert_eq!(r.total_failures(), 0, "{:?}", r.failures);
    for kind in [
        CheckKind::Inequality,
        CheckKind::Product,
        CheckKind::PairInequality,
        CheckKind::DkNonnegative,
        CheckKind::DnNonnegative,
        CheckKind::Uk3ClosedForm,
        CheckKind::DiscriminantNegative,
    ] {
        let c = r.count(kind);
        assert!(c.checked > 0 && c.failed == 0, "{kind:?}: {c:?}");
    }
    // 8 values of N, 10 of m, 10 of k
    assert_eq!(r.count(CheckKind::Inequality).checked, 800);
    assert_eq!(r.count(CheckKind::DiscriminantNegative).checked, 50 * 51);
    assert!(r
        .findings
        .iter()
        .any(|f| f.check == Some(CheckKind::Uk3ClosedForm)));
    assert!(r
        .findings
        .iter()
        .any(|f| f.check == Some(CheckKind::DkLeadCoefficient)));
}

#[test]
fn independent_spot_checks() {
    for n in 3..=6u64 {
        for m in 1..=4u64 {
            for k in m + 1..=m + 4 {
                assert!(gap(n, m, k) >= BigInt::from(0), "N={n} m={m} k={k}");
            }
        }
    }
    assert_eq!(gap(3, 1, 2), BigInt::from(35 - 27));
    assert!(u(5, 2, 3, 2) >= BigInt::from(0));
    assert!(dk(4, 3, 5, 1) >= BigInt::from(0));
    assert!(dn(7, 2, 3) >= BigInt::from(0));
    assert!(discriminant(50, 50) < BigInt::from(0));
}
