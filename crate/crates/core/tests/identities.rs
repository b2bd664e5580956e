use proptest::prelude::*;
use ptrig::{m_p, u_p, PExponent};

fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

fn conj(p: f64) -> f64 {
    p / (p - 1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pythagorean(p in 1.05f64..12.0, x in -40.0f64..40.0) {
        let (s, c) = pe(p).sin_cos(x).unwrap();
        prop_assert!((s.abs().powf(p) + c.abs().powf(p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetries(p in 1.05f64..12.0, x in -20.0f64..20.0) {
        let e = pe(p);
        let pp = e.pi_p();
        let s = e.sin_p(x).unwrap();
        let c = e.cos_p(x).unwrap();
        prop_assert!((e.sin_p(-x).unwrap() + s).abs() < 1e-12);
        prop_assert!((e.cos_p(-x).unwrap() - c).abs() < 1e-12);
        prop_assert!((e.sin_p(x + 2.0 * pp).unwrap() - s).abs() < 1e-12);
        prop_assert!((e.cos_p(x + pp).unwrap() + c).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_on_first_quadrant(p in 1.05f64..12.0, t in 0.0f64..1.0) {
        let e = pe(p);
        let x = t * e.pi_p() / 2.0;
        let (s, c) = e.sin_cos(x).unwrap();
        // F_p'(y) = 1/cos_p, so rounding in s is amplified near π_p/2.
        let tol = 1e-11 + 4.0 * f64::EPSILON / c.max(f64::MIN_POSITIVE);
        prop_assert!((e.incomplete_f(s).unwrap() - x).abs() < tol);
    }

    #[test]
    fn conjugate_identity(p in 1.05f64..12.0, x in 0.0f64..0.4999) {
        let q = conj(p);
        let lhs = pe(p).cos_p(pe(p).pi_p() * x).unwrap();
        let eq = pe(q);
        let rhs = eq.sin_p(eq.pi_p() * (0.5 - x)).unwrap().powf(q - 1.0);
        prop_assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn ordering_in_p(p in 1.05f64..8.0, dq in 0.0f64..4.0, x in 0.0f64..0.5) {
        let q = p + dq;
        let (ep, eq) = (pe(p), pe(q));
        let (sp, cp) = ep.sin_cos(ep.pi_p() * x).unwrap();
        let (sq, cq) = eq.sin_cos(eq.pi_p() * x).unwrap();
        prop_assert!(sp >= sq - 1e-12);
        prop_assert!(cp <= cq + 1e-12);
    }

    #[test]
    fn derivatives_match_differences(p in 1.3f64..6.0, t in 0.05f64..0.95) {
        let e = pe(p);
        let x = t * e.pi_p() / 2.0;
        let h = 1e-5;
        let fd1 = (e.cos_p(x + h).unwrap() - e.cos_p(x - h).unwrap()) / (2.0 * h);
        let d1 = e.dcos_p(x).unwrap();
        prop_assert!((fd1 - d1).abs() < 1e-6 * d1.abs().max(1.0));
        let fd2 = (e.dcos_p(x + h).unwrap() - e.dcos_p(x - h).unwrap()) / (2.0 * h);
        let d2 = e.d2cos_p(x).unwrap();
        prop_assert!((fd2 - d2).abs() < 1e-6 * d2.abs().max(1.0), "{fd2} vs {d2}");
    }
}

#[test]
fn classical_collapse() {
    let e = pe(2.0);
    for i in 0..200 {
        let x = -10.0 + 0.1 * i as f64;
        assert!((e.sin_p(x).unwrap() - x.sin()).abs() < 1e-14);
        assert!((e.cos_p(x).unwrap() - x.cos()).abs() < 1e-14);
    }
}

#[test]
fn u_p_falls_then_rises() {
    for p in [1.1, 1.3, 1.46, 1.7, 1.9] {
        let m = m_p(p).unwrap();
        assert!(m > 0.0 && m < 0.5);
        let n = 1000;
        let xs: Vec<f64> = (0..=n).map(|i| 0.5 * i as f64 / n as f64).collect();
        let us: Vec<f64> = xs.iter().map(|&x| u_p(x, p).unwrap()).collect();
        for i in 0..n {
            let d = us[i + 1] - us[i];
            if xs[i + 1] <= m {
                assert!(d <= 0.0, "p={p}: rises at x={}", xs[i]);
            } else if xs[i] >= m {
                assert!(d >= 0.0, "p={p}: falls at x={}", xs[i]);
            }
        }
    }
}

#[test]
fn domains_are_enforced() {
    for p in [1.0, 0.5, -2.0, f64::NAN, f64::INFINITY] {
        assert!(PExponent::new(p).is_err(), "p={p}");
    }
    assert!(pe(3.0).incomplete_f(1.5).is_err());
    assert!(u_p(0.2, 2.5).is_err());
    assert!(u_p(0.7, 1.5).is_err());
    assert!(!pe(1.5).sin_p(f64::NAN).is_ok_and(|v| v.is_finite()));
}
