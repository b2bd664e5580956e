use std::f64::consts::PI;

use ptrig::quadrature::GaussLegendre;
use ptrig::thresholds::*;
use ptrig::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn bracket_facts() {
    let at_4_3 = PI * PI * 3f64.powf(1.25) * 2f64.sqrt() / 2.0;
    let at_3_2 = 64.0 * PI * PI / (27.0 * 4f64.cbrt());
    assert!(rel(lhs_eq51(4.0 / 3.0).unwrap(), at_4_3) < 1e-12);
    assert!(rel(lhs_eq51(1.5).unwrap(), at_3_2) < 1e-12);
    assert!(at_4_3 > p0_level() && p0_level() > at_3_2);
    assert!((h(2.0).unwrap() - PI / 2.0 * (PI * PI / 8.0 - 1.0)).abs() < 1e-12);
    assert!(h(2.2).unwrap() < 1.0 && h(3.0).unwrap() > 1.0);
}

#[test]
fn thresholds_are_reproducible() {
    let (a, b) = (solve_p0().unwrap(), solve_p0().unwrap());
    assert_eq!(a.root.to_bits(), b.root.to_bits());
    assert!((a.root - 1.458801).abs() < 5e-6);
    assert!(a.bracket.0 <= a.root && a.root <= a.bracket.1);
    assert!(a.bracket.1 - a.bracket.0 < 1e-11);
    let (a, b) = (solve_p1().unwrap(), solve_p1().unwrap());
    assert_eq!(a.root.to_bits(), b.root.to_bits());
    assert!((a.root - 2.42865).abs() < 5e-5);
    assert!(unreduced_p1_gap(a.root).unwrap().abs() < 1e-10);
    assert!(a.iterations == a.trace.len());
}

#[test]
fn solver_contracts() {
    let r = solve_bracketed(|x| Ok((x - 0.3).powi(3)), 0.0, 1.0).unwrap();
    assert!((r.root - 0.3).abs() < 1e-4);
    let r = solve_bracketed(|x| Ok(x.exp() - 2.0), 0.0, 1.0).unwrap();
    assert!((r.root - 2f64.ln()).abs() < 1e-12);
    assert!(matches!(
        solve_bracketed(|x| Ok(x * x + 1.0), -1.0, 1.0),
        Err(Error::Bracket { .. })
    ));
}

#[test]
fn monotone_scans() {
    let mut last = f64::NEG_INFINITY;
    for i in 0..=100 {
        let v = h(2.0 + i as f64 / 100.0).unwrap();
        assert!(v > last);
        last = v;
    }
    let mut last = f64::INFINITY;
    for i in 1..200 {
        let q = 1.0 + i as f64 / 200.0;
        let v = odd_reciprocal_sum(q).unwrap();
        assert!(v - last <= 1e-12, "q={q}");
        last = v;
    }
    let mut last = f64::INFINITY;
    for i in 1..=200 {
        let v = zeta(1.0 + i as f64 / 100.0).unwrap();
        assert!(v < last);
        last = v;
    }
    assert!(convexity_scan().unwrap() >= -1e-9);
}

#[test]
fn zeta_values() {
    assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
    assert!((zeta(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-13);
    assert!(zeta(1.0).is_err() && zeta(0.5).is_err());
}

/// `Γ(q) ζ(q) = ∫_0^∞ t^(q−1)/(e^t − 1) dt`, here at `q = 3/2` with
/// `t = u²`, which leaves the smooth integrand `2u²/(e^{u²} − 1)`.
#[test]
fn zeta_three_halves_against_integral() {
    let rule = GaussLegendre::gl16();
    let (upper, panels) = (8.0, 400);
    let w = upper / panels as f64;
    let integral: f64 = (0..panels)
        .map(|i| {
            rule.integrate(
                |u| {
                    if u == 0.0 {
                        2.0
                    } else {
                        2.0 * u * u / (u * u).exp_m1()
                    }
                },
                i as f64 * w,
                (i + 1) as f64 * w,
            )
        })
        .sum();
    let oracle = integral / (PI.sqrt() / 2.0);
    assert!((zeta(1.5).unwrap() - oracle).abs() < 1e-8);
}

/// `Σ_{odd j} j^-q` by summing the first 10⁶ odd terms and closing with the
/// Euler–Maclaurin tail.
fn brute_odd_sum(q: f64) -> f64 {
    let terms = 1_000_000u64;
    let head: f64 = (0..terms)
        .rev()
        .map(|k| ((2 * k + 1) as f64).powf(-q))
        .sum();
    let m = (2 * terms + 1) as f64;
    let tail = m.powf(1.0 - q) / (2.0 * (q - 1.0)) + 0.5 * m.powf(-q) + q / 6.0 * m.powf(-q - 1.0);
    head + tail
}

#[test]
fn odd_sums_against_brute_force() {
    for q in [1.5, 2.0, 3.0] {
        let b = brute_odd_sum(q);
        assert!((odd_reciprocal_sum(q).unwrap() - b).abs() < 1e-10, "q={q}");
    }
    assert!((odd_reciprocal_sum(2.0).unwrap() - PI * PI / 8.0).abs() < 1e-14);
}

#[test]
fn sandwich_and_side_facts() {
    let z = zeta32_sandwich().unwrap();
    assert!(z.lower < z.value && z.value < z.upper);
    assert_eq!(z.lower, zeta32_lower());
    assert_eq!(z.upper, c1());
    assert_eq!(z.t0, t0());
    assert!(sin_5pi_11_gap() > 0.0);
    assert!(zeta(11.0 / 6.0).unwrap() < zeta_11_6_chord());
}
