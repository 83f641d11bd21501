use std::f64::consts::{LN_2, PI};

use serialscat::*;

const GAMMA: f64 = 0.5772156649015329;

#[test]
fn digamma_values() {
    assert!((digamma(1.0) + GAMMA).abs() < 1e-14);
    assert!((digamma(0.5) + GAMMA + 2.0 * LN_2).abs() < 1e-14);
    // ψ(x+1) = ψ(x) + 1/x across the reflection branch
    for x in [-2.5f64, -0.3, 0.2, 3.7, 12.0, 150.5] {
        assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-12, "{x}");
    }
    let h10: f64 = (1..=10).map(|j| 1.0 / j as f64).sum();
    assert!((harmonic(10.0) - h10).abs() < 1e-14);
    assert!((alt_harmonic(1.0) - LN_2).abs() < 1e-15);
    assert!((alt_harmonic(0.5) - PI / 2.0).abs() < 1e-14);
    assert!(digamma(-3.0f64).is_nan());
}

#[test]
fn digamma_against_statrs() {
    for i in 0..4000 {
        let x = -20.0 + 0.0173 * i as f64 + 1e-3;
        let (a, b) = (digamma(x), statrs::function::gamma::digamma(x));
        assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0), "{x}: {a} {b}");
    }
}

#[test]
fn g_at_zero() {
    let want = -1.0 / (4.0 * PI);
    let (g, bound) = g_series(0.0, 5000).unwrap();
    assert!((g - want).abs() < 1e-10);
    assert!(bound < 1e-12);
    assert!((g_closed(0.0).unwrap() - want).abs() < 1e-15);
    // brute force: mean of two consecutive partial sums cancels the 1/n term
    let mut s = 0.0;
    let mut prev = 0.0;
    for l in 1..=1_000_000u64 {
        prev = s;
        let lf = l as f64;
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * (2.0 * lf + 1.0) / (lf * (lf + 1.0));
    }
    assert!(((s + prev) / (8.0 * PI) - want).abs() < 1e-10);
}

#[test]
fn series_match_closed_forms() {
    for i in 0..400 {
        let k = 0.05 + 0.1 * i as f64 + 0.0123;
        let (g, eg) = g_series(k, 5000.max(50 * (k * k).ceil() as usize)).unwrap();
        let (z, ez) = z_series(k, 0.03, 5000.max(50 * (k * k).ceil() as usize), 0.0).unwrap();
        let gc = g_closed(k).unwrap();
        let zc = z_closed(k, 0.03, 0.0).unwrap();
        let scale = 1.0 + gc.abs();
        assert!((g - gc).abs() < 1e-11 * scale, "k={k} {g} {gc}");
        assert!((z - zc).abs() < 1e-11 * (1.0 + zc.abs()), "k={k} {z} {zc}");
        assert!(eg < 1e-12 * scale && ez < 1e-12 * (1.0 + zc.abs()));
    }
    // Z(0) = γ/4π − ln ρ/2π
    let (z0, _) = z_series(0.0, 0.2, 5000, 0.0).unwrap();
    assert!((z0 - (GAMMA / (4.0 * PI) - 0.2f64.ln() / (2.0 * PI))).abs() < 1e-12);
}

#[test]
fn z_brute_force_converges() {
    // literal double sum; the O(1/l) parts cancel term by term, leaving a 1/n² error
    let k2: f64 = 7.3;
    let naive = |n: usize| -> f64 {
        let mut s = 0.0;
        for l in 1..=n {
            let lf = l as f64;
            let inner: f64 = (0..=2 * l).map(|j| 1.0 / ((l * l + j + 1) as f64)).sum();
            s += (2.0 * lf + 1.0) / (lf * (lf + 1.0) - k2) - inner;
        }
        s / (4.0 * PI)
    };
    let (z, _) = z_series(k2.sqrt(), 1.0, 5000, 0.0).unwrap();
    let e1 = z - naive(400);
    let e2 = z - naive(800);
    assert!(e1.abs() < 1e-2);
    assert!((e1 / e2 - 4.0).abs() < 0.1, "{e1} {e2}");
}

#[test]
fn z_difference_series() {
    // Z(k) − Z(k′) as a plainly convergent single sum
    let (k, kp) = (2.3f64, 4.1f64);
    let mut d = 0.0;
    for l in 1..=200_000u64 {
        let lf = l as f64;
        let lam = lf * (lf + 1.0);
        d += (2.0 * lf + 1.0) * (1.0 / (lam - k * k) - 1.0 / (lam - kp * kp));
    }
    d /= 4.0 * PI;
    let z1 = z_series(k, 0.05, 5000, 0.0).unwrap().0;
    let z2 = z_series(kp, 0.05, 5000, 0.0).unwrap().0;
    assert!((z1 - z2 - d).abs() < 1e-9);
}

#[test]
fn z_rho_scaling_and_constant() {
    for k in [0.7, 3.3, 11.9] {
        let a = z_series(k, 0.01, 5000, 0.0).unwrap().0;
        let b = z_series(k, 0.3, 5000, 0.0).unwrap().0;
        assert!((a - b + (0.01f64.ln() - 0.3f64.ln()) / (2.0 * PI)).abs() < 1e-13);
        let c = z_series(k, 0.01, 5000, 0.25).unwrap().0;
        assert!((c - a - 0.25).abs() < 1e-14);
    }
}

#[test]
fn z_pole_below_eigenvalue() {
    for l in [2usize, 5, 9] {
        let lam = (l * (l + 1)) as f64;
        let w = (2 * l + 1) as f64 / (4.0 * PI);
        for d in [1e-4, 1e-6] {
            let z = z_series((lam - d).sqrt(), 0.1, 5000, 0.0).unwrap().0;
            assert!(z > 0.0);
            assert!((z * d - w).abs() < 20.0 * d, "l={l} d={d}");
        }
    }
}

#[test]
fn truncation_self_consistency() {
    for k in [1.1f64, 6.6, 17.2] {
        let (g1, b1) = g_series(k, 600).unwrap();
        let (g2, b2) = g_series(k, 6000).unwrap();
        assert!((g1 - g2).abs() <= b1 + b2);
        let (z1, c1) = z_series(k, 0.1, 600, 0.0).unwrap();
        let (z2, c2) = z_series(k, 0.1, 6000, 0.0).unwrap();
        assert!((z1 - z2).abs() <= c1 + c2, "{} {}", (z1 - z2).abs(), c1 + c2);
    }
}

#[test]
fn eigenvalue_hits_are_errors() {
    assert_eq!(g_series(6f64.sqrt(), 100), Err(Error::EigenvalueHit(2)));
    let p = SphereParams64::new(0.1);
    assert!(matches!(sphere_transmission(&p, 12f64.sqrt()), Err(Error::EigenvalueHit(3))));
    assert!(sphere_transmission(&p, 12f64.sqrt() + 1e-6).is_ok());
    assert!(SphereParams64::new(0.1).with_l_max(5).truncation(1.0) == 5);
    assert!(sphere_series(&SphereParams64::new(0.1).with_l_max(5), 1.0).is_err());
    assert!(sphere_series(&SphereParams64::new(-0.1), 1.0).is_err());
}

#[test]
fn g_two_term_bound() {
    // away from the two nearest eigenvalues g is within 1/2π of its singular pair
    for l in 2..40usize {
        let (a, b) = ((l * (l - 1)) as f64, (l * (l + 1)) as f64);
        for i in 1..20 {
            let e = a + (b - a) * i as f64 / 20.0;
            let g = g_closed(e.sqrt()).unwrap();
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let pair = sign / (4.0 * PI) * (-((2 * l - 1) as f64) / (a - e) + (2 * l + 1) as f64 / (b - e));
            assert!((g - pair).abs() < 1.0 / (2.0 * PI));
        }
    }
}

#[test]
fn transfer_is_real_unimodular() {
    let p = SphereParams64::new(0.05);
    for k in [0.4, 2.2, 5.9, 13.1] {
        let lt = sphere_transfer(&p, k).unwrap();
        assert!((lt.det() - C64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(lt.phi.abs() < 1e-12);
        assert!(lt.curly_defect() < 1e-15);
        assert_eq!(lt.l[0][0], lt.l[1][1]);
    }
}

#[test]
fn amplitudes_match_closed_expressions() {
    for rho in [0.01, 0.1] {
        let p = SphereParams64::new(rho);
        for k in [0.3, 1.7, 4.45, 9.2] {
            let s = sphere_series(&p, k).unwrap();
            let sm = sphere_transmission(&p, k).unwrap();
            assert!((sphere_quoted_t(&s, rho, k) + sm.t).norm() < 1e-12);
            let (g, z, d) = (s.g, s.z, s.delta);
            let den = C64::new(PI * d + 2.0 * z - 1.0 / PI - 4.0 * PI * k * k * rho * rho * d, 2.0 * k * rho * (2.0 * z + 2.0 * PI * d));
            let r = -(PI * d + 2.0 * z - 1.0 / PI + 4.0 * PI * k * k * rho * rho * d) / den;
            assert!((sm.r - r).norm() < 1e-12);
            assert!((sm.t - C64::new(0.0, 4.0 * k * rho * g) / den).norm() < 1e-12);
            assert!((sm.r - sm.r_rev).norm() < 1e-14);
            assert!((sm.t - sm.t_rev).norm() < 1e-14);
        }
    }
}

#[test]
fn unitarity_on_grid() {
    let p = SphereParams64::new(0.01).with_l_max(5000);
    let mut worst: f64 = 0.0;
    for i in 0..10_000 {
        let k = 0.1 + 39.9 * (i as f64 + 0.5) / 10_000.0;
        let s = sphere_transmission(&p, k).unwrap();
        worst = worst.max((s.transmission() + s.reflection() - 1.0).abs());
    }
    assert!(worst < 1e-9, "{worst}");
}

#[test]
fn resonance_factor_increases() {
    let p = SphereParams64::new(0.1);
    for l in [3usize, 8, 15] {
        let (a, b) = ((l * (l - 1)) as f64, (l * (l + 1)) as f64);
        let mut prev = f64::NEG_INFINITY;
        for i in 1..200 {
            let v = resonance_factor(&p, l, a + (b - a) * i as f64 / 200.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
}

#[test]
fn mu_roots_unique_and_located() {
    let p = SphereParams64::new(0.1);
    // below l = 13 the factor is positive on the whole interval at this ρ
    let roots = mu_roots(&p, 10..=60);
    assert_eq!(roots.len(), 48);
    assert_eq!(roots[0].0, 13);
    for &(l, mu) in &roots {
        let (a, b) = ((l * (l - 1)) as f64, (l * (l + 1)) as f64);
        assert!(mu > a && mu < b);
        assert!(resonance_factor(&p, l, mu).unwrap().abs() < 1e-8);
        if l <= 30 {
            let f: Vec<f64> = (1..400).map(|i| resonance_factor(&p, l, a + (b - a) * i as f64 / 400.0).unwrap()).collect();
            assert_eq!(f.windows(2).filter(|w| w[0] * w[1] < 0.0).count(), 1);
        }
        if l >= 20 {
            let ratio = (b - mu) / (2.0 * l as f64 / (l as f64).ln());
            assert!(ratio > 1.0 / 3.0 && ratio < 3.0, "l={l} ratio={ratio}");
            let s = sphere_series(&p, mu.sqrt()).unwrap();
            assert!(sphere_transmission(&p, mu.sqrt()).unwrap().transmission() >= 0.8);
            if l >= 30 {
                assert!((s.z / s.g.abs() + 1.0).abs() < 0.2, "l={l} {}", s.z / s.g.abs());
            }
        }
    }
}

#[test]
fn small_contact_has_no_low_roots() {
    // for ρ = 0.01 the factor stays positive on the low intervals
    let p = SphereParams64::new(0.01);
    assert!(matches!(mu_root(&p, 20), Err(Error::NoRoot(20))));
    assert!(mu_root(&p, 0).is_err());
}

#[test]
fn averaging() {
    let ks: Vec<f64> = (0..500).map(|i| i as f64 * 0.01).collect();
    assert!(averaged_transmission(&ks, &vec![0.37; 500]).iter().all(|a| (a - 0.37).abs() < 1e-14));
    // sin² averages to ½ over whole periods of peaks
    let t2: Vec<f64> = (0..20_001).map(|i| (i as f64 * 0.005 * PI).sin().powi(2)).collect();
    let ks: Vec<f64> = (0..20_001).map(|i| i as f64 * 0.005).collect();
    let peaks = local_maxima(&t2);
    assert_eq!(peaks.len(), 100);
    let avg = averaged_transmission(&ks, &t2);
    assert!(avg.iter().all(|a| (a - 0.5).abs() < 1e-6));
}

#[test]
fn delta_prime_reference_curve() {
    assert!((delta_prime_reference(2.0f64, 1.0).unwrap() - 0.5).abs() < 1e-15);
    let beta = calibrate_delta_prime(25.0f64, 0.3).unwrap();
    assert!((delta_prime_reference(beta, 25.0).unwrap() - 0.3).abs() < 1e-14);
    assert!(calibrate_delta_prime(25.0f64, 0.0).is_err());
}

#[test]
fn sphere_array_engines_agree() {
    let p = SphereParams64::new(0.05);
    for k in [0.9, 2.6, 7.7] {
        let lt = sphere_transfer(&p, k).unwrap();
        let e = sphere_element_data(&p, k).unwrap();
        assert!(e.unimodularity_defect() < 1e-9);
        let a = serial_closed_form(&e, 1.0, 6, k);
        let b = serial_transfer_product(&lt, 1.0, 6, k).unwrap();
        assert!((a.transmission() - b.transmission()).abs() < 1e-9);
    }
}

#[test]
fn single_precision() {
    let p = SphereParams::<f32>::new(0.1).with_l_max(2000);
    let s = sphere_transmission(&p, 3.3f32).unwrap();
    let s64 = sphere_transmission(&SphereParams64::new(0.1).with_l_max(2000), 3.3).unwrap();
    assert!((s.transmission() as f64 - s64.transmission()).abs() < 1e-3);
    assert!((g_series(0.0f32, 2000).unwrap().0 + 1.0 / (4.0 * std::f32::consts::PI)).abs() < 1e-5);
}
