use std::f64::consts::PI;

use serialscat::*;

fn fig6() -> CombParams64 {
    CombParams64::new(0.4, 0.0, 0.0, 1.2, 1.0)
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn single_tooth_denominator() {
    let p = CombParams64::new(1.1, 0.3, -0.4, 1.0, 1.0);
    for k in [c(0.7, 0.0), c(2.1, -0.3)] {
        let beta = comb_beta_complex(&p, k).unwrap();
        let d = krein_denominator(&p, 1, k).unwrap();
        assert!((d + C64::new(1.0, 0.0) + C64::i() * beta).norm() < 1e-14);
    }
}

#[test]
fn regularized_determinant_shares_zeros() {
    let p = fig6();
    for k in [c(1.3, -0.2), c(2.9, -1.1), c(4.0, 0.01)] {
        let s = solve_tooth(&Potential::Zero, 1.2, k).unwrap();
        let q = k * 2.0 * (-s.u0);
        let lhs = krein_determinant(&p, 5, k).unwrap();
        let rhs = q.powu(5) * krein_denominator(&p, 5, k).unwrap();
        assert!((lhs - rhs).norm() < 1e-11 * (1.0 + lhs.norm()));
    }
}

#[test]
fn no_real_zeros_in_bands() {
    let p = fig6();
    for i in 0..2000 {
        let k = 0.01 + 9.0 * i as f64 / 1999.0;
        let d = krein_denominator(&p, 5, c(k, 0.0)).unwrap();
        assert!(d.norm() > 1e-6, "k = {k}");
    }
}

#[test]
fn fig6_poles_match_reference() {
    // reference zeros from an independent arbitrary-precision root finder
    let want = [
        c(0.38128428, -0.29091698),
        c(0.93777145, -0.6577427),
        c(1.5188493, -0.70517107),
        c(2.12308318, -0.52982274),
        c(2.40270351, -0.0890353),
        c(2.63710076, -0.00021368),
        c(2.64451864, -0.00147278),
        c(2.66721323, -0.00933569),
        c(2.7453675, -0.08153851),
    ];
    let p = fig6();
    let set = find_poles(&p, 5, band_region(0, 1.0, 3.0, 0.05), &PoleSearch::default()).unwrap();
    assert_eq!(set.count, 9);
    assert_eq!(set.poles.len(), 9);
    for (got, w) in set.poles.iter().zip(want) {
        assert!((got.k - w).norm() < 1e-7, "{} vs {w}", got.k);
        assert!(got.residual < 1e-10);
        assert!(got.k.im <= 0.0);
    }
}

#[test]
fn fig6_origins() {
    let p = fig6();
    let ks = stub_spectrum(&p, (0.05, 12.0), 400).unwrap();
    for m in 0..2 {
        let set = find_poles(&p, 5, band_region(m, 1.0, 3.0, 0.05), &PoleSearch::default()).unwrap();
        let set = classify_poles(&p, 5, &set, &ks);
        assert_eq!(set.of_origin(PoleOrigin::Stub), 5);
        assert_eq!(set.of_origin(PoleOrigin::Spatial), 4);
        let kn = ks[m];
        for q in &set.poles {
            if q.origin == PoleOrigin::Stub {
                assert_eq!(q.nearest_k_n, Some(kn));
            }
        }
        // stub-origin resonances are the narrow ones
        let widest_stub = set.poles.iter().filter(|q| q.origin == PoleOrigin::Stub).map(|q| -q.k.im).fold(0.0, f64::max);
        let narrowest_spatial = set.poles.iter().filter(|q| q.origin == PoleOrigin::Spatial).map(|q| -q.k.im).fold(f64::INFINITY, f64::min);
        assert!(widest_stub < narrowest_spatial);
    }
}

#[test]
fn stub_poles_flow_to_eigenvalue() {
    let p = fig6();
    let kn = PI / 1.2;
    let set = find_poles(&p, 5, band_region(0, 1.0, 3.0, 0.05), &PoleSearch::default()).unwrap();
    let set = classify_poles(&p, 5, &set, &[kn, 2.0 * kn]);
    for q in set.poles.iter().filter(|q| q.origin == PoleOrigin::Stub) {
        // the N zeros merge like b^{2/N}, so the path is stopped at b₀/50
        let h = continue_to_decoupled(&p, 5, q.k, 0.008, 10.0);
        assert!(h.converged);
        let (b, end) = *h.path.last().unwrap();
        assert!(b <= 0.008);
        assert!((end - c(kn, 0.0)).norm() < 0.1 * (q.k - c(kn, 0.0)).norm().max(0.1), "{end}");
    }
}

#[test]
fn count_law() {
    for b in [0.2, 0.4, 0.8] {
        for n in [3, 5] {
            let p = CombParams64::new(b, 0.0, 0.0, 1.2, 1.0);
            for m in 0..2 {
                assert_eq!(band_resonance_count(&p, n, m, 3.0, 32).unwrap(), 2 * n - 1, "b={b} N={n} m={m}");
            }
        }
    }
}

#[test]
fn mirror_symmetry() {
    let p = CombParams64::new(0.8, 0.2, -0.5, 1.2, 1.0);
    let right = find_poles(&p, 3, Region { re: (0.05, 6.0), im: (-3.0, 0.05) }, &PoleSearch::default()).unwrap();
    let left = find_poles(&p, 3, Region { re: (-6.0, -0.05), im: (-3.0, 0.05) }, &PoleSearch::default()).unwrap();
    assert_eq!(right.count, left.count);
    assert!(right.count > 0);
    assert!(mirror_defect(&right, &left) < 1e-10);
    assert!(mirror_defect(&left, &right) < 1e-10);
}

#[test]
fn empty_regions() {
    let p = fig6();
    // upper half plane: unitarity forbids resonances there
    let up = find_poles(&p, 5, Region { re: (0.5, 6.0), im: (0.1, 2.0) }, &PoleSearch::default()).unwrap();
    assert_eq!(up.count, 0);
    assert!(up.poles.is_empty());
    // a pocket between the spatial resonances of the first window
    let pocket = find_poles(&p, 5, Region { re: (1.0, 1.4), im: (-0.2, 0.05) }, &PoleSearch::default()).unwrap();
    assert_eq!(pocket.count, 0);
}

#[test]
fn decoupled_teeth_give_n_fold_real_zeros() {
    let p = CombParams64::new(0.0, 0.0, 0.0, 1.2, 1.0);
    let kn = PI / 1.2;
    let f = |k: C64| krein_determinant(&p, 4, k);
    let disk = Region { re: (kn - 0.1, kn + 0.1), im: (-0.1, 0.1) };
    assert_eq!(winding_number(&f, &disk, 32).unwrap(), 4);
    let set = find_poles(&p, 4, disk, &PoleSearch::default()).unwrap();
    assert_eq!(set.poles.len(), 1);
    assert_eq!(set.poles[0].multiplicity, 4);
    assert!((set.poles[0].k - c(kn, 0.0)).norm() < 1e-3);
}

#[test]
fn transmission_blows_up_at_poles() {
    let p = fig6();
    let set = find_poles(&p, 5, band_region(1, 1.0, 3.0, 0.05), &PoleSearch::default()).unwrap();
    for q in &set.poles {
        // simple pole: |t(k + δ)|·δ settles to 1/|D′(k)|
        let a = continued_transmission(&p, 5, q.k + 1e-6).unwrap().norm() * 1e-6;
        let b = continued_transmission(&p, 5, q.k + 1e-8).unwrap().norm() * 1e-8;
        assert!((a - b).abs() < 1e-3 * b, "{} {a} {b}", q.k);
    }
    // on the real axis the continuation is the physical amplitude
    let k = 1.7;
    let t = continued_transmission(&p, 5, c(k, 0.0)).unwrap();
    assert!((t - comb_amplitudes(&p, 5, k).unwrap().amp.t_n).norm() < 1e-13);
}

#[test]
fn potential_teeth_poles() {
    // a constant potential shifts the tooth eigenvalue to √(k_n² + v0)
    let v0 = 2.0;
    let p = CombParams64::new(0.3, 0.0, 0.0, 1.2, 1.0).with_potential(Potential::Constant(v0));
    let kn = ((PI / 1.2).powi(2) + v0).sqrt();
    let set = find_poles(&p, 3, Region { re: (kn - 0.3, kn + 0.3), im: (-0.2, 0.05) }, &PoleSearch::default()).unwrap();
    assert!(set.count >= 3);
    let ks = stub_spectrum(&p, (0.5, 6.0), 200).unwrap();
    let set = classify_poles(&p, 3, &set, &ks);
    assert_eq!(set.of_origin(PoleOrigin::Stub), 3);
}
