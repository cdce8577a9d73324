//! Cross-representation and reduction properties of the polynomial families,
//! including the large-p limit behavior.

use konhauser_kit::gamma::factorial_scaled;
use konhauser_kit::poly::*;
use proptest::prelude::*;

#[test]
fn limit_relation_scaled_error_decreases() {
    // p^{-n/2} IK_n(z/sqrt(p), t) against sigma * n! * hk_poly over
    // p = 1e3, 1e4, 1e5: the error must fall monotonically, with the sign
    // recorded empirically per degree.
    let (q, ups, z, t) = (0.5, 2u32, 1.0, 1.0);
    let mut sigmas = Vec::new();
    for n in 0..=3u32 {
        let target_mag = factorial_scaled(n).to_f64() * hk_poly(n, q, ups, z, t).unwrap();
        let scaled: Vec<f64> = [1e3, 1e4, 1e5]
            .iter()
            .map(|&pp| {
                let params = PolyParams::new(n, pp, q, ups);
                pp.powf(-f64::from(n) / 2.0) * ik_poly(&params, z / pp.sqrt(), t).unwrap()
            })
            .collect();
        let sigma = if (scaled[2] - target_mag).abs() <= (scaled[2] + target_mag).abs() {
            1.0
        } else {
            -1.0
        };
        sigmas.push(sigma);
        let errs: Vec<f64> = scaled
            .iter()
            .map(|v| (v - sigma * target_mag).abs() / target_mag.abs())
            .collect();
        assert!(
            errs.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-12),
            "n={n}: errors {errs:?} not monotone"
        );
    }
    // n = 0, 1 converge exactly with positive sign.
    assert_eq!(sigmas[0], 1.0);
    assert_eq!(sigmas[1], 1.0);
}

#[test]
fn limit_relation_dual_converges() {
    // p^{-r/2} dual(z/sqrt(p), t) -> hermite(r, z) * sum Y: true convergence.
    let (q, ups, z, t) = (0.5, 2u32, 1.0, 1.0);
    for r in 0..=3u32 {
        let mut s = 0.0;
        for l in 0..=r {
            s += konhauser_y(l, q, ups, t).unwrap();
        }
        let target = hermite(r, z) * s;
        let mut prev = f64::INFINITY;
        for &pp in &[1e3, 1e4, 1e5] {
            let params = PolyParams::new(r, pp, q, ups);
            let v = pp.powf(-f64::from(r) / 2.0) * ik_dual(&params, z / pp.sqrt(), t).unwrap();
            let err = (v - target).abs() / target.abs().max(1e-300);
            assert!(err <= prev || err < 1e-12, "r={r}: {err} after {prev}");
            prev = err;
        }
        assert!(prev < 1e-3, "r={r} final error {prev}");
    }
}

#[test]
fn univariate_limit_to_hermite() {
    // p^{-n/2} I_n(t/sqrt(p)) -> H_n(t).
    for n in 0..=5u32 {
        for &t in &[0.4, 1.0, 2.0] {
            let h = hermite(n, t);
            let mut prev = f64::INFINITY;
            for &pp in &[1e3f64, 1e5] {
                let v = pp.powf(-f64::from(n) / 2.0) * finite_i(n, pp, t / pp.sqrt());
                let err = (v - h).abs() / h.abs().max(1.0);
                assert!(err < prev || err < 1e-10);
                prev = err;
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The three representations agree on random admissible inputs.
    #[test]
    fn representations_agree(
        n in 0u32..7,
        qsel in 0usize..3,
        ups in 1u32..4,
        z in -3.0f64..3.0,
        t in 0.0f64..4.0,
    ) {
        let q = [0.0, 0.5, 2.0][qsel];
        let params = PolyParams::new(n, 10.0, q, ups);
        let a = ik_poly(&params, z, t).unwrap();
        let b = ik_poly_via_z(&params, z, t).unwrap();
        let scale = a.abs().max(1.0);
        prop_assert!((a - b).abs() / scale < 1e-12, "{a} vs {b}");
        if z != 0.0 {
            let c = ik_poly_via_kdf(&params, z, t).unwrap();
            prop_assert!((a - c).abs() / scale < 1e-12, "{a} vs {c}");
        }
    }

    /// Modified family representations agree for positive γ.
    #[test]
    fn modified_representations_agree(
        n in 0u32..6,
        g in 0.3f64..3.0,
        c in 0.5f64..5.0,
        z in 0.2f64..2.5,
        t in 0.0f64..3.0,
    ) {
        let params = PolyParams::new(n, 9.0, 0.5, 2).with_mod(g, c);
        let a = ik_mod(&params, z, t).unwrap();
        let b = ik_mod_via_kdf(&params, z, t).unwrap();
        let scale = a.abs().max(1e-6);
        prop_assert!((a - b).abs() / scale < 1e-12, "{a} vs {b}");
    }

    /// Konhauser Z at υ=1 equals the Laguerre recurrence for random γ, t.
    /// (The tight 1e-12 contract on the γ ∈ {0, 0.5, 2} grid is asserted by
    /// the Zdef.laguerre check; general fractional γ goes through the
    /// Lanczos Γ, whose ~1e-14 error the alternating sum amplifies.)
    #[test]
    fn z_matches_laguerre(g in -0.9f64..3.0, t in 0.0f64..6.0) {
        let mut l0 = 1.0;
        let mut l1 = 1.0 + g - t;
        for n in 0..=8u32 {
            let oracle = if n == 0 { l0 } else { l1 };
            let v = konhauser_z(n, g, 1, t).unwrap();
            prop_assert!((v - oracle).abs() <= 1e-10 * oracle.abs().max(1.0));
            if n >= 1 {
                let k = f64::from(n);
                let l2 = ((2.0 * k + 1.0 + g - t) * l1 - (k + g) * l0) / (k + 1.0);
                l0 = l1;
                l1 = l2;
            }
        }
    }
}
