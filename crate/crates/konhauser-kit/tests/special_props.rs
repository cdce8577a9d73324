//! Kernel-level properties: Pochhammer algebra, the duplication identity,
//! Gamma consistency, and exact rational-arithmetic oracles for terminating
//! hypergeometric sums.

use konhauser_kit::gamma::{gamma_reciprocal, log_gamma_signed, pochhammer};
use konhauser_kit::hyper::{hyp_pfq, SeriesPolicy};
use konhauser_kit::num::SignedLog;
use num::{BigInt, BigRational, ToPrimitive};
use proptest::prelude::*;

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Terminating pFq summed exactly in rational arithmetic.
fn pfq_rational(upper: &[BigRational], lower: &[BigRational], x: &BigRational, lmax: u32) -> BigRational {
    let mut term = BigRational::from_integer(BigInt::from(1));
    let mut sum = term.clone();
    for l in 0..lmax {
        let lf = BigRational::from_integer(BigInt::from(l));
        let mut factor = x.clone();
        for a in upper {
            factor *= a + &lf;
        }
        for b in lower {
            factor /= b + &lf;
        }
        factor /= BigRational::from_integer(BigInt::from(l + 1));
        term *= factor;
        sum += &term;
    }
    sum
}

#[test]
fn terminating_pfq_matches_rational_oracle() {
    let policy = SeriesPolicy::default();
    // Parameter grid with n <= 10; everything rational so the oracle is exact.
    for n in 1..=10u32 {
        for (ups, lows, x, xr) in [
            (
                vec![rational(-(n as i64), 1), rational(1, 2), rational(3, 2)],
                vec![rational(5, 2), rational(2, 1)],
                1.0 / 3.0,
                rational(1, 3),
            ),
            (
                vec![rational(-(n as i64), 1), rational(1, 1), rational(1, 1)],
                vec![rational(2, 1), rational(2, 1)],
                1.0,
                rational(1, 1),
            ),
            (
                vec![rational(-(n as i64), 1), rational(3, 4)],
                vec![rational(7, 4)],
                -2.0,
                rational(-2, 1),
            ),
        ] {
            let upper_f: Vec<f64> = ups.iter().map(|r| r.to_f64().unwrap()).collect();
            let lower_f: Vec<f64> = lows.iter().map(|r| r.to_f64().unwrap()).collect();
            let v = hyp_pfq(&upper_f, &lower_f, x, &policy).unwrap();
            let oracle = pfq_rational(&ups, &lows, &xr, n).to_f64().unwrap();
            assert!(
                (v - oracle).abs() <= 1e-14 * oracle.abs().max(1.0),
                "n={n}: {v} vs {oracle}"
            );
        }
    }
}

#[test]
fn spec_3f2_value_from_oracle() {
    // 3F2(-2, 1, 1; 2, 2; 1) by the rational three-term sum: 1 - 1/2 + 1/9.
    let oracle = pfq_rational(
        &[rational(-2, 1), rational(1, 1), rational(1, 1)],
        &[rational(2, 1), rational(2, 1)],
        &rational(1, 1),
        2,
    );
    assert_eq!(oracle, rational(11, 18));
    let policy = SeriesPolicy::default();
    let v = hyp_pfq(&[-2.0, 1.0, 1.0], &[2.0, 2.0], 1.0, &policy).unwrap();
    assert!((v - 11.0 / 18.0).abs() < 1e-14);
}

/// Terminating four-parameter bivariate series summed in rational
/// arithmetic, for integer q where Γ(q + υm) is a factorial.
fn ml4_rational(n: i64, p: i64, q: u32, ups: u32, z: &BigRational, t: &BigRational) -> BigRational {
    let mut sum = BigRational::from_integer(BigInt::from(0));
    let poch = |a: i64, k: u32| -> BigRational {
        let mut acc = BigRational::from_integer(BigInt::from(1));
        for j in 0..k as i64 {
            acc *= BigRational::from_integer(BigInt::from(a + j));
        }
        acc
    };
    let fact = |k: u32| -> BigRational {
        let mut acc = BigInt::from(1);
        for j in 1..=k {
            acc *= BigInt::from(j);
        }
        BigRational::from_integer(acc)
    };
    for l in 0..=(n as u32) {
        for m in 0..=(n as u32 - l) {
            let mut term = poch(-n, 2 * l) * poch(-n + l as i64, m) * poch(-n, l);
            if l % 2 == 1 {
                term = -term;
            }
            // denominators (γ3)_l (γ4)_l with γ3 = -n, γ4 = p - n
            let d3 = poch(-n, l);
            let d4 = poch(p - n, l);
            if d3 == BigRational::from_integer(BigInt::from(0)) {
                continue;
            }
            term /= d3.clone() * d4;
            // the numerator carried (γ2)_{l+m} = (-n)_{l+m} = (-n)_l (-n+l)_m; fix:
            // above we multiplied poch(-n, 2l) [γ1], poch(-n+l, m) and poch(-n, l)
            // which together give (γ1)_{2l} (γ2)_{l+m}; the extra /d3 cancels it.
            let gq = fact(q + ups * m - 1);
            term *= z.pow(l as i32) * t.pow((ups * m) as i32);
            term /= gq * fact(l) * fact(m);
            sum += term;
        }
    }
    sum
}

#[test]
fn terminating_ml4_matches_rational_oracle() {
    use konhauser_kit::ml::{ml4, Ml4Params};
    let policy = SeriesPolicy::default();
    for n in 0..=5i64 {
        for (q, ups) in [(1u32, 1u32), (2, 2)] {
            let p = 9i64;
            let params = Ml4Params {
                g1: -(n as f64),
                g2: -(n as f64),
                g3: -(n as f64),
                g4: (p - n) as f64,
                q: f64::from(q),
                upsilon: ups,
            };
            for (zf, zr, tf, tr) in [
                (0.5, rational(1, 2), 2.0, rational(2, 1)),
                (-0.25, rational(-1, 4), 1.0, rational(1, 1)),
            ] {
                let v = ml4(&params, zf, tf, &policy).unwrap();
                let oracle = ml4_rational(n, p, q, ups, &zr, &tr).to_f64().unwrap();
                assert!(
                    (v - oracle).abs() <= 1e-14 * oracle.abs().max(1.0),
                    "n={n} q={q} ups={ups} z={zf} t={tf}: {v} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn duplication_identity() {
    // (1+γ)_{υr} = υ^{υr} Π_{j=0}^{υ-1} ((γ+1+j)/υ)_r
    for &g in &[-0.5, 0.0, 2.0] {
        for ups in [1u32, 2, 3] {
            for r in 0..=8u32 {
                let lhs = pochhammer(1.0 + g, ups * r).to_real();
                let mut rhs = f64::from(ups).powi((ups * r) as i32);
                for j in 0..ups {
                    rhs *= pochhammer((g + 1.0 + f64::from(j)) / f64::from(ups), r).to_real();
                }
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0),
                    "g={g} ups={ups} r={r}: {lhs} vs {rhs}"
                );
            }
        }
    }
}

#[test]
fn gamma_reciprocal_consistency() {
    for &x in &[0.1, 0.5, 1.0, 2.5, 7.3, 15.0, 34.7, -0.5, -5.5, 101.25] {
        let p = gamma_reciprocal(x) * log_gamma_signed(x).unwrap().to_real();
        assert!((p - 1.0).abs() < 1e-13, "x={x}: {p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// (a)_k = (a)_j (a+j)_{k-j} in the signed log domain.
    #[test]
    fn pochhammer_splits(af in -20.0f64..20.0, k in 0u32..30, j_frac in 0.0f64..1.0) {
        let j = (j_frac * f64::from(k)) as u32;
        let whole = pochhammer(af, k);
        let split = pochhammer(af, j).mul(pochhammer(af + f64::from(j), k - j));
        if whole.is_zero() {
            // A zero factor must appear in one of the two parts.
            prop_assert!(split.is_zero());
        } else {
            let (a, b) = (whole.to_real(), split.to_real());
            prop_assert!((a - b).abs() <= 1e-13 * a.abs().max(1e-300), "{a} vs {b}");
        }
    }

    /// Round trip through the signed log scalar within its conditioning.
    #[test]
    fn signed_log_round_trip(m in 1.0f64..10.0, e in -300i32..300) {
        let x = m * 10.0f64.powi(e);
        let r = SignedLog::from_real(x).to_real();
        let bound = 1e-15 * f64::max(1.0, x.abs().ln().abs());
        prop_assert!((r - x).abs() <= bound * x.abs());
    }

    /// Scaled product scalar: exactness of products against plain f64 where
    /// plain f64 does not overflow.
    #[test]
    fn scaled_f64_matches_plain(xs in prop::collection::vec(-10.0f64..10.0, 1..12)) {
        use konhauser_kit::num::ScaledF64;
        let mut plain = 1.0f64;
        let mut scaled = ScaledF64::ONE;
        for &x in &xs {
            plain *= x;
            scaled = scaled.mul_f64(x);
        }
        let s = scaled.to_f64();
        prop_assert!((s - plain).abs() <= 4.0 * f64::EPSILON * plain.abs().max(f64::MIN_POSITIVE), "{s} vs {plain}");
    }
}
