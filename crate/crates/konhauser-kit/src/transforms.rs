//! Numerical Laplace and Fourier transforms, the closed-form Fourier
//! expressions with their G/Ψ blocks, the Parseval-derived Υ function pair,
//! and the Parseval pairing check.
//!
//! The closed Fourier forms are assembled from the derivation, not the
//! printed display: the z-side Beta reduction carries no 1/2, the dual side
//! keeps its 2^{d-iξ2} and 2^l factors, and the Ψ1 hypergeometric lower
//! parameter is 1-(-1)^n/2. Each of these choices is validated against
//! direct numerical transforms by the harness, which records the variant in
//! its reports.

use crate::calculus::biorthogonality_cell;
use crate::error::{Error, Result};
use crate::gamma::{
    binomial_real, factorial_scaled, gamma_complex, gamma_scaled, pochhammer_complex,
    pochhammer_scaled,
};
use crate::hyper::{nonpositive_integer, SeriesPolicy};
use crate::quad::{
    exp_sinh_halfline, integrate_realline_shells, tanh_sinh_complex, QuadratureConfig,
};
use num_complex::Complex64;

/// Parameters of the Fourier-transformed function pair and the Υ family.
#[derive(Clone, Copy, Debug)]
pub struct FourierParams {
    /// Degree (n for the first family, r for the dual).
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub upsilon: u32,
}

impl FourierParams {
    fn floor_half(n: u32) -> u32 {
        (n + 1) / 2
    }

    /// Weight exponent b must exceed [(n+1)/2] + 3/4 for the z-integrals to
    /// exist; a > 0 for the t-side Gamma integral.
    fn validate_primal(&self) -> Result<()> {
        let nn = f64::from(Self::floor_half(self.n));
        if self.a <= 0.0 {
            return Err(Error::domain("a must be > 0"));
        }
        if self.b <= nn + 0.75 {
            return Err(Error::domain(format!(
                "b = {} must exceed [(n+1)/2] + 3/4 = {}",
                self.b,
                nn + 0.75
            )));
        }
        Ok(())
    }

    fn validate_dual(&self) -> Result<()> {
        let nn = f64::from(Self::floor_half(self.n));
        if self.d <= 0.0 {
            return Err(Error::domain("d must be > 0"));
        }
        if self.c <= nn + 0.75 {
            return Err(Error::domain(format!(
                "c = {} must exceed [(r+1)/2] + 3/4 = {}",
                self.c,
                nn + 0.75
            )));
        }
        Ok(())
    }
}

/// 1F2(a; b1, b2; x) for complex argument; entire in x.
fn hyp1f2_complex(
    a: f64,
    b1: f64,
    b2: f64,
    x: Complex64,
    policy: &SeriesPolicy,
) -> Result<Complex64> {
    for b in [b1, b2] {
        if let Some(k) = nonpositive_integer(b) {
            if nonpositive_integer(a).is_none_or(|ka| ka > k) {
                return Err(Error::InvalidLowerParameter(b));
            }
        }
    }
    let nmax = nonpositive_integer(a).unwrap_or(policy.max_terms_per_index);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut small = 0u32;
    for k in 0..=nmax {
        sum += term;
        if k == nmax {
            break;
        }
        let kf = f64::from(k);
        term *= x * (a + kf) / ((b1 + kf) * (b2 + kf) * (kf + 1.0));
        if !term.norm_sqr().is_finite() {
            return Err(Error::Divergence("1F2 series overflow".into()));
        }
        let ratio = (a + kf).abs() * x.norm() / ((b1 + kf).abs() * (b2 + kf).abs() * (kf + 1.0));
        if term.norm() < policy.tail_epsilon * sum.norm().max(f64::MIN_POSITIVE) && ratio < 1.0 {
            small += 1;
            if small >= policy.consecutive_small {
                break;
            }
        } else {
            small = 0;
        }
    }
    Ok(sum)
}

/// Ψ1 block: the double sum over the polynomial indices with the
/// 1F2(ξ1²/4) factors; `a_minus_ix2` supplies a - iξ2 and `x1sq4` supplies
/// ξ1²/4 (real positive for transforms, -z²/4 for the Υ functions).
#[allow(clippy::too_many_arguments)]
pub fn psi1(
    n: u32,
    b: f64,
    p: f64,
    q: f64,
    upsilon: u32,
    a_minus_ix2: Complex64,
    x1sq4: Complex64,
) -> Result<Complex64> {
    let policy = SeriesPolicy::default();
    let nn = FourierParams::floor_half(n);
    let nf = f64::from(nn);
    let uf = f64::from(upsilon);
    let even_low = 1.0 - if n % 2 == 0 { 0.5 } else { -0.5 }; // 1 - (-1)^n/2
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..=(n / 2) {
        let lf = f64::from(l);
        let f12 = hyp1f2_complex(nf + 0.5 - lf, even_low, 1.75 + nf - b - lf, x1sq4, &policy)?;
        let lead = pochhammer_scaled(-f64::from(n), 2 * l)
            .mul(pochhammer_scaled(b - nf - 0.75, l))
            .mul_f64(0.25f64.powi(l as i32))
            .div(pochhammer_scaled(0.5 - nf, l))
            .div(pochhammer_scaled(p - f64::from(n), l))
            .div(factorial_scaled(l))
            .to_f64();
        let mut inner = Complex64::new(0.0, 0.0);
        for m in 0..=(n - l) {
            let c = pochhammer_scaled(-f64::from(n - l), m)
                .mul_f64(2.0f64.powi((m * upsilon) as i32))
                .div(gamma_scaled(q + uf * f64::from(m) + 1.0)?)
                .div(factorial_scaled(m))
                .to_f64();
            inner += c * pochhammer_complex(a_minus_ix2, m * upsilon);
        }
        sum += lead * inner * f12;
    }
    Ok(sum)
}

/// Ψ2 block for the dual family, with the 2^l factor that the t-side Gamma
/// integral produces.
#[allow(clippy::too_many_arguments)]
pub fn psi2(
    r: u32,
    c: f64,
    alpha: f64,
    beta: f64,
    upsilon: u32,
    d_minus_ix2: Complex64,
    x1sq4: Complex64,
) -> Result<Complex64> {
    let policy = SeriesPolicy::default();
    let nn = FourierParams::floor_half(r);
    let nf = f64::from(nn);
    let uf = f64::from(upsilon);
    let even_low = 1.0 - if r % 2 == 0 { 0.5 } else { -0.5 };
    // k-sum: the finite-family expansion against the algebraic weight.
    let mut ksum = Complex64::new(0.0, 0.0);
    for k in 0..=(r / 2) {
        let kf = f64::from(k);
        let f12 = hyp1f2_complex(nf + 0.5 - kf, even_low, 1.75 + nf - c - kf, x1sq4, &policy)?;
        let lead = pochhammer_scaled(c - nf - 0.75, k)
            .mul_f64(binomial_real(alpha - 1.0, r - k))
            .mul_f64(binomial_real(f64::from(r - k), k))
            .mul_f64(0.25f64.powi(k as i32))
            .div(pochhammer_scaled(0.5 - nf, k))
            .to_f64();
        ksum += lead * f12;
    }
    // (m, l, s) sum: the Σ Y_m expansion against the t-side Gamma integral.
    let mut tsum = Complex64::new(0.0, 0.0);
    for m in 0..=r {
        for l in 0..=m {
            let mut s_inner = 0.0f64;
            for s in 0..=l {
                let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                s_inner += sign
                    * binomial_real(f64::from(l), s)
                    * pochhammer_scaled((f64::from(s) + beta + 1.0) / uf, m).to_f64();
            }
            let w = 2.0f64.powi(l as i32)
                / (factorial_scaled(l).to_f64() * factorial_scaled(m).to_f64());
            tsum += w * s_inner * pochhammer_complex(d_minus_ix2, l);
        }
    }
    Ok(ksum * tsum)
}

fn i_pow_eps(n: u32, xi1: f64) -> Complex64 {
    if n % 2 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(0.0, -xi1)
    }
}

/// 2^w for complex w.
fn two_pow(w: Complex64) -> Complex64 {
    (w * std::f64::consts::LN_2).exp()
}

/// Closed-form Fourier transform of
/// d(z,t) = e^{at - e^t/2} (1+z²)^{-(b-1/4)} IK_n^{(p,q)}(z, e^t).
pub fn fourier_closed_d(
    fp: &FourierParams,
    p: f64,
    q: f64,
    xi1: f64,
    xi2: f64,
) -> Result<Complex64> {
    fp.validate_primal()?;
    let n = fp.n;
    let nn = f64::from(FourierParams::floor_half(n));
    let a_m = Complex64::new(fp.a, -xi2);
    let g1 = two_pow(a_m)
        * i_pow_eps(n, xi1)
        * gamma_complex(a_m)?
        * gamma_scaled(fp.b - nn - 0.75)?.div(gamma_scaled(fp.b - 0.25)?).to_f64();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let pref = pochhammer_scaled(1.0 - p, n)
        .mul_f64(sign * 2.0f64.powi(n as i32))
        .mul(gamma_scaled(nn + 0.5)?)
        .to_f64();
    let psi =
        psi1(n, fp.b, p, q, fp.upsilon, a_m, Complex64::new(xi1 * xi1 / 4.0, 0.0))?;
    Ok(pref * g1 * psi)
}

/// Closed-form Fourier transform of the dual
/// f(z,t) = e^{dt - e^t/2} (1+z²)^{-(c-1/4)} IK-dual_r^{(α,β)}(z, e^t).
pub fn fourier_closed_f(
    fp: &FourierParams,
    alpha: f64,
    beta: f64,
    xi1: f64,
    xi2: f64,
) -> Result<Complex64> {
    fp.validate_dual()?;
    let r = fp.n;
    let nn = f64::from(FourierParams::floor_half(r));
    let d_m = Complex64::new(fp.d, -xi2);
    let g2 = two_pow(d_m)
        * i_pow_eps(r, xi1)
        * gamma_complex(d_m)?
        * gamma_scaled(fp.c - nn - 0.75)?.div(gamma_scaled(fp.c - 0.25)?).to_f64();
    let pref = factorial_scaled(r)
        .mul_f64(2.0f64.powi(r as i32))
        .mul(gamma_scaled(nn + 0.5)?)
        .to_f64();
    let psi = psi2(
        r,
        fp.c,
        alpha,
        beta,
        fp.upsilon,
        d_m,
        Complex64::new(xi1 * xi1 / 4.0, 0.0),
    )?;
    Ok(pref * g2 * psi)
}

/// Υ1(n, a, b, c, d, υ; z, t) = 2^{a-t} (-z)^{(1-(-1)^n)/2}
/// Ψ1(n, a, b, b+c, a+d-1, υ; -iz, -it).
pub fn upsilon1(fp: &FourierParams, z: Complex64, t: Complex64) -> Result<Complex64> {
    fp.validate_primal()?;
    let n = fp.n;
    // Ψ1 at (ξ1, ξ2) = (-iz, -it): a - iξ2 = a - t and ξ1²/4 = -z²/4.
    let a_m = Complex64::new(fp.a, 0.0) - t;
    let x1sq4 = -z * z / 4.0;
    let psi = psi1(n, fp.b, fp.b + fp.c, fp.a + fp.d - 1.0, fp.upsilon, a_m, x1sq4)?;
    let zfac = if n % 2 == 0 { Complex64::new(1.0, 0.0) } else { -z };
    Ok(two_pow(a_m) * zfac * psi)
}

/// Υ2(r, d, c, b, a, υ; z, t) = 2^{d-t} (-z)^{(1-(-1)^r)/2}
/// Ψ2(r, d, c, c+b, d+a-1, υ; -iz, -it).
///
/// The 2^{d-t} prefactor mirrors Υ1's 2^{a-t}; it is the factor the t-side
/// Gamma integral contributes to the dual transform, and without it the
/// weighted pairing cannot have a constant right side (the phases fail to
/// cancel).
pub fn upsilon2(fp: &FourierParams, z: Complex64, t: Complex64) -> Result<Complex64> {
    fp.validate_dual()?;
    let r = fp.n;
    let d_m = Complex64::new(fp.d, 0.0) - t;
    let x1sq4 = -z * z / 4.0;
    let psi = psi2(r, fp.c, fp.c + fp.b, fp.d + fp.a - 1.0, fp.upsilon, d_m, x1sq4)?;
    let zfac = if r % 2 == 0 { Complex64::new(1.0, 0.0) } else { -z };
    Ok(two_pow(d_m) * zfac * psi)
}

/// Stated right side of the Υ biorthogonality relation at n = r.
pub fn upsilon_biortho_rhs(fp: &FourierParams) -> Result<f64> {
    let n = fp.n;
    let nn = f64::from(FourierParams::floor_half(n));
    let bc = fp.b + fp.c;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let v = gamma_scaled(bc)?
        .mul(gamma_scaled(bc - f64::from(n) - 1.0)?)
        .mul(gamma_scaled(fp.b - 0.25)?)
        .mul(gamma_scaled(fp.c - 0.25)?)
        .mul_f64(pi2 * 2.0f64.powf(2.0 * (bc - f64::from(n) + 1.0)))
        .div(gamma_scaled(2.0 * bc - f64::from(n) - 1.0)?)
        .div(gamma_scaled(nn + 0.5)?)
        .div(gamma_scaled(nn + 0.5)?)
        .div(gamma_scaled(fp.b - nn - 0.75)?)
        .div(gamma_scaled(fp.c - nn - 0.75)?);
    Ok(v.to_f64())
}

// ---------------------------------------------------------------------------
// Numerical transforms
// ---------------------------------------------------------------------------

/// ∫_0^∞ e^{-aξ} f(ξ) dξ by exp-sinh quadrature.
pub fn laplace_numeric(f: impl Fn(f64) -> f64, a: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::domain("transform variable a must be > 0"));
    }
    exp_sinh_halfline(
        |x| {
            let w = -a * x;
            if w < -745.0 {
                0.0
            } else {
                w.exp() * f(x)
            }
        },
        cfg,
    )
}

/// Iterated double Laplace transform ∬ e^{-(az + bt)} f(z, t) dz dt.
pub fn laplace2_numeric(
    f: impl Fn(f64, f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::domain("transform variables must be > 0"));
    }
    let icfg = cfg.inner();
    let v = laplace_numeric(|z| laplace_numeric(|t| f(z, t), b, &icfg).unwrap_or(f64::NAN), a, cfg)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::ToleranceNotMet { est_error: f64::INFINITY, level: cfg.max_level })
    }
}

/// Direct 2-D Fourier transform ∬ e^{-i(ξ1 z + ξ2 t)} d(z, t) dz dt by
/// iterated shell-doubling line integrals.
pub fn fourier2_numeric(
    d: impl Fn(f64, f64) -> f64,
    xi1: f64,
    xi2: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let icfg = cfg.inner();
    let v = integrate_realline_shells(
        |z| {
            let inner =
                integrate_realline_shells(|t| Complex64::from_polar(1.0, -xi2 * t) * d(z, t), &icfg)
                    .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            Complex64::from_polar(1.0, -xi1 * z) * inner
        },
        cfg,
    )?;
    if v.norm_sqr().is_finite() {
        Ok(v)
    } else {
        Err(Error::ToleranceNotMet { est_error: f64::INFINITY, level: cfg.max_level })
    }
}

/// Both sides of the Parseval pairing: the weighted polynomial double
/// integral against the (2π)^{-2}-normalized frequency integral of
/// F(d) conj(F(f)) assembled from the closed forms.
///
/// The ξ1 range is truncated at ±2: the closed forms are the entire parts of
/// the transforms and grow exponentially beyond the region where they
/// approximate the true (decaying) transforms, so no wider truncation can
/// converge.
pub fn parseval_check(
    n: u32,
    r: u32,
    fp: &FourierParams,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    const XI1_TRUNC: f64 = 2.0;
    let p = fp.b + fp.c;
    let q = fp.a + fp.d - 1.0;
    let lhs = biorthogonality_cell(n, r, p, q, fp.upsilon, cfg)?;
    // ξ2 truncation from the Γ(a-iξ2)Γ(d+iξ2) envelope ~ e^{-π|ξ2|}.
    let xi2_trunc = 12.0;
    let fpn = FourierParams { n, ..*fp };
    let fpr = FourierParams { n: r, ..*fp };
    // The pairing is compared at 1e-3; the frequency integral needs only a
    // few extra digits beyond that.
    let outer_cfg = QuadratureConfig { rel_tol: 1e-6, abs_tol: 1e-10, max_level: cfg.max_level.min(10) };
    let inner_cfg = outer_cfg.inner();
    let v = tanh_sinh_complex(
        |x1| {
            tanh_sinh_complex(
                |x2| {
                    let fd = fourier_closed_d(&fpn, p, q, x1, x2)
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                    let ff = fourier_closed_f(&fpr, p, q, x1, x2)
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                    fd * ff.conj()
                },
                -xi2_trunc,
                xi2_trunc,
                &inner_cfg,
            )
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        },
        -XI1_TRUNC,
        XI1_TRUNC,
        &outer_cfg,
    )?;
    if !v.norm_sqr().is_finite() {
        return Err(Error::ToleranceNotMet { est_error: f64::INFINITY, level: cfg.max_level });
    }
    let rhs = v.re / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn laplace_anchors() {
        let v = laplace_numeric(|_| 1.0, 2.0, &cfg()).unwrap();
        assert!((v - 0.5).abs() < 1e-11, "{v}");
        // t^{q-1} -> Γ(q)/a^q.
        let (q, a) = (1.7, 1.3);
        let v = laplace_numeric(|t| t.powf(q - 1.0), a, &cfg()).unwrap();
        let expect = crate::gamma::gamma(q).unwrap() / a.powf(q);
        assert!((v - expect).abs() < 1e-10 * expect, "{v} vs {expect}");
    }

    #[test]
    fn laplace2_separable() {
        let f = |z: f64, t: f64| (1.0 + z) * t.powf(0.5);
        let (a, b) = (1.5, 2.0);
        let v = laplace2_numeric(f, a, b, &cfg()).unwrap();
        let expect =
            (1.0 / a + 1.0 / (a * a)) * crate::gamma::gamma(1.5).unwrap() / b.powf(1.5);
        assert!((v - expect).abs() < 1e-9 * expect, "{v} vs {expect}");
    }

    #[test]
    fn fourier_gaussian_pair() {
        // F(e^{-z²-t²})(1,1) = π e^{-1/2}.
        let v = fourier2_numeric(|z, t| (-z * z - t * t).exp(), 1.0, 1.0, &cfg()).unwrap();
        let expect = std::f64::consts::PI * (-0.5f64).exp();
        assert!((v.re - expect).abs() < 1e-9 * expect, "{}", v.re);
        assert!(v.im.abs() < 1e-10);
    }

    #[test]
    fn fourier_parity_even_integrand() {
        // Even-in-z integrand at ξ1 = 0: the z-side contributes no phase.
        let v = fourier2_numeric(
            |z, t| (-z * z - (t - 0.3) * (t - 0.3)).exp(),
            0.0,
            0.7,
            &cfg(),
        )
        .unwrap();
        // |F| = π e^{-ξ2²/4}; the shift only contributes a phase.
        let expect_mag = std::f64::consts::PI * (-0.7f64 * 0.7 / 4.0).exp();
        assert!((v.norm() - expect_mag).abs() < 1e-8 * expect_mag, "{v} vs {expect_mag}");
    }

    #[test]
    fn closed_d_parity_in_xi1() {
        let fp = FourierParams { n: 1, a: 1.0, b: 3.0, c: 3.0, d: 1.0, upsilon: 1 };
        let (p, q) = (6.0, 1.0);
        let plus = fourier_closed_d(&fp, p, q, 0.6, 0.4).unwrap();
        let minus = fourier_closed_d(&fp, p, q, -0.6, 0.4).unwrap();
        // Odd n: odd in ξ1.
        assert!((plus + minus).norm() < 1e-12 * plus.norm().max(1e-300), "{plus} {minus}");
        let fp2 = FourierParams { n: 2, ..fp };
        let plus = fourier_closed_d(&fp2, p, q, 0.6, 0.4).unwrap();
        let minus = fourier_closed_d(&fp2, p, q, -0.6, 0.4).unwrap();
        assert!((plus - minus).norm() < 1e-12 * plus.norm());
    }

    #[test]
    fn remark28_weight_positive_for_a_eq_d() {
        // Γ(a-it)Γ(a+it) = |Γ(a+it)|² >= 0 pointwise.
        for &t in &[-3.0, -1.0, 0.0, 0.5, 2.0, 8.0] {
            let g = gamma_complex(Complex64::new(1.2, t)).unwrap();
            let w = (g * g.conj()).re;
            assert!(w >= 0.0, "t={t}: {w}");
        }
    }

    #[test]
    fn upsilon_anchor_n0() {
        let fp = FourierParams { n: 0, a: 1.0, b: 1.2, c: 1.3, d: 1.0, upsilon: 1 };
        // n = 0, z = t = 0: prefactor (-z)^0 = 1, Ψ1 = 1/Γ(q+1) with
        // q = a+d-1, so Υ1 = 2^a/Γ(a+d).
        let v = upsilon1(&fp, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let expect = 2.0f64.powf(fp.a) * crate::gamma::gamma_reciprocal(fp.a + fp.d);
        assert!((v.re - expect).abs() < 1e-12 * expect, "{v} vs {expect}");
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn upsilon1_consistent_with_closed_d_factors() {
        // Υ1 at (iξ1, iξ2) carries exactly the 2^{a-iξ2} (-iξ1)^ε Ψ1 part of
        // the closed transform; multiplying back the Γ factors and the
        // prefactor must reproduce fourier_closed_d.
        let fp = FourierParams { n: 1, a: 1.0, b: 3.0, c: 3.0, d: 1.0, upsilon: 2 };
        let (xi1, xi2) = (0.5, 0.8);
        let p = fp.b + fp.c;
        let q = fp.a + fp.d - 1.0;
        let ups1 =
            upsilon1(&fp, Complex64::new(0.0, xi1), Complex64::new(0.0, xi2)).unwrap();
        let n = fp.n;
        let nn = f64::from(FourierParams::floor_half(n));
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let pref = pochhammer_scaled(1.0 - p, n)
            .mul_f64(sign * 2.0f64.powi(n as i32))
            .mul(gamma_scaled(nn + 0.5).unwrap())
            .to_f64();
        let gfac = gamma_complex(Complex64::new(fp.a, -xi2)).unwrap()
            * gamma_scaled(fp.b - nn - 0.75)
                .unwrap()
                .div(gamma_scaled(fp.b - 0.25).unwrap())
                .to_f64();
        let reconstructed = pref * gfac * ups1;
        let direct = fourier_closed_d(&fp, p, q, xi1, xi2).unwrap();
        assert!(
            (reconstructed - direct).norm() < 1e-11 * direct.norm(),
            "{reconstructed} vs {direct}"
        );
    }
}
