//! Polynomial families: Konhauser Z/Y, the finite orthogonal family I_n^(p),
//! the finite bivariate I-Konhauser pair, its modified two-extra-parameter
//! version, Hermite, and the 2D Hermite-Konhauser pair targeted by the limit
//! relation.
//!
//! All terminating sums are assembled in the signed log domain and summed
//! with max-factoring + Kahan accumulation so that parameters as large as
//! p ~ 1e6 (used by the limit checks) stay finite.

use crate::error::{Error, Result};
use crate::gamma::{binomial_real, factorial_scaled, gamma_scaled, pochhammer_scaled};
use crate::hyper::{kampe_de_feriet, SeriesPolicy};
use crate::num::{sum_scaled, ScaledF64};

/// Degree cap for all finite families; they are only meaningful for small n
/// and this keeps conditioning certifiable.
pub const MAX_DEGREE: u32 = 30;

/// Parameter bundle for the bivariate polynomial families.
#[derive(Clone, Copy, Debug)]
pub struct PolyParams {
    /// Degree.
    pub n: u32,
    /// Finite-family parameter; orthogonality needs p > n + 1.
    pub p: f64,
    /// Konhauser parameter, q > -1.
    pub q: f64,
    /// Konhauser index, a positive integer.
    pub upsilon: u32,
    /// γ of the modified family (set together with `c_mod`).
    pub gamma_mod: Option<f64>,
    /// c of the modified family.
    pub c_mod: Option<f64>,
}

impl PolyParams {
    pub fn new(n: u32, p: f64, q: f64, upsilon: u32) -> Self {
        PolyParams { n, p, q, upsilon, gamma_mod: None, c_mod: None }
    }

    pub fn with_mod(mut self, gamma_mod: f64, c_mod: f64) -> Self {
        self.gamma_mod = Some(gamma_mod);
        self.c_mod = Some(c_mod);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n > MAX_DEGREE {
            return Err(Error::domain(format!("degree n = {} exceeds cap {MAX_DEGREE}", self.n)));
        }
        if self.q <= -1.0 {
            return Err(Error::domain(format!("q = {} must be > -1", self.q)));
        }
        if self.upsilon == 0 {
            return Err(Error::domain("upsilon must be a positive integer"));
        }
        Ok(())
    }

    /// Callers of biorthogonality-dependent identities must have p > n + 1.
    pub fn validate_finiteness(&self) -> Result<()> {
        self.validate()?;
        if self.p <= f64::from(self.n) + 1.0 {
            return Err(Error::domain(format!(
                "finiteness requires p > n + 1 (p = {}, n = {})",
                self.p, self.n
            )));
        }
        Ok(())
    }
}

fn check_konhauser_args(n: u32, gamma: f64, upsilon: u32, t: f64) -> Result<()> {
    if gamma <= -1.0 {
        return Err(Error::domain(format!("Konhauser parameter gamma = {gamma} must be > -1")));
    }
    if upsilon == 0 {
        return Err(Error::domain("upsilon must be a positive integer"));
    }
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0 (weight support is [0, inf))")));
    }
    if n > MAX_DEGREE {
        return Err(Error::domain(format!("degree n = {n} exceeds cap {MAX_DEGREE}")));
    }
    Ok(())
}

/// Konhauser polynomial Z_n^gamma(t; upsilon), polynomial in t^upsilon.
pub fn konhauser_z(n: u32, gamma: f64, upsilon: u32, t: f64) -> Result<f64> {
    check_konhauser_args(n, gamma, upsilon, t)?;
    let u = f64::from(upsilon);
    let lead = gamma_scaled(u * f64::from(n) + gamma + 1.0)?;
    let t_pow_u = ScaledF64::from_f64(t).powi(upsilon as i32);
    let mut terms = Vec::with_capacity(n as usize + 1);
    for j in 0..=n {
        let binom = binomial_real(f64::from(n), j) * if j % 2 == 0 { 1.0 } else { -1.0 };
        let tp = t_pow_u.powi(j as i32);
        let g = gamma_scaled(u * f64::from(j) + gamma + 1.0)?;
        terms.push(lead.mul_f64(binom).mul(tp).div(g));
    }
    Ok(sum_scaled(&terms).div(factorial_scaled(n)).to_f64())
}

/// Konhauser polynomial Y_n^gamma(t; upsilon), the dual of Z under the
/// weight t^gamma e^{-t}.
pub fn konhauser_y(n: u32, gamma: f64, upsilon: u32, t: f64) -> Result<f64> {
    check_konhauser_args(n, gamma, upsilon, t)?;
    let coeffs = konhauser_y_coeffs(n, gamma, upsilon);
    let mut terms = Vec::with_capacity(coeffs.len());
    let tl = ScaledF64::from_f64(t);
    for (i, c) in coeffs.iter().enumerate() {
        terms.push(c.mul(tl.powi(i as i32)));
    }
    Ok(sum_scaled(&terms).to_f64())
}

/// Coefficients of Y_n^gamma(t; upsilon) in powers of t (degree n).
pub(crate) fn konhauser_y_coeffs(n: u32, gamma: f64, upsilon: u32) -> Vec<ScaledF64> {
    let u = f64::from(upsilon);
    let nf = factorial_scaled(n);
    let mut out = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        // (1/n!) (1/i!) sum_j (-1)^j C(i,j) ((1+gamma+j)/u)_n
        let mut inner = Vec::with_capacity(i as usize + 1);
        for j in 0..=i {
            let b = binomial_real(f64::from(i), j) * if j % 2 == 0 { 1.0 } else { -1.0 };
            let poch = pochhammer_scaled((1.0 + gamma + f64::from(j)) / u, n);
            inner.push(poch.mul_f64(b));
        }
        out.push(sum_scaled(&inner).div(nf).div(factorial_scaled(i)));
    }
    out
}

/// Finite orthogonal polynomial I_n^(p)(t), orthogonal on the real line with
/// weight (1+t^2)^{-(p-1/2)} for degrees n < p - 1.
pub fn finite_i(n: u32, p: f64, t: f64) -> f64 {
    let mut terms = Vec::with_capacity(n as usize / 2 + 1);
    let two_t = ScaledF64::from_f64(2.0 * t);
    for l in 0..=(n / 2) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let b1 = binomial_real(p - 1.0, n - l);
        let b2 = binomial_real(f64::from(n - l), l);
        terms.push(two_t.powi((n - 2 * l) as i32).mul_f64(sign * b1).mul_f64(b2));
    }
    sum_scaled(&terms).mul(factorial_scaled(n)).to_f64()
}

/// Physicists' Hermite polynomial via the three-term recurrence
/// H_{n+1} = 2 t H_n - 2 n H_{n-1}.
pub fn hermite(n: u32, t: f64) -> f64 {
    let mut h0 = 1.0;
    if n == 0 {
        return h0;
    }
    let mut h1 = 2.0 * t;
    for k in 1..n {
        let h2 = 2.0 * t * h1 - 2.0 * f64::from(k) * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Prefactor (1-p)_n / (-1)^n = (p-n)_n shared by the I-Konhauser forms.
fn ik_prefactor(n: u32, p: f64) -> ScaledF64 {
    let s = pochhammer_scaled(1.0 - p, n);
    if n % 2 == 0 {
        s
    } else {
        s.neg()
    }
}

/// Finite bivariate I-Konhauser polynomial, direct terminating double sum.
pub fn ik_poly(params: &PolyParams, z: f64, t: f64) -> Result<f64> {
    params.validate()?;
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    let (n, p, q, ups) = (params.n, params.p, params.q, params.upsilon);
    let u = f64::from(ups);
    let two_z = ScaledF64::from_f64(2.0 * z);
    let t_pow_u = ScaledF64::from_f64(t).powi(ups as i32);
    let mut terms = Vec::new();
    for l in 0..=(n / 2) {
        let pn_l = pochhammer_scaled(p - f64::from(n), l);
        if pn_l.is_zero() {
            return Err(Error::DivisionByZeroParameter(p - f64::from(n)));
        }
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let lead = pochhammer_scaled(-f64::from(n), 2 * l)
            .mul_f64(sign)
            .mul(two_z.powi((n - 2 * l) as i32))
            .div(pn_l)
            .div(factorial_scaled(l));
        for m in 0..=(n - l) {
            let g = gamma_scaled(u * f64::from(m) + q + 1.0)?;
            let term = lead
                .mul(pochhammer_scaled(-f64::from(n - l), m))
                .mul(t_pow_u.powi(m as i32))
                .div(g)
                .div(factorial_scaled(m));
            terms.push(term);
        }
    }
    Ok(sum_scaled(&terms).mul(ik_prefactor(n, p)).to_f64())
}

/// I-Konhauser polynomial through its Konhauser-Z expansion; must agree with
/// [`ik_poly`].
pub fn ik_poly_via_z(params: &PolyParams, z: f64, t: f64) -> Result<f64> {
    params.validate()?;
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    let (n, p, q, ups) = (params.n, params.p, params.q, params.upsilon);
    let u = f64::from(ups);
    let two_z = ScaledF64::from_f64(2.0 * z);
    let mut terms = Vec::new();
    for l in 0..=(n / 2) {
        let pn_l = pochhammer_scaled(p - f64::from(n), l);
        if pn_l.is_zero() {
            return Err(Error::DivisionByZeroParameter(p - f64::from(n)));
        }
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let zval = ScaledF64::from_f64(konhauser_z(n - l, q, ups, t)?);
        let g = gamma_scaled(u * f64::from(n - l) + q + 1.0)?;
        let term = pochhammer_scaled(-f64::from(n), 2 * l)
            .mul_f64(sign)
            .mul(factorial_scaled(n - l))
            .mul(two_z.powi((n - 2 * l) as i32))
            .mul(zval)
            .div(pn_l)
            .div(g)
            .div(factorial_scaled(l));
        terms.push(term);
    }
    Ok(sum_scaled(&terms).mul(ik_prefactor(n, p)).to_f64())
}

/// I-Konhauser polynomial through its Kampé de Fériet representation
/// F^{1,0,2}_{0,υ,2}; requires z != 0 because the series argument is -1/z².
pub fn ik_poly_via_kdf(params: &PolyParams, z: f64, t: f64) -> Result<f64> {
    params.validate()?;
    if z == 0.0 {
        return Err(Error::domain("Kampé de Fériet representation needs z != 0"));
    }
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    let (n, p, q, ups) = (params.n, params.p, params.q, params.upsilon);
    let nf = f64::from(n);
    let u = f64::from(ups);
    let policy = SeriesPolicy::default();
    let a = [-nf];
    let c = [-nf / 2.0, (-nf + 1.0) / 2.0];
    let e: Vec<f64> = (0..ups).map(|j| (q + 1.0 + f64::from(j)) / u).collect();
    let g = [-nf, p - nf];
    let x = -1.0 / (z * z);
    let y = (t / u).powi(ups as i32);
    let f = kampe_de_feriet(&a, &[], &c, &[], &e, &g, x, y, &policy)?;
    // (1-p)_n (-2z)^n / Γ(q+1)
    let pref = pochhammer_scaled(1.0 - p, n)
        .mul(ScaledF64::from_f64(-2.0 * z).powi(n as i32))
        .div(gamma_scaled(q + 1.0)?);
    Ok(pref.mul_f64(f).to_f64())
}

/// The dual polynomial of the biorthogonal pair:
/// I_n^(p)(z) Σ_{j=0}^n Y_j^(q)(t; υ).
pub fn ik_dual(params: &PolyParams, z: f64, t: f64) -> Result<f64> {
    params.validate()?;
    let mut s = 0.0;
    for j in 0..=params.n {
        s += konhauser_y(j, params.q, params.upsilon, t)?;
    }
    Ok(finite_i(params.n, params.p, z) * s)
}

/// True when the modified parameters are the Remark-32 sentinel γ = 0,
/// c = p + 1, which reduces the modified family to the plain one over Γ(p+1).
fn is_mod_sentinel(params: &PolyParams, gamma_mod: f64, c_mod: f64) -> bool {
    gamma_mod == 0.0 && c_mod == params.p + 1.0
}

fn mod_params(params: &PolyParams) -> Result<(f64, f64)> {
    match (params.gamma_mod, params.c_mod) {
        (Some(g), Some(c)) => Ok((g, c)),
        _ => Err(Error::domain("modified family requires gamma_mod and c_mod")),
    }
}

/// Modified finite bivariate I-Konhauser polynomial with the two extra
/// parameters (γ, c).
///
/// The sentinel (γ = 0, c = p + 1) is evaluated through the reduced formula
/// ik_poly / Γ(p+1); other γ values whose live Pochhammer (γ)_l vanishes are
/// rejected.
pub fn ik_mod(params: &PolyParams, z: f64, t: f64) -> Result<f64> {
    params.validate()?;
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    let (gamma_mod, c_mod) = mod_params(params)?;
    if is_mod_sentinel(params, gamma_mod, c_mod) {
        let v = ik_poly(params, z, t)?;
        return Ok(ScaledF64::from_f64(v).div(gamma_scaled(params.p + 1.0)?).to_f64());
    }
    let (n, p, q, ups) = (params.n, params.p, params.q, params.upsilon);
    let u = f64::from(ups);
    let two_z = ScaledF64::from_f64(2.0 * z);
    let t_pow_u = ScaledF64::from_f64(t).powi(ups as i32);
    let mut terms = Vec::new();
    for l in 0..=(n / 2) {
        let gam_l = pochhammer_scaled(gamma_mod, l);
        if gam_l.is_zero() {
            return Err(Error::DivisionByZeroParameter(gamma_mod));
        }
        let pn_l = pochhammer_scaled(p - f64::from(n), l);
        if pn_l.is_zero() {
            return Err(Error::DivisionByZeroParameter(p - f64::from(n)));
        }
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        // (-2z)^n (1/(4z^2))^l combines with (-1)^n of the prefactor below to
        // (2z)^{n-2l}, which keeps z = 0 evaluable.
        let lead = pochhammer_scaled(-f64::from(n), 2 * l)
            .mul_f64(sign)
            .mul(pochhammer_scaled(c_mod, l))
            .mul(two_z.powi((n - 2 * l) as i32))
            .div(pn_l)
            .div(gam_l)
            .div(gamma_scaled(p + 1.0 + f64::from(l))?)
            .div(factorial_scaled(l));
        for m in 0..=(n - l) {
            let g = gamma_scaled(u * f64::from(m) + q + 1.0)?;
            terms.push(
                lead.mul(pochhammer_scaled(-f64::from(n - l), m))
                    .mul(t_pow_u.powi(m as i32))
                    .div(g)
                    .div(factorial_scaled(m)),
            );
        }
    }
    Ok(sum_scaled(&terms).mul(ik_prefactor(n, p)).to_f64())
}

/// Modified I-Konhauser polynomial via its Kampé de Fériet representation
/// F^{1,0,3}_{0,υ,4}; agrees with [`ik_mod`].
pub fn ik_mod_via_kdf(params: &PolyParams, z: f64, t: f64) -> Result<f64> {
    params.validate()?;
    if z == 0.0 {
        return Err(Error::domain("Kampé de Fériet representation needs z != 0"));
    }
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    let (gamma_mod, c_mod) = mod_params(params)?;
    if is_mod_sentinel(params, gamma_mod, c_mod) {
        let v = ik_poly_via_kdf(params, z, t)?;
        return Ok(ScaledF64::from_f64(v).div(gamma_scaled(params.p + 1.0)?).to_f64());
    }
    let (n, p, q, ups) = (params.n, params.p, params.q, params.upsilon);
    let nf = f64::from(n);
    let u = f64::from(ups);
    let policy = SeriesPolicy::default();
    let a = [-nf];
    let c = [-nf / 2.0, (-nf + 1.0) / 2.0, c_mod];
    let e: Vec<f64> = (0..ups).map(|j| (q + 1.0 + f64::from(j)) / u).collect();
    let g = [-nf, p - nf, p + 1.0, gamma_mod];
    let x = -1.0 / (z * z);
    let y = (t / u).powi(ups as i32);
    let f = kampe_de_feriet(&a, &[], &c, &[], &e, &g, x, y, &policy)?;
    let pref = pochhammer_scaled(1.0 - p, n)
        .mul(ScaledF64::from_f64(-2.0 * z).powi(n as i32))
        .div(gamma_scaled(p + 1.0)?)
        .div(gamma_scaled(q + 1.0)?);
    Ok(pref.mul_f64(f).to_f64())
}

/// 2D Hermite-Konhauser polynomial (exponent (2z)^{n-l} as printed in its
/// defining sum, not n-2l).
pub fn hk_poly(n: u32, mu: f64, upsilon: u32, z: f64, t: f64) -> Result<f64> {
    check_konhauser_args(n, mu, upsilon, t)?;
    let u = f64::from(upsilon);
    let two_z = ScaledF64::from_f64(2.0 * z);
    let t_pow_u = ScaledF64::from_f64(t).powi(upsilon as i32);
    let mut terms = Vec::new();
    for l in 0..=(n / 2) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let lead = pochhammer_scaled(-f64::from(n), 2 * l)
            .mul_f64(sign)
            .mul(two_z.powi((n - l) as i32))
            .div(factorial_scaled(l));
        for m in 0..=(n - l) {
            // (-n)_{l+m}/(-n)_l = (-(n-l))_m on the live range.
            let g = gamma_scaled(u * f64::from(m) + mu + 1.0)?;
            terms.push(
                lead.mul(pochhammer_scaled(-f64::from(n - l), m))
                    .mul(t_pow_u.powi(m as i32))
                    .div(g)
                    .div(factorial_scaled(m)),
            );
        }
    }
    Ok(sum_scaled(&terms).to_f64())
}

/// Dual of the Hermite-Konhauser pair: H_n(z) Σ_{l=0}^n Y_l^(mu)(t; υ).
pub fn hk_dual(n: u32, mu: f64, upsilon: u32, z: f64, t: f64) -> Result<f64> {
    check_konhauser_args(n, mu, upsilon, t)?;
    let mut s = 0.0;
    for l in 0..=n {
        s += konhauser_y(l, mu, upsilon, t)?;
    }
    Ok(hermite(n, z) * s)
}

/// Dense coefficient table of a bivariate polynomial
/// Σ rows[i].1[m] · z^{rows[i].0} · t^{t_step·m}, for fast repeated
/// evaluation inside quadrature loops.
pub struct BivariateTable {
    rows: Vec<(i32, Vec<f64>)>,
    t_step: i32,
}

impl BivariateTable {
    pub fn eval(&self, z: f64, t: f64) -> f64 {
        let ts = t.powi(self.t_step);
        let mut acc = 0.0;
        for (zp, coefs) in &self.rows {
            let mut h = 0.0;
            for &c in coefs.iter().rev() {
                h = h * ts + c;
            }
            acc += z.powi(*zp) * h;
        }
        acc
    }

    pub fn rows(&self) -> &[(i32, Vec<f64>)] {
        &self.rows
    }
}

/// Coefficient table of ik_poly over z^{n-2l} t^{υm}.
pub fn ik_poly_table(params: &PolyParams) -> Result<BivariateTable> {
    params.validate()?;
    let (n, p, q, ups) = (params.n, params.p, params.q, params.upsilon);
    let u = f64::from(ups);
    let pref = ik_prefactor(n, p);
    let mut rows = Vec::new();
    for l in 0..=(n / 2) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let lead = pref
            .mul(pochhammer_scaled(-f64::from(n), 2 * l))
            .mul_f64(sign * 2.0f64.powi((n - 2 * l) as i32))
            .div(pochhammer_scaled(p - f64::from(n), l))
            .div(factorial_scaled(l));
        let mut coefs = Vec::new();
        for m in 0..=(n - l) {
            let c = lead
                .mul(pochhammer_scaled(-f64::from(n - l), m))
                .div(gamma_scaled(u * f64::from(m) + q + 1.0)?)
                .div(factorial_scaled(m));
            coefs.push(c.to_f64());
        }
        rows.push(((n - 2 * l) as i32, coefs));
    }
    Ok(BivariateTable { rows, t_step: ups as i32 })
}

/// Coefficient table of ik_dual = I_n^(p)(z) Σ_j Y_j^(q)(t; υ) over
/// z^{n-2k} t^m.
pub fn ik_dual_table(params: &PolyParams) -> Result<BivariateTable> {
    params.validate()?;
    let (n, p, q, ups) = (params.n, params.p, params.q, params.upsilon);
    let mut ysum = vec![ScaledF64::ZERO; n as usize + 1];
    for j in 0..=n {
        for (i, c) in konhauser_y_coeffs(j, q, ups).into_iter().enumerate() {
            ysum[i] = crate::num::sum_scaled(&[ysum[i], c]);
        }
    }
    let nf = factorial_scaled(n);
    let mut rows = Vec::new();
    for k in 0..=(n / 2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let ik = nf
            .mul_f64(sign * binomial_real(p - 1.0, n - k))
            .mul_f64(binomial_real(f64::from(n - k), k))
            .mul_f64(2.0f64.powi((n - 2 * k) as i32));
        let coefs = ysum.iter().map(|c| c.mul(ik).to_f64()).collect();
        rows.push(((n - 2 * k) as i32, coefs));
    }
    Ok(BivariateTable { rows, t_step: 1 })
}
