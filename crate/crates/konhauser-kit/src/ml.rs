//! Bivariate I-Konhauser Mittag-Leffler functions (four- and six-parameter),
//! the Prabhakar function, their terminating polynomial reductions, and the
//! closed-form Laplace transforms.
//!
//! Parameter conventions: upper (numerator) Pochhammer slots are evaluated
//! literally, so a non-positive integer terminates the series; a lower
//! (denominator) slot equal to exactly 0 means the slot is *removed* (the
//! factor is dropped), which reproduces the documented parameter-reduction
//! identities without 0/0 evaluation. Any other lower slot that vanishes for
//! a live term index is rejected.

use crate::error::{Error, Result};
use crate::gamma::{
    factorial_scaled, gamma_reciprocal, gamma_scaled, log_gamma_signed, pochhammer_scaled,
};
use crate::hyper::{hyp_pfq, nonpositive_integer, SeriesPolicy};
use crate::num::{sum_scaled, KahanSum, ScaledF64};
use crate::poly::MAX_DEGREE;

/// Parameters of the four-parameter function E_{q,υ}^{(γ1;γ2;γ3;γ4)}.
#[derive(Clone, Copy, Debug)]
pub struct Ml4Params {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub g4: f64,
    pub q: f64,
    pub upsilon: u32,
}

/// Parameters of the six-parameter function E_{p,q,υ}^{(γ1;...;γ6)}.
#[derive(Clone, Copy, Debug)]
pub struct Ml6Params {
    pub g: [f64; 6],
    pub p: f64,
    pub q: f64,
    pub upsilon: u32,
}

impl Ml6Params {
    /// The constrained slot pattern (γ4, γ5, γ6) = ((γ1+1)/2, γ2, γ3) used by
    /// the Laplace and operator theorems.
    pub fn constrained(g1: f64, g2: f64, g3: f64, p: f64, q: f64, upsilon: u32) -> Self {
        Ml6Params { g: [g1, g2, g3, (g1 + 1.0) / 2.0, g2, g3], p, q, upsilon }
    }
}

/// Internal description of one bivariate series
/// Σ_{l,m} (-1)^l (γa)_{2l} (γb)_{l+m} [(γc)_l] z^l t^{υm} /
/// (Π (lower)_l [Γ(p+l)] Γ(q+υm) l! m!).
struct MlSeries {
    two_l_upper: f64,
    coupled_upper: f64,
    extra_l_upper: Option<f64>,
    l_lowers: Vec<f64>,
    p_gamma: Option<f64>,
    q: f64,
    upsilon: u32,
}

impl MlSeries {
    /// Largest live l index if the series terminates structurally in l.
    fn l_termination(&self, z: f64) -> Option<u32> {
        let mut best: Option<u32> = None;
        let mut push = |v: u32| {
            best = Some(best.map_or(v, |b| b.min(v)));
        };
        if z == 0.0 {
            push(0);
        }
        if let Some(k) = nonpositive_integer(self.two_l_upper) {
            push(k / 2);
        }
        if let Some(k) = nonpositive_integer(self.coupled_upper) {
            push(k);
        }
        if let Some(c) = self.extra_l_upper {
            if let Some(k) = nonpositive_integer(c) {
                push(k);
            }
        }
        best
    }

    fn validate(&self, z: f64, enforce_region: bool) -> Result<Option<u32>> {
        if self.q <= 0.0 {
            return Err(Error::domain(format!("q = {} must be > 0", self.q)));
        }
        if let Some(p) = self.p_gamma {
            if p <= 0.0 {
                return Err(Error::domain(format!("p = {p} must be > 0")));
            }
        }
        if self.upsilon == 0 {
            return Err(Error::domain("upsilon must be a positive integer"));
        }
        let lmax = self.l_termination(z);
        if enforce_region && lmax.is_none() && z.abs() >= 0.25 {
            return Err(Error::ConvergenceDomain(z));
        }
        for &b in &self.l_lowers {
            if let Some(nb) = nonpositive_integer(b) {
                match lmax {
                    Some(l) if nb >= l => {}
                    _ => return Err(Error::DivisionByZeroParameter(b)),
                }
            }
        }
        Ok(lmax)
    }

    fn eval(&self, z: f64, t: f64, policy: &SeriesPolicy, enforce_region: bool) -> Result<f64> {
        let lmax = self.validate(z, enforce_region)?;
        let u = self.upsilon;
        let uf = f64::from(u);
        let t_pow_u = t.powi(u as i32);
        let hard_lmax = lmax.unwrap_or(policy.max_terms_per_index);
        let mut rows: Vec<ScaledF64> = Vec::new();
        let mut small_rows = 0u32;
        let mut max_row = 0.0f64;
        for l in 0..=hard_lmax {
            let lead = self.row_lead(l, z);
            if lead.is_zero() {
                if lmax.is_some() {
                    continue;
                } else {
                    break;
                }
            }
            // Inner m sum: Σ_m (γb + l)_m (t^υ)^m / (Γ(q + υm) m!).
            let mmax = nonpositive_integer(self.coupled_upper)
                .map(|k| k.saturating_sub(l))
                .unwrap_or(policy.max_terms_per_index);
            let mut inner = KahanSum::new();
            let mut term = gamma_reciprocal(self.q);
            let mut small_run = 0u32;
            for m in 0..=mmax {
                inner.add(term);
                if m == mmax {
                    break;
                }
                // term ratio: (γb+l+m) t^υ / ((m+1) (q+υm)_υ), with the
                // Γ-ratio folded in so growth detection sees the true tail;
                // q > 0 keeps (q+υm)_υ strictly positive.
                let mf = f64::from(m);
                let mut gr = 1.0;
                for j in 0..u {
                    gr *= self.q + uf * mf + f64::from(j);
                }
                let ratio = (self.coupled_upper + f64::from(l) + mf) * t_pow_u / ((mf + 1.0) * gr);
                term *= ratio;
                if !term.is_finite() {
                    return Err(Error::Divergence("inner m series overflow".into()));
                }
                let scale = inner.value().abs().max(f64::MIN_POSITIVE);
                if term.abs() < policy.tail_epsilon * scale && ratio.abs() < 1.0 {
                    small_run += 1;
                    if small_run >= policy.consecutive_small {
                        break;
                    }
                } else {
                    small_run = 0;
                }
            }
            let row = lead.mul_f64(inner.value());
            rows.push(row);
            if lmax.is_none() {
                let mag = row.to_f64().abs();
                max_row = max_row.max(mag);
                if mag < max_row * policy.tail_epsilon {
                    small_rows += 1;
                    if small_rows >= policy.consecutive_small {
                        break;
                    }
                } else {
                    small_rows = 0;
                }
            }
        }
        Ok(sum_scaled(&rows).to_f64())
    }

    /// (-1)^l (γa)_{2l} [(γc)_l] (γb)_l z^l / (Π(lower)_l [Γ(p+l)] l!).
    fn row_lead(&self, l: u32, z: f64) -> ScaledF64 {
        let mut lead = pochhammer_scaled(self.two_l_upper, 2 * l)
            .mul(pochhammer_scaled(self.coupled_upper, l))
            .mul(ScaledF64::from_f64(z).powi(l as i32));
        if l % 2 == 1 {
            lead = lead.neg();
        }
        if let Some(c) = self.extra_l_upper {
            lead = lead.mul(pochhammer_scaled(c, l));
        }
        if lead.is_zero() {
            return lead;
        }
        for &b in &self.l_lowers {
            lead = lead.div(pochhammer_scaled(b, l));
        }
        if let Some(p) = self.p_gamma {
            lead = lead.div(gamma_scaled(p + f64::from(l)).expect("p + l > 0"));
        }
        lead.div(factorial_scaled(l))
    }

    /// Precomputed coefficients c[l][m] of z^l t^{υm} with bounds adequate
    /// for arguments up to (max_abs_z, max_abs_t).
    fn table(
        &self,
        max_abs_z: f64,
        max_abs_t: f64,
        policy: &SeriesPolicy,
        enforce_region: bool,
    ) -> Result<MlTable> {
        let lmax_struct = self.validate(max_abs_z, enforce_region)?;
        let uf = f64::from(self.upsilon);
        let t_pow_u = max_abs_t.powi(self.upsilon as i32).abs().max(1e-300);
        let hard_lmax = lmax_struct.unwrap_or(400);
        let mut rows = Vec::new();
        let mut small_rows = 0u32;
        let mut max_abs_row = 0.0f64;
        for l in 0..=hard_lmax {
            let lead = self.row_lead(l, 1.0); // z-power applied at eval time
            if lead.is_zero() {
                if lmax_struct.is_some() {
                    rows.push(Vec::new());
                    continue;
                } else {
                    break;
                }
            }
            let mmax = nonpositive_integer(self.coupled_upper)
                .map(|k| k.saturating_sub(l))
                .unwrap_or(600);
            let mut coefs = Vec::new();
            let mut cm = ScaledF64::ONE;
            let mut row_bound = 0.0f64;
            let mut small_run = 0u32;
            for m in 0..=mmax {
                let c = lead
                    .mul(cm)
                    .mul_f64(gamma_reciprocal(self.q + uf * f64::from(m)));
                let cv = c.to_f64();
                if !cv.is_finite() {
                    return Err(Error::Divergence("table coefficient overflow".into()));
                }
                coefs.push(cv);
                row_bound += cv.abs() * t_pow_u.powi(m as i32);
                if m == mmax {
                    break;
                }
                let mf = f64::from(m);
                cm = cm
                    .mul_f64(self.coupled_upper + f64::from(l) + mf)
                    .div(ScaledF64::from_f64(mf + 1.0));
                if mmax == 600 {
                    let tail = cv.abs() * t_pow_u.powi(m as i32);
                    if tail < policy.tail_epsilon * row_bound.max(f64::MIN_POSITIVE) {
                        small_run += 1;
                        if small_run >= policy.consecutive_small {
                            break;
                        }
                    } else {
                        small_run = 0;
                    }
                }
            }
            let row_scale = row_bound * max_abs_z.abs().max(1e-300).powi(l as i32);
            rows.push(coefs);
            if lmax_struct.is_none() {
                max_abs_row = max_abs_row.max(row_scale);
                if row_scale < policy.tail_epsilon * max_abs_row.max(f64::MIN_POSITIVE) {
                    small_rows += 1;
                    if small_rows >= policy.consecutive_small {
                        break;
                    }
                } else {
                    small_rows = 0;
                }
            }
        }
        Ok(MlTable { rows, upsilon: self.upsilon })
    }
}

/// Precomputed coefficient table for fast repeated kernel evaluation.
pub struct MlTable {
    rows: Vec<Vec<f64>>,
    upsilon: u32,
}

impl MlTable {
    /// Raw coefficient rows c[l][m] of z^l t^{υm}.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn upsilon(&self) -> u32 {
        self.upsilon
    }

    pub fn eval(&self, z: f64, t: f64) -> f64 {
        let tu = t.powi(self.upsilon as i32);
        let mut acc = KahanSum::new();
        let mut zl = 1.0;
        for row in &self.rows {
            if !row.is_empty() {
                // Horner in t^υ.
                let mut h = 0.0;
                for &c in row.iter().rev() {
                    h = h * tu + c;
                }
                acc.add(zl * h);
            }
            zl *= z;
        }
        acc.value()
    }
}

/// Four-parameter bivariate Mittag-Leffler function E_{q,υ}^{(γ1;γ2;γ3;γ4)}(z, t).
pub fn ml4(params: &Ml4Params, z: f64, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    ml4_series(params).eval(z, t, policy, true)
}

fn ml4_series(params: &Ml4Params) -> MlSeries {
    MlSeries {
        two_l_upper: params.g1,
        coupled_upper: params.g2,
        extra_l_upper: None,
        l_lowers: [params.g3, params.g4].iter().copied().filter(|&x| x != 0.0).collect(),
        p_gamma: None,
        q: params.q,
        upsilon: params.upsilon,
    }
}

/// Six-parameter (modified) bivariate Mittag-Leffler function
/// E_{p,q,υ}^{(γ1;...;γ6)}(z, t).
pub fn ml6(params: &Ml6Params, z: f64, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    ml6_series(params).eval(z, t, policy, true)
}

/// Six-parameter series evaluated without the |z| < 1/4 region guard.
///
/// The guarded region is the sufficient condition quoted for the double
/// series; the l-series ratio decays like 4|z|/l, so the sum converges for
/// every argument and the transform checks must integrate it across the
/// whole half line. Internal use only.
pub(crate) fn ml6_unguarded(
    params: &Ml6Params,
    z: f64,
    t: f64,
    policy: &SeriesPolicy,
) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::domain(format!("t = {t} must be >= 0")));
    }
    ml6_series(params).eval(z, t, policy, false)
}

fn ml6_series(params: &Ml6Params) -> MlSeries {
    MlSeries {
        two_l_upper: params.g[0],
        coupled_upper: params.g[1],
        extra_l_upper: Some(params.g[2]),
        l_lowers: params.g[3..6].iter().copied().filter(|&x| x != 0.0).collect(),
        p_gamma: Some(params.p),
        q: params.q,
        upsilon: params.upsilon,
    }
}

/// Coefficient table for E_{p,q,υ}^{(γ)}(w1 u, w2 x) kernels, valid for
/// |u| <= max_abs_z, |x| <= max_abs_t.
pub fn ml6_table(
    params: &Ml6Params,
    max_abs_z: f64,
    max_abs_t: f64,
    policy: &SeriesPolicy,
) -> Result<MlTable> {
    ml6_series(params).table(max_abs_z, max_abs_t, policy, true)
}

/// Table without the |z| < 1/4 region guard, for transform integrands that
/// sweep the first argument across the half line.
pub(crate) fn ml6_table_unguarded(
    params: &Ml6Params,
    max_abs_z: f64,
    max_abs_t: f64,
    policy: &SeriesPolicy,
) -> Result<MlTable> {
    ml6_series(params).table(max_abs_z, max_abs_t, policy, false)
}

/// Prabhakar function E_{p,q}^{(γ)}(t) = Σ (γ)_n t^n / (Γ(pn+q) n!).
pub fn prabhakar(gamma: f64, p: f64, q: f64, t: f64, policy: &SeriesPolicy) -> Result<f64> {
    if p <= 0.0 || q <= 0.0 {
        return Err(Error::domain("Prabhakar function needs p > 0 and q > 0"));
    }
    let nmax = nonpositive_integer(gamma).unwrap_or(policy.max_terms_per_index);
    let mut acc = KahanSum::new();
    let mut term = gamma_reciprocal(q);
    let mut small_run = 0u32;
    for n in 0..=nmax {
        acc.add(term);
        if n == nmax {
            break;
        }
        let nf = f64::from(n);
        // Γ(pn+q)/Γ(p(n+1)+q) via log-Gamma; both arguments stay positive.
        let lg_now = log_gamma_signed(p * nf + q).expect("positive argument");
        let lg_next = log_gamma_signed(p * (nf + 1.0) + q).expect("positive argument");
        let ratio = (gamma + nf) * t / (nf + 1.0) * (lg_now.logmag - lg_next.logmag).exp();
        term *= ratio;
        if !term.is_finite() {
            return Err(Error::Divergence("Prabhakar series overflow".into()));
        }
        let scale = acc.value().abs().max(f64::MIN_POSITIVE);
        if term.abs() < policy.tail_epsilon * scale && ratio.abs() < 1.0 {
            small_run += 1;
            if small_run >= policy.consecutive_small {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok(acc.value())
}

/// Rebuilds the I-Konhauser polynomial from the terminating four-parameter
/// function: (1-p)_n (-2z)^n E_{q+1,υ}^{(-n;-n;-n;p-n)}(1/(4z²), t).
pub fn poly_from_ml4(
    n: u32,
    p: f64,
    q: f64,
    upsilon: u32,
    z: f64,
    t: f64,
    policy: &SeriesPolicy,
) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::domain("polynomial reduction needs z != 0"));
    }
    if n > MAX_DEGREE {
        return Err(Error::domain(format!("degree n = {n} exceeds cap {MAX_DEGREE}")));
    }
    let nf = f64::from(n);
    let params = Ml4Params { g1: -nf, g2: -nf, g3: -nf, g4: p - nf, q: q + 1.0, upsilon };
    let e = ml4(&params, 1.0 / (4.0 * z * z), t, policy)?;
    let pref = pochhammer_scaled(1.0 - p, n).mul(ScaledF64::from_f64(-2.0 * z).powi(n as i32));
    Ok(pref.mul_f64(e).to_f64())
}

/// Rebuilds the modified polynomial from the six-parameter function:
/// (1-p)_n (-2z)^n E_{p+1,q+1,υ}^{(-n;-n;c;-n;p-n;γ)}(1/(4z²), t).
///
/// The argument is +1/(4z²): the modified polynomial's defining sum carries
/// an explicit (-1)^l next to (1/(4z²))^l, exactly like the unmodified
/// family, so the series argument that reproduces it is positive.
#[allow(clippy::too_many_arguments)]
pub fn poly_mod_from_ml6(
    n: u32,
    p: f64,
    q: f64,
    gamma: f64,
    c: f64,
    upsilon: u32,
    z: f64,
    t: f64,
    policy: &SeriesPolicy,
) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::domain("polynomial reduction needs z != 0"));
    }
    if n > MAX_DEGREE {
        return Err(Error::domain(format!("degree n = {n} exceeds cap {MAX_DEGREE}")));
    }
    let nf = f64::from(n);
    let params =
        Ml6Params { g: [-nf, -nf, c, -nf, p - nf, gamma], p: p + 1.0, q: q + 1.0, upsilon };
    let e = ml6(&params, 1.0 / (4.0 * z * z), t, policy)?;
    let pref = pochhammer_scaled(1.0 - p, n).mul(ScaledF64::from_f64(-2.0 * z).powi(n as i32));
    Ok(pref.mul_f64(e).to_f64())
}

fn laplace_ratio_checks(w: f64, a: f64, upsilon: u32) -> Result<(f64, f64)> {
    if a <= 0.0 {
        return Err(Error::domain(format!("transform variable a = {a} must be > 0")));
    }
    let au = a.powi(upsilon as i32);
    let wu = w.powi(upsilon as i32);
    if (wu / au).abs() >= 1.0 {
        return Err(Error::domain(format!("|w^υ/a^υ| = {} must be < 1", (wu / au).abs())));
    }
    Ok((au, wu))
}

/// Closed-form Laplace transform L{t^{q-1} E_{q,υ}^{(γ)}(z, wt)}(a):
/// a^{-q} ((a^υ-w^υ)/a^υ)^{-γ2} 3F2[γ1/2, (γ1+1)/2, γ2; γ3, γ4; -4za^υ/(a^υ-w^υ)].
pub fn laplace_closed_ml4(params: &Ml4Params, z: f64, w: f64, a: f64) -> Result<f64> {
    let (au, wu) = laplace_ratio_checks(w, a, params.upsilon)?;
    let ratio = (au - wu) / au;
    let arg = -4.0 * z * au / (au - wu);
    let policy = SeriesPolicy::default();
    let f = hyp_pfq(
        &[params.g1 / 2.0, (params.g1 + 1.0) / 2.0, params.g2],
        &[params.g3, params.g4],
        arg,
        &policy,
    )?;
    Ok(a.powf(-params.q) * ratio.powf(-params.g2) * f)
}

/// Closed-form Laplace transform of the polynomial:
/// L{t^q IK_n(z, wt)}(a) = (1-p)_n (-2z)^n a^{-q-1} ((a^υ-w^υ)/a^υ)^n
/// 3F2[-n, -n/2, (-n+1)/2; -n, p-n; -a^υ/(z²(a^υ-w^υ))].
#[allow(clippy::too_many_arguments)]
pub fn laplace_closed_ik(
    n: u32,
    p: f64,
    q: f64,
    upsilon: u32,
    z: f64,
    w: f64,
    a: f64,
) -> Result<f64> {
    if z == 0.0 {
        return Err(Error::domain("closed form needs z != 0"));
    }
    let (au, wu) = laplace_ratio_checks(w, a, upsilon)?;
    let nf = f64::from(n);
    let arg = -au / (z * z * (au - wu));
    let policy = SeriesPolicy::default();
    let f = hyp_pfq(&[-nf, -nf / 2.0, (-nf + 1.0) / 2.0], &[-nf, p - nf], arg, &policy)?;
    let pref = pochhammer_scaled(1.0 - p, n)
        .mul(ScaledF64::from_f64(-2.0 * z).powi(n as i32))
        .mul(ScaledF64::from_f64((au - wu) / au).powi(n as i32))
        .mul_f64(a.powf(-q - 1.0));
    Ok(pref.mul_f64(f).to_f64())
}

/// Closed-form Laplace transform of the constrained six-parameter function:
/// L{t^q E_{p+1,q+1,υ}^{(γ1;γ2;γ3;(γ1+1)/2;γ2;γ3)}(z, wt)}(a)
/// = a^{-q-1} ((a^υ-w^υ)/a^υ)^{-γ2} E_{1,p+1}^{(γ1/2)}(-4za^υ/(a^υ-w^υ)).
#[allow(clippy::too_many_arguments)]
pub fn laplace_closed_ml6_1d(
    g1: f64,
    g2: f64,
    _g3: f64,
    p: f64,
    q: f64,
    upsilon: u32,
    z: f64,
    w: f64,
    a: f64,
) -> Result<f64> {
    let (au, wu) = laplace_ratio_checks(w, a, upsilon)?;
    let ratio = (au - wu) / au;
    let policy = SeriesPolicy::default();
    let e = prabhakar(g1 / 2.0, 1.0, p + 1.0, -4.0 * z * au / (au - wu), &policy)?;
    Ok(a.powf(-q - 1.0) * ratio.powf(-g2) * e)
}

fn laplace2_ratio_checks(
    w1: f64,
    w2: f64,
    a: f64,
    b: f64,
    upsilon: u32,
) -> Result<(f64, f64)> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::domain("transform variables a, b must be > 0"));
    }
    let bu = b.powi(upsilon as i32);
    let w2u = w2.powi(upsilon as i32);
    if (w2u / bu).abs() >= 1.0 {
        return Err(Error::domain(format!("|w2^υ/b^υ| = {} must be < 1", (w2u / bu).abs())));
    }
    let x = 4.0 * w1 * bu / (a * (w2u - bu));
    if x.abs() >= 1.0 {
        return Err(Error::domain(format!("|4 w1 b^υ/(a (w2^υ-b^υ))| = {} must be < 1", x.abs())));
    }
    Ok((bu, w2u))
}

/// Closed-form double Laplace transform
/// L2{z^p t^q E_{p+1,q+1,υ}^{(γ1;γ2;γ3;(γ1+1)/2;γ2;γ3)}(w1 z, w2 t)}(a, b).
#[allow(clippy::too_many_arguments)]
pub fn laplace2_closed_ml6(
    g1: f64,
    g2: f64,
    _g3: f64,
    p: f64,
    q: f64,
    upsilon: u32,
    w1: f64,
    w2: f64,
    a: f64,
    b: f64,
) -> Result<f64> {
    let (bu, w2u) = laplace2_ratio_checks(w1, w2, a, b, upsilon)?;
    let x = 4.0 * w1 * bu / (a * (w2u - bu));
    Ok(a.powf(-p - 1.0)
        * b.powf(-q - 1.0)
        * ((bu - w2u) / bu).powf(-g2)
        * (1.0 - x).powf(-g1 / 2.0))
}

/// Closed-form double Laplace transform of the modified polynomial kernel
/// (γ = (1-n)/2, c = p-n):
/// (1-p)_n/(a^{p+1} b^{q+1}) ((w2^υ-b^υ)/b^υ)^n (1 - 4w1 b^υ/(a(w2^υ-b^υ)))^{n/2}.
#[allow(clippy::too_many_arguments)]
pub fn laplace2_closed_mod_poly(
    n: u32,
    p: f64,
    q: f64,
    upsilon: u32,
    w1: f64,
    w2: f64,
    a: f64,
    b: f64,
) -> Result<f64> {
    let (bu, w2u) = laplace2_ratio_checks(w1, w2, a, b, upsilon)?;
    let x = 4.0 * w1 * bu / (a * (w2u - bu));
    let pref = pochhammer_scaled(1.0 - p, n)
        .mul_f64(a.powf(-p - 1.0))
        .mul_f64(b.powf(-q - 1.0))
        .mul(ScaledF64::from_f64((w2u - bu) / bu).powi(n as i32))
        .mul_f64((1.0 - x).powf(f64::from(n) / 2.0));
    Ok(pref.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ik_mod, ik_poly, PolyParams};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn ml4_origin_anchor() {
        let p = Ml4Params { g1: 0.7, g2: 1.3, g3: 2.0, g4: 3.0, q: 1.5, upsilon: 2 };
        let v = ml4(&p, 0.0, 0.0, &SeriesPolicy::default()).unwrap();
        assert!(close(v, gamma_reciprocal(1.5), 1e-14));
    }

    #[test]
    fn ml4_prabhakar_reduction_gives_e() {
        // γ1=γ3=γ4=0, γ2=1, q=1, υ=1, z=0, t=1 -> e.
        let p = Ml4Params { g1: 0.0, g2: 1.0, g3: 0.0, g4: 0.0, q: 1.0, upsilon: 1 };
        let v = ml4(&p, 0.0, 1.0, &SeriesPolicy::default()).unwrap();
        assert!(close(v, std::f64::consts::E, 1e-12), "{v}");
    }

    #[test]
    fn ml4_convergence_guard() {
        let p = Ml4Params { g1: 0.7, g2: 1.3, g3: 2.0, g4: 3.0, q: 1.5, upsilon: 2 };
        assert!(matches!(
            ml4(&p, 0.3, 1.0, &SeriesPolicy::default()),
            Err(Error::ConvergenceDomain(_))
        ));
        // Terminating γ2 lifts the guard.
        let p2 = Ml4Params { g1: 0.7, g2: -3.0, g3: 2.0, g4: 3.0, q: 1.5, upsilon: 2 };
        assert!(ml4(&p2, 0.9, 1.0, &SeriesPolicy::default()).is_ok());
    }

    #[test]
    fn ml4_terminating_matches_ik_poly() {
        let policy = SeriesPolicy::default();
        for n in 0..=5u32 {
            for &(z, t) in &[(1.1, 0.7), (-0.8, 1.5), (2.0, 0.0)] {
                let params = PolyParams::new(n, 9.0, 0.5, 2);
                let a = poly_from_ml4(n, 9.0, 0.5, 2, z, t, &policy).unwrap();
                let b = ik_poly(&params, z, t).unwrap();
                assert!(close(a, b, 1e-12), "n={n} z={z} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn ml4_n1_closed_form() {
        let policy = SeriesPolicy::default();
        let (p, q, ups, z, t) = (7.0, 0.5, 2u32, 1.4, 0.9);
        let v = poly_from_ml4(1, p, q, ups, z, t, &policy).unwrap();
        let expect = 2.0 * z * (p - 1.0)
            * (gamma_reciprocal(q + 1.0) - t.powi(ups as i32) * gamma_reciprocal(q + 3.0));
        assert!(close(v, expect, 1e-13));
    }

    #[test]
    fn ml6_origin_anchor() {
        let p = Ml6Params { g: [0.7, 1.3, 0.9, 2.0, 3.0, 1.1], p: 2.0, q: 1.5, upsilon: 2 };
        let v = ml6(&p, 0.0, 0.0, &SeriesPolicy::default()).unwrap();
        assert!(close(v, gamma_reciprocal(2.0) * gamma_reciprocal(1.5), 1e-14));
    }

    #[test]
    fn ml6_gamma3_p_gamma6_zero_reduces_to_ml4() {
        // E_{p,q,υ}^{(γ1;γ2;p;γ4;γ5;0)} = E_{q,υ}^{(γ1;γ2;γ4;γ5)} / Γ(p).
        let policy = SeriesPolicy::default();
        let (g1, g2, g4, g5, p, q) = (0.7, 1.3, 2.0, 3.0, 2.5, 1.5);
        let six = Ml6Params { g: [g1, g2, p, g4, g5, 0.0], p, q, upsilon: 2 };
        let four = Ml4Params { g1, g2, g3: g4, g4: g5, q, upsilon: 2 };
        for &(z, t) in &[(0.2, 1.0), (-0.15, 2.0), (0.0, 0.5)] {
            let a = ml6(&six, z, t, &policy).unwrap();
            let b = ml4(&four, z, t, &policy).unwrap() * gamma_reciprocal(p);
            assert!(close(a, b, 1e-13), "z={z} t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn ml6_remark36_collapse_to_plain_double_series() {
        // (γ4,γ5,γ6)=(γ1/2,(γ1+1)/2,γ3) at (-z/4, t) equals
        // Σ (γ2)_{l+m} z^l t^{υm}/(Γ(p+l)Γ(q+υm) l! m!).
        let policy = SeriesPolicy::default();
        let (g1, g2, g3, p, q, ups) = (0.9, 1.2, 1.7, 1.8, 1.1, 2u32);
        let six = Ml6Params { g: [g1, g2, g3, g1 / 2.0, (g1 + 1.0) / 2.0, g3], p, q, upsilon: ups };
        for &(z, t) in &[(0.3, 0.8), (0.6, 1.4)] {
            let a = ml6(&six, -z / 4.0, t, &policy).unwrap();
            // direct plain double series
            let mut s = 0.0;
            for l in 0..60u32 {
                for m in 0..60u32 {
                    s += crate::gamma::pochhammer(g2, l + m).to_real()
                        * z.powi(l as i32)
                        * t.powi((ups * m) as i32)
                        * gamma_reciprocal(p + f64::from(l))
                        * gamma_reciprocal(q + f64::from(ups * m))
                        / (crate::gamma::factorial_scaled(l).to_f64()
                            * crate::gamma::factorial_scaled(m).to_f64());
                }
            }
            assert!(close(a, s, 1e-11), "z={z} t={t}: {a} vs {s}");
        }
    }

    #[test]
    fn poly_mod_from_ml6_matches_ik_mod() {
        let policy = SeriesPolicy::default();
        for n in 0..=4u32 {
            let params = PolyParams::new(n, 8.0, 0.5, 2).with_mod(1.5, 2.0);
            for &(z, t) in &[(1.0, 1.0), (-0.7, 0.4)] {
                let a = poly_mod_from_ml6(n, 8.0, 0.5, 1.5, 2.0, 2, z, t, &policy).unwrap();
                let b = ik_mod(&params, z, t).unwrap();
                assert!(close(a, b, 1e-12), "n={n} z={z} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn poly_mod_sentinel_consistent_with_remark32() {
        let policy = SeriesPolicy::default();
        let (p, q, ups, z, t) = (8.0, 0.5, 2u32, 1.2, 0.9);
        for n in 0..=4u32 {
            let a = poly_mod_from_ml6(n, p, q, 0.0, p + 1.0, ups, z, t, &policy).unwrap();
            let b = ik_poly(&PolyParams::new(n, p, q, ups), z, t).unwrap()
                * gamma_reciprocal(p + 1.0);
            assert!(close(a, b, 1e-12), "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn prabhakar_anchors() {
        let policy = SeriesPolicy::default();
        assert!(close(prabhakar(1.3, 0.9, 1.5, 0.0, &policy).unwrap(), gamma_reciprocal(1.5), 1e-14));
        // E_{1,1}^{(1)}(t) = e^t.
        let v = prabhakar(1.0, 1.0, 1.0, 1.0, &policy).unwrap();
        assert!(close(v, std::f64::consts::E, 1e-12));
        // E_{2,1}^{(1)}(-x^2) = cos x at x = pi/3.
        let x = std::f64::consts::PI / 3.0;
        let v = prabhakar(1.0, 2.0, 1.0, -x * x, &policy).unwrap();
        assert!(close(v, 0.5, 1e-12), "{v}");
    }

    #[test]
    fn ml4_truncation_self_consistency() {
        // Policy-truncated value vs a doubled-max_terms evaluation.
        let p = Ml4Params { g1: 0.7, g2: 1.3, g3: 2.0, g4: 3.0, q: 1.5, upsilon: 2 };
        let base = SeriesPolicy::default();
        let tight = SeriesPolicy {
            tail_epsilon: base.tail_epsilon,
            consecutive_small: base.consecutive_small,
            max_terms_per_index: base.max_terms_per_index * 2,
        };
        for &(z, t) in &[(0.2, 5.0), (-0.2, 3.0), (0.1, 1.0)] {
            let a = ml4(&p, z, t, &base).unwrap();
            let b = ml4(&p, z, t, &tight).unwrap();
            assert!((a - b).abs() <= 1e-13 * b.abs().max(1e-300), "z={z} t={t}");
        }
    }

    #[test]
    fn ml4_origin_monotone_in_q() {
        // 1/Γ(q) strictly decreasing on (1.4616.., inf).
        let policy = SeriesPolicy::default();
        let mut prev = f64::INFINITY;
        for &q in &[1.5, 2.0, 3.0, 4.5, 7.0] {
            let p = Ml4Params { g1: 0.5, g2: 1.0, g3: 1.0, g4: 1.0, q, upsilon: 1 };
            let v = ml4(&p, 0.0, 0.0, &policy).unwrap();
            assert!(v < prev, "q={q}");
            prev = v;
        }
    }

    #[test]
    fn ml6_table_matches_series() {
        let policy = SeriesPolicy::default();
        let params = Ml6Params::constrained(0.8, 1.2, 1.5, 1.3, 0.9, 2);
        let table = ml6_table(&params, 0.2, 2.0, &policy).unwrap();
        for &(z, t) in &[(0.17, 1.9), (0.01, 0.3), (-0.2, 1.0)] {
            let a = table.eval(z, t);
            let b = ml6(&params, z, t, &policy).unwrap();
            assert!(close(a, b, 1e-12), "z={z} t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn laplace_closed_ml4_corollary17_collapse() {
        // γ3=γ1/2, γ4=(γ1+1)/2 collapses the 3F2 to a binomial:
        // a^{-q} (4z + (a^υ-w^υ)/a^υ)^{-γ2}.
        let (g1, g2, q, ups) = (0.8, 1.7, 1.5, 2u32);
        let p = Ml4Params { g1, g2, g3: g1 / 2.0, g4: (g1 + 1.0) / 2.0, q, upsilon: ups };
        let (z, w, a) = (0.05, 1.0, 2.0);
        let v = laplace_closed_ml4(&p, z, w, a).unwrap();
        let au = a.powi(ups as i32);
        let wu = w.powi(ups as i32);
        let expect = a.powf(-q) * (4.0 * z + (au - wu) / au).powf(-g2);
        assert!(close(v, expect, 1e-12), "{v} vs {expect}");
    }

    #[test]
    fn laplace_closed_ml4_z0_anchor() {
        let p = Ml4Params { g1: 0.5, g2: 1.2, g3: 2.0, g4: 3.0, q: 1.5, upsilon: 2 };
        let (w, a) = (1.0, 2.0);
        let v = laplace_closed_ml4(&p, 0.0, w, a).unwrap();
        let expect = a.powf(-1.5) * (1.0 - w.powi(2) / a.powi(2)).powf(-1.2);
        assert!(close(v, expect, 1e-13));
    }

    #[test]
    fn laplace_closed_ik_n0_anchor() {
        // n=0 closed form must equal L{t^q/Γ(q+1)} = a^{-q-1}.
        let (q, a) = (1.5, 2.0);
        let v = laplace_closed_ik(0, 6.0, q, 2, 0.7, 1.0, a).unwrap();
        assert!(close(v, a.powf(-q - 1.0), 1e-13), "{v}");
    }

    #[test]
    fn laplace2_closed_anchors() {
        // w1=w2=0 -> 1/(a^{p+1} b^{q+1}).
        let v = laplace2_closed_ml6(0.8, 1.2, 1.5, 1.3, 0.9, 2, 0.0, 0.0, 2.0, 3.0).unwrap();
        let expect = 2.0f64.powf(-2.3) * 3.0f64.powf(-1.9);
        assert!(close(v, expect, 1e-13));
        // γ1 = 0 leaves only the w2 factor.
        let v = laplace2_closed_ml6(0.0, 1.2, 1.5, 1.3, 0.9, 2, 0.3, 1.0, 2.0, 3.0).unwrap();
        let bu = 9.0f64;
        let expect = 2.0f64.powf(-2.3) * 3.0f64.powf(-1.9) * ((bu - 1.0f64) / bu).powf(-1.2);
        assert!(close(v, expect, 1e-13));
        // modified-polynomial closed form, n = 0.
        let v = laplace2_closed_mod_poly(0, 6.0, 0.9, 2, 0.3, 1.0, 2.0, 3.0).unwrap();
        let expect = 2.0f64.powf(-7.0) * 3.0f64.powf(-1.9);
        assert!(close(v, expect, 1e-13));
    }

    #[test]
    fn domain_guards() {
        let p = Ml4Params { g1: 0.5, g2: 1.2, g3: 2.0, g4: 3.0, q: 1.5, upsilon: 2 };
        assert!(laplace_closed_ml4(&p, 0.1, 2.0, 1.0).is_err()); // |w/a| >= 1
        assert!(laplace2_closed_ml6(0.8, 1.2, 1.5, 1.3, 0.9, 1, 10.0, 0.5, 0.1, 3.0).is_err());
    }
}
