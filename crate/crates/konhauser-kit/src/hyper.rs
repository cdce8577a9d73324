//! Generalized hypergeometric series pFq and Kampé de Fériet double series.
//!
//! Terminating series are detected structurally (a non-positive integer
//! upper parameter) and summed with the exact term count; non-terminating
//! series are truncated under a [`SeriesPolicy`]. Terms are assembled in the
//! signed log domain and summed with max-factoring plus Kahan accumulation.

use crate::error::{Error, Result};
use crate::gamma::pochhammer_scaled;
use crate::num::{sum_scaled, KahanSum, ScaledF64};

/// Truncation policy for non-terminating series.
///
/// Truncation stops only after `consecutive_small` successive terms each
/// contribute less than `tail_epsilon` times the current partial sum.
#[derive(Clone, Copy, Debug)]
pub struct SeriesPolicy {
    pub tail_epsilon: f64,
    pub consecutive_small: u32,
    pub max_terms_per_index: u32,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        SeriesPolicy { tail_epsilon: 1e-16, consecutive_small: 5, max_terms_per_index: 10_000 }
    }
}

impl SeriesPolicy {
    pub fn with_tail_epsilon(eps: f64) -> Self {
        SeriesPolicy { tail_epsilon: eps, ..Default::default() }
    }
}

pub(crate) fn nonpositive_integer(x: f64) -> Option<u32> {
    if x <= 0.0 && x == x.floor() && x >= -(u32::MAX as f64) {
        Some((-x) as u32)
    } else {
        None
    }
}

/// Index of the last nonzero term when any upper parameter terminates.
fn termination_index(upper: &[f64]) -> Option<u32> {
    upper.iter().filter_map(|&a| nonpositive_integer(a)).min()
}

/// Checks that no lower parameter vanishes for term indices `1..=lmax`
/// (a Pochhammer (b)_l vanishes for some l <= lmax iff b in {0,-1,...} with
/// -b < lmax).
fn check_lower(lower: &[f64], lmax: Option<u32>) -> Result<()> {
    for &b in lower {
        if let Some(nb) = nonpositive_integer(b) {
            match lmax {
                Some(l) if nb >= l => {}
                _ => return Err(Error::InvalidLowerParameter(b)),
            }
        }
    }
    Ok(())
}

/// Generalized hypergeometric pFq(upper; lower; x).
///
/// Terminating series are summed exactly; otherwise the series is truncated
/// under `policy`. Divergent cases (p > q+1, or p = q+1 with |x| >= 1) are
/// rejected.
pub fn hyp_pfq(upper: &[f64], lower: &[f64], x: f64, policy: &SeriesPolicy) -> Result<f64> {
    let lmax = termination_index(upper);
    check_lower(lower, lmax)?;
    if lmax.is_none() && x != 0.0 {
        if upper.len() > lower.len() + 1 {
            return Err(Error::Divergence(format!(
                "{}F{} does not terminate",
                upper.len(),
                lower.len()
            )));
        }
        if upper.len() == lower.len() + 1 && x.abs() >= 1.0 {
            return Err(Error::Divergence(format!(
                "{}F{} at |x| = {} >= 1",
                upper.len(),
                lower.len(),
                x.abs()
            )));
        }
    }

    match lmax {
        Some(lmax) => {
            // Exact term count; terms built as scaled products to survive
            // huge parameters, then max-factored and Kahan-summed.
            let mut terms = Vec::with_capacity(lmax as usize + 1);
            let mut term = ScaledF64::ONE;
            terms.push(term);
            for l in 0..lmax {
                let lf = f64::from(l);
                let mut num = ScaledF64::from_f64(x);
                for &a in upper {
                    num = num.mul_f64(a + lf);
                }
                let mut den = ScaledF64::from_f64(lf + 1.0);
                for &b in lower {
                    den = den.mul_f64(b + lf);
                }
                term = term.mul(num).div(den);
                terms.push(term);
            }
            Ok(sum_scaled(&terms).to_f64())
        }
        None => {
            let mut sum = KahanSum::new();
            let mut term = 1.0f64;
            sum.add(term);
            let mut small_run = 0u32;
            for l in 0..policy.max_terms_per_index {
                let lf = f64::from(l);
                let mut ratio = x / (lf + 1.0);
                for &a in upper {
                    ratio *= a + lf;
                }
                for &b in lower {
                    ratio /= b + lf;
                }
                term *= ratio;
                if !term.is_finite() {
                    return Err(Error::Divergence("series term overflow".into()));
                }
                sum.add(term);
                if term.abs() < policy.tail_epsilon * sum.value().abs().max(f64::MIN_POSITIVE) {
                    small_run += 1;
                    if small_run >= policy.consecutive_small {
                        return Ok(sum.value());
                    }
                } else {
                    small_run = 0;
                }
            }
            Err(Error::Divergence("series failed to converge within max_terms".into()))
        }
    }
}

/// Kampé de Fériet double hypergeometric series
/// F^{A:B;C}_{D:E;G}(x, y) = Σ_{l,m} Π(a)_{l+m} Π(b)_m Π(c)_l x^l y^m /
/// (Π(d)_{l+m} Π(e)_m Π(g)_l l! m!),
/// with `x` carrying the l index and `y` the m index.
#[allow(clippy::too_many_arguments)]
pub fn kampe_de_feriet(
    a: &[f64],
    b: &[f64],
    c: &[f64],
    d: &[f64],
    e: &[f64],
    g: &[f64],
    x: f64,
    y: f64,
    policy: &SeriesPolicy,
) -> Result<f64> {
    // Termination bounds per index.
    let lmax_struct: Option<u32> = [a, c]
        .iter()
        .flat_map(|list| list.iter().filter_map(|&v| nonpositive_integer(v)))
        .min();
    let mmax_struct: Option<u32> = [a, b]
        .iter()
        .flat_map(|list| list.iter().filter_map(|&v| nonpositive_integer(v)))
        .min();
    if lmax_struct.is_none() || mmax_struct.is_none() {
        // The polynomial representations used in this crate always terminate
        // in both indices; general convergence control is delegated to the
        // policy with a hard cap.
        if x.abs() >= 1.0 && lmax_struct.is_none() {
            return Err(Error::Divergence("Kampe de Feriet x index does not terminate".into()));
        }
    }
    check_lower(g, lmax_struct)?;
    check_lower(e, mmax_struct)?;
    // Coupled lowers (d)_{l+m}: the worst live index is lmax+mmax.
    let coupled_max = match (lmax_struct, mmax_struct) {
        (Some(l), Some(m)) => Some(l + m),
        _ => None,
    };
    check_lower(d, coupled_max)?;

    let lmax = lmax_struct.unwrap_or(policy.max_terms_per_index);
    // All terms are collected as scaled values and summed once with
    // max-factoring + Kahan, so alternating cancellation inside either index
    // is absorbed by a single compensated pass.
    let mut terms: Vec<ScaledF64> = Vec::new();
    let mut small_rows = 0u32;
    let mut running_max = 0.0f64;
    let xl = ScaledF64::from_f64(x);
    let yl = ScaledF64::from_f64(y);
    for l in 0..=lmax {
        // Leading factor of row l: Π(a)_l Π(c)_l x^l / (Π(d)_l Π(g)_l l!).
        let mut lead = xl.powi(l as i32);
        for &ai in a {
            lead = lead.mul(pochhammer_scaled(ai, l));
        }
        for &ci in c {
            lead = lead.mul(pochhammer_scaled(ci, l));
        }
        if lead.is_zero() {
            // Structurally dead row (numerator vanished): nothing below it
            // can revive, given lmax came from the same parameter lists.
            continue;
        }
        for &di in d {
            lead = lead.div(pochhammer_scaled(di, l));
        }
        for &gi in g {
            lead = lead.div(pochhammer_scaled(gi, l));
        }
        lead = lead.div(crate::gamma::factorial_scaled(l));

        // Inner m terms. Coupled uppers (a)_{l+m} terminate the inner sum at
        // m = -(a+l); plain uppers (b)_m at -b.
        let mmax = a
            .iter()
            .filter_map(|&ai| nonpositive_integer(ai + f64::from(l)))
            .chain(b.iter().filter_map(|&bi| nonpositive_integer(bi)))
            .min()
            .unwrap_or(policy.max_terms_per_index);
        let mut term = lead;
        terms.push(term);
        let mut row_max = term.to_f64().abs();
        let mut small_run = 0u32;
        for m in 0..mmax {
            let mf = f64::from(m);
            let lf = f64::from(l);
            let mut num = yl;
            let mut den = ScaledF64::from_f64(mf + 1.0);
            for &ai in a {
                num = num.mul_f64(ai + lf + mf);
            }
            for &bi in b {
                num = num.mul_f64(bi + mf);
            }
            for &di in d {
                den = den.mul_f64(di + lf + mf);
            }
            for &ei in e {
                den = den.mul_f64(ei + mf);
            }
            term = term.mul(num).div(den);
            if term.is_zero() {
                break;
            }
            terms.push(term);
            let mag = term.to_f64().abs();
            if !mag.is_finite() {
                return Err(Error::Divergence("double series overflow".into()));
            }
            row_max = row_max.max(mag);
            if mag < row_max * policy.tail_epsilon {
                small_run += 1;
                if small_run >= policy.consecutive_small {
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        // Policy-based outer termination for non-structural cases.
        if lmax_struct.is_none() {
            running_max = running_max.max(row_max);
            if row_max < running_max * policy.tail_epsilon {
                small_rows += 1;
                if small_rows >= policy.consecutive_small {
                    break;
                }
            } else {
                small_rows = 0;
            }
        }
    }
    Ok(sum_scaled(&terms).to_f64())
}
