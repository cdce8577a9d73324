//! Overflow-safe signed log-domain scalars and compensated summation.
//!
//! Every polynomial and series term in this crate is assembled as a
//! [`SignedLog`] product of Gamma/Pochhammer/power factors, so parameter
//! ranges like p ~ 1e6 (used by the limit checks) never overflow. Term sets
//! are then summed by factoring out the largest log-magnitude and Kahan-
//! accumulating the rescaled terms.

/// A real number carried as `sign * exp(logmag)`.
///
/// `sign` is -1, 0 or +1; `logmag` is ignored when `sign == 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub logmag: f64,
}

pub const SL_ZERO: SignedLog = SignedLog { sign: 0, logmag: f64::NEG_INFINITY };
pub const SL_ONE: SignedLog = SignedLog { sign: 1, logmag: 0.0 };

impl SignedLog {
    pub fn new(sign: i8, logmag: f64) -> Self {
        if sign == 0 {
            SL_ZERO
        } else {
            SignedLog { sign, logmag }
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            SL_ZERO
        } else {
            SignedLog { sign: if x > 0.0 { 1 } else { -1 }, logmag: x.abs().ln() }
        }
    }

    pub fn to_real(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.logmag.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        SignedLog { sign: self.sign.abs(), logmag: self.logmag }
    }

    pub fn neg(self) -> Self {
        SignedLog { sign: -self.sign, logmag: self.logmag }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.sign == 0 || other.sign == 0 {
            SL_ZERO
        } else {
            SignedLog { sign: self.sign * other.sign, logmag: self.logmag + other.logmag }
        }
    }

    /// Division; the caller guarantees `other` is nonzero.
    pub fn div(self, other: Self) -> Self {
        debug_assert!(other.sign != 0, "SignedLog division by zero");
        if self.sign == 0 {
            SL_ZERO
        } else {
            SignedLog { sign: self.sign * other.sign, logmag: self.logmag - other.logmag }
        }
    }

    /// Integer power. `0^0 = 1` by convention.
    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return SL_ONE;
        }
        if self.sign == 0 {
            return SL_ZERO;
        }
        let sign = if k % 2 == 0 { self.sign.abs() } else { self.sign };
        SignedLog { sign, logmag: self.logmag * f64::from(k) }
    }

    /// Real power of a non-negative value.
    pub fn powf(self, e: f64) -> Self {
        if e == 0.0 {
            return SL_ONE;
        }
        if self.sign == 0 {
            return SL_ZERO;
        }
        debug_assert!(self.sign > 0, "SignedLog real power of a negative value");
        SignedLog { sign: 1, logmag: self.logmag * e }
    }
}

/// Kahan compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let y = value - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// A real number carried as `mantissa * 2^exp` with the mantissa kept inside
/// a wide safe band.
///
/// Products of many Gamma/Pochhammer/power factors stay exactly as accurate
/// as plain f64 multiplication (the power-of-two rescaling is lossless),
/// while the separate exponent removes overflow for parameters like p ~ 1e6.
/// This is the workhorse behind every terminating polynomial sum; the
/// log-domain [`SignedLog`] would cost an extra |log x|·eps per conversion,
/// which heavy cancellation amplifies past the certification tolerances.
#[derive(Clone, Copy, Debug)]
pub struct ScaledF64 {
    m: f64,
    e: i64,
}

impl ScaledF64 {
    pub const ZERO: ScaledF64 = ScaledF64 { m: 0.0, e: 0 };
    pub const ONE: ScaledF64 = ScaledF64 { m: 1.0, e: 0 };

    pub fn from_f64(x: f64) -> Self {
        ScaledF64 { m: x, e: 0 }.normalized()
    }

    /// Rescales the mantissa into a wide safe band by moving exact powers of
    /// two into the exponent.
    fn normalized(mut self) -> Self {
        const UP: f64 = 1.3407807929942597e154; // 2^512
        const DOWN: f64 = 7.458340731200207e-155; // 2^-512
        if self.m == 0.0 {
            return ScaledF64::ZERO;
        }
        while self.m.abs() >= UP {
            self.m *= DOWN;
            self.e += 512;
        }
        while self.m.abs() < DOWN {
            self.m *= UP;
            self.e -= 512;
        }
        self
    }

    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    pub fn neg(self) -> Self {
        ScaledF64 { m: -self.m, e: self.e }
    }

    pub fn mul(self, other: Self) -> Self {
        ScaledF64 { m: self.m * other.m, e: self.e + other.e }.normalized()
    }

    pub fn mul_f64(self, other: f64) -> Self {
        ScaledF64 { m: self.m * other, e: self.e }.normalized()
    }

    pub fn div(self, other: Self) -> Self {
        debug_assert!(other.m != 0.0);
        ScaledF64 { m: self.m / other.m, e: self.e - other.e }.normalized()
    }

    /// Integer power; `0^0 = 1` by convention.
    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return ScaledF64::ONE;
        }
        if self.m == 0.0 {
            return ScaledF64::ZERO;
        }
        // Exact split: m = f * 2^j with f in [1, 2); f^k <= 2^|k| stays finite
        // for |k| <= 1023.
        let bits = self.m.to_bits();
        let j = ((bits >> 52) & 0x7ff) as i64 - 1023;
        let f = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
        debug_assert!((1.0..2.0).contains(&f.abs()) || self.m.abs() < f64::MIN_POSITIVE * 2.0);
        if k.unsigned_abs() <= 1000 {
            ScaledF64 { m: f.powi(k), e: (self.e + j) * i64::from(k) }.normalized()
        } else {
            // Fall back through the log domain for extreme powers.
            let sign = if self.m < 0.0 && k % 2 != 0 { -1.0 } else { 1.0 };
            let log2v = (self.m.abs().log2() + self.e as f64) * f64::from(k);
            let e = log2v.floor() as i64;
            ScaledF64 { m: sign * (log2v - e as f64).exp2(), e }.normalized()
        }
    }

    pub fn to_f64(self) -> f64 {
        self.m * exp2_i64(self.e)
    }

    pub fn to_signed_log(self) -> SignedLog {
        if self.m == 0.0 {
            SL_ZERO
        } else {
            SignedLog {
                sign: if self.m > 0.0 { 1 } else { -1 },
                logmag: self.m.abs().ln() + self.e as f64 * std::f64::consts::LN_2,
            }
        }
    }

    pub fn from_signed_log(s: SignedLog) -> Self {
        if s.sign == 0 {
            return ScaledF64::ZERO;
        }
        let log2v = s.logmag / std::f64::consts::LN_2;
        let e = log2v.floor() as i64;
        ScaledF64 { m: f64::from(s.sign) * (log2v - e as f64).exp2(), e }.normalized()
    }
}

/// 2^k as f64, 0 on deep underflow; exact for representable k.
fn exp2_i64(k: i64) -> f64 {
    if k < -1074 {
        0.0
    } else if k > 1023 {
        f64::INFINITY
    } else {
        f64::from_bits(if k >= -1022 {
            ((k + 1023) as u64) << 52
        } else {
            1u64 << (k + 1074) as u32
        })
    }
}

/// Sums scaled terms by factoring out the largest binary exponent and
/// Kahan-accumulating the rescaled mantissas.
pub fn sum_scaled(terms: &[ScaledF64]) -> ScaledF64 {
    let mut emax = i64::MIN;
    for t in terms {
        if !t.is_zero() {
            // Fold the mantissa's own exponent in for a fair comparison.
            let adj = t.e + t.m.abs().log2().floor() as i64;
            emax = emax.max(adj);
        }
    }
    if emax == i64::MIN {
        return ScaledF64::ZERO;
    }
    let mut acc = KahanSum::new();
    for t in terms {
        if !t.is_zero() {
            acc.add(t.m * exp2_i64(t.e - emax));
        }
    }
    ScaledF64 { m: acc.value(), e: emax }.normalized()
}

/// Sums a set of signed log-domain terms.
///
/// The maximum log-magnitude is factored out before the terms are converted
/// to the linear domain and Kahan-accumulated, so the result is immune to
/// overflow as long as the *sum* itself is representable in `SignedLog`.
pub fn sum_signed_log(terms: &[SignedLog]) -> SignedLog {
    let max_log = terms
        .iter()
        .filter(|t| t.sign != 0)
        .map(|t| t.logmag)
        .fold(f64::NEG_INFINITY, f64::max);
    if max_log == f64::NEG_INFINITY {
        return SL_ZERO;
    }
    let mut acc = KahanSum::new();
    for t in terms {
        if t.sign != 0 {
            acc.add(f64::from(t.sign) * (t.logmag - max_log).exp());
        }
    }
    let s = acc.value();
    if s == 0.0 {
        return SL_ZERO;
    }
    SignedLog { sign: if s > 0.0 { 1 } else { -1 }, logmag: max_log + s.abs().ln() }
}

/// Convenience: sum signed log-domain terms and return the linear value.
pub fn sum_signed_log_to_real(terms: &[SignedLog]) -> f64 {
    sum_signed_log(terms).to_real()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_moderate_values() {
        for &x in &[1.0, -2.5, 1e-12, 3.7e8, -9.9e-7] {
            let r = SignedLog::from_real(x).to_real();
            let bound = 1e-15 * f64::max(1.0, x.abs().ln().abs());
            assert!((r - x).abs() <= bound * x.abs(), "{x} -> {r}");
        }
    }

    #[test]
    fn round_trip_extreme_range() {
        // Conditioning through the log scale costs |log x| * eps, so the
        // achievable bound widens toward the ends of the f64 range.
        let mut x = 1e-300;
        while x <= 1e300 {
            for &v in &[x, -x] {
                let r = SignedLog::from_real(v).to_real();
                let bound = 1e-15 * f64::max(1.0, v.abs().ln().abs());
                assert!(
                    (r - v).abs() <= bound * v.abs(),
                    "round trip {v} -> {r}, rel {}",
                    ((r - v) / v).abs()
                );
            }
            x *= 1e25;
        }
    }

    #[test]
    fn mul_div_sign_rules() {
        let a = SignedLog::from_real(-3.0);
        let b = SignedLog::from_real(2.0);
        assert!((a.mul(b).to_real() + 6.0).abs() < 1e-14);
        assert!((a.div(b).to_real() + 1.5).abs() < 1e-14);
        assert!(a.mul(SL_ZERO).is_zero());
    }

    #[test]
    fn zero_power_is_one() {
        assert_eq!(SL_ZERO.powi(0), SL_ONE);
        assert_eq!(SignedLog::from_real(7.0).powi(0), SL_ONE);
    }

    #[test]
    fn signed_log_sum_handles_huge_terms() {
        // 1e300 - 1e300 + 5 must come out as exactly 5.
        let terms = [
            SignedLog::from_real(1e300),
            SignedLog::from_real(-1e300),
            SignedLog::from_real(5.0),
        ];
        let s = sum_signed_log_to_real(&terms);
        assert!((s - 5.0).abs() < 1e-12, "{s}");
    }
}
