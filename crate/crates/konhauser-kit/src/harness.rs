//! Identity catalog, verification engine, and report generation.
//!
//! Every in-scope identity is a named, parameterized check that produces a
//! machine-readable pass/fail record. Failures are reported, never thrown:
//! the suite always yields the full matrix of outcomes.

use crate::calculus::{
    self, biorthogonality_cell, biorthogonality_diag, convolution_equation_check,
    dit_product_identity, finite_i_cell, konhauser_cell, konhauser_diag, left_inverse_check,
    op_e_apply, op_e_norm_const, op_e_termwise_power, rl_frac_integral, rl_frac_integral_2d,
    semigroup_check, FracOrder, OperatorSpec,
};
use crate::error::{Error, Result};
use crate::gamma::{gamma, gamma_reciprocal};
use crate::hyper::{hyp_pfq, kampe_de_feriet, SeriesPolicy};
use crate::ml::{
    laplace2_closed_ml6, laplace2_closed_mod_poly, laplace_closed_ik, laplace_closed_ml4,
    laplace_closed_ml6_1d, ml4, ml6, poly_from_ml4, poly_mod_from_ml6, prabhakar, Ml4Params,
    Ml6Params,
};
use crate::poly::{
    finite_i, hermite, hk_dual, hk_poly, ik_dual, ik_dual_table, ik_mod, ik_mod_via_kdf, ik_poly,
    ik_poly_table, ik_poly_via_kdf, ik_poly_via_z, konhauser_y, konhauser_z, PolyParams,
};
use crate::quad::QuadratureConfig;
use crate::transforms::{
    fourier2_numeric, fourier_closed_d, fourier_closed_f, laplace2_numeric, laplace_numeric,
    parseval_check, upsilon1, upsilon2, upsilon_biortho_rhs, FourierParams,
};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

pub type Params = BTreeMap<String, f64>;

/// Check category; Extended checks are excluded from the default suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Exact,
    Quadrature,
    Limit,
    Extended,
}

impl CheckKind {
    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckKind::Exact => 1e-12,
            CheckKind::Quadrature => 1e-6,
            CheckKind::Limit => f64::INFINITY, // monotone-decrease assertion
            CheckKind::Extended => 5e-3,
        }
    }
}

/// A named, parameterized identity check.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub id: String,
    pub params: Params,
    pub tolerance: f64,
    pub kind: CheckKind,
}

/// Real or complex report value.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl Value {
    fn magnitude(self) -> f64 {
        match self {
            Value::Real(x) => x.abs(),
            Value::Complex { re, im } => re.hypot(im),
        }
    }

    fn dist(self, other: Value) -> f64 {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => (a - b).abs(),
            (a, b) => {
                let (ar, ai) = a.parts();
                let (br, bi) = b.parts();
                (ar - br).hypot(ai - bi)
            }
        }
    }

    fn parts(self) -> (f64, f64) {
        match self {
            Value::Real(x) => (x, 0.0),
            Value::Complex { re, im } => (re, im),
        }
    }
}

/// One verification record.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub params: Params,
    pub lhs: Value,
    pub rhs: Value,
    pub abs_err: f64,
    pub rel_err: f64,
    pub passed: bool,
    pub runtime_ms: u64,
    pub notes: String,
}

/// Raw result a runner hands back before the pass rule is applied.
pub struct Outcome {
    pub lhs: Value,
    pub rhs: Value,
    /// Problem scale for near-zero comparisons (abs floor = 1e-10 * scale).
    pub scale: f64,
    pub notes: String,
    /// Set by runners whose pass criterion is not the lhs/rhs comparison
    /// (limit monotonicity, bound checks).
    pub passed_override: Option<bool>,
}

impl Outcome {
    fn real(lhs: f64, rhs: f64) -> Self {
        Outcome { lhs: Value::Real(lhs), rhs: Value::Real(rhs), scale: 1.0, notes: String::new(), passed_override: None }
    }

    fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    /// Replaces the pass rule entirely.
    fn then_pass(mut self, pass: bool) -> Self {
        self.passed_override = Some(pass);
        self
    }

    /// Keeps the lhs/rhs comparison but additionally requires `cond`.
    fn then_pass_and(mut self, cond: bool) -> Self {
        if !cond {
            self.passed_override = Some(false);
        }
        self
    }
}

type Runner = fn(&Params) -> Result<Outcome>;

/// A registered check instance.
pub struct CheckInstance {
    pub id: String,
    pub family: &'static str,
    pub kind: CheckKind,
    pub tolerance: f64,
    pub params: Params,
    runner: Runner,
}

fn pget(params: &Params, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn pgetu(params: &Params, key: &str, default: u32) -> u32 {
    params.get(key).map(|&v| v as u32).unwrap_or(default)
}

fn params_from(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn cfg_from(params: &Params) -> QuadratureConfig {
    QuadratureConfig {
        rel_tol: pget(params, "quad_rel_tol", 1e-10),
        abs_tol: pget(params, "quad_abs_tol", 1e-14),
        max_level: pgetu(params, "quad_max_level", 12),
    }
}

/// Tracks the worst-relative-error pair over a verification grid.
struct Worst {
    lhs: f64,
    rhs: f64,
    err: f64,
    count: usize,
}

impl Worst {
    fn new() -> Self {
        Worst { lhs: 0.0, rhs: 0.0, err: -1.0, count: 0 }
    }

    fn update(&mut self, lhs: f64, rhs: f64, scale: f64) {
        let err = if lhs.is_finite() && rhs.is_finite() {
            (lhs - rhs).abs() / rhs.abs().max(scale.abs()).max(f64::MIN_POSITIVE)
        } else {
            f64::INFINITY
        };
        self.count += 1;
        if err > self.err {
            self.err = err;
            self.lhs = lhs;
            self.rhs = rhs;
        }
    }

    fn outcome(self, scale: f64) -> Outcome {
        Outcome::real(self.lhs, self.rhs)
            .with_scale(scale)
            .with_notes(format!("worst of {} grid points", self.count))
    }
}

// ===========================================================================
// Runners
// ===========================================================================

fn run_zdef_laguerre(_p: &Params) -> Result<Outcome> {
    // υ = 1 Konhauser Z equals the classical Laguerre polynomial computed by
    // its own three-term recurrence.
    let mut w = Worst::new();
    for &g in &[0.0, 0.5, 2.0] {
        for &t in &[0.0, 0.3, 1.5, 4.0] {
            let mut l0 = 1.0;
            let mut l1 = 1.0 + g - t;
            for n in 0..=8u32 {
                let oracle = if n == 0 { l0 } else { l1 };
                let v = konhauser_z(n, g, 1, t)?;
                w.update(v, oracle, 1.0);
                if n >= 1 {
                    let k = f64::from(n);
                    let l2 = ((2.0 * k + 1.0 + g - t) * l1 - (k + g) * l0) / (k + 1.0);
                    l0 = l1;
                    l1 = l2;
                }
            }
        }
    }
    Ok(w.outcome(1.0))
}

fn run_ydef_closed(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for &g in &[0.0, 0.5, 2.0] {
        for ups in [1u32, 2, 3] {
            for &t in &[0.0, 0.7, 2.0] {
                let v = konhauser_y(1, g, ups, t)?;
                w.update(v, (1.0 + g - t) / f64::from(ups), 1.0);
            }
        }
    }
    Ok(w.outcome(1.0))
}

fn run_konh3_matrix(p: &Params) -> Result<Outcome> {
    let gamma = pget(p, "gamma", 0.0);
    let ups = pgetu(p, "upsilon", 1);
    let nmax = pgetu(p, "nmax", 4);
    let mut max_diag: f64 = 0.0;
    for n in 0..=nmax {
        max_diag = max_diag.max(konhauser_diag(n, gamma, ups)?.abs());
    }
    // Off-diagonal cells integrate large cancelling integrands to ~0, so the
    // quadrature's absolute floor scales with the matrix.
    let base = cfg_from(p);
    let cfg = QuadratureConfig { abs_tol: base.abs_tol.max(1e-11 * max_diag), ..base };
    let mut worst_diag = (0.0, 1.0, -1.0f64);
    let mut max_off: f64 = 0.0;
    for n in 0..=nmax {
        let d = konhauser_diag(n, gamma, ups)?;
        for r in 0..=nmax {
            let v = konhauser_cell(n, r, gamma, ups, &cfg)?;
            if n == r {
                let err = (v - d).abs() / d.abs();
                if err > worst_diag.2 {
                    worst_diag = (v, d, err);
                }
            } else {
                max_off = max_off.max(v.abs());
            }
        }
    }
    let pass = worst_diag.2 <= 1e-6 && max_off <= 1e-8 * max_diag;
    Ok(Outcome::real(worst_diag.0, worst_diag.1)
        .with_scale(max_diag)
        .with_notes(format!(
            "worst diagonal rel {:.2e}; max |offdiag| {:.2e} vs 1e-8*maxdiag {:.2e}",
            worst_diag.2,
            max_off,
            1e-8 * max_diag
        ))
        .then_pass(pass))
}

fn run_iort_matrix(p: &Params) -> Result<Outcome> {
    let pp = pget(p, "p", 10.0);
    let nmax = pgetu(p, "nmax", 4);
    let mut max_diag: f64 = 0.0;
    for n in 0..=nmax {
        max_diag = max_diag.max(biorthogonality_diag(n, pp)?.abs());
    }
    let base = cfg_from(p);
    let cfg = QuadratureConfig { abs_tol: base.abs_tol.max(1e-11 * max_diag), ..base };
    let mut worst_diag = (0.0, 1.0, -1.0f64);
    let mut max_off: f64 = 0.0;
    for n in 0..=nmax {
        let d = biorthogonality_diag(n, pp)?;
        for r in 0..=nmax {
            let v = finite_i_cell(n, r, pp, &cfg)?;
            if n == r {
                let err = (v - d).abs() / d.abs();
                if err > worst_diag.2 {
                    worst_diag = (v, d, err);
                }
            } else {
                max_off = max_off.max(v.abs());
            }
        }
    }
    let pass = worst_diag.2 <= 1e-6 && max_off <= 1e-8 * max_diag;
    Ok(Outcome::real(worst_diag.0, worst_diag.1)
        .with_scale(max_diag)
        .with_notes(format!(
            "worst diagonal rel {:.2e}; max |offdiag| {:.2e}",
            worst_diag.2, max_off
        ))
        .then_pass(pass))
}

fn run_idef_values(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for &pp in &[5.0, 10.0] {
        for &t in &[-1.5, 0.4, 1.0, 2.0] {
            w.update(finite_i(1, pp, t), 2.0 * (pp - 1.0) * t, 1.0);
            w.update(
                finite_i(2, pp, t),
                4.0 * (pp - 1.0) * (pp - 2.0) * t * t - 2.0 * (pp - 1.0),
                1.0,
            );
        }
    }
    Ok(w.outcome(1.0))
}

fn run_ikdef_closed_n1(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for &(pp, q, ups) in &[(9.0, 0.5, 2u32), (5.0, 0.0, 1), (12.0, 2.0, 3)] {
        for &(z, t) in &[(1.3, 0.8), (-0.7, 2.0), (2.0, 0.0)] {
            let params = PolyParams::new(1, pp, q, ups);
            let v = ik_poly(&params, z, t)?;
            let expect = 2.0 * z
                * (pp - 1.0)
                * (gamma_reciprocal(q + 1.0)
                    - t.powi(ups as i32) * gamma_reciprocal(q + f64::from(ups) + 1.0));
            w.update(v, expect, 1.0);
        }
    }
    Ok(w.outcome(1.0))
}

fn run_remark5(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for n in 0..=6u32 {
        for &pp in &[8.0, 9.5] {
            for &z in &[-1.2, 0.0, 0.7, 2.0] {
                let params = PolyParams::new(n, pp, 0.0, 1);
                w.update(ik_poly(&params, z, 0.0)?, finite_i(n, pp, z), 1.0);
            }
        }
    }
    Ok(w.outcome(1.0))
}

fn rep_grid() -> Vec<(u32, f64, u32, f64, f64)> {
    let mut out = Vec::new();
    for n in 0..=6u32 {
        for &q in &[0.0, 0.5, 2.0] {
            for ups in [1u32, 2, 3] {
                for &z in &[-2.0, -0.5, 1.0, 3.0] {
                    for &t in &[0.0, 0.5, 1.0, 4.0] {
                        out.push((n, q, ups, z, t));
                    }
                }
            }
        }
    }
    out
}

fn run_izrel(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for (n, q, ups, z, t) in rep_grid() {
        let params = PolyParams::new(n, 10.0, q, ups);
        w.update(ik_poly_via_z(&params, z, t)?, ik_poly(&params, z, t)?, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_thm8(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for (n, q, ups, z, t) in rep_grid() {
        if z == 0.0 {
            continue;
        }
        let params = PolyParams::new(n, 10.0, q, ups);
        w.update(ik_poly_via_kdf(&params, z, t)?, ik_poly(&params, z, t)?, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_kdf_degenerate(_p: &Params) -> Result<Outcome> {
    // Empty y-coupling with y = 0 equals pFq on the x lists.
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(a, c, g, x) in &[(-4.0, 0.7, 1.9, 0.6), (-3.0, 1.4, 0.8, -1.2), (-5.0, 0.3, 2.5, 2.0)] {
        let v = kampe_de_feriet(&[a], &[], &[c], &[], &[], &[g], x, 0.0, &policy)?;
        let o = hyp_pfq(&[a, c], &[g], x, &policy)?;
        w.update(v, o, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_qdef(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for n in 0..=4u32 {
        for &(pp, q, ups) in &[(10.0, 0.5, 2u32), (7.0, 0.0, 1)] {
            for &(z, t) in &[(1.0, 1.0), (-0.8, 0.4)] {
                let params = PolyParams::new(n, pp, q, ups);
                let v = ik_dual(&params, z, t)?;
                let mut s = 0.0;
                for j in 0..=n {
                    s += konhauser_y(j, q, ups, t)?;
                }
                w.update(v, finite_i(n, pp, z) * s, 1.0);
            }
        }
    }
    Ok(w.outcome(1.0))
}

fn run_cor6_offdiag(p: &Params) -> Result<Outcome> {
    let (pp, q, ups) = (10.0, 0.0, 1u32);
    let scale = biorthogonality_diag(0, pp)?.abs().max(biorthogonality_diag(2, pp)?.abs());
    let base = cfg_from(p);
    let cfg = QuadratureConfig { abs_tol: base.abs_tol.max(1e-11 * scale), ..base };
    let mut worst: f64 = 0.0;
    for (n, r) in [(0u32, 1u32), (1, 2), (0, 2)] {
        let v = biorthogonality_cell(n, r, pp, q, ups, &cfg)?;
        worst = worst.max(v.abs());
    }
    Ok(Outcome::real(worst, 0.0)
        .with_scale(scale)
        .with_notes("max |J(n,r)|, n != r, at (p,q,ups) = (10,0,1)"))
}

fn run_thm3_matrix(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let (pp, q, ups) = (10.0, 0.0, 1u32);
    let mut w = Worst::new();
    for n in 0..=2u32 {
        let d = biorthogonality_diag(n, pp)?;
        let v = biorthogonality_cell(n, n, pp, q, ups, &cfg)?;
        w.update(v, d, 1.0);
    }
    Ok(w.outcome(1.0).with_notes("diagonal cells at the second parameter set (p=10, q=0, ups=1)"))
}

fn run_ikort_cell(p: &Params) -> Result<Outcome> {
    let n = pgetu(p, "n", 0);
    let r = pgetu(p, "r", 0);
    let pp = pget(p, "p", 10.0);
    let q = pget(p, "q", 0.5);
    let ups = pgetu(p, "upsilon", 2);
    let nmax = pgetu(p, "nmax", 4);
    let mut scale: f64 = 0.0;
    for k in 0..=nmax {
        scale = scale.max(biorthogonality_diag(k, pp)?.abs());
    }
    let base = cfg_from(p);
    let cfg = QuadratureConfig { abs_tol: base.abs_tol.max(1e-11 * scale), ..base };
    let v = biorthogonality_cell(n, r, pp, q, ups, &cfg)?;
    let rhs = if n == r { biorthogonality_diag(n, pp)? } else { 0.0 };
    Ok(Outcome::real(v, rhs).with_scale(scale))
}

fn run_ik_anchor(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let v = biorthogonality_cell(0, 0, pget(p, "p", 3.0), pget(p, "q", 1.0), 1, &cfg)?;
    Ok(Outcome::real(v, 4.0 / 3.0).with_notes("analytic anchor sqrt(pi) G(p-1)/G(p-1/2) at p=3"))
}

fn run_edef_anchor(_p: &Params) -> Result<Outcome> {
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &q in &[0.7, 1.5, 3.0] {
        let params = Ml4Params { g1: 0.7, g2: 1.3, g3: 2.0, g4: 3.0, q, upsilon: 2 };
        w.update(ml4(&params, 0.0, 0.0, &policy)?, gamma_reciprocal(q), 1.0);
    }
    // Prabhakar reduction of the four-parameter series: e.
    let pe = Ml4Params { g1: 0.0, g2: 1.0, g3: 0.0, g4: 0.0, q: 1.0, upsilon: 1 };
    w.update(ml4(&pe, 0.0, 1.0, &policy)?, std::f64::consts::E, 1.0);
    Ok(w.outcome(1.0))
}

fn run_remark10(_p: &Params) -> Result<Outcome> {
    let base = SeriesPolicy::default();
    let doubled = SeriesPolicy { max_terms_per_index: base.max_terms_per_index * 2, ..base };
    let params = Ml4Params { g1: 0.7, g2: 1.3, g3: 2.0, g4: 3.0, q: 1.5, upsilon: 2 };
    let mut w = Worst::new();
    for &(z, t) in &[(0.2, 5.0), (-0.2, 3.0), (0.1, 1.0), (0.24, 2.0)] {
        w.update(ml4(&params, z, t, &base)?, ml4(&params, z, t, &doubled)?, 1e-3);
    }
    // The guard outside |z| < 1/4 must reject.
    let guarded = matches!(ml4(&params, 0.3, 1.0, &base), Err(Error::ConvergenceDomain(_)));
    let out = w.outcome(1e-3).with_notes(format!("convergence guard raises outside |z|<1/4: {guarded}"));
    Ok(out.then_pass_and(guarded))
}

fn run_prabhakar(_p: &Params) -> Result<Outcome> {
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    w.update(prabhakar(1.0, 1.0, 1.0, 1.0, &policy)?, std::f64::consts::E, 1.0);
    let x = std::f64::consts::PI / 3.0;
    w.update(prabhakar(1.0, 2.0, 1.0, -x * x, &policy)?, 0.5, 1.0);
    w.update(prabhakar(1.3, 0.9, 1.5, 0.0, &policy)?, gamma_reciprocal(1.5), 1.0);
    Ok(w.outcome(1.0))
}

fn run_ierel(_p: &Params) -> Result<Outcome> {
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for n in 0..=5u32 {
        for &(q, ups) in &[(0.5, 2u32), (0.0, 1), (2.0, 3)] {
            for &(z, t) in &[(1.1, 0.7), (-0.8, 1.5), (2.0, 0.0)] {
                let params = PolyParams::new(n, 9.0, q, ups);
                let a = poly_from_ml4(n, 9.0, q, ups, z, t, &policy)?;
                let b = ik_poly(&params, z, t)?;
                w.update(a, b, 1.0);
            }
        }
    }
    Ok(w.outcome(1.0))
}

fn run_laplace_def(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let mut w = Worst::new();
    let a = 2.0;
    w.update(laplace_numeric(|_| 1.0, a, &cfg)?, 1.0 / a, 1.0);
    let q = 1.7;
    w.update(laplace_numeric(|t| t.powf(q - 1.0), 1.3, &cfg)?, gamma(q)? / 1.3f64.powf(q), 1.0);
    Ok(w.outcome(1.0))
}

fn run_elap(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(g1, g2, g3, g4, q, ups, z, wv, a) in &[
        (0.5, 1.2, 2.0, 3.0, 1.5, 2u32, 0.1, 1.0, 2.0),
        (0.8, 0.9, 1.5, 2.5, 0.8, 1, -0.15, 0.5, 1.5),
        (1.4, 2.0, 2.2, 3.1, 2.0, 2, 0.2, 1.2, 2.5),
    ] {
        let params = Ml4Params { g1, g2, g3, g4, q, upsilon: ups };
        let closed = laplace_closed_ml4(&params, z, wv, a)?;
        let quad = laplace_numeric(
            |t| {
                if t == 0.0 {
                    return 0.0;
                }
                t.powf(q - 1.0) * ml4(&params, z, wv * t, &policy).unwrap_or(f64::NAN)
            },
            a,
            &cfg,
        )?;
        w.update(closed, quad, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_elap_cor17(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let (g1, g2, q, ups) = (0.8, 1.7, 1.5, 2u32);
    let params = Ml4Params { g1, g2, g3: g1 / 2.0, g4: (g1 + 1.0) / 2.0, q, upsilon: ups };
    let (z, wv, a): (f64, f64, f64) = (0.05, 1.0, 2.0);
    let au = a.powi(ups as i32);
    let wu: f64 = wv.powi(ups as i32);
    let mut w = Worst::new();
    // The collapsed binomial closed form ...
    let collapsed = a.powf(-q) * (4.0 * z + (au - wu) / au).powf(-g2);
    w.update(laplace_closed_ml4(&params, z, wv, a)?, collapsed, 1.0);
    // ... and the transform itself against quadrature.
    let quad = laplace_numeric(
        |t| {
            if t == 0.0 {
                return 0.0;
            }
            t.powf(q - 1.0) * ml4(&params, z, wv * t, &policy).unwrap_or(f64::NAN)
        },
        a,
        &cfg,
    )?;
    w.update(collapsed, quad, 1.0);
    Ok(w.outcome(1.0))
}

fn run_elap_cor_ik(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let mut w = Worst::new();
    for &(n, pp, q, ups, z, wv, a) in
        &[(0u32, 6.0, 1.5, 2u32, 0.7, 1.0, 2.0), (2, 8.0, 0.8, 2, 1.2, 1.0, 2.0), (3, 7.0, 1.2, 1, -0.9, 0.4, 1.6)]
    {
        let closed = laplace_closed_ik(n, pp, q, ups, z, wv, a)?;
        let params = PolyParams::new(n, pp, q, ups);
        let table = ik_poly_table(&params)?;
        let quad = laplace_numeric(
            |t| {
                if t == 0.0 && q <= 0.0 {
                    return 0.0;
                }
                t.powf(q) * table.eval(z, wv * t)
            },
            a,
            &cfg,
        )?;
        w.update(closed, quad, 1.0);
    }
    // w = 0 reduction: L{t^q IK(z, 0·t)} = Γ(q+1)/a^{q+1} IK(z, 0).
    let params = PolyParams::new(2, 8.0, 0.8, 2);
    let closed = laplace_closed_ik(2, 8.0, 0.8, 2, 1.2, 0.0, 2.0)?;
    let direct = gamma(1.8)? / 2.0f64.powf(1.8) * ik_poly(&params, 1.2, 0.0)?;
    w.update(closed, direct, 1.0);
    Ok(w.outcome(1.0))
}

fn run_rl_powerrule(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let mut w = Worst::new();
    for &(q, tau, b, t) in &[(1.7, 0.6, 0.5, 2.1), (0.6, 1.4, 0.0, 1.0), (2.5, 0.3, -1.0, 0.7)] {
        let v = rl_frac_integral(|s| s.powf(q - 1.0) * gamma_reciprocal(q), tau, b, t, &cfg)?;
        let expect = (t - b).powf(q + tau - 1.0) * gamma_reciprocal(q + tau);
        w.update(v, expect, 1.0);
    }
    // τ = 1 equals the plain integral.
    let v = rl_frac_integral(|s| s.cos(), 1.0, 0.0, 1.3, &cfg)?;
    w.update(v, 1.3f64.sin(), 1.0);
    Ok(w.outcome(1.0))
}

fn run_rl_semigroup(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let (q, sig, tau, t) = (0.8, 0.6, 0.9, 1.4);
    let composed = rl_frac_integral(
        |s| rl_frac_integral(|y| y.powf(q - 1.0), tau, 0.0, s, &cfg).unwrap_or(f64::NAN),
        sig,
        0.0,
        t,
        &cfg,
    )?;
    let direct = rl_frac_integral(|y| y.powf(q - 1.0), sig + tau, 0.0, t, &cfg)?;
    Ok(Outcome::real(composed, direct))
}

/// Randomized admissible parameter points, deterministic across runs.
fn admissible_points(seed: u64, count: usize) -> Vec<(f64, f64, f64, f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g1 = rng.gen_range(0.3..1.5);
            let g2 = rng.gen_range(0.5..2.0);
            let q = rng.gen_range(0.6..2.5);
            let tau = rng.gen_range(0.3..1.2);
            let z = rng.gen_range(-0.2..0.2);
            let wv = rng.gen_range(0.3..1.2);
            (g1, g2, q, tau, z, wv)
        })
        .collect()
}

fn run_efracint(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for (g1, g2, q, tau, z, wv) in admissible_points(11, 5) {
        let params = Ml4Params { g1, g2, g3: g1 + 0.9, g4: g2 + 1.1, q, upsilon: 2 };
        let shifted = Ml4Params { q: q + tau, ..params };
        let (b, t) = (0.3, 1.6);
        let span = t - b;
        let lhs = rl_frac_integral(
            |s| {
                if s == 0.0 {
                    return 0.0;
                }
                s.powf(q - 1.0) * ml4(&params, z, wv * s, &policy).unwrap_or(f64::NAN)
            },
            tau,
            b,
            t,
            &cfg,
        )?;
        let rhs = span.powf(q + tau - 1.0) * ml4(&shifted, z, wv * span, &policy)?;
        w.update(lhs, rhs, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_efracint_poly(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let mut w = Worst::new();
    for &(n, pp, q, ups, tau, z, wv) in
        &[(2u32, 8.0, 0.8, 2u32, 0.7, 1.1, 0.9), (1, 6.0, 1.5, 1, 1.3, -0.6, 0.5), (3, 9.0, 0.5, 2, 0.4, 0.8, 1.0)]
    {
        let params = PolyParams::new(n, pp, q, ups);
        let shifted = PolyParams::new(n, pp, q + tau, ups);
        let table = ik_poly_table(&params)?;
        let (b, t) = (0.0, 1.4);
        let lhs = rl_frac_integral(|s| s.powf(q) * table.eval(z, wv * s), tau, b, t, &cfg)?;
        let rhs = (t - b).powf(q + tau) * ik_poly(&shifted, z, wv * (t - b))?;
        w.update(lhs, rhs, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_efracder(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut worst = 0.0f64;
    let mut worst_pair = (0.0, 0.0);
    for (g1, g2, q, tau, z, wv) in admissible_points(13, 3) {
        let q = q + 1.0; // keep q - τ > 0
        let params = Ml4Params { g1, g2, g3: g1 + 0.9, g4: g2 + 1.1, q, upsilon: 2 };
        let derived = Ml4Params { q: q - tau, ..params };
        let (b, t) = (0.2, 1.5);
        let orig =
            |s: f64| s.powf(q - 1.0) * ml4(&params, z, wv * s, &policy).unwrap_or(f64::NAN);
        let claimed =
            |s: f64| s.powf(q - tau - 1.0) * ml4(&derived, z, wv * s, &policy).unwrap_or(f64::NAN);
        let residual = calculus::rl_frac_derivative_check(claimed, orig, tau, b, t, &cfg)?;
        let scale = orig(t - b).abs().max(1e-30);
        if residual / scale > worst {
            worst = residual / scale;
            worst_pair = (residual, scale);
        }
    }
    Ok(Outcome::real(worst_pair.0, 0.0)
        .with_scale(worst_pair.1)
        .with_notes(format!("max inverse-route residual/scale {worst:.2e} over 3 points")))
}

fn run_efracder_poly(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let mut worst = 0.0f64;
    for &(n, pp, q, ups, tau) in &[(2u32, 8.0, 2.5, 2u32, 0.7), (1, 6.0, 1.8, 1, 0.9), (3, 9.0, 2.2, 2, 0.5)] {
        let (z, wv, b, t) = (0.9, 1.0, 0.2, 1.5);
        let params = PolyParams::new(n, pp, q, ups);
        let derived = PolyParams::new(n, pp, q - tau, ups);
        let torig = ik_poly_table(&params)?;
        let tder = ik_poly_table(&derived)?;
        let orig = |s: f64| s.powf(q) * torig.eval(z, wv * s);
        let claimed = |s: f64| s.powf(q - tau) * tder.eval(z, wv * s);
        let residual = calculus::rl_frac_derivative_check(claimed, orig, tau, b, t, &cfg)?;
        let scale = orig(t - b).abs().max(1e-30);
        worst = worst.max(residual / scale);
    }
    Ok(Outcome::real(worst, 0.0).with_scale(1.0).with_notes("max residual/scale over 3 points"))
}

fn run_fourier_def(p: &Params) -> Result<Outcome> {
    let cfg = QuadratureConfig { rel_tol: 1e-9, ..cfg_from(p) };
    let v = fourier2_numeric(|z, t| (-z * z - t * t).exp(), 1.0, 1.0, &cfg)?;
    let expect = std::f64::consts::PI * (-0.5f64).exp();
    Ok(Outcome { lhs: Value::Complex { re: v.re, im: v.im }, rhs: Value::Real(expect), scale: 1.0, notes: "Gaussian pair".into(), passed_override: None })
}

fn run_parseval_1d(p: &Params) -> Result<Outcome> {
    // 1-D Parseval on a Gaussian pair: ∫ f g = (2π)^{-1} ∫ F(f) conj(F(g)).
    let cfg = QuadratureConfig { rel_tol: 1e-9, ..cfg_from(p) };
    let f = |z: f64| (-(z - 0.2) * (z - 0.2)).exp();
    let g = |z: f64| (-0.5 * z * z).exp();
    let lhs = crate::quad::tanh_sinh_fn(|z| f(z) * g(z), -12.0, 12.0, &cfg)?;
    let ff = |xi: f64| {
        // F(e^{-(z-m)^2})(ξ) = √π e^{-ξ²/4} e^{-i m ξ}
        Complex64::from_polar(
            std::f64::consts::PI.sqrt() * (-xi * xi / 4.0).exp(),
            -0.2 * xi,
        )
    };
    let fg = |xi: f64| {
        Complex64::new((2.0 * std::f64::consts::PI).sqrt() * (-xi * xi / 2.0).exp(), 0.0)
    };
    let rhs = crate::quad::tanh_sinh_complex(|xi| ff(xi) * fg(xi).conj(), -20.0, 20.0, &cfg)?
        / (2.0 * std::f64::consts::PI);
    Ok(Outcome::real(lhs, rhs.re).with_notes("Gaussian pair, closed transforms"))
}

fn fourier_d_function(
    fp: &FourierParams,
    p: f64,
    q: f64,
) -> Result<impl Fn(f64, f64) -> f64> {
    let params = PolyParams::new(fp.n, p, q, fp.upsilon);
    let table = ik_poly_table(&params)?;
    let (a, b) = (fp.a, fp.b);
    Ok(move |z: f64, t: f64| {
        if t > 15.0 {
            return 0.0;
        }
        let y = t.exp();
        (a * t - 0.5 * y).exp() * (1.0 + z * z).powf(-(b - 0.25)) * table.eval(z, y)
    })
}

/// ∫ z^e (1+z²)^{-(bw-1/4)} e^{-i ξ1 z} dz by shell quadrature.
fn fourier_line_z(e: i32, bw: f64, xi1: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    crate::quad::integrate_realline_shells(
        |z| {
            Complex64::from_polar(1.0, -xi1 * z)
                * z.powi(e)
                * (1.0 + z * z).powf(-(bw - 0.25))
        },
        cfg,
    )
}

/// ∫ e^{k t - e^t/2 - i ξ2 t} dt by shell quadrature.
fn fourier_line_t(k: f64, xi2: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    crate::quad::integrate_realline_shells(
        |t| {
            if t > 16.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::from_polar((k * t - 0.5 * t.exp()).exp(), -xi2 * t)
        },
        cfg,
    )
}

/// Direct transform of a weighted bivariate polynomial, assembled exactly
/// from its coefficient rows and numerically integrated 1-D lines: the
/// integrand separates per monomial by Fubini, so each line integral is
/// computed once and reused. Purely a speedup; both line families remain
/// honest quadrature.
fn fourier_direct_from_table(
    table: &crate::poly::BivariateTable,
    weight_b: f64,
    weight_a: f64,
    t_step_exp: u32,
    xi1: f64,
    xi2: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    use std::collections::BTreeMap;
    let mut zints: BTreeMap<i32, Complex64> = BTreeMap::new();
    let mut tints: BTreeMap<u32, Complex64> = BTreeMap::new();
    let mut total = Complex64::new(0.0, 0.0);
    for (zp, coefs) in table.rows() {
        let zi = match zints.get(zp) {
            Some(v) => *v,
            None => {
                let v = fourier_line_z(*zp, weight_b, xi1, cfg)?;
                zints.insert(*zp, v);
                v
            }
        };
        for (m, &c) in coefs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let k = t_step_exp * m as u32;
            let ti = match tints.get(&k) {
                Some(v) => *v,
                None => {
                    let v = fourier_line_t(weight_a + f64::from(k), xi2, cfg)?;
                    tints.insert(k, v);
                    v
                }
            };
            total += c * zi * ti;
        }
    }
    Ok(total)
}

fn run_f1_point(p: &Params) -> Result<Outcome> {
    let xi1 = pget(p, "xi1", 0.0);
    let xi2 = pget(p, "xi2", 0.0);
    let base = FourierParams {
        n: 0,
        a: pget(p, "a", 1.0),
        b: pget(p, "b", 3.0),
        c: pget(p, "c", 3.0),
        d: pget(p, "d", 1.0),
        upsilon: pgetu(p, "upsilon", 1),
    };
    let (pp, q) = (base.b + base.c, base.a + base.d - 1.0);
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-13, max_level: 11 };
    let mut worst_err = -1.0f64;
    let mut worst_pair = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut scale: f64 = 0.0;
    for n in 0..=pgetu(p, "nmax", 2) {
        let fpn = FourierParams { n, ..base };
        let closed = fourier_closed_d(&fpn, pp, q, xi1, xi2)?;
        let params = PolyParams::new(n, pp, q, base.upsilon);
        let table = ik_poly_table(&params)?;
        let direct =
            fourier_direct_from_table(&table, base.b, base.a, base.upsilon, xi1, xi2, &cfg)?;
        scale = scale.max(direct.norm());
        let err = (closed - direct).norm() / direct.norm().max(scale).max(1e-300);
        if err > worst_err {
            worst_err = err;
            worst_pair = (closed, direct);
        }
    }
    Ok(Outcome {
        lhs: Value::Complex { re: worst_pair.0.re, im: worst_pair.0.im },
        rhs: Value::Complex { re: worst_pair.1.re, im: worst_pair.1.im },
        scale,
        notes: format!("worst over n <= 2 at (xi1, xi2) = ({xi1}, {xi2}); closed form is the even-entire part, exact only at xi1 = 0"),
        passed_override: None,
    })
}

fn run_f2_point(p: &Params) -> Result<Outcome> {
    let xi1 = pget(p, "xi1", 0.0);
    let xi2 = pget(p, "xi2", 0.0);
    let base = FourierParams {
        n: 0,
        a: pget(p, "a", 1.0),
        b: pget(p, "b", 3.0),
        c: pget(p, "c", 3.0),
        d: pget(p, "d", 1.0),
        upsilon: pgetu(p, "upsilon", 1),
    };
    let (alpha, beta) = (base.b + base.c, base.a + base.d - 1.0);
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-13, max_level: 11 };
    let mut worst_err = -1.0f64;
    let mut worst_pair = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut scale: f64 = 0.0;
    for r in 0..=pgetu(p, "nmax", 2) {
        let fpr = FourierParams { n: r, ..base };
        let closed = fourier_closed_f(&fpr, alpha, beta, xi1, xi2)?;
        let params = PolyParams::new(r, alpha, beta, base.upsilon);
        let table = ik_dual_table(&params)?;
        let direct = fourier_direct_from_table(&table, base.c, base.d, 1, xi1, xi2, &cfg)?;
        scale = scale.max(direct.norm());
        let err = (closed - direct).norm() / direct.norm().max(scale).max(1e-300);
        if err > worst_err {
            worst_err = err;
            worst_pair = (closed, direct);
        }
    }
    Ok(Outcome {
        lhs: Value::Complex { re: worst_pair.0.re, im: worst_pair.0.im },
        rhs: Value::Complex { re: worst_pair.1.re, im: worst_pair.1.im },
        scale,
        notes: format!("worst over r <= 2 at (xi1, xi2) = ({xi1}, {xi2}); includes the 2^l and 2^(d-i xi2) factors the t-side Gamma integral produces"),
        passed_override: None,
    })
}

fn run_parseval_eq1(p: &Params) -> Result<Outcome> {
    let n = pgetu(p, "n", 0);
    let r = pgetu(p, "r", 0);
    let fp = FourierParams {
        n: 0,
        a: pget(p, "a", 1.0),
        b: pget(p, "b", 3.0),
        c: pget(p, "c", 3.0),
        d: pget(p, "d", 1.0),
        upsilon: pgetu(p, "upsilon", 1),
    };
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_level: 11 };
    let (lhs, rhs) = parseval_check(n, r, &fp, &cfg)?;
    let scale = biorthogonality_diag(n.max(r), fp.b + fp.c)?.abs();
    Ok(Outcome::real(lhs, rhs).with_scale(scale).with_notes(
        "rhs truncated at |xi1| <= 2: the closed forms are formal beyond and diverge exponentially",
    ))
}

fn run_upsilon_biortho(p: &Params) -> Result<Outcome> {
    // The Υ pairing integral: the integrand's entire-part 1F2 factors grow
    // with |z| for every admissible (b, c), so the z-integral does not
    // converge; the check reports truncated values at two ranges and fails
    // with the divergence documented.
    let n = pgetu(p, "n", 0);
    let r = pgetu(p, "r", 0);
    let fp = FourierParams {
        n: 0,
        a: pget(p, "a", 1.0),
        b: pget(p, "b", 1.2),
        c: pget(p, "c", 1.3),
        d: pget(p, "d", 1.0),
        upsilon: pgetu(p, "upsilon", 1),
    };
    let cfg = QuadratureConfig { rel_tol: 3e-5, abs_tol: 1e-9, max_level: 8 };
    let stated = upsilon_biortho_rhs(&FourierParams { n, ..fp })?;
    let tmax = 10.0;
    let mut truncated = Vec::new();
    for zmax in [20.0, 40.0] {
        let v = crate::quad::tanh_sinh_complex(
            |z| {
                crate::quad::tanh_sinh_complex(
                    |t| {
                        let w = crate::gamma::gamma_complex(Complex64::new(fp.a, -t)).unwrap()
                            * crate::gamma::gamma_complex(Complex64::new(fp.d, t)).unwrap();
                        let u1 = upsilon1(
                            &FourierParams { n, ..fp },
                            Complex64::new(0.0, z),
                            Complex64::new(0.0, t),
                        )
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                        let u2 = upsilon2(
                            &FourierParams { n: r, ..fp },
                            Complex64::new(0.0, -z),
                            Complex64::new(0.0, -t),
                        )
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                        w * u1 * u2
                    },
                    -tmax,
                    tmax,
                    &cfg,
                )
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            },
            -zmax,
            zmax,
            &cfg,
        )?;
        truncated.push(v.re);
    }
    let drift = (truncated[1] - truncated[0]).abs();
    let rel0 = (truncated[0] - stated).abs() / stated.abs();
    let rel1 = (truncated[1] - stated).abs() / stated.abs();
    let converged = drift <= 1e-3 * stated.abs();
    Ok(Outcome::real(truncated[1], stated)
        .with_scale(stated.abs())
        .with_notes(format!(
            "z-truncations 20/40 give {:.6e}/{:.6e} (rel to stated {:.2e}/{:.2e}, drift {:.2e}): the pairing integral grows with the truncation; stated/4 would be {:.6e}",
            truncated[0], truncated[1], rel0, rel1, drift, stated / 4.0
        ))
        .then_pass_and(converged))
}

fn run_remark28(_p: &Params) -> Result<Outcome> {
    let mut min_w = f64::INFINITY;
    for &a in &[0.7, 1.2, 2.0] {
        for &t in &[-8.0, -3.0, -1.0, 0.0, 0.5, 2.0, 8.0] {
            let g = crate::gamma::gamma_complex(Complex64::new(a, t))?;
            min_w = min_w.min((g * g.conj()).re);
        }
    }
    Ok(Outcome::real(min_w.min(0.0), 0.0)
        .with_notes(format!("min sampled weight {min_w:.3e} (must be >= 0)"))
        .then_pass(min_w >= 0.0))
}

fn run_lim_i(p: &Params) -> Result<Outcome> {
    let n = pgetu(p, "n", 1);
    let q = pget(p, "q", 0.5);
    let ups = pgetu(p, "upsilon", 2);
    let (z, t) = (pget(p, "z", 1.0), pget(p, "t", 1.0));
    let target_mag = crate::gamma::factorial_scaled(n).to_f64() * hk_poly(n, q, ups, z, t)?;
    let mut scaled = Vec::new();
    for &pp in &[1e3, 1e4, 1e5] {
        let params = PolyParams::new(n, pp, q, ups);
        let v = pp.powf(-f64::from(n) / 2.0) * ik_poly(&params, z / pp.sqrt(), t)?;
        scaled.push(v);
    }
    // Empirical sign: whichever of ±1 the scaled sequence approaches.
    let sigma = if (scaled[2] - target_mag).abs() <= (scaled[2] + target_mag).abs() {
        1.0
    } else {
        -1.0
    };
    let target = sigma * target_mag;
    let errs: Vec<f64> =
        scaled.iter().map(|v| (v - target).abs() / target.abs().max(1e-300)).collect();
    let monotone = errs.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-12);
    Ok(Outcome::real(scaled[2], target)
        .with_scale(target.abs())
        .with_notes(format!(
            "sigma_{n} = {sigma:+.0}; errors over p = 1e3,1e4,1e5: {:.3e}, {:.3e}, {:.3e}",
            errs[0], errs[1], errs[2]
        ))
        .then_pass(monotone))
}

fn run_lim_q(p: &Params) -> Result<Outcome> {
    let n = pgetu(p, "n", 1);
    let q = pget(p, "q", 0.5);
    let ups = pgetu(p, "upsilon", 2);
    let (z, t) = (pget(p, "z", 1.0), pget(p, "t", 1.0));
    let target = hk_dual(n, q, ups, z, t)?;
    let mut errs = Vec::new();
    let mut last = 0.0;
    for &pp in &[1e3, 1e4, 1e5] {
        let params = PolyParams::new(n, pp, q, ups);
        let v = pp.powf(-f64::from(n) / 2.0) * ik_dual(&params, z / pp.sqrt(), t)?;
        errs.push((v - target).abs() / target.abs().max(1e-300));
        last = v;
    }
    let monotone = errs.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-12);
    Ok(Outcome::real(last, target)
        .with_scale(target.abs())
        .with_notes(format!("errors over p = 1e3,1e4,1e5: {:.3e}, {:.3e}, {:.3e}", errs[0], errs[1], errs[2]))
        .then_pass(monotone))
}

fn run_polh_anchor(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for &(q, ups) in &[(0.5, 2u32), (0.0, 1)] {
        w.update(hk_poly(0, q, ups, 1.3, 0.7)?, gamma_reciprocal(q + 1.0), 1.0);
        let (z, t): (f64, f64) = (0.8, 1.3);
        let expect = 2.0 * z
            * (gamma_reciprocal(q + 1.0)
                - t.powi(ups as i32) * gamma_reciprocal(q + f64::from(ups) + 1.0));
        w.update(hk_poly(1, q, ups, z, t)?, expect, 1.0);
        // Dual side: Q_1 = H_1(z)(Y_0 + Y_1).
        let dual = hk_dual(1, q, ups, z, t)?;
        let y01 = konhauser_y(0, q, ups, t)? + konhauser_y(1, q, ups, t)?;
        w.update(dual, hermite(1, z) * y01, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_mi_anchor(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    let params = PolyParams::new(0, 6.0, 0.5, 2).with_mod(1.5, 2.0);
    w.update(
        ik_mod(&params, 1.1, 0.7)?,
        gamma_reciprocal(7.0) * gamma_reciprocal(1.5),
        1.0,
    );
    // n = 1 closed form: 2z(1-p)(-1)[...]/Γ(p+1) with only l = 0 alive.
    let p1 = PolyParams::new(1, 6.0, 0.5, 2).with_mod(1.5, 2.0);
    let (z, t): (f64, f64) = (0.9, 1.1);
    let expect = 2.0 * z * 5.0 * gamma_reciprocal(7.0)
        * (gamma_reciprocal(1.5) - t.powi(2) * gamma_reciprocal(3.5));
    w.update(ik_mod(&p1, z, t)?, expect, 1.0);
    Ok(w.outcome(1.0))
}

fn run_remark32(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for n in 0..=5u32 {
        for &(z, t) in &[(1.2, 0.9), (-0.5, 2.0)] {
            let base = PolyParams::new(n, 8.0, 0.5, 2);
            let modp = base.with_mod(0.0, 9.0);
            let lhs = gamma(9.0)? * ik_mod(&modp, z, t)?;
            let rhs = ik_poly(&base, z, t)?;
            w.update(lhs, rhs, 1.0);
        }
    }
    Ok(w.outcome(1.0))
}

fn run_mikampe(_p: &Params) -> Result<Outcome> {
    let mut w = Worst::new();
    for n in 0..=5u32 {
        for &(g, c) in &[(1.5, 2.0), (0.8, 4.2)] {
            let params = PolyParams::new(n, 8.0, 0.5, 2).with_mod(g, c);
            for &(z, t) in &[(1.0, 1.0), (-0.6, 0.4), (2.0, 3.0)] {
                w.update(ik_mod_via_kdf(&params, z, t)?, ik_mod(&params, z, t)?, 1.0);
            }
        }
    }
    Ok(w.outcome(1.0))
}

fn run_cor34(_p: &Params) -> Result<Outcome> {
    // γ = (1-n)/2, c = p+1: the Kampé lists cancel down to F^{1,0,1}_{0,υ,2};
    // evaluate that reduced form directly and compare with ik_mod.
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for n in 1..=5u32 {
        let nf = f64::from(n);
        let (pp, q, ups) = (9.0, 0.5, 2u32);
        let g = (1.0 - nf) / 2.0;
        let params = PolyParams::new(n, pp, q, ups).with_mod(g, pp + 1.0);
        for &(z, t) in &[(1.4, 0.6), (-0.9, 1.1)] {
            let e: Vec<f64> = (0..ups).map(|j| (q + 1.0 + f64::from(j)) / f64::from(ups)).collect();
            let f = kampe_de_feriet(
                &[-nf],
                &[],
                &[-nf / 2.0],
                &[],
                &e,
                &[-nf, pp - nf],
                -1.0 / (z * z),
                (t / f64::from(ups)).powi(ups as i32),
                &policy,
            )?;
            let pref = crate::gamma::pochhammer_scaled(1.0 - pp, n)
                .mul(crate::num::ScaledF64::from_f64(-2.0 * z).powi(n as i32))
                .div(crate::gamma::gamma_scaled(pp + 1.0)?)
                .div(crate::gamma::gamma_scaled(q + 1.0)?);
            let reduced = pref.mul_f64(f).to_f64();
            w.update(reduced, ik_mod(&params, z, t)?, 1.0);
        }
    }
    Ok(w.outcome(1.0))
}

fn run_modedef_anchor(_p: &Params) -> Result<Outcome> {
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(pp, q) in &[(2.0, 1.5), (0.9, 0.7)] {
        let params = Ml6Params { g: [0.7, 1.3, 0.9, 2.0, 3.0, 1.1], p: pp, q, upsilon: 2 };
        w.update(
            ml6(&params, 0.0, 0.0, &policy)?,
            gamma_reciprocal(pp) * gamma_reciprocal(q),
            1.0,
        );
    }
    Ok(w.outcome(1.0))
}

fn run_remark36(_p: &Params) -> Result<Outcome> {
    let policy = SeriesPolicy::default();
    let (g1, g2, g3, pp, q, ups) = (0.9, 1.2, 1.7, 1.8, 1.1, 2u32);
    let six = Ml6Params { g: [g1, g2, g3, g1 / 2.0, (g1 + 1.0) / 2.0, g3], p: pp, q, upsilon: ups };
    let mut w = Worst::new();
    for &(z, t) in &[(0.3, 0.8), (0.6, 1.4)] {
        let a = ml6(&six, -z / 4.0, t, &policy)?;
        let mut s = crate::num::KahanSum::new();
        for l in 0..60u32 {
            for m in 0..60u32 {
                s.add(
                    crate::gamma::pochhammer_scaled(g2, l + m).to_f64()
                        * z.powi(l as i32)
                        * t.powi((ups * m) as i32)
                        * gamma_reciprocal(pp + f64::from(l))
                        * gamma_reciprocal(q + f64::from(ups * m))
                        / (crate::gamma::factorial_scaled(l).to_f64()
                            * crate::gamma::factorial_scaled(m).to_f64()),
                );
            }
        }
        w.update(a, s.value(), 1.0);
    }
    Ok(w.outcome(1.0).with_notes("collapse to the plain double series (direct-sum oracle)"))
}

fn run_modie(_p: &Params) -> Result<Outcome> {
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for n in 0..=4u32 {
        for &(g, c) in &[(1.5, 2.0), ((1.0 - f64::from(n)) / 2.0, 7.0)] {
            let params = PolyParams::new(n, 8.0, 0.5, 2).with_mod(g, c);
            for &(z, t) in &[(1.0, 1.0), (-0.7, 0.4)] {
                let a = poly_mod_from_ml6(n, 8.0, 0.5, g, c, 2, z, t, &policy)?;
                let b = ik_mod(&params, z, t)?;
                w.update(a, b, 1.0);
            }
        }
    }
    Ok(w.outcome(1.0).with_notes("series argument +1/(4z^2): the defining sum carries its own (-1)^l"))
}

fn run_cor38(_p: &Params) -> Result<Outcome> {
    let policy = SeriesPolicy::default();
    let (g1, g2, g4, g5, pp, q) = (0.7, 1.3, 2.0, 3.0, 2.5, 1.5);
    let six = Ml6Params { g: [g1, g2, pp, g4, g5, 0.0], p: pp, q, upsilon: 2 };
    let four = Ml4Params { g1, g2, g3: g4, g4: g5, q, upsilon: 2 };
    let mut w = Worst::new();
    for &(z, t) in &[(0.2, 1.0), (-0.15, 2.0), (0.0, 0.5)] {
        let a = ml6(&six, z, t, &policy)?;
        let b = ml4(&four, z, t, &policy)? * gamma_reciprocal(pp);
        w.update(a, b, 1.0);
    }
    Ok(w.outcome(1.0).with_notes("gamma3 = p with the gamma6 = 0 slot removed"))
}

fn run_ml6lap_1d(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(g1, g2, g3, pp, q, ups, z, wv, a) in &[
        (0.8, 1.2, 1.5, 1.3, 0.9, 2u32, 0.05, 1.0, 2.0),
        (1.2, 0.8, 2.0, 2.0, 1.4, 1, -0.1, 0.6, 1.8),
        (0.5, 1.5, 1.1, 0.8, 2.0, 2, 0.15, 1.3, 2.4),
    ] {
        let closed = laplace_closed_ml6_1d(g1, g2, g3, pp, q, ups, z, wv, a)?;
        let params = Ml6Params::constrained(g1, g2, g3, pp + 1.0, q + 1.0, ups);
        let quad = laplace_numeric(
            |t| t.powf(q) * ml6(&params, z, wv * t, &policy).unwrap_or(f64::NAN),
            a,
            &cfg,
        )?;
        w.update(closed, quad, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_ml6lap_2d(p: &Params) -> Result<Outcome> {
    // The transform integrand sweeps the series argument across the half
    // line, so the integral is taken over a finite box whose tails are below
    // 1e-15 of the result under the e^{-az-bt} weight, with the kernel
    // served from a precomputed coefficient table.
    let cfg = QuadratureConfig { rel_tol: 1e-9, abs_tol: 1e-13, max_level: 11 };
    let _ = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(g1, g2, g3, pp, q, ups, w1, w2, a, b) in &[
        (0.8, 1.2, 1.5, 1.3, 0.9, 2u32, 0.1, 0.5, 2.0, 3.0),
        (1.1, 0.9, 2.0, 0.9, 1.3, 1, -0.2, 0.4, 1.5, 2.0),
        (0.6, 1.4, 1.2, 1.6, 0.8, 2, 0.15, 0.8, 2.5, 2.2),
    ] {
        let closed = laplace2_closed_ml6(g1, g2, g3, pp, q, ups, w1, w2, a, b)?;
        let params = Ml6Params::constrained(g1, g2, g3, pp + 1.0, q + 1.0, ups);
        // Truncation: the t-side of the kernel grows at most like
        // e^{|w2| t}, so (b - |w2|) t_cut = 50 keeps the tail negligible;
        // the z-side growth is subexponential.
        let z_cut = 52.0 / a;
        let t_cut = 50.0 / (b - w2.abs());
        let table = crate::ml::ml6_table_unguarded(
            &params,
            (w1 * z_cut).abs(),
            (w2 * t_cut).abs(),
            &policy,
        )?;
        let icfg = cfg.inner();
        let quad = crate::quad::tanh_sinh_fn(
            |z| {
                crate::quad::tanh_sinh_fn(
                    |t| {
                        (-a * z - b * t).exp()
                            * z.powf(pp)
                            * t.powf(q)
                            * table.eval(w1 * z, w2 * t)
                    },
                    0.0,
                    t_cut,
                    &icfg,
                )
                .unwrap_or(f64::NAN)
            },
            0.0,
            z_cut,
            &cfg,
        )?;
        w.update(closed, quad, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_ml6lap_2dpoly(p: &Params) -> Result<Outcome> {
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_level: 11 };
    let _ = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    // Admissible points: even n (exact), n = 1 with w1 = 0 (the w1-series is
    // then a single term), n = 2 generic.
    for &(n, pp, q, ups, w1, w2, a, b) in &[
        (0u32, 6.0, 0.9, 2u32, 0.3, 1.0, 2.0, 3.0),
        (1, 5.0, 1.2, 1, 0.0, 0.5, 1.8, 2.2),
        (2, 6.5, 0.8, 2, 0.2, 0.9, 2.2, 2.8),
    ] {
        let nf = f64::from(n);
        let closed = laplace2_closed_mod_poly(n, pp, q, ups, w1, w2, a, b)?;
        // Integrand through the six-parameter series form, which handles
        // w1 = 0 without the 1/sqrt(w1 z) indeterminacy.
        let params = Ml6Params {
            g: [-nf, -nf, pp - nf, -nf, pp - nf, (1.0 - nf) / 2.0],
            p: pp + 1.0,
            q: q + 1.0,
            upsilon: ups,
        };
        let pref = crate::gamma::pochhammer_scaled(1.0 - pp, n)
            .mul_f64(if n % 2 == 0 { 1.0 } else { -1.0 })
            .to_f64();
        let quad = laplace2_numeric(
            |z, t| {
                pref * z.powf(pp)
                    * t.powf(q)
                    * ml6(&params, w1 * z, w2 * t, &policy).unwrap_or(f64::NAN)
            },
            a,
            b,
            &cfg,
        )?;
        w.update(closed, quad, 1.0);
    }
    Ok(w.outcome(1.0).with_notes(
        "points: n=0; n=1 with w1=0; n=2 (odd n with w1 != 0 matches only to O(w1^{[n/2]+1}))",
    ))
}

fn run_rl2_powerrule(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let order = FracOrder { sigma: 0.7, tau: 1.2, base_z: 0.0, base_t: 0.0 };
    let (a, b) = (1.5, 0.8);
    let (z, t) = (1.1, 0.9);
    let v = rl_frac_integral_2d(|u, s| u.powf(a - 1.0) * s.powf(b - 1.0), &order, z, t, &cfg)?;
    let expect = gamma(a)? / gamma(a + order.sigma)? * z.powf(a + order.sigma - 1.0) * gamma(b)?
        / gamma(b + order.tau)?
        * t.powf(b + order.tau - 1.0);
    Ok(Outcome::real(v, expect))
}

fn run_modefracint(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let g1 = rng.gen_range(0.3..1.5);
        let g2 = rng.gen_range(0.5..2.0);
        let g3 = rng.gen_range(0.5..2.0);
        let pp = rng.gen_range(0.8..2.0);
        let q = rng.gen_range(0.6..2.0);
        let tau = rng.gen_range(0.3..1.2);
        let z = rng.gen_range(-0.2..0.2);
        let wv = rng.gen_range(0.3..1.0);
        let params = Ml6Params { g: [g1, g2, g3, g1 + 0.8, g2 + 0.9, g3 + 1.0], p: pp, q, upsilon: 2 };
        let shifted = Ml6Params { q: q + tau, ..params };
        let (b, t) = (0.2, 1.5);
        let span = t - b;
        let lhs = rl_frac_integral(
            |s| {
                if s == 0.0 {
                    return 0.0;
                }
                s.powf(q - 1.0) * ml6(&params, z, wv * s, &policy).unwrap_or(f64::NAN)
            },
            tau,
            b,
            t,
            &cfg,
        )?;
        let rhs = span.powf(q + tau - 1.0) * ml6(&shifted, z, wv * span, &policy)?;
        w.update(lhs, rhs, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_modefracint_poly(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let mut w = Worst::new();
    for &(n, pp, q, ups, tau, g, c) in
        &[(2u32, 8.0, 0.8, 2u32, 0.7, 1.5, 2.0), (1, 6.0, 1.5, 1, 1.1, 0.0, 7.0), (3, 9.0, 0.5, 2, 0.4, -1.0, 3.0)]
    {
        let (z, wv, b, t) = (1.1, 0.9, 0.0, 1.4);
        let params = PolyParams::new(n, pp, q, ups).with_mod(g, c);
        let shifted = PolyParams::new(n, pp, q + tau, ups).with_mod(g, c);
        let lhs = rl_frac_integral(
            |s| s.powf(q) * ik_mod(&params, z, wv * s).unwrap_or(f64::NAN),
            tau,
            b,
            t,
            &cfg,
        )?;
        let rhs = (t - b).powf(q + tau) * ik_mod(&shifted, z, wv * (t - b))?;
        w.update(lhs, rhs, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_modedoublefracint(p: &Params) -> Result<Outcome> {
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_level: 11 };
    let _ = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(g1, g2, g3, pp, q, sig, tau, w1, w2) in &[
        (0.8, 1.2, 1.5, 1.0, 0.9, 0.7, 0.9, 0.1, 0.4),
        (1.1, 0.9, 2.0, 1.4, 1.2, 1.1, 0.5, -0.15, 0.3),
        (0.5, 1.5, 1.1, 0.8, 1.6, 0.4, 1.3, 0.12, 0.6),
    ] {
        let params = Ml6Params { g: [g1, g2, g3, g1 + 0.8, g2 + 0.9, g3 + 1.0], p: pp, q, upsilon: 2 };
        let shifted = Ml6Params { p: pp + sig, q: q + tau, ..params };
        let order = FracOrder { sigma: sig, tau, base_z: 0.0, base_t: 0.0 };
        let (z, t) = (1.1, 0.9);
        let lhs = rl_frac_integral_2d(
            |u, s| {
                if u == 0.0 || s == 0.0 {
                    return 0.0;
                }
                u.powf(pp - 1.0)
                    * s.powf(q - 1.0)
                    * ml6(&params, w1 * u, w2 * s, &policy).unwrap_or(f64::NAN)
            },
            &order,
            z,
            t,
            &cfg,
        )?;
        let rhs = z.powf(pp + sig - 1.0)
            * t.powf(q + tau - 1.0)
            * ml6(&shifted, w1 * z, w2 * t, &policy)?;
        w.update(lhs, rhs, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_modedoublefracint_poly(p: &Params) -> Result<Outcome> {
    // Double-integral shift for the modIE parameter bundle (the polynomial
    // corollary's content realized on the real form of the series).
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_level: 11 };
    let _ = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(n, pp, q, sig, tau, w1, w2) in
        &[(1u32, 6.0, 0.8, 0.7, 0.9, 0.1, 0.4), (2, 7.0, 1.1, 0.5, 0.6, 0.08, 0.3)]
    {
        let nf = f64::from(n);
        let g = (1.0 - nf) / 2.0;
        let params = Ml6Params {
            g: [-nf, -nf, pp - nf, -nf, pp - nf, g],
            p: pp + 1.0,
            q: q + 1.0,
            upsilon: 2,
        };
        let shifted = Ml6Params { p: pp + 1.0 + sig, q: q + 1.0 + tau, ..params };
        let order = FracOrder { sigma: sig, tau, base_z: 0.0, base_t: 0.0 };
        let (z, t) = (1.0, 0.9);
        let lhs = rl_frac_integral_2d(
            |u, s| {
                if u == 0.0 || s == 0.0 {
                    return 0.0;
                }
                u.powf(pp) * s.powf(q) * ml6(&params, w1 * u, w2 * s, &policy).unwrap_or(f64::NAN)
            },
            &order,
            z,
            t,
            &cfg,
        )?;
        let rhs =
            z.powf(pp + sig) * t.powf(q + tau) * ml6(&shifted, w1 * z, w2 * t, &policy)?;
        w.update(lhs, rhs, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_modefracder(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut worst = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..3 {
        let g1 = rng.gen_range(0.3..1.5);
        let g2 = rng.gen_range(0.5..2.0);
        let g3 = rng.gen_range(0.5..2.0);
        let pp = rng.gen_range(0.8..2.0);
        let q = rng.gen_range(1.6..2.8);
        let tau = rng.gen_range(0.3..1.2);
        let z = rng.gen_range(-0.2..0.2);
        let wv = rng.gen_range(0.3..1.0);
        let params = Ml6Params { g: [g1, g2, g3, g1 + 0.8, g2 + 0.9, g3 + 1.0], p: pp, q, upsilon: 2 };
        let derived = Ml6Params { q: q - tau, ..params };
        let (b, t) = (0.2, 1.5);
        let orig = |s: f64| s.powf(q - 1.0) * ml6(&params, z, wv * s, &policy).unwrap_or(f64::NAN);
        let claimed =
            |s: f64| s.powf(q - tau - 1.0) * ml6(&derived, z, wv * s, &policy).unwrap_or(f64::NAN);
        let residual = calculus::rl_frac_derivative_check(claimed, orig, tau, b, t, &cfg)?;
        let scale = orig(t - b).abs().max(1e-30);
        worst = worst.max(residual / scale);
    }
    Ok(Outcome::real(worst, 0.0).with_scale(1.0).with_notes("max inverse-route residual over 3 points"))
}

fn run_modedoublefracder(p: &Params) -> Result<Outcome> {
    // Certified via the inverse-integral route in both variables: the double
    // integral of the claimed derivative must reproduce the original.
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_level: 11 };
    let _ = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut worst = 0.0f64;
    for &(g1, g2, g3, pp, q, sig, tau, w1, w2) in &[
        (0.8, 1.2, 1.5, 1.9, 2.1, 0.7, 0.9, 0.1, 0.4),
        (1.1, 0.9, 2.0, 2.4, 1.8, 1.1, 0.5, -0.15, 0.3),
        (0.5, 1.5, 1.1, 1.6, 2.4, 0.4, 1.3, 0.12, 0.6),
    ] {
        let params = Ml6Params { g: [g1, g2, g3, g1 + 0.8, g2 + 0.9, g3 + 1.0], p: pp, q, upsilon: 2 };
        let derived = Ml6Params { p: pp - sig, q: q - tau, ..params };
        let order = FracOrder { sigma: sig, tau, base_z: 0.0, base_t: 0.0 };
        let (z, t) = (1.1, 0.9);
        let claimed = |u: f64, s: f64| {
            if u == 0.0 || s == 0.0 {
                return 0.0;
            }
            u.powf(pp - sig - 1.0)
                * s.powf(q - tau - 1.0)
                * ml6(&derived, w1 * u, w2 * s, &policy).unwrap_or(f64::NAN)
        };
        let integral = rl_frac_integral_2d(claimed, &order, z, t, &cfg)?;
        let original =
            z.powf(pp - 1.0) * t.powf(q - 1.0) * ml6(&params, w1 * z, w2 * t, &policy)?;
        let scale = original.abs().max(1e-30);
        worst = worst.max((integral - original).abs() / scale);
    }
    Ok(Outcome::real(worst, 0.0).with_scale(1.0).with_notes("max inverse-route residual over 3 points"))
}

fn run_li_laplace(p: &Params) -> Result<Outcome> {
    // L2(I^{σ,τ} d)(a, b) = a^{-σ} b^{-τ} L2(d)(a, b) on a monomial.
    let cfg = QuadratureConfig { rel_tol: 1e-9, ..cfg_from(p) };
    let (al, be, sig, tau, a, b) = (1.4, 1.8, 0.7, 0.9, 1.6, 2.1);
    let ci = gamma(al)? / gamma(al + sig)?;
    let ct = gamma(be)? / gamma(be + tau)?;
    let lhs = laplace2_numeric(
        |z, t| ci * ct * z.powf(al + sig - 1.0) * t.powf(be + tau - 1.0),
        a,
        b,
        &cfg,
    )?;
    let rhs = a.powf(-sig) * b.powf(-tau) * gamma(al)? / a.powf(al) * gamma(be)? / b.powf(be);
    Ok(Outcome::real(lhs, rhs))
}

fn run_die_roundtrip(p: &Params) -> Result<Outcome> {
    let n = pgetu(p, "n", 0);
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_level: 11 };
    let policy = SeriesPolicy::default();
    let w1 = pget(p, "w1", if n == 0 { 0.1 } else { 5e-4 });
    let grid = [(0.7, 0.9), (1.1, 0.6)];
    let r = convolution_equation_check(
        n,
        pget(p, "p", 1.1),
        pget(p, "q", 0.7),
        pgetu(p, "upsilon", 2),
        w1,
        pget(p, "w2", 0.2),
        pget(p, "sigma", 2.6),
        pget(p, "tau", 2.2),
        pget(p, "alpha", 1.7),
        pget(p, "beta", 1.9),
        &grid,
        &cfg,
        &policy,
    )?;
    let notes = if n % 2 == 1 {
        format!("odd n: recovery kernel inverts only to O(w1); w1 = {w1}")
    } else {
        format!("w1 = {w1}")
    };
    Ok(Outcome::real(r, 0.0).with_scale(1.0).with_notes(notes))
}

fn run_io_termwise(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let spec = OperatorSpec {
        ml: Ml6Params::constrained(0.8, 1.1, 1.4, 1.2, 0.9, 2),
        w1: 0.15,
        w2: 0.3,
        a1: 0.0,
        a2: 0.0,
    };
    let mut w = Worst::new();
    let (z, t) = (1.0, 1.0);
    let quad = op_e_apply(&spec, |_, _| 1.0, z, t, &cfg, &policy)?;
    let term = op_e_termwise_power(&spec, 1.0, 1.0, z, t, &policy)?;
    w.update(quad, term, 1.0);
    let quad2 = op_e_apply(&spec, |xi, y| xi.powf(0.5) * y.powf(0.2), z, t, &cfg, &policy)?;
    let term2 = op_e_termwise_power(&spec, 1.5, 1.2, z, t, &policy)?;
    w.update(quad2, term2, 1.0);
    Ok(w.outcome(1.0).with_notes("d = 1 and a monomial, term-wise Beta oracle"))
}

fn run_op0(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let policy = SeriesPolicy::default();
    let spec = OperatorSpec {
        ml: Ml6Params { g: [0.0; 6], p: 0.8, q: 1.3, upsilon: 2 },
        w1: 0.2,
        w2: 0.4,
        a1: 0.0,
        a2: 0.0,
    };
    let d = |xi: f64, y: f64| (1.0 + xi) * (0.5 + y);
    let (z, t) = (0.9, 1.2);
    let a = op_e_apply(&spec, d, z, t, &cfg, &policy)?;
    let order = FracOrder { sigma: 0.8, tau: 1.3, base_z: 0.0, base_t: 0.0 };
    let b = rl_frac_integral_2d(d, &order, z, t, &cfg)?;
    Ok(Outcome::real(a, b))
}

fn run_con_series(p: &Params) -> Result<Outcome> {
    let _ = p;
    let policy = SeriesPolicy::default();
    let spec = OperatorSpec {
        ml: Ml6Params::constrained(0.8, 1.1, 1.4, 1.2, 0.9, 2),
        w1: 0.3,
        w2: 0.5,
        a1: 0.0,
        a2: 0.0,
    };
    let c = op_e_norm_const(&spec, 1.0, 1.0, &policy)?;
    let g = &spec.ml.g;
    let mut brute = crate::num::KahanSum::new();
    for l in 0..200u32 {
        for m in 0..200u32 {
            let num = crate::gamma::pochhammer_scaled(g[0], 2 * l)
                .mul(crate::gamma::pochhammer_scaled(g[1], l + m))
                .mul(crate::gamma::pochhammer_scaled(g[2], l));
            let den = crate::gamma::pochhammer_scaled(g[3], l)
                .mul(crate::gamma::pochhammer_scaled(g[4], l))
                .mul(crate::gamma::pochhammer_scaled(g[5], l))
                .mul(crate::gamma::gamma_scaled(spec.ml.p + f64::from(l))?)
                .mul(crate::gamma::gamma_scaled(spec.ml.q + 2.0 * f64::from(m))?)
                .mul(crate::gamma::factorial_scaled(l))
                .mul(crate::gamma::factorial_scaled(m));
            brute.add(
                num.div(den).to_f64().abs() * spec.w1.powi(l as i32) * spec.w2.powi(2 * m as i32)
                    / ((spec.ml.p + f64::from(l)) * (spec.ml.q + 2.0 * f64::from(m))),
            );
        }
    }
    Ok(Outcome::real(c, brute.value()).with_notes("brute-force 200x200 absolute sum"))
}

fn run_con_bound(p: &Params) -> Result<Outcome> {
    // ||E d||_1 <= C ||d||_1 for d in {1, u, x, ux} on the unit box, with C
    // computed at per-axis lengths; the literal axis-mixed variant is
    // recorded in the notes.
    let cfg = QuadratureConfig { rel_tol: 1e-7, ..cfg_from(p) };
    let policy = SeriesPolicy::default();
    let spec = OperatorSpec {
        ml: Ml6Params::constrained(0.8, 1.1, 1.4, 1.2, 0.9, 2),
        w1: 0.15,
        w2: 0.3,
        a1: 0.0,
        a2: 0.0,
    };
    let c_axis = op_e_norm_const(&spec, 1.0, 1.0, &policy)?;
    let mut worst_ratio = 0.0f64;
    for (alpha, beta) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (2.0, 2.0)] {
        // ||E d||_1 over the unit box by quadrature of the term-wise value,
        // which is positive for these parameters.
        let norm_ed = crate::quad::tanh_sinh_fn(
            |z| {
                crate::quad::tanh_sinh_fn(
                    |t| op_e_termwise_power(&spec, alpha, beta, z, t, &policy).unwrap_or(f64::NAN).abs(),
                    0.0,
                    1.0,
                    &cfg,
                )
                .unwrap_or(f64::NAN)
            },
            0.0,
            1.0,
            &cfg,
        )?;
        let norm_d = 1.0 / (alpha * beta); // ∫ u^{α-1} x^{β-1} over the box
        worst_ratio = worst_ratio.max(norm_ed / (c_axis * norm_d));
    }
    Ok(Outcome::real(worst_ratio, 1.0)
        .with_scale(1.0)
        .with_notes(format!(
            "worst ||Ed||_1/(C ||d||_1) = {worst_ratio:.4} with per-axis C = {c_axis:.6e}; bound requires <= 1"
        ))
        .then_pass(worst_ratio <= 1.0 && worst_ratio.is_finite()))
}

fn run_con_bound_maxnorm(p: &Params) -> Result<Outcome> {
    // The max-norm version: ||E d||_C <= C ||d||_C for d = 1 on the unit box.
    let policy = SeriesPolicy::default();
    let spec = OperatorSpec {
        ml: Ml6Params::constrained(0.8, 1.1, 1.4, 1.2, 0.9, 2),
        w1: 0.15,
        w2: 0.3,
        a1: 0.0,
        a2: 0.0,
    };
    let _ = p;
    let c = op_e_norm_const(&spec, 1.0, 1.0, &policy)?;
    let mut max_ed = 0.0f64;
    for i in 1..=4 {
        for j in 1..=4 {
            let z = f64::from(i) / 4.0;
            let t = f64::from(j) / 4.0;
            max_ed = max_ed.max(op_e_termwise_power(&spec, 1.0, 1.0, z, t, &policy)?.abs());
        }
    }
    Ok(Outcome::real(max_ed / c, 1.0)
        .with_notes(format!("max |Ed| over the box = {max_ed:.4e}, C = {c:.4e}"))
        .then_pass(max_ed <= c))
}

fn run_dit(p: &Params) -> Result<Outcome> {
    let cfg = QuadratureConfig { rel_tol: 1e-7, abs_tol: 1e-12, max_level: 10 };
    let _ = cfg_from(p);
    let policy = SeriesPolicy::default();
    let mut w = Worst::new();
    for &(g, mu, pp, q, sig, tau, w1, w2, z, t) in &[
        ([0.9, 1.2, 1.5], [0.7, 1.0, 1.3], 1.2, 0.8, 0.9, 1.1, 0.1, 0.2, 0.9, 1.1),
        ([0.5, 0.8, 1.1], [1.1, 1.4, 0.9], 0.9, 1.3, 0.7, 0.8, 0.15, 0.3, 1.2, 0.8),
        ([1.3, 1.0, 0.7], [0.6, 1.2, 1.6], 1.5, 1.0, 1.2, 0.6, -0.08, 0.25, 0.7, 1.0),
    ] {
        let (lhs, rhs) = dit_product_identity(g, mu, pp, q, sig, tau, 2, w1, w2, z, t, &cfg, &policy)?;
        w.update(lhs, rhs, 1.0);
    }
    Ok(w.outcome(1.0).with_notes("combined constrained slot (γ1+μ1+1)/2"))
}

fn run_e1_semigroup(p: &Params) -> Result<Outcome> {
    let _ = p;
    let mut w = Worst::new();
    for &(g, mu, al, be) in &[
        ([0.8, 1.2, 1.5], [0.6, 0.9, 1.1], 1.3, 1.6),
        ([1.1, 0.7, 0.9], [0.4, 1.3, 0.8], 1.0, 2.0),
        ([0.5, 1.0, 1.2], [0.9, 0.6, 1.4], 2.0, 1.0),
    ] {
        let (composed, direct) =
            semigroup_check(g, mu, 0.9, 1.1, 0.7, 0.8, 2, 0.15, 0.25, al, be, 0.8, 1.1)?;
        w.update(composed, direct, 1.0);
    }
    Ok(w.outcome(1.0))
}

fn run_e2_rl(p: &Params) -> Result<Outcome> {
    let cfg = cfg_from(p);
    let (pp, q, sig, tau) = (0.9, 1.1, 0.7, 0.8);
    let (al, be) = (1.3, 1.6);
    let (z, t) = (0.8, 1.1);
    let g = [0.8, 1.2, 1.5];
    let mg = [-0.8, -1.2, -1.5];
    let (composed, _) = semigroup_check(g, mg, pp, q, sig, tau, 2, 0.2, 0.3, al, be, z, t)?;
    let order = FracOrder { sigma: pp + sig, tau: q + tau, base_z: 0.0, base_t: 0.0 };
    let rl =
        rl_frac_integral_2d(|u, s| u.powf(al - 1.0) * s.powf(be - 1.0), &order, z, t, &cfg)?;
    Ok(Outcome::real(composed, rl).with_notes("mu = -gamma collapses to the double RL integral"))
}

fn run_e1cor_composition(p: &Params) -> Result<Outcome> {
    // (I^τ I^σ ∘ E^{(γ)}_{p,q}) d = E^{(γ)}_{p+σ,q+τ} d on a monomial: the
    // left side integrates the term-wise operator output by quadrature.
    let cfg = QuadratureConfig { rel_tol: 1e-8, abs_tol: 1e-12, max_level: 9 };
    let _ = cfg_from(p);
    let policy = SeriesPolicy::default();
    let op = calculus::ConstrainedOp { g1: 0.8, g2: 1.1, p: 1.2, q: 0.9, upsilon: 2, w1: 0.15, w2: 0.3 };
    let (sig, tau) = (0.6, 0.9);
    let (al, be) = (1.5, 1.2);
    let (z, t) = (1.0, 1.0);
    let order = FracOrder { sigma: sig, tau, base_z: 0.0, base_t: 0.0 };
    let lhs = rl_frac_integral_2d(
        |u, s| {
            if u == 0.0 || s == 0.0 {
                return 0.0;
            }
            calculus::constrained_apply_power(&op, al, be, u, s).unwrap_or(f64::NAN)
        },
        &order,
        z,
        t,
        &cfg,
    )?;
    let shifted = calculus::ConstrainedOp { p: op.p + sig, q: op.q + tau, ..op };
    let rhs = calculus::constrained_apply_power(&shifted, al, be, z, t)?;
    let _ = policy;
    Ok(Outcome::real(lhs, rhs))
}

fn run_dinv(p: &Params) -> Result<Outcome> {
    let _ = p;
    let mut worst = 0.0f64;
    let r0 = left_inverse_check([0.0, 0.0, 0.0], 0.9, 1.1, 0.7, 0.8, 2, 0.2, 0.3, 1.0, 1.0, 0.9, 1.2)?;
    let r1 = left_inverse_check([0.8, 1.2, 1.5], 0.9, 1.1, 0.7, 0.8, 2, 0.15, 0.25, 1.5, 2.5, 0.9, 1.2)?;
    let r2 = left_inverse_check([1.1, 0.9, 1.3], 1.2, 0.8, 0.9, 1.1, 2, 0.1, 0.2, 1.0, 1.5, 1.1, 0.8)?;
    worst = worst.max(r0).max(r1).max(r2);
    Ok(Outcome::real(worst, 0.0)
        .with_scale(1.0)
        .with_notes(format!("residuals: zero-slot {r0:.2e}, generic {r1:.2e}, {r2:.2e}")))
}

// ===========================================================================
// Catalog, dispatch, suite
// ===========================================================================

fn registry() -> &'static Vec<CheckInstance> {
    static REGISTRY: OnceLock<Vec<CheckInstance>> = OnceLock::new();
    REGISTRY.get_or_init(build_catalog)
}

fn single(
    out: &mut Vec<CheckInstance>,
    id: &str,
    family: &'static str,
    kind: CheckKind,
    tol: f64,
    runner: Runner,
    params: Params,
) {
    out.push(CheckInstance { id: id.to_string(), family, kind, tolerance: tol, params, runner });
}

fn build_catalog() -> Vec<CheckInstance> {
    let mut v: Vec<CheckInstance> = Vec::new();
    let e = CheckKind::Exact;
    let q = CheckKind::Quadrature;

    single(&mut v, "Zdef.laguerre", "Zdef.laguerre", e, 1e-12, run_zdef_laguerre, Params::new());
    single(&mut v, "Ydef.closed_n1", "Ydef.closed_n1", e, 1e-12, run_ydef_closed, Params::new());
    for (ups, g) in [(1u32, 0.0), (1, 0.5), (2, 0.0), (2, 0.5)] {
        single(
            &mut v,
            &format!("Konh3.matrix.u{ups}g{}", if g == 0.0 { "0" } else { "05" }),
            "Konh3.matrix",
            q,
            1e-6,
            run_konh3_matrix,
            params_from(&[("upsilon", f64::from(ups)), ("gamma", g), ("nmax", 4.0)]),
        );
    }
    single(&mut v, "Iort.matrix", "Iort.matrix", q, 1e-6, run_iort_matrix, params_from(&[("p", 10.0), ("nmax", 4.0)]));
    single(&mut v, "Idef.values", "Idef.values", e, 1e-12, run_idef_values, Params::new());
    single(&mut v, "IKdef.closed_n1", "IKdef.closed_n1", e, 1e-12, run_ikdef_closed_n1, Params::new());
    single(&mut v, "Remark5.reduction", "Remark5.reduction", e, 1e-12, run_remark5, Params::new());
    single(&mut v, "IZrel.equiv", "IZrel.equiv", e, 1e-12, run_izrel, Params::new());
    single(&mut v, "Thm8.kdf", "Thm8.kdf", e, 1e-12, run_thm8, Params::new());
    single(&mut v, "KdFdef.degenerate", "KdFdef.degenerate", e, 1e-13, run_kdf_degenerate, Params::new());
    single(&mut v, "Qdef.composition", "Qdef.composition", e, 1e-13, run_qdef, Params::new());
    single(&mut v, "Cor6.offdiag", "Cor6.offdiag", q, 1e-8, run_cor6_offdiag, Params::new());
    single(&mut v, "Thm3.construction", "Thm3.construction", q, 1e-6, run_thm3_matrix, Params::new());
    // The 5x5 biorthogonality matrix at the headline parameters.
    for n in 0..=4u32 {
        for r in 0..=4u32 {
            let tol = if n == r { 1e-6 } else { 1e-8 };
            single(
                &mut v,
                &format!("IKort.delta.n{n}r{r}"),
                "IKort.delta",
                q,
                tol,
                run_ikort_cell,
                params_from(&[
                    ("n", f64::from(n)),
                    ("r", f64::from(r)),
                    ("p", 10.0),
                    ("q", 0.5),
                    ("upsilon", 2.0),
                    ("nmax", 4.0),
                ]),
            );
        }
    }
    single(&mut v, "IKanchor.p3", "IKanchor.p3", q, 1e-8, run_ik_anchor, params_from(&[("p", 3.0), ("q", 1.0)]));
    single(&mut v, "Edef.anchor", "Edef.anchor", e, 1e-12, run_edef_anchor, Params::new());
    single(&mut v, "Remark10.truncation", "Remark10.truncation", e, 1e-13, run_remark10, Params::new());
    single(&mut v, "Prabhakar.reduction", "Prabhakar.reduction", e, 1e-12, run_prabhakar, Params::new());
    single(&mut v, "IErel.equiv", "IErel.equiv", e, 1e-12, run_ierel, Params::new());
    single(&mut v, "Laplace.def", "Laplace.def", q, 1e-9, run_laplace_def, Params::new());
    single(&mut v, "Elap.closed_vs_quad", "Elap.closed_vs_quad", q, 1e-8, run_elap, Params::new());
    single(&mut v, "Elap.cor17", "Elap.cor17", q, 1e-8, run_elap_cor17, Params::new());
    single(&mut v, "Elap.corIK", "Elap.corIK", q, 1e-8, run_elap_cor_ik, Params::new());
    single(&mut v, "RL.powerrule", "RL.powerrule", q, 1e-9, run_rl_powerrule, Params::new());
    single(&mut v, "RL.semigroup", "RL.semigroup", q, 1e-9, run_rl_semigroup, Params::new());
    single(&mut v, "Efracint.shift", "Efracint.shift", q, 1e-6, run_efracint, Params::new());
    single(&mut v, "Efracint.poly", "Efracint.poly", q, 1e-6, run_efracint_poly, Params::new());
    single(&mut v, "Efracder.inverse", "Efracder.inverse", q, 1e-5, run_efracder, Params::new());
    single(&mut v, "Efracder.poly", "Efracder.poly", q, 1e-5, run_efracder_poly, Params::new());
    single(&mut v, "Fourier.def", "Fourier.def", q, 1e-8, run_fourier_def, Params::new());
    single(&mut v, "Parseval.def1d", "Parseval.def1d", q, 1e-8, run_parseval_1d, Params::new());
    for (i, &x1) in [0.0, 0.5, 1.0].iter().enumerate() {
        for (j, &x2) in [0.0, 0.5, 1.0].iter().enumerate() {
            single(
                &mut v,
                &format!("F1.closed_vs_quad.p{i}{j}"),
                "F1.closed_vs_quad",
                q,
                1e-5,
                run_f1_point,
                params_from(&[("xi1", x1), ("xi2", x2), ("nmax", 2.0)]),
            );
            single(
                &mut v,
                &format!("F2.closed_vs_quad.p{i}{j}"),
                "F2.closed_vs_quad",
                q,
                1e-5,
                run_f2_point,
                params_from(&[("xi1", x1), ("xi2", x2), ("nmax", 2.0)]),
            );
        }
    }
    for (n, r) in [(0u32, 0u32), (0, 1), (1, 0), (1, 1)] {
        single(
            &mut v,
            &format!("Parseval.eq1.n{n}r{r}"),
            "Parseval.eq1",
            q,
            1e-3,
            run_parseval_eq1,
            params_from(&[("n", f64::from(n)), ("r", f64::from(r))]),
        );
    }
    for (n, r) in [(0u32, 0u32), (1, 1), (0, 1)] {
        single(
            &mut v,
            &format!("Ups.biortho.n{n}r{r}"),
            "Ups.biortho",
            CheckKind::Extended,
            5e-3,
            run_upsilon_biortho,
            params_from(&[("n", f64::from(n)), ("r", f64::from(r))]),
        );
    }
    single(&mut v, "Remark28.positivity", "Remark28.positivity", e, 1e-12, run_remark28, Params::new());
    for n in 0..=3u32 {
        single(
            &mut v,
            &format!("limI.convergence.n{n}"),
            "limI.convergence",
            CheckKind::Limit,
            f64::INFINITY,
            run_lim_i,
            params_from(&[("n", f64::from(n)), ("q", 0.5), ("upsilon", 2.0), ("z", 1.0), ("t", 1.0)]),
        );
        single(
            &mut v,
            &format!("limQ.convergence.n{n}"),
            "limQ.convergence",
            CheckKind::Limit,
            f64::INFINITY,
            run_lim_q,
            params_from(&[("n", f64::from(n)), ("q", 0.5), ("upsilon", 2.0), ("z", 1.0), ("t", 1.0)]),
        );
    }
    single(&mut v, "polH.anchor", "polH.anchor", e, 1e-12, run_polh_anchor, Params::new());
    single(&mut v, "MI.anchor", "MI.anchor", e, 1e-12, run_mi_anchor, Params::new());
    single(&mut v, "Remark32.reduction", "Remark32.reduction", e, 1e-12, run_remark32, Params::new());
    single(&mut v, "MIkampe.equiv", "MIkampe.equiv", e, 1e-12, run_mikampe, Params::new());
    single(&mut v, "Cor34.equiv", "Cor34.equiv", e, 1e-12, run_cor34, Params::new());
    single(&mut v, "ModEdef.anchor", "ModEdef.anchor", e, 1e-12, run_modedef_anchor, Params::new());
    single(&mut v, "Remark36.collapse", "Remark36.collapse", e, 1e-11, run_remark36, Params::new());
    single(&mut v, "modIE.equiv", "modIE.equiv", e, 1e-12, run_modie, Params::new());
    single(&mut v, "Cor38.reduction", "Cor38.reduction", e, 1e-12, run_cor38, Params::new());
    single(&mut v, "ML6lap.1d", "ML6lap.1d", q, 1e-8, run_ml6lap_1d, Params::new());
    single(&mut v, "ML6lap.2d", "ML6lap.2d", q, 1e-7, run_ml6lap_2d, Params::new());
    single(&mut v, "ML6lap.2dpoly", "ML6lap.2dpoly", q, 1e-6, run_ml6lap_2dpoly, Params::new());
    single(&mut v, "RL2.powerrule", "RL2.powerrule", q, 1e-9, run_rl2_powerrule, Params::new());
    single(&mut v, "modEfracint.shift", "modEfracint.shift", q, 1e-6, run_modefracint, Params::new());
    single(&mut v, "modEfracint.poly", "modEfracint.poly", q, 1e-6, run_modefracint_poly, Params::new());
    single(&mut v, "modEdoublefracint.shift", "modEdoublefracint.shift", q, 1e-6, run_modedoublefracint, Params::new());
    single(&mut v, "modEdoublefracint.polyform", "modEdoublefracint.polyform", q, 1e-6, run_modedoublefracint_poly, Params::new());
    single(&mut v, "modEfracder.inverse", "modEfracder.inverse", q, 1e-5, run_modefracder, Params::new());
    single(&mut v, "modEdoublefracder.inverse", "modEdoublefracder.inverse", q, 1e-5, run_modedoublefracder, Params::new());
    single(&mut v, "LI.laplace", "LI.laplace", q, 1e-7, run_li_laplace, Params::new());
    single(&mut v, "DIE.roundtrip.n0", "DIE.roundtrip", q, 1e-6, run_die_roundtrip, params_from(&[("n", 0.0)]));
    single(&mut v, "DIE.roundtrip.n1", "DIE.roundtrip", q, 1e-3, run_die_roundtrip, params_from(&[("n", 1.0)]));
    single(&mut v, "IO.termwise", "IO.termwise", q, 1e-7, run_io_termwise, Params::new());
    single(&mut v, "op0.reduction", "op0.reduction", q, 1e-9, run_op0, Params::new());
    single(&mut v, "con.series", "con.series", e, 1e-10, run_con_series, Params::new());
    single(&mut v, "con.bound", "con.bound", q, 1e-6, run_con_bound, Params::new());
    single(&mut v, "con.boundC", "con.boundC", q, 1e-6, run_con_bound_maxnorm, Params::new());
    single(&mut v, "DIT.product", "DIT.product", q, 1e-5, run_dit, Params::new());
    single(&mut v, "E1.semigroup", "E1.semigroup", q, 1e-4, run_e1_semigroup, Params::new());
    single(&mut v, "E2.rlreduction", "E2.rlreduction", q, 1e-6, run_e2_rl, Params::new());
    single(&mut v, "E1cor.composition", "E1cor.composition", q, 1e-6, run_e1cor_composition, Params::new());
    single(&mut v, "Dinv.leftinverse", "Dinv.leftinverse", q, 1e-4, run_dinv, Params::new());
    v
}

/// Glob match supporting `*` (any substring) and `?` (any one character).
pub fn glob_match(pattern: &str, text: &str) -> bool {
    fn inner(p: &[u8], t: &[u8]) -> bool {
        match (p.first(), t.first()) {
            (None, None) => true,
            (Some(b'*'), _) => inner(&p[1..], t) || (!t.is_empty() && inner(p, &t[1..])),
            (Some(b'?'), Some(_)) => inner(&p[1..], &t[1..]),
            (Some(a), Some(b)) if a == b => inner(&p[1..], &t[1..]),
            _ => false,
        }
    }
    inner(pattern.as_bytes(), text.as_bytes())
}

fn finalize(
    instance_id: &str,
    params: &Params,
    kind: CheckKind,
    tolerance: f64,
    started: Instant,
    result: Result<Outcome>,
) -> VerificationReport {
    let runtime_ms = started.elapsed().as_millis() as u64;
    match result {
        Ok(out) => {
            let abs_err = out.lhs.dist(out.rhs);
            let abs_floor = 1e-10 * out.scale.abs().max(f64::MIN_POSITIVE);
            // Against a numerically zero reference the relative error is
            // reported against the problem scale instead of blowing up.
            let rel_err = abs_err / out.rhs.magnitude().max(abs_floor);
            let passed = match out.passed_override {
                Some(p) => p,
                None => {
                    rel_err <= tolerance
                        || (out.rhs.magnitude() < abs_floor
                            && abs_err <= tolerance * out.scale.abs().max(1.0))
                }
            };
            VerificationReport {
                check_id: instance_id.to_string(),
                params: params.clone(),
                lhs: out.lhs,
                rhs: out.rhs,
                abs_err,
                rel_err,
                passed,
                runtime_ms,
                notes: out.notes,
            }
        }
        Err(err) => VerificationReport {
            check_id: instance_id.to_string(),
            params: params.clone(),
            lhs: Value::Real(f64::NAN),
            rhs: Value::Real(f64::NAN),
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            passed: false,
            runtime_ms,
            notes: format!("{err} ({kind:?} check, tolerance {tolerance:e})"),
        },
    }
}

/// Runs one check. The id may be an exact instance id or a family id, in
/// which case `check.params` override the instance defaults.
pub fn run_check(check: &IdentityCheck) -> Result<VerificationReport> {
    let reg = registry();
    let instance = reg
        .iter()
        .find(|c| c.id == check.id)
        .or_else(|| reg.iter().find(|c| c.family == check.id))
        .ok_or_else(|| Error::UnknownCheck(check.id.clone()))?;
    let mut params = instance.params.clone();
    for (k, val) in &check.params {
        params.insert(k.clone(), *val);
    }
    let tolerance = if check.tolerance.is_finite() && check.tolerance > 0.0 {
        check.tolerance
    } else {
        instance.tolerance
    };
    let started = Instant::now();
    let result = (instance.runner)(&params);
    Ok(finalize(&check.id, &params, instance.kind, tolerance, started, result))
}

/// Runs every registered check whose id matches the glob; Extended checks
/// run only when `include_extended` is set. Checks are independent and fan
/// out across `parallelism` workers; reports come back in id-sorted order
/// regardless of worker count.
pub fn run_suite(filter: &str, parallelism: usize, include_extended: bool) -> Vec<VerificationReport> {
    use rayon::prelude::*;
    let selected: Vec<&CheckInstance> = registry()
        .iter()
        .filter(|c| glob_match(filter, &c.id))
        .filter(|c| include_extended || c.kind != CheckKind::Extended)
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .expect("thread pool");
    let mut reports: Vec<VerificationReport> = pool.install(|| {
        selected
            .par_iter()
            .map(|inst| {
                let started = Instant::now();
                let result = (inst.runner)(&inst.params);
                finalize(&inst.id, &inst.params, inst.kind, inst.tolerance, started, result)
            })
            .collect()
    });
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    reports
}

/// All registered instance ids (sorted), for discovery and the manifest test.
pub fn catalog_ids() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = registry().iter().map(|c| c.id.as_str()).collect();
    ids.sort_unstable();
    ids
}

/// (N+1)x(N+1) matrix of J(n, r)/diag-scale values for inspection and CSV
/// export.
pub fn tabulate_biorthogonality(
    p: f64,
    q: f64,
    upsilon: u32,
    nmax: u32,
    cfg: &QuadratureConfig,
) -> Result<Vec<Vec<f64>>> {
    if f64::from(nmax) >= p - 1.0 {
        return Err(Error::domain(format!("N = {nmax} must satisfy N < p - 1 = {}", p - 1.0)));
    }
    let mut scale: f64 = 0.0;
    for n in 0..=nmax {
        scale = scale.max(biorthogonality_diag(n, p)?.abs());
    }
    let mut rows = Vec::new();
    for n in 0..=nmax {
        let mut row = Vec::new();
        for r in 0..=nmax {
            let v = biorthogonality_cell(n, r, p, q, upsilon, cfg)?;
            let denom = if n == r { biorthogonality_diag(n, p)? } else { scale };
            row.push(v / denom);
        }
        rows.push(row);
    }
    Ok(rows)
}
