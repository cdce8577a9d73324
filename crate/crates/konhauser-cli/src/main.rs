//! Command-line interface: evaluate the polynomial and Mittag-Leffler
//! families, run the identity-verification suite, and emit tabulated data
//! for plots.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/parameter error.
//! stdout carries data; stderr carries diagnostics.

use clap::{Args, Parser, Subcommand, ValueEnum};
use konhauser_kit::harness::{run_check, run_suite, IdentityCheck, Params, VerificationReport};
use konhauser_kit::hyper::SeriesPolicy;
use konhauser_kit::ml::{ml4, ml6, prabhakar, Ml4Params, Ml6Params};
use konhauser_kit::poly::{
    finite_i, hk_poly, ik_dual, ik_mod, ik_poly, konhauser_y, konhauser_z, PolyParams,
};
use konhauser_kit::quad::QuadratureConfig;
use std::collections::BTreeMap;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "konhauser",
    about = "Finite bivariate I-Konhauser polynomials, bivariate Mittag-Leffler functions, and their identity-verification suite",
    version
)]
struct Cli {
    /// Path to a key=value config file (also via KONHAUSER_KIT_CONFIG).
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Z,
    Y,
    I,
    #[value(name = "IK", alias = "ik")]
    Ik,
    #[value(name = "IKDual", alias = "ikdual")]
    IkDual,
    #[value(name = "IKMod", alias = "ikmod")]
    IkMod,
    #[value(name = "HK", alias = "hk")]
    Hk,
    #[value(name = "ML4", alias = "ml4")]
    Ml4,
    #[value(name = "ML6", alias = "ml6")]
    Ml6,
    Prabhakar,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Args)]
struct CommonNumeric {
    /// Relative quadrature tolerance.
    #[arg(long)]
    quad_rel_tol: Option<f64>,
    /// Maximum quadrature refinement level.
    #[arg(long)]
    quad_max_level: Option<u32>,
    /// Series tail cutoff.
    #[arg(long)]
    series_tail_epsilon: Option<f64>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker count for the suite.
    #[arg(long)]
    parallelism: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a family at one or more points.
    Eval {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 1)]
        upsilon: u32,
        /// γ parameter (Z/Y weight, IKMod, Prabhakar).
        #[arg(long)]
        gamma: Option<f64>,
        /// c parameter of the modified family.
        #[arg(long)]
        c: Option<f64>,
        /// Mittag-Leffler slots g1..g4 or g1..g6 as a comma list.
        #[arg(long, value_delimiter = ',')]
        g: Vec<f64>,
        /// z coordinates (comma list; scalar broadcasts).
        #[arg(long, value_delimiter = ',')]
        z: Vec<f64>,
        /// t coordinates (comma list; scalar broadcasts).
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Run identity checks matching a glob and stream one JSON report per line.
    Verify {
        /// Glob over check ids, e.g. "IKort.*".
        filter: String,
        /// Include Extended (slow) checks.
        #[arg(long)]
        include_extended: bool,
        /// Parameter overrides for a single named check, key=value.
        #[arg(long = "set", value_parser = parse_kv)]
        sets: Vec<(String, f64)>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        upsilon: Option<f64>,
        #[arg(long)]
        nmax: Option<f64>,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Emit CSV tables (biorthogonality matrix, limit curves, Laplace errors).
    Tabulate {
        #[command(subcommand)]
        kind: TabulateKind,
    },
}

#[derive(Subcommand)]
enum TabulateKind {
    /// Normalized biorthogonality matrix J(n,r)/scale.
    Biortho {
        #[arg(long, default_value_t = 10.0)]
        p: f64,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 2)]
        upsilon: u32,
        #[arg(long, default_value_t = 4)]
        nmax: u32,
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Scaled-polynomial limit errors over p = 1e3, 1e4, 1e5.
    Limit {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value_t = 0.5)]
        q: f64,
        #[arg(long, default_value_t = 2)]
        upsilon: u32,
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Closed-form vs quadrature Laplace transform error.
    Laplace {
        #[arg(long, default_value_t = 2.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        #[arg(long, default_value_t = 1.5)]
        q: f64,
        #[arg(long, default_value_t = 2)]
        upsilon: u32,
        #[arg(long, default_value_t = 0.1)]
        z: f64,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.2, 2.0, 3.0])]
        g: Vec<f64>,
        #[arg(long)]
        out: Option<String>,
        #[command(flatten)]
        common: CommonNumeric,
    },
}

fn parse_kv(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s}"))?;
    let value: f64 = v.parse().map_err(|e| format!("bad value in {s}: {e}"))?;
    Ok((k.to_string(), value))
}

/// Resolved configuration: defaults, overridden by the config file,
/// overridden by flags.
#[derive(Clone, Debug)]
struct CliConfig {
    quad_rel_tol: f64,
    quad_abs_tol: f64,
    quad_max_level: u32,
    series_tail_epsilon: f64,
    output_format: OutputFormat,
    parallelism: usize,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            quad_rel_tol: 1e-10,
            quad_abs_tol: 1e-14,
            quad_max_level: 12,
            series_tail_epsilon: 1e-16,
            output_format: OutputFormat::Plain,
            parallelism: 1,
        }
    }
}

impl CliConfig {
    fn load(path: Option<&str>) -> Result<Self, String> {
        let mut cfg = CliConfig::default();
        let path = path.map(str::to_string).or_else(|| std::env::var("KONHAUSER_KIT_CONFIG").ok());
        let Some(path) = path else { return Ok(cfg) };
        let text =
            std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("{path}:{}: expected key=value", lineno + 1))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "quad_rel_tol" => cfg.quad_rel_tol = parse_f64(&path, lineno, v)?,
                "quad_abs_tol" => cfg.quad_abs_tol = parse_f64(&path, lineno, v)?,
                "quad_max_level" => cfg.quad_max_level = parse_f64(&path, lineno, v)? as u32,
                "series_tail_epsilon" => cfg.series_tail_epsilon = parse_f64(&path, lineno, v)?,
                "parallelism" => cfg.parallelism = parse_f64(&path, lineno, v)? as usize,
                "output_format" => {
                    cfg.output_format = match v {
                        "json" => OutputFormat::Json,
                        "csv" => OutputFormat::Csv,
                        "plain" => OutputFormat::Plain,
                        other => return Err(format!("{path}: unknown output_format {other}")),
                    }
                }
                other => return Err(format!("{path}: unknown config key {other}")),
            }
        }
        Ok(cfg)
    }

    fn apply_flags(&mut self, c: &CommonNumeric) {
        if let Some(v) = c.quad_rel_tol {
            self.quad_rel_tol = v;
        }
        if let Some(v) = c.quad_max_level {
            self.quad_max_level = v;
        }
        if let Some(v) = c.series_tail_epsilon {
            self.series_tail_epsilon = v;
        }
        if let Some(v) = c.format {
            self.output_format = v;
        }
        if let Some(v) = c.parallelism {
            self.parallelism = v;
        }
    }

    fn quad(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.quad_rel_tol,
            abs_tol: self.quad_abs_tol,
            max_level: self.quad_max_level,
        }
    }

    fn policy(&self) -> SeriesPolicy {
        SeriesPolicy::with_tail_epsilon(self.series_tail_epsilon)
    }
}

fn parse_f64(path: &str, lineno: usize, v: &str) -> Result<f64, String> {
    v.parse().map_err(|e| format!("{path}:{}: bad number {v}: {e}", lineno + 1))
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match CliConfig::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    match cli.command {
        Command::Eval { family, n, p, q, upsilon, gamma, c, g, z, t, common } => {
            cfg.apply_flags(&common);
            cmd_eval(&cfg, family, n, p, q, upsilon, gamma, c, &g, &z, &t)
        }
        Command::Verify { filter, include_extended, sets, p, q, upsilon, nmax, common } => {
            cfg.apply_flags(&common);
            let mut overrides: Params = sets.into_iter().collect();
            for (k, v) in [("p", p), ("q", q), ("upsilon", upsilon), ("nmax", nmax)] {
                if let Some(v) = v {
                    overrides.insert(k.to_string(), v);
                }
            }
            cmd_verify(&cfg, &filter, include_extended, overrides)
        }
        Command::Tabulate { kind } => cmd_tabulate(cfg, kind),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    cfg: &CliConfig,
    family: Family,
    n: u32,
    p: Option<f64>,
    q: Option<f64>,
    upsilon: u32,
    gamma: Option<f64>,
    c: Option<f64>,
    g: &[f64],
    z: &[f64],
    t: &[f64],
) -> ExitCode {
    let policy = cfg.policy();
    let needs_z = matches!(
        family,
        Family::Ik | Family::IkDual | Family::IkMod | Family::Hk | Family::Ml4 | Family::Ml6
    );
    let points = match broadcast_points(z, t, needs_z) {
        Ok(pts) => pts,
        Err(e) => return usage_error(e),
    };
    let mut rows: Vec<(Vec<(&str, f64)>, f64)> = Vec::new();
    for &(zv, tv) in &points {
        let value = match family {
            Family::Z => gamma
                .ok_or_else(|| "family Z requires --gamma > -1".to_string())
                .and_then(|gm| konhauser_z(n, gm, upsilon, tv).map_err(|e| e.to_string())),
            Family::Y => gamma
                .ok_or_else(|| "family Y requires --gamma > -1".to_string())
                .and_then(|gm| konhauser_y(n, gm, upsilon, tv).map_err(|e| e.to_string())),
            Family::I => match p {
                Some(pp) => Ok(finite_i(n, pp, tv)),
                None => Err("family I requires --p".to_string()),
            },
            Family::Ik => require_pq(p, q).and_then(|(pp, qq)| {
                ik_poly(&PolyParams::new(n, pp, qq, upsilon), zv, tv).map_err(|e| e.to_string())
            }),
            Family::IkDual => require_pq(p, q).and_then(|(pp, qq)| {
                ik_dual(&PolyParams::new(n, pp, qq, upsilon), zv, tv).map_err(|e| e.to_string())
            }),
            Family::IkMod => require_pq(p, q).and_then(|(pp, qq)| {
                let gm = gamma.ok_or_else(|| "family IKMod requires --gamma".to_string())?;
                let cc = c.ok_or_else(|| "family IKMod requires --c".to_string())?;
                ik_mod(&PolyParams::new(n, pp, qq, upsilon).with_mod(gm, cc), zv, tv)
                    .map_err(|e| e.to_string())
            }),
            Family::Hk => match q.or(gamma) {
                Some(mu) => hk_poly(n, mu, upsilon, zv, tv).map_err(|e| e.to_string()),
                None => Err("family HK requires --q (the weight exponent mu)".to_string()),
            },
            Family::Ml4 => {
                if g.len() != 4 {
                    Err("family ML4 requires --g g1,g2,g3,g4".to_string())
                } else {
                    require_q(q).and_then(|qq| {
                        let params =
                            Ml4Params { g1: g[0], g2: g[1], g3: g[2], g4: g[3], q: qq, upsilon };
                        ml4(&params, zv, tv, &policy).map_err(|e| e.to_string())
                    })
                }
            }
            Family::Ml6 => {
                if g.len() != 6 {
                    Err("family ML6 requires --g g1,...,g6".to_string())
                } else {
                    require_pq(p, q).and_then(|(pp, qq)| {
                        let params = Ml6Params {
                            g: [g[0], g[1], g[2], g[3], g[4], g[5]],
                            p: pp,
                            q: qq,
                            upsilon,
                        };
                        ml6(&params, zv, tv, &policy).map_err(|e| e.to_string())
                    })
                }
            }
            Family::Prabhakar => {
                let gm = gamma.unwrap_or(1.0);
                require_pq(p, q)
                    .and_then(|(pp, qq)| prabhakar(gm, pp, qq, tv, &policy).map_err(|e| e.to_string()))
            }
        };
        match value {
            Ok(v) => {
                let mut inputs = vec![("n", f64::from(n))];
                if needs_z {
                    inputs.push(("z", zv));
                }
                inputs.push(("t", tv));
                rows.push((inputs, v));
            }
            Err(e) => return usage_error(format!("violated precondition: {e}")),
        }
    }
    emit_eval_rows(cfg, &rows);
    ExitCode::SUCCESS
}

fn require_pq(p: Option<f64>, q: Option<f64>) -> Result<(f64, f64), String> {
    match (p, q) {
        (Some(p), Some(q)) => Ok((p, q)),
        _ => Err("this family requires --p and --q".to_string()),
    }
}

fn require_q(q: Option<f64>) -> Result<f64, String> {
    q.ok_or_else(|| "this family requires --q".to_string())
}

fn broadcast_points(z: &[f64], t: &[f64], needs_z: bool) -> Result<Vec<(f64, f64)>, String> {
    let t = if t.is_empty() { vec![0.0] } else { t.to_vec() };
    if !needs_z {
        return Ok(t.iter().map(|&tv| (0.0, tv)).collect());
    }
    let z = if z.is_empty() { vec![0.0] } else { z.to_vec() };
    if z.len() == t.len() {
        Ok(z.iter().copied().zip(t.iter().copied()).collect())
    } else if z.len() == 1 {
        Ok(t.iter().map(|&tv| (z[0], tv)).collect())
    } else if t.len() == 1 {
        Ok(z.iter().map(|&zv| (zv, t[0])).collect())
    } else {
        Err(format!("z and t point lists have incompatible lengths {} and {}", z.len(), t.len()))
    }
}

fn emit_eval_rows(cfg: &CliConfig, rows: &[(Vec<(&str, f64)>, f64)]) {
    match cfg.output_format {
        OutputFormat::Json => {
            for (inputs, v) in rows {
                let mut map = BTreeMap::new();
                for (k, val) in inputs {
                    map.insert((*k).to_string(), *val);
                }
                map.insert("value".to_string(), *v);
                println!("{}", serde_json::to_string(&map).expect("serialize"));
            }
        }
        OutputFormat::Csv => {
            if let Some((inputs, _)) = rows.first() {
                let mut header: Vec<&str> = inputs.iter().map(|(k, _)| *k).collect();
                header.push("value");
                println!("{}", header.join(","));
            }
            for (inputs, v) in rows {
                let mut fields: Vec<String> = inputs.iter().map(|(_, x)| format!("{x}")).collect();
                fields.push(format!("{v}"));
                println!("{}", fields.join(","));
            }
        }
        OutputFormat::Plain => {
            for (inputs, v) in rows {
                let fields: Vec<String> = inputs.iter().map(|(k, x)| format!("{k}={x}")).collect();
                println!("{} value={v}", fields.join(" "));
            }
        }
    }
}

fn cmd_verify(cfg: &CliConfig, filter: &str, include_extended: bool, overrides: Params) -> ExitCode {
    let reports: Vec<VerificationReport> = if !overrides.is_empty() {
        // Single named check with parameter overrides.
        let check = IdentityCheck {
            id: filter.to_string(),
            params: overrides,
            tolerance: f64::NAN,
            kind: konhauser_kit::harness::CheckKind::Quadrature,
        };
        match run_check(&check) {
            Ok(r) => vec![r],
            Err(e) => return usage_error(e),
        }
    } else {
        let reports = run_suite(filter, cfg.parallelism, include_extended);
        if reports.is_empty() {
            return usage_error(format!("filter {filter:?} matches no registered check"));
        }
        reports
    };
    let mut all_passed = true;
    for r in &reports {
        all_passed &= r.passed;
        println!("{}", serde_json::to_string(r).expect("serialize report"));
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_tabulate(mut cfg: CliConfig, kind: TabulateKind) -> ExitCode {
    match kind {
        TabulateKind::Biortho { p, q, upsilon, nmax, out, common } => {
            cfg.apply_flags(&common);
            let matrix = match konhauser_kit::harness::tabulate_biorthogonality(
                p,
                q,
                upsilon,
                nmax,
                &cfg.quad(),
            ) {
                Ok(m) => m,
                Err(e) => return usage_error(e),
            };
            let mut text = String::from("n,r,value\n");
            for (n, row) in matrix.iter().enumerate() {
                for (r, v) in row.iter().enumerate() {
                    text.push_str(&format!("{n},{r},{v}\n"));
                }
            }
            write_out(out.as_deref(), &text)
        }
        TabulateKind::Limit { n, q, upsilon, z, t, out, common } => {
            cfg.apply_flags(&common);
            let target = match hk_poly(n, q, upsilon, z, t) {
                Ok(h) => konhauser_kit::gamma::factorial_scaled(n).to_f64() * h,
                Err(e) => return usage_error(e),
            };
            let mut rows = Vec::new();
            for &pp in &[1e3, 1e4, 1e5] {
                let params = PolyParams::new(n, pp, q, upsilon);
                let scaled = match ik_poly(&params, z / pp.sqrt(), t) {
                    Ok(v) => pp.powf(-f64::from(n) / 2.0) * v,
                    Err(e) => return usage_error(e),
                };
                rows.push((pp, scaled));
            }
            let sigma =
                if (rows[2].1 - target).abs() <= (rows[2].1 + target).abs() { 1.0 } else { -1.0 };
            let mut text = String::from("p,scaled,target,sigma,error\n");
            for (pp, scaled) in rows {
                let err = (scaled - sigma * target).abs() / target.abs().max(1e-300);
                text.push_str(&format!("{pp},{scaled},{},{sigma},{err}\n", sigma * target));
            }
            write_out(out.as_deref(), &text)
        }
        TabulateKind::Laplace { a, w, q, upsilon, z, g, out, common } => {
            cfg.apply_flags(&common);
            if g.len() != 4 {
                return usage_error("laplace tabulation needs --g g1,g2,g3,g4");
            }
            let params = Ml4Params { g1: g[0], g2: g[1], g3: g[2], g4: g[3], q, upsilon };
            let closed = match konhauser_kit::ml::laplace_closed_ml4(&params, z, w, a) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let policy = cfg.policy();
            let quad = match konhauser_kit::transforms::laplace_numeric(
                |tv| {
                    if tv == 0.0 {
                        return 0.0;
                    }
                    tv.powf(q - 1.0) * ml4(&params, z, w * tv, &policy).unwrap_or(f64::NAN)
                },
                a,
                &cfg.quad(),
            ) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let rel = (closed - quad).abs() / quad.abs().max(f64::MIN_POSITIVE);
            let text = format!(
                "a,w,q,upsilon,z,closed,quadrature,rel_err\n{a},{w},{q},{upsilon},{z},{closed},{quad},{rel}\n"
            );
            write_out(out.as_deref(), &text)
        }
    }
}

fn write_out(path: Option<&str>, text: &str) -> ExitCode {
    match path {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                return usage_error(format!("cannot write {p}: {e}"));
            }
            ExitCode::SUCCESS
        }
        None => {
            print!("{text}");
            ExitCode::SUCCESS
        }
    }
}
