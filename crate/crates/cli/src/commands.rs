use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use heisenberg_fractional::heisenberg::MeasureSpec;
use heisenberg_fractional::laguerre_transform::{
    fkbeta_hat_closed, fkbeta_hat_quadrature, fkbeta_hat_sup_bound, lemma7_sum, TransformQuery,
};
use heisenberg_fractional::quad::QuadratureSpec;
use heisenberg_fractional::scaling::{
    dyadic_tv_slope, lower_bound_report, lower_bound_row, norm_report, norm_row, NormGrid, TestBoxFamily,
};
use heisenberg_fractional::spectrum::{
    default_xi_grid, mollifier_phi_n, nu_endpoint_bound, nu_quadrature, product_strip, r_lambda_sup, Cutoff,
    MollifierSpec, SpectralQuery,
};
use heisenberg_fractional::type_set::{
    classify_point, emit_region, necessary_region, parse_rational, radial_region, Format, TypePoint, Variant,
};
use heisenberg_fractional::{BigRational, Complex64};

use crate::table::{header_lines, Cell, Table};
use crate::{merge_config, CliError, Common, Outcome};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn config_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable config")
}

fn table_outcome(table: Table, format: &str, command: &str, config: &serde_json::Value, passed: bool) -> Result<Outcome, CliError> {
    Ok(Outcome {
        document: table.render(format, command, config)?,
        notes: String::new(),
        passed,
    })
}

// ---------------------------------------------------------------- typeset

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct TypesetArgs {
    /// fractional or radial.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Exact decimal or fraction, e.g. `1`, `0.5`, `3/2`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    /// Degree for the radial variant.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Point `inv_p,inv_q` to classify; repeatable.
    #[arg(long = "query", allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<Vec<String>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Serialize)]
struct TypesetConfig {
    variant: String,
    n: u32,
    gamma: Option<String>,
    m: Option<u32>,
    query: Vec<String>,
    format: String,
}

fn parse_pair(s: &str) -> Result<TypePoint<BigRational>, CliError> {
    let (u, v) = s
        .split_once(',')
        .ok_or_else(|| bad(format!("query `{s}` must be `inv_p,inv_q`")))?;
    Ok(TypePoint::new(parse_rational(u)?, parse_rational(v)?)?)
}

pub fn typeset(args: &TypesetArgs) -> Result<Outcome, CliError> {
    let a = merge_config(args, args.common.config.as_ref())?;
    let variant = a.variant.clone().unwrap_or_else(|| "fractional".into());
    let n = a.n.unwrap_or(1);
    let format_name = a.common.format.clone().unwrap_or_else(|| "json".into());
    let format: Format = format_name.parse()?;
    let (var, report, cfg) = match variant.as_str() {
        "fractional" => {
            let g = a.gamma.clone().ok_or_else(|| bad("--gamma is required for the fractional variant"))?;
            let gamma = parse_rational(&g)?;
            let report = necessary_region(n, &gamma)?;
            let cfg = TypesetConfig {
                variant: variant.clone(),
                n,
                gamma: Some(g),
                m: None,
                query: a.query.clone().unwrap_or_default(),
                format: format_name.clone(),
            };
            (Variant::Fractional { n, gamma }, report, cfg)
        }
        "radial" => {
            let m = a.m.ok_or_else(|| bad("--m is required for the radial variant"))?;
            let report = radial_region(n, m)?;
            let cfg = TypesetConfig {
                variant: variant.clone(),
                n,
                gamma: None,
                m: Some(m),
                query: a.query.clone().unwrap_or_default(),
                format: format_name.clone(),
            };
            (Variant::Radial { n, m }, report, cfg)
        }
        other => return Err(bad(format!("unknown variant `{other}`"))),
    };
    let config = config_value(&cfg);
    let mut document = emit_region(&report, format);
    match format {
        Format::Csv => document = header_lines("typeset", &config, "# ") + &document,
        Format::Svg => document = format!("<!-- hfrac {} typeset config {config} -->\n{document}", env!("CARGO_PKG_VERSION")),
        Format::Json => {}
    }
    let mut notes = String::new();
    for q in &cfg.query {
        let p = parse_pair(q)?;
        let status = classify_point(&var, &p)?;
        notes.push_str(&format!("query {q} {status}\n"));
    }
    if !cfg.query.is_empty() && args.common.out.is_none() {
        document.clear();
    }
    Ok(Outcome {
        document,
        notes,
        passed: true,
    })
}

// ---------------------------------------------------------- verify-lemmas

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    /// Complex values like `0.5`, `-0.2+0.3i`; `n-0.5` means n - 1/2 for each n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xis: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binomial_n_max: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binomial_ks: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binomial_re_betas: Option<Vec<f64>>,
    /// Relative perturbation injected into the closed forms (negative control).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub n_max: u32,
    pub k_max: u32,
    pub betas: Vec<String>,
    pub xis: Vec<f64>,
    pub binomial_n_max: u32,
    pub binomial_ks: Vec<u32>,
    pub binomial_re_betas: Vec<f64>,
    pub perturb: f64,
    pub tol: f64,
    pub binomial_tol: f64,
    pub relative_floor: f64,
    pub format: String,
}

impl VerifyArgs {
    pub fn resolve(&self) -> Result<VerifyConfig, CliError> {
        let a = merge_config(self, self.common.config.as_ref())?;
        let cfg = VerifyConfig {
            n_max: a.n_max.unwrap_or(3),
            k_max: a.k_max.unwrap_or(15),
            betas: a.betas.unwrap_or_else(|| {
                ["-0.4", "0", "0.5", "1.7", "-0.2+0.3i", "n-0.5"].map(String::from).to_vec()
            }),
            xis: a.xis.unwrap_or_else(|| vec![0.0, 0.5, -0.5, 5.0, -5.0, 40.0, -40.0]),
            binomial_n_max: a.binomial_n_max.unwrap_or(4),
            binomial_ks: a.binomial_ks.unwrap_or_else(|| vec![0, 1, 2, 5, 10, 50, 100, 250, 500]),
            binomial_re_betas: a.binomial_re_betas.unwrap_or_else(|| vec![-0.5, 0.3, 1.9]),
            perturb: a.perturb.unwrap_or(0.0),
            tol: a.common.tol.unwrap_or(1e-8),
            binomial_tol: 1e-12,
            relative_floor: 1e-6,
            format: a.common.format.unwrap_or_else(|| "csv".into()),
        };
        if cfg.n_max == 0 || cfg.binomial_n_max == 0 {
            return Err(bad("n_max must be positive"));
        }
        if !(cfg.tol > 0.0) {
            return Err(bad("--tol must be positive"));
        }
        for b in &cfg.betas {
            parse_beta(b, 1)?;
        }
        Ok(cfg)
    }
}

/// Parse `a`, `bi`, `a+bi`, `a-bi`, or `n+c` / `n-c` relative to `n`.
pub fn parse_beta(s: &str, n: u32) -> Result<Complex64, CliError> {
    let s = s.trim();
    let err = || bad(format!("cannot parse `{s}` as a complex number"));
    if let Some(rest) = s.strip_prefix('n') {
        let off: f64 = if rest.is_empty() { 0.0 } else { rest.parse().map_err(|_| err())? };
        return Ok(Complex64::new(n as f64 + off, 0.0));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(s.parse().map_err(|_| err())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        v => v,
    };
    Ok(Complex64::new(
        re.parse().map_err(|_| err())?,
        im.trim_start_matches('+').parse().map_err(|_| err())?,
    ))
}

fn binomial_exact(n: u64, k: u64) -> Option<f64> {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(c as f64)
}

enum LemmaTask {
    Transform { n: u32, k: u32, beta: Complex64, xi: f64 },
    Sum { n: u32, k: u32, re_beta: f64 },
}

const VERIFY_COLUMNS: [&str; 12] = [
    "check", "n", "k", "beta_re", "beta_im", "xi", "value_re", "value_im", "reference_re", "reference_im", "rel_err", "ok",
];

/// All rows of the verification table, in a fixed order.
pub fn verify_rows(cfg: &VerifyConfig) -> Result<Vec<Vec<Cell>>, CliError> {
    let mut tasks = Vec::new();
    for n in 1..=cfg.n_max {
        for b in &cfg.betas {
            let beta = parse_beta(b, n)?;
            for k in 0..=cfg.k_max {
                for &xi in &cfg.xis {
                    tasks.push(LemmaTask::Transform { n, k, beta, xi });
                }
            }
        }
    }
    for n in 1..=cfg.binomial_n_max {
        for &k in &cfg.binomial_ks {
            for &re_beta in &cfg.binomial_re_betas {
                tasks.push(LemmaTask::Sum { n, k, re_beta });
            }
        }
    }
    let quad = QuadratureSpec::default();
    let scale = 1.0 + cfg.perturb;
    let rows: Vec<Vec<Vec<Cell>>> = tasks
        .par_iter()
        .map(|task| -> Result<Vec<Vec<Cell>>, CliError> {
            match *task {
                LemmaTask::Transform { n, k, beta, xi } => {
                    let q = TransformQuery::new(n, k, beta, xi)?;
                    let closed = fkbeta_hat_closed(&q)? * scale;
                    let quad_v = fkbeta_hat_quadrature(&q, &quad)?.value;
                    let bound = fkbeta_hat_sup_bound(n, k, beta)?;
                    let denom = quad_v.norm().max(cfg.relative_floor * bound.value);
                    let rel = (closed - quad_v).norm() / denom;
                    let env = bound.envelope(beta, xi);
                    let ratio = closed.norm() / env;
                    let base = |check: &str| -> Vec<Cell> {
                        vec![
                            check.into(),
                            n.into(),
                            k.into(),
                            beta.re.into(),
                            beta.im.into(),
                            xi.into(),
                        ]
                    };
                    let mut r1 = base("transform");
                    r1.extend([closed.re.into(), closed.im.into(), quad_v.re.into(), quad_v.im.into()]);
                    r1.extend([rel.into(), (rel <= cfg.tol).into()]);
                    let mut r2 = base("sup_bound");
                    r2.extend([closed.norm().into(), 0.0.into(), env.into(), 0.0.into()]);
                    r2.extend([ratio.into(), (ratio <= 1.0 + 1e-12).into()]);
                    Ok(vec![r1, r2])
                }
                LemmaTask::Sum { n, k, re_beta } => {
                    let v = lemma7_sum(n, k, re_beta)? * scale;
                    let reference = binomial_exact((n + k - 1) as u64, k as u64)
                        .ok_or_else(|| bad("binomial reference overflows"))?;
                    let rel = (v - reference).abs() / reference;
                    Ok(vec![vec![
                        "binomial_sum".into(),
                        n.into(),
                        k.into(),
                        re_beta.into(),
                        0.0.into(),
                        f64::NAN.into(),
                        v.into(),
                        0.0.into(),
                        reference.into(),
                        0.0.into(),
                        rel.into(),
                        (rel <= cfg.binomial_tol).into(),
                    ]])
                }
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn count_failures(rows: &[Vec<Cell>], ok_col: usize) -> i64 {
    rows.iter().filter(|r| r[ok_col] == Cell::Bool(false)).count() as i64
}

pub fn verify_lemmas(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let cfg = args.resolve()?;
    let rows = verify_rows(&cfg)?;
    let failures = count_failures(&rows, 11);
    let mut table = Table::new(&VERIFY_COLUMNS);
    table.summary = vec![("rows", (rows.len() as i64).into()), ("failures", failures.into())];
    table.rows = rows;
    table_outcome(table, &cfg.format, "verify-lemmas", &config_value(&cfg), failures == 0)
}

// --------------------------------------------------------------- nu-sweep

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct NuSweepArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Coefficients of phi, one per plane.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    /// Defaults to the endpoint line -(2n - gamma)/(2 + gamma).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re_z: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_z: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<u32>,
    /// Explicit lambda values; overrides the dyadic grid +-2^e.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_exp_min: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_exp_max: Option<i32>,
    /// Mollifier cutoffs: positive integers or `inf`.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<Vec<String>>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Serialize)]
pub struct NuSweepConfig {
    pub n: usize,
    pub gamma: f64,
    pub a: Vec<f64>,
    pub re_z: f64,
    pub im_z: Vec<f64>,
    pub alpha_max: u32,
    pub lambdas: Vec<f64>,
    pub cutoffs: Vec<String>,
    pub quad_tol: f64,
    pub quad_rel_tol: f64,
    pub format: String,
}

impl NuSweepArgs {
    pub fn resolve(&self) -> Result<NuSweepConfig, CliError> {
        let a = merge_config(self, self.common.config.as_ref())?;
        let n = a.n.unwrap_or(1);
        let gamma = a.gamma.unwrap_or(1.0);
        let lo = a.lambda_exp_min.unwrap_or(-6);
        let hi = a.lambda_exp_max.unwrap_or(6);
        let lambdas = a.lambdas.unwrap_or_else(|| {
            (lo..=hi)
                .flat_map(|e| [-(2f64.powi(e)), 2f64.powi(e)])
                .collect()
        });
        if lambdas.iter().any(|l| *l == 0.0 || !l.is_finite()) {
            return Err(bad("lambda = 0 is not allowed"));
        }
        let cfg = NuSweepConfig {
            n,
            gamma,
            a: a.a.unwrap_or_else(|| vec![1.0; n]),
            re_z: a.re_z.unwrap_or(product_strip(n, gamma).0),
            im_z: a.im_z.unwrap_or_else(|| vec![0.0, 1.0, -1.0, 3.0, -3.0]),
            alpha_max: a.alpha_max.unwrap_or(30),
            lambdas,
            cutoffs: a.cutoffs.unwrap_or_else(|| vec!["1".into(), "10".into(), "inf".into()]),
            quad_tol: a.common.tol.unwrap_or(1e-12),
            quad_rel_tol: 1e-10,
            format: a.common.format.unwrap_or_else(|| "csv".into()),
        };
        if cfg.a.len() != n {
            return Err(bad("--a needs one coefficient per plane"));
        }
        for c in &cfg.cutoffs {
            c.parse::<Cutoff>()?;
        }
        Ok(cfg)
    }
}

const NU_COLUMNS: [&str; 8] = ["alpha", "lambda", "im_z", "N", "abs_nu", "bound", "ratio", "ok"];

/// Rows of the sweep and the number of bound violations.
pub fn nu_sweep_rows(cfg: &NuSweepConfig) -> Result<(Vec<Vec<Cell>>, i64, f64), CliError> {
    let spec = MeasureSpec::product_fractional(cfg.gamma, cfg.a.clone())?;
    heisenberg_fractional::spectrum::check_strip(cfg.re_z, product_strip(cfg.n, cfg.gamma))?;
    let mol = MollifierSpec::default();
    let quad = QuadratureSpec::new(cfg.quad_tol, 20_000, 0.0)?.with_rel_tol(cfg.quad_rel_tol);
    let cutoffs: Vec<Cutoff> = cfg.cutoffs.iter().map(|c| c.parse()).collect::<Result<_, _>>()?;
    let on_line = (cfg.re_z - product_strip(cfg.n, cfg.gamma).0).abs() <= 1e-12;
    let mut tasks = Vec::new();
    for &im in &cfg.im_z {
        for alpha in 0..=cfg.alpha_max {
            for &lambda in &cfg.lambdas {
                tasks.push((im, alpha, lambda));
            }
        }
    }
    let phi_inf = mollifier_phi_n(&mol, Cutoff::Infinite, 1.0)?;
    let rows: Vec<Vec<Vec<Cell>>> = tasks
        .par_iter()
        .map(|&(im, alpha, lambda)| -> Result<Vec<Vec<Cell>>, CliError> {
            let z = Complex64::new(cfg.re_z, im);
            let mut multi = vec![0u32; cfg.n];
            multi[0] = alpha;
            let q = SpectralQuery {
                measure: spec.clone(),
                z,
                cutoff: Cutoff::Infinite,
                alpha: multi,
                lambda,
            };
            let base = nu_quadrature(&q, &mol, &quad)?.value;
            let bound = if on_line {
                nu_endpoint_bound(cfg.n, cfg.gamma, z, &mol)?.envelope
            } else {
                f64::NAN
            };
            cutoffs
                .iter()
                .map(|&c| {
                    let v = base * (mollifier_phi_n(&mol, c, lambda)? / phi_inf);
                    let ratio = v.norm() / bound;
                    let ok = !on_line || ratio <= 1.0;
                    Ok(vec![
                        alpha.into(),
                        lambda.into(),
                        im.into(),
                        c.to_string().into(),
                        v.norm().into(),
                        bound.into(),
                        ratio.into(),
                        ok.into(),
                    ])
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let rows: Vec<Vec<Cell>> = rows.into_iter().flatten().collect();
    let violations = count_failures(&rows, 7);
    let max_ratio = rows
        .iter()
        .filter_map(|r| match r[6] {
            Cell::Float(v) if v.is_finite() => Some(v),
            _ => None,
        })
        .fold(0.0, f64::max);
    Ok((rows, violations, max_ratio))
}

pub fn nu_sweep(args: &NuSweepArgs) -> Result<Outcome, CliError> {
    let cfg = args.resolve()?;
    let (rows, violations, max_ratio) = nu_sweep_rows(&cfg)?;
    let mut table = Table::new(&NU_COLUMNS);
    table.summary = vec![
        ("rows", (rows.len() as i64).into()),
        ("violations", violations.into()),
        ("max_ratio", max_ratio.into()),
    ];
    table.rows = rows;
    table_outcome(table, &cfg.format, "nu-sweep", &config_value(&cfg), violations == 0)
}

// ---------------------------------------------------------------- scaling

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ScalingArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    /// Exponent of the norm; `inf` for the max norm.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_cells_per_delta: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingConfig {
    pub n: usize,
    pub gamma: f64,
    pub a: Vec<f64>,
    pub q: String,
    pub deltas: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub grid: NormGrid,
    pub lower_slope_tol: f64,
    pub norm_slope_tol: f64,
    pub format: String,
}

impl ScalingArgs {
    pub fn resolve(&self) -> Result<(ScalingConfig, f64), CliError> {
        let a = merge_config(self, self.common.config.as_ref())?;
        let n = a.n.unwrap_or(1);
        let q_text = a.q.clone().unwrap_or_else(|| "2".into());
        let q: f64 = q_text
            .parse()
            .map_err(|_| bad(format!("--q expects a number or `inf`, got `{q_text}`")))?;
        if !(q >= 1.0) {
            return Err(bad("--q must be at least 1"));
        }
        let grid = NormGrid {
            rho_cells_per_delta: a.rho_cells_per_delta.unwrap_or(NormGrid::default().rho_cells_per_delta),
            ..NormGrid::default()
        };
        let cfg = ScalingConfig {
            n,
            gamma: a.gamma.unwrap_or(1.0),
            a: a.a.unwrap_or_else(|| vec![1.0; n]),
            q: if q.is_infinite() { "inf".into() } else { format!("{q}") },
            deltas: a.deltas.unwrap_or_else(|| (2..=7).map(|e| 2f64.powi(-e)).collect()),
            samples: a.samples.unwrap_or(64),
            seed: a.common.seed.unwrap_or(0),
            grid,
            lower_slope_tol: 0.05,
            norm_slope_tol: a.common.tol.unwrap_or(0.1),
            format: a.common.format.unwrap_or_else(|| "csv".into()),
        };
        if cfg.a.len() != n {
            return Err(bad("--a needs one coefficient per plane"));
        }
        Ok((cfg, q))
    }
}

pub fn scaling(args: &ScalingArgs) -> Result<Outcome, CliError> {
    let (cfg, q) = args.resolve()?;
    let quad = QuadratureSpec::new(1e-13, 4000, 0.0)?.with_rel_tol(1e-9);
    let per: Vec<_> = cfg
        .deltas
        .par_iter()
        .map(|&d| -> Result<_, CliError> {
            let fam = TestBoxFamily::new(cfg.a.clone(), d)?;
            if !(d < 0.5) {
                return Err(bad("each delta must lie in (0, 1/2)"));
            }
            let lower = lower_bound_row(&fam, cfg.gamma, cfg.samples, cfg.seed, &quad)?;
            let norm = norm_row(&fam, cfg.gamma, q, &cfg.grid)?;
            Ok((lower, norm))
        })
        .collect::<Result<_, _>>()?;
    let (lowers, norms): (Vec<_>, Vec<_>) = per.into_iter().unzip();
    let mut table = Table::new(&["delta", "min_over_a_delta", "centre_value", "norm", "warning"]);
    for (l, nr) in lowers.iter().zip(&norms) {
        table.rows.push(vec![
            l.delta.into(),
            l.min_value.into(),
            l.center_value.into(),
            nr.norm.into(),
            nr.warning.clone().unwrap_or_default().into(),
        ]);
    }
    let lower = lower_bound_report(cfg.n, cfg.gamma, lowers)?;
    let norm = norm_report(cfg.n, cfg.gamma, q, norms)?;
    let lower_ok = (lower.fit.slope - lower.predicted).abs() <= cfg.lower_slope_tol;
    let norm_ok = (norm.fit.slope - norm.predicted).abs() <= cfg.norm_slope_tol;
    table.summary = vec![
        ("lower_slope", lower.fit.slope.into()),
        ("lower_predicted", lower.predicted.into()),
        ("lower_max_residual", lower.fit.max_residual.into()),
        ("norm_slope", norm.fit.slope.into()),
        ("norm_predicted", norm.predicted.into()),
        ("norm_max_residual", norm.fit.max_residual.into()),
        ("pass", (lower_ok && norm_ok).into()),
    ];
    let mut out = table_outcome(table, &cfg.format, "scaling", &config_value(&cfg), lower_ok && norm_ok)?;
    out.notes = format!(
        "lower slope {:.6} (predicted {}), norm slope {:.6} (predicted {})\n",
        lower.fit.slope, lower.predicted, norm.fit.slope, norm.predicted
    );
    Ok(out)
}

// ----------------------------------------------------------------- dyadic

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct DyadicArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Serialize)]
struct DyadicConfig {
    n: usize,
    gamma: f64,
    k_min: u32,
    k_max: u32,
    tol: f64,
    format: String,
}

pub fn dyadic(args: &DyadicArgs) -> Result<Outcome, CliError> {
    let a = merge_config(args, args.common.config.as_ref())?;
    let cfg = DyadicConfig {
        n: a.n.unwrap_or(1),
        gamma: a.gamma.unwrap_or(1.0),
        k_min: a.k_min.unwrap_or(1),
        k_max: a.k_max.unwrap_or(12),
        tol: a.common.tol.unwrap_or(1e-6),
        format: a.common.format.unwrap_or_else(|| "csv".into()),
    };
    let ks: Vec<u32> = (cfg.k_min..=cfg.k_max).collect();
    let rep = dyadic_tv_slope(cfg.n, cfg.gamma, &ks)?;
    let mut table = Table::new(&["k", "tv", "log2_tv"]);
    for (k, tv) in &rep.rows {
        table.rows.push(vec![(*k).into(), (*tv).into(), tv.log2().into()]);
    }
    let ok = (rep.fit.slope - rep.predicted).abs() <= cfg.tol;
    table.summary = vec![
        ("slope", rep.fit.slope.into()),
        ("predicted", rep.predicted.into()),
        ("max_residual", rep.fit.max_residual.into()),
        ("pass", ok.into()),
    ];
    let mut out = table_outcome(table, &cfg.format, "dyadic", &config_value(&cfg), ok)?;
    out.notes = format!("slope {:.12} (predicted {})\n", rep.fit.slope, rep.predicted);
    Ok(out)
}

// ------------------------------------------------------------ oscillatory

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct OscillatoryArgs {
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<u32>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_exp_max: Option<i32>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Serialize)]
struct OscillatoryConfig {
    m: Vec<u32>,
    lambdas: Vec<f64>,
    max_spread: f64,
    quad_tol: f64,
    format: String,
}

pub fn oscillatory(args: &OscillatoryArgs) -> Result<Outcome, CliError> {
    let a = merge_config(args, args.common.config.as_ref())?;
    let top = a.lambda_exp_max.unwrap_or(10);
    if top < 0 {
        return Err(bad("--lambda-exp-max must be non-negative"));
    }
    let cfg = OscillatoryConfig {
        m: a.m.unwrap_or_else(|| vec![2, 3]),
        lambdas: (0..=top).map(|e| 2f64.powi(e)).collect(),
        max_spread: a.common.tol.unwrap_or(3.0),
        quad_tol: 1e-9,
        format: a.common.format.unwrap_or_else(|| "csv".into()),
    };
    if cfg.m.iter().any(|m| *m < 2) {
        return Err(bad("--m must be at least 2"));
    }
    let quad = QuadratureSpec::new(cfg.quad_tol, 200_000, 0.0)?.with_rel_tol(1e-8);
    let tasks: Vec<(u32, f64)> = cfg
        .m
        .iter()
        .flat_map(|&m| cfg.lambdas.iter().map(move |&l| (m, l)))
        .collect();
    let vals: Vec<(f64, f64)> = tasks
        .par_iter()
        .map(|&(m, l)| r_lambda_sup(m, l, &default_xi_grid(m, l), &quad).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&["m", "lambda", "sup", "xi_star", "ratio"]);
    let mut spreads = Vec::new();
    for &m in &cfg.m {
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (&(mm, l), &(sup, xi)) in tasks.iter().zip(&vals) {
            if mm != m {
                continue;
            }
            let ratio = sup / l.powf((m as f64 - 1.0) / m as f64);
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            table.rows.push(vec![m.into(), l.into(), sup.into(), xi.into(), ratio.into()]);
        }
        spreads.push((m, hi / lo));
    }
    let ok = spreads.iter().all(|(_, s)| *s <= cfg.max_spread);
    let mut notes = String::new();
    for (m, s) in &spreads {
        table.summary.push(("spread", format!("m={m}:{}", heisenberg_fractional::type_set::fmt_num(*s)).into()));
        notes.push_str(&format!("m={m} spread {s:.6}\n"));
    }
    table.summary.push(("pass", ok.into()));
    let mut out = table_outcome(table, &cfg.format, "oscillatory", &config_value(&cfg), ok)?;
    out.notes = notes;
    Ok(out)
}
