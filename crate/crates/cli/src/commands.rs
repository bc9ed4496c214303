use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use mcsh_core::datagen::{generate_data, random_band_field, random_state};
use mcsh_core::diagnostics::{record, relative_energy_drift, DiagnosticsRecord};
use mcsh_core::evolve::integrate;
use mcsh_core::model::{split, unsplit, Component, Sign};
use mcsh_core::nullform::{
    delta_integral, delta_integral_asymptotic, delta_sweep, df_cf_split, hlr_sweep, matching_signs, null2_residual,
    null2_residual_unchecked, symbol_sweep, Branch, DeltaIntegralSpec, Form,
};
use mcsh_core::probe::{probe, Lemma, ProbeSpec};
use mcsh_core::spaces::{
    admissible, approx, critical_exponent, fl_norm, fl_norm_homogeneous, gap, parse_rational, scaling_check,
    thresholds, Rational, Statement,
};
use mcsh_core::spectral::{apply_multiplier, fft_forward, fft_inverse, Basis, Grid2D, Multiplier, SpectralField};

use crate::config::{load_config, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit_json, write_json, DiagnosticsWriter, Manifest};
use crate::snapshot::{read_snapshot, write_snapshot};

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    manifest: Manifest,
}

fn report<T: Serialize>(
    out: Option<&Path>,
    command: &str,
    input: &impl Serialize,
    seed: Option<u64>,
    body: &T,
) -> CliResult<()> {
    emit_json(out, &Report { body, manifest: Manifest::new(command, input, seed) })
}

fn rational(name: &str, text: &str) -> CliResult<Rational> {
    parse_rational(text).map_err(|_| CliError::Validation(format!("--{name}: cannot parse `{text}` as a rational")))
}

fn config_or_default(path: Option<&Path>) -> CliResult<RunConfig> {
    match path {
        Some(p) => load_config(p),
        None => Ok(RunConfig::default()),
    }
}

// ---------------------------------------------------------------- simulate

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, overriding `output.dir` of the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SimulateSummary {
    output_dir: PathBuf,
    steps: usize,
    snapshots: usize,
    t_final: f64,
    energy_drift: f64,
    max_gauss_res: f64,
    max_lorenz_res: f64,
    max_maxwell_res: f64,
    solve_iterations: usize,
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let mut cfg = load_config(&args.config)?;
    if let Some(dir) = &args.out {
        cfg.output.dir = dir.clone();
    }
    let grid = cfg.grid()?;
    let params = cfg.params()?;
    let reg = cfg.regularity()?;
    let out = cfg.output.dir.clone();
    let snap_dir = out.join("snapshots");
    std::fs::create_dir_all(if cfg.output.snapshots { &snap_dir } else { &out })?;
    // the manifest goes first so that even a failed run leaves a record of its input; it lives
    // in the output directory, so the recorded directory is "." and the hash ignores relocation
    let mut recorded = cfg.clone();
    recorded.output.dir = PathBuf::from(".");
    let manifest = Manifest::new("simulate", &recorded, cfg.seed());
    write_json(&out.join(&cfg.output.manifest), &manifest)?;

    let (s0, solve) = generate_data(&cfg.data, grid, &params)?;
    info!("initial data: Gauss residual {:.3e} after {} iterations", solve.gauss_residual, solve.iterations);
    let file = std::fs::File::create(out.join(&cfg.output.diagnostics))?;
    let mut csv = DiagnosticsWriter::new(std::io::BufWriter::new(file), cfg.output.norms)?;
    let mut rows: Vec<DiagnosticsRecord> = Vec::new();
    let norms = cfg.output.norms.then_some(&reg);
    let traj = integrate(&s0, &params, &cfg.integrator(), |k, st| {
        let r = record(st, &params, norms)?;
        if !(r.energy.is_finite()
            && r.gauss_res.is_finite()
            && r.maxwell_res_1.is_finite()
            && r.maxwell_res_2.is_finite())
        {
            return Err(mcsh_core::Error::BlowUp { step: k, t: st.t });
        }
        rows.push(r);
        Ok(())
    });
    // rows recorded before a failure are still written out
    for r in &rows {
        csv.row(r)?;
    }
    csv.finish()?;
    let traj = traj?;
    if cfg.output.snapshots {
        let stride = cfg.integrator.snapshot_stride;
        for (i, st) in traj.states.iter().enumerate() {
            let step = (i * stride).min(traj.steps);
            write_snapshot(&snap_dir.join(format!("snap_{step:06}.bin")), st, step)?;
        }
    }
    let max = |f: fn(&DiagnosticsRecord) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let summary = SimulateSummary {
        output_dir: out,
        steps: traj.steps,
        snapshots: traj.states.len(),
        t_final: *traj.times.last().unwrap(),
        energy_drift: relative_energy_drift(&rows),
        max_gauss_res: max(|r| r.gauss_res),
        max_lorenz_res: max(|r| r.lorenz_res),
        max_maxwell_res: max(|r| r.maxwell_res_1.max(r.maxwell_res_2)),
        solve_iterations: solve.iterations,
    };
    emit_json(None, &summary)
}

// ---------------------------------------------------------------- diagnose

#[derive(Args, Debug, Serialize)]
pub struct DiagnoseArgs {
    /// Snapshot files, or directories whose `*.bin` files are taken in name order.
    #[arg(required = true)]
    pub snapshots: Vec<PathBuf>,
    /// Config supplying the coupling constants and regularity indices (defaults otherwise).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Append the Fourier-Lebesgue norm columns.
    #[arg(long)]
    pub norms: bool,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn expand_snapshots(paths: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inner: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|q| q.extension().is_some_and(|x| x == "bin"))
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    if files.is_empty() {
        return Err(CliError::Validation("no snapshot files found".into()));
    }
    Ok(files)
}

pub fn diagnose(args: &DiagnoseArgs) -> CliResult<()> {
    let cfg = config_or_default(args.config.as_deref())?;
    let params = cfg.params()?;
    let reg = cfg.regularity()?;
    let files = expand_snapshots(&args.snapshots)?;
    let sink: Box<dyn std::io::Write> = match &args.out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut csv = DiagnosticsWriter::new(sink, args.norms)?;
    for f in &files {
        let (_, st) = read_snapshot(f)?;
        csv.row(&record(&st, &params, args.norms.then_some(&reg))?)?;
    }
    csv.finish()
}

// ---------------------------------------------------------------- norms

#[derive(Args, Debug, Serialize)]
pub struct NormsArgs {
    /// Snapshot to measure; without it the config's initial data is used.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Lebesgue exponent in (1, 2]; defaults to the config's `regularity.r`.
    #[arg(long)]
    pub r: Option<String>,
    /// One regularity for every field; by default A uses `l`, phi uses `s` and N uses `m`.
    #[arg(long)]
    pub s: Option<String>,
    /// Use the homogeneous weight `|xi|^s`.
    #[arg(long)]
    pub homogeneous: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct FieldNorm {
    field: &'static str,
    s: f64,
    value: f64,
    rate: f64,
}

#[derive(Serialize)]
struct NormsReport {
    t: f64,
    r: f64,
    homogeneous: bool,
    norms: Vec<FieldNorm>,
}

pub fn norms(args: &NormsArgs) -> CliResult<()> {
    let cfg = config_or_default(args.config.as_deref())?;
    let reg = cfg.regularity()?;
    let state = match &args.snapshot {
        Some(p) => read_snapshot(p)?.1,
        None => generate_data(&cfg.data, cfg.grid()?, &cfg.params()?)?.0,
    };
    let r = match &args.r {
        Some(t) => approx(&rational("r", t)?),
        None => reg.r,
    };
    let fixed = args.s.as_deref().map(|t| rational("s", t).map(|q| approx(&q))).transpose()?;
    let norm =
        |u: &SpectralField, s: f64| if args.homogeneous { fl_norm_homogeneous(u, s, r) } else { fl_norm(u, s, r) };
    let mut out = Vec::new();
    for c in Component::ALL {
        let s = fixed.unwrap_or(match c {
            Component::Phi => reg.s,
            Component::N => reg.m,
            _ => reg.l,
        });
        out.push(FieldNorm { field: c.name(), s, value: norm(state.value(c), s)?, rate: norm(state.rate(c), s)? });
    }
    let body = NormsReport { t: state.t, r, homogeneous: args.homogeneous, norms: out };
    // the config contents, not just its path, decide the result
    let input = serde_json::json!({ "args": args, "config": cfg });
    report(args.out.as_deref(), "norms", &input, cfg.seed(), &body)
}

// ---------------------------------------------------------------- admissible

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
pub enum Which {
    Thm11,
    Thm12,
    Cor13,
}

impl From<Which> for Statement {
    fn from(w: Which) -> Self {
        match w {
            Which::Thm11 => Statement::Thm11,
            Which::Thm12 => Statement::Thm12,
            Which::Cor13 => Statement::Cor13,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct AdmissibleArgs {
    /// Exponents are exact rationals: `2`, `21/16` or `1.001`.
    #[arg(long)]
    pub r: String,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long, value_enum, default_value = "thm11")]
    pub which: Which,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn q_str(q: &Rational) -> String {
    q.to_string()
}

#[derive(Serialize)]
struct AdmissibleReport {
    which: Statement,
    r: String,
    /// Present when `s`, `l` and `m` were all given.
    ok: Option<bool>,
    violated: Vec<String>,
    conditions: serde_json::Value,
    critical_exponent: String,
    thresholds: Option<[String; 3]>,
    gap: Option<[String; 3]>,
}

pub fn admissible_cmd(args: &AdmissibleArgs) -> CliResult<()> {
    let which: Statement = args.which.into();
    let r = rational("r", &args.r)?;
    let crit = critical_exponent(r)?;
    let (ok, violated, conditions) = match (&args.s, &args.l, &args.m) {
        (Some(s), Some(l), Some(m)) => {
            let rep = admissible(r, rational("s", s)?, rational("l", l)?, rational("m", m)?, which)?;
            let violated = rep.violated().into_iter().map(String::from).collect();
            (Some(rep.admissible), violated, serde_json::to_value(&rep.conditions)?)
        }
        (None, None, None) => (None, Vec::new(), serde_json::Value::Array(Vec::new())),
        _ => return Err(CliError::Validation("give all of --s, --l, --m or none of them".into())),
    };
    // thresholds of the r = 2 statement only exist at r = 2
    let t = thresholds(r, which).ok();
    let g = gap(r, which).ok();
    let body = AdmissibleReport {
        which,
        r: q_str(&r),
        ok,
        violated,
        conditions,
        critical_exponent: q_str(&crit),
        thresholds: t.map(|t| t.map(|x| q_str(&x))),
        gap: g.map(|g| g.map(|x| q_str(&x))),
    };
    report(args.out.as_deref(), "admissible", args, None, &body)
}

// ---------------------------------------------------------------- scaling-test

#[derive(Args, Debug, Serialize)]
pub struct ScalingArgs {
    /// Regularity; rationals such as `21/16` are accepted.
    #[arg(long, default_value = "1")]
    pub s: String,
    #[arg(long, default_value = "2")]
    pub r: String,
    #[arg(long = "lambda", default_values_t = vec![2.0, 4.0])]
    pub lambdas: Vec<f64>,
    /// Grid size for the Gaussian test field.
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    /// Gaussian `exp(-|x - c|^2 / width^2)`.
    #[arg(long, default_value_t = 2.0)]
    pub width: f64,
    /// Measure a field of a snapshot instead of the Gaussian.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(long, default_value = "phi")]
    pub field: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ScalingSummary {
    max_deviation: f64,
    reports: Vec<mcsh_core::spaces::ScalingReport>,
}

pub fn scaling_test(args: &ScalingArgs) -> CliResult<()> {
    let s = approx(&rational("s", &args.s)?);
    let r = approx(&rational("r", &args.r)?);
    let u = match &args.snapshot {
        Some(p) => {
            let (_, st) = read_snapshot(p)?;
            let c = Component::ALL
                .into_iter()
                .find(|c| c.name() == args.field)
                .ok_or_else(|| CliError::Validation(format!("--field: unknown field `{}`", args.field)))?;
            st.value(c).clone()
        }
        None => {
            if !(args.width > 0.0) {
                return Err(CliError::Validation("--width must be positive".into()));
            }
            let g = Grid2D::with_default_period(args.n)?;
            let c = 0.5 * g.period();
            let w2 = args.width * args.width;
            SpectralField::from_real_fn(g, |x, y| (-((x - c).powi(2) + (y - c).powi(2)) / w2).exp())
        }
    };
    let reports = args.lambdas.iter().map(|&l| scaling_check(&u, l, s, r)).collect::<Result<Vec<_>, _>>()?;
    let max_deviation = reports.iter().map(|x| (x.ratio - 1.0).abs()).fold(0.0, f64::max);
    report(args.out.as_deref(), "scaling-test", args, None, &ScalingSummary { max_deviation, reports })
}

// ---------------------------------------------------------------- nullform-verify

#[derive(Args, Debug, Serialize)]
pub struct NullformArgs {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Random fields per identity check.
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per symbol-bound sweep; 0 skips the sweeps.
    #[arg(long, default_value_t = 1_000_000)]
    pub symbol_samples: usize,
    /// Samples of the hyperbolic Leibniz sweep; 0 skips it.
    #[arg(long, default_value_t = 1_000_000)]
    pub hlr_samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Limits applied by `nullform-verify`.
pub const IDENTITY_TOL: f64 = 1e-12;
pub const NULL2_TOL: f64 = 1e-9;
pub const CONTROL_MIN: f64 = 1e-2;
pub const HLR_TOL: f64 = 1e-12;

#[derive(Serialize)]
struct Identities {
    df_cf: f64,
    riesz: f64,
    split: f64,
    fft: f64,
}

#[derive(Serialize)]
struct SweepLine {
    form: Form,
    branch: Branch,
    max_ratio: f64,
    degenerate: usize,
}

#[derive(Serialize)]
struct NullformReport {
    ok: bool,
    identities: Identities,
    null2_max: f64,
    null2_control: f64,
    symbol_sweeps: Vec<SweepLine>,
    hlr_min_slack: Option<f64>,
}

fn rel(a: &SpectralField, b: &SpectralField) -> CliResult<f64> {
    Ok(a.distance(b)? / b.l2_norm().max(f64::MIN_POSITIVE))
}

pub fn nullform_verify(args: &NullformArgs) -> CliResult<()> {
    if args.count == 0 {
        return Err(CliError::Validation("--count must be positive".into()));
    }
    let g = Grid2D::with_default_period(args.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let kmax = 0.9 * g.dk() * (args.n / 2 - 1) as f64;
    let f = Basis::Frequency;
    let r1sq = Multiplier::riesz(1).then(&Multiplier::riesz(1));
    let r2sq = Multiplier::riesz(2).then(&Multiplier::riesz(2));
    let jinv = Multiplier::japanese(-2.0);
    let mut id = Identities { df_cf: 0.0, riesz: 0.0, split: 0.0, fft: 0.0 };
    for k in 0..args.count as u64 {
        let a1 = random_band_field(g, 0.0, kmax, true, &mut rng)?;
        let a2 = random_band_field(g, 0.0, kmax, true, &mut rng)?;
        let back = df_cf_split(&a1, &a2)?.reconstruct()?;
        id.df_cf = id.df_cf.max(rel(&back[0], &a1)?).max(rel(&back[1], &a2)?);
        let u = random_band_field(g, 0.0, kmax, false, &mut rng)?;
        let sum = apply_multiplier(&u, &jinv, f)?
            .sub(&apply_multiplier(&u, &r1sq, f)?)?
            .sub(&apply_multiplier(&u, &r2sq, f)?)?;
        id.riesz = id.riesz.max(rel(&sum, &u)?);
        let st = random_state(g, 1.0, kmax, false, args.seed.wrapping_add(k))?;
        id.split = id.split.max(unsplit(&split(&st)).distance(&st)? / st.norm());
        let x = u.to_physical();
        id.fft = id.fft.max(rel(&fft_inverse(&fft_forward(&x)?)?, &x)?);
    }
    let band = 0.5 * g.dk() * (args.n / 2) as f64;
    let mut null2_max = 0f64;
    for k in 0..args.count as u64 {
        let st = random_state(g, 1.0, band, true, args.seed.wrapping_add(k))?;
        null2_max = null2_max.max(null2_residual(&st)?);
    }
    let bad = random_state(g, 1.0, band, false, args.seed)?;
    let null2_control = null2_residual_unchecked(&bad)?;

    let mut symbol_sweeps = Vec::new();
    if args.symbol_samples > 0 {
        for branch in [Branch::Elliptic, Branch::Hyperbolic] {
            let mut forms = vec![Form::Q12];
            for signs in matching_signs(branch) {
                forms.extend([1, 2].map(|j| Form::Q0j { j, signs }));
            }
            for form in forms {
                let sw = symbol_sweep(form, branch, args.symbol_samples, args.seed);
                symbol_sweeps.push(SweepLine { form, branch, max_ratio: sw.max_ratio, degenerate: sw.degenerate });
            }
        }
    }
    let hlr_min_slack = (args.hlr_samples > 0).then(|| hlr_sweep(args.hlr_samples, args.seed).min_slack);

    let ok = [id.df_cf, id.riesz, id.split, id.fft].iter().all(|&x| x <= IDENTITY_TOL)
        && null2_max <= NULL2_TOL
        && null2_control >= CONTROL_MIN
        && symbol_sweeps.iter().all(|s| s.max_ratio.is_finite())
        && hlr_min_slack.map_or(true, |s| s >= -HLR_TOL);
    let body = NullformReport { ok, identities: id, null2_max, null2_control, symbol_sweeps, hlr_min_slack };
    report(args.out.as_deref(), "nullform-verify", args, Some(args.seed), &body)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::CheckFailed("null-form verification out of tolerance".into()))
    }
}

// ---------------------------------------------------------------- delta-integrals

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
pub enum SweepKind {
    /// `|xi|` in [0.1, 100]; `tau/|xi|` in [1.1, 10] (elliptic) or [0.1, 0.9] (hyperbolic); 10 x 10.
    Default,
    /// Ranges from `--xi-range`, `--ratio-range` and `--k`.
    Custom,
    /// A single point at `--tau`, `--xi`.
    Point,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
pub enum BranchArg {
    Elliptic,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, Serialize, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
pub struct DeltaArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long, value_enum)]
    pub branch: BranchArg,
    #[arg(long, value_enum, default_value = "default")]
    pub sweep: SweepKind,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub xi_range: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub ratio_range: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn pair(v: &Option<Vec<f64>>, name: &str) -> CliResult<(f64, f64)> {
    match v.as_deref() {
        Some([a, b]) => Ok((*a, *b)),
        _ => Err(CliError::Validation(format!("--{name} needs two values `lo,hi`"))),
    }
}

pub fn delta_integrals(args: &DeltaArgs) -> CliResult<()> {
    let branch = match args.branch {
        BranchArg::Elliptic => Branch::Elliptic,
        BranchArg::Hyperbolic => Branch::Hyperbolic,
    };
    let sweep = match args.sweep {
        SweepKind::Point => {
            let (tau, xi) = args
                .tau
                .zip(args.xi)
                .ok_or_else(|| CliError::Validation("--sweep point needs --tau and --xi".into()))?;
            let spec = DeltaIntegralSpec::for_r(branch, args.r, tau, xi);
            let numeric = delta_integral(&spec)?;
            let asymptotic = delta_integral_asymptotic(&spec)?;
            let ratio = numeric / asymptotic;
            let points = vec![mcsh_core::nullform::SweepPoint { tau, xi, numeric, asymptotic, ratio }];
            mcsh_core::nullform::DeltaSweep {
                branch,
                r: args.r,
                points,
                min_ratio: ratio,
                max_ratio: ratio,
                spread: 1.0,
            }
        }
        SweepKind::Default => {
            let ratios = match branch {
                Branch::Elliptic => (1.1, 10.0),
                Branch::Hyperbolic => (0.1, 0.9),
            };
            delta_sweep(branch, args.r, (0.1, 100.0), ratios, 10)?
        }
        SweepKind::Custom => delta_sweep(
            branch,
            args.r,
            pair(&args.xi_range, "xi-range")?,
            pair(&args.ratio_range, "ratio-range")?,
            args.k,
        )?,
    };
    match args.format {
        TableFormat::Json => report(args.out.as_deref(), "delta-integrals", args, None, &sweep),
        TableFormat::Csv => {
            let sink: Box<dyn std::io::Write> = match &args.out {
                Some(p) => Box::new(std::fs::File::create(p)?),
                None => Box::new(std::io::stdout().lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["tau", "xi", "numeric", "asymptotic", "ratio"])?;
            for p in &sweep.points {
                w.write_record([p.tau, p.xi, p.numeric, p.asymptotic, p.ratio].map(|x| x.to_string()))?;
            }
            w.flush()?;
            info!("ratio range [{:.4}, {:.4}], spread {:.3}", sweep.min_ratio, sweep.max_ratio, sweep.spread);
            Ok(())
        }
    }
}

// ---------------------------------------------------------------- probe

#[derive(Args, Debug, Serialize)]
pub struct ProbeArgs {
    /// Full probe spec as JSON; flags below override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// l31, l32, l34, l35, l36, l37 or estA.
    #[arg(long)]
    pub lemma: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    #[arg(long)]
    pub s0: Option<f64>,
    #[arg(long)]
    pub s1: Option<f64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cone sheets of the two inputs, e.g. `plus,minus`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    pub signs: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub dilations: Option<Vec<f64>>,
    /// Write per-draw ratios at the first dilation as CSV.
    #[arg(long)]
    pub dump_ratios: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn sign(s: &str) -> CliResult<Sign> {
    match s {
        "plus" | "+" => Ok(Sign::Plus),
        "minus" | "-" => Ok(Sign::Minus),
        _ => Err(CliError::Validation(format!("--signs: `{s}` is not plus or minus"))),
    }
}

pub fn build_probe_spec(args: &ProbeArgs) -> CliResult<ProbeSpec> {
    let mut spec = match (&args.spec, &args.lemma) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?
        }
        (None, Some(l)) => ProbeSpec::new(l.parse::<Lemma>()?, Default::default()),
        (None, None) => return Err(CliError::Validation("give --spec or --lemma".into())),
    };
    if let (Some(_), Some(l)) = (&args.spec, &args.lemma) {
        spec.lemma = l.parse()?;
    }
    let p = &mut spec.params;
    for (slot, v) in [
        (&mut p.r, args.r),
        (&mut p.alpha1, args.alpha1),
        (&mut p.alpha2, args.alpha2),
        (&mut p.b, args.b),
        (&mut p.b1, args.b1),
        (&mut p.b2, args.b2),
        (&mut p.s0, args.s0),
        (&mut p.s1, args.s1),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    if let Some(c) = args.count {
        spec.ensemble.count = c;
    }
    if let Some(s) = args.seed {
        spec.ensemble.seed = s;
    }
    if let Some(s) = &args.signs {
        spec.signs = (sign(&s[0])?, sign(&s[1])?);
    }
    if let Some(d) = &args.dilations {
        spec.dilations = d.clone();
    }
    Ok(spec)
}

pub fn probe_cmd(args: &ProbeArgs) -> CliResult<()> {
    let spec = build_probe_spec(args)?;
    let mut rep = probe(&spec, args.dump_ratios.is_some())?;
    if let (Some(path), Some(ratios)) = (&args.dump_ratios, rep.ratios.take()) {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["draw", "seed", "ratio"])?;
        for (i, r) in ratios.iter().enumerate() {
            let seed = spec.ensemble.seed.wrapping_add(i as u64);
            w.write_record([i.to_string(), seed.to_string(), r.to_string()])?;
        }
        w.flush()?;
    }
    // the manifest records the resolved spec, which alone reproduces the report
    let body = Report { body: &rep, manifest: Manifest::new("probe", &spec, Some(spec.ensemble.seed)) };
    emit_json(args.out.as_deref(), &body)
}
