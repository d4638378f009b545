//! Command-line front end: one thin binary with `verify`, `exact`,
//! `hybrid`, `mc`, `sweep` and `plot` subcommands.
//!
//! Every run writes its artifacts (CSV/JSON, SVG for `plot`) plus a
//! `manifest.json` with the effective configuration, seed, code version and
//! a sha256 digest per artifact. Exit codes: 0 ok, 1 check violation,
//! 2 usage or config error.

use crate::config::{parse_offsets, Config};
use crate::error::{Error, Result};
use crate::events::{box_layer_sites, lr_crossing};
use crate::exact::{Boundary, GibbsEngine, MeasureSpec};
use crate::hybrid::{gamma_ratio_grid, mu_mc, HybridSpec};
use crate::lattice::{LatticeKind, Region, Site};
use crate::manifest::RunManifest;
use crate::mc::{
    binder_beta_bracket, coexistence_scan, estimate_crossing, estimate_hc, run_sampling,
    Chain, Sampler, HC_THRESHOLD, THERM_SWEEPS_PER_N,
};
use crate::plot::{heat_table, line_chart, read_csv, Series};
use crate::verify::{registry, CheckCtx, CheckKind, CheckReport};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

const SEED_ENV: &str = "TISING_SEED";

#[derive(Parser, Debug)]
#[command(name = "tising", version, about = "Ising models on triangular-type 3D lattices")]
struct Cli {
    /// Flat key-value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Run seed; falls back to $TISING_SEED, then 0. Echoed into the
    /// manifest either way.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run identity/inequality checks against the exact engine.
    Verify(VerifyArgs),
    /// Exact finite-volume quantities on a small box.
    Exact(ExactArgs),
    /// Tabulate the hybrid measure and its derivative ratio over a grid.
    Hybrid(HybridArgs),
    /// Monte Carlo sampling: crossing estimates and cluster records.
    Mc(McArgs),
    /// Parameter sweeps feeding the plot subcommand.
    Sweep(SweepArgs),
    /// Render SVG charts from previously written CSVs.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Check name or `all`.
    #[arg(long, default_value = "all")]
    check: String,
    /// Instance count per check (0 = per-check default).
    #[arg(long, default_value_t = 0)]
    instances: u64,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    n: Option<i32>,
    /// Comma-separated layer list, e.g. `0` or `0,1`.
    #[arg(long)]
    layers: Option<String>,
    #[arg(long)]
    bc: Option<String>,
}

#[derive(Args, Debug)]
struct HybridArgs {
    #[arg(long)]
    beta: Option<f64>,
    /// Crossing box radius (the region extends it by two sites).
    #[arg(long)]
    n: Option<i32>,
    #[arg(long)]
    bc: Option<String>,
    #[arg(long)]
    mask_cap: Option<usize>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_steps: Option<usize>,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    #[arg(long)]
    h_steps: Option<usize>,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    /// Top-layer availability for a hybrid-measure estimate (optional).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    n: Option<i32>,
    #[arg(long)]
    samples: Option<u64>,
    /// Thermalization sweeps (default 100 * n).
    #[arg(long)]
    sweeps: Option<u64>,
    /// `heatbath` or `cluster`.
    #[arg(long)]
    sampler: Option<String>,
    /// `free`, `plus` or `minus`.
    #[arg(long)]
    bc: Option<String>,
    /// Also stream per-sample records to mc_samples.csv.
    #[arg(long, default_value_t = false)]
    stream_csv: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// One of: crossing, coexistence, hc, betac, mixing.
    #[arg(long)]
    scan: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    h_grid: Option<String>,
    #[arg(long)]
    beta_grid: Option<String>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    column_len: Option<usize>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// One of: crossing, ratio, mixing.
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<String>,
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    run_with_args(std::env::args().collect())
}

/// Parse and run; returns the process exit code.
pub fn run_with_args(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let config = match &cli.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match std::env::var(SEED_ENV) {
            Ok(raw) => raw
                .parse()
                .map_err(|_| Error::Config(format!("bad {SEED_ENV} value `{raw}`")))?,
            Err(_) => config.get_or("seed", 0u64)?,
        },
    };
    match cli.cmd {
        Cmd::Verify(args) => cmd_verify(&cli.out, &config, seed, args),
        Cmd::Exact(args) => cmd_exact(&cli.out, &config, seed, args),
        Cmd::Hybrid(args) => cmd_hybrid(&cli.out, &config, seed, args),
        Cmd::Mc(args) => cmd_mc(&cli.out, &config, seed, args),
        Cmd::Sweep(args) => cmd_sweep(&cli.out, &config, seed, args),
        Cmd::Plot(args) => cmd_plot(&cli.out, &config, seed, args),
    }
}

fn lattice_kind(config: &Config) -> Result<LatticeKind> {
    let name = config.get("lattice.kind").unwrap_or("tri_z");
    match name {
        "tri_z" => Ok(LatticeKind::tri_times_z()),
        "tri_k2" => Ok(LatticeKind::tri_times_k2()),
        "zstar2d" => Ok(LatticeKind::z_star_2d()),
        "tri3d" => match config.get("lattice.offsets") {
            Some(raw) => LatticeKind::tri3d_with_offsets(parse_offsets(raw)?),
            None => Ok(LatticeKind::tri3d()),
        },
        other => Err(Error::Config(format!("unknown lattice.kind `{other}`"))),
    }
}

fn boundary_from(name: &str) -> Result<Boundary> {
    match name {
        "free" => Ok(Boundary::Free),
        "plus" => Ok(Boundary::Plus),
        "minus" => Ok(Boundary::Minus),
        other => Err(Error::Config(format!("unknown boundary `{other}`"))),
    }
}

fn sampler_from(name: &str) -> Result<Sampler> {
    match name {
        "heatbath" => Ok(Sampler::HeatBath),
        "cluster" => Ok(Sampler::Cluster),
        other => Err(Error::Config(format!("unknown sampler `{other}`"))),
    }
}

fn slab_region(kind: &LatticeKind, n: i32, layers: &[i32]) -> Result<Arc<Region>> {
    Region::from_sites(kind.clone(), box_layer_sites(kind, n, layers))
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect()
}

// -- verify -----------------------------------------------------------------

fn cmd_verify(out: &PathBuf, config: &Config, seed: u64, args: VerifyArgs) -> Result<i32> {
    let check = match config.get("verify.check") {
        Some(c) if args.check == "all" => c.to_string(),
        _ => args.check.clone(),
    };
    let instances = if args.instances == 0 {
        config.get_or("verify.instances", 0u64)?
    } else {
        args.instances
    };
    let mut snapshot = config.entries().clone();
    snapshot.insert("verify.check".into(), check.clone());
    snapshot.insert("verify.instances".into(), instances.to_string());
    let mut manifest = RunManifest::start("verify", snapshot, seed);

    let defs = registry();
    let names: Vec<&str> = defs.iter().map(|d| d.name).collect();
    println!("registered checks: {}", names.join(" "));
    let ctx = CheckCtx::new(seed, instances);
    let mut gating_violations = 0u64;
    let mut reports: Vec<CheckReport> = Vec::new();
    for def in &defs {
        if check != "all" && def.name != check {
            continue;
        }
        let report = (def.run)(&ctx)?;
        let status = if report.passed() { "PASS" } else { "FAIL" };
        println!(
            "check {:<24} {} instances={} violations={} worst_margin={:e}",
            report.check_name, status, report.instances, report.violations, report.worst_margin
        );
        if !report.passed() && report.kind != CheckKind::Measurement {
            gating_violations += report.violations;
        }
        reports.push(report);
    }
    if reports.is_empty() {
        return Err(Error::Config(format!("unknown check `{check}`")));
    }
    for report in &reports {
        manifest.write_artifact(
            out,
            &format!("verify_{}.json", report.check_name),
            &serde_json::to_vec_pretty(report)?,
        )?;
    }
    manifest.finish(out)?;
    Ok(if gating_violations > 0 { 1 } else { 0 })
}

// -- exact ------------------------------------------------------------------

fn cmd_exact(out: &PathBuf, config: &Config, seed: u64, args: ExactArgs) -> Result<i32> {
    let beta = args.beta.unwrap_or(config.get_or("exact.beta", 0.2)?);
    let h = args.h.unwrap_or(config.get_or("exact.h", 0.0)?);
    let n = args.n.unwrap_or(config.get_or("event.n", 1)?);
    let layers = match &args.layers {
        Some(raw) => crate::config::parse_i32_list(raw)?,
        None => config.get_list_i32("event.layers")?.unwrap_or(vec![0]),
    };
    let bc = boundary_from(
        args.bc
            .as_deref()
            .unwrap_or(config.get("exact.bc").unwrap_or("free")),
    )?;
    let cap = config.get_or("caps.enum_sites", crate::exact::DEFAULT_ENUM_CAP)?;
    let kind = lattice_kind(config)?;

    let mut snapshot = config.entries().clone();
    for (k, v) in [
        ("exact.beta", beta.to_string()),
        ("exact.h", h.to_string()),
        ("event.n", n.to_string()),
        (
            "event.layers",
            layers
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
    ] {
        snapshot.insert(k.into(), v);
    }
    let mut manifest = RunManifest::start("exact", snapshot, seed);

    let region = slab_region(&kind, n, &layers)?;
    let spec = MeasureSpec::homogeneous(region.clone(), beta, h, bc);
    let engine = GibbsEngine::build_with_cap(spec, cap)?;
    let event = lr_crossing(&kind, n, &layers);
    let crossing = engine.event_prob(|c| event.eval(c));
    let log_z = engine.log_partition();
    let mean_mag =
        engine.magnetizations().iter().sum::<f64>() / engine.n_sites() as f64;

    println!("exact: |region| = {}, log Z = {log_z}", region.len());
    println!("exact: P(LR + crossing) = {crossing}");
    println!("exact: mean magnetization = {mean_mag}");

    let mut csv = String::from("beta,h,n,layers,sites,log_z,crossing_prob,mean_magnetization\n");
    let layer_str = layers
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(";");
    writeln!(
        csv,
        "{beta},{h},{n},{layer_str},{},{log_z},{crossing},{mean_mag}",
        region.len()
    )
    .unwrap();
    manifest.write_artifact(out, "exact.csv", csv.as_bytes())?;
    manifest.finish(out)?;
    Ok(0)
}

// -- hybrid -----------------------------------------------------------------

/// The standard hybrid instance: the crossing slab of `B_n` over layers
/// {0,1}, extended by one site beyond each crossing face at z = 0 so the
/// event box sits strictly inside the region.
pub fn hybrid_instance(kind: &LatticeKind, n: i32) -> Result<Arc<Region>> {
    let mut sites = box_layer_sites(kind, n, &[0, 1]);
    sites.push(Site::new(-(n + 1), 0, 0));
    sites.push(Site::new(n + 1, 0, 0));
    Region::from_sites(kind.clone(), sites)
}

fn cmd_hybrid(out: &PathBuf, config: &Config, seed: u64, args: HybridArgs) -> Result<i32> {
    let beta = args.beta.unwrap_or(config.get_or("hybrid.beta", 0.1)?);
    let n = args.n.unwrap_or(config.get_or("event.n", 1)?);
    let bc = boundary_from(
        args.bc
            .as_deref()
            .unwrap_or(config.get("hybrid.bc").unwrap_or("free")),
    )?;
    // The default cap of 8 would refuse the 9-site top layer of the B_1
    // slab, so the CLI default is 9; the library default stays 8.
    let mask_cap = args
        .mask_cap
        .unwrap_or(config.get_or("hybrid.mask_cap", 9usize)?);
    let p_grid = linspace(
        args.p_min.unwrap_or(config.get_or("hybrid.grid.p_min", 0.2)?),
        args.p_max.unwrap_or(config.get_or("hybrid.grid.p_max", 0.8)?),
        args.p_steps
            .unwrap_or(config.get_or("hybrid.grid.p_steps", 7usize)?),
    );
    let h_grid = linspace(
        args.h_min.unwrap_or(config.get_or("hybrid.grid.h_min", -0.5)?),
        args.h_max.unwrap_or(config.get_or("hybrid.grid.h_max", 0.5)?),
        args.h_steps
            .unwrap_or(config.get_or("hybrid.grid.h_steps", 11usize)?),
    );
    let kind = lattice_kind(config)?;

    let mut snapshot = config.entries().clone();
    snapshot.insert("hybrid.beta".into(), beta.to_string());
    snapshot.insert("event.n".into(), n.to_string());
    snapshot.insert("hybrid.mask_cap".into(), mask_cap.to_string());
    let mut manifest = RunManifest::start("hybrid", snapshot, seed);

    let region = hybrid_instance(&kind, n)?;
    let base = MeasureSpec::homogeneous(region.clone(), beta, 0.0, bc);
    let event = crate::events::availability_restriction(
        &lr_crossing(&kind, n, &[0, 1]),
        region.sites(),
    );
    let grid = gamma_ratio_grid(&base, &event, &p_grid, &h_grid, mask_cap)?;

    let mut csv = String::from("p,h,mu,dmu_dh,dmu_dp,ratio,flags\n");
    for row in &grid.rows {
        let (ratio, flag) = match row.ratio {
            Some(r) => (format!("{r}"), 0),
            None => ("inf".to_string(), 1),
        };
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            row.p, row.h, row.mu, row.d_dh, row.d_dp, ratio, flag
        )
        .unwrap();
    }
    manifest.write_artifact(out, "hybrid_grid.csv", csv.as_bytes())?;
    manifest.write_artifact(
        out,
        "hybrid_gamma.json",
        &serde_json::to_vec_pretty(&serde_json::json!({
            "sup_ratio": grid.sup_ratio,
            "flagged": grid.flagged,
            "grid_points": grid.rows.len(),
        }))?,
    )?;
    match grid.sup_ratio {
        Some(g) => println!("hybrid: grid sup of dmu_dh/dmu_dp = {g}"),
        None => println!("hybrid: every ratio was flagged"),
    }
    manifest.finish(out)?;
    Ok(0)
}

// -- mc ---------------------------------------------------------------------

fn cmd_mc(out: &PathBuf, config: &Config, seed: u64, args: McArgs) -> Result<i32> {
    let beta = args.beta.unwrap_or(config.get_or("mc.beta", 0.1)?);
    let h = args.h.unwrap_or(config.get_or("mc.h", 0.0)?);
    let n = args.n.unwrap_or(config.get_or("event.n", 8)?);
    let samples = args.samples.unwrap_or(config.get_or("mc.samples", 2000)?);
    let sweeps = args
        .sweeps
        .unwrap_or(config.get_or("mc.sweeps", THERM_SWEEPS_PER_N * n.max(1) as u64)?);
    let sampler = sampler_from(
        args.sampler
            .as_deref()
            .unwrap_or(config.get("mc.sampler").unwrap_or("heatbath")),
    )?;
    let bc = boundary_from(
        args.bc
            .as_deref()
            .unwrap_or(config.get("mc.bc").unwrap_or("free")),
    )?;
    let p = match args.p {
        Some(p) => Some(p),
        None => config
            .get("mc.p")
            .map(|raw| {
                raw.parse::<f64>()
                    .map_err(|_| Error::Config(format!("mc.p: bad value `{raw}`")))
            })
            .transpose()?,
    };
    let kind = lattice_kind(config)?;
    let stream = args.stream_csv || config.get_or("mc.stream_csv", false)?;

    let mut snapshot = config.entries().clone();
    for (k, v) in [
        ("mc.beta", beta.to_string()),
        ("mc.h", h.to_string()),
        ("event.n", n.to_string()),
        ("mc.samples", samples.to_string()),
        ("mc.sweeps", sweeps.to_string()),
    ] {
        snapshot.insert(k.into(), v);
    }
    let mut manifest = RunManifest::start("mc", snapshot, seed);

    // Crossing estimate on the z = 0 patch.
    let patch = slab_region(&kind, n, &[0])?;
    let spec = MeasureSpec::homogeneous(patch, beta, h, bc.clone());
    let est = estimate_crossing(&spec, n, &[0], sweeps, samples, seed, 0, sampler)?;
    println!(
        "mc: P(LR + crossing, B_{n} z=0) = {} +- {} ({} samples)",
        est.mean, est.se, est.samples
    );
    let mut csv = String::from("n,beta,h,sampler,samples,crossing_mean,crossing_se\n");
    let sampler_name = if sampler == Sampler::HeatBath {
        "heatbath"
    } else {
        "cluster"
    };
    writeln!(
        csv,
        "{n},{beta},{h},{sampler_name},{samples},{},{}",
        est.mean, est.se
    )
    .unwrap();
    manifest.write_artifact(out, "mc_summary.csv", csv.as_bytes())?;

    // Optional hybrid-measure estimate over the two-layer slab.
    if let Some(p) = p {
        let slab = slab_region(&kind, n, &[0, 1])?;
        let mspec = MeasureSpec::homogeneous(slab.clone(), beta, h, bc.clone());
        let event = lr_crossing(&kind, n, &[0, 1]);
        let hspec = HybridSpec::new(mspec.clone(), p, event, Some(n))?;
        let mut chain = Chain::new(mspec, seed, 1);
        chain.thermalize(sweeps, sampler)?;
        let mu = mu_mc(&hspec, &mut chain, sampler, samples, 10, seed ^ 0x9a)?;
        println!(
            "mc: mu estimate at p={p}: {} +- {} (equilibrated: {})",
            mu.estimate.mean, mu.estimate.se, mu.equilibrated
        );
        let mut mcsv = String::from("p,beta,h,mu_mean,mu_se,equilibrated\n");
        writeln!(
            mcsv,
            "{p},{beta},{h},{},{},{}",
            mu.estimate.mean, mu.estimate.se, mu.equilibrated as u8
        )
        .unwrap();
        manifest.write_artifact(out, "mc_mu.csv", mcsv.as_bytes())?;
    }

    if stream {
        let slab = slab_region(&kind, n, &[0])?;
        let spec = MeasureSpec::homogeneous(slab, beta, h, bc);
        let (records, _) = run_sampling(&spec, sweeps, samples, seed, 2, sampler)?;
        let mut scsv = String::from(
            "sample_id,magnetization,plus_span,minus_span,largest_plus,largest_minus\n",
        );
        for r in &records {
            writeln!(
                scsv,
                "{},{},{},{},{},{}",
                r.sample_id,
                r.magnetization,
                r.plus_span as u8,
                r.minus_span as u8,
                r.largest_plus,
                r.largest_minus
            )
            .unwrap();
        }
        manifest.write_artifact(out, "mc_samples.csv", scsv.as_bytes())?;
    }
    manifest.finish(out)?;
    Ok(0)
}

// -- sweep ------------------------------------------------------------------

fn cmd_sweep(out: &PathBuf, config: &Config, seed: u64, args: SweepArgs) -> Result<i32> {
    let scan = args
        .scan
        .clone()
        .or(config.get("sweep.scan").map(String::from))
        .ok_or_else(|| Error::Config("sweep: --scan is required".into()))?;
    let beta = args.beta.unwrap_or(config.get_or("sweep.beta", 0.1)?);
    let h = args.h.unwrap_or(config.get_or("sweep.h", 0.0)?);
    let samples = args.samples.unwrap_or(config.get_or("sweep.samples", 1000)?);
    let n_list = match &args.n_list {
        Some(raw) => crate::config::parse_i32_list(raw)?,
        None => config.get_list_i32("sweep.n_list")?.unwrap_or(vec![4, 8]),
    };
    let h_grid = match &args.h_grid {
        Some(raw) => crate::config::parse_f64_list(raw)?,
        None => config
            .get_list_f64("sweep.h_grid")?
            .unwrap_or(linspace(-0.4, 0.2, 7)),
    };
    let kind = lattice_kind(config)?;

    let mut snapshot = config.entries().clone();
    snapshot.insert("sweep.scan".into(), scan.clone());
    snapshot.insert("sweep.beta".into(), beta.to_string());
    snapshot.insert("sweep.samples".into(), samples.to_string());
    let mut manifest = RunManifest::start("sweep", snapshot, seed);

    match scan.as_str() {
        "crossing" => {
            let mut csv = String::from("n,h,prob,se\n");
            for (k, &n) in n_list.iter().enumerate() {
                for (j, &hv) in h_grid.iter().enumerate() {
                    let region = slab_region(&kind, n, &[0])?;
                    let spec = MeasureSpec::homogeneous(region, beta, hv, Boundary::Free);
                    let est = estimate_crossing(
                        &spec,
                        n,
                        &[0],
                        THERM_SWEEPS_PER_N * n.max(1) as u64,
                        samples,
                        seed,
                        (k * h_grid.len() + j) as u64,
                        Sampler::HeatBath,
                    )?;
                    writeln!(csv, "{n},{hv},{},{}", est.mean, est.se).unwrap();
                }
            }
            manifest.write_artifact(out, "sweep_crossing.csv", csv.as_bytes())?;
        }
        "coexistence" => {
            let rows = coexistence_scan(&kind, beta, h, &n_list, samples, seed, Sampler::HeatBath)?;
            let mut csv = String::from(
                "n,both_span_frac,both_span_se,plus_span_frac,minus_span_frac,ratio_plus,ratio_minus,samples\n",
            );
            for r in &rows {
                writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    r.n,
                    r.both_span_frac,
                    r.both_span_se,
                    r.plus_span_frac,
                    r.minus_span_frac,
                    r.ratio_plus,
                    r.ratio_minus,
                    r.samples
                )
                .unwrap();
            }
            manifest.write_artifact(out, "sweep_coexistence.csv", csv.as_bytes())?;
        }
        "hc" => {
            let bracket = estimate_hc(
                &kind,
                beta,
                &n_list,
                &h_grid,
                samples,
                HC_THRESHOLD,
                seed,
                Sampler::HeatBath,
            )?;
            let mut csv = String::from("n,h,prob,se\n");
            for row in &bracket.rows {
                for ((hv, p), se) in row.h_values.iter().zip(&row.probs).zip(&row.ses) {
                    writeln!(csv, "{},{hv},{p},{se}", row.n).unwrap();
                }
            }
            manifest.write_artifact(out, "sweep_hc.csv", csv.as_bytes())?;
            manifest.write_artifact(
                out,
                "hc_bracket.json",
                &serde_json::to_vec_pretty(&bracket)?,
            )?;
            println!(
                "sweep hc: bracket = ({}, {}) at threshold {}",
                bracket.bracket.0, bracket.bracket.1, bracket.threshold
            );
        }
        "betac" => {
            let grid = match &args.beta_grid {
                Some(raw) => crate::config::parse_f64_list(raw)?,
                None => config
                    .get_list_f64("sweep.beta_grid")?
                    .unwrap_or(linspace(0.05, 0.45, 9)),
            };
            let (n_small, n_large) = match n_list.as_slice() {
                [a, b, ..] => (*a, *b),
                [a] => (*a, a + 2),
                [] => (3, 5),
            };
            let (rows, bracket) =
                binder_beta_bracket(&kind, n_small, n_large, &grid, samples, seed)?;
            let mut csv = String::from("beta,u_small,u_large\n");
            for r in &rows {
                writeln!(csv, "{},{},{}", r.beta, r.u_small, r.u_large).unwrap();
            }
            manifest.write_artifact(out, "sweep_betac.csv", csv.as_bytes())?;
            manifest.write_artifact(
                out,
                "betac_bracket.json",
                &serde_json::to_vec_pretty(&serde_json::json!({
                    "bracket": bracket, "n_small": n_small, "n_large": n_large,
                }))?,
            )?;
            match bracket {
                Some((lo, hi)) => println!("sweep betac: bracket = ({lo}, {hi})"),
                None => println!("sweep betac: no Binder crossing inside the grid"),
            }
        }
        "mixing" => {
            let len = args
                .column_len
                .unwrap_or(config.get_or("sweep.column_len", 12usize)?);
            let fit = crate::verify::measure_ratio_mixing(beta, h, len)?;
            let mut csv = String::from("d,deviation\n");
            for (d, dev) in fit.distances.iter().zip(&fit.deviations) {
                writeln!(csv, "{d},{dev}").unwrap();
            }
            manifest.write_artifact(out, "sweep_mixing.csv", csv.as_bytes())?;
            manifest.write_artifact(
                out,
                "mixing_fit.json",
                &serde_json::to_vec_pretty(&fit)?,
            )?;
            println!(
                "sweep mixing: lambda_hat = {}, K_hat = {}",
                fit.lambda_hat, fit.k_hat
            );
        }
        other => return Err(Error::Config(format!("unknown sweep scan `{other}`"))),
    }
    manifest.finish(out)?;
    Ok(0)
}

// -- plot -------------------------------------------------------------------

fn cmd_plot(out: &PathBuf, config: &Config, seed: u64, args: PlotArgs) -> Result<i32> {
    let kind = args
        .kind
        .clone()
        .or(config.get("plot.kind").map(String::from))
        .ok_or_else(|| Error::Config("plot: --kind is required".into()))?;
    let input = args
        .input
        .clone()
        .or(config.get("plot.input").map(PathBuf::from))
        .ok_or_else(|| Error::Config("plot: --input is required".into()))?;
    let output = args
        .output
        .clone()
        .or(config.get("plot.output").map(String::from))
        .unwrap_or(format!("{kind}.svg"));

    let mut snapshot = config.entries().clone();
    snapshot.insert("plot.kind".into(), kind.clone());
    let mut manifest = RunManifest::start("plot", snapshot, seed);

    let text = std::fs::read_to_string(&input)?;
    let (header, rows) = read_csv(&text)?;
    let col = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("input CSV lacks column `{name}`")))
    };
    let svg = match kind.as_str() {
        "crossing" => {
            let (cn, ch, cp) = (col("n")?, col("h")?, col("prob")?);
            let mut ns: Vec<i64> = rows.iter().map(|r| r[cn] as i64).collect();
            ns.sort();
            ns.dedup();
            let series: Vec<Series> = ns
                .iter()
                .map(|&n| Series {
                    label: format!("n={n}"),
                    points: rows
                        .iter()
                        .filter(|r| r[cn] as i64 == n)
                        .map(|r| (r[ch], r[cp]))
                        .collect(),
                })
                .collect();
            line_chart("crossing probability vs field", "h", "P(crossing)", &series)
        }
        "ratio" => {
            let (cp, ch, cr) = (col("p")?, col("h")?, col("ratio")?);
            let cells: Vec<(f64, f64, Option<f64>)> = rows
                .iter()
                .map(|r| {
                    let v = r[cr];
                    (r[cp], r[ch], if v.is_finite() { Some(v) } else { None })
                })
                .collect();
            heat_table("derivative ratio dmu_dh / dmu_dp", &cells)
        }
        "mixing" => {
            let (cd, cv) = (col("d")?, col("deviation")?);
            let series = vec![Series {
                label: "log10 deviation".into(),
                points: rows
                    .iter()
                    .filter(|r| r[cv] > 0.0)
                    .map(|r| (r[cd], r[cv].log10()))
                    .collect(),
            }];
            line_chart("ratio-mixing decay", "distance", "log10 |ratio - 1|", &series)
        }
        other => return Err(Error::Config(format!("unknown plot kind `{other}`"))),
    };
    manifest.write_artifact(out, &output, svg.as_bytes())?;
    manifest.finish(out)?;
    println!("plot: wrote {output}");
    Ok(0)
}
