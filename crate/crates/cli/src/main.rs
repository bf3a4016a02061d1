//! Command-line frontend for the beamformed Doppler spectrum models.
//!
//! Unit conventions at this boundary: angles in degrees, speeds in km/h,
//! frequencies in Hz. Everything converts to SI on entry. Exit codes:
//! 0 success, 2 usage/domain/config error, 3 numerical failure.

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use doppler_beam::approx::approx_shift_spread;
use doppler_beam::fading::{estimate_psd, generate_fading};
use doppler_beam::geometry::doppler_support;
use doppler_beam::integrate::integrate_psd;
use doppler_beam::oracle::{empirical_pdf, l1_distance, sample_doppler};
use doppler_beam::spectrum::{
    doppler_psd, multicluster_psd, Cluster, ClusterSet, EvalMode, SpectrumSamples,
};
use doppler_beam::train::{simulate, ScenarioConfig};
use doppler_beam::{BeamGeometry, GainPattern, ModelError, MotionState};
use output::{fmt, write_csv, RunManifest};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "doppler-beam",
    version,
    about = "Doppler spectra of beamformed mmWave links: closed forms, Monte Carlo, fading, and a train scenario"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the beamformed Doppler spectrum on a frequency grid
    Spectrum(SpectrumArgs),
    /// Small-beamwidth approximate shift/spread, with the exact values beside
    Approx(ApproxArgs),
    /// Monte Carlo empirical Doppler density (histogram)
    Oracle(OracleArgs),
    /// Sum-of-sinusoids fading realization, optionally with a Welch PSD
    Fade(FadeArgs),
    /// High-speed-train trajectory trace under beamwidth control
    Train(TrainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Branch-summed true pdf (default)
    Exact,
    /// Single-branch windowed form
    SingleBranch,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => EvalMode::Exact,
            ModeArg::SingleBranch => EvalMode::SingleBranch,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GainKind {
    Flat,
    Parametric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct LinkArgs {
    /// Carrier frequency, Hz
    #[arg(long)]
    carrier: f64,
    /// Receiver speed, km/h
    #[arg(long)]
    speed: f64,
    /// Angle between velocity and the TX-RX line of sight, degrees
    #[arg(long)]
    theta_v: f64,
    /// Receive half-power beam width, degrees
    #[arg(long)]
    theta_rx: f64,
    /// Transmit half-power beam width, degrees (default: same as theta-rx)
    #[arg(long)]
    theta_tx: Option<f64>,
}

impl LinkArgs {
    fn build(&self) -> Result<(BeamGeometry, MotionState), ModelError> {
        let geom = BeamGeometry::from_degrees(
            self.theta_tx.unwrap_or(self.theta_rx),
            self.theta_rx,
            self.theta_v,
        )?;
        let motion = MotionState::from_kmh(self.speed, self.carrier)?;
        if geom.wide_beam() {
            eprintln!(
                "warning: theta-rx = {} deg spans at least a half circle; the single-window \
                 model targets narrow receive beams",
                self.theta_rx
            );
        }
        Ok((geom, motion))
    }

    fn params(&self) -> serde_json::Value {
        json!({
            "carrier_hz": self.carrier,
            "speed_kmh": self.speed,
            "speed_mps": self.speed / 3.6,
            "theta_v_deg": self.theta_v,
            "theta_v_rad": self.theta_v.to_radians(),
            "theta_rx_deg": self.theta_rx,
            "theta_rx_rad": self.theta_rx.to_radians(),
            "theta_tx_deg": self.theta_tx.unwrap_or(self.theta_rx),
        })
    }
}

#[derive(Args)]
struct GainArgs {
    /// Receive gain pattern
    #[arg(long, value_enum, default_value_t = GainKind::Flat)]
    gain: GainKind,
    /// Peak linear gain
    #[arg(long, default_value_t = 1.0)]
    gain_peak: f64,
    /// HPBW of the parametric pattern, degrees (default: theta-rx)
    #[arg(long)]
    gain_hpbw: Option<f64>,
}

impl GainArgs {
    fn build(&self, theta_rx_deg: f64) -> Result<GainPattern, ModelError> {
        let pattern = match self.gain {
            GainKind::Flat => GainPattern::Flat {
                peak: self.gain_peak,
            },
            GainKind::Parametric => GainPattern::Parametric {
                hpbw: self.gain_hpbw.unwrap_or(theta_rx_deg).to_radians(),
                peak: self.gain_peak,
            },
        };
        pattern.validate()?;
        Ok(pattern)
    }

    fn params(&self, theta_rx_deg: f64) -> serde_json::Value {
        json!({
            "kind": match self.gain { GainKind::Flat => "flat", GainKind::Parametric => "parametric" },
            "peak": self.gain_peak,
            "hpbw_deg": self.gain_hpbw.unwrap_or(theta_rx_deg),
        })
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    link: LinkArgs,
    #[command(flatten)]
    gain: GainArgs,
    /// Evaluation mode
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Number of grid points over [-f_dmax, +f_dmax]
    #[arg(long, default_value_t = 1001)]
    grid_points: usize,
    /// Angular clusters as center:width:power triplets in degrees,
    /// comma-separated (e.g. "0:2:0.5,20:4:0.3,-30:3:0.2")
    #[arg(long, allow_hyphen_values = true)]
    clusters: Option<String>,
    /// Finite density written in place of the band-edge singularity
    #[arg(long, default_value_t = 1e12)]
    endpoint_cap: f64,
    /// Output file
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    link: LinkArgs,
    /// Output file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    link: LinkArgs,
    #[command(flatten)]
    gain: GainArgs,
    /// Number of Monte Carlo samples
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    /// Histogram bins over the analytic support
    #[arg(long, default_value_t = 200)]
    bins: usize,
    /// RNG seed (runs are reproducible per seed)
    #[arg(long)]
    seed: u64,
    /// Also write the exact closed-form density at the bin centers
    /// to <output stem>.analytic.csv for overlay plotting
    #[arg(long)]
    with_analytic: bool,
    /// Output file
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct FadeArgs {
    #[command(flatten)]
    link: LinkArgs,
    #[command(flatten)]
    gain: GainArgs,
    /// Number of sinusoid paths
    #[arg(long, default_value_t = 256)]
    paths: usize,
    /// Record duration, seconds
    #[arg(long)]
    duration: f64,
    /// Sample rate, Hz (must exceed 2 * f_dmax)
    #[arg(long)]
    sample_rate: f64,
    /// RNG seed (runs are reproducible per seed)
    #[arg(long)]
    seed: u64,
    /// Also estimate the PSD and write it here (freq_hz, density)
    #[arg(long)]
    psd_output: Option<PathBuf>,
    /// Welch segment length
    #[arg(long, default_value_t = 1024)]
    segment_len: usize,
    /// Welch segment overlap fraction
    #[arg(long, default_value_t = 0.5)]
    overlap: f64,
    /// Output file for the (t, re, im) samples
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct TrainArgs {
    /// Scenario config file (JSON; see the README for the schema)
    #[arg(long)]
    config: PathBuf,
    /// Output trace file
    #[arg(short, long)]
    output: PathBuf,
}

enum CliError {
    Model(ModelError),
    Io(std::io::Error),
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Approx(args) => cmd_approx(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Fade(args) => cmd_fade(args),
        Command::Train(args) => cmd_train(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Model(e @ ModelError::Numerical { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Model(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::from(1)
        }
    }
}

fn parse_clusters(spec: &str) -> Result<ClusterSet, ModelError> {
    let mut clusters = Vec::new();
    for (i, item) in spec.split(',').enumerate() {
        let parts: Vec<&str> = item.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(ModelError::domain(format!(
                "cluster {i}: expected center:width:power (degrees), got `{item}`"
            )));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| ModelError::domain(format!("cluster {i}: `{p}` is not a number")))
            })
            .collect::<Result<_, _>>()?;
        clusters.push(Cluster {
            center: nums[0].to_radians(),
            width: nums[1].to_radians(),
            power: nums[2],
        });
    }
    ClusterSet::new(clusters)
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<(), CliError> {
    let (geom, motion) = args.link.build()?;
    let gain = args.gain.build(args.link.theta_rx)?;
    let mode: EvalMode = args.mode.into();
    let f_dmax = motion.f_dmax();
    if f_dmax <= 0.0 {
        return Err(ModelError::domain("speed must be > 0 km/h for a spectrum".to_string()).into());
    }

    let clusters = args.clusters.as_deref().map(parse_clusters).transpose()?;
    let (samples, total_power) = match &clusters {
        Some(set) => {
            let segments = set.segments(&geom, &motion);
            for (j, seg) in segments.iter().enumerate() {
                if seg.is_none() {
                    eprintln!(
                        "warning: cluster {j} does not intersect the receive beam and \
                         contributes nothing"
                    );
                }
            }
            let samples = SpectrumSamples::from_grid(
                f_dmax,
                args.grid_points,
                args.endpoint_cap,
                mode.tag(),
                |f| multicluster_psd(f, set, &geom, &motion, &gain, mode),
            )?;
            let mut power = 0.0;
            for seg in segments.into_iter().flatten() {
                power += integrate_psd(
                    |f| multicluster_psd(f, set, &geom, &motion, &gain, mode).unwrap_or(0.0),
                    seg.f_lo,
                    seg.f_hi,
                    f_dmax,
                )?;
            }
            (samples, power)
        }
        None => {
            let samples = SpectrumSamples::from_grid(
                f_dmax,
                args.grid_points,
                args.endpoint_cap,
                mode.tag(),
                |f| doppler_psd(f, &geom, &motion, &gain, mode),
            )?;
            let support = doppler_support(&geom, &motion);
            let power = integrate_psd(
                |f| doppler_psd(f, &geom, &motion, &gain, mode).unwrap_or(0.0),
                support.f_lo,
                support.f_hi,
                f_dmax,
            )?;
            (samples, power)
        }
    };

    let support = doppler_support(&geom, &motion);
    let meta = json!({
        "f_dmax_hz": f_dmax,
        "mode": mode.tag(),
        "region": support.region.to_string(),
        "support_lo_hz": support.f_lo,
        "support_hi_hz": support.f_hi,
        "shift_hz": support.shift,
        "spread_hz": support.spread,
        "total_integrated_power": total_power,
        "grid_points": args.grid_points,
        "endpoint_cap": args.endpoint_cap,
        "gain": args.gain.params(args.link.theta_rx),
        "clusters": args.clusters,
    });

    match args.format {
        Format::Csv => {
            write_csv(
                &args.output,
                "freq_hz,psd_per_hz",
                samples
                    .freqs
                    .iter()
                    .zip(samples.values.iter())
                    .map(|(f, v)| format!("{},{}", fmt(*f), fmt(*v))),
            )?;
        }
        Format::Json => {
            let doc = json!({
                "schema_version": 1,
                "meta": meta,
                "freqs": samples.freqs,
                "psd": samples.values,
            });
            std::fs::write(
                &args.output,
                serde_json::to_string(&doc).expect("serializes"),
            )?;
        }
    }

    let mut params = args.link.params();
    params["meta"] = meta;
    RunManifest::new("spectrum", None, params).write_beside(&args.output)?;
    Ok(())
}

fn cmd_approx(args: ApproxArgs) -> Result<(), CliError> {
    if args.link.theta_rx > 20.0 {
        eprintln!(
            "warning: theta-rx = {} deg is outside the small-beamwidth regime the \
             approximations target (<= 20 deg)",
            args.link.theta_rx
        );
    }
    let (geom, motion) = args.link.build()?;
    let approx = approx_shift_spread(geom.theta_v(), geom.theta_rx(), motion.f_dmax())?;
    let exact = doppler_support(&geom, &motion);

    write_csv(
        &args.output,
        "theta_v_deg,theta_rx_deg,f_dmax_hz,region,shift_hz,spread_hz,exact_shift_hz,exact_spread_hz",
        std::iter::once(format!(
            "{},{},{},{},{},{},{},{}",
            fmt(args.link.theta_v),
            fmt(args.link.theta_rx),
            fmt(motion.f_dmax()),
            approx.region,
            fmt(approx.shift),
            fmt(approx.spread),
            fmt(exact.shift),
            fmt(exact.spread),
        )),
    )?;

    let mut params = args.link.params();
    params["result"] = json!({
        "region": approx.region.to_string(),
        "shift_hz": approx.shift,
        "spread_hz": approx.spread,
        "exact_shift_hz": exact.shift,
        "exact_spread_hz": exact.spread,
    });
    RunManifest::new("approx", None, params).write_beside(&args.output)?;
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let (geom, motion) = args.link.build()?;
    let gain = args.gain.build(args.link.theta_rx)?;
    let samples = sample_doppler(&geom, &motion, &gain, args.samples, args.seed)?;
    let support = doppler_support(&geom, &motion);
    let hist = empirical_pdf(&samples, args.bins, &support)?;

    write_csv(
        &args.output,
        "bin_lo_hz,bin_hi_hz,density_per_hz",
        (0..hist.n_bins()).map(|i| {
            format!(
                "{},{},{}",
                fmt(hist.edges[i]),
                fmt(hist.edges[i + 1]),
                fmt(hist.densities[i])
            )
        }),
    )?;

    // The histogram estimates the gain-weighted density normalized to unit
    // mass (acceptance sampling renormalizes), so that is what the overlay
    // and the L1 figure compare against. With flat gain this is the plain
    // shift pdf.
    let analytic = |f: f64| {
        doppler_psd(f, &geom, &motion, &gain, EvalMode::Exact).unwrap_or(0.0)
    };
    let analytic_mass = if !hist.is_degenerate() && motion.f_dmax() > 0.0 {
        integrate_psd(analytic, support.f_lo, support.f_hi, motion.f_dmax())?
    } else {
        1.0
    };

    let mut analytic_path = None;
    if args.with_analytic && !hist.is_degenerate() {
        let path = args.output.with_extension("analytic.csv");
        write_csv(
            &path,
            "freq_hz,density_per_hz",
            (0..hist.n_bins()).map(|i| {
                let center = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
                format!("{},{}", fmt(center), fmt(analytic(center) / analytic_mass))
            }),
        )?;
        analytic_path = Some(path);
    }

    if !hist.is_degenerate() && motion.f_dmax() > 0.0 {
        let l1 = l1_distance(&hist, |f| analytic(f) / analytic_mass, motion.f_dmax())?;
        eprintln!("L1(empirical, exact closed form) = {l1:.6}");
    }

    let mut params = args.link.params();
    params["oracle"] = json!({
        "samples": args.samples,
        "bins": args.bins,
        "gain": args.gain.params(args.link.theta_rx),
        "analytic_overlay": analytic_path.map(|p| p.display().to_string()),
    });
    RunManifest::new("oracle", Some(args.seed), params).write_beside(&args.output)?;
    Ok(())
}

fn cmd_fade(args: FadeArgs) -> Result<(), CliError> {
    let (geom, motion) = args.link.build()?;
    let gain = args.gain.build(args.link.theta_rx)?;
    let support = doppler_support(&geom, &motion);
    if args.duration * support.spread < 10.0 {
        eprintln!(
            "warning: duration * spread = {:.2} < 10; the record resolves the fading \
             statistics poorly",
            args.duration * support.spread
        );
    }
    let realization = generate_fading(
        &geom,
        &motion,
        &gain,
        args.paths,
        args.duration,
        args.sample_rate,
        args.seed,
    )?;

    write_csv(
        &args.output,
        "t_s,re,im",
        realization.samples.iter().enumerate().map(|(k, h)| {
            format!(
                "{},{},{}",
                fmt(k as f64 / realization.sample_rate),
                fmt(h.re),
                fmt(h.im)
            )
        }),
    )?;

    if let Some(psd_path) = &args.psd_output {
        let psd = estimate_psd(&realization, args.segment_len, args.overlap)?;
        write_csv(
            psd_path,
            "freq_hz,density_per_hz",
            psd.freqs
                .iter()
                .zip(psd.values.iter())
                .map(|(f, v)| format!("{},{}", fmt(*f), fmt(*v))),
        )?;
    }

    let mut params = args.link.params();
    params["fade"] = json!({
        "paths": args.paths,
        "duration_s": args.duration,
        "sample_rate_hz": args.sample_rate,
        "segment_len": args.segment_len,
        "overlap": args.overlap,
        "gain": args.gain.params(args.link.theta_rx),
        "mean_power": realization.mean_power(),
    });
    RunManifest::new("fade", Some(args.seed), params).write_beside(&args.output)?;
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)?;
    let config = ScenarioConfig::from_json_str(&text)?;
    let trace = simulate(&config)?;

    write_csv(
        &args.output,
        "t_s,position_m,speed_mps,serving_bs,theta_v_rad,theta_rx_rad,f_dmax_hz,shift_hz,spread_hz,handover",
        trace.rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{},{}",
                fmt(r.t_s),
                fmt(r.position_m),
                fmt(r.speed_mps),
                r.serving_bs,
                fmt(r.theta_v_rad),
                fmt(r.theta_rx_rad),
                fmt(r.f_dmax_hz),
                fmt(r.shift_hz),
                fmt(r.spread_hz),
                u8::from(r.handover),
            )
        }),
    )?;

    let params = json!({
        "config_file": args.config.display().to_string(),
        "config": serde_json::from_str::<serde_json::Value>(&text).unwrap_or_default(),
        "rows": trace.rows.len(),
        "handovers": trace.handover_count(),
    });
    RunManifest::new("train", None, params).write_beside(&args.output)?;
    Ok(())
}
