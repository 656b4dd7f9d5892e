//! Command line front end: flag parsing, experiment orchestration, CSV and
//! manifest emission.
//!
//! Four subcommands wrap the library: `gen` (waveform samples and TF
//! traces), `xcorr` (load-averaged cross-correlation versus delay), `ber`
//! (Monte Carlo BER sweeps) and `pdp` (air-ground power delay profile
//! export). Every CSV starts with a versioned `#schema=` comment line and
//! prints reals with 9 significant digits; every run writes a `.manifest`
//! file echoing the resolved configuration so the run can be reproduced
//! byte-identically (timestamp aside).
//!
//! Exit codes: 0 success, 1 runtime/domain error, 2 configuration error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;

use crate::channel::{ag_realization, ChannelSpec, TapProfileSet};
use crate::correlation::{average_crosscorr_vs_delay, default_delay_grid};
use crate::montecarlo::{run_ber, SimConfig, Stopping};
use crate::receiver::DetectorMode;
use crate::waveform::{ChirpFamily, ChirpSet, Direction};
use crate::{Error, Result};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "chirpsim",
    version,
    about = "Multi-user chirp spread spectrum simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit waveform samples and time-frequency traces as CSV.
    Gen(GenArgs),
    /// Emit average cross-correlation versus delay as CSV.
    Xcorr(XcorrArgs),
    /// Run a BER Monte Carlo sweep and emit one CSV row per Eb/N0 point.
    Ber(BerArgs),
    /// Emit an air-ground channel power delay profile realization as CSV.
    Pdp(PdpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Linear,
    Quartic,
}

impl From<FamilyArg> for ChirpFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Linear => ChirpFamily::Linear,
            FamilyArg::Quartic => ChirpFamily::Quartic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Coherent,
    Noncoherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Awgn,
    RiceanMem,
    RiceanFast,
    AgTdl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Up,
    Down,
}

/// Waveform-set flags shared by the subcommands.
#[derive(Debug, Args, Clone)]
pub struct SetArgs {
    /// Number of orthogonal waveforms / maximum users.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Symbol duration in microseconds.
    #[arg(long = "t-us", default_value_t = 10.0)]
    pub t_us: f64,
    /// Oversampling factor (sample rate = osf * 2N/T).
    #[arg(long, default_value_t = ChirpSet::DEFAULT_OVERSAMPLING)]
    pub osf: usize,
    /// Nonlinearity gain for the quartic family.
    #[arg(long, default_value_t = ChirpSet::DEFAULT_NONLINEARITY_GAIN)]
    pub gamma: f64,
}

impl SetArgs {
    fn build(&self, family: ChirpFamily) -> Result<ChirpSet> {
        let gamma = match family {
            ChirpFamily::Linear => 0.0,
            ChirpFamily::Quartic => self.gamma,
        };
        ChirpSet::new(self.n, self.t_us * 1e-6, self.osf, family, gamma)
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Chirp family to synthesize.
    #[arg(long, value_enum, default_value_t = FamilyArg::Linear)]
    pub family: FamilyArg,
    /// User indices, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub m: Vec<usize>,
    /// Sweep direction of the emitted symbol.
    #[arg(long, value_enum, default_value_t = DirectionArg::Up)]
    pub direction: DirectionArg,
    /// Points in each time-frequency trace.
    #[arg(long, default_value_t = 512)]
    pub trace_points: usize,
    /// Output prefix; writes <prefix>_samples_m<idx>.csv and
    /// <prefix>_trace_m<idx>.csv per user.
    #[arg(long)]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct XcorrArgs {
    #[command(flatten)]
    pub set: SetArgs,
    /// Families to evaluate, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "linear,quartic")]
    pub families: Vec<FamilyArg>,
    /// Number of active users in the load average (defaults to fully loaded).
    #[arg(long)]
    pub loading: Option<usize>,
    /// Grid points over [0, T/2].
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BerArgs {
    #[command(flatten)]
    pub set: SetArgs,
    #[arg(long, value_enum, default_value_t = FamilyArg::Linear)]
    pub family: FamilyArg,
    #[arg(long, value_enum)]
    pub channel: ChannelArg,
    /// AG profile: `mean`, `worst`, or a profile file path.
    #[arg(long, default_value = "mean")]
    pub profile: String,
    /// Ricean K-factor in dB.
    #[arg(long, default_value_t = 12.0)]
    pub kdb: f64,
    /// Normalized Doppler f_D * T for the fast-fading channel.
    #[arg(long, default_value_t = 0.01)]
    pub fdt: f64,
    /// Active users K (desired + K-1 interferers).
    #[arg(long, default_value_t = 1)]
    pub users: usize,
    /// Timing-offset standard deviation as a fraction of T.
    #[arg(long = "sigma-frac", default_value_t = 0.1)]
    pub sigma_frac: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Noncoherent)]
    pub mode: ModeArg,
    /// Eb/N0 grid in dB: `start:step:stop` or a single value.
    #[arg(long)]
    pub ebn0: String,
    /// Stop a grid point once this many bit errors are seen.
    #[arg(long = "min-errors", default_value_t = 200)]
    pub min_errors: u64,
    /// Bit budget per grid point.
    #[arg(long = "max-bits", default_value_t = 20_000_000)]
    pub max_bits: u64,
    /// Run seed; drawn from entropy and recorded in the manifest if omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Receiver's user index.
    #[arg(long = "desired-user", default_value_t = 0)]
    pub desired_user: usize,
    /// Worker threads (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PdpArgs {
    /// AG profile: `mean`, `worst`, or a profile file path.
    #[arg(long, default_value = "mean")]
    pub profile: String,
    #[arg(long, default_value_t = 12.0)]
    pub kdb: f64,
    /// Number of symbols to realize.
    #[arg(long, default_value_t = 200)]
    pub symbols: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

/// Map an error to the process exit code: configuration problems exit 2,
/// runtime/domain failures exit 1.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_) | Error::Profile { .. } => 2,
        _ => 1,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen(args) => cmd_gen(&args),
        Command::Xcorr(args) => cmd_xcorr(&args),
        Command::Ber(args) => cmd_ber(&args),
        Command::Pdp(args) => cmd_pdp(&args),
    }
}

/// Format with 9 significant digits.
fn g9(x: f64) -> String {
    if x == f64::INFINITY {
        return "inf".into();
    }
    format!("{x:.8e}")
}

/// Parse `start:step:stop` (inclusive) or a single dB value.
pub fn parse_ebn0_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: &str| Error::InvalidConfig(format!("Eb/N0 grid `{spec}`: {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => {
            let v: f64 = one.trim().parse().map_err(|_| bad("not a number"))?;
            Ok(vec![v])
        }
        [start, step, stop] => {
            let start: f64 = start.trim().parse().map_err(|_| bad("bad start"))?;
            let step: f64 = step.trim().parse().map_err(|_| bad("bad step"))?;
            let stop: f64 = stop.trim().parse().map_err(|_| bad("bad stop"))?;
            if step.is_nan() || step <= 0.0 {
                return Err(bad("step must be positive"));
            }
            if stop < start {
                return Err(bad("stop below start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(bad("expected `value` or `start:step:stop`")),
    }
}

fn load_profile(spec: &str) -> Result<TapProfileSet> {
    match spec {
        "mean" => Ok(TapProfileSet::hilly_suburban_mean()),
        "worst" => Ok(TapProfileSet::hilly_suburban_worst()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Profile {
                line: 0,
                key: "profile".into(),
                msg: format!("cannot read `{path}`: {e}"),
            })?;
            TapProfileSet::parse(&text)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, contents)?;
    Ok(())
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Days-to-civil conversion for the manifest timestamp.
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

fn utc_timestamp(secs: u64) -> String {
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    let (y, m, d) = civil_from_days(days);
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Resolved-configuration echo written alongside every output.
struct Manifest {
    command: String,
    seed: Option<u64>,
    entries: Vec<(String, String)>,
    outputs: Vec<PathBuf>,
}

impl Manifest {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            seed: None,
            entries: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    fn write(&self, out: &Path) -> Result<()> {
        let mut text = String::new();
        let _ = writeln!(text, "# chirpsim run manifest");
        let _ = writeln!(text, "tool=chirpsim {TOOL_VERSION}");
        let _ = writeln!(text, "created_utc={}", utc_timestamp(unix_now()));
        let _ = writeln!(text, "command={}", self.command);
        if let Some(seed) = self.seed {
            let _ = writeln!(text, "seed={seed}");
        }
        for (k, v) in &self.entries {
            let _ = writeln!(text, "{k}={v}");
        }
        for o in &self.outputs {
            let _ = writeln!(text, "output={}", o.display());
        }
        write_file(&out.with_extension("manifest"), &text)
    }
}

fn set_manifest_entries(man: &mut Manifest, args: &SetArgs, family: ChirpFamily) {
    man.set("n", args.n)
        .set("t_us", args.t_us)
        .set("osf", args.osf)
        .set("family", family.as_str())
        .set(
            "gamma",
            match family {
                ChirpFamily::Linear => 0.0,
                ChirpFamily::Quartic => args.gamma,
            },
        );
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let family: ChirpFamily = args.family.into();
    let set = args.set.build(family)?;
    let direction = match args.direction {
        DirectionArg::Up => Direction::Up,
        DirectionArg::Down => Direction::Down,
    };
    let prefix = args
        .out_prefix
        .to_str()
        .ok_or_else(|| Error::InvalidConfig("non-UTF8 output prefix".into()))?;

    let mut man = Manifest::new(&format!(
        "gen --n {} --t-us {} --osf {} --family {} --gamma {} --m {} --direction {:?} --trace-points {}",
        args.set.n,
        args.set.t_us,
        args.set.osf,
        family.as_str(),
        args.set.gamma,
        args.m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
        args.direction,
        args.trace_points
    ));
    set_manifest_entries(&mut man, &args.set, family);
    man.set("direction", format!("{:?}", direction).to_lowercase());

    for &m in &args.m {
        let sig = set.gen_chirp(m, direction)?;
        let mut csv = String::from("#schema=waveform/v1\nt,re,im\n");
        for (i, s) in sig.samples().iter().enumerate() {
            let t = i as f64 * sig.sample_interval();
            let _ = writeln!(csv, "{},{},{}", g9(t), g9(s.re), g9(s.im));
        }
        let sample_path = PathBuf::from(format!("{prefix}_samples_m{m}.csv"));
        write_file(&sample_path, &csv)?;
        man.outputs.push(sample_path);

        let trace = set.tf_trace(m, args.trace_points)?;
        let mut csv = String::from("#schema=tftrace/v1\nt,f\n");
        for &(t, f) in trace.points() {
            let _ = writeln!(csv, "{},{}", g9(t), g9(f));
        }
        let trace_path = PathBuf::from(format!("{prefix}_trace_m{m}.csv"));
        write_file(&trace_path, &csv)?;
        man.outputs.push(trace_path);
    }
    man.write(&PathBuf::from(prefix))?;
    Ok(())
}

pub fn cmd_xcorr(args: &XcorrArgs) -> Result<()> {
    if args.points < 2 {
        return Err(Error::InvalidConfig("need at least 2 grid points".into()));
    }
    let loading = args.loading.unwrap_or(args.set.n);
    let mut csv = String::from("#schema=xcorr/v1\ndelay_frac,family,n_signals,loading,avg_abs_corr\n");
    for &fam in &args.families {
        let family: ChirpFamily = fam.into();
        let set = args.set.build(family)?;
        let grid = default_delay_grid(&set, args.points);
        let curve = average_crosscorr_vs_delay(&set, &grid, loading)?;
        for (d, v) in curve.delays().iter().zip(curve.values()) {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                g9(d / set.symbol_duration()),
                family.as_str(),
                set.n_signals(),
                loading,
                g9(*v)
            );
        }
    }
    write_file(&args.out, &csv)?;

    let mut man = Manifest::new(&format!(
        "xcorr --n {} --t-us {} --osf {} --gamma {} --families {} --loading {} --points {}",
        args.set.n,
        args.set.t_us,
        args.set.osf,
        args.set.gamma,
        args.families
            .iter()
            .map(|f| ChirpFamily::from(*f).as_str())
            .collect::<Vec<_>>()
            .join(","),
        loading,
        args.points
    ));
    man.set("n", args.set.n)
        .set("t_us", args.set.t_us)
        .set("osf", args.set.osf)
        .set("gamma", args.set.gamma)
        .set("loading", loading)
        .set("points", args.points);
    man.outputs.push(args.out.clone());
    man.write(&args.out)?;
    Ok(())
}

pub fn cmd_ber(args: &BerArgs) -> Result<()> {
    let family: ChirpFamily = args.family.into();
    let set = args.set.build(family)?;
    let grid = parse_ebn0_grid(&args.ebn0)?;
    let channel = match args.channel {
        ChannelArg::Awgn => ChannelSpec::Awgn,
        ChannelArg::RiceanMem => ChannelSpec::RiceanMemoryless { k_db: args.kdb },
        ChannelArg::RiceanFast => ChannelSpec::RiceanFast {
            k_db: args.kdb,
            fd_t: args.fdt,
        },
        ChannelArg::AgTdl => ChannelSpec::AgTdl {
            profile: load_profile(&args.profile)?,
            k_db: args.kdb,
        },
    };
    let mode = match args.mode {
        ModeArg::Coherent => DetectorMode::Coherent,
        ModeArg::Noncoherent => DetectorMode::Noncoherent,
    };
    let seed = args.seed.unwrap_or_else(|| rand::rng().random());

    let config = SimConfig {
        set,
        n_active_users: args.users,
        offset_sigma_frac: args.sigma_frac,
        channel,
        mode,
        ebn0_grid_db: grid,
        stopping: Stopping {
            min_bit_errors: args.min_errors,
            max_bits: args.max_bits,
        },
        seed,
        desired_user: args.desired_user,
    };
    config.validate()?;

    let points = if args.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(|| run_ber(&config))?
    } else {
        run_ber(&config)?
    };

    let mut csv = String::from(
        "#schema=ber/v1\nebn0_db,family,channel,profile,sigma_frac,users,mode,bits,errors,ber,ci95\n",
    );
    for p in &points {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            g9(p.ebn0_db),
            config.set.family().as_str(),
            config.channel.label(),
            config.channel.profile_label(),
            g9(config.offset_sigma_frac),
            config.n_active_users,
            config.mode.as_str(),
            p.bits_simulated,
            p.bit_errors,
            g9(p.ber),
            g9(p.wilson_95_halfwidth)
        );
    }
    write_file(&args.out, &csv)?;

    let mut man = Manifest::new(&format!(
        "ber --n {} --t-us {} --osf {} --family {} --gamma {} --channel {} --profile {} --kdb {} --fdt {} --users {} --sigma-frac {} --mode {} --ebn0 {} --min-errors {} --max-bits {} --seed {} --desired-user {} --workers {}",
        args.set.n,
        args.set.t_us,
        args.set.osf,
        family.as_str(),
        args.set.gamma,
        config.channel.label(),
        args.profile,
        args.kdb,
        args.fdt,
        args.users,
        args.sigma_frac,
        config.mode.as_str(),
        args.ebn0,
        args.min_errors,
        args.max_bits,
        seed,
        args.desired_user,
        args.workers
    ));
    man.seed = Some(seed);
    set_manifest_entries(&mut man, &args.set, family);
    man.set("channel", config.channel.label())
        .set("profile", config.channel.profile_label())
        .set("kdb", args.kdb)
        .set("fdt", args.fdt)
        .set("users", args.users)
        .set("sigma_frac", args.sigma_frac)
        .set("mode", config.mode.as_str())
        .set("ebn0", &args.ebn0)
        .set("min_errors", args.min_errors)
        .set("max_bits", args.max_bits)
        .set("desired_user", args.desired_user)
        .set("workers", args.workers);
    man.outputs.push(args.out.clone());
    man.write(&args.out)?;
    Ok(())
}

pub fn cmd_pdp(args: &PdpArgs) -> Result<()> {
    if args.symbols == 0 {
        return Err(Error::InvalidConfig("need at least 1 symbol".into()));
    }
    let profile = load_profile(&args.profile)?;
    let seed = args.seed.unwrap_or_else(|| rand::rng().random());
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let realization = ag_realization(&profile, args.kdb, args.symbols, &mut rng)?;

    let mut csv = String::from("#schema=pdp/v1\nsymbol_index,tap_delay_s,power_db\n");
    for sym in 0..realization.n_symbols() {
        for (ti, &d) in realization.tap_delays_s().iter().enumerate() {
            let p = realization.gains(sym)[ti].norm_sqr();
            if p > 0.0 {
                let _ = writeln!(csv, "{},{},{}", sym, g9(d), g9(10.0 * p.log10()));
            }
        }
    }
    write_file(&args.out, &csv)?;

    let mut man = Manifest::new(&format!(
        "pdp --profile {} --kdb {} --symbols {} --seed {}",
        args.profile, args.kdb, args.symbols, seed
    ));
    man.seed = Some(seed);
    man.set("profile", &profile.name)
        .set("kdb", args.kdb)
        .set("symbols", args.symbols)
        .set(
            "rms_delay_spread_s",
            g9(crate::channel::delay_spread(&realization)?),
        );
    man.outputs.push(args.out.clone());
    man.write(&args.out)?;
    Ok(())
}
