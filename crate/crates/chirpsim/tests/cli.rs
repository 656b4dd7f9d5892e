//! End-to-end tests of the `chirpsim` binary: flag handling, CSV schemas,
//! exit codes, reproducibility.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chirpsim"))
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("chirpsim_cli_{tag}_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Self(dir)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn gen_emits_samples_and_trace() {
    let dir = TempDir::new("gen");
    let prefix = dir.path("wave");
    let status = bin()
        .args(["gen", "--n", "10", "--t-us", "10", "--family", "linear", "--m", "0,9"])
        .arg("--out-prefix")
        .arg(&prefix)
        .status()
        .unwrap();
    assert!(status.success());

    let samples = read(&dir.path("wave_samples_m0.csv"));
    assert!(samples.starts_with("#schema=waveform/v1\n"));
    let rows = data_rows(&samples);
    assert_eq!(rows.len(), 80); // oversampling 4 * 2 * 10
    let first_re: f64 = rows[0][1].parse().unwrap();
    let first_im: f64 = rows[0][2].parse().unwrap();
    assert!((first_re - (std::f64::consts::FRAC_PI_4).cos()).abs() < 1e-8);
    assert!((first_im - (std::f64::consts::FRAC_PI_4).sin()).abs() < 1e-8);

    // trace for m=9: final instantaneous frequency within one grid step of
    // 1.9 MHz, where one step sweeps (N/T^2) * (T/points) Hz
    let trace = read(&dir.path("wave_trace_m9.csv"));
    assert!(trace.starts_with("#schema=tftrace/v1\n"));
    let trows = data_rows(&trace);
    let last_f: f64 = trows.last().unwrap()[1].parse().unwrap();
    let sweep_per_step = 10.0 / 1e-5 / trows.len() as f64;
    assert!(
        (last_f - 1.9e6).abs() <= sweep_per_step * 1.01,
        "final trace frequency {last_f}, allowed step {sweep_per_step}"
    );

    // manifest written alongside
    assert!(dir.path("wave.manifest").exists());
}

#[test]
fn gen_sample_count_matches_set() {
    let dir = TempDir::new("gen_count");
    let prefix = dir.path("w");
    assert!(bin()
        .args(["gen", "--n", "10", "--t-us", "10", "--family", "linear", "--m", "0"])
        .arg("--out-prefix")
        .arg(&prefix)
        .status()
        .unwrap()
        .success());
    let rows = data_rows(&read(&dir.path("w_samples_m0.csv")));
    assert_eq!(rows.len(), 80); // oversampling 4 * 2 * 10
}

#[test]
fn gen_quartic_gamma_zero_is_byte_identical_to_linear() {
    let dir = TempDir::new("gen_gamma0");
    let lin = dir.path("lin");
    let qua = dir.path("qua");
    for (prefix, fam, gamma) in [(&lin, "linear", "0.15"), (&qua, "quartic", "0")] {
        assert!(bin()
            .args(["gen", "--n", "10", "--t-us", "10", "--family", fam, "--gamma", gamma, "--m", "3"])
            .arg("--out-prefix")
            .arg(prefix)
            .status()
            .unwrap()
            .success());
    }
    let a = read(&dir.path("lin_samples_m3.csv"));
    let b = read(&dir.path("qua_samples_m3.csv"));
    assert_eq!(a, b);
}

#[test]
fn xcorr_quartic_below_linear_and_loading_bounded() {
    let dir = TempDir::new("xcorr");
    let full = dir.path("full.csv");
    assert!(bin()
        .args(["xcorr", "--n", "10", "--t-us", "10", "--families", "linear,quartic", "--points", "65"])
        .arg("--out")
        .arg(&full)
        .status()
        .unwrap()
        .success());
    let text = read(&full);
    assert!(text.starts_with("#schema=xcorr/v1\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 130);

    let curve = |fam: &str| -> Vec<(f64, f64)> {
        rows.iter()
            .filter(|r| r[1] == fam)
            .map(|r| (r[0].parse().unwrap(), r[4].parse().unwrap()))
            .collect()
    };
    let lin = curve("linear");
    let qua = curve("quartic");
    // delay column spans [0, 0.5T]
    assert_eq!(lin.first().unwrap().0, 0.0);
    assert!((lin.last().unwrap().0 - 0.5).abs() < 1e-12);
    // quartic below linear on [0.05T, 0.5T]
    for ((d, l), (_, q)) in lin.iter().zip(&qua) {
        if *d >= 0.05 {
            assert!(q < l, "quartic {q} not below linear {l} at {d} T");
        }
    }

    // partial loading never exceeds the fully loaded average (+2e-3)
    let half = dir.path("half.csv");
    assert!(bin()
        .args(["xcorr", "--n", "10", "--t-us", "10", "--families", "linear", "--points", "65", "--loading", "5"])
        .arg("--out")
        .arg(&half)
        .status()
        .unwrap()
        .success());
    let hrows = data_rows(&read(&half));
    for (r, (_, l)) in hrows.iter().zip(&lin) {
        let v: f64 = r[4].parse().unwrap();
        assert!(v <= l + 2e-3, "loading-5 value {v} exceeds full {l}");
        assert_eq!(r[3], "5");
    }
}

#[test]
fn ber_same_seed_gives_identical_csv() {
    let dir = TempDir::new("ber_det");
    let a = dir.path("a.csv");
    let b = dir.path("b.csv");
    for out in [&a, &b] {
        assert!(bin()
            .args([
                "ber", "--channel", "awgn", "--users", "1", "--mode", "coherent",
                "--ebn0", "0:2:10", "--seed", "7", "--min-errors", "100",
                "--max-bits", "100000",
            ])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap()
            .success());
    }
    assert_eq!(read(&a), read(&b));
    let text = read(&a);
    assert!(text.starts_with("#schema=ber/v1\n"));
    assert_eq!(data_rows(&text).len(), 6);

    // manifest records the seed
    let manifest = read(&dir.path("a.manifest"));
    assert!(manifest.contains("seed=7"));
    assert!(manifest.contains("command=ber"));
}

#[test]
fn ber_auto_seed_is_recorded_in_manifest() {
    let dir = TempDir::new("ber_autoseed");
    let out = dir.path("auto.csv");
    assert!(bin()
        .args([
            "ber", "--channel", "awgn", "--users", "1", "--mode", "noncoherent",
            "--ebn0", "4", "--min-errors", "50", "--max-bits", "20000",
        ])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let manifest = read(&dir.path("auto.manifest"));
    assert!(
        manifest.lines().any(|l| l.starts_with("seed=")),
        "auto-drawn seed missing from manifest:\n{manifest}"
    );
}

#[test]
fn malformed_profile_exits_2_and_names_key() {
    let dir = TempDir::new("badprofile");
    let profile = dir.path("bad.profile");
    std::fs::write(
        &profile,
        "name=bad\n\n[tap]\ndelay_us=0\npower_db=0\nfading=los_ricean\nwibble=3\n",
    )
    .unwrap();
    let out = dir.path("out.csv");
    let output = bin()
        .args(["ber", "--channel", "ag-tdl", "--users", "2", "--ebn0", "10"])
        .arg("--profile")
        .arg(&profile)
        .args(["--seed", "1", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("wibble"), "stderr does not name the key: {stderr}");
}

#[test]
fn usage_error_exits_2() {
    let output = bin().args(["ber", "--channel", "warp-drive"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn invalid_user_count_exits_2() {
    let dir = TempDir::new("badusers");
    let out = dir.path("x.csv");
    let output = bin()
        .args([
            "ber", "--channel", "awgn", "--users", "11", "--ebn0", "4", "--seed", "1",
        ])
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn pdp_emits_schema_and_positive_powers() {
    let dir = TempDir::new("pdp");
    let out = dir.path("pdp.csv");
    assert!(bin()
        .args(["pdp", "--profile", "worst", "--symbols", "50", "--seed", "3"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let text = read(&out);
    assert!(text.starts_with("#schema=pdp/v1\nsymbol_index,tap_delay_s,power_db\n"));
    let rows = data_rows(&text);
    assert!(rows.len() >= 100); // at least LOS + reflection per symbol
    for r in &rows {
        let idx: usize = r[0].parse().unwrap();
        assert!(idx < 50);
        let delay: f64 = r[1].parse().unwrap();
        assert!((0.0..5e-6).contains(&delay));
    }
}

#[test]
fn shipped_profile_files_match_builtins() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("profiles");
    for (file, name) in [
        ("hilly_suburban_mean.profile", "hilly_suburban_mean"),
        ("hilly_suburban_worst.profile", "hilly_suburban_worst"),
    ] {
        let parsed = chirpsim::channel::TapProfileSet::parse(&read(&root.join(file))).unwrap();
        let builtin = if name == "hilly_suburban_mean" {
            chirpsim::channel::TapProfileSet::hilly_suburban_mean()
        } else {
            chirpsim::channel::TapProfileSet::hilly_suburban_worst()
        };
        assert_eq!(parsed, builtin, "{file} out of sync with the builtin");
    }
}

#[test]
fn ber_accepts_shipped_profile_files() {
    let profile = Path::new(env!("CARGO_MANIFEST_DIR")).join("profiles/hilly_suburban_mean.profile");
    let dir = TempDir::new("ber_profile_file");
    let out = dir.path("ag.csv");
    assert!(bin()
        .args(["ber", "--channel", "ag-tdl", "--users", "3", "--ebn0", "12"])
        .arg("--profile")
        .arg(&profile)
        .args(["--seed", "5", "--min-errors", "50", "--max-bits", "30000", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let rows = data_rows(&read(&out));
    assert_eq!(rows[0][3], "hilly_suburban_mean");
}
