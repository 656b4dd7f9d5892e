//! Tapped-delay-line profile files for the air-ground channel.
//!
//! A profile is a plain-text file with one `[tap]` section per tap:
//!
//! ```text
//! name=hilly_suburban_mean
//!
//! [tap]
//! delay_us=0.0
//! power_db=0.0
//! fading=los_ricean
//!
//! [tap]
//! delay_us=0.2
//! power_db=-12.0
//! fading=rayleigh
//! on_probability=0.3
//! mean_on_symbols=6
//! mean_off_symbols=14
//! ```
//!
//! Tap 1 is the line-of-sight ray (delay 0, 0 dB reference), tap 2 the
//! always-on earth-surface reflection, and taps 3 to 6 may be intermittent
//! multipath components with geometric on/off persistence measured in
//! symbols. The shipped `hilly_suburban_mean` and `hilly_suburban_worst`
//! profiles are editable placeholders with the structure above; their tap
//! powers and delays are not measurement data, so every output produced from
//! them is labeled with the profile name.

use crate::{Error, Result};

/// Small-scale fading behavior of one tap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TapFading {
    /// Ricean with the channel K-factor; used for the LOS ray.
    LosRicean,
    /// Zero-mean complex Gaussian, fresh per symbol.
    Rayleigh,
    /// Constant amplitude sqrt of the mean power.
    Fixed,
}

impl TapFading {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "los_ricean" => Some(TapFading::LosRicean),
            "rayleigh" => Some(TapFading::Rayleigh),
            "fixed" => Some(TapFading::Fixed),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            TapFading::LosRicean => "los_ricean",
            TapFading::Rayleigh => "rayleigh",
            TapFading::Fixed => "fixed",
        }
    }
}

/// On/off persistence of an intermittent tap, in symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intermittency {
    pub on_probability: f64,
    pub mean_on_symbols: f64,
    pub mean_off_symbols: f64,
}

/// One tap of the delay line.
#[derive(Debug, Clone, PartialEq)]
pub struct TapSpec {
    pub delay_s: f64,
    /// Mean power in dB relative to the LOS tap.
    pub power_db: f64,
    pub fading: TapFading,
    pub intermittency: Option<Intermittency>,
}

impl TapSpec {
    pub fn power_linear(&self) -> f64 {
        10f64.powf(self.power_db / 10.0)
    }

    pub fn is_intermittent(&self) -> bool {
        self.intermittency.is_some()
    }
}

/// A named set of taps.
#[derive(Debug, Clone, PartialEq)]
pub struct TapProfileSet {
    pub name: String,
    pub taps: Vec<TapSpec>,
}

const MAX_TAPS: usize = 6;

impl TapProfileSet {
    /// Placeholder hilly-suburban profile, mean delay-spread case.
    ///
    /// Both cases share the earth-reflection tap; the delay-spread
    /// difference lives in the intermittent rays.
    pub fn hilly_suburban_mean() -> Self {
        Self {
            name: "hilly_suburban_mean".into(),
            taps: vec![
                tap(0.0, 0.0, TapFading::LosRicean, None),
                tap(0.15e-6, -6.0, TapFading::Fixed, None),
                tap(0.2e-6, -12.0, TapFading::Rayleigh, Some((0.3, 6.0, 14.0))),
                tap(0.5e-6, -15.0, TapFading::Rayleigh, Some((0.2, 6.0, 24.0))),
                tap(1.0e-6, -18.0, TapFading::Rayleigh, Some((0.1, 4.0, 36.0))),
                tap(2.0e-6, -20.0, TapFading::Rayleigh, Some((0.05, 3.0, 57.0))),
            ],
        }
    }

    /// Placeholder hilly-suburban profile, worst delay-spread case.
    pub fn hilly_suburban_worst() -> Self {
        Self {
            name: "hilly_suburban_worst".into(),
            taps: vec![
                tap(0.0, 0.0, TapFading::LosRicean, None),
                tap(0.15e-6, -6.0, TapFading::Fixed, None),
                tap(0.5e-6, -12.0, TapFading::Rayleigh, Some((0.3, 6.0, 14.0))),
                tap(1.5e-6, -15.0, TapFading::Rayleigh, Some((0.2, 6.0, 24.0))),
                tap(3.0e-6, -18.0, TapFading::Rayleigh, Some((0.1, 4.0, 36.0))),
                tap(4.5e-6, -20.0, TapFading::Rayleigh, Some((0.05, 3.0, 57.0))),
            ],
        }
    }

    /// Expected total received power relative to the LOS tap, long-run:
    /// always-on taps count fully, intermittent taps by their stationary
    /// occupancy mean_on/(mean_on + mean_off).
    pub fn expected_mean_power(&self) -> f64 {
        self.taps
            .iter()
            .map(|t| {
                let occ = t
                    .intermittency
                    .map(|i| i.mean_on_symbols / (i.mean_on_symbols + i.mean_off_symbols))
                    .unwrap_or(1.0);
                t.power_linear() * occ
            })
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |key: &str, msg: String| Error::Profile {
            line: 0,
            key: key.into(),
            msg,
        };
        if self.taps.is_empty() {
            return Err(fail("tap", "profile has no taps".into()));
        }
        if self.taps.len() > MAX_TAPS {
            return Err(fail(
                "tap",
                format!("at most {MAX_TAPS} taps supported, got {}", self.taps.len()),
            ));
        }
        let first = &self.taps[0];
        if first.delay_s != 0.0 {
            return Err(fail("delay_us", "tap 1 must have zero delay".into()));
        }
        if first.power_db != 0.0 {
            return Err(fail("power_db", "tap 1 must be the 0 dB reference".into()));
        }
        for (i, t) in self.taps.iter().enumerate() {
            if !t.delay_s.is_finite() || t.delay_s < 0.0 {
                return Err(fail("delay_us", format!("tap {} delay invalid", i + 1)));
            }
            if !t.power_db.is_finite() {
                return Err(fail("power_db", format!("tap {} power invalid", i + 1)));
            }
            if i > 0 && t.delay_s <= self.taps[i - 1].delay_s {
                return Err(fail(
                    "delay_us",
                    format!("tap delays must be strictly increasing at tap {}", i + 1),
                ));
            }
            if let Some(im) = &t.intermittency {
                if i < 2 {
                    return Err(fail(
                        "on_probability",
                        format!("tap {} may not be intermittent; only taps 3..6 may", i + 1),
                    ));
                }
                if !(0.0..=1.0).contains(&im.on_probability) {
                    return Err(fail(
                        "on_probability",
                        format!("must be in [0, 1], got {}", im.on_probability),
                    ));
                }
                if !im.mean_on_symbols.is_finite()
                    || !im.mean_off_symbols.is_finite()
                    || im.mean_on_symbols < 1.0
                    || im.mean_off_symbols < 1.0
                {
                    return Err(fail(
                        "mean_on_symbols",
                        "mean on/off durations must be >= 1 symbol".into(),
                    ));
                }
                let stationary = im.mean_on_symbols / (im.mean_on_symbols + im.mean_off_symbols);
                if (stationary - im.on_probability).abs() > 1e-3 {
                    return Err(fail(
                        "on_probability",
                        format!(
                            "inconsistent with durations: mean_on/(mean_on+mean_off) = {stationary:.4}, on_probability = {}",
                            im.on_probability
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Parse a profile from text. Errors name the offending key and line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = String::new();
        let mut taps: Vec<TapSpec> = Vec::new();
        let mut cur: Option<PartialTap> = None;

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "[tap]" {
                if let Some(p) = cur.take() {
                    taps.push(p.finish()?);
                }
                cur = Some(PartialTap::new(lineno));
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Profile {
                    line: lineno,
                    key: line.into(),
                    msg: "expected key=value".into(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            match (&mut cur, key) {
                (None, "name") => name = value.into(),
                (None, _) => {
                    return Err(Error::Profile {
                        line: lineno,
                        key: key.into(),
                        msg: "key outside a [tap] section (only `name` allowed)".into(),
                    })
                }
                (Some(p), _) => p.set(lineno, key, value)?,
            }
        }
        if let Some(p) = cur.take() {
            taps.push(p.finish()?);
        }
        if name.is_empty() {
            return Err(Error::Profile {
                line: 0,
                key: "name".into(),
                msg: "missing profile name".into(),
            });
        }
        let profile = TapProfileSet { name, taps };
        profile.validate()?;
        Ok(profile)
    }

    /// Render in the same key=value format `parse` accepts.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("name={}\n", self.name);
        for t in &self.taps {
            out.push_str("\n[tap]\n");
            out.push_str(&format!("delay_us={}\n", t.delay_s * 1e6));
            out.push_str(&format!("power_db={}\n", t.power_db));
            out.push_str(&format!("fading={}\n", t.fading.as_str()));
            if let Some(im) = &t.intermittency {
                out.push_str(&format!("on_probability={}\n", im.on_probability));
                out.push_str(&format!("mean_on_symbols={}\n", im.mean_on_symbols));
                out.push_str(&format!("mean_off_symbols={}\n", im.mean_off_symbols));
            }
        }
        out
    }
}

fn tap(
    delay_s: f64,
    power_db: f64,
    fading: TapFading,
    intermittency: Option<(f64, f64, f64)>,
) -> TapSpec {
    TapSpec {
        delay_s,
        power_db,
        fading,
        intermittency: intermittency.map(|(p, on, off)| Intermittency {
            on_probability: p,
            mean_on_symbols: on,
            mean_off_symbols: off,
        }),
    }
}

struct PartialTap {
    line: usize,
    delay_us: Option<f64>,
    power_db: Option<f64>,
    fading: Option<TapFading>,
    on_probability: Option<f64>,
    mean_on: Option<f64>,
    mean_off: Option<f64>,
}

impl PartialTap {
    fn new(line: usize) -> Self {
        Self {
            line,
            delay_us: None,
            power_db: None,
            fading: None,
            on_probability: None,
            mean_on: None,
            mean_off: None,
        }
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>().map_err(|_| Error::Profile {
                line,
                key: key.into(),
                msg: format!("not a number: `{v}`"),
            })
        };
        match key {
            "delay_us" => self.delay_us = Some(num(value)?),
            "power_db" => self.power_db = Some(num(value)?),
            "fading" => {
                self.fading = Some(TapFading::parse(value).ok_or_else(|| Error::Profile {
                    line,
                    key: key.into(),
                    msg: format!("unknown fading kind `{value}` (los_ricean|rayleigh|fixed)"),
                })?)
            }
            "on_probability" => self.on_probability = Some(num(value)?),
            "mean_on_symbols" => self.mean_on = Some(num(value)?),
            "mean_off_symbols" => self.mean_off = Some(num(value)?),
            _ => {
                return Err(Error::Profile {
                    line,
                    key: key.into(),
                    msg: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<TapSpec> {
        let missing = |key: &str| Error::Profile {
            line: self.line,
            key: key.into(),
            msg: "missing required key".into(),
        };
        let delay_us = self.delay_us.ok_or_else(|| missing("delay_us"))?;
        let power_db = self.power_db.ok_or_else(|| missing("power_db"))?;
        let fading = self.fading.ok_or_else(|| missing("fading"))?;
        let intermittency = match (self.on_probability, self.mean_on, self.mean_off) {
            (None, None, None) => None,
            (Some(p), Some(on), Some(off)) => Some(Intermittency {
                on_probability: p,
                mean_on_symbols: on,
                mean_off_symbols: off,
            }),
            _ => {
                return Err(Error::Profile {
                    line: self.line,
                    key: "on_probability".into(),
                    msg: "intermittent taps need all of on_probability, mean_on_symbols, mean_off_symbols".into(),
                })
            }
        };
        Ok(TapSpec {
            delay_s: delay_us * 1e-6,
            power_db,
            fading,
            intermittency,
        })
    }
}
