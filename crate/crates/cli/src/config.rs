//! Scenario descriptions: the `key = value` file format and the built-in presets.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given more than once")]
    Duplicate(String),
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: cannot parse `{value}`")]
    Malformed { key: &'static str, value: String },
    #[error("key `{key}`: {reason}")]
    OutOfRange { key: &'static str, reason: &'static str },
    #[error("key `{key}` conflicts with {other}")]
    Inconsistent { key: &'static str, other: &'static str },
    #[error("unknown preset `{0}` (try `presets`)")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelaySetting {
    Finite { db: f64 },
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JammerPolicy {
    /// `P̄₂ = ratio · P̄₁`
    Proportional { ratio: f64 },
    /// `P̄₂` fixed in dB; `-inf` switches the jammer off.
    Fixed { db: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSetting {
    Fixed(f64),
    Optimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub relay: RelaySetting,
    pub jammer: JammerPolicy,
    pub alpha: AlphaSetting,
    pub power_control: bool,
    /// Source power sweep in dB, strictly increasing.
    pub grid: Vec<f64>,
}

pub const DEFAULT_GRID: (f64, f64, f64) = (0.0, 60.0, 1.0);

const KEYS: [&str; 9] = [
    "relay_power_db",
    "jammer_mode",
    "jammer_ratio",
    "jammer_power_db",
    "alpha",
    "power_control",
    "p1_db_start",
    "p1_db_stop",
    "p1_db_step",
];

/// Evenly spaced dB grid from `start` to `stop` inclusive.
pub fn db_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, ConfigError> {
    if !start.is_finite() {
        return Err(ConfigError::OutOfRange { key: "p1_db_start", reason: "must be finite" });
    }
    if !stop.is_finite() || stop < start {
        return Err(ConfigError::OutOfRange { key: "p1_db_stop", reason: "must be finite and >= p1_db_start" });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(ConfigError::OutOfRange { key: "p1_db_step", reason: "must be positive" });
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(ConfigError::OutOfRange { key: "p1_db_step", reason: "grid has more than 10^6 points" });
    }
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if let RelaySetting::Finite { db } = self.relay {
            if db.is_nan() || db == f64::INFINITY {
                return Err(ConfigError::OutOfRange {
                    key: "relay_power_db",
                    reason: "must be a finite number or `inf`",
                });
            }
        }
        match self.jammer {
            JammerPolicy::Proportional { ratio } if !(ratio > 0.0 && ratio.is_finite()) => {
                return Err(ConfigError::OutOfRange { key: "jammer_ratio", reason: "must be positive" });
            }
            JammerPolicy::Fixed { db } if db.is_nan() || db == f64::INFINITY => {
                return Err(ConfigError::OutOfRange { key: "jammer_power_db", reason: "must be finite or -inf" });
            }
            _ => {}
        }
        if let AlphaSetting::Fixed(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(ConfigError::OutOfRange { key: "alpha", reason: "must lie strictly between 0 and 1" });
            }
        }
        if self.grid.is_empty() {
            return Err(ConfigError::OutOfRange { key: "p1_db_stop", reason: "grid is empty" });
        }
        if self.grid.iter().any(|x| !x.is_finite()) || self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError::OutOfRange { key: "p1_db_step", reason: "grid must be strictly increasing" });
        }
        Ok(())
    }
}

fn number(key: &'static str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>().ok().filter(|x| !x.is_nan()).ok_or_else(|| ConfigError::Malformed { key, value: v.to_string() })
}

/// Parses the `key = value` scenario format. `#` starts a comment.
pub fn parse_config(text: &str) -> Result<ScenarioSpec, ConfigError> {
    let mut kv: HashMap<&'static str, &str> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let (k, v) = (k.trim(), v.trim());
        if v.is_empty() {
            return Err(ConfigError::Syntax { line: i + 1 });
        }
        let key = *KEYS.iter().find(|&&x| x == k).ok_or_else(|| ConfigError::UnknownKey(k.to_string()))?;
        if kv.insert(key, v).is_some() {
            return Err(ConfigError::Duplicate(k.to_string()));
        }
    }
    let get = |key: &'static str| kv.get(key).copied().ok_or(ConfigError::Missing(key));

    let relay = match get("relay_power_db")? {
        "inf" => RelaySetting::Infinite,
        v => RelaySetting::Finite { db: number("relay_power_db", v)? },
    };

    let jammer = match get("jammer_mode")? {
        "proportional" => {
            if kv.contains_key("jammer_power_db") {
                return Err(ConfigError::Inconsistent { key: "jammer_power_db", other: "jammer_mode = proportional" });
            }
            JammerPolicy::Proportional { ratio: number("jammer_ratio", get("jammer_ratio")?)? }
        }
        "fixed" => {
            if kv.contains_key("jammer_ratio") {
                return Err(ConfigError::Inconsistent { key: "jammer_ratio", other: "jammer_mode = fixed" });
            }
            JammerPolicy::Fixed { db: number("jammer_power_db", get("jammer_power_db")?)? }
        }
        v => return Err(ConfigError::Malformed { key: "jammer_mode", value: v.to_string() }),
    };

    let alpha = match get("alpha")? {
        "opt" => AlphaSetting::Optimize,
        v => AlphaSetting::Fixed(number("alpha", v)?),
    };

    let power_control = match kv.get("power_control").copied() {
        None | Some("off") => false,
        Some("on") => true,
        Some(v) => return Err(ConfigError::Malformed { key: "power_control", value: v.to_string() }),
    };

    let grid_key = |key: &'static str, default: f64| kv.get(key).map_or(Ok(default), |v| number(key, v));
    let (d0, d1, ds) = DEFAULT_GRID;
    let grid = db_grid(grid_key("p1_db_start", d0)?, grid_key("p1_db_stop", d1)?, grid_key("p1_db_step", ds)?)?;

    let spec = ScenarioSpec { relay, jammer, alpha, power_control, grid };
    spec.validate()?;
    Ok(spec)
}

impl fmt::Display for ScenarioSpec {
    /// Writes the spec back in the file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.relay {
            RelaySetting::Infinite => writeln!(f, "relay_power_db = inf")?,
            RelaySetting::Finite { db } => writeln!(f, "relay_power_db = {db}")?,
        }
        match self.jammer {
            JammerPolicy::Proportional { ratio } => {
                writeln!(f, "jammer_mode = proportional")?;
                writeln!(f, "jammer_ratio = {ratio}")?;
            }
            JammerPolicy::Fixed { db } => {
                writeln!(f, "jammer_mode = fixed")?;
                writeln!(f, "jammer_power_db = {db}")?;
            }
        }
        match self.alpha {
            AlphaSetting::Optimize => writeln!(f, "alpha = opt")?,
            AlphaSetting::Fixed(a) => writeln!(f, "alpha = {a}")?,
        }
        writeln!(f, "power_control = {}", if self.power_control { "on" } else { "off" })?;
        let first = self.grid[0];
        let last = self.grid[self.grid.len() - 1];
        let step = if self.grid.len() > 1 { self.grid[1] - first } else { 1.0 };
        writeln!(f, "p1_db_start = {first}")?;
        writeln!(f, "p1_db_stop = {last}")?;
        write!(f, "p1_db_step = {step}")
    }
}

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    build: fn() -> ScenarioSpec,
}

impl Preset {
    pub fn spec(&self) -> ScenarioSpec {
        (self.build)()
    }
}

fn default_grid() -> Vec<f64> {
    let (a, b, s) = DEFAULT_GRID;
    db_grid(a, b, s).expect("default grid is valid")
}

/// The six published scenarios. Sweep axis is the default 0..60 dB grid.
pub const PRESETS: [Preset; 6] = [
    Preset {
        name: "fig6",
        summary: "relay power inf, jammer 0.5 x source, alpha optimized",
        build: || ScenarioSpec {
            relay: RelaySetting::Infinite,
            jammer: JammerPolicy::Proportional { ratio: 0.5 },
            alpha: AlphaSetting::Optimize,
            power_control: false,
            grid: default_grid(),
        },
    },
    Preset {
        name: "fig7",
        summary: "relay power inf, jammer fixed 30 dB, alpha optimized",
        build: || ScenarioSpec {
            relay: RelaySetting::Infinite,
            jammer: JammerPolicy::Fixed { db: 30.0 },
            alpha: AlphaSetting::Optimize,
            power_control: false,
            grid: default_grid(),
        },
    },
    Preset {
        name: "fig8",
        summary: "relay power 30 dB, jammer 0.5 x source, alpha 0.5",
        build: || ScenarioSpec {
            relay: RelaySetting::Finite { db: 30.0 },
            jammer: JammerPolicy::Proportional { ratio: 0.5 },
            alpha: AlphaSetting::Fixed(0.5),
            power_control: false,
            grid: default_grid(),
        },
    },
    Preset {
        name: "fig9",
        summary: "relay power 30 dB, jammer fixed 40 dB, alpha 0.5",
        build: || ScenarioSpec {
            relay: RelaySetting::Finite { db: 30.0 },
            jammer: JammerPolicy::Fixed { db: 40.0 },
            alpha: AlphaSetting::Fixed(0.5),
            power_control: false,
            grid: default_grid(),
        },
    },
    Preset {
        name: "fig10",
        summary: "relay power 40 dB, jammer 0.25 x source, alpha optimized",
        build: || ScenarioSpec {
            relay: RelaySetting::Finite { db: 40.0 },
            jammer: JammerPolicy::Proportional { ratio: 0.25 },
            alpha: AlphaSetting::Optimize,
            power_control: false,
            grid: default_grid(),
        },
    },
    Preset {
        name: "fig11",
        summary: "relay power 40 dB, jammer fixed 30 dB, alpha optimized, power control",
        build: || ScenarioSpec {
            relay: RelaySetting::Finite { db: 40.0 },
            jammer: JammerPolicy::Fixed { db: 30.0 },
            alpha: AlphaSetting::Optimize,
            power_control: true,
            grid: default_grid(),
        },
    },
];

pub fn preset(name: &str) -> Result<ScenarioSpec, ConfigError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .map(Preset::spec)
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG9: &str = "\
# fixed jammer, limited relay
relay_power_db = 30
jammer_mode = fixed
jammer_power_db = 40   # dB
alpha = 0.5
power_control = off
";

    #[test]
    fn parses_full_file() {
        let spec = parse_config(FIG9).unwrap();
        assert_eq!(spec, preset("fig9").unwrap());
    }

    #[test]
    fn display_round_trips() {
        for p in &PRESETS {
            let spec = p.spec();
            assert_eq!(parse_config(&spec.to_string()).unwrap(), spec, "{}", p.name);
        }
    }

    #[test]
    fn default_grid_is_0_to_60() {
        let g = parse_config(FIG9).unwrap().grid;
        assert_eq!(g.len(), 61);
        assert_eq!((g[0], g[60]), (0.0, 60.0));
    }

    #[test]
    fn custom_grid() {
        let text = format!("{FIG9}p1_db_start = 0\np1_db_stop = 50\np1_db_step = 5\n");
        let g = parse_config(&text).unwrap().grid;
        assert_eq!(g, (0..=10).map(|i| 5.0 * i as f64).collect::<Vec<_>>());
        let text = format!("{FIG9}p1_db_start = 0\np1_db_stop = 1\np1_db_step = 0.1\n");
        assert_eq!(parse_config(&text).unwrap().grid.len(), 11);
    }

    #[test]
    fn infinite_relay_and_silent_jammer() {
        let spec =
            parse_config("relay_power_db = inf\njammer_mode = fixed\njammer_power_db = -inf\nalpha = opt").unwrap();
        assert_eq!(spec.relay, RelaySetting::Infinite);
        assert_eq!(spec.jammer, JammerPolicy::Fixed { db: f64::NEG_INFINITY });
        assert_eq!(spec.alpha, AlphaSetting::Optimize);
        assert!(!spec.power_control);
    }

    #[test]
    fn alpha_out_of_range_names_key() {
        let err = parse_config(&FIG9.replace("alpha = 0.5", "alpha = 1.5")).unwrap_err();
        assert!(matches!(err, ConfigError::OutOfRange { key: "alpha", .. }));
        assert!(err.to_string().contains("alpha"));
    }

    #[test]
    fn fixed_jammer_needs_power() {
        let err = parse_config("relay_power_db = 30\njammer_mode = fixed\nalpha = opt").unwrap_err();
        assert_eq!(err, ConfigError::Missing("jammer_power_db"));
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            (format!("{FIG9}colour = blue"), "colour"),
            (FIG9.replace("= 40", "= forty"), "jammer_power_db"),
            (format!("{FIG9}jammer_ratio = 0.5"), "jammer_ratio"),
            (format!("{FIG9}alpha = 0.3"), "alpha"),
            (FIG9.replace("off", "maybe"), "power_control"),
            (FIG9.replace("relay_power_db = 30\n", ""), "relay_power_db"),
            (format!("{FIG9}p1_db_step = 0"), "p1_db_step"),
            (format!("{FIG9}p1_db_stop = -5"), "p1_db_stop"),
            ("relay_power_db = 30\njammer_mode = proportional\njammer_ratio = 0\nalpha = opt".into(), "jammer_ratio"),
            (
                "relay_power_db = 30\njammer_mode = proportional\njammer_ratio = 1\njammer_power_db = 3\nalpha = opt"
                    .into(),
                "jammer_power_db",
            ),
        ];
        for (text, key) in cases {
            let err = parse_config(&text).unwrap_err();
            assert!(err.to_string().contains(key), "{err} lacks {key}");
        }
        assert_eq!(parse_config("just words").unwrap_err(), ConfigError::Syntax { line: 1 });
    }

    #[test]
    fn presets_match_published_table() {
        use AlphaSetting::Optimize;
        use JammerPolicy::Proportional;
        use RelaySetting::{Finite, Infinite};
        let expected = [
            ("fig6", Infinite, Proportional { ratio: 0.5 }, Optimize),
            ("fig7", Infinite, JammerPolicy::Fixed { db: 30.0 }, Optimize),
            ("fig8", Finite { db: 30.0 }, Proportional { ratio: 0.5 }, AlphaSetting::Fixed(0.5)),
            ("fig9", Finite { db: 30.0 }, JammerPolicy::Fixed { db: 40.0 }, AlphaSetting::Fixed(0.5)),
            ("fig10", Finite { db: 40.0 }, Proportional { ratio: 0.25 }, Optimize),
            ("fig11", Finite { db: 40.0 }, JammerPolicy::Fixed { db: 30.0 }, Optimize),
        ];
        assert_eq!(PRESETS.len(), expected.len());
        for (p, (name, relay, jammer, alpha)) in PRESETS.iter().zip(expected) {
            let s = p.spec();
            assert_eq!(p.name, name);
            assert_eq!((s.relay, s.jammer, s.alpha), (relay, jammer, alpha), "{name}");
            assert_eq!(s.power_control, name == "fig11");
            s.validate().unwrap();
        }
        assert!(preset("fig12").is_err());
    }
}
