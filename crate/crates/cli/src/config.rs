use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer};
use sol3_core::analysis::AsymptoteSettings;
use sol3_core::ode::{InitialCondition, OdeSettings};

/// A real number that may also be written as a multiple of π, e.g. `pi/8`,
/// `-3pi/16`, `2*pi`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Real(pub f64);

impl FromStr for Real {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, String> {
        let t = text.trim().to_ascii_lowercase().replace(' ', "");
        if let Ok(v) = t.parse::<f64>() {
            return Ok(Real(v));
        }
        let bad = || format!("`{text}` is neither a number nor of the form [k]pi[/n]");
        let idx = t.find("pi").ok_or_else(bad)?;
        let (head, tail) = (&t[..idx], &t[idx + 2..]);
        let head = head.strip_suffix('*').unwrap_or(head);
        let k = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let n = match tail {
            "" => 1.0,
            t => t
                .strip_prefix('/')
                .and_then(|d| d.parse::<f64>().ok())
                .ok_or_else(bad)?,
        };
        Ok(Real(k * std::f64::consts::PI / n))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a string like \"pi/8\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
                v.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Integrate,
    Classify,
    Shoot,
    Mesh,
    Verify,
}

/// Everything one run needs; built from flags or from a sweep file entry.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub name: Option<String>,
    pub command: Command,
    pub system: Option<String>,
    pub curve: Option<String>,
    pub x0: Real,
    pub y0: Real,
    pub theta0: Real,
    #[serde(rename = "H")]
    pub h: Option<Real>,
    pub r: Real,
    pub max_s: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub no_snap: bool,
    pub tail_fraction: Option<f64>,
    pub settle_tol: Option<f64>,
    pub bracket: Option<String>,
    pub grid: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            name: None,
            command: Command::Integrate,
            system: None,
            curve: None,
            x0: Real(0.0),
            y0: Real(0.0),
            theta0: Real(0.0),
            h: None,
            r: Real(1.0),
            max_s: None,
            abs_tol: None,
            rel_tol: None,
            max_step: None,
            no_snap: false,
            tail_fraction: None,
            settle_tol: None,
            bracket: None,
            grid: None,
            samples: 100,
            seed: 42,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn ic(&self) -> InitialCondition {
        InitialCondition::new(self.x0.0, self.y0.0, self.theta0.0)
    }

    pub fn h(&self) -> Option<f64> {
        self.h.map(|r| r.0)
    }

    pub fn settings(&self) -> OdeSettings {
        let d = OdeSettings::default();
        OdeSettings {
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_step: self.max_step.unwrap_or(d.max_step),
            max_s: self.max_s.unwrap_or(d.max_s),
            event_tol: d.event_tol,
            snap_degenerate: !self.no_snap,
        }
    }

    pub fn asymptote_settings(&self) -> AsymptoteSettings {
        let d = AsymptoteSettings::default();
        AsymptoteSettings {
            tail_fraction: self.tail_fraction.unwrap_or(d.tail_fraction),
            settle_tol: self.settle_tol.unwrap_or(d.settle_tol),
            ..d
        }
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.out
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| format!("{:?}", self.command).to_lowercase())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn real_parsing() {
        let p = |s: &str| s.parse::<Real>().unwrap().0;
        assert_eq!(p("0.25"), 0.25);
        assert_eq!(p("-1e-3"), -1e-3);
        assert_eq!(p("pi"), PI);
        assert_eq!(p("pi/8"), PI / 8.0);
        assert_eq!(p("-pi/4"), -PI / 4.0);
        assert_eq!(p("3pi/16"), 3.0 * PI / 16.0);
        assert_eq!(p("3*pi/16"), 3.0 * PI / 16.0);
        assert!("pie".parse::<Real>().is_err());
        assert!("2pi/x".parse::<Real>().is_err());
    }

    #[test]
    fn run_config_from_toml() {
        let c: RunConfig =
            toml::from_str("command = \"classify\"\nx0 = 1\ny0 = 2.0\ntheta0 = \"pi/3\"\nmax_s = 30.0\n").unwrap();
        assert_eq!(c.command, Command::Classify);
        assert_eq!(c.ic(), InitialCondition::new(1.0, 2.0, PI / 3.0));
        assert_eq!(c.settings().max_s, 30.0);
        assert!(toml::from_str::<RunConfig>("command = \"mesh\"\nthet0 = 1.0\n").is_err());
    }
}
