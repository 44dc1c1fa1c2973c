use std::sync::Arc;

use serde::Serialize;
use sol3_core::analysis::{classify_minimal_with, closed_curve_search, slab_width, Classification, ShootingSettings};
use sol3_core::io::{records, write_csv};
use sol3_core::mesh::{build_mesh, write_obj, GeneratingCurve, Grid};
use sol3_core::ode::{integrate, CurveParams, CurveRegistry, CurveSystem, SystemParams, SystemRegistry};
use sol3_core::verify::verify;
use sol3_core::Error;

use crate::config::{Command, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_BRACKET: u8 = 2;
pub const EXIT_CLOSURE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::Bracket { .. } => EXIT_BRACKET,
                Error::NonClosing { .. } => EXIT_CLOSURE,
                Error::Precondition(_)
                | Error::InvalidSettings(_)
                | Error::InvalidInitialCondition(_)
                | Error::UnknownStrategy { .. }
                | Error::DegenerateGrid(_)
                | Error::Parse(_)
                | Error::Domain(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// Bytes to persist plus the process exit code they go with.
#[derive(Debug)]
pub struct Output {
    pub bytes: Vec<u8>,
    pub code: u8,
}

impl Output {
    fn ok(bytes: Vec<u8>) -> Self {
        Self { bytes, code: EXIT_OK }
    }
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

fn system(cfg: &RunConfig) -> Result<Arc<dyn CurveSystem>, CliError> {
    let name = cfg
        .system
        .clone()
        .unwrap_or_else(|| if cfg.h.is_some() { "cmc" } else { "minimal" }.to_string());
    Ok(SystemRegistry::builtin().create(&name, &SystemParams { h: cfg.h() })?)
}

pub fn execute(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.command {
        Command::Integrate => cmd_integrate(cfg),
        Command::Classify => cmd_classify(cfg),
        Command::Shoot => cmd_shoot(cfg),
        Command::Mesh => cmd_mesh(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

fn cmd_integrate(cfg: &RunConfig) -> Result<Output, CliError> {
    let tr = integrate(system(cfg)?, cfg.ic(), &cfg.settings())?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &records(&tr))?;
    Ok(Output::ok(buf))
}

#[derive(Serialize)]
struct ClassifyReport {
    x0: f64,
    y0: f64,
    theta0: f64,
    max_s: f64,
    #[serde(flatten)]
    classification: Classification,
    slab_width: Option<f64>,
}

fn cmd_classify(cfg: &RunConfig) -> Result<Output, CliError> {
    let settings = cfg.settings();
    let tr = integrate(system(cfg)?, cfg.ic(), &settings)?;
    let c = classify_minimal_with(&tr, &cfg.asymptote_settings())?;
    let slab = match c.asymptotes.as_slice() {
        [a, b] => slab_width(a, b).ok(),
        _ => None,
    };
    let ic = cfg.ic();
    Ok(Output::ok(json(&ClassifyReport {
        x0: ic.x0,
        y0: ic.y0,
        theta0: ic.theta0,
        max_s: settings.max_s,
        classification: c,
        slab_width: slab,
    })))
}

#[derive(Serialize, Default)]
struct ShootReport {
    status: &'static str,
    #[serde(rename = "H")]
    h: f64,
    y0_star: Option<f64>,
    s1: Option<f64>,
    residual_x: Option<f64>,
    residual_y: Option<f64>,
    iterations: Option<usize>,
    bracket_lo: Option<f64>,
    bracket_hi: Option<f64>,
    residual_lo: Option<f64>,
    residual_hi: Option<f64>,
}

fn parse_bracket(text: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<_> = text.split(':').collect();
    let bad = || CliError::Usage(format!("bracket `{text}` must be LO:HI"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn cmd_shoot(cfg: &RunConfig) -> Result<Output, CliError> {
    let h = match cfg.h() {
        Some(h) if h != 0.0 && h.is_finite() => h,
        Some(h) => return Err(CliError::Usage(format!("shoot needs H ≠ 0, got {h}"))),
        None => return Err(CliError::Usage("shoot needs --H".into())),
    };
    let bracket = cfg.bracket.as_deref().map(parse_bracket).transpose()?;
    let report = match closed_curve_search(h, bracket, &cfg.settings(), &ShootingSettings::default()) {
        Ok(r) => ShootReport {
            status: "closed",
            h,
            y0_star: Some(r.y0_star),
            s1: Some(r.s1),
            residual_x: Some(r.residual_x),
            residual_y: Some(r.residual_y),
            iterations: Some(r.iterations),
            ..Default::default()
        },
        Err(Error::Bracket {
            lo,
            hi,
            residual_lo,
            residual_hi,
        }) => {
            return Ok(Output {
                bytes: json(&ShootReport {
                    status: "bracket_failure",
                    h,
                    bracket_lo: Some(lo),
                    bracket_hi: Some(hi),
                    residual_lo,
                    residual_hi,
                    ..Default::default()
                }),
                code: EXIT_BRACKET,
            })
        }
        Err(Error::NonClosing {
            y0_star,
            s1,
            residual_x,
            residual_y,
            iterations,
        }) => {
            return Ok(Output {
                bytes: json(&ShootReport {
                    status: "non_closing",
                    h,
                    y0_star: Some(y0_star),
                    s1: Some(s1),
                    residual_x: Some(residual_x),
                    residual_y: Some(residual_y),
                    iterations: Some(iterations),
                    ..Default::default()
                }),
                code: EXIT_CLOSURE,
            })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Output::ok(json(&report)))
}

fn cmd_mesh(cfg: &RunConfig) -> Result<Output, CliError> {
    let grid: Grid = cfg
        .grid
        .as_deref()
        .ok_or_else(|| CliError::Usage("mesh needs --grid sMIN:sMAX:tMIN:tMAX:NS:NT".into()))?
        .parse()?;
    let mesh = match &cfg.curve {
        Some(name) => {
            let params = CurveParams {
                x0: cfg.x0.0,
                y0: cfg.y0.0,
                r: cfg.r.0,
            };
            let curve = CurveRegistry::builtin().create(name, &params)?;
            build_mesh(&curve, &grid)?
        }
        None => {
            let mut settings = cfg.settings();
            if cfg.max_s.is_none() {
                settings.max_s = grid.s_min.abs().max(grid.s_max.abs()).max(settings.max_step);
            }
            let tr = integrate(system(cfg)?, cfg.ic(), &settings)?;
            build_mesh(&tr as &dyn GeneratingCurve, &grid)?
        }
    };
    let mut buf = Vec::new();
    write_obj(&mesh, &mut buf)?;
    Ok(Output::ok(buf))
}

fn cmd_verify(cfg: &RunConfig) -> Result<Output, CliError> {
    let report = verify(cfg.samples, cfg.seed);
    Ok(Output {
        code: if report.passed { EXIT_OK } else { EXIT_FAILURE },
        bytes: json(&report),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Real;

    #[test]
    fn shoot_requires_nonzero_h() {
        let cfg = RunConfig {
            command: Command::Shoot,
            h: Some(Real(0.0)),
            ..RunConfig::default()
        };
        assert_eq!(execute(&cfg).unwrap_err().code(), EXIT_USAGE);
        let cfg = RunConfig {
            command: Command::Shoot,
            ..RunConfig::default()
        };
        assert_eq!(execute(&cfg).unwrap_err().code(), EXIT_USAGE);
    }

    #[test]
    fn bracket_parsing() {
        assert_eq!(parse_bracket("0.125:0.75").unwrap(), (0.125, 0.75));
        assert!(parse_bracket("1").is_err());
        assert!(parse_bracket("a:b").is_err());
    }

    #[test]
    fn unknown_system_is_usage_error() {
        let cfg = RunConfig {
            system: Some("willmore".into()),
            ..RunConfig::default()
        };
        assert_eq!(execute(&cfg).unwrap_err().code(), EXIT_USAGE);
    }
}
