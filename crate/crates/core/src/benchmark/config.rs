use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solver::{FluidParams, SolverOptions};

/// Rising-bubble parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    /// Density ratio 10, viscosity ratio 10, strong surface tension.
    One,
    /// Density ratio 1000, viscosity ratio 100, weak surface tension.
    Two,
}

impl Case {
    pub fn params(self) -> FluidParams {
        match self {
            Case::One => FluidParams { rho: [1000.0, 100.0], mu: [10.0, 1.0], gravity: [0.0, -0.98], sigma: 24.5 },
            Case::Two => FluidParams { rho: [1000.0, 1.0], mu: [10.0, 0.1], gravity: [0.0, -0.98], sigma: 1.96 },
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Case::One => 1,
            Case::Two => 2,
        }
    }
}

impl std::str::FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Case::One),
            "2" => Ok(Case::Two),
            other => Err(Error::Config(format!("unknown case '{other}' (expected 1 or 2)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub case: Case,
    pub nx: usize,
    pub ny: usize,
    pub tend: f64,
    pub cfl: f64,
    pub sigma_cfl: f64,
    /// Diagnostics row every this many steps (the final state is always written).
    pub out_every: usize,
    pub outdir: PathBuf,
    pub rtol_mom: f64,
    pub rtol_pre: f64,
    pub degree: usize,
    pub dt_max: Option<f64>,
    /// Field snapshot every this many steps; `0` writes only the initial and final state.
    pub snapshot_every: usize,
    pub ilu_refresh: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        let s = SolverOptions::default();
        Self {
            case: Case::One,
            nx: 40,
            ny: 80,
            tend: 3.0,
            cfl: s.cfl,
            sigma_cfl: s.sigma_cfl,
            out_every: 1,
            outdir: PathBuf::from("out"),
            rtol_mom: s.rtol_momentum,
            rtol_pre: s.rtol_pressure,
            degree: 1,
            dt_max: None,
            snapshot_every: 0,
            ilu_refresh: 10,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

impl BenchmarkConfig {
    /// Parses `key = value` lines on top of the defaults. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", n + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "case" => self.case = value.parse()?,
            "nx" => self.nx = parse_num(key, value)?,
            "ny" => self.ny = parse_num(key, value)?,
            "tend" => self.tend = parse_num(key, value)?,
            "cfl" => self.cfl = parse_num(key, value)?,
            "sigma_cfl" => self.sigma_cfl = parse_num(key, value)?,
            "out_every" => self.out_every = parse_num(key, value)?,
            "outdir" => self.outdir = PathBuf::from(value),
            "rtol_mom" => self.rtol_mom = parse_num(key, value)?,
            "rtol_pre" => self.rtol_pre = parse_num(key, value)?,
            "degree" => self.degree = parse_num(key, value)?,
            "dt_max" => self.dt_max = Some(parse_num(key, value)?),
            "snapshot_every" => self.snapshot_every = parse_num(key, value)?,
            "ilu_refresh" => self.ilu_refresh = parse_num(key, value)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("tend", self.tend)?;
        positive("cfl", self.cfl)?;
        positive("sigma_cfl", self.sigma_cfl)?;
        positive("rtol_mom", self.rtol_mom)?;
        positive("rtol_pre", self.rtol_pre)?;
        if let Some(d) = self.dt_max {
            positive("dt_max", d)?;
        }
        if self.nx < 8 || self.ny < 16 {
            return Err(Error::Config(format!("resolution {}x{} is below the 8x16 minimum", self.nx, self.ny)));
        }
        if self.degree > 3 {
            return Err(Error::Config(format!("degree {} not supported (0..=3)", self.degree)));
        }
        if self.out_every == 0 || self.ilu_refresh == 0 {
            return Err(Error::Config("out_every and ilu_refresh must be at least 1".into()));
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            rtol_momentum: self.rtol_mom,
            rtol_pressure: self.rtol_pre,
            cfl: self.cfl,
            sigma_cfl: self.sigma_cfl,
            dt_max: self.dt_max,
            ilu_refresh: self.ilu_refresh,
            ..SolverOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let cfg = BenchmarkConfig::parse("# rising bubble\ncase = 2\nnx=20\nny = 40 # half\ntend = 0.5\noutdir = /tmp/x\n").unwrap();
        assert_eq!(cfg.case, Case::Two);
        assert_eq!((cfg.nx, cfg.ny), (20, 40));
        assert_eq!(cfg.tend, 0.5);
        assert_eq!(cfg.outdir, PathBuf::from("/tmp/x"));
        assert_eq!(cfg.degree, 1);
    }

    #[test]
    fn rejects_bad_input() {
        for text in ["nx = 4", "tend = 0", "tend = -1", "case = 3", "colour = red", "nx 20", "cfl = fast", "degree = 7"] {
            assert!(matches!(BenchmarkConfig::parse(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn case_parameters() {
        let p = Case::One.params();
        assert_eq!(p.rho, [1000.0, 100.0]);
        assert_eq!(p.sigma, 24.5);
        let p = Case::Two.params();
        assert_eq!(p.mu, [10.0, 0.1]);
        assert_eq!(p.gravity, [0.0, -0.98]);
    }
}
