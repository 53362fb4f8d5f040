//! Flat `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored; later assignments win, which is
//! how command-line overrides are layered on top of a config file. Numbers
//! accept multiples and fractions of `pi` (`pi/10`, `3pi`, `30*pi`).
//! [`RunConfig::to_text`] writes every field with round-trip float formatting.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::phys::{Barrier, EnergyWindow, PhysicalParams};
use crate::quadrature::QuadratureSettings;

/// The `k/k0` values of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum KGrid {
    /// `start:stop:step`, inclusive of `stop` when it lands on the lattice.
    Range { start: f64, stop: f64, step: f64 },
    List(Vec<f64>),
}

impl KGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            KGrid::List(v) => v.clone(),
            KGrid::Range { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count).map(|i| start + i as f64 * step).collect()
            }
        }
    }

    fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            [a, b, c] => {
                let (start, stop, step) = (parse_number(a)?, parse_number(b)?, parse_number(c)?);
                if !(step > 0.0) || stop < start {
                    return Err(Error::invalid(format!("k grid range needs start <= stop and step > 0, got {text}")));
                }
                Ok(KGrid::Range { start, stop, step })
            }
            [_] => Ok(KGrid::List(parse_list(text)?)),
            _ => Err(Error::invalid(format!("k grid must be start:stop:step or a comma list, got {text}"))),
        }
    }

    fn to_text(&self) -> String {
        match self {
            KGrid::Range { start, stop, step } => format!("{start:?}:{stop:?}:{step:?}"),
            KGrid::List(v) => join(v),
        }
    }
}

/// Every input of every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mass: f64,
    pub hbar: f64,
    pub v0: f64,
    pub length: f64,
    pub emax: f64,
    /// Barrier strengths `k0·L`; when set they replace `v0`.
    pub k0l: Vec<f64>,
    pub kgrid: KGrid,
    pub xrange: (f64, f64),
    pub trange: (f64, f64),
    pub nx: usize,
    pub nt: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let q = QuadratureSettings::default();
        Self {
            mass: 1.0,
            hbar: 1.0,
            v0: 100.0,
            length: 1.0,
            emax: 1.0,
            k0l: Vec::new(),
            kgrid: KGrid::Range { start: 0.05, stop: 1.5, step: 0.05 },
            xrange: (-1.0, 2.0),
            trange: (0.0, 15.0),
            nx: 30,
            nt: 30,
            rel_tol: q.rel_tol(),
            abs_tol: q.abs_tol(),
            max_subdivisions: q.max_subdivisions(),
            out: None,
        }
    }
}

pub(crate) const KEYS: [&str; 15] = [
    "mass",
    "hbar",
    "v0",
    "length",
    "emax",
    "k0l",
    "kgrid",
    "xrange",
    "trange",
    "nx",
    "nt",
    "rel_tol",
    "abs_tol",
    "max_subdivisions",
    "out",
];

impl RunConfig {
    /// Defaults overridden by the assignments in `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key = value, got {raw:?}", lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::invalid(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    /// Assign one field from its text form. Dashes in keys are read as underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.replace('-', "_");
        match key.as_str() {
            "mass" => self.mass = parse_number(value)?,
            "hbar" => self.hbar = parse_number(value)?,
            "v0" => self.v0 = parse_number(value)?,
            "length" => self.length = parse_number(value)?,
            "emax" => self.emax = parse_number(value)?,
            "k0l" => self.k0l = if value.is_empty() { Vec::new() } else { parse_list(value)? },
            "kgrid" => self.kgrid = KGrid::parse(value)?,
            "xrange" => self.xrange = parse_pair(value)?,
            "trange" => self.trange = parse_pair(value)?,
            "nx" => self.nx = parse_count(value)?,
            "nt" => self.nt = parse_count(value)?,
            "rel_tol" => self.rel_tol = parse_number(value)?,
            "abs_tol" => self.abs_tol = parse_number(value)?,
            "max_subdivisions" => self.max_subdivisions = parse_count(value)?,
            "out" => self.out = if value.is_empty() { None } else { Some(PathBuf::from(value)) },
            other => return Err(Error::invalid(format!("unknown key {other:?}; known keys: {}", KEYS.join(", ")))),
        }
        Ok(())
    }

    /// All fields, one `key = value` per line, in a fixed order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("mass", format!("{:?}", self.mass));
        put("hbar", format!("{:?}", self.hbar));
        put("v0", format!("{:?}", self.v0));
        put("length", format!("{:?}", self.length));
        put("emax", format!("{:?}", self.emax));
        put("k0l", join(&self.k0l));
        put("kgrid", self.kgrid.to_text());
        put("xrange", format!("{:?},{:?}", self.xrange.0, self.xrange.1));
        put("trange", format!("{:?},{:?}", self.trange.0, self.trange.1));
        put("nx", self.nx.to_string());
        put("nt", self.nt.to_string());
        put("rel_tol", format!("{:?}", self.rel_tol));
        put("abs_tol", format!("{:?}", self.abs_tol));
        put("max_subdivisions", self.max_subdivisions.to_string());
        put("out", self.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default());
        s
    }

    pub fn params(&self) -> Result<PhysicalParams> {
        PhysicalParams::new(self.mass, self.hbar)
    }

    pub fn quadrature(&self) -> Result<QuadratureSettings> {
        QuadratureSettings::new(self.rel_tol, self.abs_tol, self.max_subdivisions)
    }

    /// Barrier of width `length` and strength `k0·L`: `V0 = (ħ·k0L/L)²/2m`.
    pub fn barrier_for_strength(&self, k0l: f64) -> Result<Barrier> {
        if !(k0l > 0.0 && k0l.is_finite()) {
            return Err(Error::invalid(format!("k0L must be positive, got {k0l}")));
        }
        let k0 = k0l / self.length;
        Barrier::new(self.hbar * self.hbar * k0 * k0 / (2.0 * self.mass), self.length)
    }

    /// The single barrier of a non-sweep run: from `k0l` when exactly one is set, else `v0`.
    pub fn barrier(&self) -> Result<Barrier> {
        self.params()?;
        match self.k0l.as_slice() {
            [] => Barrier::new(self.v0, self.length),
            [k] => self.barrier_for_strength(*k),
            _ => Err(Error::invalid("several k0L values are only meaningful for sweep")),
        }
    }

    /// Barriers of a sweep, one per `k0L`; defaults to `{π/10, 3π, 30π}`.
    pub fn sweep_barriers(&self) -> Result<Vec<(f64, Barrier)>> {
        self.params()?;
        let strengths = if self.k0l.is_empty() { vec![PI / 10.0, 3.0 * PI, 30.0 * PI] } else { self.k0l.clone() };
        strengths.into_iter().map(|k| Ok((k, self.barrier_for_strength(k)?))).collect()
    }

    /// Packet window `[0, emax]`.
    pub fn window(&self) -> Result<EnergyWindow> {
        EnergyWindow::new(0.0, self.emax)
    }

    /// Checks shared by all subcommands, run before any computation.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.quadrature()?;
        Barrier::new(self.v0, self.length)?;
        if !self.emax.is_finite() {
            return Err(Error::invalid(format!("emax must be finite, got {}", self.emax)));
        }
        for k in &self.k0l {
            self.barrier_for_strength(*k)?;
        }
        for (name, (lo, hi)) in [("xrange", self.xrange), ("trange", self.trange)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(format!("{name} needs finite lo < hi, got {lo},{hi}")));
            }
        }
        if self.nx < 2 || self.nt < 2 {
            return Err(Error::invalid(format!("nx and nt must be >= 2, got {} and {}", self.nx, self.nt)));
        }
        let ks = self.kgrid.values();
        if ks.is_empty() || ks.iter().any(|k| !(*k > 0.0 && k.is_finite())) {
            return Err(Error::invalid("k grid values must be positive and finite"));
        }
        Ok(())
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(",")
}

/// A float, optionally as `[a][*]pi[/b]`.
pub fn parse_number(text: &str) -> Result<f64> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = || Error::invalid(format!("not a number: {text:?}"));
    let (numer, denom) = match compact.split_once('/') {
        Some((n, d)) => (n.to_string(), Some(d.parse::<f64>().map_err(|_| bad())?)),
        None => (compact.clone(), None),
    };
    let value = if let Some(prefix) = numer.strip_suffix("pi") {
        let prefix = prefix.strip_suffix('*').unwrap_or(prefix);
        let factor = match prefix {
            "" | "+" => 1.0,
            "-" => -1.0,
            p => p.parse::<f64>().map_err(|_| bad())?,
        };
        factor * PI
    } else {
        numer.parse::<f64>().map_err(|_| bad())?
    };
    let value = match denom {
        Some(d) => value / d,
        None => value,
    };
    if value.is_nan() {
        return Err(bad());
    }
    Ok(value)
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',').map(parse_number).collect()
}

fn parse_pair(text: &str) -> Result<(f64, f64)> {
    match parse_list(text)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::invalid(format!("expected lo,hi, got {text:?}"))),
    }
}

fn parse_count(text: &str) -> Result<usize> {
    text.trim().parse().map_err(|_| Error::invalid(format!("not a non-negative integer: {text:?}")))
}
