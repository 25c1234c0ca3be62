//! Append-only store of simulated constants.
//!
//! One record per line, space-separated, in the fixed field order
//! `key kind H window a b value std_error M tau eta n seed created_at version`.
//! Floats use the shortest decimal that round-trips; an absent drift is
//! written `- -` and an absent η `-`.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::asymptotics::{ConstantProvider, ResolvedConstant};
use crate::error::{Error, Result};
use crate::estimate::{Estimate, SimConfig};
use crate::pickands::{default_config_pickands, simulate_pickands, PickandsQuery};
use crate::piterbarg::{default_config_piterbarg, simulate_piterbarg, DriftSpec};

/// Environment variable naming the default store file.
pub const REGISTRY_ENV: &str = "PARISIAN_REGISTRY";

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

const FIELDS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantKind {
    Piterbarg,
    Pickands,
}

impl ConstantKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstantKind::Piterbarg => "piterbarg",
            ConstantKind::Pickands => "pickands",
        }
    }
}

/// Which constant: 𝓕_{2H}(window) or the Piterbarg 𝓕_window^h with drift
/// slopes `(a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantDescriptor {
    pub kind: ConstantKind,
    pub h: f64,
    pub window: f64,
    pub drift: Option<(f64, f64)>,
}

impl ConstantDescriptor {
    pub fn pickands(h: f64, window: f64) -> Self {
        ConstantDescriptor { kind: ConstantKind::Pickands, h, window, drift: None }
    }

    pub fn piterbarg(window: f64, a: f64, b: f64) -> Self {
        ConstantDescriptor { kind: ConstantKind::Piterbarg, h: 0.5, window, drift: Some((a, b)) }
    }

    /// Equality up to a relative 1e-12 in every number.
    pub fn matches(&self, other: &ConstantDescriptor) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
        self.kind == other.kind
            && close(self.h, other.h)
            && close(self.window, other.window)
            && match (self.drift, other.drift) {
                (None, None) => true,
                (Some((a1, b1)), Some((a2, b2))) => close(a1, a2) && close(b1, b2),
                _ => false,
            }
    }

    /// The simulation settings `resolve` uses when it has to simulate.
    pub fn default_config(&self, seed: u64) -> Result<SimConfig> {
        Ok(match self.kind {
            ConstantKind::Pickands => default_config_pickands(self.window, seed),
            ConstantKind::Piterbarg => default_config_piterbarg(&self.drift_spec()?, self.window, seed),
        })
    }

    fn drift_spec(&self) -> Result<DriftSpec> {
        let (a, b) = self
            .drift
            .ok_or_else(|| Error::invalid("Piterbarg constant needs a drift"))?;
        DriftSpec::new(a, b)
    }

    /// Runs the matching estimator.
    pub fn simulate(&self, cfg: &SimConfig) -> Result<Estimate> {
        match self.kind {
            ConstantKind::Pickands => simulate_pickands(&PickandsQuery::new(self.h, self.window)?, cfg),
            ConstantKind::Piterbarg => simulate_piterbarg(&self.drift_spec()?, self.window, cfg),
        }
    }

    /// Configuration as it is keyed: Pickands records always carry η,
    /// Piterbarg records never do.
    fn canonical_config(&self, cfg: &SimConfig) -> SimConfig {
        let eta = match self.kind {
            ConstantKind::Pickands => Some(cfg.eta.unwrap_or(cfg.tau)),
            ConstantKind::Piterbarg => None,
        };
        SimConfig { eta, ..*cfg }
    }
}

impl fmt::Display for ConstantDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.drift {
            None => write!(f, "{} H={} window={}", self.kind.name(), self.h, self.window),
            Some((a, b)) => write!(f, "{} H={} window={} a={a} b={b}", self.kind.name(), self.h, self.window),
        }
    }
}

/// 16 hex digits of SHA-256 over the canonical descriptor and configuration.
pub fn record_key(descriptor: &ConstantDescriptor, cfg: &SimConfig) -> String {
    let cfg = descriptor.canonical_config(cfg);
    let (a, b) = drift_fields(descriptor);
    let canonical = format!(
        "{} {} {} {a} {b} {} {} {} {} {}",
        descriptor.kind.name(),
        descriptor.h,
        descriptor.window,
        cfg.m,
        cfg.tau,
        eta_field(&cfg),
        cfg.n,
        cfg.seed
    );
    let digest = Sha256::digest(canonical.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn drift_fields(d: &ConstantDescriptor) -> (String, String) {
    match d.drift {
        Some((a, b)) => (a.to_string(), b.to_string()),
        None => ("-".into(), "-".into()),
    }
}

fn eta_field(cfg: &SimConfig) -> String {
    cfg.eta.map_or_else(|| "-".into(), |e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub key: String,
    pub descriptor: ConstantDescriptor,
    pub value: f64,
    pub std_error: f64,
    pub config: SimConfig,
    pub created_at: String,
    pub version: String,
}

impl ConstantRecord {
    pub fn from_estimate(descriptor: ConstantDescriptor, e: &Estimate) -> Result<Self> {
        if !(e.value > 0.0) {
            return Err(Error::invalid(format!("constant {descriptor} must be positive, got {}", e.value)));
        }
        let config = descriptor.canonical_config(&e.config);
        Ok(ConstantRecord {
            key: record_key(&descriptor, &config),
            descriptor,
            value: e.value,
            std_error: e.std_error,
            config,
            created_at: chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string(),
            version: TOOL_VERSION.to_string(),
        })
    }

    pub fn to_line(&self) -> String {
        let (a, b) = drift_fields(&self.descriptor);
        format!(
            "{} {} {} {} {a} {b} {} {} {} {} {} {} {} {} {}",
            self.key,
            self.descriptor.kind.name(),
            self.descriptor.h,
            self.descriptor.window,
            self.value,
            self.std_error,
            self.config.m,
            self.config.tau,
            eta_field(&self.config),
            self.config.n,
            self.config.seed,
            self.created_at,
            self.version
        )
    }

    pub fn parse_line(line: &str) -> std::result::Result<Self, String> {
        let f: Vec<&str> = line.split(' ').collect();
        if f.len() != FIELDS {
            return Err(format!("expected {FIELDS} fields, found {}", f.len()));
        }
        let num = |i: usize| f[i].parse::<f64>().map_err(|e| format!("field {}: {e}", i + 1));
        let int = |i: usize| f[i].parse::<u64>().map_err(|e| format!("field {}: {e}", i + 1));
        let kind = match f[1] {
            "piterbarg" => ConstantKind::Piterbarg,
            "pickands" => ConstantKind::Pickands,
            other => return Err(format!("unknown kind {other:?}")),
        };
        let drift = match (f[4], f[5]) {
            ("-", "-") => None,
            _ => Some((num(4)?, num(5)?)),
        };
        let eta = if f[10] == "-" { None } else { Some(num(10)?) };
        let rec = ConstantRecord {
            key: f[0].to_string(),
            descriptor: ConstantDescriptor { kind, h: num(2)?, window: num(3)?, drift },
            value: num(6)?,
            std_error: num(7)?,
            config: SimConfig { m: num(8)?, tau: num(9)?, eta, n: int(11)?, seed: int(12)? },
            created_at: f[13].to_string(),
            version: f[14].to_string(),
        };
        if rec.key.len() != 16 || !rec.key.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(format!("malformed key {:?}", rec.key));
        }
        Ok(rec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvePolicy {
    /// Return the cached record or simulate with the default settings and store it.
    UseOrSimulate,
    /// Never simulate.
    CacheOnly,
}

#[derive(Debug, Clone)]
pub struct Registry {
    path: PathBuf,
}

impl Registry {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        Registry { path: path.into() }
    }

    /// Store named by `PARISIAN_REGISTRY`, if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(REGISTRY_ENV).map(Registry::open)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Every well-formed record, in file order. Malformed lines, including a
    /// partially written last line, are skipped with a warning.
    pub fn load(&self) -> Result<Vec<ConstantRecord>> {
        let mut text = String::new();
        match File::open(&self.path) {
            Ok(mut f) => {
                f.read_to_string(&mut text)?;
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        }
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match ConstantRecord::parse_line(line) {
                Ok(r) => out.push(r),
                Err(reason) => {
                    let err = Error::StoreCorrupt {
                        path: self.path.display().to_string(),
                        reason: format!("line {}: {reason}", n + 1),
                    };
                    log::warn!("skipping record: {err}");
                }
            }
        }
        Ok(out)
    }

    /// Appends `record` under an exclusive advisory lock.
    pub fn put(&self, record: &ConstantRecord) -> Result<String> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let mut f = OpenOptions::new().read(true).append(true).create(true).open(&self.path)?;
        f.lock()?;
        let len = f.metadata()?.len();
        let mut line = String::new();
        if len > 0 {
            let mut last = [0u8; 1];
            f.seek(SeekFrom::Start(len - 1))?;
            f.read_exact(&mut last)?;
            if last[0] != b'\n' {
                line.push('\n');
            }
        }
        line.push_str(&record.to_line());
        line.push('\n');
        f.write_all(line.as_bytes())?;
        f.flush()?;
        f.unlock()?;
        Ok(record.key.clone())
    }

    /// Most recent record for exactly this descriptor and configuration.
    pub fn get(&self, descriptor: &ConstantDescriptor, cfg: &SimConfig) -> Result<Option<ConstantRecord>> {
        let key = record_key(descriptor, cfg);
        Ok(self.load()?.into_iter().rev().find(|r| r.key == key))
    }

    /// Record for `descriptor` at its default settings with the given seed.
    pub fn resolve(&self, descriptor: &ConstantDescriptor, policy: ResolvePolicy, seed: u64) -> Result<(ConstantRecord, bool)> {
        let cfg = descriptor.default_config(seed)?;
        self.resolve_with(descriptor, &cfg, policy)
    }

    /// Returns the record and whether it was simulated by this call.
    pub fn resolve_with(
        &self,
        descriptor: &ConstantDescriptor,
        cfg: &SimConfig,
        policy: ResolvePolicy,
    ) -> Result<(ConstantRecord, bool)> {
        if let Some(r) = self.get(descriptor, cfg)? {
            return Ok((r, false));
        }
        if policy == ResolvePolicy::CacheOnly {
            return Err(Error::MissingConstant { descriptor: descriptor.to_string() });
        }
        let record = ConstantRecord::from_estimate(descriptor.clone(), &descriptor.simulate(cfg)?)?;
        self.put(&record)?;
        Ok((record, true))
    }
}

/// Resolves constants through an optional registry, simulating on a miss
/// when the policy allows.
#[derive(Debug, Clone)]
pub struct RegistryProvider {
    pub registry: Option<Registry>,
    pub policy: ResolvePolicy,
    pub seed: u64,
    /// Overrides the default `n` and τ of simulated constants.
    pub n: Option<u64>,
    pub tau: Option<f64>,
    /// Number of constants simulated so far.
    pub simulations: usize,
}

impl RegistryProvider {
    pub fn new(registry: Option<Registry>, policy: ResolvePolicy, seed: u64) -> Self {
        RegistryProvider { registry, policy, seed, n: None, tau: None, simulations: 0 }
    }

    fn config(&self, d: &ConstantDescriptor) -> Result<SimConfig> {
        let mut cfg = d.default_config(self.seed)?;
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(tau) = self.tau {
            cfg.tau = tau;
        }
        Ok(cfg)
    }
}

impl ConstantProvider for RegistryProvider {
    fn resolve(&mut self, descriptor: &ConstantDescriptor) -> Result<ResolvedConstant> {
        let cfg = self.config(descriptor)?;
        let (record, simulated) = match &self.registry {
            Some(reg) => reg.resolve_with(descriptor, &cfg, self.policy)?,
            None if self.policy == ResolvePolicy::CacheOnly => {
                return Err(Error::MissingConstant { descriptor: descriptor.to_string() })
            }
            None => (ConstantRecord::from_estimate(descriptor.clone(), &descriptor.simulate(&cfg)?)?, true),
        };
        if simulated {
            self.simulations += 1;
        }
        let source = if simulated { "simulated" } else { "registry" };
        Ok(ResolvedConstant {
            descriptor: record.descriptor.clone(),
            value: record.value,
            std_error: record.std_error,
            source: format!("{source}:{}", record.key),
        })
    }
}
