//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comments and blank lines are ignored
//! sieve.limit = 1000000
//! spec.base = liouville          # liouville | constant | power_decay
//! spec.c = 1                     # constant value, or power_decay scale
//! spec.a = 0.5                   # power_decay exponent
//! spec.exception.2 = 0.5
//! series.s_grid = 1.5:0, 2:0, 2.5:0, 3:1
//! series.truncation_N = 100000
//! series.euler_P = 100000
//! series.zeta_tol = 1e-12
//! series.h_grid = 0.2, 0.1, 0.05, 0.02
//! checkpoint.x0 = 1
//! checkpoint.ratio = 1.189207115002721
//! tolerance.H_eq_zetaF = 1e-6
//! diagnostic.sigma = 0.75
//! exponent.epsilon = 0.05
//! output.dir = out
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use pretentious_core::{
    BaseRule, ComplexArgument, FactorSieve, Identity, PrimeFunctionSpec, Schedule,
};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sieve_limit: u64,
    pub spec: PrimeFunctionSpec,
    pub s_grid: Vec<ComplexArgument>,
    pub truncation_n: u64,
    pub euler_p: u64,
    pub zeta_tol: f64,
    pub h_grid: Vec<f64>,
    pub checkpoint_x0: f64,
    pub checkpoint_ratio: f64,
    pub tolerances: BTreeMap<Identity, f64>,
    pub diagnostic_sigma: f64,
    pub epsilon_slack: f64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let s = |sigma, t| ComplexArgument { sigma, t };
        Self {
            sieve_limit: 1_000_000,
            spec: PrimeFunctionSpec::liouville(),
            s_grid: vec![s(1.5, 0.0), s(2.0, 0.0), s(2.5, 0.0), s(3.0, 1.0)],
            truncation_n: 100_000,
            euler_p: 100_000,
            zeta_tol: 1e-12,
            h_grid: vec![0.2, 0.1, 0.05, 0.02],
            checkpoint_x0: 1.0,
            checkpoint_ratio: 2f64.powf(0.25),
            tolerances: BTreeMap::new(),
            diagnostic_sigma: 0.75,
            epsilon_slack: 0.05,
            output_dir: PathBuf::from("out"),
        }
    }
}

fn cfg_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| cfg_err(format!("{key}: cannot parse '{v}'")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse_num(key, x))
        .collect()
}

fn parse_grid(key: &str, v: &str) -> Result<Vec<ComplexArgument>> {
    v.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|pt| {
            let (sigma, t) = pt.split_once(':').unwrap_or((pt, "0"));
            let sigma: f64 = parse_num(key, sigma.trim())?;
            let t: f64 = parse_num(key, t.trim())?;
            ComplexArgument::new(sigma, t).map_err(|e| cfg_err(format!("{key}: {e}")))
        })
        .collect()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines on top of the defaults. Unknown and
    /// repeated keys are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        let mut base: Option<String> = None;
        let (mut c, mut a): (Option<f64>, Option<f64>) = (None, None);
        let mut exceptions = BTreeMap::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| cfg_err(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(cfg_err(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
            match key {
                "sieve.limit" => cfg.sieve_limit = parse_num(key, value)?,
                "spec.base" => base = Some(value.to_string()),
                "spec.c" => c = Some(parse_num(key, value)?),
                "spec.a" => a = Some(parse_num(key, value)?),
                "series.s_grid" => cfg.s_grid = parse_grid(key, value)?,
                "series.truncation_N" => cfg.truncation_n = parse_num(key, value)?,
                "series.euler_P" => cfg.euler_p = parse_num(key, value)?,
                "series.zeta_tol" => cfg.zeta_tol = parse_num(key, value)?,
                "series.h_grid" => cfg.h_grid = parse_list(key, value)?,
                "checkpoint.x0" => cfg.checkpoint_x0 = parse_num(key, value)?,
                "checkpoint.ratio" => cfg.checkpoint_ratio = parse_num(key, value)?,
                "diagnostic.sigma" => cfg.diagnostic_sigma = parse_num(key, value)?,
                "exponent.epsilon" => cfg.epsilon_slack = parse_num(key, value)?,
                "output.dir" => cfg.output_dir = PathBuf::from(value),
                _ => {
                    if let Some(p) = key.strip_prefix("spec.exception.") {
                        exceptions.insert(parse_num::<u64>(key, p)?, parse_num::<f64>(key, value)?);
                    } else if let Some(id) = key.strip_prefix("tolerance.") {
                        let id: Identity =
                            id.parse().map_err(|e| cfg_err(format!("{key}: {e}")))?;
                        cfg.tolerances.insert(id, parse_num(key, value)?);
                    } else {
                        return Err(cfg_err(format!("line {}: unknown key '{key}'", lineno + 1)));
                    }
                }
            }
        }

        let need =
            |v: Option<f64>, k: &str| v.ok_or_else(|| cfg_err(format!("spec.base requires {k}")));
        let rule = match base.as_deref().unwrap_or("liouville") {
            "liouville" => BaseRule::Liouville,
            "constant" => BaseRule::Constant(need(c, "spec.c")?),
            "power_decay" => BaseRule::PowerDecay {
                c: need(c, "spec.c")?,
                a: need(a, "spec.a")?,
            },
            other => return Err(cfg_err(format!("unknown spec.base '{other}'"))),
        };
        cfg.spec = PrimeFunctionSpec::new(rule, exceptions).map_err(|e| cfg_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Field-level invariants.
    pub fn validate(&self) -> Result<()> {
        if self.sieve_limit < 2 || self.sieve_limit > pretentious_core::sieve::MAX_LIMIT {
            return Err(cfg_err(format!(
                "sieve.limit = {} is out of range",
                self.sieve_limit
            )));
        }
        if self.truncation_n == 0 || self.truncation_n > self.sieve_limit {
            return Err(cfg_err("series.truncation_N must be in 1..=sieve.limit"));
        }
        if self.euler_p > self.sieve_limit {
            return Err(cfg_err("series.euler_P must not exceed sieve.limit"));
        }
        if !(self.zeta_tol > 0.0) {
            return Err(cfg_err("series.zeta_tol must be positive"));
        }
        if let Some((id, tol)) = self.tolerances.iter().find(|(_, &t)| !(t > 0.0)) {
            return Err(cfg_err(format!("tolerance.{id} = {tol} must be positive")));
        }
        if let Some(&p) = self
            .spec
            .exceptions()
            .keys()
            .find(|&&p| p > self.sieve_limit)
        {
            return Err(cfg_err(format!(
                "spec.exception.{p} lies beyond sieve.limit"
            )));
        }
        if !(self.diagnostic_sigma > 0.0) {
            return Err(cfg_err("diagnostic.sigma must be positive"));
        }
        if !(self.epsilon_slack >= 0.0) {
            return Err(cfg_err("exponent.epsilon must be nonnegative"));
        }
        if self.h_grid.iter().any(|&h| !(h > 0.0)) {
            return Err(cfg_err("series.h_grid entries must be positive"));
        }
        self.schedule()
            .checkpoints(self.sieve_limit)
            .map_err(|e| cfg_err(e.to_string()))?;
        Ok(())
    }

    /// Extra requirements of the verification suite.
    pub fn validate_for_verify(&self) -> Result<()> {
        if self.s_grid.is_empty() {
            return Err(cfg_err("series.s_grid is empty"));
        }
        for s in &self.s_grid {
            if !(s.sigma > 0.5) {
                return Err(cfg_err(format!(
                    "grid point {s}: identities need Re(s) > 1/2"
                )));
            }
            if s.sigma == 1.0 && s.t == 0.0 {
                return Err(cfg_err("grid point s = 1 is the pole of zeta"));
            }
            if s.sigma <= 1.0 {
                if let Some(id) = Identity::ALL
                    .iter()
                    .find(|id| !self.tolerances.contains_key(id))
                {
                    return Err(cfg_err(format!(
                        "grid point {s} has heuristic tails; tolerance.{id} is required"
                    )));
                }
            }
        }
        if self.h_grid.len() < 2 {
            return Err(cfg_err("series.h_grid needs at least two offsets"));
        }
        Ok(())
    }

    pub fn schedule(&self) -> Schedule {
        Schedule::geometric(self.checkpoint_x0, self.checkpoint_ratio)
    }

    /// Validates exception keys against an already built sieve.
    pub fn check_against(&self, sieve: &FactorSieve) -> Result<()> {
        self.spec
            .validate_against(sieve)
            .map_err(|e| cfg_err(e.to_string()))
    }

    /// Canonical `key = value` text: every field, fixed order, floats in
    /// round-trip form.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("sieve.limit", self.sieve_limit.to_string());
        match self.spec.base() {
            BaseRule::Liouville => put("spec.base", "liouville".into()),
            BaseRule::Constant(c) => {
                put("spec.base", "constant".into());
                put("spec.c", format!("{c:?}"));
            }
            BaseRule::PowerDecay { c, a } => {
                put("spec.base", "power_decay".into());
                put("spec.c", format!("{c:?}"));
                put("spec.a", format!("{a:?}"));
            }
        }
        for (p, v) in self.spec.exceptions() {
            put(&format!("spec.exception.{p}"), format!("{v:?}"));
        }
        let grid: Vec<String> = self
            .s_grid
            .iter()
            .map(|s| format!("{:?}:{:?}", s.sigma, s.t))
            .collect();
        put("series.s_grid", grid.join(", "));
        put("series.truncation_N", self.truncation_n.to_string());
        put("series.euler_P", self.euler_p.to_string());
        put("series.zeta_tol", format!("{:?}", self.zeta_tol));
        let hs: Vec<String> = self.h_grid.iter().map(|h| format!("{h:?}")).collect();
        put("series.h_grid", hs.join(", "));
        put("checkpoint.x0", format!("{:?}", self.checkpoint_x0));
        put("checkpoint.ratio", format!("{:?}", self.checkpoint_ratio));
        for (id, tol) in &self.tolerances {
            put(&format!("tolerance.{id}"), format!("{tol:?}"));
        }
        put("diagnostic.sigma", format!("{:?}", self.diagnostic_sigma));
        put("exponent.epsilon", format!("{:?}", self.epsilon_slack));
        put("output.dir", self.output_dir.display().to_string());
        out
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn config_hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
