//! Experiment configuration files.

use std::path::Path;

use charsums::arith::is_prime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CONFIG_VERSION: u32 = 1;
/// Largest enumeration any config may request.
pub const MAX_CAP: u64 = 1 << 26;
pub const DEFAULT_CAP: u64 = 1 << 24;

/// Which sum and which bound a config exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    WeilAdd,
    WeilMult,
    TransAdd,
    TransMult,
    HomAdd,
    HomMult,
}

impl Family {
    pub fn is_multiplicative(self) -> bool {
        matches!(self, Family::WeilMult | Family::TransMult | Family::HomMult)
    }
}

/// Constraints on randomly generated polynomials.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constraints {
    /// `a_{d-1} = 0`.
    pub a_prev_zero: bool,
    pub squarefree: bool,
    /// Every root lies in `k`.
    pub splits: bool,
    pub odd: bool,
    /// `g(0) != 0`.
    pub nonzero_constant: bool,
    pub monic: bool,
    /// Roots sum to zero; implies `a_{d-1} = 0`.
    pub roots_sum_zero: bool,
    /// `k` holds all `2(d-1)`-th roots of `-d a_d`.
    pub sl_roots: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PolySource {
    /// Coefficients from the constant term up, as accepted by `Poly::parse`.
    Explicit(String),
    Random(Constraints),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub kind: Family,
    pub p: u64,
    #[serde(default = "one")]
    pub s: u32,
    /// Inclusive range of extension degrees.
    pub r: [u32; 2],
    /// Inclusive degree range; ignored for explicit polynomials.
    #[serde(default)]
    pub d: Option<[usize; 2]>,
    /// Enumeration index of `b` in `psi_b`.
    #[serde(default = "one_u64")]
    pub psi_b: u64,
    #[serde(default)]
    pub chi_order: Option<u64>,
    /// Index of the homothety subgroup.
    #[serde(default)]
    pub e: Option<u64>,
    pub poly: PolySource,
    #[serde(default = "one_usize")]
    pub trials: usize,
    #[serde(default = "default_cap")]
    pub cap: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub workers: usize,
}

fn one() -> u32 {
    1
}

fn one_u64() -> u64 {
    1
}

fn one_usize() -> usize {
    1
}

fn default_cap() -> u64 {
    DEFAULT_CAP
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(vec![format!("parse: {e}")]))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn q(&self) -> u64 {
        self.p.saturating_pow(self.s)
    }

    /// Elements enumerated for one row at extension degree `r`.
    pub fn work(&self, r: u32) -> u128 {
        let qr = (self.q() as u128).saturating_pow(r);
        match self.kind {
            Family::HomAdd | Family::HomMult => qr * self.q() as u128,
            _ => qr,
        }
    }

    /// Checks every field and reports all problems at once.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.version != CONFIG_VERSION {
            errs.push(format!("version: expected {CONFIG_VERSION}, got {}", self.version));
        }
        if !is_prime(self.p) {
            errs.push(format!("p: {} is not prime", self.p));
        }
        if self.s == 0 || (self.p as u128).checked_pow(self.s).is_none_or(|q| q >= 1 << 32) {
            errs.push(format!("s: {} out of range for p = {}", self.s, self.p));
        }
        let [r0, r1] = self.r;
        if r0 == 0 || r0 > r1 {
            errs.push(format!("r: bad range [{r0}, {r1}]"));
        }
        if self.cap > MAX_CAP {
            errs.push(format!("cap: {} exceeds {MAX_CAP}", self.cap));
        }
        if errs.is_empty() && self.work(r1) > self.cap as u128 {
            errs.push(format!(
                "cap: r = {r1} needs {} elements, cap is {}",
                self.work(r1),
                self.cap
            ));
        }
        let q = self.q();
        if self.kind.is_multiplicative() {
            match self.chi_order {
                None => errs.push("chi_order: required for multiplicative kinds".into()),
                Some(m) if m < 2 || q < 2 || !(q - 1).is_multiple_of(m) => errs.push(format!(
                    "chi_order: {m} must be > 1 and divide q-1 = {}",
                    q.saturating_sub(1)
                )),
                _ => {}
            }
        }
        if matches!(self.kind, Family::HomAdd | Family::HomMult) {
            match self.e {
                None => errs.push("e: required for homothety kinds".into()),
                Some(e) if e == 0 || q < 2 || !(q - 1).is_multiple_of(e) => {
                    errs.push(format!("e: {e} must divide q-1 = {}", q.saturating_sub(1)))
                }
                _ => {}
            }
        }
        if self.psi_b == 0 || self.psi_b >= q {
            errs.push(format!("psi_b: index {} must lie in [1, q)", self.psi_b));
        }
        match &self.poly {
            PolySource::Random(_) => {
                if self.seed.is_none() {
                    errs.push("seed: required for random polynomials".into());
                }
                match self.d {
                    None => errs.push("d: required for random polynomials".into()),
                    Some([d0, d1]) if d0 == 0 || d0 > d1 => errs.push(format!("d: bad range [{d0}, {d1}]")),
                    _ => {}
                }
                if self.trials == 0 {
                    errs.push("trials: must be positive".into());
                }
            }
            PolySource::Explicit(text) => {
                if text.trim().is_empty() {
                    errs.push("poly: empty coefficient list".into());
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::ConfigInvalid(errs))
        }
    }
}
