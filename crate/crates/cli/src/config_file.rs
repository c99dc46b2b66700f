//! Flat key-value run configuration with INI-style sections.
//!
//! Keys are named exactly after the model quantities (`N_t`, `f_s`, `rho`,
//! `mu_u`, …). Value lists accept either comma lists (`0.55,0.65,0.75`) or
//! inclusive ranges (`start:step:end`). Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use swiptlink::{ConstraintSpec64, GridSpec64, SystemConfig64, TxParams64};

/// What a single invocation does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep,
    Optimize,
    Validate,
    OutageCheck,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sweep" => Ok(Mode::Sweep),
            "optimize" => Ok(Mode::Optimize),
            "validate" => Ok(Mode::Validate),
            "outage-check" => Ok(Mode::OutageCheck),
            other => bail!("unknown mode '{other}' (expected sweep|optimize|validate|outage-check)"),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Mode::Sweep => "sweep",
            Mode::Optimize => "optimize",
            Mode::Validate => "validate",
            Mode::OutageCheck => "outage-check",
        };
        f.write_str(name)
    }
}

/// A swept transmission variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxVariable {
    Rho,
    ThetaG,
    BetaU,
    BetaG,
    NU,
    NG,
    NCp,
}

impl TxVariable {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rho" => Ok(Self::Rho),
            "theta_g" => Ok(Self::ThetaG),
            "beta_u" => Ok(Self::BetaU),
            "beta_g" => Ok(Self::BetaG),
            "N_u" => Ok(Self::NU),
            "N_g" => Ok(Self::NG),
            "N_cp" => Ok(Self::NCp),
            other => bail!("'{other}' is not a sweepable transmission parameter"),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Rho => "rho",
            Self::ThetaG => "theta_g",
            Self::BetaU => "beta_u",
            Self::BetaG => "beta_g",
            Self::NU => "N_u",
            Self::NG => "N_g",
            Self::NCp => "N_cp",
        }
    }

    /// Applies one value of this variable to a parameter set.
    pub fn apply(&self, tx: &mut TxParams64, value: f64) {
        match self {
            Self::Rho => tx.rho = value,
            Self::ThetaG => {
                tx.theta_g = value;
                tx.theta_u = 1.0 - value;
            }
            Self::BetaU => tx.beta_u = value,
            Self::BetaG => tx.beta_g = value,
            Self::NU => tx.n_u = value.round() as usize,
            Self::NG => tx.n_g = value.round() as usize,
            Self::NCp => tx.n_cp_override = Some(value.round() as usize),
        }
    }
}

/// Parameter sweep: one variable against a family of curves.
#[derive(Debug, Clone)]
pub struct SweepDef {
    pub variable: TxVariable,
    pub values: Vec<f64>,
    pub curve_variable: TxVariable,
    pub curve_values: Vec<f64>,
}

/// Everything one invocation needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemConfig64,
    pub constraints: ConstraintSpec64,
    pub tx: TxParams64,
    pub grid: GridSpec64,
    pub sweep: Option<SweepDef>,
    pub mode: Mode,
    pub trials: u64,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Canonical text the config hash is computed from.
    pub canonical: String,
}

/// Raw `section.key -> value` map in file order of last assignment.
type KeyMap = BTreeMap<String, String>;

fn parse_sections(text: &str) -> Result<KeyMap> {
    let mut map = KeyMap::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected 'key = value'", lineno + 1))?;
        if section.is_empty() {
            bail!("line {}: key outside of any [section]", lineno + 1);
        }
        map.insert(
            format!("{section}.{}", key.trim()),
            value.trim().to_string(),
        );
    }
    Ok(map)
}

/// Parses `a,b,c` lists or inclusive `start:step:end` ranges.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("range must be start:step:end, got '{s}'");
        }
        let start: f64 = parts[0].trim().parse()?;
        let step: f64 = parts[1].trim().parse()?;
        let end: f64 = parts[2].trim().parse()?;
        if step <= 0.0 {
            bail!("range step must be positive in '{s}'");
        }
        let mut out = Vec::new();
        let mut i = 0u64;
        loop {
            let v = start + step * i as f64;
            if v > end + step * 1e-9 {
                break;
            }
            out.push(v);
            i += 1;
        }
        Ok(out)
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(Into::into))
            .collect()
    }
}

struct Reader<'a> {
    map: &'a KeyMap,
}

impl<'a> Reader<'a> {
    fn f64(&self, key: &str) -> Result<f64> {
        self.map
            .get(key)
            .ok_or_else(|| anyhow!("missing required config key '{key}'"))?
            .parse()
            .with_context(|| format!("config key '{key}'"))
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.map.get(key) {
            Some(v) => v.parse().with_context(|| format!("config key '{key}'")),
            None => Ok(default),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.map.get(key) {
            Some(v) => v.parse().with_context(|| format!("config key '{key}'")),
            None => Ok(default),
        }
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.map.get(key) {
            Some(v) => v.parse().with_context(|| format!("config key '{key}'")),
            None => Ok(default),
        }
    }

    fn values_or(&self, key: &str, default: Vec<f64>) -> Result<Vec<f64>> {
        match self.map.get(key) {
            Some(v) => parse_values(v).with_context(|| format!("config key '{key}'")),
            None => Ok(default),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self> {
        let map = parse_sections(text)?;
        let r = Reader { map: &map };

        // [system]: P_t is the one parameter with no defensible default.
        let p_t = r.f64("system.P_t")?;
        let mut system = SystemConfig64::baseline(p_t);
        system.n_t = r.usize_or("system.N_t", system.n_t)?;
        system.n_cp = r.usize_or("system.N_cp", system.n_cp)?;
        system.f_s = r.f64_or("system.f_s", system.f_s)?;
        system.sigma2 = r.f64_or("system.sigma2", system.sigma2)?;
        system.d_u = r.f64_or("system.d_u", system.d_u)?;
        system.d_g = r.f64_or("system.d_g", system.d_g)?;
        system.d_e = r.f64_or("system.d_e", system.d_e)?;
        system.r_u = r.f64_or("system.r_u", system.r_u)?;
        system.r_g1 = r.f64_or("system.r_g1", system.r_g1)?;
        system.r_g2 = r.f64_or("system.r_g2", system.r_g2)?;
        system.alpha = r.f64_or("system.alpha", system.alpha)?;
        system.eta = r.f64_or("system.eta", system.eta)?;
        system.num_taps = r.usize_or("system.num_taps", system.n_cp)?;
        system.delta1 = r.f64_or("system.delta1", system.delta1)?;
        system.delta3 = r.f64_or("system.delta3", system.delta3)?;
        system.quad_l = r.usize_or("system.L", system.quad_l)?;
        system.quad_m = r.usize_or("system.M", system.quad_m)?;

        let constraints = ConstraintSpec64 {
            mu_u: r.f64_or("constraints.mu_u", 0.0)?,
            mu_g: r.f64_or("constraints.mu_g", 0.0)?,
            eps_u: r.f64_or("constraints.eps_u", 1.0)?,
            eps_g: r.f64_or("constraints.eps_g", 1.0)?,
        };

        let theta_g = r.f64_or("tx.theta_g", 0.75)?;
        let mut tx = TxParams64::noma(
            r.f64_or("tx.rho", 0.75)?,
            theta_g,
            r.f64_or("tx.beta_u", 0.5)?,
            r.f64_or("tx.beta_g", 0.5)?,
            r.usize_or("tx.N_u", 16)?,
            r.usize_or("tx.N_g", 24)?,
        );
        tx.theta_u = r.f64_or("tx.theta_u", tx.theta_u)?;

        let defaults = GridSpec64::defaults(&system);
        let to_usize = |v: Vec<f64>| v.into_iter().map(|x| x.round() as usize).collect();
        let grid = GridSpec64 {
            rho: r.values_or("grid.rho", defaults.rho)?,
            theta_g: r.values_or("grid.theta_g", defaults.theta_g)?,
            beta_u: r.values_or("grid.beta_u", defaults.beta_u)?,
            beta_g: r.values_or("grid.beta_g", defaults.beta_g)?,
            n_u: to_usize(r.values_or(
                "grid.N_u",
                defaults.n_u.iter().map(|&v| v as f64).collect(),
            )?),
            n_g: to_usize(r.values_or(
                "grid.N_g",
                defaults.n_g.iter().map(|&v| v as f64).collect(),
            )?),
            n_cp: to_usize(r.values_or(
                "grid.N_cp",
                defaults.n_cp.iter().map(|&v| v as f64).collect(),
            )?),
        };

        let sweep = match map.get("sweep.variable") {
            Some(var) => {
                let curve = map
                    .get("sweep.curve_variable")
                    .ok_or_else(|| anyhow!("sweep.curve_variable is required with sweep.variable"))?;
                Some(SweepDef {
                    variable: TxVariable::parse(var)?,
                    values: parse_values(
                        map.get("sweep.values")
                            .ok_or_else(|| anyhow!("sweep.values is required"))?,
                    )?,
                    curve_variable: TxVariable::parse(curve)?,
                    curve_values: parse_values(
                        map.get("sweep.curve_values")
                            .ok_or_else(|| anyhow!("sweep.curve_values is required"))?,
                    )?,
                })
            }
            None => None,
        };

        let mode = Mode::parse(map.get("run.mode").map(String::as_str).unwrap_or("validate"))?;
        if mode == Mode::Sweep && sweep.is_none() {
            bail!("mode = sweep requires a [sweep] section");
        }

        let canonical = canonicalize(&map);
        Ok(RunConfig {
            system,
            constraints,
            tx,
            grid,
            sweep,
            mode,
            trials: r.u64_or("run.trials", swiptlink::optimizer::DEFAULT_TRIALS)?,
            seed: r.u64_or("run.seed", 0)?,
            out_dir: PathBuf::from(map.get("run.out").map(String::as_str).unwrap_or("out")),
            canonical,
        })
    }

    /// Short hex digest of the canonical key-value text, for CSV metadata.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn canonicalize(map: &KeyMap) -> String {
    // BTreeMap iteration is already sorted by key.
    let mut out = String::new();
    for (k, v) in map {
        out.push_str(k);
        out.push('=');
        out.push_str(v);
        out.push('\n');
    }
    out
}
