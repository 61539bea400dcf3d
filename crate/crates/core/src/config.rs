//! Pipeline parameters and the flat `key=value` config format.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::affinity::EdgeWeights;
use crate::error::{Error, Result};
use crate::foreground::EtaSweep;
use crate::refine::Laplacian;

/// Background seed strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SeedMode {
    AllBorder,
    #[default]
    Filtered,
}

impl FromStr for SeedMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "allBorder" => Ok(Self::AllBorder),
            "filtered" => Ok(Self::Filtered),
            other => Err(format!("unknown seeds `{other}`")),
        }
    }
}

impl std::fmt::Display for SeedMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::AllBorder => "allBorder",
            Self::Filtered => "filtered",
        })
    }
}

/// Which parts of the ranking refinement run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefineMode {
    /// Output the integrated map as is.
    None,
    /// Plain manifold ranking: no clusters, no gating.
    MrOnly,
    MidlevelOnly,
    GateOnly,
    #[default]
    Full,
}

impl RefineMode {
    pub fn uses_clusters(self) -> bool {
        matches!(self, Self::MidlevelOnly | Self::Full)
    }

    pub fn uses_gate(self) -> bool {
        matches!(self, Self::GateOnly | Self::Full)
    }
}

impl FromStr for RefineMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "none" => Ok(Self::None),
            "mrOnly" => Ok(Self::MrOnly),
            "midlevelOnly" => Ok(Self::MidlevelOnly),
            "gateOnly" => Ok(Self::GateOnly),
            "full" => Ok(Self::Full),
            other => Err(format!("unknown refine `{other}`")),
        }
    }
}

impl std::fmt::Display for RefineMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::MrOnly => "mrOnly",
            Self::MidlevelOnly => "midlevelOnly",
            Self::GateOnly => "gateOnly",
            Self::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub n_superpixels: usize,
    pub sigma_w: f64,
    pub beta: f64,
    pub phi: f64,
    pub kappa: f64,
    pub mu: f64,
    pub tau_c: f64,
    pub eta_sweep: EtaSweep,
    /// Largest area fraction accepted for the swept foreground region.
    pub fg_max_area: f64,
    pub slic_compactness: f64,
    pub slic_iterations: usize,
    pub edge_weights: EdgeWeights,
    pub seeds: SeedMode,
    pub refine: RefineMode,
    pub laplacian: Laplacian,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            n_superpixels: 250,
            sigma_w: 0.1,
            beta: 0.5,
            phi: 0.15,
            kappa: 4.0,
            mu: 0.01,
            tau_c: 0.1,
            eta_sweep: EtaSweep::default(),
            fg_max_area: 0.6,
            slic_compactness: 10.0,
            slic_iterations: 10,
            edge_weights: EdgeWeights::Full,
            seeds: SeedMode::Filtered,
            refine: RefineMode::Full,
            laplacian: Laplacian::Unnormalized,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Config(format!("{key}: {e}")))
}

impl PipelineConfig {
    /// Set one parameter by its config key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "nSuperpixels" => self.n_superpixels = parse(key, value)?,
            "sigmaW" | "σ_w" => self.sigma_w = parse(key, value)?,
            "beta" | "β" => self.beta = parse(key, value)?,
            "phi" | "φ" => self.phi = parse(key, value)?,
            "kappa" | "κ" => self.kappa = parse(key, value)?,
            "mu" | "μ" => self.mu = parse(key, value)?,
            "tauC" | "τ_c" => self.tau_c = parse(key, value)?,
            "etaSweep.max" => self.eta_sweep.max = parse(key, value)?,
            "etaSweep.min" => self.eta_sweep.min = parse(key, value)?,
            "etaSweep.steps" => self.eta_sweep.steps = parse(key, value)?,
            "fgMaxArea" => self.fg_max_area = parse(key, value)?,
            "slicCompactness" => self.slic_compactness = parse(key, value)?,
            "slicIterations" => self.slic_iterations = parse(key, value)?,
            "edgeWeights" => self.edge_weights = parse(key, value)?,
            "seeds" => self.seeds = parse(key, value)?,
            "refine" => self.refine = parse(key, value)?,
            "laplacian" => self.laplacian = parse(key, value)?,
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Apply `key=value` lines on top of the current values. `#` starts a
    /// comment; blank lines are ignored.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split_once('#').map_or(line, |(l, _)| l).trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_str_validated(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_str_validated(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sigmaW", self.sigma_w),
            ("phi", self.phi),
            ("kappa", self.kappa),
            ("mu", self.mu),
            ("slicCompactness", self.slic_compactness),
            ("fgMaxArea", self.fg_max_area),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::Config(format!("beta must be in [0, 1], got {}", self.beta)));
        }
        if !(self.tau_c >= 0.0) {
            return Err(Error::Config(format!("tauC must be non-negative, got {}", self.tau_c)));
        }
        if self.n_superpixels == 0 || self.slic_iterations == 0 || self.eta_sweep.steps == 0 {
            return Err(Error::Config(
                "nSuperpixels, slicIterations and etaSweep.steps must be at least 1".into(),
            ));
        }
        if !(self.eta_sweep.max >= self.eta_sweep.min) {
            return Err(Error::Config("etaSweep.max must be >= etaSweep.min".into()));
        }
        Ok(())
    }

    /// Serialize every parameter as `key=value` lines.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k}={v}");
        };
        line("nSuperpixels", &self.n_superpixels);
        line("sigmaW", &self.sigma_w);
        line("beta", &self.beta);
        line("phi", &self.phi);
        line("kappa", &self.kappa);
        line("mu", &self.mu);
        line("tauC", &self.tau_c);
        line("etaSweep.max", &self.eta_sweep.max);
        line("etaSweep.min", &self.eta_sweep.min);
        line("etaSweep.steps", &self.eta_sweep.steps);
        line("fgMaxArea", &self.fg_max_area);
        line("slicCompactness", &self.slic_compactness);
        line("slicIterations", &self.slic_iterations);
        line("edgeWeights", &self.edge_weights);
        line("seeds", &self.seeds);
        line("refine", &self.refine);
        line("laplacian", &self.laplacian);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = PipelineConfig::default();
        assert_eq!(c.n_superpixels, 250);
        assert_eq!(c.sigma_w, 0.1);
        assert_eq!(c.beta, 0.5);
        assert_eq!(c.phi, 0.15);
        assert_eq!(c.kappa, 4.0);
        assert_eq!(c.mu, 0.01);
        assert_eq!(c.tau_c, 0.1);
        assert_eq!(c.eta_sweep, EtaSweep { max: 4.0, min: -16.0, steps: 32 });
        assert_eq!(c.slic_compactness, 10.0);
        c.validate().unwrap();
    }

    #[test]
    fn parse_and_override() {
        let c = PipelineConfig::from_str_validated(
            "# comment\nnSuperpixels = 100\nσ_w=0.2\nrefine=none\n\nedgeWeights=color\n",
        )
        .unwrap();
        assert_eq!(c.n_superpixels, 100);
        assert_eq!(c.sigma_w, 0.2);
        assert_eq!(c.refine, RefineMode::None);
        assert_eq!(c.edge_weights, EdgeWeights::Color);
    }

    #[test]
    fn trailing_comments_are_ignored() {
        let c = PipelineConfig::from_str_validated("seeds=allBorder   # allBorder | filtered\n").unwrap();
        assert_eq!(c.seeds, SeedMode::AllBorder);
    }

    #[test]
    fn bad_input_is_rejected() {
        assert!(PipelineConfig::from_str_validated("bogus=1").is_err());
        assert!(PipelineConfig::from_str_validated("mu=-1").is_err());
        assert!(PipelineConfig::from_str_validated("refine=some").is_err());
        assert!(PipelineConfig::from_str_validated("kappa").is_err());
    }
}
