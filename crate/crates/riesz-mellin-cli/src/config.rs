//! TOML experiment configuration with CLI overrides layered on top.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub symbol: SymbolConfig,
    #[serde(default)]
    pub theorem1: Theorem1Config,
    #[serde(default)]
    pub corner: CornerConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    /// Half-apertures in radians.
    pub alphas: Vec<f64>,
    /// Continuation order Q; the window is |Re λ| < Q + 1/4.
    pub window_order: usize,
    /// Coarse grid points per sup search.
    pub line_points: usize,
    /// Profile grid points (geometric ladder to profile_xi_max).
    pub profile_points: usize,
    pub profile_xi_max: f64,
    /// Weight powers p for the |K̂|²|ξ|^{2p} profiles.
    pub profile_powers: Vec<usize>,
    /// Line for the m1 modulus.
    pub mu_for_m1: f64,
    /// Tolerance for the flat-angle closed-form comparison.
    pub oracle_rel_tol: f64,
}

impl Default for SymbolConfig {
    fn default() -> Self {
        Self {
            alphas: vec![],
            window_order: 3,
            line_points: 257,
            profile_points: 120,
            profile_xi_max: 1e3,
            profile_powers: vec![0, 1, 2, 3, 4],
            mu_for_m1: 0.0,
            oracle_rel_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem1Config {
    /// "square", "lshape", or a path to a polygon JSON file.
    pub polygon: String,
    /// Target dof counts, strictly increasing, at least 3 levels.
    pub ladder: Vec<usize>,
    /// Relative change on the last step below which σ_h counts as saturated.
    pub plateau_threshold: f64,
    /// Disk-cover scale for the manifest.
    pub cover_scale: f64,
    /// Hard cap guarding against runaway level sizes.
    pub max_dofs: usize,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Self {
            polygon: "square".into(),
            ladder: vec![64, 128, 256, 512],
            plateau_threshold: 0.05,
            cover_scale: 0.3,
            max_dofs: 2048,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CornerConfig {
    /// Half-apertures θ in radians.
    pub thetas: Vec<f64>,
    pub trials: usize,
    /// Radial grid sizes (coarse, fine, ...) for the drift check.
    pub resolutions: Vec<usize>,
    pub drift_threshold: f64,
    pub grid_r_min: f64,
    pub grid_r_max: f64,
    /// Cutoff χ: 1 up to `cutoff_plateau`, 0 beyond `cutoff_support`.
    pub cutoff_plateau: f64,
    pub cutoff_support: f64,
}

impl Default for CornerConfig {
    fn default() -> Self {
        Self {
            thetas: vec![],
            trials: 50,
            resolutions: vec![384, 768],
            drift_threshold: 0.05,
            grid_r_min: 1e-4,
            grid_r_max: 1e2,
            cutoff_plateau: 4.0,
            cutoff_support: 8.0,
        }
    }
}

pub fn load(path: Option<&std::path::Path>) -> Result<ExperimentConfig, String> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", p.display()))
        }
    }
}
