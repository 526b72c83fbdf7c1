use std::path::PathBuf;

/// Numerical tolerances and size caps shared by every computation.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub tolerance: f64,
    pub integrality_tolerance: f64,
    pub weyl_cap: usize,
    pub rank_cap: usize,
    pub cache_dir: Option<PathBuf>,
    pub no_cache: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            integrality_tolerance: 1e-6,
            weyl_cap: 1_000_000,
            rank_cap: 8,
            cache_dir: None,
            no_cache: false,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.tolerance > 0.0) || !(self.integrality_tolerance > 0.0) {
            return Err("tolerances must be positive".into());
        }
        if self.weyl_cap == 0 || self.rank_cap == 0 {
            return Err("caps must be positive".into());
        }
        Ok(())
    }
}
