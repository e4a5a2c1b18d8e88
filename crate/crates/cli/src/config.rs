//! Pipeline configuration: one JSON file with per-module sections; every
//! field has the module's documented default and command-line flags win
//! over the file.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    /// k-grid truncation
    pub k_max: f64,
    /// k-grid step
    pub dk: f64,
    /// t/x-grid extent for profile transforms
    pub t_max: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            k_max: 200.0,
            dk: 0.01,
            t_max: 30.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MarchenkoSection {
    pub dx: f64,
    pub x_max: f64,
    pub f_extent: f64,
}

impl Default for MarchenkoSection {
    fn default() -> Self {
        Self {
            dx: 0.01,
            x_max: 5.0,
            f_extent: 60.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct GlSection {
    pub dx: f64,
    pub x_max: f64,
}

impl Default for GlSection {
    fn default() -> Self {
        Self {
            dx: 0.01,
            x_max: 5.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct KreinSection {
    /// accelerant storage step (the potential grid step)
    pub dt: f64,
    pub x_max: f64,
    /// hybrid seam location
    pub x0: f64,
}

impl Default for KreinSection {
    fn default() -> Self {
        Self {
            dt: 0.005,
            x_max: 5.0,
            x0: 0.9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ForwardSection {
    /// marching step; 0 selects the per-potential default
    pub step: f64,
}

impl Default for ForwardSection {
    fn default() -> Self {
        Self { step: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FixedEnergySection {
    pub l_max: usize,
}

impl Default for FixedEnergySection {
    fn default() -> Self {
        Self { l_max: 40 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct QuarkoniumSection {
    pub x_max: f64,
    pub dx: f64,
}

impl Default for QuarkoniumSection {
    fn default() -> Self {
        Self {
            x_max: 8.0,
            dx: 1.0e-3,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub grid: GridSection,
    pub marchenko: MarchenkoSection,
    pub gelfand_levitan: GlSection,
    pub krein: KreinSection,
    pub forward: ForwardSection,
    pub fixed_energy: FixedEnergySection,
    pub quarkonium: QuarkoniumSection,
}

impl PipelineConfig {
    pub fn load(path: Option<&std::path::Path>) -> Result<Self, String> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| format!("config {}: {e}", p.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("config {}: {e}", p.display()))
            }
        }
    }

    pub fn k_grid(&self) -> Vec<f64> {
        let n = (self.grid.k_max / self.grid.dk).round() as usize;
        (1..=n).map(|i| self.grid.dk * i as f64).collect()
    }
}
