//! On-disk formats (TOML).

use serde::Deserialize;

/// Explicit points, or `{ log = [lo, hi, n] }` / `{ linear = [lo, hi, n] }`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Points(Vec<f64>),
    Log { log: [f64; 3] },
    Linear { linear: [f64; 3] },
}

/// A scalar or a list of rows.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Scalar(f64),
    Rows(Vec<Vec<f64>>),
}

/// Continuous plant; `alpha` defaults to 1.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantSpec {
    pub a: MatrixSpec,
    pub b: MatrixSpec,
    pub c: MatrixSpec,
    pub w: MatrixSpec,
    pub v: MatrixSpec,
    pub q0: MatrixSpec,
    pub r0: MatrixSpec,
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    pub label: String,
    pub fun: Vec<f64>,
    pub res: Vec<f64>,
}

/// One `[[node]]` entry. Which fields apply depends on `kind`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub name: String,
    pub kind: String,
    // table
    pub fun: Option<Vec<String>>,
    pub res: Option<Vec<String>>,
    pub rows: Option<Vec<RowSpec>>,
    // catalog-backed blocks
    pub catalog: Option<String>,
    pub with_accuracy: Option<bool>,
    pub packs: Option<Vec<u32>>,
    pub missions: Option<GridSpec>,
    pub lift: Option<GridSpec>,
    pub effort: Option<GridSpec>,
    pub with_speed: Option<bool>,
    pub k: Option<f64>,
    pub resolutions: Option<GridSpec>,
    pub accuracies: Option<GridSpec>,
    pub times: Option<GridSpec>,
    pub counts: Option<GridSpec>,
    // function nodes
    pub inputs: Option<Vec<String>>,
    pub outputs: Option<Vec<String>>,
    pub weights: Option<Vec<f64>>,
    pub offset: Option<f64>,
    pub scale: Option<f64>,
    pub grid: Option<GridSpec>,
    // LQG nodes
    pub plant: Option<PlantSpec>,
    pub alpha: Option<GridSpec>,
    pub w: Option<GridSpec>,
    pub v: Option<GridSpec>,
    pub frequency: Option<GridSpec>,
    pub delay: Option<GridSpec>,
    pub drop: Option<GridSpec>,
    pub v_as_precision: Option<bool>,
}

/// Overrides of the drone preset's grids and constants.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DroneOverrides {
    pub inertia: Option<f64>,
    pub q0: Option<f64>,
    pub r0: Option<f64>,
    pub weight_heading: Option<bool>,
    pub noise_over_inertia: Option<bool>,
    pub alpha_grid: Option<GridSpec>,
    pub frequency_grid: Option<GridSpec>,
    pub v_grid: Option<GridSpec>,
    pub w_grid: Option<GridSpec>,
    pub mission_times: Option<GridSpec>,
    pub mission_counts: Option<GridSpec>,
    pub battery_packs: Option<Vec<u32>>,
    pub lift_grid: Option<GridSpec>,
    pub effort_grid: Option<GridSpec>,
    pub feature_k: Option<f64>,
    pub frame_mass_kg: Option<f64>,
    pub with_speed: Option<bool>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    /// `"drone"` builds the drone diagram; `node` must then be empty.
    pub preset: Option<String>,
    /// Use the small shipped catalogs and grids (preset only).
    #[serde(default)]
    pub toy: bool,
    /// Directory with `sensors.csv`, `computers.csv`, `batteries.csv`,
    /// `actuators.csv`, `detection.csv`, `control.csv` (preset only).
    pub catalogs: Option<String>,
    pub config: Option<DroneOverrides>,
    #[serde(default)]
    pub node: Vec<NodeSpec>,
    #[serde(default)]
    pub edges: Vec<String>,
    #[serde(default)]
    pub feedback: Vec<String>,
    #[serde(default)]
    pub expose_fun: Vec<String>,
    #[serde(default)]
    pub expose_res: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    /// Fix exposed functionalities, minimize resources.
    FixFunMinRes,
    /// Fix exposed resources, maximize functionalities.
    FixResMaxFun,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    /// Diagram path, relative to the query file.
    pub diagram: String,
    pub kind: QueryKind,
    #[serde(default)]
    pub format: Format,
    /// One entry per query point, in exposed-port order.
    #[serde(default)]
    pub sweep: Vec<Vec<f64>>,
}
