//! Drone case study: component catalogs, platform blocks and the
//! three-loop diagram coupling them to a sampled LQG heading controller.

mod blocks;
mod catalog;

pub use blocks::{
    actuation_block, actuator_power, algorithm_block, battery_block, computing_block, feature_extraction_block,
    mission_block, replacements, sensor_block, FeatureModel,
};
pub use catalog::{load_catalog, load_catalog_file, Catalog, CatalogEntry, CatalogError, CatalogKind};

use crate::dpi::{
    log_space, solve_loop_with, CoDesignDiagram, DiagramBuilder, DpiError, FunctionBlock, FunctionKind, Grid,
    SolveOptions, Witness,
};
use crate::lqg_dpi::{heading_plant, make_lqg_dpi, LqgBlockSpec, LqgVariant};
use crate::order::{Antichain, Element, Orientation};

pub const GRAVITY: f64 = 9.81;

/// Component catalogs for every catalog-backed block.
#[derive(Clone, Debug)]
pub struct DroneCatalogs {
    pub sensors: Catalog,
    pub computers: Catalog,
    pub batteries: Catalog,
    pub actuators: Catalog,
    pub detection: Catalog,
    pub control: Catalog,
}

macro_rules! shipped {
    ($dir:literal) => {
        [
            include_str!(concat!("../../data/", $dir, "/sensors.csv")),
            include_str!(concat!("../../data/", $dir, "/computers.csv")),
            include_str!(concat!("../../data/", $dir, "/batteries.csv")),
            include_str!(concat!("../../data/", $dir, "/actuators.csv")),
            include_str!(concat!("../../data/", $dir, "/detection.csv")),
            include_str!(concat!("../../data/", $dir, "/control.csv")),
        ]
    };
}

impl DroneCatalogs {
    pub fn from_texts(texts: [&str; 6]) -> Result<Self, CatalogError> {
        let [s, c, b, a, d, k] = texts;
        Ok(Self {
            sensors: load_catalog(s)?.expect_kind(CatalogKind::Sensor)?,
            computers: load_catalog(c)?.expect_kind(CatalogKind::Computer)?,
            batteries: load_catalog(b)?.expect_kind(CatalogKind::Battery)?,
            actuators: load_catalog(a)?.expect_kind(CatalogKind::Actuator)?,
            detection: load_catalog(d)?.expect_kind(CatalogKind::Algorithm)?,
            control: load_catalog(k)?.expect_kind(CatalogKind::Algorithm)?,
        })
    }

    /// Shipped stand-in catalogs (synthetic values).
    pub fn shipped() -> Self {
        Self::from_texts(shipped!("full")).expect("shipped catalogs parse")
    }

    /// Small catalogs, at most two entries per kind.
    pub fn toy() -> Self {
        Self::from_texts(shipped!("toy")).expect("toy catalogs parse")
    }
}

/// Raw text of the shipped catalogs, in the order
/// sensors, computers, batteries, actuators, detection, control.
pub fn shipped_catalog_texts(toy: bool) -> [&'static str; 6] {
    if toy {
        shipped!("toy")
    } else {
        shipped!("full")
    }
}

/// Grids and model constants of the drone diagram.
#[derive(Clone, Debug)]
pub struct DroneConfig {
    /// Moment of inertia about the yaw axis, kg·m².
    pub inertia: f64,
    pub q0: f64,
    pub r0: f64,
    /// Penalise heading (`Q = diag(αq₀, 0)`) rather than rate.
    pub weight_heading: bool,
    /// Process noise `W = diag(0, σ_w²/I)` rather than `diag(0, σ_w²)`.
    pub noise_over_inertia: bool,
    pub alpha_grid: Vec<f64>,
    pub frequency_grid: Vec<f64>,
    /// Measurement noise levels σ_v².
    pub v_grid: Vec<f64>,
    /// Tolerated process noise levels σ_w².
    pub w_grid: Vec<f64>,
    /// Minutes.
    pub mission_times: Vec<f64>,
    pub mission_counts: Vec<f64>,
    pub battery_packs: Vec<u32>,
    /// Newtons.
    pub lift_grid: Vec<f64>,
    /// Mean squared torque, N²·m².
    pub effort_grid: Vec<f64>,
    pub feature_k: f64,
    pub frame_mass_kg: f64,
    /// Expose actuator speed as an extra functionality.
    pub with_speed: bool,
}

impl DroneConfig {
    pub fn standard() -> Self {
        Self {
            inertia: 0.02,
            q0: 1.0,
            r0: 1.0,
            weight_heading: true,
            noise_over_inertia: true,
            alpha_grid: log_space(1e-4, 1e4, 9),
            frequency_grid: log_space(0.2, 50.0, 8),
            v_grid: log_space(1e-5, 1e-1, 5),
            w_grid: vec![0.001, 0.01, 0.1],
            mission_times: vec![0.0, 5.0, 10.0, 20.0, 40.0, 60.0],
            mission_counts: vec![100.0, 500.0, 1000.0, 5000.0, 10000.0],
            battery_packs: vec![1, 2, 3, 4],
            lift_grid: (1..=16).map(|k| 5.0 * k as f64).collect(),
            effort_grid: log_space(1e-6, 4.0, 8),
            feature_k: 100.0,
            frame_mass_kg: 0.5,
            with_speed: false,
        }
    }

    /// Coarse grids matching the toy catalogs; small enough for exhaustive search.
    pub fn toy() -> Self {
        Self {
            alpha_grid: vec![0.1, 10.0],
            frequency_grid: vec![5.0, 20.0],
            v_grid: vec![1e-4, 1e-2],
            w_grid: vec![0.01],
            mission_times: vec![0.0, 10.0, 20.0],
            mission_counts: vec![100.0, 1000.0],
            battery_packs: vec![1],
            lift_grid: vec![15.0, 30.0],
            effort_grid: vec![1e-3, 0.25],
            ..Self::standard()
        }
    }

    pub fn lqg_spec(&self) -> Result<LqgBlockSpec, DpiError> {
        let plant = heading_plant(
            self.inertia,
            self.q0,
            self.r0,
            self.weight_heading,
            self.noise_over_inertia,
        )
        .map_err(|e| DpiError::Unsupported(format!("heading plant: {e}")))?;
        let mut spec = LqgBlockSpec::new(plant, LqgVariant::Digital);
        spec.alpha_grid = self.alpha_grid.clone();
        spec.frequency_grid = self.frequency_grid.clone();
        spec.v_grid = self.v_grid.clone();
        spec.w_grid = self.w_grid.clone();
        spec.v_as_precision = true;
        Ok(spec)
    }
}

fn grid_of(mut v: Vec<f64>) -> Result<Grid, DpiError> {
    v.retain(|x| x.is_finite());
    Grid::new(v)
}

/// The drone diagram.
///
/// Feedback edges: battery energy (power × mission time), computation
/// (detection + control) and lift (weight of every massive part).
/// Exposed functionalities: mission time, number of missions, process
/// noise σ_w². Exposed resources: total cost, total power, tracking error.
pub fn build_drone_diagram(cats: &DroneCatalogs, cfg: &DroneConfig) -> Result<CoDesignDiagram, DpiError> {
    drone_builder(cats, cfg)?.build()
}

/// The diagram before validation, for inspection or surgery.
pub fn drone_builder(cats: &DroneCatalogs, cfg: &DroneConfig) -> Result<DiagramBuilder, DpiError> {
    let lqg = make_lqg_dpi(&cfg.lqg_spec()?)?;
    let battery = battery_block(&cats.batteries, &cfg.battery_packs, &cfg.mission_counts)?;
    let actuation = actuation_block(&cats.actuators, &cfg.lift_grid, &cfg.effort_grid, cfg.with_speed)?;
    let feature = FeatureModel {
        k: cfg.feature_k,
        resolutions: dedup(cats.sensors.column("resolution_px")),
        accuracies: dedup(cats.detection.column("accuracy")),
        frequencies: cfg.frequency_grid.clone(),
    };

    // rounding a demand up to the values the next block can provide is exact
    let energy_grid = grid_of(
        battery
            .implementations()
            .iter()
            .map(|i| i.prov.to_reals().unwrap()[0])
            .collect(),
    )?;
    let comp_grid = grid_of(cats.computers.column("computation_gops"))?;
    let lift_grid = grid_of(
        actuation
            .implementations()
            .iter()
            .map(|i| i.prov.to_reals().unwrap()[0])
            .collect(),
    )?;

    let mut b = DiagramBuilder::new()
        .catalog("mission", mission_block(&cfg.mission_times, &cfg.mission_counts)?)
        .catalog("lqg", lqg)
        .function(
            "freq_split",
            FunctionBlock::new(FunctionKind::Duplicate, &["in"], &["observe", "control"], None)?,
        )
        .catalog("feature_extraction", feature_extraction_block(&feature)?)
        .catalog("sensor", sensor_block(&cats.sensors)?)
        .catalog("detect_algo", algorithm_block(&cats.detection, true)?)
        .catalog("control_algo", algorithm_block(&cats.control, false)?)
        .function(
            "comp_sum",
            FunctionBlock::sum(&["detect", "control"], "total", Some(comp_grid))?,
        )
        .catalog("computer", computing_block(&cats.computers)?)
        .catalog("actuation", actuation)
        .catalog("battery", battery)
        .function(
            "mass_sum",
            FunctionBlock::new(
                FunctionKind::Sum {
                    weights: vec![GRAVITY; 4],
                    offset: GRAVITY * cfg.frame_mass_kg,
                },
                &["battery", "sensor", "computer", "actuation"],
                &["lift"],
                Some(lift_grid),
            )?,
        )
        .function(
            "power_sum",
            FunctionBlock::sum(&["sensor", "computer", "actuation"], "total", None)?,
        )
        .function(
            "power_split",
            FunctionBlock::new(FunctionKind::Duplicate, &["in"], &["energy", "total"], None)?,
        )
        .function(
            "energy",
            FunctionBlock::new(
                FunctionKind::Product { scale: 1.0 / 60.0 },
                &["power", "time"],
                &["energy"],
                Some(energy_grid),
            )?,
        )
        .function(
            "cost_sum",
            FunctionBlock::sum(&["battery", "sensor", "computer", "actuation"], "total", None)?,
        )
        .connect("mission.time -> energy.time")
        .connect("mission.missions -> battery.missions")
        .connect("lqg.frequency -> freq_split.in")
        .connect("lqg.precision -> feature_extraction.precision")
        .connect("lqg.control_effort -> actuation.effort")
        .connect("freq_split.observe -> feature_extraction.frequency")
        .connect("freq_split.control -> control_algo.frequency")
        .connect("feature_extraction.resolution -> sensor.resolution")
        .connect("feature_extraction.frame_rate -> sensor.frame_rate")
        .connect("feature_extraction.accuracy -> detect_algo.accuracy")
        .connect("feature_extraction.detect_rate -> detect_algo.frequency")
        .connect("detect_algo.computation -> comp_sum.detect")
        .connect("control_algo.computation -> comp_sum.control")
        .feedback("comp_sum.total -> computer.computation")
        .connect("sensor.power -> power_sum.sensor")
        .connect("computer.power -> power_sum.computer")
        .connect("actuation.power -> power_sum.actuation")
        .connect("power_sum.total -> power_split.in")
        .connect("power_split.energy -> energy.power")
        .feedback("energy.energy -> battery.energy")
        .connect("battery.mass -> mass_sum.battery")
        .connect("sensor.mass -> mass_sum.sensor")
        .connect("computer.mass -> mass_sum.computer")
        .connect("actuation.mass -> mass_sum.actuation")
        .feedback("mass_sum.lift -> actuation.lift")
        .connect("battery.cost -> cost_sum.battery")
        .connect("sensor.cost -> cost_sum.sensor")
        .connect("computer.cost -> cost_sum.computer")
        .connect("actuation.cost -> cost_sum.actuation")
        .expose_fun("mission.mission_time")
        .expose_fun("mission.num_missions")
        .expose_fun("lqg.w")
        .expose_res("cost_sum.total")
        .expose_res("power_split.total")
        .expose_res("lqg.tracking_error");
    if cfg.with_speed {
        b = b.expose_fun("actuation.speed");
    }
    Ok(b)
}

fn dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// One point of a mission sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MissionSpec {
    /// Minutes.
    pub mission_time: f64,
    pub num_missions: f64,
    /// Process-noise intensity σ_w² the controller must tolerate.
    pub noise_bound: f64,
    /// Keep only designs with tracking error at most this.
    pub max_tracking_error: Option<f64>,
    /// Required actuator speed; only used with `DroneConfig::with_speed`.
    pub speed: Option<f64>,
}

impl MissionSpec {
    pub fn new(mission_time: f64, num_missions: f64, noise_bound: f64) -> Self {
        Self {
            mission_time,
            num_missions,
            noise_bound,
            max_tracking_error: None,
            speed: None,
        }
    }

    pub fn functionality(&self, d: &CoDesignDiagram) -> Element {
        let mut f = vec![self.mission_time, self.num_missions, self.noise_bound];
        if d.exposed_fun().len() == 4 {
            f.push(self.speed.unwrap_or(0.0));
        }
        Element::reals(&f)
    }
}

/// Minimal (cost, power, tracking error) with witnesses at one mission.
#[derive(Clone, Debug)]
pub struct QueryPoint {
    pub mission: MissionSpec,
    pub front: Antichain,
    pub witnesses: Vec<Witness>,
}

/// Solves the diagram at every mission of the sweep. Infeasible missions
/// give an empty front.
pub fn query(d: &CoDesignDiagram, sweep: &[MissionSpec]) -> Result<Vec<QueryPoint>, DpiError> {
    query_with(d, sweep, &SolveOptions::default())
}

pub fn query_with(
    d: &CoDesignDiagram,
    sweep: &[MissionSpec],
    opts: &SolveOptions,
) -> Result<Vec<QueryPoint>, DpiError> {
    let tracking = d
        .exposed_res()
        .iter()
        .position(|p| p.port == "tracking_error")
        .unwrap_or(usize::MAX);
    sweep
        .iter()
        .map(|m| {
            let sol = solve_loop_with(d, &m.functionality(d), opts)?;
            let (mut pts, mut ws) = (Vec::new(), Vec::new());
            for (p, w) in sol.front.points().iter().zip(sol.witnesses) {
                let ok = match (m.max_tracking_error, p.to_reals()) {
                    (Some(bound), Some(v)) if tracking < v.len() => v[tracking] <= bound,
                    _ => true,
                };
                if ok {
                    pts.push(p.clone());
                    ws.push(w);
                }
            }
            Ok(QueryPoint {
                mission: *m,
                front: Antichain::from_canonical(d.resource_poset(), Orientation::Minimal, pts),
                witnesses: ws,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests;
