use crate::dpi::{Dpi, DpiError};

use super::catalog::{Catalog, CatalogKind};

type Row = (String, Vec<f64>, Vec<f64>);

fn need(cat: &Catalog, kind: CatalogKind) -> Result<(), DpiError> {
    if cat.kind != kind {
        return Err(DpiError::Unsupported(format!(
            "expected a {kind} catalog, got {}",
            cat.kind
        )));
    }
    if cat.is_empty() {
        return Err(DpiError::EmptyDpi);
    }
    Ok(())
}

/// Provides resolution and frame rate; requires cost, mass, power.
pub fn sensor_block(cat: &Catalog) -> Result<Dpi, DpiError> {
    need(cat, CatalogKind::Sensor)?;
    let rows = (0..cat.len())
        .map(|i| {
            (
                cat.entries[i].name.clone(),
                vec![cat.value(i, "resolution_px"), cat.value(i, "frame_rate_hz")],
                vec![
                    cat.value(i, "cost_chf"),
                    cat.value(i, "mass_kg"),
                    cat.value(i, "power_w"),
                ],
            )
        })
        .collect();
    Dpi::from_reals(&["resolution", "frame_rate"], &["cost", "mass", "power"], rows)
}

/// Provides computation; requires cost, mass, power.
pub fn computing_block(cat: &Catalog) -> Result<Dpi, DpiError> {
    need(cat, CatalogKind::Computer)?;
    let rows = (0..cat.len())
        .map(|i| {
            (
                cat.entries[i].name.clone(),
                vec![cat.value(i, "computation_gops")],
                vec![
                    cat.value(i, "cost_chf"),
                    cat.value(i, "mass_kg"),
                    cat.value(i, "power_w"),
                ],
            )
        })
        .collect();
    Dpi::from_reals(&["computation"], &["cost", "mass", "power"], rows)
}

/// Provides a serviced frequency (and accuracy when `with_accuracy`);
/// requires computation.
pub fn algorithm_block(cat: &Catalog, with_accuracy: bool) -> Result<Dpi, DpiError> {
    need(cat, CatalogKind::Algorithm)?;
    let rows = (0..cat.len())
        .map(|i| {
            let mut prov = vec![cat.value(i, "frequency_hz")];
            if with_accuracy {
                prov.push(cat.value(i, "accuracy"));
            }
            (
                cat.entries[i].name.clone(),
                prov,
                vec![cat.value(i, "computation_gops")],
            )
        })
        .collect();
    let fun: &[&str] = if with_accuracy {
        &["frequency", "accuracy"]
    } else {
        &["frequency"]
    };
    Dpi::from_reals(fun, &["computation"], rows)
}

/// Battery replacements needed for `missions` charge cycles.
pub fn replacements(missions: f64, cycle_life: f64) -> f64 {
    if cycle_life <= 0.0 {
        return f64::INFINITY;
    }
    (missions / cycle_life).ceil().max(1.0)
}

/// Rows: chemistry × pack count × mission count.
///
/// Provides energy per mission (`packs × capacity`) and the number of
/// missions; requires `cost = packs × capacity / specific_cost × replacements`
/// and `mass = packs × capacity / specific_energy`.
pub fn battery_block(cat: &Catalog, packs: &[u32], missions: &[f64]) -> Result<Dpi, DpiError> {
    need(cat, CatalogKind::Battery)?;
    let mut rows: Vec<Row> = Vec::new();
    for i in 0..cat.len() {
        let cap = cat.value(i, "capacity_wh");
        let se = cat.value(i, "specific_energy_wh_per_kg");
        let sc = cat.value(i, "specific_cost_wh_per_chf");
        let life = cat.value(i, "cycle_life");
        for &k in packs {
            let energy = cap * k as f64;
            for &n in missions {
                let cost = energy / sc * replacements(n, life);
                rows.push((
                    format!("{} x{k} n={n}", cat.entries[i].name),
                    vec![energy, n],
                    vec![cost, energy / se],
                ));
            }
        }
    }
    Dpi::from_reals(&["energy", "missions"], &["cost", "mass"], rows)
}

/// `idle + per_lift·lift + per_effort·effort` for actuator row `i`.
pub fn actuator_power(cat: &Catalog, i: usize, lift: f64, effort: f64) -> f64 {
    cat.value(i, "idle_power_w")
        + cat.value(i, "power_per_lift_w_per_n") * lift
        + cat.value(i, "power_per_effort_w") * effort
}

/// Rows: actuator type × lift level × effort level within its limits
/// (`lift ≤ max_lift`, `effort ≤ max_torque²`).
///
/// Provides lift and control effort (and speed when `with_speed`);
/// requires cost, mass and power.
pub fn actuation_block(
    cat: &Catalog,
    lift_grid: &[f64],
    effort_grid: &[f64],
    with_speed: bool,
) -> Result<Dpi, DpiError> {
    need(cat, CatalogKind::Actuator)?;
    let mut rows: Vec<Row> = Vec::new();
    for i in 0..cat.len() {
        let max_lift = cat.value(i, "max_lift_n");
        let max_effort = cat.value(i, "max_torque_nm").powi(2);
        for &l in lift_grid.iter().filter(|l| **l <= max_lift) {
            for &e in effort_grid.iter().filter(|e| **e <= max_effort) {
                let mut prov = vec![l, e];
                if with_speed {
                    prov.push(cat.value(i, "speed_mps"));
                }
                rows.push((
                    format!("{} lift={l} effort={e}", cat.entries[i].name),
                    prov,
                    vec![
                        cat.value(i, "cost_chf"),
                        cat.value(i, "mass_kg"),
                        actuator_power(cat, i, l, e),
                    ],
                ));
            }
        }
    }
    if rows.is_empty() {
        return Err(DpiError::EmptyDpi);
    }
    let fun: &[&str] = if with_speed {
        &["lift", "effort", "speed"]
    } else {
        &["lift", "effort"]
    };
    Dpi::from_reals(fun, &["cost", "mass", "power"], rows)
}

/// Image-to-measurement model: `σ_v² = k / (resolution × accuracy)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureModel {
    pub k: f64,
    pub resolutions: Vec<f64>,
    pub accuracies: Vec<f64>,
    pub frequencies: Vec<f64>,
}

impl FeatureModel {
    pub fn precision(&self, resolution: f64, accuracy: f64) -> f64 {
        resolution * accuracy / self.k
    }
}

/// Rows: resolution × accuracy × frequency.
///
/// Provides measurement precision `1/σ_v²` at a rate; requires the sensor
/// resolution and frame rate, and a detector with that accuracy and rate.
pub fn feature_extraction_block(m: &FeatureModel) -> Result<Dpi, DpiError> {
    if !(m.k > 0.0) {
        return Err(DpiError::Unsupported(format!(
            "feature model constant must be positive, got {}",
            m.k
        )));
    }
    let mut rows: Vec<Row> = Vec::new();
    for &r in &m.resolutions {
        for &a in &m.accuracies {
            for &f in &m.frequencies {
                rows.push((
                    format!("res={r} acc={a} f={f}"),
                    vec![m.precision(r, a), f],
                    vec![r, f, a, f],
                ));
            }
        }
    }
    if rows.is_empty() {
        return Err(DpiError::EmptyDpi);
    }
    Dpi::from_reals(
        &["precision", "frequency"],
        &["resolution", "frame_rate", "accuracy", "detect_rate"],
        rows,
    )
}

/// Rows: mission time × mission count, passed through as requirements.
pub fn mission_block(times: &[f64], counts: &[f64]) -> Result<Dpi, DpiError> {
    let mut rows: Vec<Row> = Vec::new();
    for &t in times {
        for &n in counts {
            rows.push((format!("t={t} n={n}"), vec![t, n], vec![t, n]));
        }
    }
    if rows.is_empty() {
        return Err(DpiError::EmptyDpi);
    }
    Dpi::from_reals(&["mission_time", "num_missions"], &["time", "missions"], rows)
}
