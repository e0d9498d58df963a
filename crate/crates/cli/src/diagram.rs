//! Diagram files to core diagrams.

use std::path::{Path, PathBuf};

use codesign_core::dpi::{
    log_space, Block, CoDesignDiagram, DiagramBuilder, Dpi, DpiError, FunctionBlock, FunctionKind, Grid,
};
use codesign_core::drone::{
    actuation_block, algorithm_block, battery_block, computing_block, drone_builder, feature_extraction_block,
    load_catalog_file, mission_block, sensor_block, Catalog, CatalogKind, DroneCatalogs, DroneConfig, FeatureModel,
};
use codesign_core::lqg::CtLqgSystem;
use codesign_core::lqg_dpi::{make_lqg_dpi, LqgBlockSpec, LqgVariant};
use nalgebra::DMatrix;

use crate::error::{locate, parse_toml, read_text, CliError};
use crate::schema::{DiagramFile, DroneOverrides, GridSpec, MatrixSpec, NodeSpec, PlantSpec};

pub const CATALOG_FILES: [&str; 6] = [
    "sensors.csv",
    "computers.csv",
    "batteries.csv",
    "actuators.csv",
    "detection.csv",
    "control.csv",
];

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        let count = |n: f64| -> Result<usize, String> {
            if n >= 0.0 && n.fract() == 0.0 {
                Ok(n as usize)
            } else {
                Err(format!("grid size must be a nonnegative integer, got {n}"))
            }
        };
        match self {
            GridSpec::Points(v) => Ok(v.clone()),
            GridSpec::Log { log: [lo, hi, n] } => {
                if !(*lo > 0.0 && hi >= lo) {
                    return Err(format!("log grid needs 0 < lo <= hi, got {lo}:{hi}"));
                }
                Ok(log_space(*lo, *hi, count(*n)?))
            }
            GridSpec::Linear { linear: [lo, hi, n] } => Ok(Grid::linear(*lo, *hi, count(*n)?)
                .map_err(|e| e.to_string())?
                .points()
                .to_vec()),
        }
    }
}

pub fn matrix(name: &str, m: &MatrixSpec) -> Result<DMatrix<f64>, String> {
    match m {
        MatrixSpec::Scalar(x) => Ok(DMatrix::from_element(1, 1, *x)),
        MatrixSpec::Rows(rows) => {
            let r = rows.len();
            let c = rows.first().map_or(0, |x| x.len());
            if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
                return Err(format!("`{name}` must be a nonempty rectangular matrix"));
            }
            Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
        }
    }
}

pub fn plant(p: &PlantSpec) -> Result<CtLqgSystem, String> {
    CtLqgSystem::new(
        matrix("a", &p.a)?,
        matrix("b", &p.b)?,
        matrix("c", &p.c)?,
        matrix("w", &p.w)?,
        matrix("v", &p.v)?,
        matrix("q0", &p.q0)?,
        matrix("r0", &p.r0)?,
        p.alpha.unwrap_or(1.0),
    )
    .map_err(|e| format!("plant: {e}"))
}

struct Ctx<'a> {
    dir: &'a Path,
}

impl Ctx<'_> {
    fn path(&self, rel: &str) -> PathBuf {
        self.dir.join(rel)
    }

    fn catalog(&self, n: &NodeSpec, kind: CatalogKind) -> Result<Catalog, String> {
        let rel = n.catalog.as_deref().ok_or("missing `catalog` path")?;
        let path = self.path(rel);
        load_catalog_file(&path)
            .and_then(|c| c.expect_kind(kind))
            .map_err(|e| format!("catalog {}: {e}", path.display()))
    }
}

fn req<'a, T>(x: &'a Option<T>, field: &str) -> Result<&'a T, String> {
    x.as_ref().ok_or_else(|| format!("missing `{field}`"))
}

fn grid(x: &Option<GridSpec>, field: &str) -> Result<Vec<f64>, String> {
    req(x, field)?.values().map_err(|e| format!("`{field}`: {e}"))
}

fn grid_or(x: &Option<GridSpec>, field: &str, default: Vec<f64>) -> Result<Vec<f64>, String> {
    match x {
        Some(_) => grid(x, field),
        None => Ok(default),
    }
}

fn opt_grid(x: &Option<GridSpec>, field: &str) -> Result<Option<Grid>, String> {
    match x {
        None => Ok(None),
        Some(_) => Grid::new(grid(x, field)?)
            .map(Some)
            .map_err(|e| format!("`{field}`: {e}")),
    }
}

fn dpi(r: Result<Dpi, DpiError>) -> Result<Block, String> {
    r.map(Block::Catalog).map_err(|e| e.to_string())
}

fn function(n: &NodeSpec) -> Result<Block, String> {
    let inputs = req(&n.inputs, "inputs")?;
    let outputs = req(&n.outputs, "outputs")?;
    let kind = match n.kind.as_str() {
        "sum" => FunctionKind::Sum {
            weights: n.weights.clone().unwrap_or_else(|| vec![1.0; inputs.len()]),
            offset: n.offset.unwrap_or(0.0),
        },
        "product" => FunctionKind::Product {
            scale: n.scale.unwrap_or(1.0),
        },
        "max" => FunctionKind::Max,
        "identity" => FunctionKind::Identity,
        "duplicate" => FunctionKind::Duplicate,
        _ => unreachable!(),
    };
    FunctionBlock::new(kind, inputs, outputs, opt_grid(&n.grid, "grid")?)
        .map(Block::Function)
        .map_err(|e| e.to_string())
}

fn lqg(n: &NodeSpec, variant: LqgVariant) -> Result<Block, String> {
    let mut spec = LqgBlockSpec::new(plant(req(&n.plant, "plant")?)?, variant);
    spec.alpha_grid = grid_or(&n.alpha, "alpha", spec.alpha_grid)?;
    spec.w_grid = grid_or(&n.w, "w", spec.w_grid)?;
    spec.v_grid = grid_or(&n.v, "v", spec.v_grid)?;
    spec.frequency_grid = grid_or(&n.frequency, "frequency", spec.frequency_grid)?;
    spec.delay_grid = grid_or(&n.delay, "delay", spec.delay_grid)?;
    spec.drop_grid = grid_or(&n.drop, "drop", spec.drop_grid)?;
    spec.v_as_precision = n.v_as_precision.unwrap_or(false);
    dpi(make_lqg_dpi(&spec))
}

fn node_block(ctx: &Ctx, n: &NodeSpec) -> Result<Block, String> {
    match n.kind.as_str() {
        "table" => {
            let fun = req(&n.fun, "fun")?;
            let res = req(&n.res, "res")?;
            let rows = req(&n.rows, "rows")?
                .iter()
                .map(|r| (r.label.clone(), r.fun.clone(), r.res.clone()))
                .collect();
            dpi(Dpi::from_reals(fun, res, rows))
        }
        "sensor" => dpi(sensor_block(&ctx.catalog(n, CatalogKind::Sensor)?)),
        "computer" => dpi(computing_block(&ctx.catalog(n, CatalogKind::Computer)?)),
        "algorithm" => dpi(algorithm_block(
            &ctx.catalog(n, CatalogKind::Algorithm)?,
            n.with_accuracy.unwrap_or(false),
        )),
        "battery" => dpi(battery_block(
            &ctx.catalog(n, CatalogKind::Battery)?,
            n.packs.as_deref().unwrap_or(&[1]),
            &grid(&n.missions, "missions")?,
        )),
        "actuation" => dpi(actuation_block(
            &ctx.catalog(n, CatalogKind::Actuator)?,
            &grid(&n.lift, "lift")?,
            &grid(&n.effort, "effort")?,
            n.with_speed.unwrap_or(false),
        )),
        "feature_extraction" => dpi(feature_extraction_block(&FeatureModel {
            k: *req(&n.k, "k")?,
            resolutions: grid(&n.resolutions, "resolutions")?,
            accuracies: grid(&n.accuracies, "accuracies")?,
            frequencies: grid(&n.frequency, "frequency")?,
        })),
        "mission" => dpi(mission_block(&grid(&n.times, "times")?, &grid(&n.counts, "counts")?)),
        "sum" | "product" | "max" | "identity" | "duplicate" => function(n),
        k => match LqgVariant::from_kind(k) {
            Some(v) => lqg(n, v),
            None => Err(format!(
                "unknown node kind `{k}` (expected table, sensor, computer, algorithm, battery, actuation, \
                 feature_extraction, mission, sum, product, max, identity, duplicate, lqg_ct, lqg_ct_delay, \
                 lqg_digital or lqg_digital_drops)"
            )),
        },
    }
}

fn apply(cfg: &mut DroneConfig, o: &DroneOverrides) -> Result<(), String> {
    macro_rules! set {
        ($($f:ident),*) => {$(
            if let Some(x) = &o.$f { cfg.$f = x.clone(); }
        )*};
    }
    macro_rules! set_grid {
        ($($f:ident),*) => {$(
            if o.$f.is_some() { cfg.$f = grid(&o.$f, stringify!($f))?; }
        )*};
    }
    set!(
        inertia,
        q0,
        r0,
        weight_heading,
        noise_over_inertia,
        battery_packs,
        feature_k,
        frame_mass_kg,
        with_speed
    );
    set_grid!(
        alpha_grid,
        frequency_grid,
        v_grid,
        w_grid,
        mission_times,
        mission_counts,
        lift_grid,
        effort_grid
    );
    Ok(())
}

fn drone(ctx: &Ctx, f: &DiagramFile) -> Result<DiagramBuilder, String> {
    if !f.node.is_empty() {
        return Err("a preset diagram cannot also declare nodes".into());
    }
    let cats = match &f.catalogs {
        Some(dir) => {
            let mut texts = Vec::new();
            for name in CATALOG_FILES {
                let p = ctx.path(dir).join(name);
                texts.push(std::fs::read_to_string(&p).map_err(|e| format!("catalog {}: {e}", p.display()))?);
            }
            let t: [&str; 6] = std::array::from_fn(|i| texts[i].as_str());
            DroneCatalogs::from_texts(t).map_err(|e| format!("catalogs in {dir}: {e}"))?
        }
        None if f.toy => DroneCatalogs::toy(),
        None => DroneCatalogs::shipped(),
    };
    let mut cfg = if f.toy {
        DroneConfig::toy()
    } else {
        DroneConfig::standard()
    };
    if let Some(o) = &f.config {
        apply(&mut cfg, o)?;
    }
    let mut b = drone_builder(&cats, &cfg).map_err(|e| e.to_string())?;
    for e in &f.edges {
        b = b.connect(e.clone());
    }
    for e in &f.feedback {
        b = b.feedback(e.clone());
    }
    Ok(b)
}

/// Parses and builds a diagram file; relative paths resolve against its directory.
pub fn load_diagram(path: &Path) -> Result<CoDesignDiagram, CliError> {
    let text = read_text(path)?;
    let f: DiagramFile = parse_toml(path, &text)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let ctx = Ctx { dir };
    let fail = |msg: String, extra: &[&str]| CliError::in_file(path, msg.clone()).at(locate(&text, &msg, extra));
    let builder = match f.preset.as_deref() {
        Some("drone") => drone(&ctx, &f).map_err(|m| fail(m, &["preset"]))?,
        Some(p) => return Err(fail(format!("unknown preset `{p}` (expected `drone`)"), &[])),
        None => {
            let mut b = DiagramBuilder::new();
            for n in &f.node {
                let block = node_block(&ctx, n).map_err(|m| fail(format!("node `{}`: {m}", n.name), &[]))?;
                b = b.node(n.name.clone(), block);
            }
            for e in &f.edges {
                b = b.connect(e.clone());
            }
            for e in &f.feedback {
                b = b.feedback(e.clone());
            }
            for p in &f.expose_fun {
                b = b.expose_fun(p.clone());
            }
            for p in &f.expose_res {
                b = b.expose_res(p.clone());
            }
            b
        }
    };
    builder.build().map_err(|e| {
        let msg = e.to_string();
        let line = locate(&text, &msg, &[]);
        CliError::in_file(path, msg).at(line)
    })
}
