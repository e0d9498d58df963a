use std::collections::HashMap;
use std::path::{Path, PathBuf};

use codesign_core::dpi::{compile_to_dpi, solve_loop_with, Block, CoDesignDiagram, SolveOptions, Witness};
use codesign_core::drone::load_catalog_file;
use codesign_core::lqg::{ct_performance, scalar_closed_form, ScalarLqg};
use codesign_core::Element;

use crate::diagram::{load_diagram, plant};
use crate::error::{locate, parse_toml, read_text, CliError};
use crate::output::{Cell, Table};
use crate::schema::{Format, PlantSpec, QueryFile, QueryKind};

/// Successful command outcomes; input errors are `Err`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Every query point was infeasible.
    Infeasible,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 2,
        }
    }
}

pub struct Loaded {
    pub query: QueryFile,
    pub diagram: CoDesignDiagram,
}

/// Reads a query file and its diagram and checks the sweep against the
/// exposed ports.
pub fn load_query(path: &Path) -> Result<Loaded, CliError> {
    let text = read_text(path)?;
    let query: QueryFile = parse_toml(path, &text)?;
    let dpath = path.parent().unwrap_or(Path::new(".")).join(&query.diagram);
    let diagram = load_diagram(&dpath)?;
    let (ports, poset, side) = match query.kind {
        QueryKind::FixFunMinRes => (diagram.exposed_fun(), diagram.functionality_poset(), "functionality"),
        QueryKind::FixResMaxFun => (diagram.exposed_res(), diagram.resource_poset(), "resource"),
    };
    let sweep_line = locate(&text, "", &["sweep"]);
    for (i, p) in query.sweep.iter().enumerate() {
        if p.len() != ports.len() {
            let names: Vec<String> = ports.iter().map(|p| p.to_string()).collect();
            return Err(CliError::in_file(
                path,
                format!(
                    "sweep point {} has {} values but the diagram exposes {} {side} ports ({})",
                    i + 1,
                    p.len(),
                    ports.len(),
                    names.join(", ")
                ),
            )
            .at(sweep_line));
        }
        if let Err(e) = poset.check(&Element::reals(p)) {
            return Err(CliError::in_file(path, format!("sweep point {}: {e}", i + 1)).at(sweep_line));
        }
    }
    Ok(Loaded { query, diagram })
}

fn catalog_nodes(d: &CoDesignDiagram) -> Vec<String> {
    d.nodes()
        .iter()
        .filter(|n| matches!(n.block, Block::Catalog(_)))
        .map(|n| n.name.clone())
        .collect()
}

fn header(d: &CoDesignDiagram) -> Vec<String> {
    let mut h: Vec<String> = d.exposed_fun().iter().map(|p| format!("fun_{p}")).collect();
    h.extend(d.exposed_res().iter().map(|p| format!("res_{p}")));
    h.extend(catalog_nodes(d).iter().map(|n| format!("witness_{n}")));
    h
}

fn row(fun: &[f64], res: &[f64], w: &Witness, nodes: &[String]) -> Vec<Cell> {
    let mut r: Vec<Cell> = fun.iter().chain(res).map(|x| Cell::Num(*x)).collect();
    r.extend(
        nodes
            .iter()
            .map(|n| Cell::Text(w.label_of(n).unwrap_or("").to_string())),
    );
    r
}

/// Runs every sweep point; one row per front point.
pub fn solve_table(l: &Loaded, opts: &SolveOptions) -> Result<(Table, bool), CliError> {
    let d = &l.diagram;
    let nodes = catalog_nodes(d);
    let mut t = Table::new(header(d));
    let mut any = false;
    match l.query.kind {
        QueryKind::FixFunMinRes => {
            for f in &l.query.sweep {
                let sol = solve_loop_with(d, &Element::reals(f), opts).map_err(|e| CliError::new(e.to_string()))?;
                any |= !sol.front.is_empty();
                for (p, w) in sol.front.points().iter().zip(&sol.witnesses) {
                    t.rows.push(row(f, &p.to_reals().unwrap_or_default(), w, &nodes));
                }
            }
        }
        QueryKind::FixResMaxFun => {
            let (dpi, witnesses) = compile_to_dpi(d).map_err(|e| CliError::new(e.to_string()))?;
            let by_label: HashMap<String, &Witness> = witnesses.iter().map(|w| (w.to_string(), w)).collect();
            for r in &l.query.sweep {
                let front = dpi
                    .h_prime_witnessed(&Element::reals(r))
                    .map_err(|e| CliError::new(e.to_string()))?;
                any |= !front.is_empty();
                for (p, label) in front {
                    t.rows
                        .push(row(&p.to_reals().unwrap_or_default(), r, by_label[&label], &nodes));
                }
            }
        }
    }
    Ok((t, any || l.query.sweep.is_empty()))
}

/// `solve`: writes `<out>/<query stem>.<csv|json>`.
pub fn cmd_solve(
    query: &Path,
    out: &Path,
    format: Option<Format>,
    opts: &SolveOptions,
) -> Result<(Status, PathBuf), CliError> {
    let l = load_query(query)?;
    let (t, feasible) = solve_table(&l, opts).map_err(|e| e.within(query))?;
    let format = format.unwrap_or(l.query.format);
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let stem = query.file_stem().and_then(|s| s.to_str()).unwrap_or("front");
    std::fs::create_dir_all(out).map_err(|e| CliError::in_file(out, format!("cannot create: {e}")))?;
    let dest = out.join(format!("{stem}.{ext}"));
    std::fs::write(&dest, t.to_bytes(format)).map_err(|e| CliError::in_file(&dest, format!("cannot write: {e}")))?;
    let status = if feasible { Status::Ok } else { Status::Infeasible };
    Ok((status, dest))
}

/// `lo:hi:n`, log-spaced; `n = 0` is an empty sweep.
pub fn parse_alpha(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::new(format!("--alpha expects lo:hi:n with 0 < lo <= hi, got `{s}`"));
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(bad());
    }
    Ok(codesign_core::dpi::log_space(lo, hi, n))
}

pub struct SweepReport {
    pub table: Table,
    /// Rows where the closed form and the Riccati route differ by more than the tolerance.
    pub disagreements: Vec<String>,
    /// α values where no stabilizing design was found.
    pub failures: Vec<String>,
}

/// `(α, v, w, P_track, P_effort)` rows, α innermost; `v` and `w` scale the
/// plant's noise intensities. Scalar plants add closed-form columns.
pub fn lqg_sweep_table(p: &PlantSpec, alphas: &[f64], vs: &[f64], ws: &[f64], tol: f64) -> Result<SweepReport, String> {
    let base = plant(p)?;
    let scalar = base.n() == 1 && base.b.ncols() == 1 && base.c.nrows() == 1;
    let mut header: Vec<String> = ["alpha", "v", "w", "p_track", "p_effort"].map(String::from).to_vec();
    if scalar {
        header.extend(["p_track_cf".to_string(), "p_effort_cf".to_string()]);
    }
    let mut rep = SweepReport {
        table: Table::new(header),
        disagreements: Vec::new(),
        failures: Vec::new(),
    };
    for &v in vs {
        for &w in ws {
            for &alpha in alphas {
                let sys = base.with_noise(&base.w * w, &base.v * v).with_alpha(alpha);
                let sol = match ct_performance(&sys) {
                    Ok(s) => s,
                    Err(e) => {
                        rep.failures.push(format!("alpha={alpha} v={v} w={w}: {e}"));
                        continue;
                    }
                };
                let mut r = vec![alpha, v, w, sol.p_track, sol.p_effort];
                if scalar {
                    let s = ScalarLqg {
                        a: sys.a[(0, 0)],
                        b: sys.b[(0, 0)],
                        c: sys.c[(0, 0)],
                        q0: sys.q0[(0, 0)],
                        r0: sys.r0[(0, 0)],
                        v: sys.v[(0, 0)],
                        w: sys.w[(0, 0)],
                        alpha,
                    };
                    let cf = scalar_closed_form(&s).map_err(|e| e.to_string())?;
                    let off = |a: f64, b: f64| (a - b).abs() > tol * a.abs().max(b.abs());
                    if off(cf.p_track, sol.p_track) || off(cf.p_effort, sol.p_effort) {
                        rep.disagreements.push(format!(
                            "alpha={alpha} v={v} w={w}: numeric ({}, {}) vs closed form ({}, {})",
                            sol.p_track, sol.p_effort, cf.p_track, cf.p_effort
                        ));
                    }
                    r.extend([cf.p_track, cf.p_effort]);
                }
                rep.table.rows.push(r.into_iter().map(Cell::Num).collect());
            }
        }
    }
    Ok(rep)
}

pub struct SweepArgs<'a> {
    pub system: &'a Path,
    pub alpha: &'a str,
    pub v: &'a [f64],
    pub w: &'a [f64],
    pub tol: f64,
    pub format: Format,
}

/// `lqg-sweep`: the table plus warnings for stderr.
pub fn cmd_lqg_sweep(a: &SweepArgs) -> Result<(Vec<u8>, Vec<String>), CliError> {
    let alphas = parse_alpha(a.alpha)?;
    for (flag, xs) in [("--v", a.v), ("--w", a.w)] {
        if xs.is_empty() || xs.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(CliError::new(format!("{flag} needs nonnegative finite scalings")));
        }
    }
    let text = read_text(a.system)?;
    let p: PlantSpec = parse_toml(a.system, &text)?;
    let rep = lqg_sweep_table(&p, &alphas, a.v, a.w, a.tol).map_err(|m| {
        let line = locate(&text, &m, &[]);
        CliError::in_file(a.system, m).at(line)
    })?;
    let mut warnings: Vec<String> = rep
        .failures
        .iter()
        .map(|f| format!("no stabilizing design at {f}"))
        .collect();
    warnings.extend(
        rep.disagreements
            .iter()
            .map(|d| format!("closed form differs beyond --tol {}: {d}", a.tol)),
    );
    Ok((rep.table.to_bytes(a.format), warnings))
}

/// What a path was recognised as.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Checked {
    Catalog,
    Diagram,
    Query,
    System,
}

/// Schema-checks one catalog, diagram, query or plant file without solving.
pub fn validate_path(path: &Path) -> Result<Checked, CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => load_catalog_file(path)
            .map(|_| Checked::Catalog)
            .map_err(|e| CliError::in_file(path, e.to_string())),
        Some("toml") => {
            let text = read_text(path)?;
            let table: toml::Table = parse_toml(path, &text)?;
            if table.contains_key("diagram") {
                load_query(path).map(|_| Checked::Query)
            } else if table.contains_key("a") && table.contains_key("b") {
                let p: PlantSpec = parse_toml(path, &text)?;
                plant(&p)
                    .map(|_| Checked::System)
                    .map_err(|m| CliError::in_file(path, m))
            } else {
                load_diagram(path).map(|_| Checked::Diagram)
            }
        }
        _ => Err(CliError::in_file(
            path,
            "expected a .csv catalog or a .toml diagram, query or plant file",
        )),
    }
}
