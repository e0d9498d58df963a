use crate::order::{pareto_min, Element, Poset};

use super::design::{Dpi, Implementation};
use super::diagram::{CKind, CoDesignDiagram, Src, Witness};
use super::DpiError;

/// Largest implementation product the exhaustive solver accepts.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

/// Exhaustive answer: minimal exposed resources with witnesses.
#[derive(Clone, Debug)]
pub struct BruteForceSolution {
    pub front: crate::order::Antichain,
    pub witnesses: Vec<Witness>,
}

struct Odometer {
    sizes: Vec<u32>,
    digits: Vec<u32>,
    done: bool,
}

impl Odometer {
    fn new(sizes: Vec<u32>) -> Self {
        let done = sizes.contains(&0);
        let digits = vec![0; sizes.len()];
        Self { sizes, digits, done }
    }

    /// Advances with the last digit fastest, so assignments come out in
    /// lexicographic order.
    fn advance(&mut self) {
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.sizes[i] {
                return;
            }
            self.digits[i] = 0;
        }
        self.done = true;
    }
}

fn product_size(d: &CoDesignDiagram, nodes: &[usize]) -> u128 {
    nodes
        .iter()
        .map(|&k| match &d.compiled[k].kind {
            CKind::Catalog(t) => t.labels.len() as u128,
            CKind::Function(_) => 1,
        })
        .product()
}

fn catalog_sizes(d: &CoDesignDiagram, nodes: &[usize]) -> Vec<u32> {
    nodes
        .iter()
        .map(|&k| match &d.compiled[k].kind {
            CKind::Catalog(t) => t.labels.len() as u32,
            CKind::Function(_) => 1,
        })
        .collect()
}

/// Every wired constraint holds for the assignment.
///
/// Exposed functionalities are checked only when `f` is given.
fn feasible(d: &CoDesignDiagram, f: Option<&[f64]>, choice: &[u32], vals: &[Vec<f64>]) -> bool {
    for (k, c) in d.compiled.iter().enumerate() {
        if let CKind::Catalog(t) = &c.kind {
            let prov = &t.prov[choice[k] as usize];
            for (j, s) in c.fun_src.iter().enumerate() {
                let need = match *s {
                    Src::Exposed(i) => match f {
                        Some(f) => f[i],
                        None => continue,
                    },
                    Src::Edge(e) => {
                        let (a, p) = d.edge_src[e];
                        vals[a][p]
                    }
                };
                if !(need <= prov[j]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Enumerates every catalog assignment, keeps the feasible ones and
/// Pareto-minimizes the exposed resources.
pub fn brute_force_solve(d: &CoDesignDiagram, f: &Element) -> Result<BruteForceSolution, DpiError> {
    let fv = d.fun_values(f)?;
    let cats = d.catalog_nodes();
    let total = product_size(d, &cats);
    if total > BRUTE_FORCE_LIMIT {
        return Err(DpiError::TooLarge(total));
    }
    let mut odo = Odometer::new(catalog_sizes(d, &cats));
    let mut choice = vec![u32::MAX; d.nodes().len()];
    // (point, assignment) pairs, kept minimal as we go
    let mut kept: Vec<(Vec<f64>, Vec<u32>)> = Vec::new();
    while !odo.done {
        for (i, &k) in cats.iter().enumerate() {
            choice[k] = odo.digits[i];
        }
        let vals = d.port_values(&fv, &choice);
        if feasible(d, Some(&fv), &choice, &vals) {
            let r = d.exposed_values(&vals);
            let covered = kept.iter().any(|(p, _)| p.iter().zip(&r).all(|(a, b)| a <= b));
            if !covered {
                kept.retain(|(p, _)| !r.iter().zip(p).all(|(a, b)| a <= b));
                kept.push((r, choice.clone()));
            }
        }
        odo.advance();
    }
    kept.sort_by(|a, b| {
        for (x, y) in a.0.iter().zip(&b.0) {
            let c = x.total_cmp(y);
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    });
    let front = pareto_min(
        &d.resource_poset(),
        kept.iter().map(|(p, _)| Element::reals(p)).collect(),
    )?;
    let witnesses = kept.iter().map(|(_, c)| d.witness_of(c)).collect();
    Ok(BruteForceSolution { front, witnesses })
}

/// The whole diagram as one finite design problem.
///
/// Implementations are the internally feasible assignments; `prov` reads
/// the catalog values behind the exposed functionality ports. Exposed
/// functionality ports must sit on catalog nodes.
pub fn compile_to_dpi(d: &CoDesignDiagram) -> Result<(Dpi, Vec<Witness>), DpiError> {
    let mut fun_at = Vec::new();
    for p in d.exposed_fun() {
        let k = d.nodes().iter().position(|n| n.name == p.node).unwrap();
        match &d.compiled[k].kind {
            CKind::Catalog(_) => {
                let j = d.nodes()[k]
                    .block
                    .fun_ports()
                    .iter()
                    .position(|q| *q == p.port)
                    .unwrap();
                fun_at.push((k, j));
            }
            CKind::Function(_) => {
                return Err(DpiError::Unsupported(format!(
                    "exposed functionality {p} sits on a function node; the dual query needs catalog ports"
                )))
            }
        }
    }
    let cats = d.catalog_nodes();
    let total = product_size(d, &cats);
    if total > BRUTE_FORCE_LIMIT {
        return Err(DpiError::TooLarge(total));
    }
    let zeros = vec![0.0; d.exposed_fun().len()];
    let mut odo = Odometer::new(catalog_sizes(d, &cats));
    let mut choice = vec![u32::MAX; d.nodes().len()];
    let mut impls = Vec::new();
    let mut witnesses = Vec::new();
    while !odo.done {
        for (i, &k) in cats.iter().enumerate() {
            choice[k] = odo.digits[i];
        }
        let vals = d.port_values(&zeros, &choice);
        if feasible(d, None, &choice, &vals) {
            let prov: Vec<f64> = fun_at
                .iter()
                .map(|&(k, j)| match &d.compiled[k].kind {
                    CKind::Catalog(t) => t.prov[choice[k] as usize][j],
                    CKind::Function(_) => unreachable!(),
                })
                .collect();
            let w = d.witness_of(&choice);
            impls.push(Implementation::new(
                w.to_string(),
                Element::reals(&prov),
                Element::reals(&d.exposed_values(&vals)),
            ));
            witnesses.push(w);
        }
        odo.advance();
    }
    let fun_names: Vec<String> = d.exposed_fun().iter().map(|p| p.to_string()).collect();
    let res_names: Vec<String> = d.exposed_res().iter().map(|p| p.to_string()).collect();
    let dpi = Dpi::new(
        Poset::reals_product(fun_names.len()),
        Poset::reals_product(res_names.len()),
        impls,
    )?
    .with_ports(&fun_names, &res_names)?;
    Ok((dpi, witnesses))
}
