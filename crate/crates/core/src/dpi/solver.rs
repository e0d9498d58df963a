use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::order::{Antichain, Element, Orientation, Poset};

use super::diagram::{CKind, CoDesignDiagram, Dst, Src, Witness};
use super::DpiError;

pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_iter: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Kleene iteration trace.
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Number of applications of the antichain map, including the one that
    /// confirmed the fixed point.
    pub iterations: usize,
    /// `1 +` the longest chain of the loop grid, when every feedback edge
    /// has a finite candidate set.
    pub chain_bound: Option<usize>,
    /// Iterates over (exposed resources, loop values), starting at bottom.
    pub iterates: Vec<Antichain>,
}

/// Minimal exposed resources with one witnessing assignment per point.
#[derive(Clone, Debug)]
pub struct Solution {
    pub front: Antichain,
    pub witnesses: Vec<Witness>,
    pub report: SolveReport,
}

impl Solution {
    pub fn antichain(&self) -> &Antichain {
        &self.front
    }

    pub fn is_infeasible(&self) -> bool {
        self.front.is_empty()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub v: Vec<f64>,
    pub choice: Vec<u32>,
}

fn lex(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let c = x.total_cmp(y);
        if c != Ordering::Equal {
            return c;
        }
    }
    a.len().cmp(&b.len())
}

fn dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Pareto-minimal states, ties resolved towards the smaller assignment.
pub(crate) fn prune(mut states: Vec<State>) -> Vec<State> {
    states.sort_by(|a, b| lex(&a.v, &b.v).then_with(|| a.choice.cmp(&b.choice)));
    let mut kept: Vec<State> = Vec::new();
    for s in states {
        if !kept.iter().any(|k| dominates(&k.v, &s.v)) {
            kept.push(s);
        }
    }
    kept
}

/// Exposed resources and loop outputs reachable for fixed `f` and loop
/// inputs `x`, with the feedback edges cut.
fn dag_front(d: &CoDesignDiagram, f: &[f64], x: &[f64], loops: &[usize]) -> Vec<State> {
    let n_edges = d.edges().len();
    let n_res = d.exposed_res().len();
    let loop_pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let slot_of = |dst: Dst| match dst {
        Dst::Edge(e) => e,
        Dst::Exposed(i) => n_edges + i,
    };
    let mut states = vec![State {
        v: vec![0.0; n_edges + n_res],
        choice: vec![u32::MAX; d.nodes().len()],
    }];
    for &k in &d.order {
        let node = &d.compiled[k];
        let mut next = Vec::new();
        for s in &states {
            let mut input = Vec::with_capacity(node.fun_src.len());
            let mut base = s.v.clone();
            for src in &node.fun_src {
                match *src {
                    Src::Exposed(i) => input.push(f[i]),
                    Src::Edge(e) => {
                        if let Some(&l) = loop_pos.get(&e) {
                            input.push(x[l]);
                        } else {
                            input.push(s.v[e]);
                            base[e] = 0.0;
                        }
                    }
                }
            }
            match &node.kind {
                CKind::Function(g) => {
                    let out = g.eval(&input);
                    let mut v = base;
                    for (j, dst) in node.res_dst.iter().enumerate() {
                        v[slot_of(*dst)] = out[j];
                    }
                    next.push(State {
                        v,
                        choice: s.choice.clone(),
                    });
                }
                CKind::Catalog(t) => {
                    for (i, prov) in t.prov.iter().enumerate() {
                        if !input.iter().zip(prov).all(|(need, have)| need <= have) {
                            continue;
                        }
                        let mut v = base.clone();
                        for (j, dst) in node.res_dst.iter().enumerate() {
                            v[slot_of(*dst)] = t.req[i][j];
                        }
                        let mut choice = s.choice.clone();
                        choice[k] = i as u32;
                        next.push(State { v, choice });
                    }
                }
            }
        }
        states = prune(next);
        if states.is_empty() {
            break;
        }
    }
    // project onto (exposed resources, loop outputs)
    let out = states
        .into_iter()
        .map(|s| {
            let mut v = s.v[n_edges..].to_vec();
            v.extend(loops.iter().map(|&e| s.v[e]));
            State { v, choice: s.choice }
        })
        .collect();
    prune(out)
}

fn key(x: &[f64]) -> Vec<u64> {
    x.iter().map(|v| v.to_bits()).collect()
}

fn to_antichain(poset: &Poset, states: &[State]) -> Antichain {
    Antichain::from_canonical(
        poset.clone(),
        Orientation::Minimal,
        states.iter().map(|s| Element::reals(&s.v)).collect(),
    )
}

/// Least fixed point of the antichain map of `d` at exposed functionality `f`.
pub fn solve_loop(d: &CoDesignDiagram, f: &Element) -> Result<Solution, DpiError> {
    solve_loop_with(d, f, &SolveOptions::default())
}

pub fn solve_loop_with(d: &CoDesignDiagram, f: &Element, opts: &SolveOptions) -> Result<Solution, DpiError> {
    let fv = d.fun_values(f)?;
    let loops = d.loop_indices();
    let n_res = d.exposed_res().len();
    let state_poset = Poset::reals_product(n_res + loops.len());
    let mut memo: HashMap<Vec<u64>, Arc<Vec<State>>> = HashMap::new();

    let bottom = State {
        v: vec![0.0; n_res + loops.len()],
        choice: vec![u32::MAX; d.nodes().len()],
    };
    let mut current = vec![bottom];
    let mut iterates = vec![to_antichain(&state_poset, &current)];
    let mut iterations = 0usize;
    loop {
        if iterations >= opts.max_iter {
            let n = iterates.len();
            return Err(DpiError::NoConvergence {
                max_iter: opts.max_iter,
                previous: Box::new(iterates[n.saturating_sub(2)].clone()),
                last: Box::new(iterates[n - 1].clone()),
            });
        }
        let mut missing: Vec<Vec<f64>> = Vec::new();
        for s in &current {
            let x = s.v[n_res..].to_vec();
            if !memo.contains_key(&key(&x)) && !missing.iter().any(|m| key(m) == key(&x)) {
                missing.push(x);
            }
        }
        let fresh: Vec<Vec<State>> = missing.par_iter().map(|x| dag_front(d, &fv, x, &loops)).collect();
        for (x, front) in missing.into_iter().zip(fresh) {
            memo.insert(key(&x), Arc::new(front));
        }
        let mut cand = Vec::new();
        for s in &current {
            let front = &memo[&key(&s.v[n_res..])];
            for t in front.iter() {
                let v = t.v.iter().zip(&s.v).map(|(a, b)| a.max(*b)).collect();
                cand.push(State {
                    v,
                    choice: t.choice.clone(),
                });
            }
        }
        let next = prune(cand);
        iterations += 1;
        let same = next.len() == current.len() && next.iter().zip(&current).all(|(a, b)| a.v == b.v);
        iterates.push(to_antichain(&state_poset, &next));
        current = next;
        if same {
            break;
        }
    }

    let projected = prune(
        current
            .into_iter()
            .map(|s| State {
                v: s.v[..n_res].to_vec(),
                choice: s.choice,
            })
            .collect(),
    );
    let witnesses = projected.iter().map(|s| d.witness_of(&s.choice)).collect();
    Ok(Solution {
        front: to_antichain(&d.resource_poset(), &projected),
        witnesses,
        report: SolveReport {
            iterations,
            chain_bound: d.loop_chain_length().map(|h| h + 1),
            iterates,
        },
    })
}
