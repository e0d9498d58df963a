//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use codesign_core::dpi::{CoDesignDiagram, DiagramBuilder, Dpi, FunctionBlock, Grid};
use codesign_core::lqg::{ct_performance, dt_performance, CtLqgSystem, DtLqgSystem, Metrics};
use codesign_core::Element;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod checks;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.random_range(lo..hi))
}

/// `G Gᵀ + eps·I` with `G` uniform in `[-1, 1]`.
pub fn psd(rng: &mut ChaCha8Rng, n: usize, eps: f64) -> DMatrix<f64> {
    let g = uniform(rng, n, n, -1.0, 1.0);
    let m = &g * g.transpose() + DMatrix::identity(n, n) * eps;
    (&m + m.transpose()) * 0.5
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Random stabilizable/detectable plant with `n` states and a solvable LQG problem.
pub fn random_ct(rng: &mut ChaCha8Rng, n: usize) -> CtLqgSystem {
    loop {
        let m = rng.random_range(1..=n);
        let p = rng.random_range(1..=n);
        let a = uniform(rng, n, n, -1.0, 1.0);
        let b = uniform(rng, n, m, -1.0, 1.0);
        let c = uniform(rng, p, n, -1.0, 1.0);
        let w = psd(rng, n, 0.05);
        let v = psd(rng, p, 0.1);
        let q0 = psd(rng, n, 0.1);
        let r0 = psd(rng, m, 0.1);
        let alpha = log_uniform(rng, 1e-2, 1e2);
        if let Ok(s) = CtLqgSystem::new(a, b, c, w, v, q0, r0, alpha) {
            if ct_performance(&s).is_ok() {
                return s;
            }
        }
    }
}

/// Random discrete plant; `Q = α·Q₀`, `R = R₀/α` with metric weights `Q₀, R₀`.
#[derive(Clone, Debug)]
pub struct RandomDt {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub w: DMatrix<f64>,
    pub v: DMatrix<f64>,
    pub q0: DMatrix<f64>,
    pub r0: DMatrix<f64>,
}

impl RandomDt {
    pub fn system(&self, alpha: f64) -> Option<DtLqgSystem> {
        self.system_with(alpha, &self.w, &self.v)
    }

    pub fn system_with(&self, alpha: f64, w: &DMatrix<f64>, v: &DMatrix<f64>) -> Option<DtLqgSystem> {
        DtLqgSystem::new(
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            w.clone(),
            v.clone(),
            &self.q0 * alpha,
            &self.r0 / alpha,
        )
        .ok()?
        .with_metric_weights(self.q0.clone(), self.r0.clone())
        .ok()
    }

    pub fn metrics(&self, alpha: f64, w: &DMatrix<f64>, v: &DMatrix<f64>) -> Option<Metrics> {
        let s = dt_performance(&self.system_with(alpha, w, v)?).ok()?;
        Some(Metrics {
            p_track: s.p_track,
            p_effort: s.p_effort,
        })
    }
}

pub fn random_dt(rng: &mut ChaCha8Rng, n: usize) -> RandomDt {
    loop {
        let m = rng.random_range(1..=n);
        let p = rng.random_range(1..=n);
        let r = RandomDt {
            a: uniform(rng, n, n, -1.2, 1.2),
            b: uniform(rng, n, m, -1.0, 1.0),
            c: uniform(rng, p, n, -1.0, 1.0),
            w: psd(rng, n, 0.05),
            v: psd(rng, p, 0.1),
            q0: psd(rng, n, 0.1),
            r0: psd(rng, m, 0.1),
        };
        if r.system(1.0).and_then(|s| dt_performance(&s).ok()).is_some() {
            return r;
        }
    }
}

pub fn fro(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

/// `y ≼ x` up to a relative tolerance: smallest eigenvalue of `x − y`.
pub fn loewner_leq(y: &DMatrix<f64>, x: &DMatrix<f64>, tol: f64) -> bool {
    let d = x - y;
    let d = (&d + d.transpose()) * 0.5;
    let min = d.symmetric_eigenvalues().min();
    min >= -tol * (1.0 + fro(x) + fro(y))
}

/// `a ≤ b` up to relative tolerance.
pub fn le_tol(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * (1.0 + a.abs().max(b.abs()))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

/// Scaling-and-squaring Taylor exponential.
pub fn expm_taylor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.abs().row_sum().max();
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let x = m / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=24 {
        term = &term * &x / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

const GL_X: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_W: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Composite 5-point Gauss–Legendre rule for matrix integrands.
pub fn gauss_legendre<F>(f: F, lo: f64, hi: f64, panels: usize, rows: usize, cols: usize) -> DMatrix<f64>
where
    F: Fn(f64) -> DMatrix<f64>,
{
    let mut acc = DMatrix::zeros(rows, cols);
    let h = (hi - lo) / panels as f64;
    for p in 0..panels {
        let (a, b) = (lo + p as f64 * h, lo + (p + 1) as f64 * h);
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        for (x, w) in GL_X.iter().zip(GL_W) {
            acc += f(mid + half * x) * (w * half);
        }
    }
    acc
}

/// `(Q_d, R_d, W_d)` by direct quadrature of the sampled-data integrals.
pub fn quadrature_discretization(sys: &CtLqgSystem, delta: f64) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let (n, m) = (sys.a.nrows(), sys.b.ncols());
    let q = sys.q();
    let r = sys.r();
    let e = |s: f64| expm_taylor(&(&sys.a * s));
    let gamma = |s: f64| gauss_legendre(|t| e(t) * &sys.b, 0.0, s, 6, n, m);
    let q_d = gauss_legendre(|s| e(s).transpose() * &q * e(s), 0.0, delta, 12, n, n);
    let r_d = gauss_legendre(
        |s| {
            let g = gamma(s);
            g.transpose() * &q * &g + &r
        },
        0.0,
        delta,
        12,
        m,
        m,
    );
    let w_d = gauss_legendre(|s| e(s) * &sys.w * e(s).transpose(), 0.0, delta, 12, n, n);
    (q_d, r_d, w_d)
}

/// Column-major `vec`.
fn vec_of(m: &DMatrix<f64>) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_column_slice(m.as_slice())
}

/// `AX + XAᵀ + Q = 0` via the Kronecker-sum linear system.
pub fn kron_lyap(a: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let i = DMatrix::<f64>::identity(n, n);
    let k = i.kronecker(a) + a.kronecker(&i);
    let x = k.lu().solve(&(-vec_of(q))).expect("nonsingular Kronecker sum");
    DMatrix::from_column_slice(n, n, x.as_slice())
}

/// `X = AXAᵀ + Q` via `(I − A⊗A) vec X = vec Q`.
pub fn kron_stein(a: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let k = DMatrix::<f64>::identity(n * n, n * n) - a.kronecker(a);
    let x = k.lu().solve(&vec_of(q)).expect("nonsingular");
    DMatrix::from_column_slice(n, n, x.as_slice())
}

pub const ALPHA_LO: f64 = 1e-3;
pub const ALPHA_HI: f64 = 1e3;

/// Checks that the α-parametrised front of `better` dominates each point of
/// `worse`: some α reaches tracking ≤ t with effort ≤ e.
///
/// Along α the tracking error decreases and the effort increases, so the
/// cheapest α meeting `t` is found by bisection in `log α`.
pub fn front_dominates<F>(better: F, worse: &[Metrics], tol: f64) -> Vec<Metrics>
where
    F: Fn(f64) -> Option<Metrics>,
{
    let track = |a: f64| better(a).map(|m| m.p_track).unwrap_or(f64::INFINITY);
    // shrink the bracket to where the Riccati solves succeed
    let step = 10f64.powf(0.25);
    let (mut a_lo, mut a_hi) = (ALPHA_LO, ALPHA_HI);
    while better(a_hi).is_none() && a_hi > a_lo {
        a_hi /= step;
    }
    while better(a_lo).is_none() && a_lo < a_hi {
        a_lo *= step;
    }
    let mut bad = Vec::new();
    for w in worse {
        let t = w.p_track * (1.0 + tol) + tol * 1e-6;
        let alpha = if track(a_lo) <= t {
            Some(a_lo)
        } else if track(a_hi) > t {
            None
        } else {
            let (mut lo, mut hi) = (a_lo.ln(), a_hi.ln());
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if track(mid.exp()) <= t {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(hi.exp())
        };
        let ok = alpha
            .and_then(&better)
            .is_some_and(|m| le_tol(m.p_effort, w.p_effort, tol));
        if !ok {
            bad.push(*w);
        }
    }
    bad
}

pub fn ct_metrics(sys: &CtLqgSystem) -> Option<Metrics> {
    ct_performance(sys).ok().map(|s| Metrics {
        p_track: s.p_track,
        p_effort: s.p_effort,
    })
}

/// Random diagram over small integer catalogs.
///
/// Catalog nodes `c0 → c1 → …` are chained by their first ports; `loops`
/// feedback edges run from a node to itself or an earlier one, some through
/// a gridded summing junction. The first functionality and last resource
/// are exposed.
pub fn random_diagram(rng: &mut ChaCha8Rng, loops: usize, max_impls: usize) -> CoDesignDiagram {
    let nodes = rng.random_range(2..=4usize);
    let mut extra_fun: Vec<Vec<String>> = vec![Vec::new(); nodes];
    let mut extra_res: Vec<Vec<String>> = vec![Vec::new(); nodes];
    let mut edges: Vec<(String, bool)> = Vec::new();
    let mut sums: Vec<(String, FunctionBlock)> = Vec::new();
    for l in 0..loops {
        let j = rng.random_range(0..nodes);
        let i = rng.random_range(0..=j);
        let port = format!("l{l}");
        extra_fun[i].push(port.clone());
        if rng.random_bool(0.3) {
            // second contribution from another node, summed and rounded up
            let k = rng.random_range(0..nodes);
            let (pa, pb) = (format!("l{l}a"), format!("l{l}b"));
            extra_res[j].push(pa.clone());
            extra_res[k].push(pb.clone());
            let grid = Grid::new((0..=10).map(|x| x as f64 * 1.5).collect()).unwrap();
            let name = format!("s{l}");
            sums.push((name.clone(), FunctionBlock::sum(&["x", "y"], "z", Some(grid)).unwrap()));
            edges.push((format!("c{j}.{pa} -> {name}.x"), false));
            edges.push((format!("c{k}.{pb} -> {name}.y"), false));
            edges.push((format!("{name}.z -> c{i}.{port}"), true));
        } else {
            extra_res[j].push(port.clone());
            edges.push((format!("c{j}.{port} -> c{i}.{port}"), true));
        }
    }
    let mut b = DiagramBuilder::new();
    for c in 0..nodes {
        let mut fun = vec!["f".to_string()];
        fun.extend(extra_fun[c].iter().cloned());
        let mut res = vec!["r".to_string()];
        res.extend(extra_res[c].iter().cloned());
        let k = rng.random_range(1..=max_impls);
        let rows = (0..k)
            .map(|i| {
                (
                    format!("i{i}"),
                    fun.iter().map(|_| rng.random_range(0..=5) as f64).collect(),
                    res.iter().map(|_| rng.random_range(0..=5) as f64).collect(),
                )
            })
            .collect();
        b = b.catalog(format!("c{c}"), Dpi::from_reals(&fun, &res, rows).unwrap());
    }
    for (name, f) in sums {
        b = b.function(name, f);
    }
    for c in 0..nodes - 1 {
        b = b.connect(format!("c{c}.r -> c{}.f", c + 1));
    }
    for (e, fb) in edges {
        b = if fb { b.feedback(e) } else { b.connect(e) };
    }
    b.expose_fun("c0.f")
        .expose_res(format!("c{}.r", nodes - 1))
        .build()
        .expect("generated diagram is well formed")
}

pub fn random_query(rng: &mut ChaCha8Rng) -> Element {
    Element::reals(&[rng.random_range(0..=5) as f64])
}
