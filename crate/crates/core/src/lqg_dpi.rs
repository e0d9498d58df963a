//! LQG analyses packaged as finite design problems.
//!
//! An implementation is a grid point (α, noise scalings, and the
//! variant's timing parameter). It provides the noise levels it was
//! designed for and requires the resulting tracking error and effort.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dpi::{log_space, Dpi, DpiError, Implementation};
use crate::lqg::{
    ct_performance, delayed_performance, discretize, dt_performance, intermittent_performance, CtLqgSystem, DelaySpec,
    LqgError, Metrics,
};
use crate::order::{Antichain, Element, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LqgVariant {
    /// `lqg_ct`
    Continuous,
    /// `lqg_ct_delay`
    Delayed,
    /// `lqg_digital`
    Digital,
    /// `lqg_digital_drops`
    DigitalDrops,
}

impl LqgVariant {
    pub fn from_kind(kind: &str) -> Option<Self> {
        match kind {
            "lqg_ct" => Some(Self::Continuous),
            "lqg_ct_delay" => Some(Self::Delayed),
            "lqg_digital" => Some(Self::Digital),
            "lqg_digital_drops" => Some(Self::DigitalDrops),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Continuous => "lqg_ct",
            Self::Delayed => "lqg_ct_delay",
            Self::Digital => "lqg_digital",
            Self::DigitalDrops => "lqg_digital_drops",
        }
    }

    fn sampled(&self) -> bool {
        matches!(self, Self::Digital | Self::DigitalDrops)
    }
}

pub const DEFAULT_ALPHA_RANGE: (f64, f64, usize) = (1e-4, 1e4, 25);
pub const DEFAULT_FREQUENCY_RANGE: (f64, f64, usize) = (0.2, 50.0, 20);

/// Grids and plant template for an LQG design problem.
///
/// `W = w·plant.w` and `V = v·plant.v` for each `w` in `w_grid` and `v` in
/// `v_grid`; `plant.alpha` is ignored.
#[derive(Clone, Debug)]
pub struct LqgBlockSpec {
    pub plant: CtLqgSystem,
    pub variant: LqgVariant,
    pub alpha_grid: Vec<f64>,
    pub w_grid: Vec<f64>,
    pub v_grid: Vec<f64>,
    /// Observation rates in Hz; sampled variants use `δ = 1/f`.
    pub frequency_grid: Vec<f64>,
    /// Total delay `d_obs + d_comp` in seconds.
    pub delay_grid: Vec<f64>,
    pub drop_grid: Vec<f64>,
    /// Moves observation noise to the resource side as precision `1/v`.
    pub v_as_precision: bool,
}

impl LqgBlockSpec {
    /// Spec with the default α and frequency grids and unit noise scalings.
    pub fn new(plant: CtLqgSystem, variant: LqgVariant) -> Self {
        let (alo, ahi, an) = DEFAULT_ALPHA_RANGE;
        let (flo, fhi, fnum) = DEFAULT_FREQUENCY_RANGE;
        Self {
            plant,
            variant,
            alpha_grid: log_space(alo, ahi, an),
            w_grid: vec![1.0],
            v_grid: vec![1.0],
            frequency_grid: log_space(flo, fhi, fnum),
            delay_grid: vec![0.0],
            drop_grid: vec![0.0],
            v_as_precision: false,
        }
    }

    pub fn validate(&self) -> Result<(), DpiError> {
        let bad = |m: String| Err(DpiError::BadGrid(m));
        let grids: [(&str, &Vec<f64>, bool); 6] = [
            ("alpha", &self.alpha_grid, true),
            ("w", &self.w_grid, false),
            ("v", &self.v_grid, true),
            ("frequency", &self.frequency_grid, true),
            ("delay", &self.delay_grid, false),
            ("drop", &self.drop_grid, false),
        ];
        for (name, g, positive) in grids {
            if g.is_empty() {
                return bad(format!("{name} grid is empty"));
            }
            if g.windows(2).any(|w| !(w[0] < w[1])) {
                return bad(format!("{name} grid must be strictly ascending"));
            }
            if g.iter().any(|x| !x.is_finite() || *x < 0.0 || (positive && *x == 0.0)) {
                return bad(format!("{name} grid has out-of-range values"));
            }
        }
        if self.drop_grid.iter().any(|p| *p > 1.0) {
            return bad("drop probabilities must lie in [0, 1]".into());
        }
        self.plant.validate().map_err(lqg_err)?;
        Ok(())
    }

    pub fn fun_ports(&self) -> Vec<&'static str> {
        let mut f = vec!["w"];
        if !self.v_as_precision {
            f.push("v");
        }
        match self.variant {
            LqgVariant::Delayed => f.push("delay"),
            LqgVariant::DigitalDrops => f.push("drop"),
            _ => {}
        }
        f
    }

    pub fn res_ports(&self) -> Vec<&'static str> {
        let mut r = vec!["tracking_error", "control_effort"];
        if self.variant.sampled() {
            r.push("frequency");
        }
        if self.v_as_precision {
            r.push("precision");
        }
        r
    }
}

fn lqg_err(e: LqgError) -> DpiError {
    DpiError::Unsupported(format!("LQG plant: {e}"))
}

#[derive(Clone, Copy, Debug)]
struct Point {
    alpha: f64,
    w: f64,
    v: f64,
    freq: f64,
    delay: f64,
    drop: f64,
}

fn points(spec: &LqgBlockSpec) -> Vec<Point> {
    let freqs: &[f64] = if spec.variant.sampled() {
        &spec.frequency_grid
    } else {
        &[0.0]
    };
    let delays: &[f64] = if spec.variant == LqgVariant::Delayed {
        &spec.delay_grid
    } else {
        &[0.0]
    };
    let drops: &[f64] = if spec.variant == LqgVariant::DigitalDrops {
        &spec.drop_grid
    } else {
        &[0.0]
    };
    let mut out = Vec::new();
    for &alpha in &spec.alpha_grid {
        for &w in &spec.w_grid {
            for &v in &spec.v_grid {
                for &freq in freqs {
                    for &delay in delays {
                        for &drop in drops {
                            out.push(Point {
                                alpha,
                                w,
                                v,
                                freq,
                                delay,
                                drop,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn evaluate(spec: &LqgBlockSpec, pt: &Point) -> Option<Metrics> {
    let p = &spec.plant;
    let sys = CtLqgSystem {
        w: &p.w * pt.w,
        v: &p.v * pt.v,
        alpha: pt.alpha,
        ..p.clone()
    };
    let m = |p_track, p_effort| Metrics { p_track, p_effort };
    match spec.variant {
        LqgVariant::Continuous => ct_performance(&sys).ok().map(|s| m(s.p_track, s.p_effort)),
        LqgVariant::Delayed => delayed_performance(
            &sys,
            &DelaySpec {
                d_obs: pt.delay,
                d_comp: 0.0,
            },
        )
        .ok()
        .map(|s| m(s.p_track, s.p_effort)),
        LqgVariant::Digital => {
            let d = discretize(&sys, 1.0 / pt.freq).ok()?;
            dt_performance(&d).ok().map(|s| m(s.p_track, s.p_effort))
        }
        LqgVariant::DigitalDrops => {
            let d = discretize(&sys, 1.0 / pt.freq).ok()?;
            intermittent_performance(&d, pt.drop).ok()?.metrics()
        }
    }
    .filter(|x| x.p_track.is_finite() && x.p_effort.is_finite() && x.p_track >= 0.0 && x.p_effort >= 0.0)
}

fn label(spec: &LqgBlockSpec, pt: &Point) -> String {
    let mut s = format!("a={:e},w={:e},v={:e}", pt.alpha, pt.w, pt.v);
    if spec.variant.sampled() {
        s += &format!(",f={:e}", pt.freq);
    }
    match spec.variant {
        LqgVariant::Delayed => s += &format!(",d={:e}", pt.delay),
        LqgVariant::DigitalDrops => s += &format!(",p={:e}", pt.drop),
        _ => {}
    }
    s
}

/// Design problem of the spec's variant; grid points where no stabilizing
/// design exists are left out.
pub fn make_lqg_dpi(spec: &LqgBlockSpec) -> Result<Dpi, DpiError> {
    spec.validate()?;
    let pts = points(spec);
    let metrics: Vec<Option<Metrics>> = pts.par_iter().map(|p| evaluate(spec, p)).collect();
    let mut impls = Vec::new();
    for (pt, m) in pts.iter().zip(metrics) {
        let Some(m) = m else { continue };
        let mut prov = vec![pt.w];
        if !spec.v_as_precision {
            prov.push(pt.v);
        }
        match spec.variant {
            LqgVariant::Delayed => prov.push(pt.delay),
            LqgVariant::DigitalDrops => prov.push(pt.drop),
            _ => {}
        }
        let mut req = vec![m.p_track, m.p_effort];
        if spec.variant.sampled() {
            req.push(pt.freq);
        }
        if spec.v_as_precision {
            req.push(1.0 / pt.v);
        }
        impls.push(Implementation::new(
            label(spec, pt),
            Element::reals(&prov),
            Element::reals(&req),
        ));
    }
    if impls.is_empty() {
        return Err(DpiError::EmptyDpi);
    }
    let fun = spec.fun_ports();
    let res = spec.res_ports();
    Dpi::new(Poset::reals_product(fun.len()), Poset::reals_product(res.len()), impls)?.with_ports(&fun, &res)
}

/// Minimal resources at functionality `f`, in canonical order.
pub fn pareto_front(dpi: &Dpi, f: &[f64]) -> Result<Antichain, DpiError> {
    dpi.h(&Element::reals(f))
}

/// Maximal functionalities available within resources `r`.
pub fn pareto_front_dual(dpi: &Dpi, r: &[f64]) -> Result<Antichain, DpiError> {
    dpi.h_prime(&Element::reals(r))
}

/// Heading dynamics `θ̇ = ω`, `ω̇ = τ/I + ẇ`, observing `θ`.
///
/// `weight_heading` puts `q₀` on `θ` (otherwise on `ω`);
/// `noise_over_inertia` uses `W = diag(0, 1/I)` (otherwise `diag(0, 1)`).
pub fn heading_plant(
    inertia: f64,
    q0: f64,
    r0: f64,
    weight_heading: bool,
    noise_over_inertia: bool,
) -> Result<CtLqgSystem, LqgError> {
    if !(inertia > 0.0) {
        return Err(LqgError::BadParameter(format!(
            "inertia must be positive, got {inertia}"
        )));
    }
    let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let b = DMatrix::from_row_slice(2, 1, &[0.0, 1.0 / inertia]);
    let c = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
    let wn = if noise_over_inertia { 1.0 / inertia } else { 1.0 };
    let w = DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, wn]);
    let q0m = if weight_heading {
        DMatrix::from_row_slice(2, 2, &[q0, 0.0, 0.0, 0.0])
    } else {
        DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, q0])
    };
    CtLqgSystem::new(
        a,
        b,
        c,
        w,
        DMatrix::from_element(1, 1, 1.0),
        q0m,
        DMatrix::from_element(1, 1, r0),
        1.0,
    )
}
