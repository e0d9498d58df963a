use super::DpiError;

/// Finite set of admissible values on a port.
///
/// Values are rounded up onto the grid; anything above the last point
/// becomes `+inf`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(mut points: Vec<f64>) -> Result<Self, DpiError> {
        if points.is_empty() {
            return Err(DpiError::BadGrid("grid is empty".into()));
        }
        if points.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(DpiError::BadGrid("grid points must be finite and nonnegative".into()));
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        Ok(Self { points })
    }

    pub fn linear(lo: f64, hi: f64, n: usize) -> Result<Self, DpiError> {
        if n == 0 || hi < lo {
            return Err(DpiError::BadGrid(format!("invalid linear grid {lo}:{hi}:{n}")));
        }
        if n == 1 {
            return Grid::new(vec![lo]);
        }
        Grid::new((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
    }

    pub fn log(lo: f64, hi: f64, n: usize) -> Result<Self, DpiError> {
        if n == 0 || lo <= 0.0 || hi < lo {
            return Err(DpiError::BadGrid(format!("invalid log grid {lo}:{hi}:{n}")));
        }
        Grid::new(log_space(lo, hi, n))
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Smallest grid point `≥ v`, or `+inf`.
    pub fn ceil(&self, v: f64) -> f64 {
        let k = self.points.partition_point(|p| *p < v);
        self.points.get(k).copied().unwrap_or(f64::INFINITY)
    }
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..n)
                .map(|k| match k {
                    0 => lo,
                    _ if k == n - 1 => hi,
                    _ => 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64),
                })
                .collect()
        }
    }
}

/// Monotone map used for junction nodes.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    /// `offset + Σ w_i x_i` with nonnegative weights.
    Sum { weights: Vec<f64>, offset: f64 },
    /// `scale * Π x_i`.
    Product { scale: f64 },
    /// `max x_i`.
    Max,
    /// Copies each input to the output with the same index.
    Identity,
    /// Copies the single input to every output.
    Duplicate,
}

/// A node whose single implementation is a monotone function of its inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionBlock {
    kind: FunctionKind,
    fun_ports: Vec<String>,
    res_ports: Vec<String>,
    grid: Option<Grid>,
}

impl FunctionBlock {
    pub fn new<S: AsRef<str>>(
        kind: FunctionKind,
        fun_ports: &[S],
        res_ports: &[S],
        grid: Option<Grid>,
    ) -> Result<Self, DpiError> {
        let fun: Vec<String> = fun_ports.iter().map(|s| s.as_ref().to_string()).collect();
        let res: Vec<String> = res_ports.iter().map(|s| s.as_ref().to_string()).collect();
        let (m, n) = (fun.len(), res.len());
        let ok = match &kind {
            FunctionKind::Sum { weights, offset } => {
                if weights.iter().chain([offset]).any(|w| !w.is_finite() || *w < 0.0) {
                    return Err(DpiError::Arity("sum weights and offset must be nonnegative".into()));
                }
                weights.len() == m && n == 1
            }
            FunctionKind::Product { scale } => {
                if !scale.is_finite() || *scale < 0.0 {
                    return Err(DpiError::Arity("product scale must be nonnegative".into()));
                }
                m >= 1 && n == 1
            }
            FunctionKind::Max => m >= 1 && n == 1,
            FunctionKind::Identity => m == n,
            FunctionKind::Duplicate => m == 1 && n >= 1,
        };
        if !ok {
            return Err(DpiError::Arity(format!(
                "{kind:?} does not accept {m} inputs and {n} outputs"
            )));
        }
        Ok(Self {
            kind,
            fun_ports: fun,
            res_ports: res,
            grid,
        })
    }

    /// Plain summing junction `Σ x_i`.
    pub fn sum<S: AsRef<str>>(inputs: &[S], output: &str, grid: Option<Grid>) -> Result<Self, DpiError> {
        let fun: Vec<&str> = inputs.iter().map(|s| s.as_ref()).collect();
        let weights = vec![1.0; fun.len()];
        FunctionBlock::new(FunctionKind::Sum { weights, offset: 0.0 }, &fun, &[output], grid)
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn fun_ports(&self) -> &[String] {
        &self.fun_ports
    }

    pub fn res_ports(&self) -> &[String] {
        &self.res_ports
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }

    /// Outputs for the given inputs, rounded up onto the grid.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        let raw: Vec<f64> = match &self.kind {
            FunctionKind::Sum { weights, offset } => {
                vec![weights
                    .iter()
                    .zip(x)
                    .fold(*offset, |acc, (w, v)| if *w == 0.0 { acc } else { acc + w * v })]
            }
            FunctionKind::Product { scale } => {
                if x.contains(&0.0) {
                    vec![0.0]
                } else {
                    vec![x.iter().fold(*scale, |acc, v| acc * v)]
                }
            }
            FunctionKind::Max => vec![x.iter().copied().fold(0.0, f64::max)],
            FunctionKind::Identity => x.to_vec(),
            FunctionKind::Duplicate => vec![x[0]; self.res_ports.len()],
        };
        match &self.grid {
            Some(g) => raw.into_iter().map(|v| g.ceil(v)).collect(),
            None => raw,
        }
    }
}
