use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::hermitian::HermitianPoint;
use super::OrderError;

/// A finite labeled set with an explicit order relation.
///
/// The relation is stored as its reflexive-transitive closure.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Builds the poset generated by `relations`, given as `(smaller, larger)` pairs.
    pub fn new<S: AsRef<str>>(labels: &[S], relations: &[(S, S)]) -> Result<Self, OrderError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let index = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| OrderError::UnknownLabel(s.to_string()))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let (i, j) = (index(a.as_ref())?, index(b.as_ref())?);
            leq[i][j] = true;
        }
        // transitive closure (Warshall)
        #[allow(clippy::needless_range_loop)]
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(OrderError::NotAntisymmetric(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(Self { labels, leq })
    }

    /// A finite chain `labels[0] < labels[1] < ...`.
    pub fn chain<S: AsRef<str>>(labels: &[S]) -> Result<Self, OrderError> {
        let rel: Vec<(&str, &str)> = labels.windows(2).map(|w| (w[0].as_ref(), w[1].as_ref())).collect();
        let names: Vec<&str> = labels.iter().map(|s| s.as_ref()).collect();
        FinitePoset::new(&names, &rel)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq_index(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq[i][j]))
    }

    fn greatest(&self) -> Option<usize> {
        (0..self.len()).find(|&i| (0..self.len()).all(|j| self.leq[j][i]))
    }

    fn lub(&self, i: usize, j: usize) -> Option<usize> {
        let uppers: Vec<usize> = (0..self.len()).filter(|&k| self.leq[i][k] && self.leq[j][k]).collect();
        uppers.iter().copied().find(|&u| uppers.iter().all(|&v| self.leq[u][v]))
    }

    fn glb(&self, i: usize, j: usize) -> Option<usize> {
        let lowers: Vec<usize> = (0..self.len()).filter(|&k| self.leq[k][i] && self.leq[k][j]).collect();
        lowers.iter().copied().find(|&l| lowers.iter().all(|&v| self.leq[v][l]))
    }
}

/// Order structures used throughout the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Poset {
    /// Extended nonnegative reals `[0, +inf]`.
    Reals,
    /// Finite labeled set with an explicit order.
    Finite(Arc<FinitePoset>),
    /// Componentwise product.
    Product(Vec<Poset>),
    /// Same carrier, reversed order.
    Opposite(Box<Poset>),
    /// Hermitian `n x n` matrices under the Loewner order.
    Hermitian(usize),
}

/// A carrier element of some [`Poset`].
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Real(f64),
    Label(usize),
    Tuple(Vec<Element>),
    Matrix(HermitianPoint),
}

impl Element {
    /// Tuple of reals, the common case for ports.
    pub fn reals(values: &[f64]) -> Element {
        Element::Tuple(values.iter().map(|&v| Element::Real(v)).collect())
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Element::Real(v) => Some(*v),
            _ => None,
        }
    }

    /// Flattens a tuple of reals; `None` if any component is not a real.
    pub fn to_reals(&self) -> Option<Vec<f64>> {
        match self {
            Element::Real(v) => Some(vec![*v]),
            Element::Tuple(items) => items.iter().map(Element::as_real).collect(),
            _ => None,
        }
    }

    /// Total order used to store antichains canonically.
    pub fn canonical_cmp(&self, other: &Element) -> Ordering {
        fn rank(e: &Element) -> u8 {
            match e {
                Element::Real(_) => 0,
                Element::Label(_) => 1,
                Element::Tuple(_) => 2,
                Element::Matrix(_) => 3,
            }
        }
        match (self, other) {
            (Element::Real(a), Element::Real(b)) => a.total_cmp(b),
            (Element::Label(a), Element::Label(b)) => a.cmp(b),
            (Element::Tuple(a), Element::Tuple(b)) => {
                for (x, y) in a.iter().zip(b) {
                    let c = x.canonical_cmp(y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                a.len().cmp(&b.len())
            }
            (Element::Matrix(a), Element::Matrix(b)) => a.canonical_cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Real(v) => write!(f, "{v}"),
            Element::Label(i) => write!(f, "#{i}"),
            Element::Tuple(items) => {
                write!(f, "(")?;
                for (k, e) in items.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            Element::Matrix(m) => write!(f, "{m}"),
        }
    }
}

impl Poset {
    /// `R̄≥0^n` as a product poset.
    pub fn reals_product(n: usize) -> Poset {
        Poset::Product(vec![Poset::Reals; n])
    }

    pub fn opposite(self) -> Poset {
        match self {
            Poset::Opposite(inner) => *inner,
            p => Poset::Opposite(Box::new(p)),
        }
    }

    /// Checks that `e` lies in the carrier.
    pub fn check(&self, e: &Element) -> Result<(), OrderError> {
        self.check_at(e, "")
    }

    fn check_at(&self, e: &Element, path: &str) -> Result<(), OrderError> {
        match (self, e) {
            (Poset::Reals, Element::Real(v)) => {
                if v.is_nan() || *v < 0.0 {
                    Err(OrderError::NotInCarrier {
                        component: component_name(path),
                        reason: format!("{v} is not an extended nonnegative real"),
                    })
                } else {
                    Ok(())
                }
            }
            (Poset::Finite(fp), Element::Label(i)) => {
                if *i < fp.len() {
                    Ok(())
                } else {
                    Err(OrderError::NotInCarrier {
                        component: component_name(path),
                        reason: format!("label index {i} out of range ({} labels)", fp.len()),
                    })
                }
            }
            (Poset::Product(ps), Element::Tuple(items)) => {
                if ps.len() != items.len() {
                    return Err(OrderError::DimensionMismatch {
                        component: component_name(path),
                        expected: ps.len(),
                        found: items.len(),
                    });
                }
                for (k, (p, x)) in ps.iter().zip(items).enumerate() {
                    p.check_at(x, &format!("{path}.{k}"))?;
                }
                Ok(())
            }
            (Poset::Opposite(inner), x) => inner.check_at(x, path),
            (Poset::Hermitian(n), Element::Matrix(m)) => {
                if m.order() != *n {
                    Err(OrderError::DimensionMismatch {
                        component: component_name(path),
                        expected: *n,
                        found: m.order(),
                    })
                } else {
                    Ok(())
                }
            }
            _ => Err(OrderError::NotInCarrier {
                component: component_name(path),
                reason: format!("element {e} does not match poset kind {}", self.kind_name()),
            }),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Poset::Reals => "reals",
            Poset::Finite(_) => "finite",
            Poset::Product(_) => "product",
            Poset::Opposite(_) => "opposite",
            Poset::Hermitian(_) => "hermitian",
        }
    }

    /// `a ≼ b`.
    pub fn leq(&self, a: &Element, b: &Element) -> Result<bool, OrderError> {
        self.leq_at(a, b, "")
    }

    fn leq_at(&self, a: &Element, b: &Element, path: &str) -> Result<bool, OrderError> {
        match (self, a, b) {
            (Poset::Reals, Element::Real(x), Element::Real(y)) => Ok(x <= y),
            (Poset::Finite(fp), Element::Label(i), Element::Label(j)) => {
                if *i >= fp.len() || *j >= fp.len() {
                    return Err(OrderError::NotInCarrier {
                        component: component_name(path),
                        reason: "label index out of range".into(),
                    });
                }
                Ok(fp.leq_index(*i, *j))
            }
            (Poset::Product(ps), Element::Tuple(xs), Element::Tuple(ys)) => {
                for (len, which) in [(xs.len(), "left"), (ys.len(), "right")] {
                    if len != ps.len() {
                        return Err(OrderError::DimensionMismatch {
                            component: format!("{} ({which} operand)", component_name(path)),
                            expected: ps.len(),
                            found: len,
                        });
                    }
                }
                let mut all = true;
                for (k, p) in ps.iter().enumerate() {
                    if !p.leq_at(&xs[k], &ys[k], &format!("{path}.{k}"))? {
                        all = false;
                    }
                }
                Ok(all)
            }
            (Poset::Opposite(inner), x, y) => inner.leq_at(y, x, path),
            (Poset::Hermitian(n), Element::Matrix(x), Element::Matrix(y)) => {
                for (m, which) in [(x, "left"), (y, "right")] {
                    if m.order() != *n {
                        return Err(OrderError::DimensionMismatch {
                            component: format!("{} ({which} operand)", component_name(path)),
                            expected: *n,
                            found: m.order(),
                        });
                    }
                }
                Ok(x.loewner_leq(y))
            }
            _ => Err(OrderError::NotInCarrier {
                component: component_name(path),
                reason: format!("cannot compare {a} and {b} in a {} poset", self.kind_name()),
            }),
        }
    }

    /// `a ≼ b ∧ b ≼ a`.
    pub fn equivalent(&self, a: &Element, b: &Element) -> Result<bool, OrderError> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    /// Least upper bound when it exists.
    pub fn join(&self, a: &Element, b: &Element) -> Option<Element> {
        match (self, a, b) {
            (Poset::Reals, Element::Real(x), Element::Real(y)) => Some(Element::Real(x.max(*y))),
            (Poset::Finite(fp), Element::Label(i), Element::Label(j)) => fp.lub(*i, *j).map(Element::Label),
            (Poset::Product(ps), Element::Tuple(xs), Element::Tuple(ys))
                if xs.len() == ps.len() && ys.len() == ps.len() =>
            {
                ps.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(p, (x, y))| p.join(x, y))
                    .collect::<Option<Vec<_>>>()
                    .map(Element::Tuple)
            }
            (Poset::Opposite(inner), x, y) => inner.meet(x, y),
            _ => None,
        }
    }

    /// Greatest lower bound when it exists.
    pub fn meet(&self, a: &Element, b: &Element) -> Option<Element> {
        match (self, a, b) {
            (Poset::Reals, Element::Real(x), Element::Real(y)) => Some(Element::Real(x.min(*y))),
            (Poset::Finite(fp), Element::Label(i), Element::Label(j)) => fp.glb(*i, *j).map(Element::Label),
            (Poset::Product(ps), Element::Tuple(xs), Element::Tuple(ys))
                if xs.len() == ps.len() && ys.len() == ps.len() =>
            {
                ps.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(p, (x, y))| p.meet(x, y))
                    .collect::<Option<Vec<_>>>()
                    .map(Element::Tuple)
            }
            (Poset::Opposite(inner), x, y) => inner.join(x, y),
            _ => None,
        }
    }

    /// Least element when it exists.
    pub fn bottom(&self) -> Option<Element> {
        match self {
            Poset::Reals => Some(Element::Real(0.0)),
            Poset::Finite(fp) => fp.least().map(Element::Label),
            Poset::Product(ps) => ps
                .iter()
                .map(Poset::bottom)
                .collect::<Option<Vec<_>>>()
                .map(Element::Tuple),
            Poset::Opposite(inner) => inner.top(),
            Poset::Hermitian(_) => None,
        }
    }

    /// Greatest element when it exists.
    pub fn top(&self) -> Option<Element> {
        match self {
            Poset::Reals => Some(Element::Real(f64::INFINITY)),
            Poset::Finite(fp) => fp.greatest().map(Element::Label),
            Poset::Product(ps) => ps
                .iter()
                .map(Poset::top)
                .collect::<Option<Vec<_>>>()
                .map(Element::Tuple),
            Poset::Opposite(inner) => inner.bottom(),
            Poset::Hermitian(_) => None,
        }
    }
}

fn component_name(path: &str) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        format!("component {}", path.trim_start_matches('.'))
    }
}
