use std::cmp::Ordering;

use super::poset::{Element, Poset};
use super::OrderError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Generates an upper set; used for resources.
    Minimal,
    /// Generates a lower set; used for functionalities.
    Maximal,
}

/// A finite set of mutually incomparable points, stored in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct Antichain {
    poset: Poset,
    orientation: Orientation,
    points: Vec<Element>,
}

impl Antichain {
    pub fn empty(poset: Poset, orientation: Orientation) -> Self {
        Self {
            poset,
            orientation,
            points: Vec::new(),
        }
    }

    /// Wraps points already known to be minimal (or maximal) and in canonical order.
    pub(crate) fn from_canonical(poset: Poset, orientation: Orientation, points: Vec<Element>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].canonical_cmp(&w[1]) == Ordering::Less));
        Self {
            poset,
            orientation,
            points,
        }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn points(&self) -> &[Element] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Element> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Membership in the generated upper set (minimal) or lower set (maximal).
    pub fn generates(&self, x: &Element) -> Result<bool, OrderError> {
        for p in &self.points {
            let hit = match self.orientation {
                Orientation::Minimal => self.poset.leq(p, x)?,
                Orientation::Maximal => self.poset.leq(x, p)?,
            };
            if hit {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Keeps the items whose points are not strictly dominated.
///
/// Equivalent points collapse onto the canonically first point; identical
/// points keep the smallest payload. The result is in canonical order.
pub fn pareto_filter<T: Ord>(
    poset: &Poset,
    mut items: Vec<(Element, T)>,
    orientation: Orientation,
) -> Result<Vec<(Element, T)>, OrderError> {
    for (p, _) in &items {
        poset.check(p)?;
    }
    items.sort_by(|a, b| match a.0.canonical_cmp(&b.0) {
        Ordering::Equal => a.1.cmp(&b.1),
        o => o,
    });
    let better = |x: &Element, y: &Element| -> Result<bool, OrderError> {
        match orientation {
            Orientation::Minimal => poset.leq(x, y),
            Orientation::Maximal => poset.leq(y, x),
        }
    };
    let mut keep = vec![false; items.len()];
    for i in 0..items.len() {
        let mut drop = false;
        for j in 0..items.len() {
            if i == j {
                continue;
            }
            let ji = better(&items[j].0, &items[i].0)?;
            if !ji {
                continue;
            }
            let ij = better(&items[i].0, &items[j].0)?;
            if !ij || (j < i && keep[j]) {
                drop = true;
                break;
            }
        }
        keep[i] = !drop;
    }
    Ok(items
        .into_iter()
        .zip(keep)
        .filter_map(|(it, k)| k.then_some(it))
        .collect())
}

/// Minimal elements of `points`.
pub fn pareto_min(poset: &Poset, points: Vec<Element>) -> Result<Antichain, OrderError> {
    build(poset, points, Orientation::Minimal)
}

/// Maximal elements of `points`.
pub fn pareto_max(poset: &Poset, points: Vec<Element>) -> Result<Antichain, OrderError> {
    build(poset, points, Orientation::Maximal)
}

fn build(poset: &Poset, points: Vec<Element>, orientation: Orientation) -> Result<Antichain, OrderError> {
    let items = points.into_iter().map(|p| (p, ())).collect();
    let points = pareto_filter(poset, items, orientation)?
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    Ok(Antichain {
        poset: poset.clone(),
        orientation,
        points,
    })
}

fn same_space(a: &Antichain, b: &Antichain) -> Result<(), OrderError> {
    if a.poset != b.poset {
        return Err(OrderError::PosetMismatch("antichains live in different posets".into()));
    }
    if a.orientation != b.orientation {
        return Err(OrderError::PosetMismatch(
            "antichains have different orientations".into(),
        ));
    }
    Ok(())
}

/// Extremal points of the union.
pub fn antichain_merge(a: &Antichain, b: &Antichain) -> Result<Antichain, OrderError> {
    same_space(a, b)?;
    let points = a.points.iter().chain(&b.points).cloned().collect();
    build(&a.poset, points, a.orientation)
}

/// `a ≼ b` in the poset of antichains.
///
/// Minimal orientation: the upper set of `b` is contained in the upper set
/// of `a`. Maximal orientation: the lower set of `a` is contained in the
/// lower set of `b`. In both cases `b` is the more demanding answer.
pub fn antichain_leq(a: &Antichain, b: &Antichain) -> Result<bool, OrderError> {
    same_space(a, b)?;
    match a.orientation {
        Orientation::Minimal => {
            for q in &b.points {
                if !a.generates(q)? {
                    return Ok(false);
                }
            }
        }
        Orientation::Maximal => {
            for p in &a.points {
                if !b.generates(p)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Pairs `(i, j)` of sample indices with `x_i ≼ x_j` but `map(x_i) ⋠ map(x_j)`.
pub fn monotone_violations<F>(domain: &Poset, samples: &[Element], map: F) -> Result<Vec<(usize, usize)>, OrderError>
where
    F: Fn(&Element) -> Result<Antichain, OrderError>,
{
    let images = samples.iter().map(&map).collect::<Result<Vec<_>, _>>()?;
    let mut bad = Vec::new();
    for i in 0..samples.len() {
        for j in 0..samples.len() {
            if i != j && domain.leq(&samples[i], &samples[j])? && !antichain_leq(&images[i], &images[j])? {
                bad.push((i, j));
            }
        }
    }
    Ok(bad)
}
