//! Crisp building blocks: axis-parallel cuboids and cores.
//!
//! A core is a union of cuboids whose common intersection (the central
//! region) is nonempty, which makes it star-shaped with respect to that
//! central region under the combined metric.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::geometry::{DomainSet, DomainStructure};

/// Axis-parallel box. Bounded on the dimensions of its domains, unbounded
/// (`±∞`) everywhere else.
#[derive(Clone, Debug, PartialEq)]
pub struct Cuboid {
    p_min: Vec<f64>,
    p_max: Vec<f64>,
    domains: DomainSet,
    structure: DomainStructure,
}

impl Cuboid {
    pub fn new(
        p_min: Vec<f64>,
        p_max: Vec<f64>,
        domains: DomainSet,
        structure: &DomainStructure,
    ) -> Result<Self> {
        let n = structure.n();
        for v in [&p_min, &p_max] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: v.len(),
                });
            }
        }
        let defined = structure.dims_of(&domains)?;
        let defined: BTreeSet<usize> = defined.into_iter().collect();
        for d in 0..n {
            let (lo, hi) = (p_min[d], p_max[d]);
            if defined.contains(&d) {
                if !(lo.is_finite() && hi.is_finite()) {
                    return Err(Error::InvalidCuboid(format!(
                        "dimension {d} must be bounded, got [{lo}, {hi}]"
                    )));
                }
                if lo > hi {
                    return Err(Error::InvalidCuboid(format!(
                        "dimension {d} has p_min {lo} > p_max {hi}"
                    )));
                }
            } else if !(lo == f64::NEG_INFINITY && hi == f64::INFINITY) {
                return Err(Error::InvalidCuboid(format!(
                    "dimension {d} lies outside the cuboid's domains and must be unbounded"
                )));
            }
        }
        Ok(Cuboid {
            p_min,
            p_max,
            domains,
            structure: structure.clone(),
        })
    }

    /// Builds a cuboid from full-length bound vectors, forcing dimensions
    /// outside `domains` to `±∞`.
    pub fn on_domains(
        p_min: &[f64],
        p_max: &[f64],
        domains: DomainSet,
        structure: &DomainStructure,
    ) -> Result<Self> {
        let defined: BTreeSet<usize> = structure.dims_of(&domains)?.into_iter().collect();
        let mut lo = p_min.to_vec();
        let mut hi = p_max.to_vec();
        for d in 0..lo.len().min(hi.len()) {
            if !defined.contains(&d) {
                lo[d] = f64::NEG_INFINITY;
                hi[d] = f64::INFINITY;
            }
        }
        Cuboid::new(lo, hi, domains, structure)
    }

    pub fn p_min(&self) -> &[f64] {
        &self.p_min
    }

    pub fn p_max(&self) -> &[f64] {
        &self.p_max
    }

    pub fn domains(&self) -> &DomainSet {
        &self.domains
    }

    pub fn structure(&self) -> &DomainStructure {
        &self.structure
    }

    /// Side length `p_max_d − p_min_d` (infinite on undefined dimensions).
    pub fn extent(&self, d: usize) -> f64 {
        self.p_max[d] - self.p_min[d]
    }

    pub fn is_bounded(&self, d: usize) -> bool {
        self.p_min[d].is_finite()
    }

    /// Center on bounded dimensions, `None` elsewhere.
    pub fn center(&self, d: usize) -> Option<f64> {
        self.is_bounded(d).then(|| 0.5 * (self.p_min[d] + self.p_max[d]))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.p_min.len()
            && x
                .iter()
                .zip(self.p_min.iter().zip(&self.p_max))
                .all(|(&v, (&lo, &hi))| lo <= v && v <= hi)
    }

    /// Does this cuboid contain `other` as a point set?
    pub fn contains_cuboid(&self, other: &Cuboid) -> bool {
        (0..self.p_min.len())
            .all(|d| self.p_min[d] <= other.p_min[d] && other.p_max[d] <= self.p_max[d])
    }

    /// Per-dimension interval intersection, `None` when empty.
    pub fn intersect(&self, other: &Cuboid) -> Option<Cuboid> {
        let n = self.p_min.len();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for d in 0..n {
            let l = self.p_min[d].max(other.p_min[d]);
            let h = self.p_max[d].min(other.p_max[d]);
            if l > h {
                return None;
            }
            lo.push(l);
            hi.push(h);
        }
        Some(Cuboid {
            p_min: lo,
            p_max: hi,
            domains: self.domains.union(&other.domains).cloned().collect(),
            structure: self.structure.clone(),
        })
    }

    /// A pair of closest points `a ∈ self`, `b ∈ other`.
    ///
    /// Per dimension the points are clamped independently, which minimizes
    /// the combined distance for any weights because that metric is monotone
    /// in every coordinate difference.
    pub fn closest_points(&self, other: &Cuboid) -> ClosestPoints {
        let n = self.p_min.len();
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut free_dims = BTreeSet::new();
        for d in 0..n {
            let (lo1, hi1) = (self.p_min[d], self.p_max[d]);
            let (lo2, hi2) = (other.p_min[d], other.p_max[d]);
            if hi1 < lo2 {
                a[d] = hi1;
                b[d] = lo2;
            } else if hi2 < lo1 {
                a[d] = lo1;
                b[d] = hi2;
            } else {
                let lo = lo1.max(lo2);
                let hi = hi1.min(hi2);
                let v = if lo.is_finite() {
                    lo
                } else if hi.is_finite() {
                    hi
                } else {
                    0.0
                };
                a[d] = v;
                b[d] = v;
                if hi > lo {
                    free_dims.insert(d);
                }
            }
        }
        ClosestPoints { a, b, free_dims }
    }

    /// Copy of this cuboid restricted to `target` (unbounded elsewhere).
    pub fn project(&self, target: &DomainSet) -> Result<Cuboid> {
        Cuboid::on_domains(&self.p_min, &self.p_max, target.clone(), &self.structure)
    }

    /// Re-expresses the cuboid on the larger domain set `target`, taking the
    /// bounds of newly covered dimensions from `fill`.
    pub(crate) fn extended(&self, target: &DomainSet, fill: &[(f64, f64)]) -> Result<Cuboid> {
        let mut lo = self.p_min.clone();
        let mut hi = self.p_max.clone();
        for d in self.structure.dims_of(target)? {
            if !self.is_bounded(d) {
                lo[d] = fill[d].0;
                hi[d] = fill[d].1;
            }
        }
        Cuboid::new(lo, hi, target.clone(), &self.structure)
    }

    pub(crate) fn with_bounds(&self, d: usize, lo: f64, hi: f64) -> Cuboid {
        let mut c = self.clone();
        c.p_min[d] = lo;
        c.p_max[d] = hi;
        c
    }

    /// Union box of two cuboids when that union is itself a cuboid.
    fn merge(&self, other: &Cuboid) -> Option<Cuboid> {
        let n = self.p_min.len();
        let mut differing = None;
        for d in 0..n {
            if self.p_min[d] != other.p_min[d] || self.p_max[d] != other.p_max[d] {
                if differing.is_some() {
                    return None;
                }
                differing = Some(d);
            }
        }
        let Some(d) = differing else {
            return Some(self.clone());
        };
        if self.p_max[d] < other.p_min[d] || other.p_max[d] < self.p_min[d] {
            return None;
        }
        Some(self.with_bounds(
            d,
            self.p_min[d].min(other.p_min[d]),
            self.p_max[d].max(other.p_max[d]),
        ))
    }
}

/// Result of [`Cuboid::closest_points`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClosestPoints {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Dimensions where both points may slide together along an overlap of
    /// positive length.
    pub free_dims: BTreeSet<usize>,
}

/// Union of cuboids over a shared domain set with a nonempty central region.
#[derive(Clone, Debug, PartialEq)]
pub struct Core {
    cuboids: Vec<Cuboid>,
    domains: DomainSet,
}

impl Core {
    pub fn new(cuboids: Vec<Cuboid>) -> Result<Self> {
        let domains = shared_domains(&cuboids)?;
        if central(&cuboids).is_none() {
            return Err(Error::EmptyCentralRegion);
        }
        Ok(Core { cuboids, domains })
    }

    /// Builds a core, applying the repair mechanism when the cuboids have no
    /// common point: every cuboid is stretched to contain the mean of the
    /// cuboid centers.
    pub fn repair(cuboids: Vec<Cuboid>) -> Result<Self> {
        let domains = shared_domains(&cuboids)?;
        if central(&cuboids).is_some() {
            return Ok(Core { cuboids, domains });
        }
        let n = cuboids[0].p_min.len();
        let m = cuboids.len() as f64;
        let mut repaired = cuboids;
        for d in 0..n {
            if !repaired[0].is_bounded(d) {
                continue;
            }
            let mid = repaired.iter().filter_map(|c| c.center(d)).sum::<f64>() / m;
            for c in &mut repaired {
                c.p_min[d] = c.p_min[d].min(mid);
                c.p_max[d] = c.p_max[d].max(mid);
            }
        }
        Core::new(repaired)
    }

    /// Like [`Core::repair`], after first dropping cuboids contained in
    /// others and merging pairs whose union is a single box. The point set
    /// of the input union is preserved by that simplification.
    pub(crate) fn simplified(cuboids: Vec<Cuboid>) -> Result<Self> {
        Core::repair(simplify(cuboids))
    }

    pub fn cuboids(&self) -> &[Cuboid] {
        &self.cuboids
    }

    pub fn domains(&self) -> &DomainSet {
        &self.domains
    }

    pub fn structure(&self) -> &DomainStructure {
        &self.cuboids[0].structure
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.cuboids.iter().any(|c| c.contains(x))
    }

    /// Intersection of all cuboids.
    pub fn central_region(&self) -> Cuboid {
        central(&self.cuboids).expect("core invariant: nonempty central region")
    }

    /// Midpoint of the central region.
    pub fn midpoint(&self) -> Vec<f64> {
        let p = self.central_region();
        (0..p.p_min.len())
            .map(|d| p.center(d).unwrap_or(f64::NAN))
            .collect()
    }

    /// Coordinate-wise bounding box over the cuboids.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        let n = self.cuboids[0].p_min.len();
        (0..n)
            .map(|d| {
                self.cuboids.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                    (lo.min(c.p_min[d]), hi.max(c.p_max[d]))
                })
            })
            .collect()
    }

    pub fn project(&self, target: &DomainSet) -> Result<Core> {
        if target.is_empty() {
            return Err(Error::NoDomains);
        }
        if !target.is_subset(&self.domains) {
            return Err(Error::DomainMismatch(format!(
                "cannot project a core on {:?} onto {:?}",
                self.domains, target
            )));
        }
        let cuboids = self
            .cuboids
            .iter()
            .map(|c| c.project(target))
            .collect::<Result<Vec<_>>>()?;
        Core::new(cuboids)
    }

    /// Splits every cuboid at `x_d = v`. Returns the upper side
    /// (`x_d ≥ v`) and the lower side (`x_d ≤ v`); a side without any
    /// cuboid is `None`. Points with `x_d = v` belong to both sides.
    pub fn cut(&self, d: usize, v: f64) -> Result<(Option<Core>, Option<Core>)> {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("cut value must be finite, got {v}")));
        }
        if !self.structure().dims_of(&self.domains)?.contains(&d) {
            return Err(Error::DimensionNotInDomains(d));
        }
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for c in &self.cuboids {
            if c.p_max[d] >= v {
                upper.push(c.with_bounds(d, c.p_min[d].max(v), c.p_max[d]));
            }
            if c.p_min[d] <= v {
                lower.push(c.with_bounds(d, c.p_min[d], c.p_max[d].min(v)));
            }
        }
        let side = |cs: Vec<Cuboid>| -> Result<Option<Core>> {
            if cs.is_empty() {
                Ok(None)
            } else {
                Core::new(cs).map(Some)
            }
        };
        Ok((side(upper)?, side(lower)?))
    }
}

fn shared_domains(cuboids: &[Cuboid]) -> Result<DomainSet> {
    let first = cuboids.first().ok_or(Error::EmptyCore)?;
    for c in &cuboids[1..] {
        if c.structure != first.structure {
            return Err(Error::SpaceMismatch);
        }
        if c.domains != first.domains {
            return Err(Error::DomainMismatch(format!(
                "cuboids defined on {:?} and {:?}",
                first.domains, c.domains
            )));
        }
    }
    Ok(first.domains.clone())
}

fn central(cuboids: &[Cuboid]) -> Option<Cuboid> {
    let (first, rest) = cuboids.split_first()?;
    rest.iter().try_fold(first.clone(), |acc, c| acc.intersect(c))
}

/// Merge and removal steps tried before falling back to greedy merging.
const MERGE_SEARCH_BUDGET: usize = 10_000;

/// Rewrites a union of cuboids with fewer cuboids without changing the
/// union. Merging two cuboids or dropping one covered by another only grows
/// the central region, so an order of such steps that makes it nonempty is
/// searched for first.
fn simplify(cuboids: Vec<Cuboid>) -> Vec<Cuboid> {
    let mut budget = MERGE_SEARCH_BUDGET;
    match search_steps(cuboids.clone(), &mut budget) {
        Some(found) => found,
        None => merge_greedily(prune(cuboids)),
    }
}

/// Is `cs[i]` covered by another cuboid? Among equal ones the first is kept.
fn covered(cs: &[Cuboid], i: usize) -> bool {
    cs.iter()
        .enumerate()
        .any(|(j, o)| j != i && o.contains_cuboid(&cs[i]) && (!cs[i].contains_cuboid(o) || j < i))
}

fn prune(cs: Vec<Cuboid>) -> Vec<Cuboid> {
    let keep: Vec<bool> = (0..cs.len()).map(|i| !covered(&cs, i)).collect();
    cs.into_iter()
        .zip(keep)
        .filter_map(|(c, keep)| keep.then_some(c))
        .collect()
}

fn merged(cs: &[Cuboid], i: usize, j: usize) -> Option<Vec<Cuboid>> {
    let m = cs[i].merge(&cs[j])?;
    let mut next = cs.to_vec();
    next[i] = m;
    next.remove(j);
    Some(next)
}

fn merge_greedily(mut cs: Vec<Cuboid>) -> Vec<Cuboid> {
    'again: loop {
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                if let Some(next) = merged(&cs, i, j) {
                    cs = prune(next);
                    continue 'again;
                }
            }
        }
        return cs;
    }
}

fn search_steps(cs: Vec<Cuboid>, budget: &mut usize) -> Option<Vec<Cuboid>> {
    if central(&cs).is_some() {
        return Some(merge_greedily(prune(cs)));
    }
    let merges = (0..cs.len()).flat_map(|i| (i + 1..cs.len()).map(move |j| (i, j)));
    let removals = (0..cs.len()).filter(|&i| covered(&cs, i)).map(|i| (i, i));
    let steps: Vec<(usize, usize)> = merges.chain(removals).collect();
    for (i, j) in steps {
        if *budget == 0 {
            return None;
        }
        let next = if i == j {
            let mut next = cs.clone();
            next.remove(i);
            Some(next)
        } else {
            merged(&cs, i, j)
        };
        if let Some(next) = next {
            *budget -= 1;
            if let Some(found) = search_steps(next, budget) {
                return Some(found);
            }
        }
    }
    None
}
