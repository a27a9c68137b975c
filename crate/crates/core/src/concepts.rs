//! Concepts: fuzzy sets built on a core.
//!
//! Membership of a point is `μ₀·e^(−c·d)` where `d` is the combined distance
//! from the point to the nearest point of the core, measured with the
//! concept's own weights. All operations return new concepts; nothing is
//! mutated in place.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{DomainSet, DomainStructure, Weights};
use crate::regions::{Core, Cuboid};

/// Pairwise intersection results whose α is within this distance of the
/// best one are kept together.
pub const ALPHA_TIE_TOLERANCE: f64 = 1e-12;

/// Relative tolerance when deciding that two domains trade off distance at
/// the same rate during intersection.
const RATIO_TIE_TOLERANCE: f64 = 1e-12;

/// Weight mixing factor used by intersection and unification.
const MIX: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub struct Concept {
    core: Core,
    mu0: f64,
    c: f64,
    weights: Weights,
}

impl Concept {
    pub fn new(core: Core, mu0: f64, c: f64, weights: Weights) -> Result<Self> {
        check_params(mu0, c)?;
        weights.check_against(core.structure(), core.domains())?;
        Ok(Concept {
            core,
            mu0,
            c,
            weights,
        })
    }

    pub fn core(&self) -> &Core {
        &self.core
    }

    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn domains(&self) -> &DomainSet {
        self.core.domains()
    }

    pub fn structure(&self) -> &DomainStructure {
        self.core.structure()
    }

    /// The cuboids of the core, each fuzzified with this concept's
    /// parameters.
    pub fn fuzzy_cuboids(&self) -> impl Iterator<Item = FuzzyCuboid<'_>> {
        self.core.cuboids().iter().map(move |cuboid| FuzzyCuboid {
            cuboid,
            mu0: self.mu0,
            c: self.c,
            weights: &self.weights,
        })
    }

    /// Combined distance from `x` to the nearest point of the core.
    pub fn distance_to_core(&self, x: &[f64]) -> f64 {
        self.core
            .cuboids()
            .iter()
            .map(|c| distance_to_cuboid(x, c, &self.weights))
            .fold(f64::INFINITY, f64::min)
    }

    /// Degree of membership of `x`, in `[0, μ₀]`.
    ///
    /// # Panics
    ///
    /// If `x` does not have one coordinate per dimension of the space.
    pub fn membership(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.structure().n(), "point has the wrong dimension");
        self.mu0 * (-self.c * self.distance_to_core(x)).exp()
    }

    /// Conjunction of two concepts: the highest nonempty α-cut intersection,
    /// approximated pairwise over cuboids and repaired into a valid core.
    pub fn intersect(&self, other: &Concept) -> Result<Concept> {
        self.check_space(other)?;
        let mut results = Vec::new();
        for a in self.fuzzy_cuboids() {
            for b in other.fuzzy_cuboids() {
                results.push(fuzzy_cuboid_pair_intersection(&a, &b)?);
            }
        }
        let best = results.iter().map(|r| r.alpha).fold(0.0, f64::max);
        if best <= 0.0 {
            return Err(Error::Underflow);
        }
        let survivors = results
            .into_iter()
            .filter(|r| r.alpha >= best - ALPHA_TIE_TOLERANCE)
            .map(|r| r.cuboid)
            .collect();
        let core = Core::simplified(survivors)?;
        let weights = self.weights.combine(&other.weights, MIX, MIX)?;
        Concept::new(core, best.min(1.0), self.c.min(other.c), weights)
    }

    /// Disjunction of two concepts: all cuboids of both cores, repaired
    /// into a valid core if their central regions do not meet.
    ///
    /// Cuboids are first re-expressed on the union of both domain sets;
    /// dimensions a concept does not cover take the bounding box of the
    /// other concept's core.
    pub fn unify(&self, other: &Concept) -> Result<Concept> {
        self.check_space(other)?;
        let domains: DomainSet = self.domains().union(other.domains()).cloned().collect();
        let own_box = self.core.bounding_box();
        let other_box = other.core.bounding_box();
        let mut cuboids = Vec::new();
        for c in self.core.cuboids() {
            cuboids.push(c.extended(&domains, &other_box)?);
        }
        for c in other.core.cuboids() {
            cuboids.push(c.extended(&domains, &own_box)?);
        }
        let core = Core::simplified(cuboids)?;
        let weights = self.weights.combine(&other.weights, MIX, MIX)?;
        Concept::new(core, self.mu0.max(other.mu0), self.c.min(other.c), weights)
    }

    /// Restricts the concept to a subset of its domains. Only the domain
    /// weights change, rescaled to sum to `|target|`.
    pub fn project(&self, target: &DomainSet) -> Result<Concept> {
        let core = self.core.project(target)?;
        let weights = self.weights.restricted(target)?;
        Concept::new(core, self.mu0, self.c, weights)
    }

    /// Splits the concept at `x_d = v` into `(upper, lower)` parts; both
    /// inherit `μ₀`, `c` and the weights.
    pub fn cut(&self, d: usize, v: f64) -> Result<(Option<Concept>, Option<Concept>)> {
        let (upper, lower) = self.core.cut(d, v)?;
        let wrap = |core: Option<Core>| {
            core.map(|core| Concept {
                core,
                mu0: self.mu0,
                c: self.c,
                weights: self.weights.clone(),
            })
        };
        Ok((wrap(upper), wrap(lower)))
    }

    fn check_space(&self, other: &Concept) -> Result<()> {
        if self.structure() != other.structure() {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }
}

fn check_params(mu0: f64, c: f64) -> Result<()> {
    if !(mu0 > 0.0 && mu0 <= 1.0) {
        return Err(Error::InvalidParameter(format!("mu0 must lie in (0, 1], got {mu0}")));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    Ok(())
}

/// Offset of `v` from the interval `[lo, hi]`.
fn interval_gap(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        0.0
    }
}

/// Combined distance from `x` to its clamp into `cuboid`.
pub fn distance_to_cuboid(x: &[f64], cuboid: &Cuboid, weights: &Weights) -> f64 {
    let (lo, hi) = (cuboid.p_min(), cuboid.p_max());
    weights.combined_length(|d| interval_gap(x[d], lo[d], hi[d]))
}

/// A single cuboid fuzzified with a concept's parameters.
#[derive(Clone, Copy, Debug)]
pub struct FuzzyCuboid<'a> {
    pub cuboid: &'a Cuboid,
    pub mu0: f64,
    pub c: f64,
    pub weights: &'a Weights,
}

impl<'a> FuzzyCuboid<'a> {
    pub fn new(cuboid: &'a Cuboid, mu0: f64, c: f64, weights: &'a Weights) -> Result<Self> {
        check_params(mu0, c)?;
        weights.check_against(cuboid.structure(), cuboid.domains())?;
        Ok(FuzzyCuboid {
            cuboid,
            mu0,
            c,
            weights,
        })
    }

    pub fn membership(&self, x: &[f64]) -> f64 {
        self.mu0 * (-self.c * distance_to_cuboid(x, self.cuboid, self.weights)).exp()
    }
}

/// How the best α-cut intersection of two fuzzified cuboids was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionCase {
    /// The crisp cuboids overlap.
    Crisp,
    /// The lower-μ₀ cuboid is reached by the other's cut at that level.
    CutReachesCuboid,
    /// The memberships cross in a single point (up to extrusion along free
    /// dimensions).
    SinglePoint,
    /// The memberships are equal and maximal on a whole set of points.
    PointSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairIntersection {
    pub alpha: f64,
    pub cuboid: Cuboid,
    pub case: IntersectionCase,
}

/// Highest α at which the α-cuts of two fuzzified cuboids meet, with a
/// cuboid approximating their intersection at that level.
///
/// When the crisp cuboids are disjoint, the candidate points are those
/// between the two closest points `a` and `b`: per domain, a point moves a
/// fraction `t_δ` of the way from `a` to `b`. Both memberships are then
/// linear in `ln`-space in the `t_δ`, so the best level is found exactly by
/// moving whole domains in order of their exchange rate and stopping where
/// the two memberships cross.
pub fn fuzzy_cuboid_pair_intersection(
    first: &FuzzyCuboid<'_>,
    second: &FuzzyCuboid<'_>,
) -> Result<PairIntersection> {
    check_params(first.mu0, first.c)?;
    check_params(second.mu0, second.c)?;
    let structure = first.cuboid.structure();
    if structure != second.cuboid.structure() {
        return Err(Error::SpaceMismatch);
    }
    let mu_min = first.mu0.min(second.mu0);
    if let Some(cuboid) = first.cuboid.intersect(second.cuboid) {
        return Ok(PairIntersection {
            alpha: mu_min,
            cuboid,
            case: IntersectionCase::Crisp,
        });
    }

    let cp = first.cuboid.closest_points(second.cuboid);
    let n = structure.n();
    let gap: Vec<f64> = (0..n).map(|d| cp.b[d] - cp.a[d]).collect();
    let domains: DomainSet = first
        .cuboid
        .domains()
        .union(second.cuboid.domains())
        .cloned()
        .collect();

    // membership of each cuboid at the other's closest point, in log space
    let log_first_at_b = first.mu0.ln() - first.c * first.weights.combined_length(|d| gap[d]);
    let log_second_at_a = second.mu0.ln() - second.c * second.weights.combined_length(|d| gap[d]);
    if log_second_at_a >= first.mu0.ln() {
        let cuboid = cut_bounding_box(second, first.mu0, first.cuboid, &domains)?;
        return Ok(PairIntersection {
            alpha: first.mu0,
            cuboid,
            case: IntersectionCase::CutReachesCuboid,
        });
    }
    if log_first_at_b >= second.mu0.ln() {
        let cuboid = cut_bounding_box(first, second.mu0, second.cuboid, &domains)?;
        return Ok(PairIntersection {
            alpha: second.mu0,
            cuboid,
            case: IntersectionCase::CutReachesCuboid,
        });
    }

    // per-domain costs of moving all the way from a to b
    struct Lane {
        dims: Vec<usize>,
        up: f64,
        down: f64,
    }
    let mut lanes = Vec::new();
    for (name, dims) in structure.domains() {
        if dims.iter().all(|&d| gap[d] == 0.0) {
            continue;
        }
        let length = |w: &Weights| -> Result<f64> {
            let wd = w.dimension_weights(name)?;
            let sq: f64 = dims.iter().map(|d| wd[d] * gap[*d] * gap[*d]).sum();
            Ok(w.domain_weight(name)? * sq.sqrt())
        };
        lanes.push(Lane {
            dims: dims.clone(),
            up: first.c * length(first.weights)?,
            down: second.c * length(second.weights)?,
        });
    }
    lanes.sort_by(|x, y| {
        (x.up * y.down)
            .partial_cmp(&(y.up * x.down))
            .unwrap_or(Ordering::Equal)
    });

    // negative log memberships of the first and second cuboid
    let mut rise = -first.mu0.ln();
    let mut fall = -second.mu0.ln() + lanes.iter().map(|l| l.down).sum::<f64>();
    let mut t_range = vec![(0.0, 0.0); lanes.len()];
    let mut level = None;
    let mut case = IntersectionCase::SinglePoint;
    let mut start = 0;
    while start < lanes.len() {
        let ratio = lanes[start].up / lanes[start].down;
        let mut end = start + 1;
        while end < lanes.len()
            && (lanes[end].up / lanes[end].down - ratio).abs() <= RATIO_TIE_TOLERANCE * ratio
        {
            end += 1;
        }
        let up: f64 = lanes[start..end].iter().map(|l| l.up).sum();
        let down: f64 = lanes[start..end].iter().map(|l| l.down).sum();
        if rise + up <= fall - down {
            rise += up;
            fall -= down;
            for r in &mut t_range[start..end] {
                *r = (1.0, 1.0);
            }
            start = end;
            continue;
        }
        let theta = ((fall - rise) / (up + down)).clamp(0.0, 1.0);
        level = Some(0.5 * ((rise + theta * up) + (fall - theta * down)));
        // any split of the group's progress with the same total is optimal
        let progress = theta * down;
        for (i, lane) in lanes[start..end].iter().enumerate() {
            let others = down - lane.down;
            let lo = ((progress - others) / lane.down).clamp(0.0, 1.0);
            let hi = (progress / lane.down).clamp(0.0, 1.0);
            t_range[start + i] = (lo, hi);
        }
        if end - start > 1 {
            case = IntersectionCase::PointSet;
        }
        break;
    }
    // both cut conditions failed, so the memberships cross inside the lanes
    let level = level.unwrap_or(rise.max(fall));

    let mut p_min = vec![0.0; n];
    let mut p_max = vec![0.0; n];
    for d in 0..n {
        let lo = first.cuboid.p_min()[d].max(second.cuboid.p_min()[d]);
        let hi = first.cuboid.p_max()[d].min(second.cuboid.p_max()[d]);
        p_min[d] = lo;
        p_max[d] = hi;
    }
    for (lane, &(t_lo, t_hi)) in lanes.iter().zip(&t_range) {
        for &d in &lane.dims {
            if gap[d] == 0.0 {
                continue;
            }
            let x_lo = cp.a[d] + t_lo * gap[d];
            let x_hi = cp.a[d] + t_hi * gap[d];
            p_min[d] = x_lo.min(x_hi);
            p_max[d] = x_lo.max(x_hi);
        }
    }
    let cuboid = Cuboid::new(p_min, p_max, domains, structure)?;
    Ok(PairIntersection {
        alpha: (-level).exp(),
        cuboid,
        case,
    })
}

/// Bounding box of `fuzzy`'s α-cut intersected with the crisp cuboid
/// `crisp`, for an α at which the two are known to meet.
fn cut_bounding_box(
    fuzzy: &FuzzyCuboid<'_>,
    alpha: f64,
    crisp: &Cuboid,
    domains: &DomainSet,
) -> Result<Cuboid> {
    let structure = crisp.structure();
    let radius = (fuzzy.mu0 / alpha).ln() / fuzzy.c;
    let (flo, fhi) = (fuzzy.cuboid.p_min(), fuzzy.cuboid.p_max());
    let (clo, chi) = (crisp.p_min(), crisp.p_max());
    let n = structure.n();
    // offsets of the crisp cuboid's closest point from the fuzzy cuboid
    let cp = crisp.closest_points(fuzzy.cuboid);
    let offset: Vec<f64> = (0..n).map(|d| cp.b[d] - cp.a[d]).collect();
    let w = fuzzy.weights;

    let mut p_min = clo.to_vec();
    let mut p_max = chi.to_vec();
    for (name, dims) in w.all_dimension_weights() {
        let wdom = w.domain_weight(name)?;
        let rest: f64 = w
            .all_dimension_weights()
            .iter()
            .filter(|(other, _)| *other != name)
            .map(|(other, od)| {
                let sq: f64 = od.iter().map(|(&e, &we)| we * offset[e] * offset[e]).sum();
                w.domain_weight(other).unwrap_or(0.0) * sq.sqrt()
            })
            .sum();
        for (&d, &wd) in dims {
            let inside: f64 = dims
                .iter()
                .filter(|(&e, _)| e != d)
                .map(|(&e, &we)| we * offset[e] * offset[e])
                .sum();
            let budget = ((radius - rest) / wdom).max(0.0);
            let reach = ((budget * budget - inside) / wd).max(0.0).sqrt();
            let lo = clo[d].max(flo[d] - reach);
            let hi = chi[d].min(fhi[d] + reach);
            if lo <= hi {
                p_min[d] = lo;
                p_max[d] = hi;
            } else {
                p_min[d] = cp.a[d];
                p_max[d] = cp.a[d];
            }
        }
    }
    Cuboid::new(p_min, p_max, domains.clone(), structure)
}
