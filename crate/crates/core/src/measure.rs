//! Concept size: the integral of the membership function.
//!
//! The α-cut of a fuzzified cuboid is a "rounded box": the crisp box grown by
//! metric balls. Summing over which dimensions a point sticks out of the box
//! gives its volume in closed form, and integrating over α gives the measure
//! of the fuzzified cuboid. A concept's size follows by inclusion-exclusion
//! over its cuboids.

use std::f64::consts::PI;

use crate::concepts::Concept;
use crate::error::{Error, Result};
use crate::geometry::{DomainStructure, Weights};
use crate::regions::{Core, Cuboid};

/// Largest number of dimensions (or cuboids) enumerated by subset sums.
pub const MAX_SUBSET_ELEMENTS: usize = 16;

/// Parameters a measurement is taken under. The domains measured are those
/// covered by the weights.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureContext {
    pub structure: DomainStructure,
    pub weights: Weights,
    pub c: f64,
    pub mu0: f64,
}

impl MeasureContext {
    pub fn new(structure: DomainStructure, weights: Weights, c: f64, mu0: f64) -> Result<Self> {
        if !(mu0 > 0.0 && mu0 <= 1.0) {
            return Err(Error::InvalidParameter(format!("mu0 must lie in (0, 1], got {mu0}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
        }
        structure.check_domains(&weights.domain_names())?;
        Ok(MeasureContext {
            structure,
            weights,
            c,
            mu0,
        })
    }

    /// The concept's own parameters.
    pub fn of(concept: &Concept) -> Self {
        MeasureContext {
            structure: concept.structure().clone(),
            weights: concept.weights().clone(),
            c: concept.c(),
            mu0: concept.mu0(),
        }
    }

    /// Measured dimensions with their `(w_δ, w_d)`, grouped by domain.
    fn groups(&self) -> Vec<Vec<(usize, f64, f64)>> {
        self.weights
            .all_dimension_weights()
            .iter()
            .map(|(name, dims)| {
                let wdom = self.weights.domain_weights()[name];
                dims.iter().map(|(&d, &wd)| (d, wdom, wd)).collect()
            })
            .collect()
    }
}

/// `Γ(k/2 + 1)` for a non-negative integer `k`, by recurrence from
/// `Γ(1) = 1` and `Γ(3/2) = √π/2`.
pub fn gamma_half_plus_one(k: usize) -> f64 {
    let (mut value, mut arg) = if k % 2 == 0 { (1.0, 1.0) } else { (0.5 * PI.sqrt(), 1.5) };
    let target = k as f64 / 2.0 + 1.0;
    while arg < target {
        value *= arg;
        arg += 1.0;
    }
    value
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `k!·π^(k/2)/Γ(k/2+1)`: the factor one domain with `k` dimensions
/// contributes to a unit ball of the combined metric.
fn domain_factor(k: usize) -> f64 {
    factorial(k) * PI.powf(k as f64 / 2.0) / gamma_half_plus_one(k)
}

/// Volume of the ball of radius `r` under the combined metric over the
/// given dimensions, each listed as `(domain, w_δ, w_d)`.
fn ball_volume(r: f64, dims: &[(usize, f64, f64)], domain_of: impl Fn(usize) -> usize) -> f64 {
    let n = dims.len();
    if n == 0 {
        return 1.0;
    }
    let mut scale = 1.0;
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for &(d, wdom, wd) in dims {
        scale *= wdom * wd.sqrt();
        let key = domain_of(d);
        match counts.iter_mut().find(|(k, _)| *k == key) {
            Some((_, count)) => *count += 1,
            None => counts.push((key, 1)),
        }
    }
    let shape: f64 = counts.iter().map(|&(_, k)| domain_factor(k)).product();
    r.powi(n as i32) / factorial(n) * shape / scale
}

/// Hypervolume of a ball of radius `r` under the combined metric defined by
/// `w` (over the domains `w` covers).
pub fn hyperball_volume(r: f64, structure: &DomainStructure, w: &Weights) -> Result<f64> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be non-negative, got {r}")));
    }
    let ctx = MeasureContext::new(structure.clone(), w.clone(), 1.0, 1.0)?;
    let dims: Vec<_> = ctx.groups().into_iter().flatten().collect();
    check_size("dimension subsets", dims.len())?;
    Ok(ball_volume(r, &dims, |d| domain_index(structure, d)))
}

fn domain_index(structure: &DomainStructure, d: usize) -> usize {
    let name = structure.domain_of(d);
    structure
        .domains()
        .keys()
        .position(|k| k == name)
        .expect("dimension belongs to a domain")
}

fn check_size(what: &'static str, count: usize) -> Result<()> {
    if count > MAX_SUBSET_ELEMENTS {
        return Err(Error::TooLarge {
            what,
            count,
            limit: MAX_SUBSET_ELEMENTS,
        });
    }
    Ok(())
}

/// Measured dimensions paired with the cuboid's side lengths.
fn sides(ctx: &MeasureContext, cuboid: &Cuboid) -> Result<Vec<((usize, f64, f64), f64)>> {
    let dims: Vec<_> = ctx.groups().into_iter().flatten().collect();
    check_size("dimension subsets", dims.len())?;
    dims.into_iter()
        .map(|entry| {
            let side = cuboid.extent(entry.0);
            if side.is_finite() {
                Ok((entry, side))
            } else {
                Err(Error::Unbounded)
            }
        })
        .collect()
}

/// Volume of the α-cut of `cuboid` fuzzified with the context's parameters.
pub fn alpha_cut_volume(ctx: &MeasureContext, cuboid: &Cuboid, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let sides = sides(ctx, cuboid)?;
    if alpha > ctx.mu0 {
        return Ok(0.0);
    }
    let radius = -(alpha / ctx.mu0).ln() / ctx.c;
    let k = sides.len();
    let mut total = 0.0;
    for mask in 0u32..(1u32 << k) {
        let mut extrusion = 1.0;
        let mut ball_dims = Vec::new();
        for (i, &(entry, side)) in sides.iter().enumerate() {
            if mask & (1 << i) != 0 {
                ball_dims.push(entry);
            } else {
                extrusion *= side;
            }
        }
        if extrusion == 0.0 {
            continue;
        }
        total += extrusion * ball_volume(radius, &ball_dims, |d| domain_index(&ctx.structure, d));
    }
    Ok(total)
}

/// Integral of the membership function of `cuboid` fuzzified with the
/// context's parameters.
pub fn fuzzified_cuboid_measure(ctx: &MeasureContext, cuboid: &Cuboid) -> Result<f64> {
    let sides = sides(ctx, cuboid)?;
    let k = sides.len();
    // a_d = w_δ(d)·√w_d·b_d·c
    let scaled: Vec<f64> = sides
        .iter()
        .map(|&((_, wdom, wd), side)| wdom * wd.sqrt() * side * ctx.c)
        .collect();
    let norm: f64 = sides
        .iter()
        .map(|&((_, wdom, wd), _)| ctx.c * wdom * wd.sqrt())
        .product();
    let mut total = 0.0;
    for size in 0..=k {
        for mask in 0u32..(1u32 << k) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut extrusion = 1.0;
            let mut counts: Vec<(usize, usize)> = Vec::new();
            for (i, &((d, _, _), _)) in sides.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    let key = domain_index(&ctx.structure, d);
                    match counts.iter_mut().find(|(k, _)| *k == key) {
                        Some((_, count)) => *count += 1,
                        None => counts.push((key, 1)),
                    }
                } else {
                    extrusion *= scaled[i];
                }
            }
            let shape: f64 = counts.iter().map(|&(_, k)| domain_factor(k)).product();
            total += extrusion * shape;
        }
    }
    Ok(ctx.mu0 / norm * total)
}

/// Size of a core fuzzified with the context's parameters, by
/// inclusion-exclusion over its cuboids. Empty intersections contribute
/// nothing.
pub fn core_measure(ctx: &MeasureContext, core: &Core) -> Result<f64> {
    let cuboids = core.cuboids();
    let m = cuboids.len();
    check_size("cuboid subsets", m)?;
    let mut total = 0.0;
    for mask in 1u32..(1u32 << m) {
        let mut members = (0..m).filter(|i| mask & (1 << i) != 0);
        let first = members.next().expect("nonempty subset");
        let overlap = members.try_fold(cuboids[first].clone(), |acc, i| acc.intersect(&cuboids[i]));
        if let Some(overlap) = overlap {
            let sign = if mask.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
            total += sign * fuzzified_cuboid_measure(ctx, &overlap)?;
        }
    }
    Ok(total)
}

/// Size of a concept, measured on its own domains with its own parameters.
pub fn concept_size(concept: &Concept) -> Result<f64> {
    core_measure(&MeasureContext::of(concept), concept.core())
}
