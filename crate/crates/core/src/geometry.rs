//! Domain structure, salience weights and the combined metric.
//!
//! Dimensions are grouped into named domains. Within a domain, distances are
//! weighted Euclidean; across domains they are combined with a weighted
//! Manhattan sum. Similarity decays exponentially with that combined distance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A set of domain names.
pub type DomainSet = BTreeSet<String>;

/// Default absolute tolerance for betweenness checks.
pub const BETWEEN_TOLERANCE: f64 = 1e-9;

/// Tolerance of the weight normalization invariants.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Deviations up to this size are silently renormalized by [`Weights::new`].
pub const WEIGHT_REPAIR_TOLERANCE: f64 = 1e-6;

/// Builds a [`DomainSet`] from anything string-like.
pub fn domain_set<I, S>(names: I) -> DomainSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    names.into_iter().map(Into::into).collect()
}

#[derive(Debug)]
struct StructureInner {
    domains: BTreeMap<String, Vec<usize>>,
    dimension_names: Vec<String>,
    domain_of: Vec<String>,
}

/// Partition of the `n` dimensions of a conceptual space into named domains.
///
/// Cloning is cheap; the structure is shared between every cuboid, core and
/// concept that lives in the space.
#[derive(Clone)]
pub struct DomainStructure(Arc<StructureInner>);

impl DomainStructure {
    pub fn new<I, S>(domains: I, dimension_names: Vec<String>) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<usize>)>,
        S: Into<String>,
    {
        let n = dimension_names.len();
        let mut map = BTreeMap::new();
        let mut domain_of: Vec<Option<String>> = vec![None; n];
        for (name, mut dims) in domains {
            let name = name.into();
            if dims.is_empty() {
                return Err(Error::InvalidStructure(format!("domain '{name}' is empty")));
            }
            dims.sort_unstable();
            for &d in &dims {
                if d >= n {
                    return Err(Error::InvalidStructure(format!(
                        "domain '{name}' references dimension {d}, but there are only {n}"
                    )));
                }
                if let Some(other) = &domain_of[d] {
                    return Err(Error::InvalidStructure(format!(
                        "dimension {d} belongs to both '{other}' and '{name}'"
                    )));
                }
                domain_of[d] = Some(name.clone());
            }
            if map.insert(name.clone(), dims).is_some() {
                return Err(Error::InvalidStructure(format!("duplicate domain '{name}'")));
            }
        }
        let domain_of = domain_of
            .into_iter()
            .enumerate()
            .map(|(d, owner)| {
                owner.ok_or_else(|| {
                    Error::InvalidStructure(format!("dimension {d} belongs to no domain"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut seen = BTreeSet::new();
        for name in &dimension_names {
            if !seen.insert(name) {
                return Err(Error::InvalidStructure(format!("duplicate dimension name '{name}'")));
            }
        }
        Ok(DomainStructure(Arc::new(StructureInner {
            domains: map,
            dimension_names,
            domain_of,
        })))
    }

    /// Total number of dimensions.
    pub fn n(&self) -> usize {
        self.0.dimension_names.len()
    }

    pub fn domains(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.0.domains
    }

    pub fn all_domains(&self) -> DomainSet {
        self.0.domains.keys().cloned().collect()
    }

    pub fn dimension_names(&self) -> &[String] {
        &self.0.dimension_names
    }

    pub fn dimension_index(&self, name: &str) -> Option<usize> {
        self.0.dimension_names.iter().position(|n| n == name)
    }

    /// Sorted dimensions of one domain.
    pub fn dims(&self, domain: &str) -> Result<&[usize]> {
        self.0
            .domains
            .get(domain)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownDomain(domain.to_string()))
    }

    /// Name of the domain that owns dimension `d`.
    pub fn domain_of(&self, d: usize) -> &str {
        &self.0.domain_of[d]
    }

    /// Sorted dimensions covered by a set of domains.
    pub fn dims_of(&self, domains: &DomainSet) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for name in domains {
            out.extend_from_slice(self.dims(name)?);
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn check_domains(&self, domains: &DomainSet) -> Result<()> {
        for name in domains {
            self.dims(name)?;
        }
        Ok(())
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("point coordinates must be finite".into()));
        }
        Ok(())
    }
}

impl PartialEq for DomainStructure {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.domains == other.0.domains
                && self.0.dimension_names == other.0.dimension_names)
    }
}

impl fmt::Debug for DomainStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DomainStructure")
            .field("domains", &self.0.domains)
            .field("dimension_names", &self.0.dimension_names)
            .finish()
    }
}

/// Salience weights: one weight per domain and one per dimension inside each
/// domain.
///
/// Domain weights sum to the number of domains; dimension weights sum to one
/// within every domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Weights {
    domains: BTreeMap<String, f64>,
    dimensions: BTreeMap<String, BTreeMap<usize, f64>>,
}

impl Weights {
    /// Validates and, when the sums are off by at most
    /// [`WEIGHT_REPAIR_TOLERANCE`], renormalizes the given weights.
    pub fn new(
        domain_weights: BTreeMap<String, f64>,
        dimension_weights: BTreeMap<String, BTreeMap<usize, f64>>,
    ) -> Result<Self> {
        if domain_weights.is_empty() {
            return Err(Error::NoDomains);
        }
        let dw_keys: Vec<_> = domain_weights.keys().collect();
        let dim_keys: Vec<_> = dimension_weights.keys().collect();
        if dw_keys != dim_keys {
            return Err(Error::InvalidWeights(
                "domain weights and dimension weights cover different domains".into(),
            ));
        }
        let count = dw_keys.len() as f64;
        for (name, &w) in &domain_weights {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidWeights(format!(
                    "domain weight of '{name}' must be positive, got {w}"
                )));
            }
        }
        let mut seen_dims = BTreeSet::new();
        for (name, dims) in &dimension_weights {
            if dims.is_empty() {
                return Err(Error::InvalidWeights(format!("domain '{name}' has no dimension weights")));
            }
            for (&d, &w) in dims {
                if !seen_dims.insert(d) {
                    return Err(Error::InvalidWeights(format!("dimension {d} weighted twice")));
                }
                if !(w.is_finite() && w > 0.0) {
                    return Err(Error::InvalidWeights(format!(
                        "weight of dimension {d} must be positive, got {w}"
                    )));
                }
            }
        }

        let domains = renormalize(domain_weights, count, "domain weights")?;
        let dimensions = dimension_weights
            .into_iter()
            .map(|(name, dims)| {
                let what = format!("dimension weights of '{name}'");
                renormalize(dims, 1.0, &what).map(|dims| (name, dims))
            })
            .collect::<Result<_>>()?;
        Ok(Weights { domains, dimensions })
    }

    /// Given domain weights, spreads each domain's dimension weights evenly.
    pub fn with_uniform_dimensions<I, S>(
        structure: &DomainStructure,
        domain_weights: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let domain_weights: BTreeMap<String, f64> =
            domain_weights.into_iter().map(|(k, v)| (k.into(), v)).collect();
        let mut dims = BTreeMap::new();
        for name in domain_weights.keys() {
            let ds = structure.dims(name)?;
            let w = 1.0 / ds.len() as f64;
            dims.insert(name.clone(), ds.iter().map(|&d| (d, w)).collect());
        }
        Weights::new(domain_weights, dims)
    }

    /// All domain weights equal to one, dimension weights uniform.
    pub fn uniform(structure: &DomainStructure, domains: &DomainSet) -> Result<Self> {
        Weights::with_uniform_dimensions(structure, domains.iter().map(|d| (d.clone(), 1.0)))
    }

    pub fn domain_weights(&self) -> &BTreeMap<String, f64> {
        &self.domains
    }

    pub fn all_dimension_weights(&self) -> &BTreeMap<String, BTreeMap<usize, f64>> {
        &self.dimensions
    }

    pub fn domain_names(&self) -> DomainSet {
        self.domains.keys().cloned().collect()
    }

    pub fn domain_weight(&self, domain: &str) -> Result<f64> {
        self.domains
            .get(domain)
            .copied()
            .ok_or_else(|| Error::UnknownDomain(domain.to_string()))
    }

    pub fn dimension_weights(&self, domain: &str) -> Result<&BTreeMap<usize, f64>> {
        self.dimensions
            .get(domain)
            .ok_or_else(|| Error::UnknownDomain(domain.to_string()))
    }

    /// Weight pair `(w_δ, w_d)` of dimension `d`, if some domain covers it.
    pub fn weights_of_dim(&self, d: usize) -> Option<(f64, f64)> {
        self.dimensions.iter().find_map(|(name, dims)| {
            dims.get(&d).map(|&wd| (self.domains[name], wd))
        })
    }

    /// Combined length `Σ_δ w_δ·sqrt(Σ_{d∈δ} w_d·v_d²)` of the per-dimension
    /// offsets `v_d = offset(d)`, over the domains these weights cover.
    pub fn combined_length(&self, offset: impl Fn(usize) -> f64) -> f64 {
        self.dimensions
            .iter()
            .map(|(name, dims)| {
                let sq: f64 = dims
                    .iter()
                    .map(|(&d, &wd)| {
                        let v = offset(d);
                        wd * v * v
                    })
                    .sum();
                self.domains[name] * sq.sqrt()
            })
            .sum()
    }

    /// Checks that these weights cover exactly `domains` with the dimensions
    /// the structure assigns to them.
    pub fn check_against(&self, structure: &DomainStructure, domains: &DomainSet) -> Result<()> {
        if &self.domain_names() != domains {
            return Err(Error::InvalidWeights(format!(
                "weights cover {:?} but the domains are {:?}",
                self.domain_names(),
                domains
            )));
        }
        for (name, dims) in &self.dimensions {
            let expected = structure.dims(name)?;
            if !dims.keys().copied().eq(expected.iter().copied()) {
                return Err(Error::InvalidWeights(format!(
                    "dimension weights of '{name}' do not match the domain's dimensions"
                )));
            }
        }
        Ok(())
    }

    /// Keeps only `target` and rescales its domain weights to sum to
    /// `|target|`; dimension weights are unchanged.
    pub fn restricted(&self, target: &DomainSet) -> Result<Weights> {
        if target.is_empty() {
            return Err(Error::NoDomains);
        }
        let mut total = 0.0;
        for name in target {
            total += self.domain_weight(name)?;
        }
        let k = target.len() as f64;
        let domains = target
            .iter()
            .map(|name| (name.clone(), k * self.domains[name] / total))
            .collect();
        let dimensions = target
            .iter()
            .map(|name| (name.clone(), self.dimensions[name].clone()))
            .collect();
        Weights::new(domains, dimensions)
    }

    /// Convex combination on shared domains (`s` for domain weights, `t` for
    /// dimension weights), copies on exclusive ones, then domain weights are
    /// rescaled to sum to the number of domains.
    pub fn combine(&self, other: &Weights, s: f64, t: f64) -> Result<Weights> {
        if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!(
                "combination factors must lie in [0,1], got s={s}, t={t}"
            )));
        }
        let mut domains = BTreeMap::new();
        let mut dimensions = BTreeMap::new();
        for (name, &w1) in &self.domains {
            match other.domains.get(name) {
                Some(&w2) => {
                    domains.insert(name.clone(), s * w1 + (1.0 - s) * w2);
                    let d1 = &self.dimensions[name];
                    let d2 = &other.dimensions[name];
                    let merged = d1
                        .iter()
                        .map(|(&d, &v1)| {
                            let v2 = d2.get(&d).copied().ok_or_else(|| {
                                Error::InvalidWeights(format!(
                                    "domain '{name}' has different dimensions in the two weight sets"
                                ))
                            })?;
                            Ok((d, t * v1 + (1.0 - t) * v2))
                        })
                        .collect::<Result<BTreeMap<_, _>>>()?;
                    dimensions.insert(name.clone(), merged);
                }
                None => {
                    domains.insert(name.clone(), w1);
                    dimensions.insert(name.clone(), self.dimensions[name].clone());
                }
            }
        }
        for (name, &w2) in &other.domains {
            if !self.domains.contains_key(name) {
                domains.insert(name.clone(), w2);
                dimensions.insert(name.clone(), other.dimensions[name].clone());
            }
        }
        let total: f64 = domains.values().sum();
        let k = domains.len() as f64;
        if total != k {
            for w in domains.values_mut() {
                *w *= k / total;
            }
        }
        Weights::new(domains, dimensions)
    }
}

fn renormalize<K: Ord>(
    mut values: BTreeMap<K, f64>,
    target: f64,
    what: &str,
) -> Result<BTreeMap<K, f64>> {
    let total: f64 = values.values().sum();
    let deviation = (total - target).abs();
    if deviation > WEIGHT_REPAIR_TOLERANCE * target.max(1.0) {
        return Err(Error::InvalidWeights(format!(
            "{what} sum to {total}, expected {target}"
        )));
    }
    if deviation > WEIGHT_TOLERANCE {
        for v in values.values_mut() {
            *v *= target / total;
        }
    }
    Ok(values)
}

/// Weighted Euclidean distance between `x` and `y` restricted to one domain.
pub fn distance_within_domain(x: &[f64], y: &[f64], domain: &str, w: &Weights) -> Result<f64> {
    check_pair(x, y)?;
    let dims = w.dimension_weights(domain)?;
    let mut sum = 0.0;
    for (&d, &wd) in dims {
        let (a, b) = coord_pair(x, y, d)?;
        sum += wd * (a - b) * (a - b);
    }
    Ok(sum.sqrt())
}

/// Combined distance: weighted sum of the per-domain Euclidean distances.
pub fn distance_combined(x: &[f64], y: &[f64], domains: &DomainSet, w: &Weights) -> Result<f64> {
    if domains.is_empty() {
        return Err(Error::NoDomains);
    }
    let mut total = 0.0;
    for name in domains {
        total += w.domain_weight(name)? * distance_within_domain(x, y, name, w)?;
    }
    Ok(total)
}

/// `e^(-c * d)` for the combined distance `d` between `x` and `y`.
pub fn similarity(x: &[f64], y: &[f64], c: f64, domains: &DomainSet, w: &Weights) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sensitivity must be positive, got {c}"
        )));
    }
    Ok((-c * distance_combined(x, y, domains, w)?).exp())
}

/// Is `y` between `x` and `z` on every domain of `domains`?
///
/// Per domain, `y` must lie on the segment from `z` to `x`:
/// `y_d = t·x_d + (1−t)·z_d` for a single `t ∈ [0,1]` and each `d` in the
/// domain, up to an absolute `tolerance` per coordinate. No weights are
/// involved.
pub fn between(
    x: &[f64],
    y: &[f64],
    z: &[f64],
    structure: &DomainStructure,
    domains: &DomainSet,
    tolerance: f64,
) -> Result<bool> {
    if !(tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be non-negative, got {tolerance}"
        )));
    }
    if domains.is_empty() {
        return Err(Error::NoDomains);
    }
    check_pair(x, y)?;
    check_pair(x, z)?;
    for name in domains {
        let dims = structure.dims(name)?;
        for &d in dims {
            if d >= x.len() {
                return Err(Error::DimensionMismatch {
                    expected: d + 1,
                    got: x.len(),
                });
            }
        }
        // least-squares t, clamped to the segment
        let (mut num, mut den) = (0.0, 0.0);
        for &d in dims {
            let span = x[d] - z[d];
            num += (y[d] - z[d]) * span;
            den += span * span;
        }
        let t = if den > 0.0 { (num / den).clamp(0.0, 1.0) } else { 0.5 };
        let on_segment = dims
            .iter()
            .all(|&d| (t * x[d] + (1.0 - t) * z[d] - y[d]).abs() <= tolerance);
        if !on_segment {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(())
}

fn coord_pair(x: &[f64], y: &[f64], d: usize) -> Result<(f64, f64)> {
    match (x.get(d), y.get(d)) {
        (Some(&a), Some(&b)) => Ok((a, b)),
        _ => Err(Error::DimensionMismatch {
            expected: d + 1,
            got: x.len(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singletons(n: usize) -> DomainStructure {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        DomainStructure::new(
            (0..n).map(|i| (format!("d{i}"), vec![i])),
            names,
        )
        .unwrap()
    }

    fn fused(n: usize) -> DomainStructure {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        DomainStructure::new([("all", (0..n).collect())], names).unwrap()
    }

    fn fruit() -> DomainStructure {
        DomainStructure::new(
            [("color", vec![0]), ("shape", vec![1]), ("taste", vec![2])],
            vec!["hue".into(), "round".into(), "sweet".into()],
        )
        .unwrap()
    }

    #[test]
    fn structure_rejects_overlapping_and_missing_dimensions() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(DomainStructure::new([("x", vec![0]), ("y", vec![0, 1])], names.clone()).is_err());
        assert!(DomainStructure::new([("x", vec![0])], names.clone()).is_err());
        assert!(DomainStructure::new([("x", vec![0]), ("y", vec![])], names.clone()).is_err());
        assert!(DomainStructure::new([("x", vec![0, 2])], names).is_err());
    }

    #[test]
    fn weights_renormalize_small_deviations_and_reject_large_ones() {
        let s = fruit();
        let w = Weights::with_uniform_dimensions(&s, [("color", 0.5), ("shape", 1.5), ("taste", 1.0000001)])
            .unwrap();
        let sum: f64 = w.domain_weights().values().sum();
        assert!((sum - 3.0).abs() < 1e-12);
        assert!(Weights::with_uniform_dimensions(&s, [("color", 0.5), ("shape", 1.5), ("taste", 1.1)]).is_err());
        assert!(Weights::with_uniform_dimensions(&s, [("color", -0.5), ("shape", 2.5), ("taste", 1.0)]).is_err());
    }

    #[test]
    fn exact_weights_are_kept_bit_for_bit() {
        let s = fruit();
        let w = Weights::with_uniform_dimensions(&s, [("color", 0.5), ("shape", 1.25), ("taste", 1.25)])
            .unwrap();
        assert_eq!(w.domain_weight("shape").unwrap(), 1.25);
    }

    #[test]
    fn within_domain_distance() {
        let s = fused(2);
        let w = Weights::uniform(&s, &s.all_domains()).unwrap();
        let d = distance_within_domain(&[0.0, 0.0], &[3.0, 4.0], "all", &w).unwrap();
        assert!((d - 12.5f64.sqrt()).abs() < 1e-12);
        assert!((d - 3.535533906).abs() < 1e-9);
        assert_eq!(distance_within_domain(&[1.0, 2.0], &[1.0, 2.0], "all", &w).unwrap(), 0.0);

        let f = fruit();
        let w = Weights::uniform(&f, &f.all_domains()).unwrap();
        let d = distance_within_domain(&[0.6, 0.0, 0.0], &[0.75, 9.0, 9.0], "color", &w).unwrap();
        assert!((d - 0.15).abs() < 1e-12);
        assert!(matches!(
            distance_within_domain(&[0.0; 3], &[0.0; 3], "smell", &w),
            Err(Error::UnknownDomain(_))
        ));
    }

    #[test]
    fn combined_distance() {
        let s = singletons(2);
        let w = Weights::uniform(&s, &s.all_domains()).unwrap();
        let d = distance_combined(&[0.0, 0.0], &[3.0, 4.0], &s.all_domains(), &w).unwrap();
        assert!((d - 7.0).abs() < 1e-12);

        let f = fruit();
        let w = Weights::with_uniform_dimensions(&f, [("color", 0.5), ("shape", 1.5), ("taste", 1.0)])
            .unwrap();
        let x = [0.6, 0.5, 0.4];
        let y = [0.75, 0.725, 0.475];
        let d = distance_combined(&x, &y, &f.all_domains(), &w).unwrap();
        assert!((d - 0.4875).abs() < 1e-12);
        assert_eq!(distance_combined(&x, &x, &f.all_domains(), &w).unwrap(), 0.0);
        assert!(matches!(
            distance_combined(&x, &y, &DomainSet::new(), &w),
            Err(Error::NoDomains)
        ));
    }

    #[test]
    fn similarity_values() {
        let f = fruit();
        let all = f.all_domains();
        let w = Weights::with_uniform_dimensions(&f, [("color", 0.5), ("shape", 1.5), ("taste", 1.0)])
            .unwrap();
        let x = [0.6, 0.5, 0.4];
        assert_eq!(similarity(&x, &x, 10.0, &all, &w).unwrap(), 1.0);
        let s = similarity(&x, &[0.75, 0.725, 0.475], 10.0, &all, &w).unwrap();
        assert!((s - 0.0076350942).abs() < 1e-10);

        let one = singletons(1);
        let w1 = Weights::uniform(&one, &one.all_domains()).unwrap();
        let s = similarity(&[0.0], &[0.1], 20.0, &one.all_domains(), &w1).unwrap();
        assert!((s - (-2.0f64).exp()).abs() < 1e-12);
        assert!(similarity(&x, &x, 0.0, &all, &w).is_err());
        assert!(similarity(&x, &x, -1.0, &all, &w).is_err());
    }

    #[test]
    fn betweenness_examples() {
        let two = singletons(2);
        let fused2 = fused(2);
        let (x, z) = ([0.0, 0.0], [2.0, 4.0]);
        assert!(between(&x, &[1.0, 1.0], &[2.0, 2.0], &two, &two.all_domains(), 1e-9).unwrap());
        assert!(between(&x, &[1.0, 1.0], &[2.0, 2.0], &fused2, &fused2.all_domains(), 1e-9).unwrap());
        assert!(between(&x, &[1.0, 3.0], &z, &two, &two.all_domains(), 1e-9).unwrap());
        assert!(!between(&x, &[1.0, 3.0], &z, &fused2, &fused2.all_domains(), 1e-9).unwrap());
    }

    #[test]
    fn betweenness_degenerate_domain() {
        let two = singletons(2);
        let all = two.all_domains();
        let x = [1.0, 0.0];
        let z = [1.0, 5.0];
        assert!(between(&x, &[1.0, 2.5], &z, &two, &all, 1e-9).unwrap());
        assert!(!between(&x, &[1.5, 2.5], &z, &two, &all, 1e-9).unwrap());
        assert!(between(&x, &[1.0, 2.5], &z, &two, &all, -1.0).is_err());
    }
}
