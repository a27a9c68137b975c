//! Random spaces and concepts for the acceptance and property suites.

#![allow(dead_code)]

use std::collections::BTreeMap;

use conceptual_spaces::geometry::DomainSet;
use conceptual_spaces::{Concept, Core, Cuboid, DomainStructure, Weights};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// `1..=max_dims` dimensions split into randomly sized domains.
    pub fn structure(&mut self, max_dims: usize, min_domains: usize) -> DomainStructure {
        let n = self.rng.random_range(min_domains.max(1)..=max_dims);
        let mut dims: Vec<usize> = (0..n).collect();
        dims.shuffle(&mut self.rng);
        let k = self.rng.random_range(min_domains.max(1)..=n);
        // k nonempty groups: the first k dims seed them, the rest land anywhere
        let mut groups: Vec<Vec<usize>> = dims[..k].iter().map(|&d| vec![d]).collect();
        for &d in &dims[k..] {
            let g = self.rng.random_range(0..k);
            groups[g].push(d);
        }
        DomainStructure::new(
            groups.into_iter().enumerate().map(|(i, g)| (format!("d{i}"), g)),
            (0..n).map(|i| format!("x{i}")).collect(),
        )
        .unwrap()
    }

    fn normalized(&mut self, keys: &[usize], total: f64) -> BTreeMap<usize, f64> {
        let raw: Vec<f64> = keys.iter().map(|_| self.uniform(0.2, 2.0)).collect();
        let sum: f64 = raw.iter().sum();
        keys.iter().zip(raw).map(|(&k, w)| (k, w * total / sum)).collect()
    }

    /// Random weights on `domains`. Domain weights within each group of
    /// `groups` sum to the group size; without groups, over all domains.
    pub fn weights_grouped(&mut self, s: &DomainStructure, groups: &[DomainSet]) -> Weights {
        let mut domain_weights = BTreeMap::new();
        for group in groups {
            let names: Vec<&String> = group.iter().collect();
            let idx: Vec<usize> = (0..names.len()).collect();
            let ws = self.normalized(&idx, names.len() as f64);
            for (i, w) in ws {
                domain_weights.insert(names[i].clone(), w);
            }
        }
        let mut dimension_weights = BTreeMap::new();
        for name in domain_weights.keys() {
            let dims = s.dims(name).unwrap().to_vec();
            dimension_weights.insert(name.clone(), self.normalized(&dims, 1.0));
        }
        Weights::new(domain_weights, dimension_weights).unwrap()
    }

    pub fn weights(&mut self, s: &DomainStructure, domains: &DomainSet) -> Weights {
        self.weights_grouped(s, &[domains.clone()])
    }

    pub fn point(&mut self, n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|_| self.uniform(lo, hi)).collect()
    }

    /// A core of 1 to `max_cuboids` cuboids around a shared random point.
    pub fn core(&mut self, s: &DomainStructure, domains: &DomainSet, max_cuboids: usize) -> Core {
        let p = self.point(s.n(), 0.0, 1.0);
        let m = self.rng.random_range(1..=max_cuboids);
        let cuboids = (0..m)
            .map(|_| {
                let lo: Vec<f64> = p.iter().map(|&v| v - self.uniform(0.0, 0.4)).collect();
                let hi: Vec<f64> = p.iter().map(|&v| v + self.uniform(0.0, 0.4)).collect();
                Cuboid::on_domains(&lo, &hi, domains.clone(), s).unwrap()
            })
            .collect();
        Core::new(cuboids).unwrap()
    }

    pub fn params(&mut self) -> (f64, f64) {
        (self.uniform(0.1, 1.0), self.uniform(0.5, 10.0))
    }

    pub fn concept(&mut self, s: &DomainStructure, domains: &DomainSet, max_cuboids: usize) -> Concept {
        let core = self.core(s, domains, max_cuboids);
        let (mu0, c) = self.params();
        let w = self.weights(s, domains);
        Concept::new(core, mu0, c, w).unwrap()
    }

    /// A random nonempty subset of the structure's domains.
    pub fn domains(&mut self, s: &DomainStructure) -> DomainSet {
        let all: Vec<String> = s.all_domains().into_iter().collect();
        loop {
            let pick: DomainSet = all.iter().filter(|_| self.rng.random_bool(0.6)).cloned().collect();
            if !pick.is_empty() {
                return pick;
            }
        }
    }
}

/// Combined distance from `x` to `cuboid`, computed from the weight tables
/// directly.
pub fn oracle_distance(x: &[f64], cuboid: &Cuboid, w: &Weights) -> f64 {
    let mut total = 0.0;
    for (name, dims) in w.all_dimension_weights() {
        let mut sum = 0.0;
        for (&d, &wd) in dims {
            let (lo, hi) = (cuboid.p_min()[d], cuboid.p_max()[d]);
            let gap = if x[d] < lo { lo - x[d] } else if x[d] > hi { x[d] - hi } else { 0.0 };
            sum += wd * gap * gap;
        }
        total += w.domain_weights()[name] * sum.sqrt();
    }
    total
}

pub fn oracle_membership(concept: &Concept, x: &[f64]) -> f64 {
    let d = concept
        .core()
        .cuboids()
        .iter()
        .map(|c| oracle_distance(x, c, concept.weights()))
        .fold(f64::INFINITY, f64::min);
    concept.mu0() * (-concept.c() * d).exp()
}
