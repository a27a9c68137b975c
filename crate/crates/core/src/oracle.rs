//! Independent numerical checks: Monte-Carlo integration of membership
//! functions and a dense grid search for the best common membership of two
//! concepts.
//!
//! Sampling is split into fixed chunks. Chunk `k` draws from a ChaCha8
//! generator seeded with the configured seed on stream `k`, and chunk sums
//! are combined in chunk order, so results do not depend on the number of
//! worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::concepts::Concept;
use crate::error::{Error, Result};

/// Generator used for all sampling.
pub const ALGORITHM: &str = "ChaCha8";

/// Samples drawn per chunk.
pub const CHUNK: usize = 10_000;

/// Smallest sample count accepted for an estimate.
pub const MIN_SAMPLES: usize = 10_000;

/// Largest number of grid points evaluated by a grid search.
pub const MAX_GRID_POINTS: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Membership level below which the sampling box cuts off the tails.
    pub alpha_floor: f64,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            alpha_floor: 1e-4,
        }
    }

    fn check(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        if !(self.alpha_floor > 0.0 && self.alpha_floor < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha_floor must lie in (0, 1), got {}",
                self.alpha_floor
            )));
        }
        Ok(())
    }
}

/// A Monte-Carlo estimate with its standard error and the settings that
/// reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
    pub algorithm: &'static str,
}

/// Integral of `f` over the box `bounds` by uniform sampling.
pub fn mc_integrate<F>(f: F, bounds: &[(f64, f64)], cfg: &McConfig) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    cfg.check()?;
    for &(lo, hi) in bounds {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Unbounded);
        }
        if lo > hi {
            return Err(Error::InvalidParameter(format!("empty sampling range [{lo}, {hi}]")));
        }
    }
    let volume: f64 = bounds.iter().map(|(lo, hi)| hi - lo).product();
    let chunks = cfg.samples.div_ceil(CHUNK);
    let sums: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let count = CHUNK.min(cfg.samples - k * CHUNK);
            let mut x = vec![0.0; bounds.len()];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
                    *xi = lo + (hi - lo) * rng.random::<f64>();
                }
                let v = f(&x);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = sums
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = cfg.samples as f64;
    let mean = s / n;
    let variance = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(McEstimate {
        estimate: volume * mean,
        stderr: volume * (variance / n).sqrt(),
        samples: cfg.samples,
        seed: cfg.seed,
        algorithm: ALGORITHM,
    })
}

/// Sampling box for a concept: the bounding box of its core on its own
/// dimensions, grown until membership has dropped to `alpha_floor`.
/// Returns the dimensions and their ranges.
pub fn inflated_box(concept: &Concept, alpha_floor: f64) -> Result<(Vec<usize>, Vec<(f64, f64)>)> {
    let dims = concept.structure().dims_of(concept.domains())?;
    let bbox = concept.core().bounding_box();
    let reach = (concept.mu0() / alpha_floor).ln().max(0.0) / concept.c();
    let mut ranges = Vec::with_capacity(dims.len());
    for &d in &dims {
        let (wdom, wd) = concept
            .weights()
            .weights_of_dim(d)
            .expect("weights cover the concept's dimensions");
        let grow = reach / (wdom * wd.sqrt());
        let (lo, hi) = bbox[d];
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::Unbounded);
        }
        ranges.push((lo - grow, hi + grow));
    }
    Ok((dims, ranges))
}

/// Monte-Carlo estimate of the concept's size: the integral of its
/// membership function over its own dimensions.
pub fn mc_measure(concept: &Concept, cfg: &McConfig) -> Result<McEstimate> {
    cfg.check()?;
    let (dims, ranges) = inflated_box(concept, cfg.alpha_floor)?;
    let n = concept.structure().n();
    mc_integrate(
        |sample| {
            let mut x = vec![0.0; n];
            for (&d, &v) in dims.iter().zip(sample) {
                x[d] = v;
            }
            concept.membership(&x)
        },
        &ranges,
        cfg,
    )
}

/// Largest value of `min(μ_a, μ_b)` over a grid with spacing `resolution`
/// spanning the joint bounding box of both cores, with the point where it
/// is attained. Dimensions neither concept constrains are held at zero.
///
/// Clamping a point into that box never increases its distance to either
/// core, so the box contains a maximizer.
pub fn grid_argmax_min_membership(a: &Concept, b: &Concept, resolution: f64) -> Result<(f64, Vec<f64>)> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    if a.structure() != b.structure() {
        return Err(Error::SpaceMismatch);
    }
    let n = a.structure().n();
    let (ba, bb) = (a.core().bounding_box(), b.core().bounding_box());
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut total: u64 = 1;
    for d in 0..n {
        let (lo, hi) = [ba[d], bb[d]]
            .into_iter()
            .filter(|(lo, hi)| lo.is_finite() && hi.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (lo, hi)| (l.min(lo), h.max(hi)));
        let axis = if lo > hi {
            vec![0.0]
        } else {
            let steps = ((hi - lo) / resolution).ceil() as usize;
            (0..=steps).map(|i| (lo + i as f64 * resolution).min(hi)).collect()
        };
        total = total.saturating_mul(axis.len() as u64);
        axes.push(axis);
    }
    if total > MAX_GRID_POINTS {
        return Err(Error::TooLarge {
            what: "grid points",
            count: total.min(usize::MAX as u64) as usize,
            limit: MAX_GRID_POINTS as usize,
        });
    }

    // parallel over the first axis; ties go to the lowest grid index
    let inner: u64 = axes[1..].iter().map(|ax| ax.len() as u64).product();
    let (best, index) = (0..axes[0].len())
        .into_par_iter()
        .map(|i0| {
            let mut x: Vec<f64> = axes.iter().map(|ax| ax[0]).collect();
            x[0] = axes[0][i0];
            let mut best = (f64::NEG_INFINITY, u64::MAX);
            for rest in 0..inner {
                let mut r = rest;
                for d in (1..n).rev() {
                    let len = axes[d].len() as u64;
                    x[d] = axes[d][(r % len) as usize];
                    r /= len;
                }
                let v = a.membership(&x).min(b.membership(&x));
                if v > best.0 {
                    best = (v, i0 as u64 * inner + rest);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX),
            |p, q| if q.0 > p.0 || (q.0 == p.0 && q.1 < p.1) { q } else { p },
        );

    let mut point = vec![0.0; n];
    let mut r = index;
    for d in (0..n).rev() {
        let len = axes[d].len() as u64;
        point[d] = axes[d][(r % len) as usize];
        r /= len;
    }
    Ok((best, point))
}
