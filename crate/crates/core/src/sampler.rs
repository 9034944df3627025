//! Pivot-algorithm Markov chain on self-avoiding walks of fixed length.
//!
//! A proposal picks a site `i` uniformly in `0..n` and a non-identity
//! lattice symmetry `g`, and replaces every vertex after `i` by
//! `γ_i + g(γ_j − γ_i)`. It is accepted iff the result is self-avoiding.
//! Site `0` is included: without it the first step could never change.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Result, SawError};
use crate::lattice::{check_dim, Point, Step, Symmetry};
use crate::walk::Walk;

/// Batches used for batch-means error bars.
pub const BATCHES: usize = 20;
const BOOTSTRAP_RESAMPLES: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PivotConfig {
    pub dim: usize,
    pub n: usize,
    pub seed: u64,
    /// Accepted pivots before the first sample; `None` means `10 n`.
    pub warmup: Option<usize>,
    pub samples: usize,
    /// Proposals between samples; `None` means `max(1, n / 10)`.
    pub thinning: Option<usize>,
    /// Side of the square bins of the endpoint histogram; `None` picks 1 for
    /// `n ≤ 16` and about `√n / 4` beyond.
    pub histogram_bin: Option<i32>,
    /// Motif whose per-step density is reported.
    pub probe: Vec<Step>,
}

impl PivotConfig {
    pub fn new(dim: usize, n: usize, seed: u64, samples: usize) -> Self {
        PivotConfig {
            dim,
            n,
            seed,
            warmup: None,
            samples,
            thinning: None,
            histogram_bin: None,
            probe: vec![Step::up(), Step::up()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        if self.n == 0 {
            return Err(SawError::InvalidConfig("n must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(SawError::InvalidConfig("samples must be at least 1".into()));
        }
        if self.thinning == Some(0) {
            return Err(SawError::InvalidConfig(
                "thinning must be at least 1".into(),
            ));
        }
        if matches!(self.histogram_bin, Some(b) if b < 1) {
            return Err(SawError::InvalidConfig(
                "histogram bin must be at least 1".into(),
            ));
        }
        if self.probe.is_empty() || self.probe.iter().any(|s| !s.fits(self.dim)) {
            return Err(SawError::InvalidConfig(
                "probe motif must be nonempty and fit the dimension".into(),
            ));
        }
        Ok(())
    }

    pub fn warmup_pivots(&self) -> usize {
        self.warmup.unwrap_or(10 * self.n)
    }

    pub fn thinning_proposals(&self) -> usize {
        self.thinning.unwrap_or((self.n / 10).max(1))
    }

    pub fn bin(&self) -> i32 {
        self.histogram_bin.unwrap_or(if self.n <= 16 {
            1
        } else {
            ((self.n as f64).sqrt() / 4.0).round().max(1.0) as i32
        })
    }
}

pub struct PivotChain {
    rng: ChaCha8Rng,
    points: Vec<Point>,
    index: FxHashMap<Point, usize>,
    scratch: Vec<Point>,
    group: Vec<Symmetry>,
    proposals: u64,
    accepted: u64,
}

impl PivotChain {
    /// Starts from the straight walk along `+e_1`.
    pub fn new(dim: usize, n: usize, seed: u64) -> Result<Self> {
        check_dim(dim)?;
        let mut points = Vec::with_capacity(n + 1);
        let mut p = Point::origin(dim)?;
        points.push(p);
        for _ in 0..n {
            p = p.step(Step::up());
            points.push(p);
        }
        let index = points.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        Ok(PivotChain {
            rng: ChaCha8Rng::seed_from_u64(seed),
            points,
            index,
            scratch: Vec::with_capacity(n + 1),
            group: Symmetry::group(dim).into_iter().skip(1).collect(),
            proposals: 0,
            accepted: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn endpoint(&self) -> Point {
        self.points[self.n()]
    }

    pub fn walk(&self) -> Walk {
        let steps = self
            .points
            .windows(2)
            .map(|w| {
                w[0].step_to(&w[1])
                    .expect("chain states are nearest-neighbour paths")
            })
            .collect();
        Walk::new(self.points[0], steps).expect("steps fit the dimension")
    }

    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// One pivot proposal; returns whether it was accepted.
    pub fn propose(&mut self) -> bool {
        let n = self.n();
        self.proposals += 1;
        if n == 0 {
            return false;
        }
        let site = self.rng.random_range(0..n);
        let g = self.group[self.rng.random_range(0..self.group.len())];
        let pivot = self.points[site];
        self.scratch.clear();
        for j in site + 1..=n {
            let q = pivot.add(&g.apply(&self.points[j].sub(&pivot)));
            if let Some(&k) = self.index.get(&q) {
                if k <= site {
                    return false;
                }
            }
            self.scratch.push(q);
        }
        for j in site + 1..=n {
            self.index.remove(&self.points[j]);
        }
        for (off, &q) in self.scratch.iter().enumerate() {
            let j = site + 1 + off;
            self.points[j] = q;
            self.index.insert(q, j);
        }
        self.accepted += 1;
        true
    }

    /// Proposes until `count` pivots have been accepted.
    pub fn advance_accepted(&mut self, count: usize) {
        let mut done = 0;
        while done < count {
            if self.propose() {
                done += 1;
            }
        }
    }
}

/// Seeded stream of thinned chain states as walks.
pub struct PivotSamples {
    chain: PivotChain,
    remaining: usize,
    thinning: usize,
}

impl Iterator for PivotSamples {
    type Item = Walk;

    fn next(&mut self) -> Option<Walk> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        for _ in 0..self.thinning {
            self.chain.propose();
        }
        Some(self.chain.walk())
    }
}

pub fn pivot_sample(cfg: &PivotConfig) -> Result<PivotSamples> {
    cfg.validate()?;
    let mut chain = PivotChain::new(cfg.dim, cfg.n, cfg.seed)?;
    chain.advance_accepted(cfg.warmup_pivots());
    Ok(PivotSamples {
        chain,
        remaining: cfg.samples,
        thinning: cfg.thinning_proposals(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleStats {
    pub config: PivotConfig,
    pub msd_mean: f64,
    /// Standard error of `msd_mean` from batch means.
    pub msd_stderr: f64,
    /// Mean squared endpoint norm within each of [`BATCHES`] consecutive batches.
    pub msd_batches: Vec<f64>,
    pub histogram_bin: i32,
    /// Endpoint counts keyed by the lower corner of their bin.
    pub endpoint_histogram: BTreeMap<Point, u64>,
    pub probe_density: f64,
    /// Post-warmup acceptance fraction.
    pub acceptance_rate: f64,
}

impl SampleStats {
    /// Total-variation distance between the binned empirical endpoint law
    /// and `exact` (probabilities keyed by point, binned the same way).
    pub fn total_variation<'a, I>(&self, exact: I) -> f64
    where
        I: IntoIterator<Item = (&'a Point, f64)>,
    {
        let total = self.config.samples as f64;
        let mut diff: BTreeMap<Point, f64> = self
            .endpoint_histogram
            .iter()
            .map(|(p, &c)| (*p, c as f64 / total))
            .collect();
        for (p, q) in exact {
            *diff.entry(bin_of(p, self.histogram_bin)).or_insert(0.0) -= q;
        }
        diff.values().map(|d| d.abs()).sum::<f64>() / 2.0
    }
}

fn bin_of(p: &Point, bin: i32) -> Point {
    let c: Vec<i32> = p
        .coords()
        .iter()
        .map(|&x| x.div_euclid(bin) * bin)
        .collect();
    Point::new(&c).expect("same dimension")
}

fn probe_hits(steps: &[Step], probe: &[Step]) -> usize {
    steps.windows(probe.len()).filter(|w| *w == probe).count()
}

pub fn sample_stats(cfg: &PivotConfig) -> Result<SampleStats> {
    cfg.validate()?;
    let mut chain = PivotChain::new(cfg.dim, cfg.n, cfg.seed)?;
    chain.advance_accepted(cfg.warmup_pivots());
    let (p0, a0) = (chain.proposals(), chain.accepted());
    let thinning = cfg.thinning_proposals();
    let bin = cfg.bin();
    let mut hist = BTreeMap::new();
    let mut msd = Vec::with_capacity(cfg.samples);
    let mut hits = 0usize;
    let mut steps = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.samples {
        for _ in 0..thinning {
            chain.propose();
        }
        let end = chain.endpoint();
        msd.push(end.norm_sq() as f64);
        *hist.entry(bin_of(&end, bin)).or_insert(0) += 1;
        steps.clear();
        steps.extend(
            chain
                .points()
                .windows(2)
                .map(|w| w[0].step_to(&w[1]).expect("adjacent")),
        );
        hits += probe_hits(&steps, &cfg.probe);
    }
    let windows = (cfg.n + 1).saturating_sub(cfg.probe.len());
    let probe_density = if windows == 0 {
        0.0
    } else {
        hits as f64 / (windows as f64 * cfg.samples as f64)
    };
    let batches = batch_means(&msd);
    let msd_mean = msd.iter().sum::<f64>() / msd.len() as f64;
    let proposals = chain.proposals() - p0;
    Ok(SampleStats {
        config: cfg.clone(),
        msd_mean,
        msd_stderr: stderr(&batches),
        msd_batches: batches,
        histogram_bin: bin,
        endpoint_histogram: hist,
        probe_density,
        acceptance_rate: if proposals == 0 {
            0.0
        } else {
            (chain.accepted() - a0) as f64 / proposals as f64
        },
    })
}

fn batch_means(xs: &[f64]) -> Vec<f64> {
    if xs.len() < BATCHES {
        return Vec::new();
    }
    let size = xs.len() / BATCHES;
    xs.chunks_exact(size)
        .take(BATCHES)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect()
}

fn stderr(batches: &[f64]) -> f64 {
    let b = batches.len();
    if b < 2 {
        return f64::NAN;
    }
    let mean = batches.iter().sum::<f64>() / b as f64;
    let var = batches.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (b - 1) as f64;
    (var / b as f64).sqrt()
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub ladder: Vec<usize>,
    pub runs: Vec<SampleStats>,
    /// Slope of `log E|Γ_n|²` against `log n`, an estimate of `2ν`.
    pub two_nu: f64,
    pub two_nu_stderr: f64,
    /// Central 95% bootstrap interval for `two_nu`.
    pub two_nu_interval: (f64, f64),
    pub bootstrap_resamples: usize,
}

/// Derived seed for the chain at ladder length `n`.
pub fn ladder_seed(seed: u64, n: usize) -> u64 {
    seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs one chain per ladder length (in parallel, each with its own derived
/// seed) and fits the growth exponent of the mean-square displacement.
pub fn estimate_exponents(base: &PivotConfig, ladder: &[usize]) -> Result<ExponentEstimate> {
    if ladder.len() < 2 {
        return Err(SawError::InvalidConfig(
            "the ladder needs at least two lengths".into(),
        ));
    }
    if base.samples < 2 * BATCHES {
        return Err(SawError::InvalidConfig(format!(
            "insufficient samples: need at least {} per length for error bars",
            2 * BATCHES
        )));
    }
    let cfgs: Vec<PivotConfig> = ladder
        .iter()
        .map(|&n| PivotConfig {
            n,
            seed: ladder_seed(base.seed, n),
            ..base.clone()
        })
        .collect();
    for c in &cfgs {
        c.validate()?;
    }
    let runs = cfgs
        .par_iter()
        .map(sample_stats)
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = ladder.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = runs.iter().map(|r| r.msd_mean.ln()).collect();
    let two_nu = fit_slope(&xs, &ys);

    let mut rng = ChaCha8Rng::seed_from_u64(base.seed ^ 0xB007_57AA);
    let mut slopes = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let ys: Vec<f64> = runs
            .iter()
            .map(|r| {
                let b = &r.msd_batches;
                let m = (0..b.len())
                    .map(|_| b[rng.random_range(0..b.len())])
                    .sum::<f64>()
                    / b.len() as f64;
                m.ln()
            })
            .collect();
        slopes.push(fit_slope(&xs, &ys));
    }
    slopes.sort_by(f64::total_cmp);
    let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
    let sd =
        (slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (slopes.len() - 1) as f64).sqrt();
    let q = |f: f64| slopes[((slopes.len() - 1) as f64 * f).round() as usize];
    Ok(ExponentEstimate {
        ladder: ladder.to_vec(),
        runs,
        two_nu,
        two_nu_stderr: sd,
        two_nu_interval: (q(0.025), q(0.975)),
        bootstrap_resamples: BOOTSTRAP_RESAMPLES,
    })
}
