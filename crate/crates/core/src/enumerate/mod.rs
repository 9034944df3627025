//! Exact enumeration and the distributions computed from it.

mod engine;
mod report;
mod table;

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use engine::{run_enumeration, EnumSpec, Enumerator, WalkClass, WalkView, DEFAULT_SPLIT_DEPTH};
pub use report::{ReportEntry, ReportKey, TableReport};
pub use table::{CountTable, Distribution};

use crate::error::{Result, SawError};
use crate::lattice::{check_dim, Point};
use crate::scalar::{ln_count, Count, Rational, Weight};
use crate::walk::Walk;

fn enumerator(dim: usize, n: usize, class: WalkClass) -> Result<Enumerator> {
    Enumerator::new(EnumSpec::new(dim, n, class))
}

fn histogram<K, F>(e: &Enumerator, key: F) -> CountTable<K>
where
    K: Ord + std::hash::Hash + Eq + Send,
    F: Fn(&WalkView<'_>) -> K + Sync + Send,
{
    let map = e.fold(
        HashMap::<K, u64>::new,
        |m, v| *m.entry(key(v)).or_insert(0) += 1,
        |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        },
    );
    map.into_iter().collect()
}

pub fn count_class(dim: usize, n: usize, class: WalkClass) -> Result<Count> {
    Ok(enumerator(dim, n, class)?.count())
}

/// Every walk matching `spec`, in enumeration order.
pub fn collect_walks(spec: EnumSpec) -> Result<Vec<Walk>> {
    let mut out = Vec::new();
    Enumerator::new(spec)?
        .threads(1)
        .for_each(|v| out.push(v.to_walk()));
    Ok(out)
}

/// Endpoint counts over a class.
pub fn endpoint_table(dim: usize, n: usize, class: WalkClass) -> Result<CountTable<Point>> {
    Ok(histogram(&enumerator(dim, n, class)?, |v| v.endpoint()))
}

/// Law of `Γ_n` under the uniform measure on `SAW_n`.
pub fn endpoint_distribution(dim: usize, n: usize) -> Result<Distribution<Point>> {
    Ok(Distribution::from_table(endpoint_table(
        dim,
        n,
        WalkClass::Walk,
    )?))
}

/// Law of `Γ_{⌊n/2⌋}` under the uniform measure on `SAW_n`.
pub fn midpoint_distribution(dim: usize, n: usize) -> Result<Distribution<Point>> {
    let e = enumerator(dim, n, WalkClass::Walk)?;
    let mid = n / 2;
    Ok(Distribution::from_table(histogram(&e, move |v| {
        v.vertex(mid)
    })))
}

/// `(sup_x P)^2 · n`, the square of the midpoint sup scaled by `√n`, kept exact.
pub fn scaled_sup_squared(dist: &Distribution<Point>, n: usize) -> Rational {
    let s = dist.sup_value();
    &s * &s * Rational::from_integer(n.into())
}

/// Fraction of `SAW_n` whose endpoint neighbours the origin.
pub fn closing_probability(dim: usize, n: usize) -> Result<Rational> {
    let c = count_class(dim, n, WalkClass::Walk)?;
    if n.is_multiple_of(2) {
        return Ok(Rational::zero());
    }
    let closing = count_class(dim, n, WalkClass::Closing)?;
    Ok(Rational::from_counts(&closing, &c))
}

/// Closing walks against oriented polygons (translation classes of their
/// cyclic shifts).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonIdentity {
    pub dim: usize,
    pub n: usize,
    #[serde(serialize_with = "report::ser_decimal")]
    pub closing: Count,
    #[serde(serialize_with = "report::ser_decimal")]
    pub polygons: Count,
    /// `closing / polygons` when every polygon has the same number of rooted closing walks.
    pub multiplicity: Option<u64>,
    pub matches_n_plus_1: bool,
}

pub fn polygon_identity_check(dim: usize, n: usize) -> Result<PolygonIdentity> {
    check_dim(dim)?;
    let mut report = PolygonIdentity {
        dim,
        n,
        closing: Count::zero(),
        polygons: Count::zero(),
        multiplicity: None,
        matches_n_plus_1: false,
    };
    if n.is_multiple_of(2) {
        return Ok(report);
    }
    let e = enumerator(dim, n, WalkClass::Closing)?;
    let keys = e.fold(
        HashMap::<Vec<u8>, u64>::new,
        |m, v| {
            let key = v.to_walk().polygon_key().expect("closing walk");
            *m.entry(key).or_insert(0) += 1;
        },
        |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        },
    );
    report.closing = keys.values().map(|&c| BigUint::from(c)).sum();
    report.polygons = BigUint::from(keys.len());
    let sizes: HashSet<u64> = keys.values().copied().collect();
    if sizes.len() == 1 {
        report.multiplicity = sizes.into_iter().next();
    }
    report.matches_n_plus_1 = report.multiplicity == Some(n as u64 + 1);
    Ok(report)
}

/// Hanging-time counts over a class, with every index `0..=n` present.
pub fn hang_table(dim: usize, n: usize, class: WalkClass) -> Result<CountTable<usize>> {
    let e = enumerator(dim, n, class)?;
    let mut table = if class == WalkClass::Closing && n.is_multiple_of(2) {
        CountTable::new()
    } else {
        histogram(&e, |v| v.hang_time())
    };
    for i in 0..=n {
        table.touch(i);
    }
    Ok(table)
}

/// Hanging-time law over closing walks of length `n`.
pub fn hang_histogram_closing(dim: usize, n: usize) -> Result<Distribution<usize>> {
    Ok(Distribution::from_table(hang_table(
        dim,
        n,
        WalkClass::Closing,
    )?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticParams {
    pub mu_hat: f64,
    pub c_hw_hat: f64,
    /// Filled in from a sampler run; exact enumeration leaves it empty.
    pub probe_density: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub dim: usize,
    pub n_max: usize,
    /// `c_0, …, c_{n_max}`.
    #[serde(serialize_with = "report::ser_decimal_vec")]
    pub counts: Vec<Count>,
    pub submultiplicative: bool,
    /// Pairs `(n, m)` with `c_{n+m} > c_n c_m`.
    pub violations: Vec<(usize, usize)>,
    pub params: AsymptoticParams,
}

pub fn growth_checks(dim: usize, n_max: usize) -> Result<GrowthReport> {
    if n_max < 2 {
        return Err(SawError::InvalidSpec(
            "growth checks need n_max >= 2".into(),
        ));
    }
    let counts = (0..=n_max)
        .map(|n| count_class(dim, n, WalkClass::Walk))
        .collect::<Result<Vec<_>>>()?;
    let mut violations = Vec::new();
    for n in 1..n_max {
        for m in n..=n_max - n {
            if counts[n + m] > &counts[n] * &counts[m] {
                violations.push((n, m));
            }
        }
    }
    let ln_mu = ln_count(&counts[n_max]) / n_max as f64;
    let c_hw_hat = (1..=n_max)
        .map(|n| (ln_count(&counts[n]) - n as f64 * ln_mu) / (n as f64).sqrt())
        .fold(0.0f64, f64::max);
    Ok(GrowthReport {
        dim,
        n_max,
        counts,
        submultiplicative: violations.is_empty(),
        violations,
        params: AsymptoticParams {
            mu_hat: ln_mu.exp(),
            c_hw_hat,
            probe_density: None,
        },
    })
}

/// Partial sums `Σ_{j=1..J} |SAB_{2j}| mu^{-2j}` for `J = 1..=j_max`.
pub fn bridge_series(dim: usize, mu: f64, j_max: usize) -> Result<Vec<f64>> {
    if mu.is_nan() || mu <= 0.0 {
        return Err(SawError::Degenerate(format!(
            "mu must be positive, got {mu}"
        )));
    }
    let mut sums = Vec::with_capacity(j_max);
    let mut acc = 0.0;
    for j in 1..=j_max {
        let b = count_class(dim, 2 * j, WalkClass::Bridge)?;
        acc += (ln_count(&b) - 2.0 * j as f64 * mu.ln()).exp();
        sums.push(acc);
    }
    Ok(sums)
}

/// Law of the number of z-renewal times of a uniform bridge of length `n`.
pub fn z_renewal_histogram(dim: usize, n: usize) -> Result<Distribution<usize>> {
    let e = enumerator(dim, n, WalkClass::Bridge)?;
    Ok(Distribution::from_table(histogram(&e, |v| {
        v.z_renewal_count()
    })))
}

/// `P_{SAB_n}(|zR_Γ| < m)`.
pub fn z_renewal_deficit(dim: usize, n: usize, m: usize) -> Result<Rational> {
    let hist = z_renewal_histogram(dim, n)?;
    Ok(hist
        .iter()
        .filter(|(&k, _)| k < m)
        .fold(Rational::zero(), |acc, (_, p)| acc + p))
}

/// Probability that a uniform walk of length `n_total` closes, given that
/// it starts with `gamma` and its lexicographic maximum is `gamma`'s
/// endpoint. `None` when no such walk exists.
pub fn closing_score(gamma: &Walk, n_total: usize) -> Result<Option<Rational>> {
    if !gamma.is_self_avoiding() {
        return Err(SawError::NotSelfAvoiding);
    }
    let h = gamma.hang_time()?;
    if h != gamma.len() {
        return Err(SawError::HangMismatch {
            expected: gamma.len(),
            found: h,
        });
    }
    if gamma.len() > n_total {
        return Err(SawError::InvalidSpec(format!(
            "prefix length {} exceeds n = {n_total}",
            gamma.len()
        )));
    }
    let spec = EnumSpec::new(gamma.dim(), n_total, WalkClass::Walk)
        .with_prefix(gamma.at_origin())
        .with_hang_time(h);
    let (total, closing) = Enumerator::new(spec)?.fold(
        || (0u64, 0u64),
        |(t, c), v| {
            *t += 1;
            if v.endpoint().l1_norm() == 1 {
                *c += 1;
            }
        },
        |a, b| (a.0 + b.0, a.1 + b.1),
    );
    if total == 0 {
        return Ok(None);
    }
    Ok(Some(Rational::new(closing.into(), total.into())))
}

/// Indices `ℓ` for which the cyclic segment ending at the hanging vertex,
/// `γ[hang−ℓ, hang]`, has closing score at least `threshold` at length `n_ref`.
pub fn ticked_indices(w: &Walk, n_ref: usize, threshold: &Rational) -> Result<Vec<usize>> {
    if !w.is_closing() {
        return Err(SawError::NotClosing);
    }
    let period = w.len() as i64 + 1;
    let hang = w.hang_time()? as i64;
    let mut ticked = Vec::new();
    for l in 0..=w.len().min(n_ref) {
        let seg = w
            .cyclic_shift((hang - l as i64).rem_euclid(period))?
            .segment(0, l);
        if let Some(score) = closing_score(&seg, n_ref)? {
            if &score >= threshold {
                ticked.push(l);
            }
        }
    }
    Ok(ticked)
}

/// `u64` view of small counts, for reports and tests.
pub fn count_u64(c: &Count) -> Option<u64> {
    c.to_u64()
}
