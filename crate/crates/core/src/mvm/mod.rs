//! Multi-valued maps `Φ: A → P(B)` and the exact audit of
//! `|A| = Σ_b Λ_Φ(b)`, where `Λ_Φ(b) = Σ_{a ∈ Φ^{-1}(b)} 1/|Φ(a)|`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::enumerate::{collect_walks, EnumSpec, WalkClass};
use crate::error::{Result, SawError};
use crate::lattice::{check_dim, project_h, Point, Step};
use crate::patterns::{find_occurrences, swap_pattern, type_counts, PatternPair, PatternType};
use crate::scalar::Rational;
use crate::walk::Walk;

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// A materialized multi-valued map: `images[i]` is `Φ(domain[i])`, sorted
/// and without repeats.
#[derive(Clone, Debug)]
pub struct MvmInstance<A, B> {
    domain: Vec<A>,
    images: Vec<Vec<B>>,
    codomain: Option<Vec<B>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub domain_size: usize,
    /// `|B|`: the declared codomain, or the set of hit elements if none was given.
    pub codomain_size: usize,
    pub hit: usize,
    #[serde(serialize_with = "ser_rational")]
    pub sum_lambda: Rational,
    pub identity_holds: bool,
    #[serde(serialize_with = "ser_rational")]
    pub max_lambda: Rational,
    pub worst: Option<String>,
    pub max_preimages: usize,
    /// `|A| ≤ |B| · max Λ`.
    pub bound_holds: bool,
}

impl<A, B: Ord + Clone + Debug> MvmInstance<A, B> {
    pub fn new(domain: Vec<A>, images: Vec<Vec<B>>, codomain: Option<Vec<B>>) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(SawError::InvalidSpec(format!(
                "{} domain elements but {} images",
                domain.len(),
                images.len()
            )));
        }
        let codomain = codomain.map(|mut c| {
            c.sort();
            c.dedup();
            c
        });
        let mut clean = Vec::with_capacity(images.len());
        for (i, mut img) in images.into_iter().enumerate() {
            img.sort();
            img.dedup();
            if img.is_empty() {
                return Err(SawError::EmptyImage(i));
            }
            if let Some(c) = &codomain {
                if img.iter().any(|b| c.binary_search(b).is_err()) {
                    return Err(SawError::ImageOutsideCodomain(i));
                }
            }
            clean.push(img);
        }
        Ok(MvmInstance {
            domain,
            images: clean,
            codomain,
        })
    }

    pub fn from_fn<F: FnMut(&A) -> Vec<B>>(
        domain: Vec<A>,
        mut phi: F,
        codomain: Option<Vec<B>>,
    ) -> Result<Self> {
        let images = domain.iter().map(&mut phi).collect();
        Self::new(domain, images, codomain)
    }

    pub fn domain(&self) -> &[A] {
        &self.domain
    }

    pub fn image(&self, i: usize) -> &[B] {
        &self.images[i]
    }

    pub fn codomain(&self) -> Option<&[B]> {
        self.codomain.as_deref()
    }

    pub fn preimage_counts(&self) -> BTreeMap<&B, usize> {
        let mut out = BTreeMap::new();
        for img in &self.images {
            for b in img {
                *out.entry(b).or_insert(0) += 1;
            }
        }
        out
    }

    /// `Λ_Φ(b)` for every hit `b`.
    pub fn lambdas(&self) -> BTreeMap<&B, Rational> {
        // group 1/|Φ(a)| terms by denominator before forming rationals
        let mut by_size: BTreeMap<&B, BTreeMap<usize, u64>> = BTreeMap::new();
        for img in &self.images {
            for b in img {
                *by_size.entry(b).or_default().entry(img.len()).or_insert(0) += 1;
            }
        }
        by_size
            .into_iter()
            .map(|(b, sizes)| {
                let lam = sizes.into_iter().fold(Rational::zero(), |acc, (size, c)| {
                    acc + Rational::new(BigInt::from(c), BigInt::from(size))
                });
                (b, lam)
            })
            .collect()
    }

    pub fn audit(&self) -> AuditReport {
        let lambdas = self.lambdas();
        let mut sum = Rational::zero();
        let mut max = Rational::zero();
        let mut worst = None;
        for (b, lam) in &lambdas {
            sum += lam;
            if *lam > max {
                max = lam.clone();
                worst = Some(format!("{b:?}"));
            }
        }
        let preimages = self.preimage_counts();
        let codomain_size = self.codomain.as_ref().map_or(lambdas.len(), Vec::len);
        let domain = Rational::from_integer(BigInt::from(self.domain.len()));
        AuditReport {
            domain_size: self.domain.len(),
            codomain_size,
            hit: lambdas.len(),
            identity_holds: sum == domain,
            bound_holds: domain <= Rational::from_integer(BigInt::from(codomain_size)) * &max,
            sum_lambda: sum,
            max_lambda: max,
            worst,
            max_preimages: preimages.values().copied().max().unwrap_or(0),
        }
    }
}

/// Convenience wrapper for [`MvmInstance::audit`].
pub fn audit_identity<A, B: Ord + Clone + Debug>(inst: &MvmInstance<A, B>) -> AuditReport {
    inst.audit()
}

fn max_exact_n(dim: usize) -> usize {
    match dim {
        2 => 14,
        3 => 10,
        _ => 8,
    }
}

fn feasible(dim: usize, n: usize) -> Result<()> {
    check_dim(dim)?;
    if n > max_exact_n(dim) {
        return Err(SawError::Infeasible(format!(
            "materialized map at d = {dim}, n = {n} (limit {})",
            max_exact_n(dim)
        )));
    }
    Ok(())
}

fn bridges(dim: usize, n: usize) -> Result<Vec<Walk>> {
    collect_walks(EnumSpec::new(dim, n, WalkClass::Bridge))
}

/// `(γ_1, γ_2) ↦ γ_1 ∘ [+e_1, +e_2] ∘ γ_2` on `⋃_j SAB^M_{n−2j} × SAB_{2j−2}`,
/// where `SAB^M_k` are the bridges of length `k` with fewer than `m`
/// z-renewal times. `j` runs over `j_range` clipped to `1..=n/2`.
pub fn map_insert_z(
    dim: usize,
    n: usize,
    m: usize,
    j_range: RangeInclusive<usize>,
) -> Result<MvmInstance<(Walk, Walk), Walk>> {
    feasible(dim, n)?;
    let connector = Walk::from_steps(dim, vec![Step::new(1, 1)?, Step::new(2, 1)?])?;
    let lo = (*j_range.start()).max(1);
    let hi = (*j_range.end()).min(n / 2);
    let mut domain = Vec::new();
    for j in lo..=hi {
        let firsts: Vec<Walk> = bridges(dim, n - 2 * j)?
            .into_iter()
            .filter(|w| w.z_renewal_times().is_ok_and(|z| z.len() < m))
            .collect();
        let seconds = bridges(dim, 2 * j - 2)?;
        for a in &firsts {
            for b in &seconds {
                domain.push((a.clone(), b.clone()));
            }
        }
    }
    MvmInstance::from_fn(
        domain,
        |(a, b)| {
            let w = a
                .concat(&connector)
                .and_then(|w| w.concat(b))
                .expect("same dimension");
            vec![w]
        },
        Some(bridges(dim, n)?),
    )
}

/// The unfold-and-replace map on half-space walks ending at `x`, with the
/// two counting claims about it checked element by element.
#[derive(Clone, Debug)]
pub struct UnfoldReplace {
    pub instance: MvmInstance<Walk, Walk>,
    /// Last renewal time of `Unf(γ)` for each domain element.
    pub ren: Vec<usize>,
    /// `|Φ(γ)| = |SAB_ren|` for every `γ`.
    pub image_sizes_match: bool,
    /// `|Φ^{-1}(b)|` never exceeds the number of bridges of length
    /// `ren(b)` whose endpoint projects to `π_1(x + b_ren − b_{n+1})`.
    pub preimage_bound_holds: bool,
}

fn last_renewal(w: &Walk) -> Result<usize> {
    Ok(*w
        .renewal_report()?
        .renewal_times
        .last()
        .expect("0 is always a renewal time"))
}

pub fn map_unfold_replace(dim: usize, n: usize, x: &Point) -> Result<UnfoldReplace> {
    feasible(dim, n + 1)?;
    if x.dim() != dim {
        return Err(SawError::DimensionMismatch {
            left: x.dim(),
            right: dim,
        });
    }
    let domain = collect_walks(EnumSpec::new(dim, n, WalkClass::Halfspace).with_endpoint(*x))?;
    let by_len: Vec<Vec<Walk>> = (0..=n + 1)
        .map(|r| bridges(dim, r))
        .collect::<Result<_>>()?;
    let mut ren = Vec::with_capacity(domain.len());
    let mut images = Vec::with_capacity(domain.len());
    for g in &domain {
        let u = g.unfold()?;
        let r = last_renewal(&u)?;
        let tail = u.segment(r, n + 1);
        let img = by_len[r]
            .iter()
            .map(|beta| beta.concat(&tail))
            .collect::<Result<Vec<_>>>()?;
        ren.push(r);
        images.push(img);
    }
    let codomain = if domain.is_empty() {
        Vec::new()
    } else {
        collect_walks(EnumSpec::new(dim, n + 1, WalkClass::Halfspace))?
    };
    let instance = MvmInstance::new(domain, images, Some(codomain))?;

    let image_sizes_match = ren
        .iter()
        .enumerate()
        .all(|(i, &r)| instance.image(i).len() == by_len[r].len());

    let mut projections: HashMap<(usize, Point), u64> = HashMap::new();
    for (r, ws) in by_len.iter().enumerate() {
        for w in ws {
            *projections
                .entry((r, project_h(&w.endpoint())))
                .or_insert(0) += 1;
        }
    }
    let mut preimage_bound_holds = true;
    for (b, count) in instance.preimage_counts() {
        let r = last_renewal(b)?;
        let target = project_h(&x.add(&b.vertex(r)).sub(&b.endpoint()));
        let bound = projections.get(&(r, target)).copied().unwrap_or(0);
        if count as u64 > bound {
            preimage_bound_holds = false;
            break;
        }
    }
    Ok(UnfoldReplace {
        instance,
        ren,
        image_sizes_match,
        preimage_bound_holds,
    })
}

/// Members with `t + 1` type II patterns, each mapped to the walks obtained
/// by turning one of its type II patterns into type I. The codomain is the
/// members of `family` with `t` type II patterns.
pub fn map_pattern_swap(
    pp: &PatternPair,
    family: &[Walk],
    t: usize,
) -> Result<MvmInstance<Walk, Walk>> {
    let mut domain = Vec::new();
    let mut codomain = Vec::new();
    for w in family {
        let (_, t_ii) = type_counts(w, pp)?;
        if t_ii == t + 1 {
            domain.push(w.clone());
        } else if t_ii == t {
            codomain.push(w.clone());
        }
    }
    let mut images = Vec::with_capacity(domain.len());
    for a in &domain {
        let occ = find_occurrences(a, pp)?;
        let img = occ
            .iter()
            .enumerate()
            .filter(|(_, o)| o.kind == PatternType::II)
            .map(|(i, _)| swap_pattern(a, pp, i))
            .collect::<Result<Vec<_>>>()?;
        images.push(img);
    }
    MvmInstance::new(domain, images, Some(codomain))
}

/// `Σ_{γ} T_I(γ) / (T_II(γ) + 1)` over `walks`.
pub fn swap_weight_sum(pp: &PatternPair, walks: &[Walk]) -> Result<Rational> {
    let mut sum = Rational::zero();
    for w in walks {
        let (t_i, t_ii) = type_counts(w, pp)?;
        sum += Rational::new(BigInt::from(t_i), BigInt::from(t_ii + 1));
    }
    Ok(sum)
}
