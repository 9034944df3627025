//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the lines reach stdout. Exits non-zero unless the failing
//! criteria are exactly `KNOWN_FAILURES`.

mod common;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use saw_core::enumerate::{
    bridge_series, closing_probability, collect_walks, count_u64, endpoint_distribution,
    endpoint_table, growth_checks, hang_histogram_closing, midpoint_distribution,
    scaled_sup_squared,
};
use saw_core::mvm::{map_insert_z, map_unfold_replace};
use saw_core::patterns::hypergeom_law;
use saw_core::patterns::{
    default_pattern_pair, find_occurrences, shell_of, swap_pattern, validate_pattern_pair,
};
use saw_core::patterns::{shell_members, stacked_shells};
use saw_core::sampler::{estimate_exponents, sample_stats, PivotConfig};
use saw_core::scalar::ratio_to_f64;
use saw_core::{EnumSpec, Enumerator, Point, Rational, Walk, WalkClass, Weight};

const ORACLE_N_D2: usize = 12;
const ORACLE_N_D3: usize = 8;
const SWEEP_BUDGET: Duration = Duration::from_secs(60);
const HANG_N_MAX: usize = 13;
const CLOSING_NS: std::ops::RangeInclusive<usize> = 3..=15;
const SUP_NS: std::ops::RangeInclusive<usize> = 2..=16;
const MIDPOINT_NS: std::ops::RangeInclusive<usize> = 4..=16;
const INSERT_Z_N: usize = 10;
const INSERT_Z_M: usize = 2;
const UNFOLD_REPLACE_N: usize = 8;
const UNF_N_MAX: usize = 8;
const GROWTH_N_MAX: usize = 16;
const BRIDGE_J_MAX: usize = 7;
const CORPUS_SLOTS: usize = 3;
const SWAP_WORD: usize = 5;
const HYPERGEOM_MAX: usize = 60;
const GAUSS_HALF_M: usize = 5_000;
const GAUSS_TOL: f64 = 1e-2;
const TV_N: usize = 8;
const TV_SAMPLES: usize = 1_000_000;
const TV_THINNING: usize = 8;
const TV_TOL: f64 = 0.02;
const LADDER: [usize; 4] = [200, 400, 800, 1600];
const LADDER_SAMPLES: usize = 10_000;
const TWO_NU_RANGE: (f64, f64) = (1.4, 1.6);
const PROBE_N: usize = 2000;
const PROBE_SAMPLES: usize = 2000;
const PROBE_MIN: f64 = 0.05;
const SEED: u64 = 20_240_601;
/// Criterion 5 is false at n = 5: the midpoint index is 2 for both n = 4 and
/// n = 5, the sup moves from 4/25 to 23/142 and the extra sqrt(5/4) pushes
/// it over. Every n in 6..=16 is below the n = 4 value.
const KNOWN_FAILURES: [usize; 1] = [5];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn r(a: u64, b: u64) -> Rational {
    Rational::new(a.into(), b.into())
}

fn engine_counts(d: usize, n: usize) -> [u64; 4] {
    let mut out = [0; 4];
    for (i, class) in WalkClass::ALL.iter().enumerate() {
        let e = Enumerator::new(EnumSpec::new(d, n, *class))
            .unwrap()
            .threads(1);
        out[i] = count_u64(&e.count()).unwrap();
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let mut elapsed = Duration::ZERO;
    for (d, n_max) in [(2, ORACLE_N_D2), (3, ORACLE_N_D3)] {
        for n in 0..=n_max {
            let t = Instant::now();
            let got = engine_counts(d, n);
            elapsed += t.elapsed();
            let want = common::class_counts(d, n);
            if got != want {
                return Err(format!("d={d} n={n}: engine {got:?} vs oracle {want:?}"));
            }
        }
    }
    if elapsed > SWEEP_BUDGET {
        return Err(format!("sweep took {elapsed:?}"));
    }
    Ok(format!(
        "4 classes, d=2 n<={ORACLE_N_D2}, d=3 n<={ORACLE_N_D3}; engine sweep {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn hang_uniformity() -> Outcome {
    for n in (1..=HANG_N_MAX).step_by(2) {
        let h = hang_histogram_closing(2, n).map_err(|e| e.to_string())?;
        let counts: HashSet<_> = h.table().iter().map(|(_, c)| c.clone()).collect();
        if h.table().len() != n + 1 || counts.len() != 1 {
            return Err(format!("n={n}: {:?}", h.table().iter().collect::<Vec<_>>()));
        }
    }
    Ok(format!("equal counts over 0..=n, odd n<={HANG_N_MAX}"))
}

fn closing_decreasing() -> Outcome {
    let ps: Vec<Rational> = CLOSING_NS
        .step_by(2)
        .map(|n| closing_probability(2, n).unwrap())
        .collect();
    if ps[0] != r(2, 9) {
        return Err(format!("n=3 value {}", ps[0]));
    }
    if let Some(i) = ps.windows(2).position(|w| w[1] >= w[0]) {
        return Err(format!("not decreasing at n={}", 3 + 2 * i));
    }
    Ok(format!("n=3 is 2/9, n=15 is {}", ps.last().unwrap()))
}

fn sup_non_increasing() -> Outcome {
    let sups: Vec<Rational> = SUP_NS
        .map(|n| endpoint_distribution(2, n).unwrap().sup_value())
        .collect();
    if let Some(i) = sups.windows(2).position(|w| w[1] > w[0]) {
        return Err(format!("increase from n={} to n={}", i + 2, i + 3));
    }
    Ok(format!("sup at n=16 is {}", sups.last().unwrap()))
}

fn midpoint_bound() -> Outcome {
    let base = scaled_sup_squared(&midpoint_distribution(2, 4).unwrap(), 4);
    let mut over = Vec::new();
    let mut worst = Rational::zero();
    for n in MIDPOINT_NS {
        let v = scaled_sup_squared(&midpoint_distribution(2, n).unwrap(), n);
        if v > base {
            over.push(format!("n={n} {:.4}", v.as_f64()));
        }
        if n > 4 && v > worst {
            worst = v;
        }
    }
    if !over.is_empty() {
        return Err(format!(
            "(sup*sqrt n)^2 at n=4 is {base} ({:.4}), exceeded at {}",
            base.as_f64(),
            over.join(", ")
        ));
    }
    Ok(format!(
        "(sup*sqrt n)^2 at n=4 is {base}; largest later value {:.4}",
        worst.as_f64()
    ))
}

fn mvm_audits() -> Outcome {
    let inst =
        map_insert_z(2, INSERT_Z_N, INSERT_Z_M, 1..=INSERT_Z_N / 2).map_err(|e| e.to_string())?;
    let a = inst.audit();
    if !a.identity_holds || !a.bound_holds || a.max_preimages > INSERT_Z_M {
        return Err(format!("insert_z: {a:?}"));
    }
    let xs =
        endpoint_table(2, UNFOLD_REPLACE_N, WalkClass::Halfspace).map_err(|e| e.to_string())?;
    let mut domain = 0;
    for (x, _) in xs.iter() {
        let u = map_unfold_replace(2, UNFOLD_REPLACE_N, x).map_err(|e| e.to_string())?;
        let b = u.instance.audit();
        if !b.identity_holds || !b.bound_holds || !u.image_sizes_match || !u.preimage_bound_holds {
            return Err(format!("unfold_replace x={x}: {b:?}"));
        }
        domain += b.domain_size;
    }
    Ok(format!(
        "insert_z |A|={} max preimages {}; unfold_replace over {} endpoints, {domain} walks",
        a.domain_size,
        a.max_preimages,
        xs.len()
    ))
}

fn unfolding() -> Outcome {
    let mut total = 0;
    for n in 1..=UNF_N_MAX {
        let mut images: HashMap<Point, HashSet<Walk>> = HashMap::new();
        for g in collect_walks(EnumSpec::new(2, n, WalkClass::Halfspace)).unwrap() {
            let u = g.unfold().map_err(|e| e.to_string())?;
            if u.len() != n + 1 || !common::is_self_avoiding(&common::vertices(&u)) {
                return Err(format!("Unf({g}) = {u} is not a SAW of length {}", n + 1));
            }
            if !images.entry(g.endpoint()).or_default().insert(u.clone()) {
                return Err(format!("Unf not injective at {u}"));
            }
            total += 1;
        }
    }
    Ok(format!("{total} half-space walks, n<={UNF_N_MAX}"))
}

fn growth() -> Outcome {
    let g = growth_checks(2, GROWTH_N_MAX).map_err(|e| e.to_string())?;
    if !g.submultiplicative || !g.params.c_hw_hat.is_finite() {
        return Err(format!(
            "violations {:?}, c_hw {}",
            g.violations, g.params.c_hw_hat
        ));
    }
    let sums = bridge_series(2, g.params.mu_hat, BRIDGE_J_MAX).map_err(|e| e.to_string())?;
    if sums.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("bridge sums {sums:?}"));
    }
    Ok(format!(
        "mu_hat {:.4}, c_hw_hat {:.4}, bridge sum at j=7 {:.4}",
        g.params.mu_hat,
        g.params.c_hw_hat,
        sums.last().unwrap()
    ))
}

fn pattern_machinery() -> Outcome {
    let pp = default_pattern_pair(2).map_err(|e| e.to_string())?;
    let cert = validate_pattern_pair(&pp);
    if !cert.passes() {
        return Err(format!("pattern pair fails {:?}", cert.failures()));
    }

    let shells = stacked_shells(&pp, CORPUS_SLOTS).map_err(|e| e.to_string())?;
    let mut swaps = 0;
    for shell in &shells {
        let w = shell_members(&pp, std::slice::from_ref(shell))
            .unwrap()
            .remove(0);
        // every word of length SWAP_WORD over the slots, applied as a swap sequence
        for word in 0..CORPUS_SLOTS.pow(SWAP_WORD as u32) {
            let mut v = w.clone();
            let mut code = word;
            for _ in 0..SWAP_WORD {
                v = swap_pattern(&v, &pp, code % CORPUS_SLOTS).map_err(|e| e.to_string())?;
                code /= CORPUS_SLOTS;
                swaps += 1;
                if shell_of(&v, &pp).map_err(|e| e.to_string())? != *shell
                    || !v.is_self_avoiding()
                    || find_occurrences(&v, &pp).unwrap().len() != CORPUS_SLOTS
                {
                    return Err(format!("shell changed after swaps on {w}"));
                }
            }
        }
    }

    for s1 in 0..=HYPERGEOM_MAX {
        for s2 in 0..=HYPERGEOM_MAX {
            for t in 0..=HYPERGEOM_MAX.min(s1 + s2) {
                let law = hypergeom_law(s1, s2, t).unwrap();
                let sum = law.numerators.iter().fold(Rational::zero(), |acc, c| {
                    acc + Rational::from_counts(c, &law.denominator)
                });
                if !sum.is_one() {
                    return Err(format!("law ({s1},{s2},{t}) sums to {sum}"));
                }
            }
        }
    }

    let law = hypergeom_law(GAUSS_HALF_M, GAUSS_HALF_M, GAUSS_HALF_M).unwrap();
    let mut err = 0.0f64;
    for (i, c) in law.numerators.iter().enumerate() {
        let k = law.lo + i;
        let exact = ratio_to_f64(c, &law.denominator);
        let approx = gaussian(k);
        err = err.max((exact - approx).abs());
    }
    if err >= GAUSS_TOL {
        return Err(format!("gaussian sup error {err:e}"));
    }
    Ok(format!(
        "certificate ok; {} shells, {swaps} swaps; laws normalized up to {HYPERGEOM_MAX}; gaussian sup error {err:.2e}",
        shells.len()
    ))
}

/// The Gaussian density written out independently of the library.
fn gaussian(k: usize) -> f64 {
    let m = 2.0 * GAUSS_HALF_M as f64;
    let (a, b) = (0.5, 0.5);
    let z = k as f64 / (a * b * m) - 1.0;
    let spread = (1.0 - a) * (1.0 - b);
    (-(a * b * m * z * z) / (2.0 * spread)).exp()
        / (2.0 * std::f64::consts::PI * a * b * spread * m).sqrt()
}

fn sampler_validation() -> Outcome {
    let t = Instant::now();
    let cfg = PivotConfig {
        thinning: Some(TV_THINNING),
        ..PivotConfig::new(2, TV_N, SEED, TV_SAMPLES)
    };
    let stats = sample_stats(&cfg).map_err(|e| e.to_string())?;
    let exact: BTreeMap<Point, f64> = endpoint_distribution(2, TV_N)
        .unwrap()
        .iter()
        .map(|(p, q)| (*p, q.as_f64()))
        .collect();
    let tv = stats.total_variation(exact.iter().map(|(p, &q)| (p, q)));
    if tv > TV_TOL {
        return Err(format!("TV {tv:.4} at n={TV_N}"));
    }

    let est = estimate_exponents(
        &PivotConfig::new(2, LADDER[0], SEED, LADDER_SAMPLES),
        &LADDER,
    )
    .map_err(|e| e.to_string())?;
    if !(TWO_NU_RANGE.0..=TWO_NU_RANGE.1).contains(&est.two_nu) {
        return Err(format!("2nu_hat {:.4}", est.two_nu));
    }
    for run in &est.runs {
        let n = run.config.n as f64;
        if run.msd_mean < n.powf(2.0 / 3.0) {
            return Err(format!("msd {} below n^(2/3) at n={n}", run.msd_mean));
        }
    }

    let probe = sample_stats(&PivotConfig::new(2, PROBE_N, SEED, PROBE_SAMPLES))
        .map_err(|e| e.to_string())?;
    if probe.probe_density <= PROBE_MIN {
        return Err(format!("probe density {:.4}", probe.probe_density));
    }
    Ok(format!(
        "TV {tv:.4}; 2nu_hat {:.4} [{:.4}, {:.4}]; probe density {:.4}; {:.0}s",
        est.two_nu,
        est.two_nu_interval.0,
        est.two_nu_interval.1,
        probe.probe_density,
        t.elapsed().as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("hang uniformity", hang_uniformity),
        ("closing probability decreasing", closing_decreasing),
        ("endpoint sup non-increasing", sup_non_increasing),
        ("scaled midpoint sup bounded", midpoint_bound),
        ("multi-valued map audits", mvm_audits),
        ("unfolding injective", unfolding),
        ("growth checks", growth),
        ("pattern machinery", pattern_machinery),
        ("sampler validation", sampler_validation),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed.push(i + 1);
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed != KNOWN_FAILURES {
        println!("failing criteria {failed:?}, expected {KNOWN_FAILURES:?}");
        std::process::exit(1);
    }
    println!(
        "{} of {} criteria pass; known failures {KNOWN_FAILURES:?}",
        criteria.len() - failed.len(),
        criteria.len()
    );
}
