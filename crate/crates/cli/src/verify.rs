//! Verification suites. Each check compares a computed quantity with a
//! reference; `--corrupt <check>` perturbs that reference.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use saw_core::enumerate::{
    bridge_series, collect_walks, endpoint_table, growth_checks, hang_histogram_closing,
};
use saw_core::mvm::{map_insert_z, map_pattern_swap, map_unfold_replace, swap_weight_sum};
use saw_core::patterns::{
    default_pattern_pair, gaussian_t1_approx, hypergeom_law, shell_members, shell_of,
    stacked_shells, swap_pattern, validate_pattern_pair,
};
use saw_core::scalar::ratio_to_f64;
use saw_core::{EnumSpec, Point, Rational, Walk, WalkClass};
use serde::Serialize;

use crate::output::{config_block, emit, Table};
use crate::{CliError, Suite, VerifyArgs};

pub const CHECKS: [(&str, Suite); 15] = [
    ("insert_z_identity", Suite::Mvm),
    ("insert_z_preimages", Suite::Mvm),
    ("unfold_replace_identity", Suite::Mvm),
    ("unfold_replace_images", Suite::Mvm),
    ("unfold_replace_preimages", Suite::Mvm),
    ("pattern_swap_identity", Suite::Mvm),
    ("unfold_self_avoiding", Suite::Unfold),
    ("unfold_injective", Suite::Unfold),
    ("hang_uniform", Suite::Hang),
    ("submultiplicative", Suite::Growth),
    ("bridge_series_increasing", Suite::Growth),
    ("hypergeom_normalized", Suite::Hypergeom),
    ("gaussian_sup_error", Suite::Hypergeom),
    ("pattern_pair_certificate", Suite::Patterns),
    ("shell_invariance", Suite::Patterns),
];

const GAUSS_HALF_M: usize = 5_000;
const GAUSS_TOL: f64 = 1e-2;
const HYPERGEOM_MAX: usize = 60;

#[derive(Debug, Serialize)]
struct CheckResult {
    suite: Suite,
    check: &'static str,
    passed: bool,
    detail: String,
}

struct Runner<'a> {
    corrupt: Option<&'a str>,
    results: Vec<CheckResult>,
}

impl Runner<'_> {
    fn bump(&self, check: &str) -> usize {
        usize::from(self.corrupt == Some(check))
    }

    fn record(&mut self, suite: Suite, check: &'static str, passed: bool, detail: String) {
        self.results.push(CheckResult {
            suite,
            check,
            passed,
            detail,
        });
    }
}

fn mvm(r: &mut Runner, dim: usize, n: usize, m: usize) -> Result<(), CliError> {
    let s = Suite::Mvm;
    let a = map_insert_z(dim, n, m, 1..=n / 2)?.audit();
    let size = Rational::from_integer((a.domain_size + r.bump("insert_z_identity")).into());
    r.record(
        s,
        "insert_z_identity",
        size == a.sum_lambda,
        format!("|A| = {}, sum of lambda = {}", a.domain_size, a.sum_lambda),
    );
    let limit = m - r.bump("insert_z_preimages").min(m);
    r.record(
        s,
        "insert_z_preimages",
        a.max_preimages <= limit,
        format!("largest preimage {} against M = {m}", a.max_preimages),
    );

    let un = n.saturating_sub(2).max(1);
    let (mut identity, mut images, mut preimages, mut walks) = (true, true, true, 0);
    for (x, _) in endpoint_table(dim, un, WalkClass::Halfspace)?.iter() {
        let u = map_unfold_replace(dim, un, x)?;
        let b = u.instance.audit();
        let size =
            Rational::from_integer((b.domain_size + r.bump("unfold_replace_identity")).into());
        identity &= size == b.sum_lambda;
        images &= u.image_sizes_match && r.bump("unfold_replace_images") == 0;
        preimages &= u.preimage_bound_holds && r.bump("unfold_replace_preimages") == 0;
        walks += b.domain_size;
    }
    let detail = format!("{walks} half-space walks of length {un}");
    r.record(s, "unfold_replace_identity", identity, detail.clone());
    r.record(s, "unfold_replace_images", images, detail.clone());
    r.record(s, "unfold_replace_preimages", preimages, detail);

    if dim == 2 {
        let pp = default_pattern_pair(2)?;
        let family = shell_members(&pp, &stacked_shells(&pp, 3)?)?;
        let mut ok = true;
        for t in 0..3 {
            let inst = map_pattern_swap(&pp, &family, t)?;
            let weight = swap_weight_sum(&pp, inst.codomain().unwrap_or(&[]))?;
            let size = inst.domain().len() + r.bump("pattern_swap_identity");
            ok &= Rational::from_integer(size.into()) == weight && inst.audit().identity_holds;
        }
        r.record(
            s,
            "pattern_swap_identity",
            ok,
            format!("{} corpus walks", family.len()),
        );
    }
    Ok(())
}

fn unfold(r: &mut Runner, dim: usize, n_max: usize) -> Result<(), CliError> {
    let (mut avoiding, mut injective, mut total) = (true, true, 0);
    for n in 1..=n_max {
        let mut seen: HashMap<Point, HashSet<Walk>> = HashMap::new();
        for g in collect_walks(EnumSpec::new(dim, n, WalkClass::Halfspace))? {
            let u = g.unfold()?;
            avoiding &= u.is_self_avoiding() && u.len() + r.bump("unfold_self_avoiding") == n + 1;
            injective &= seen.entry(g.endpoint()).or_default().insert(u);
            total += 1;
        }
        if r.bump("unfold_injective") == 1 {
            injective = false;
        }
    }
    let detail = format!("{total} half-space walks, n <= {n_max}");
    r.record(
        Suite::Unfold,
        "unfold_self_avoiding",
        avoiding,
        detail.clone(),
    );
    r.record(Suite::Unfold, "unfold_injective", injective, detail);
    Ok(())
}

fn hang(r: &mut Runner, dim: usize, n_max: usize) -> Result<(), CliError> {
    let mut ok = true;
    let mut bad = Vec::new();
    for n in (1..=n_max).step_by(2) {
        let h = hang_histogram_closing(dim, n)?;
        let mut counts: Vec<_> = h.table().iter().map(|(_, c)| c.clone()).collect();
        if r.bump("hang_uniform") == 1 {
            counts[0] += 1u32;
        }
        if counts.iter().any(|c| c != &counts[0]) {
            ok = false;
            bad.push(n);
        }
    }
    let detail = if ok {
        format!("odd n <= {n_max}")
    } else {
        format!("unequal at n = {bad:?}")
    };
    r.record(Suite::Hang, "hang_uniform", ok, detail);
    Ok(())
}

fn growth(r: &mut Runner, dim: usize, n_max: usize) -> Result<(), CliError> {
    let g = growth_checks(dim, n_max)?;
    r.record(
        Suite::Growth,
        "submultiplicative",
        g.submultiplicative && r.bump("submultiplicative") == 0 && g.params.c_hw_hat.is_finite(),
        format!(
            "violations {:?}; mu_hat {:.5}, c_hw_hat {:.5}",
            g.violations, g.params.mu_hat, g.params.c_hw_hat
        ),
    );
    let j_max = n_max / 2;
    let sums = bridge_series(dim, g.params.mu_hat, j_max)?;
    let shift = r.bump("bridge_series_increasing") as f64;
    let ok = sums.windows(2).all(|w| w[1] > w[0] + shift);
    r.record(
        Suite::Growth,
        "bridge_series_increasing",
        ok,
        format!(
            "partial sums through j = {j_max}, last {:.5}",
            sums.last().copied().unwrap_or(0.0)
        ),
    );
    Ok(())
}

fn hypergeom(r: &mut Runner) -> Result<(), CliError> {
    let mut ok = true;
    for s1 in 0..=HYPERGEOM_MAX {
        for s2 in 0..=HYPERGEOM_MAX {
            for t in 0..=HYPERGEOM_MAX.min(s1 + s2) {
                let law = hypergeom_law(s1, s2, t)?;
                let mut sum = Rational::zero();
                for c in &law.numerators {
                    sum += Rational::new(c.clone().into(), law.denominator.clone().into());
                }
                ok &= sum.is_one() && r.bump("hypergeom_normalized") == 0;
            }
        }
    }
    r.record(
        Suite::Hypergeom,
        "hypergeom_normalized",
        ok,
        format!("all s1, s2, t_I <= {HYPERGEOM_MAX}"),
    );

    let law = hypergeom_law(GAUSS_HALF_M, GAUSS_HALF_M, GAUSS_HALF_M)?;
    let mut err = 0.0f64;
    for (i, c) in law.numerators.iter().enumerate() {
        let k = law.lo + i;
        let g: f64 = gaussian_t1_approx(GAUSS_HALF_M, GAUSS_HALF_M, GAUSS_HALF_M, k)?;
        err = err.max((ratio_to_f64(c, &law.denominator) - g).abs());
    }
    let tol = if r.bump("gaussian_sup_error") == 1 {
        0.0
    } else {
        GAUSS_TOL
    };
    r.record(
        Suite::Hypergeom,
        "gaussian_sup_error",
        err < tol,
        format!(
            "sup error {err:.3e} at m = {}, alpha = beta = 1/2",
            2 * GAUSS_HALF_M
        ),
    );
    Ok(())
}

fn patterns(r: &mut Runner) -> Result<(), CliError> {
    let pp = default_pattern_pair(2)?;
    let cert = validate_pattern_pair(&pp);
    let passed = cert.passes() && r.bump("pattern_pair_certificate") == 0;
    let detail = if cert.passes() {
        "every clause holds".to_string()
    } else {
        format!("failing clauses {:?}", cert.failures())
    };
    r.record(Suite::Patterns, "pattern_pair_certificate", passed, detail);

    let shells = stacked_shells(&pp, 3)?;
    let mut ok = true;
    let mut swaps = 0;
    for shell in &shells {
        let mut w = shell.realize(&pp, &[saw_core::patterns::PatternType::I; 3])?;
        for slot in [0, 1, 2, 1, 0, 2, 2, 1] {
            w = swap_pattern(&w, &pp, slot)?;
            swaps += 1;
            ok &= shell_of(&w, &pp)? == *shell;
        }
    }
    ok &= r.bump("shell_invariance") == 0;
    r.record(
        Suite::Patterns,
        "shell_invariance",
        ok,
        format!("{} shells, {swaps} swaps", shells.len()),
    );
    Ok(())
}

pub fn run(a: &VerifyArgs) -> Result<(), CliError> {
    EnumSpec::new(a.dim, 1, WalkClass::Walk).validate()?;
    if let Some(c) = &a.corrupt {
        if !CHECKS.iter().any(|(name, _)| name == c) {
            return Err(CliError::Usage(format!("unknown check {c}")));
        }
    }
    let wants = |s: Suite| a.suite == Suite::All || a.suite == s;
    if a.dim != 2 && a.suite == Suite::Patterns {
        return Err(CliError::Usage(
            "the shipped pattern pair lives in dimension 2".into(),
        ));
    }
    let mut r = Runner {
        corrupt: a.corrupt.as_deref(),
        results: Vec::new(),
    };
    if wants(Suite::Mvm) {
        mvm(&mut r, a.dim, a.n.unwrap_or(10), a.m)?;
    }
    if wants(Suite::Unfold) {
        unfold(&mut r, a.dim, a.n.unwrap_or(8))?;
    }
    if wants(Suite::Hang) {
        hang(&mut r, a.dim, a.n.unwrap_or(13))?;
    }
    if wants(Suite::Growth) {
        growth(&mut r, a.dim, a.n.unwrap_or(16))?;
    }
    if wants(Suite::Hypergeom) {
        hypergeom(&mut r)?;
    }
    if wants(Suite::Patterns) && a.dim == 2 {
        patterns(&mut r)?;
    }

    let failed: Vec<&str> = r
        .results
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.check)
        .collect();
    let table = Table {
        header: vec!["suite", "check", "passed", "detail"],
        rows: r
            .results
            .iter()
            .map(|c| {
                vec![
                    serde_json::to_value(c.suite)
                        .expect("suite serializes")
                        .as_str()
                        .unwrap_or("")
                        .to_string(),
                    c.check.to_string(),
                    c.passed.to_string(),
                    c.detail.clone(),
                ]
            })
            .collect(),
    };
    let body = serde_json::json!({
        "passed": failed.is_empty(),
        "failed": failed,
        "checks": r.results,
    });
    emit(
        a.format,
        a.output.as_deref(),
        config_block("verify", a),
        body,
        table,
    )?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "failing checks: {}",
            failed.join(", ")
        )))
    }
}
