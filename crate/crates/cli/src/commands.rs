use std::io::Write;

use num_traits::Zero;
use saw_core::enumerate::{
    count_class, endpoint_distribution, endpoint_table, growth_checks, hang_table,
    midpoint_distribution, scaled_sup_squared, TableReport,
};
use saw_core::sampler::{estimate_exponents, ladder_seed, pivot_sample, PivotConfig};
use saw_core::{CountTable, Distribution, EnumSpec, Enumerator, Rational, Walk, WalkClass, Weight};
use serde_json::{json, Value};

use crate::output::{config_block, emit, Table};
use crate::{CliError, EnumerateArgs, ReportArgs, ReportKind, SampleArgs};

/// Largest `n` enumerated without `--force`: a few seconds on one core.
pub fn feasible_n(dim: usize, class: WalkClass) -> usize {
    let walk = match dim {
        0..=2 => 18,
        3 => 11,
        4 => 9,
        5 => 8,
        _ => 7,
    };
    match class {
        WalkClass::Walk => walk,
        _ => walk + 2,
    }
}

fn check_feasible(dim: usize, n: usize, class: WalkClass, force: bool) -> Result<(), CliError> {
    let limit = feasible_n(dim, class);
    if n > limit && !force {
        return Err(CliError::Infeasible(format!(
            "class {class} at length {n} in dimension {dim} exceeds the limit {limit}; pass --force to run anyway"
        )));
    }
    Ok(())
}

fn table_rows(report: &TableReport) -> Table {
    Table {
        header: vec!["key", "count", "probability"],
        rows: report
            .entries
            .iter()
            .map(|e| {
                let key = match &e.key {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                vec![
                    key,
                    e.count.clone(),
                    e.probability.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    }
}

pub fn enumerate(a: &EnumerateArgs) -> Result<(), CliError> {
    EnumSpec::new(a.dim, a.n, a.class).validate()?;
    check_feasible(a.dim, a.n, a.class, a.force)?;
    let (d, n, class) = (a.dim, a.n, a.class);
    let kind = serde_json::to_value(a.report).expect("report kind serializes");
    let name = kind.as_str().expect("report kind is a string");
    let report = match a.report {
        ReportKind::Count => {
            let mut table = CountTable::new();
            table.add(class.name().to_string(), count_class(d, n, class)?);
            TableReport::from_table(d, n, class, name, &table)
        }
        ReportKind::Endpoint => TableReport::from_distribution(
            d,
            n,
            class,
            name,
            &Distribution::from_table(endpoint_table(d, n, class)?),
        ),
        ReportKind::Midpoint => {
            if class != WalkClass::Walk {
                return Err(CliError::Usage(
                    "--report midpoint is defined over --class walk".into(),
                ));
            }
            TableReport::from_distribution(d, n, class, name, &midpoint_distribution(d, n)?)
        }
        ReportKind::Hang => TableReport::from_distribution(
            d,
            n,
            class,
            name,
            &Distribution::from_table(hang_table(d, n, class)?),
        ),
        ReportKind::Closing => {
            let (total, closing) = Enumerator::new(EnumSpec::new(d, n, class))?.fold(
                || (0u64, 0u64),
                |(t, c), v| {
                    *t += 1;
                    *c += (v.endpoint().l1_norm() == 1) as u64;
                },
                |x, y| (x.0 + y.0, x.1 + y.1),
            );
            let table: CountTable<String> = [
                ("closing".to_string(), closing),
                ("open".to_string(), total - closing),
            ]
            .into_iter()
            .collect();
            let mut r =
                TableReport::from_distribution(d, n, class, name, &Distribution::from_table(table));
            r.sup = None;
            r
        }
        ReportKind::Series => {
            let mut table = CountTable::new();
            for m in 0..=n {
                table.add(m, count_class(d, m, class)?);
            }
            let mut r = TableReport::from_table(d, n, class, name, &table);
            r.total = r
                .entries
                .last()
                .map(|e| e.count.clone())
                .unwrap_or_default();
            r
        }
    };
    let table = table_rows(&report);
    let body = serde_json::to_value(&report).expect("reports serialize");
    emit(
        a.format,
        a.output.as_deref(),
        config_block("enumerate", a),
        body,
        table,
    )
}

pub fn sample(a: &SampleArgs) -> Result<(), CliError> {
    if a.ladder.len() < 2 {
        return Err(CliError::Usage(
            "--ladder needs at least two lengths".into(),
        ));
    }
    let probe = Walk::parse(&a.probe, a.dim)?;
    let base = PivotConfig {
        warmup: a.warmup,
        thinning: a.thinning,
        probe: probe.steps().to_vec(),
        ..PivotConfig::new(a.dim, a.ladder[0], a.seed, a.samples)
    };
    let est = estimate_exponents(&base, &a.ladder)?;
    let exponent = 4.0 / (3.0 * a.dim as f64);
    let runs: Vec<Value> = est
        .runs
        .iter()
        .map(|r| {
            let bound = (r.config.n as f64).powf(exponent);
            json!({
                "n": r.config.n,
                "seed": r.config.seed,
                "samples": r.config.samples,
                "msd_mean": r.msd_mean,
                "msd_stderr": r.msd_stderr,
                "madras_bound": bound,
                "madras_holds": r.msd_mean >= bound,
                "acceptance_rate": r.acceptance_rate,
                "probe_density": r.probe_density,
            })
        })
        .collect();
    let table = Table {
        header: vec![
            "n",
            "seed",
            "samples",
            "msd_mean",
            "msd_stderr",
            "madras_bound",
            "acceptance_rate",
            "probe_density",
        ],
        rows: runs
            .iter()
            .map(|r| {
                [
                    "n",
                    "seed",
                    "samples",
                    "msd_mean",
                    "msd_stderr",
                    "madras_bound",
                    "acceptance_rate",
                    "probe_density",
                ]
                .iter()
                .map(|k| r[*k].to_string())
                .collect()
            })
            .collect(),
    };
    let body = json!({
        "two_nu": est.two_nu,
        "two_nu_stderr": est.two_nu_stderr,
        "two_nu_interval": [est.two_nu_interval.0, est.two_nu_interval.1],
        "bootstrap_resamples": est.bootstrap_resamples,
        "runs": runs,
    });
    if let Some(path) = &a.dump {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        for &n in &a.ladder {
            let cfg = PivotConfig {
                n,
                seed: ladder_seed(a.seed, n),
                ..base.clone()
            };
            for w in pivot_sample(&cfg)? {
                writeln!(out, "{w}")?;
            }
        }
        out.flush()?;
    }
    emit(
        a.format,
        a.output.as_deref(),
        config_block("sample", a),
        body,
        table,
    )
}

fn ratio(r: &Rational) -> String {
    r.to_string()
}

pub fn report(a: &ReportArgs) -> Result<(), CliError> {
    EnumSpec::new(a.dim, a.n_max, WalkClass::Walk).validate()?;
    check_feasible(a.dim, a.n_max, WalkClass::Walk, a.force)?;
    if a.n_max < 2 {
        return Err(CliError::Usage("--n-max must be at least 2".into()));
    }
    let growth = growth_checks(a.dim, a.n_max)?;
    let mut rows = Vec::new();
    for n in 1..=a.n_max {
        let closing = if n % 2 == 1 {
            Rational::from_counts(
                &count_class(a.dim, n, WalkClass::Closing)?,
                &growth.counts[n],
            )
        } else {
            Rational::zero()
        };
        let end = endpoint_distribution(a.dim, n)?.sup_value();
        let mid = midpoint_distribution(a.dim, n)?;
        let mid_scaled = scaled_sup_squared(&mid, n).as_f64().sqrt();
        rows.push(json!({
            "n": n,
            "walks": growth.counts[n].to_string(),
            "closing_probability": ratio(&closing),
            "endpoint_sup": ratio(&end),
            "midpoint_sup": ratio(&mid.sup_value()),
            "midpoint_sup_sqrt_n": mid_scaled,
        }));
    }
    let keys = [
        "n",
        "walks",
        "closing_probability",
        "endpoint_sup",
        "midpoint_sup",
        "midpoint_sup_sqrt_n",
    ];
    let table = Table {
        header: keys.to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                keys.iter()
                    .map(|k| match &r[*k] {
                        Value::String(s) => s.clone(),
                        v => v.to_string(),
                    })
                    .collect()
            })
            .collect(),
    };
    let body = json!({
        "dim": a.dim,
        "n_max": a.n_max,
        "rows": rows,
        "mu_hat": growth.params.mu_hat,
        "c_hw_hat": growth.params.c_hw_hat,
        "submultiplicative": growth.submultiplicative,
    });
    emit(
        a.format,
        a.output.as_deref(),
        config_block("report", a),
        body,
        table,
    )
}
