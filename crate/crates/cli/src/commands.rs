use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use boon_core::resampling::{Boon, CurveOptions, ResamplingConfig};
use boon_core::{
    anderson_darling_normality, best_of_m_curve, boon_nonparametric, boon_parametric_gaussian,
    bootstrap_ci, compare_architectures, smoothed_bootstrap_ci, summarize, Bandwidth,
    EstimatorKind,
};

use crate::args::{BandwidthArg, Cli, ColumnArgs, Command, DirectionArg, DEFAULT_REPLICATES};
use crate::error::CliError;
use crate::input::{load_pool, LoadedPool, PoolFile, PoolFormat};
use crate::report::{
    estimator_name, CompareResult, CurveEntry, EstimateEntry, IntervalEntry, NormalityEntry,
    PoolFingerprint, Report, Results, Settings, SummaryResult, Tool, SCHEMA_VERSION,
};

/// Everything a command produces; nothing is written to disk yet.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Report,
    /// Plain-text table for standard output.
    pub human: String,
    /// Curve CSV and its destination, for `curve --curve-output`.
    pub curve_csv: Option<(PathBuf, String)>,
}

fn pool_file(
    path: &Path,
    columns: &ColumnArgs,
    direction: DirectionArg,
) -> Result<PoolFile, CliError> {
    let [validation_column, test_column] = columns.columns.as_slice() else {
        return Err(CliError::Usage(format!(
            "--columns takes exactly two names (validation,test), got {}",
            columns.columns.len()
        )));
    };
    Ok(PoolFile {
        path: path.to_path_buf(),
        format: columns
            .format
            .unwrap_or_else(|| PoolFormat::from_path(path)),
        validation_column: validation_column.clone(),
        test_column: test_column.clone(),
        direction: direction.into(),
        metric_name: columns.metric.clone(),
    })
}

fn resampling_config(
    cli: &Cli,
    replicates: usize,
    level: f64,
    bandwidth: Bandwidth,
) -> Result<ResamplingConfig, CliError> {
    let config = ResamplingConfig {
        replicates,
        level,
        seed: cli.seed,
        bandwidth,
        resample_size: None,
        parallel: cli.threads != 1,
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

fn report(argv: &[String], pools: &[&LoadedPool], settings: Settings, results: Results) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        tool: Tool::default(),
        command: argv.to_vec(),
        pools: pools.iter().map(|p| PoolFingerprint::from(*p)).collect(),
        settings,
        results,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "n/a".into())
}

/// Runs the parsed command. `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: &[String]) -> Result<Output, CliError> {
    if cli.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
        return pool.install(|| dispatch(cli, argv));
    }
    dispatch(cli, argv)
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<Output, CliError> {
    match &cli.command {
        Command::Summarize { input } => {
            let loaded = load_pool(
                &pool_file(&input.input, &input.columns, input.columns.direction)?,
                input.columns.skip_invalid,
            )?;
            cmd_summarize(argv, &loaded)
        }
        Command::Boon {
            input,
            n,
            estimator,
            bootstrap,
            level,
            bandwidth,
        } => {
            let loaded = load_pool(
                &pool_file(&input.input, &input.columns, input.columns.direction)?,
                input.columns.skip_invalid,
            )?;
            let ci = match bootstrap.or(bandwidth.map(|_| DEFAULT_REPLICATES)) {
                Some(b) => {
                    let bw = bandwidth.map(|b| b.0).unwrap_or(Bandwidth::Fixed(0.0));
                    Some((resampling_config(cli, b, *level, bw)?, bandwidth.is_some()))
                }
                None => None,
            };
            cmd_boon(
                argv,
                &loaded,
                n,
                (*estimator).into(),
                ci.as_ref().map(|(c, s)| (c, *s)),
                *bandwidth,
            )
        }
        Command::Curve {
            input,
            m_max,
            samples_per_m,
            bootstrap,
            level,
            bandwidth,
            no_band,
            without_replacement,
            curve_output,
        } => {
            let loaded = load_pool(
                &pool_file(&input.input, &input.columns, input.columns.direction)?,
                input.columns.skip_invalid,
            )?;
            let config = resampling_config(cli, *bootstrap, *level, bandwidth.0)?;
            let options = CurveOptions {
                samples_per_m: *samples_per_m,
                with_replacement: !without_replacement,
                band: !no_band,
            };
            cmd_curve(
                argv,
                &loaded,
                *m_max,
                &options,
                &config,
                *bandwidth,
                curve_output.clone(),
            )
        }
        Command::Compare {
            input_a,
            input_b,
            columns,
            direction_b,
            n,
            bootstrap,
            level,
        } => {
            let a = load_pool(
                &pool_file(input_a, columns, columns.direction)?,
                columns.skip_invalid,
            )?;
            let b = load_pool(
                &pool_file(input_b, columns, direction_b.unwrap_or(columns.direction))?,
                columns.skip_invalid,
            )?;
            let config = resampling_config(cli, *bootstrap, *level, Bandwidth::Fixed(0.0))?;
            cmd_compare(argv, &a, &b, *n, &config)
        }
    }
}

pub fn cmd_summarize(argv: &[String], loaded: &LoadedPool) -> Result<Output, CliError> {
    let s = summarize(&loaded.pool);
    let normality = anderson_darling_normality(&loaded.pool.tests())
        .ok()
        .map(|ad| NormalityEntry {
            test: "anderson_darling",
            statistic: ad.statistic,
            adjusted_statistic: ad.adjusted,
            critical_value_5pct: ad.critical_5pct,
            reject_at_5pct: ad.reject_at_5pct,
        });
    let result = SummaryResult {
        m: s.m,
        mean_test: s.mean_test,
        std_test: s.std_test,
        iqr_test: s.iqr_test,
        min_test: s.range_test.0,
        max_test: s.range_test.1,
        mean_validation: s.mean_val,
        std_validation: s.std_val,
        spearman_val_test: s.spearman_val_test,
        pearson_val_test: s.pearson_val_test,
        normality: normality.clone(),
    };

    let mut human = String::new();
    let _ = writeln!(
        human,
        "pool      {} (m = {})",
        loaded.source.path.display(),
        s.m
    );
    let _ = writeln!(human, "mean      {:.4}", s.mean_test);
    let _ = writeln!(human, "std       {}", opt(s.std_test));
    let _ = writeln!(human, "iqr       {}", opt(s.iqr_test));
    let _ = writeln!(
        human,
        "range     {:.4} .. {:.4}",
        s.range_test.0, s.range_test.1
    );
    let _ = writeln!(human, "spearman  {}", opt(s.spearman_val_test));
    let _ = writeln!(human, "pearson   {}", opt(s.pearson_val_test));
    match &normality {
        Some(ad) => {
            let verdict = if ad.reject_at_5pct {
                "rejected at 5%"
            } else {
                "not rejected at 5%"
            };
            let _ = writeln!(
                human,
                "normality A*² = {:.4} ({verdict})",
                ad.adjusted_statistic
            );
        }
        None => {
            let _ = writeln!(human, "normality n/a (needs >= 8 varying test scores)");
        }
    }

    Ok(Output {
        report: report(
            argv,
            &[loaded],
            Settings::default(),
            Results::Summary(result),
        ),
        human,
        curve_csv: None,
    })
}

/// `ci` carries the resampling config and whether it is smoothed.
pub fn cmd_boon(
    argv: &[String],
    loaded: &LoadedPool,
    n_values: &[u32],
    kind: EstimatorKind,
    ci: Option<(&ResamplingConfig, bool)>,
    bandwidth: Option<BandwidthArg>,
) -> Result<Output, CliError> {
    if n_values.is_empty() {
        return Err(CliError::Usage("at least one --n value is required".into()));
    }
    let pool = &loaded.pool;
    let mut estimates = Vec::with_capacity(n_values.len());
    let mut human = String::new();
    let _ = writeln!(
        human,
        "pool {} (m = {}), estimator {}",
        loaded.source.path.display(),
        pool.len(),
        estimator_name(kind)
    );
    for &n in n_values {
        let context = format!("Boo({n})");
        let estimate = match kind {
            EstimatorKind::Nonparametric => boon_nonparametric(pool, n),
            EstimatorKind::GaussianParametric => boon_parametric_gaussian(pool, n),
        }
        .map_err(|e| CliError::estimator(context.clone(), e))?;
        let interval = match ci {
            Some((config, smoothed)) => {
                let statistic =
                    Boon::new(n, kind).map_err(|e| CliError::estimator(context.clone(), e))?;
                let ci = if smoothed {
                    smoothed_bootstrap_ci(pool, &statistic, config)
                } else {
                    bootstrap_ci(pool, &statistic, config)
                }
                .map_err(|e| CliError::estimator(format!("{context} interval"), e))?;
                Some(IntervalEntry::new(&ci, config.seed))
            }
            None => None,
        };
        let label = format!("Boo({n})");
        let flag = if estimate.extrapolative {
            "  (extrapolated: m < n)"
        } else {
            ""
        };
        match &interval {
            Some(iv) => {
                let _ = writeln!(
                    human,
                    "{label:<9} = {:.4}   {:.0}% CI [{:.4}, {:.4}]{flag}",
                    estimate.value,
                    iv.level * 100.0,
                    iv.lo,
                    iv.hi
                );
            }
            None => {
                let _ = writeln!(human, "{label:<9} = {:.4}{flag}", estimate.value);
            }
        }
        estimates.push(EstimateEntry {
            n,
            m: estimate.m,
            estimator: estimator_name(kind),
            value: estimate.value,
            extrapolative: estimate.extrapolative,
            ci: interval,
        });
    }
    let settings = Settings {
        n_values: Some(n_values.to_vec()),
        estimator: Some(estimator_name(kind)),
        replicates: ci.map(|(c, _)| c.replicates),
        level: ci.map(|(c, _)| c.level),
        seed: ci.map(|(c, _)| c.seed),
        bandwidth: bandwidth.map(|b| b.to_string()),
        ..Settings::default()
    };
    Ok(Output {
        report: report(argv, &[loaded], settings, Results::Boon { estimates }),
        human,
        curve_csv: None,
    })
}

pub fn curve_csv(points: &[CurveEntry]) -> String {
    let mut out = String::from("m,expected_best_test,ci_lo,ci_hi\n");
    for p in points {
        let (lo, hi) = match &p.ci {
            Some(ci) => (ci.lo.to_string(), ci.hi.to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(out, "{},{},{},{}", p.m, p.expected_best_test, lo, hi);
    }
    out
}

pub fn cmd_curve(
    argv: &[String],
    loaded: &LoadedPool,
    m_max: usize,
    options: &CurveOptions,
    config: &ResamplingConfig,
    bandwidth: BandwidthArg,
    curve_output: Option<PathBuf>,
) -> Result<Output, CliError> {
    if m_max == 0 {
        return Err(CliError::Usage("--m-max must be at least 1".into()));
    }
    let m_values: Vec<usize> = (1..=m_max).collect();
    let mut options = options.clone();
    if options.band && loaded.pool.len() < 2 {
        log::warn!("pool has a single run; curve band skipped");
        options.band = false;
    }
    let points = best_of_m_curve(&loaded.pool, &m_values, &options, config)
        .map_err(|e| CliError::estimator("best-of-m curve", e))?;
    let entries: Vec<CurveEntry> = points
        .iter()
        .map(|p| CurveEntry {
            m: p.m,
            expected_best_test: p.expected_best_test,
            std_error: p.std_error,
            samples: options.samples_per_m,
            seed: config.seed,
            ci: p.ci.as_ref().map(|ci| IntervalEntry::new(ci, config.seed)),
        })
        .collect();

    let mut human = String::new();
    let _ = writeln!(
        human,
        "{:>5}  {:>14}  {:>10}  {:>10}",
        "m", "best-val test", "ci_lo", "ci_hi"
    );
    for e in &entries {
        let (lo, hi) =
            e.ci.as_ref()
                .map(|c| (format!("{:.4}", c.lo), format!("{:.4}", c.hi)))
                .unwrap_or_default();
        let _ = writeln!(
            human,
            "{:>5}  {:>14.4}  {:>10}  {:>10}",
            e.m, e.expected_best_test, lo, hi
        );
    }

    let csv = curve_output.map(|path| (path, curve_csv(&entries)));
    let settings = Settings {
        replicates: options.band.then_some(config.replicates),
        level: options.band.then_some(config.level),
        seed: Some(config.seed),
        bandwidth: options.band.then(|| bandwidth.to_string()),
        samples_per_m: Some(options.samples_per_m),
        m_max: Some(m_max),
        with_replacement: Some(options.with_replacement),
        ..Settings::default()
    };
    Ok(Output {
        report: report(
            argv,
            &[loaded],
            settings,
            Results::Curve { points: entries },
        ),
        human,
        curve_csv: csv,
    })
}

pub fn cmd_compare(
    argv: &[String],
    a: &LoadedPool,
    b: &LoadedPool,
    n: u32,
    config: &ResamplingConfig,
) -> Result<Output, CliError> {
    if a.pool.direction() != b.pool.direction() {
        return Err(CliError::Usage(format!(
            "{} and {} are optimized in different directions",
            a.source.path.display(),
            b.source.path.display()
        )));
    }
    let cmp = compare_architectures(&a.pool, &b.pool, n, config)
        .map_err(|e| CliError::estimator(format!("Boo({n}) comparison"), e))?;
    let ci = IntervalEntry::new(&cmp.ci, config.seed);
    let mut human = String::new();
    let _ = writeln!(
        human,
        "A  {}  Boo({n}) = {:.4}",
        a.source.path.display(),
        cmp.boon_a
    );
    let _ = writeln!(
        human,
        "B  {}  Boo({n}) = {:.4}",
        b.source.path.display(),
        cmp.boon_b
    );
    let _ = writeln!(
        human,
        "B - A = {:.4}   {:.0}% CI [{:.4}, {:.4}]   {}",
        cmp.delta,
        ci.level * 100.0,
        ci.lo,
        ci.hi,
        if cmp.significant {
            "significant"
        } else {
            "not significant"
        }
    );
    let settings = Settings {
        n_values: Some(vec![n]),
        estimator: Some(estimator_name(EstimatorKind::Nonparametric)),
        replicates: Some(config.replicates),
        level: Some(config.level),
        seed: Some(config.seed),
        ..Settings::default()
    };
    let result = CompareResult {
        n,
        boon_a: cmp.boon_a,
        boon_b: cmp.boon_b,
        delta: cmp.delta,
        ci,
        significant: cmp.significant,
    };
    Ok(Output {
        report: report(argv, &[a, b], settings, Results::Compare(result)),
        human,
        curve_csv: None,
    })
}

/// Writes the JSON report and curve CSV, if requested.
pub fn write_outputs(output: &Output, report_path: Option<&Path>) -> Result<(), CliError> {
    let write = |path: &Path, contents: &str| {
        std::fs::write(path, contents).map_err(|source| CliError::Unwritable {
            path: path.to_path_buf(),
            source,
        })
    };
    if let Some(path) = report_path {
        let json = serde_json::to_string_pretty(&output.report).expect("report serializes");
        write(path, &(json + "\n"))?;
    }
    if let Some((path, csv)) = &output.curve_csv {
        write(path, csv)?;
    }
    Ok(())
}
