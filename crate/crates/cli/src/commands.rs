use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use fontsense_core::analysis::{corpus_stats, correlation_matrix, CorpusStats};
use fontsense_core::augment::{
    rebalance, AugmentConfig, HttpProvider, IdentityProvider, SynonymMockProvider, TranslationProvider,
};
use fontsense_core::corpus::{
    filter_annotators, fleiss_kappa, label_instances, load_corpus, read_labeled, split_corpus, write_labeled,
    FilterConfig, LoadIssue, RankWeights, SlotPolicy, SplitRatios,
};
use fontsense_core::eval::{
    evaluate_predictions, paired_ttest, per_instance_f1, predict_all, render_csv, render_table, MajorityBaseline, TTest,
};
use fontsense_core::features::SynonymTable;
use fontsense_core::model::{train_dataset, Dataset, ModelPredictor};
use fontsense_core::{EvalReport, LabelDistribution, MlpModel, Recommender, TrainConfig};
use serde::Serialize;

use crate::args::*;
use crate::featurizer;
use crate::server;

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Prepare(args) => prepare(&args, out),
        Command::Train(args) => train(&args, out),
        Command::Eval(args) => eval(&args, out),
        Command::Augment(args) => augment(&args, out),
        Command::Analyze(AnalyzeCommand::Corr(args)) => corr(&args, out),
        Command::Analyze(AnalyzeCommand::Stats(args)) => stats(&args, out),
        Command::Recommend(args) => recommend(&args, out),
        Command::Serve(args) => serve(&args),
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("failed to write {}", path.display()))
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

#[derive(Serialize)]
struct PrepareReport<'a> {
    seed: u64,
    raw_instances: usize,
    rejected_lines: &'a [LoadIssue],
    filter: &'a FilterConfig,
    kept_instances: usize,
    dropped_instances: usize,
    kappa_before_filter: Option<f64>,
    kappa_after_filter: Option<f64>,
    train: usize,
    dev: usize,
    test: usize,
}

fn prepare(args: &PrepareArgs, out: &mut dyn Write) -> Result<()> {
    let catalog = featurizer::catalog(&args.catalog)?;
    let loaded = load_corpus(&args.data, catalog.len())?;
    for issue in &loaded.issues {
        eprintln!("warning: {}:{}: {}", args.data.display(), issue.line, issue.message);
    }
    let filter = FilterConfig {
        same_choice_threshold: args.same_choice_threshold,
        min_annotations: args.min_annotations,
        slot_policy: match args.slot_policy {
            SlotPolicyArg::First => SlotPolicy::First,
            SlotPolicyArg::Any => SlotPolicy::Any,
        },
    };
    let kept = filter_annotators(&loaded.instances, &filter)?;
    let labeled = label_instances(&kept, RankWeights::default(), catalog.len())?;
    let split = split_corpus(&labeled, SplitRatios::default(), args.seed)?;

    fs::create_dir_all(&args.out).with_context(|| format!("failed to create {}", args.out.display()))?;
    write_labeled(args.out.join("labeled.jsonl"), &labeled)?;
    write_labeled(args.out.join("train.jsonl"), &split.train)?;
    write_labeled(args.out.join("dev.jsonl"), &split.dev)?;
    write_labeled(args.out.join("test.jsonl"), &split.test)?;

    let report = PrepareReport {
        seed: args.seed,
        raw_instances: loaded.instances.len() + loaded.issues.len(),
        rejected_lines: &loaded.issues,
        filter: &filter,
        kept_instances: kept.len(),
        dropped_instances: loaded.instances.len() - kept.len(),
        kappa_before_filter: fleiss_kappa(&loaded.instances, catalog.len()).ok(),
        kappa_after_filter: fleiss_kappa(&kept, catalog.len()).ok(),
        train: split.train.len(),
        dev: split.dev.len(),
        test: split.test.len(),
    };
    write_json(&args.out.join("report.json"), &report)?;
    print_json(out, &report)
}

/// `dir/model.json` -> `dir/model.<suffix>.json`.
pub fn sibling_path(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    path.with_file_name(format!("{stem}.{suffix}.json"))
}

#[derive(Serialize)]
struct TrainLog<'a> {
    featurizer: &'a str,
    config: &'a TrainConfig,
    best_seed: u64,
    runs: Vec<RunLog<'a>>,
}

#[derive(Serialize)]
struct RunLog<'a> {
    seed: u64,
    model_id: String,
    checkpoint: String,
    best_epoch: usize,
    best_dev_f1_top1: Option<f64>,
    epochs: &'a [fontsense_core::model::EpochLog],
}

fn train(args: &TrainArgs, out: &mut dyn Write) -> Result<()> {
    let features = featurizer::build(&args.features, None)?;
    let train_set = read_labeled(&args.train)?;
    let dev_set = match &args.dev {
        Some(path) => read_labeled(path)?,
        None => Vec::new(),
    };
    let config = TrainConfig {
        lr: args.lr,
        epochs: args.epochs,
        batch_size: args.batch_size,
        seeds: (args.seed..args.seed + args.runs).collect(),
        hidden_dim: args.hidden,
        shuffle: true,
    };
    let train_data = Dataset::featurize(&train_set, features.as_ref())?;
    let dev_data = Dataset::featurize(&dev_set, features.as_ref())?;
    let outcome = train_dataset(&train_data, &dev_data, features.name(), features.dim(), &config)?;

    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("failed to create {}", dir.display()))?;
    }
    let mut runs = Vec::new();
    for run in &outcome.runs {
        let path = sibling_path(&args.out, &format!("seed{}", run.seed));
        run.model.save(&path)?;
        runs.push(RunLog {
            seed: run.seed,
            model_id: run.model.fingerprint(),
            checkpoint: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            best_epoch: run.best_epoch,
            best_dev_f1_top1: run.best_dev_f1_top1,
            epochs: &run.log,
        });
    }
    let best = outcome.best();
    best.model.save(&args.out)?;
    write_json(
        &sibling_path(&args.out, "log"),
        &TrainLog {
            featurizer: features.name(),
            config: &config,
            best_seed: best.seed,
            runs,
        },
    )?;

    for run in &outcome.runs {
        let last = run.log.last().map(|l| l.train_loss).unwrap_or(f64::NAN);
        let dev = run
            .best_dev_f1_top1
            .map(|f| format!("{f:.2}"))
            .unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "seed {:>3}  best epoch {:>4}  dev F-Top1 {:>6}  final train KL {:.4}",
            run.seed, run.best_epoch, dev, last
        )?;
    }
    writeln!(
        out,
        "best seed {} -> {} ({})",
        best.seed,
        args.out.display(),
        best.model.fingerprint()
    )?;
    Ok(())
}

#[derive(Serialize)]
struct EvalOutput {
    test_instances: usize,
    baseline: EvalReport,
    model_name: String,
    model: EvalReport,
    per_checkpoint: Vec<CheckpointReport>,
    /// Paired t-test on per-instance F@1, model vs baseline.
    ttest: Option<TTest>,
}

#[derive(Serialize)]
struct CheckpointReport {
    model_id: String,
    report: EvalReport,
}

fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<()> {
    let models = args
        .models
        .iter()
        .map(|p| MlpModel::load(p).with_context(|| format!("cannot load model {}", p.display())))
        .collect::<Result<Vec<_>>>()?;
    let name = models[0].featurizer_name().to_string();
    if let Some(m) = models.iter().find(|m| m.featurizer_name() != name) {
        bail!(
            "models use different featurizers: `{name}` and `{}`",
            m.featurizer_name()
        );
    }
    let features = featurizer::build(&args.features, Some(&name))?;
    let train_set = read_labeled(&args.train)?;
    let test_set = read_labeled(&args.test)?;
    if test_set.is_empty() {
        bail!("test set {} is empty", args.test.display());
    }
    let truth: Vec<LabelDistribution> = test_set.iter().map(|i| i.target.clone()).collect();

    let baseline = MajorityBaseline::fit(&train_set)?;
    let baseline_pred = predict_all(&baseline, &test_set)?;
    let baseline_report = evaluate_predictions(&truth, &baseline_pred)?;

    let mut per_checkpoint = Vec::new();
    let mut f1_sum = vec![0.0; test_set.len()];
    for model in &models {
        let predictor = ModelPredictor {
            model,
            featurizer: features.as_ref(),
        };
        let pred = predict_all(&predictor, &test_set)?;
        for (acc, f) in f1_sum.iter_mut().zip(per_instance_f1(&truth, &pred, 1)?) {
            *acc += f;
        }
        per_checkpoint.push(CheckpointReport {
            model_id: model.fingerprint(),
            report: evaluate_predictions(&truth, &pred)?,
        });
    }
    let reports: Vec<EvalReport> = per_checkpoint.iter().map(|c| c.report.clone()).collect();
    let model_report = EvalReport::mean(&reports).expect("at least one model");
    let model_f1: Vec<f64> = f1_sum.iter().map(|s| s / models.len() as f64).collect();
    let ttest = paired_ttest(&model_f1, &per_instance_f1(&truth, &baseline_pred, 1)?).ok();

    let label = args.name.clone().unwrap_or_else(|| name.to_uppercase());
    let rows = [("Majority Baseline", &baseline_report), (label.as_str(), &model_report)];
    match args.output_format() {
        OutputFormat::Table => {
            write!(out, "{}", render_table(&rows))?;
            match &ttest {
                Some(t) => writeln!(
                    out,
                    "paired t-test on per-instance F-Top1 ({label} vs Majority Baseline, {} checkpoint(s)): t = {:.4}, df = {}, p = {:.4}",
                    models.len(),
                    t.t,
                    t.df,
                    t.p
                )?,
                None => writeln!(out, "paired t-test: not enough test instances")?,
            }
        }
        OutputFormat::Csv => write!(out, "{}", render_csv(&rows))?,
        OutputFormat::Json => print_json(
            out,
            &EvalOutput {
                test_instances: test_set.len(),
                baseline: baseline_report,
                model_name: label.clone(),
                model: model_report,
                per_checkpoint,
                ttest,
            },
        )?,
    }
    Ok(())
}

#[derive(Serialize)]
struct AugmentSummary<'a> {
    provider: &'a str,
    input: usize,
    added: usize,
    removed: usize,
    output: usize,
    rare_fonts: &'a [usize],
    popular_font: usize,
    translation_failures: usize,
    warnings: &'a [String],
}

fn provider(args: &AugmentArgs) -> Result<Box<dyn TranslationProvider>> {
    Ok(match args.provider {
        ProviderKind::Identity => Box::new(IdentityProvider),
        ProviderKind::Mock => {
            let path = args
                .synonyms
                .as_ref()
                .context("--provider mock needs --synonyms <PATH>")?;
            Box::new(SynonymMockProvider::new(SynonymTable::load(path)?))
        }
        ProviderKind::Http => Box::new(HttpProvider::from_env()?),
    })
}

fn augment(args: &AugmentArgs, out: &mut dyn Write) -> Result<()> {
    let provider = provider(args)?;
    let train_set = read_labeled(&args.train)?;
    let config = AugmentConfig {
        pivot_langs: args.langs.clone(),
        rarity_threshold: args.rarity_threshold,
        oversample_cap: args.cap,
        undersample_count: args.undersample,
    };
    let result = rebalance(&train_set, &config, provider.as_ref())?;
    for failure in &result.failures {
        eprintln!(
            "warning: {} via {}: {}",
            failure.instance_id, failure.lang, failure.message
        );
    }
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    write_labeled(&args.out, &result.instances)?;
    print_json(
        out,
        &AugmentSummary {
            provider: provider.name(),
            input: train_set.len(),
            added: result.added,
            removed: result.removed.len(),
            output: result.instances.len(),
            rare_fonts: &result.rare_fonts,
            popular_font: result.popular_font,
            translation_failures: result.failures.len(),
            warnings: &result.warnings,
        },
    )
}

fn corr(args: &CorrArgs, out: &mut dyn Write) -> Result<()> {
    let catalog = featurizer::catalog(&args.catalog)?;
    let features = featurizer::build(&args.features, None)?;
    let data = read_labeled(&args.data)?;
    let matrix = correlation_matrix(&data, features.as_ref())?;
    let csv = matrix.to_csv(&catalog, &features.dim_labels());
    match &args.out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("failed to write {}", path.display()))?;
            writeln!(
                out,
                "wrote {}x{} matrix to {}",
                matrix.fonts(),
                matrix.dims(),
                path.display()
            )?;
        }
        None => write!(out, "{csv}")?,
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsOutput {
    #[serde(flatten)]
    stats: CorpusStats,
    popularity_names: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
}

fn stats(args: &StatsArgs, out: &mut dyn Write) -> Result<()> {
    let catalog = featurizer::catalog(&args.catalog)?;
    let data = read_labeled(&args.data)?;
    let stats = corpus_stats(&data)?;
    let kappa = match &args.raw {
        Some(path) => Some(fleiss_kappa(
            &load_corpus(path, catalog.len())?.instances,
            catalog.len(),
        )?),
        None => None,
    };
    let popularity_names = stats
        .popularity_order
        .iter()
        .map(|&f| {
            catalog
                .get(f)
                .map(|font| font.name.clone())
                .unwrap_or_else(|| format!("F{f}"))
        })
        .collect();
    print_json(
        out,
        &StatsOutput {
            stats,
            popularity_names,
            kappa,
        },
    )
}

pub fn load_recommender(model: &Path, features: &FeatureArgs, catalog: &CatalogArgs) -> Result<Recommender> {
    let model = MlpModel::load(model).with_context(|| format!("cannot load model {}", model.display()))?;
    let features = featurizer::build(features, Some(model.featurizer_name()))?;
    Ok(Recommender::new(model, featurizer::catalog(catalog)?, features)?)
}

fn recommend(args: &RecommendArgs, out: &mut dyn Write) -> Result<()> {
    let recommender = load_recommender(&args.model, &args.features, &args.catalog)?;
    print_json(out, &recommender.recommend(&args.text, args.k)?)
}

fn serve(args: &ServeArgs) -> Result<()> {
    let recommender = Arc::new(load_recommender(&args.model, &args.features, &args.catalog)?);
    let app = server::router(recommender.clone(), &args.cors_origins)?;
    let addr = format!("{}:{}", args.host, args.port);
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .with_context(|| format!("cannot bind {addr}"))?;
        eprintln!("serving model {} on http://{addr}", recommender.model_id());
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok::<_, anyhow::Error>(())
    })?;
    Ok(())
}
