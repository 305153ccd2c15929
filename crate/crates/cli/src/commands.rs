use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _};

use topspace::affect::{load_lexicon, training_mean, AffectLexicon};
use topspace::classify::{fit_fda, SvmConfig};
use topspace::corpus::{load_dataset, Preprocessor};
use topspace::eval::{
    arousal_curve, build_features, gen_synthetic, gen_synthetic_lexicon, model_name, prepare_run, projection_2d,
    run_experiment, topic_documents, Contexts, ExperimentConfig, ResultsTable, SynthConfig,
};
use topspace::representation::save_vocab;
use topspace::{ClassifierKind, Dataset, Label, Representation, Stoplist};

use crate::args::{
    ArousalCurveArgs, ContextArgs, EvaluateArgs, LexiconArgs, ProjectArgs, SynthArgs, TopicsArgs, ValidateArgs,
};

/// A problem with the invocation rather than with the data.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn stoplist(ctx: &ContextArgs) -> anyhow::Result<Stoplist> {
    match &ctx.stoplist {
        Some(p) => Ok(Stoplist::load(p)?),
        None => Ok(Stoplist::default_english()),
    }
}

fn lexicon(args: &LexiconArgs, needed: bool) -> anyhow::Result<Option<AffectLexicon>> {
    match &args.lexicon {
        Some(p) => {
            let lex = load_lexicon(p, &args.columns())?;
            if lex.duplicates > 0 {
                log::warn!("{}: {} duplicate lemmas, later rows kept", p.display(), lex.duplicates);
            }
            Ok(Some(lex))
        }
        None if needed => Err(UsageError("arousal features need --lexicon".into()).into()),
        None => Ok(None),
    }
}

fn load(path: &Path) -> anyhow::Result<Dataset> {
    load_dataset(path).with_context(|| format!("loading corpus {}", path.display()))
}

fn preprocessor(ctx: &ContextArgs) -> anyhow::Result<Preprocessor> {
    Ok(Preprocessor {
        stoplist: stoplist(ctx)?,
        keep_target: ctx.keep_target.on(),
        mode: ctx.context.into(),
    })
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let p = out.with_extension("json");
    if p == out {
        with_suffix(out, ".json")
    } else {
        p
    }
}

fn all_annotated(ds: &Dataset, pre: &Preprocessor) -> Contexts {
    let idx: Vec<usize> = ds
        .instances
        .iter()
        .enumerate()
        .filter(|(_, i)| i.label.is_annotated())
        .map(|(n, _)| n)
        .collect();
    Contexts::from_dataset(ds, &idx, pre)
}

fn experiment_config(args: &EvaluateArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(
        Representation::Topics,
        ClassifierKind::FdaKnn,
        args.context.context.into(),
    );
    cfg.lda = args.lda.config(args.context.context, 0);
    cfg.topic_mode = args.lda.mode();
    cfg.topic_vocabulary = args.lda.vocabulary();
    cfg.affect_weighting = args.affect_weighting();
    cfg.local_weight = args.local_weight();
    cfg.keep_target = args.context.keep_target.on();
    cfg.split = args.train_idioms.zip(args.train_literals);
    cfg.runs = args.runs;
    cfg.seed = args.seed;
    cfg.knn = if args.knn_auto { None } else { args.knn };
    cfg.svm = SvmConfig {
        c: args.svm_c,
        gamma: args.svm_gamma,
        ..SvmConfig::default()
    };
    cfg
}

pub fn evaluate(args: &EvaluateArgs) -> anyhow::Result<()> {
    if args.runs == 0 {
        return Err(UsageError("--runs must be at least 1".into()).into());
    }
    if args.knn == Some(0) {
        return Err(UsageError("--knn must be at least 1".into()).into());
    }
    let affect = args.affect.expand();
    let lex = lexicon(&args.lexicon, affect.contains(&true))?;
    let stop = stoplist(&args.context)?;
    let datasets = args
        .corpus
        .iter()
        .map(|p| load(p))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let base = experiment_config(args);

    let mut table = ResultsTable::new(datasets.iter().map(|d| d.name.clone()).collect());
    for &clf in &args.classifier.expand() {
        for &repr in &args.repr.expand() {
            for &a in &affect {
                let cfg = ExperimentConfig {
                    representation: repr,
                    classifier: clf,
                    affect: a,
                    ..base.clone()
                };
                let name = model_name(clf, repr, a);
                let mut results = Vec::with_capacity(datasets.len());
                for ds in &datasets {
                    log::info!("{name} on {}", ds.name);
                    let r = run_experiment(ds, &cfg, &stop, lex.as_ref())
                        .with_context(|| format!("{name} on {}", ds.name))?;
                    if let Some(dir) = &args.dump_dir {
                        dump_run(dir, ds, &cfg, &stop, lex.as_ref(), &name)?;
                    }
                    results.push(r);
                }
                table.push(name, results);
            }
        }
    }

    match &args.out {
        Some(out) => {
            let mut w = create(out)?;
            table.write_table(&mut w)?;
            w.flush()?;
            let side = sidecar_path(out);
            let mut w = create(&side)?;
            table.write_sidecar(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            table.write_table(stdout.lock())?;
        }
    }
    Ok(())
}

fn dump_run(
    dir: &Path,
    ds: &Dataset,
    cfg: &ExperimentConfig,
    stop: &Stoplist,
    lex: Option<&AffectLexicon>,
    name: &str,
) -> anyhow::Result<()> {
    let art = prepare_run(ds, cfg, &cfg.preprocessor(stop), lex, 0)?;
    let stem = dir.join(format!("{}.{name}.run0", ds.name));
    let mut w = create(&with_suffix(&stem, ".matrix.csv"))?;
    art.space.train.write_csv(&mut w)?;
    w.flush()?;
    save_vocab(
        with_suffix(&stem, ".vocab"),
        &art.space.train.vocab,
        &art.space.train.global_weights,
    )?;
    if let Some(td) = &art.space.topics {
        let mut w = create(&with_suffix(&stem, ".topics.txt"))?;
        for (&i, set) in td.kept.iter().zip(&td.topic_sets) {
            writeln!(w, "# {} {}", art.train.ids[i], art.train.labels[i])?;
            set.write_dump(&mut w)?;
        }
        w.flush()?;
    }
    if cfg.classifier == ClassifierKind::FdaKnn {
        let mut model = fit_fda(&art.space.train.entries, &art.space.train_labels)?;
        if let Some(k) = cfg.knn {
            model = model.with_k(k);
        }
        let mut w = create(&with_suffix(&stem, ".fda.txt"))?;
        model.write_dump(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

pub fn topics(args: &TopicsArgs) -> anyhow::Result<()> {
    let ds = load(&args.corpus)?;
    let pre = preprocessor(&args.context)?;
    let ctx = all_annotated(&ds, &pre);
    let lda = args.lda.config(args.context.context, args.seed);
    let td = topic_documents(&ctx.docs, &ctx.labels, &lda, args.lda.mode(), args.lda.vocabulary())?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut sets = td.kept.iter().zip(&td.topic_sets).peekable();
    for i in 0..ctx.ids.len() {
        match sets.next_if(|(&k, _)| k == i) {
            Some((_, set)) => {
                writeln!(out, "# {} {}", ctx.ids[i], ctx.labels[i])?;
                set.write_dump(&mut out)?;
            }
            None => writeln!(out, "# {} {} skipped", ctx.ids[i], ctx.labels[i])?,
        }
    }
    out.flush()?;
    Ok(())
}

fn write_per_class<T>(
    prefix: &Path,
    items: &[(Label, T)],
    mut line: impl FnMut(&mut dyn Write, &T) -> io::Result<()>,
) -> anyhow::Result<()> {
    for (label, suffix) in [(Label::Idiom, ".idiom.txt"), (Label::Literal, ".literal.txt")] {
        let mut w = create(&with_suffix(prefix, suffix))?;
        for (_, item) in items.iter().filter(|(l, _)| *l == label) {
            line(&mut w, item)?;
        }
        w.flush()?;
    }
    Ok(())
}

pub fn project(args: &ProjectArgs) -> anyhow::Result<()> {
    let lex = lexicon(&args.lexicon, args.affect.on())?;
    let ds = load(&args.corpus)?;
    let pre = preprocessor(&args.context)?;
    let ctx = all_annotated(&ds, &pre);
    let mut cfg = ExperimentConfig::new(args.repr.into(), ClassifierKind::FdaKnn, args.context.context.into());
    cfg.affect = args.affect.on();
    cfg.topic_mode = args.lda.mode();
    cfg.topic_vocabulary = args.lda.vocabulary();
    let lda = args.lda.config(args.context.context, args.seed);
    let space = build_features(&cfg, &lda, &ctx, &ctx, lex.as_ref())?;
    let points = projection_2d(&space.train)?;
    let items: Vec<(Label, (f64, f64))> = space.train_labels.iter().copied().zip(points).collect();
    write_per_class(&args.out, &items, |w, (x, y)| writeln!(w, "{x:.6},{y:.6}"))
}

pub fn arousal(args: &ArousalCurveArgs) -> anyhow::Result<()> {
    let Some(lex) = lexicon(&args.lexicon, true)? else {
        unreachable!("lexicon is required")
    };
    let ds = load(&args.corpus)?;
    let pre = preprocessor(&args.context)?;
    let ctx = all_annotated(&ds, &pre);
    let mean = training_mean(&ctx.docs, &lex)?;
    let of = |label| {
        let docs: Vec<&[String]> = ctx
            .docs
            .iter()
            .zip(&ctx.labels)
            .filter(|(_, &l)| l == label)
            .map(|(d, _)| d.as_slice())
            .collect();
        arousal_curve(&docs, &lex, mean)
    };
    let mut items: Vec<(Label, f64)> = of(Label::Idiom).into_iter().map(|v| (Label::Idiom, v)).collect();
    items.extend(of(Label::Literal).into_iter().map(|v| (Label::Literal, v)));
    write_per_class(&args.out, &items, |w, v| writeln!(w, "{v:.6}"))
}

pub fn synth(args: &SynthArgs) -> anyhow::Result<()> {
    if args.idioms + args.literals == 0 {
        return Err(UsageError("--idioms and --literals cannot both be 0".into()).into());
    }
    if args.vocab_size == 0 || args.doc_len == 0 || args.paragraphs == 0 {
        return Err(UsageError("--vocab-size, --doc-len and --paragraphs must be positive".into()).into());
    }
    let cfg = SynthConfig {
        vocab_size_per_class: args.vocab_size,
        doc_len: args.doc_len,
        overlap_fraction: args.overlap,
        paragraphs: args.paragraphs,
        ..SynthConfig::new(args.idioms, args.literals, args.seed)
    };
    let ds = gen_synthetic(&cfg);
    let mut w = create(&args.out)?;
    ds.write_jsonl(&mut w)?;
    w.flush()?;
    if let Some(p) = &args.lexicon_out {
        let mut w = create(p)?;
        w.write_all(gen_synthetic_lexicon(&cfg, args.arousal_shift).to_csv().as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

pub fn validate(args: &ValidateArgs) -> anyhow::Result<()> {
    let mut failed = 0;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for path in &args.corpora {
        match load(path) {
            Ok(ds) => writeln!(
                out,
                "{}: ok, {} instances of {:?} ({} idiom, {} literal, {} unannotated)",
                path.display(),
                ds.len(),
                ds.expression,
                ds.count(Label::Idiom),
                ds.count(Label::Literal),
                ds.count(Label::Unknown)
            )?,
            Err(e) => {
                failed += 1;
                writeln!(out, "{}: invalid: {e:#}", path.display())?;
            }
        }
    }
    if let Some(p) = &args.lexicon.lexicon {
        match load_lexicon(p, &args.lexicon.columns()) {
            Ok(lex) => writeln!(
                out,
                "{}: ok, {} lemmas, {} duplicates",
                p.display(),
                lex.len(),
                lex.duplicates
            )?,
            Err(e) => {
                failed += 1;
                writeln!(out, "{}: invalid: {e}", p.display())?;
            }
        }
    }
    if let Some(p) = &args.stoplist {
        match Stoplist::load(p) {
            Ok(s) => writeln!(out, "{}: ok, {} words", p.display(), s.len())?,
            Err(e) => {
                failed += 1;
                writeln!(out, "{}: invalid: {e}", p.display())?;
            }
        }
    }
    if failed > 0 {
        bail!("{failed} file(s) failed validation");
    }
    Ok(())
}
