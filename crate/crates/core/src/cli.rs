//! Command-line front end. [`dispatch`] parses arguments, runs one
//! subcommand, prints its report to stdout and any error to stderr as JSON.
//!
//! Exit codes: 0 success, 1 domain error (or a failed experiment verdict),
//! 2 usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::experiments::{run_suite, ExperimentConfig, CSV_HEADER};
use crate::lattice::{enumerate_subgroups_with, ergodic_ad_measures, LatticeMeasure, LatticeOptions};
use crate::measures::{
    classify_nu, classify_sequence_action, definetti_estimate, independence_check, mc_fixed_probability,
    mc_part_l_overlap, part_l_overlap, sample_labels, sample_normalizer_counts, super_newton_sum, thoma_character,
    AlphaParams,
};
use crate::numeric::{format_rational, NumericMode, Rational, Weight};
use crate::perm::Permutation;
use crate::young::{check_n2_equals_n, is_self_normalizing, normalizer_symbolic, SignedPartition, SignedYoungSubgroup};

#[derive(Parser, Debug)]
#[command(name = "tnf", version, about = "Random signed Young subgroups, fixed-point measures and finite lattice oracles")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOptions,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOptions {
    /// Master seed; required by every stochastic subcommand.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Arithmetic for weights and closed forms.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Rational)]
    pub mode: ModeArg,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    pub csv: bool,

    /// Progress and timing on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Rational,
    Float,
}

impl From<ModeArg> for NumericMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rational => NumericMode::Rational,
            ModeArg::Float => NumericMode::Float,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw labels i.i.d. from α on a window and report the signed partition.
    Sample {
        /// α as inline JSON or a path to a JSON file.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
    },
    /// Closed forms and a Monte Carlo estimate of the fixed-point probability.
    Fixprob {
        #[arg(long)]
        alpha: String,
        /// Permutation in cycle notation.
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Character value built from super-Newton sums.
    Character {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        g: String,
    },
    /// TNF classification of ν_α and of the product action on sequences.
    Classify {
        #[arg(long)]
        alpha: String,
        /// Also sample this many subgroups and count the self-normalizing ones.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 200)]
        window: usize,
    },
    /// Empirical label frequencies and the product-form check.
    Finetti {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        n: usize,
        /// Coordinates in the joint-frequency check.
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Replicates in the joint-frequency check; 0 skips it.
        #[arg(long, default_value_t = 0)]
        replicates: u64,
    },
    /// Chance that a fixed block appears in a random partition into equal blocks.
    #[command(name = "part-l")]
    PartL {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        l: usize,
        /// Monte Carlo sample count; omitted means exact value only.
        #[arg(long)]
        samples: Option<u64>,
        /// Permit the Monte Carlo estimate for blocks longer than 2.
        #[arg(long)]
        tensor: bool,
    },
    /// Canonical form and normalizer of a signed partition.
    Young {
        /// `{"window": n, "labels": [...]}` inline or as a file path.
        #[arg(long)]
        partition: String,
    },
    /// Subgroups of small symmetric groups and normalizer chains
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Named experiment suites with JSON and CSV reports
    #[command(subcommand)]
    Experiments(ExperimentsCommand),
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    /// Every subgroup of S_n with normalizers and conjugacy classes.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        allow_degree_six: bool,
    },
    /// Normalization chains, from one subgroup or from every ergodic AD-measure.
    Hierarchy {
        #[arg(long)]
        n: usize,
        /// Subgroup index, `trivial`, `full`, or generators like "(1 2),(3 4)".
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        allow_degree_six: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExperimentsCommand {
    /// Run a suite and write report.json and report.csv.
    Run {
        /// fixed-point, classification, hierarchy or matching-decay.
        #[arg(long)]
        name: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A command's result: the JSON report plus an optional table for CSV output.
struct Output {
    json: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    exit: i32,
}

impl Output {
    fn json(json: Value) -> Self {
        Self { json, table: None, exit: 0 }
    }

    fn with_table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header, rows));
        self
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let started = std::time::Instant::now();
    let result = execute(&cli).and_then(|o| {
        emit(&cli.global, &o, out)?;
        Ok(o.exit)
    });
    if cli.global.verbose > 0 {
        let _ = writeln!(err, "elapsed {:.3}s", started.elapsed().as_secs_f64());
    }
    match result {
        Ok(code) => code,
        Err(e) => {
            let body = json!({ "error": e.kind(), "message": e.to_string() });
            let _ = writeln!(err, "{body}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn emit(global: &GlobalOptions, o: &Output, out: &mut dyn Write) -> Result<()> {
    if global.csv || global.format == Format::Csv {
        let mut w = csv::Writer::from_writer(out);
        match &o.table {
            Some((header, rows)) => {
                w.write_record(header)?;
                for r in rows {
                    w.write_record(r)?;
                }
            }
            None => {
                w.write_record(["key", "value"])?;
                if let Value::Object(map) = &o.json {
                    for (k, v) in map {
                        let cell = match v {
                            Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        w.write_record([k.as_str(), cell.as_str()])?;
                    }
                }
            }
        }
        w.flush()?;
    } else {
        writeln!(out, "{}", serde_json::to_string_pretty(&o.json)?)?;
    }
    Ok(())
}

fn require_seed(global: &GlobalOptions, command: &str) -> Result<u64> {
    global
        .seed
        .ok_or_else(|| Error::Usage(format!("`{command}` is stochastic and needs --seed")))
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_json_arg(arg: &str) -> Result<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        fs::read_to_string(arg).map_err(|e| Error::Usage(format!("cannot read {arg:?}: {e}")))
    }
}

fn read_alpha<W: Weight>(arg: &str) -> Result<AlphaParams<W>> {
    AlphaParams::from_json_str(&read_json_arg(arg)?)
}

/// Adds the seed and mode echo to a JSON object that lacks them.
fn echo(mut v: Value, global: &GlobalOptions) -> Value {
    if let Value::Object(map) = &mut v {
        map.entry("seed").or_insert_with(|| global.seed.map_or(Value::Null, Value::from));
        map.entry("mode").or_insert_with(|| json!(NumericMode::from(global.mode)));
    }
    v
}

fn execute(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let mode = NumericMode::from(g.mode);
    let mut output = match (&cli.command, mode) {
        (Command::Sample { alpha, n }, NumericMode::Rational) => sample::<Rational>(g, alpha, *n)?,
        (Command::Sample { alpha, n }, NumericMode::Float) => sample::<f64>(g, alpha, *n)?,
        (Command::Fixprob { alpha, g: perm, samples }, NumericMode::Rational) => {
            fixprob::<Rational>(g, alpha, perm, *samples)?
        }
        (Command::Fixprob { alpha, g: perm, samples }, NumericMode::Float) => fixprob::<f64>(g, alpha, perm, *samples)?,
        (Command::Character { alpha, g: perm }, NumericMode::Rational) => character::<Rational>(alpha, perm)?,
        (Command::Character { alpha, g: perm }, NumericMode::Float) => character::<f64>(alpha, perm)?,
        (Command::Classify { alpha, samples, window }, NumericMode::Rational) => {
            classify::<Rational>(g, alpha, *samples, *window)?
        }
        (Command::Classify { alpha, samples, window }, NumericMode::Float) => {
            classify::<f64>(g, alpha, *samples, *window)?
        }
        (Command::Finetti { alpha, n, t, replicates }, NumericMode::Rational) => {
            finetti::<Rational>(g, alpha, *n, *t, *replicates)?
        }
        (Command::Finetti { alpha, n, t, replicates }, NumericMode::Float) => {
            finetti::<f64>(g, alpha, *n, *t, *replicates)?
        }
        (Command::PartL { m, l, samples, tensor }, _) => part_l(g, *m, *l, *samples, *tensor)?,
        (Command::Young { partition }, _) => young(partition)?,
        (Command::Lattice(cmd), _) => lattice(cmd)?,
        (Command::Experiments(ExperimentsCommand::Run { name, config, out }), _) => {
            experiments(g, name, config.as_ref(), out.as_ref())?
        }
    };
    output.json = echo(output.json, g);
    Ok(output)
}

fn sample<W: Weight>(global: &GlobalOptions, alpha: &str, n: usize) -> Result<Output> {
    let seed = require_seed(global, "sample")?;
    let alpha = read_alpha::<W>(alpha)?;
    let s = sample_labels(&alpha, n, seed)?;
    let partition = s.partition();
    let y = SignedYoungSubgroup::new(&partition);
    let rows = s
        .labels
        .iter()
        .enumerate()
        .map(|(x, l)| vec![(x + 1).to_string(), l.to_string()])
        .collect();
    Ok(Output::json(json!({
        "alpha": alpha.to_json(),
        "window": n,
        "labels": s.labels,
        "partition": partition.to_json(),
        "canonical": y.partition().to_json(),
        "self_normalizing": is_self_normalizing(&y),
        "n2_equals_n": check_n2_equals_n(&y),
    }))
    .with_table(vec!["point", "label"], rows))
}

fn fixprob<W: Weight>(global: &GlobalOptions, alpha: &str, perm: &str, samples: u64) -> Result<Output> {
    let seed = require_seed(global, "fixprob")?;
    let alpha = read_alpha::<W>(alpha)?;
    let g: Permutation = perm.parse()?;
    let report = mc_fixed_probability(&alpha, &g, samples, seed)?;
    let cell = |w: &W| match w.to_json() {
        Value::String(s) => s,
        other => other.to_string(),
    };
    let mode = W::MODE.to_string();
    let mut rows: Vec<Vec<String>> = report
        .factors
        .iter()
        .map(|f| {
            vec![
                "factor".into(),
                f.length.to_string(),
                f.count.to_string(),
                cell(&f.paper),
                cell(&f.full),
                String::new(),
                String::new(),
                String::new(),
                seed.to_string(),
                mode.clone(),
            ]
        })
        .collect();
    rows.push(vec![
        "estimate".into(),
        String::new(),
        String::new(),
        cell(&report.paper_value),
        cell(&report.full_value),
        report.mc_estimate.to_string(),
        report.mc_stderr.to_string(),
        samples.to_string(),
        seed.to_string(),
        mode,
    ]);
    let mut json = report.to_json();
    json["alpha"] = alpha.to_json();
    Ok(Output::json(json).with_table(
        vec![
            "kind",
            "cycle_length",
            "count",
            "paper",
            "full",
            "mc_estimate",
            "mc_stderr",
            "samples",
            "seed",
            "mode",
        ],
        rows,
    ))
}

fn character<W: Weight>(alpha: &str, perm: &str) -> Result<Output> {
    let alpha = read_alpha::<W>(alpha)?;
    let g: Permutation = perm.parse()?;
    let value = thoma_character(&alpha, &g);
    let factors: Vec<Value> = g
        .cycle_type()
        .counts()
        .iter()
        .map(|(&k, &c)| json!({ "cycle_length": k, "count": c, "super_newton": super_newton_sum(&alpha, k as u32).to_json() }))
        .collect();
    Ok(Output::json(json!({
        "alpha": alpha.to_json(),
        "permutation": g.to_string(),
        "cycle_type": g.cycle_type(),
        "factors": factors,
        "character": value.to_json(),
    })))
}

fn classify<W: Weight>(global: &GlobalOptions, alpha: &str, samples: Option<u64>, window: usize) -> Result<Output> {
    let alpha = read_alpha::<W>(alpha)?;
    let mut json = json!({
        "alpha": alpha.to_json(),
        "nu": classify_nu(&alpha).to_json(),
        "sequence_action": classify_sequence_action(&alpha).to_json(),
    });
    if let Some(samples) = samples {
        let seed = require_seed(global, "classify --samples")?;
        json["sampled"] = serde_json::to_value(sample_normalizer_counts(&alpha, window, samples, seed)?)?;
    }
    Ok(Output::json(json))
}

fn finetti<W: Weight>(global: &GlobalOptions, alpha: &str, n: usize, t: usize, replicates: u64) -> Result<Output> {
    let seed = require_seed(global, "finetti")?;
    let alpha = read_alpha::<W>(alpha)?;
    let s = sample_labels(&alpha, n, seed)?;
    let estimate = definetti_estimate(&s);
    let rows = estimate
        .weights()
        .iter()
        .map(|(v, w)| {
            vec![
                v.to_string(),
                format_rational(w),
                Weight::to_f64(w).to_string(),
                alpha.weight(*v).to_f64().to_string(),
            ]
        })
        .collect();
    let deviations: Map<String, Value> = alpha
        .support()
        .into_iter()
        .chain(estimate.support())
        .map(|v| {
            let gap = (estimate.weight(v).to_f64() - alpha.weight(v).to_f64()).abs();
            (v.to_string(), json!(gap))
        })
        .collect();
    let mut json = json!({
        "alpha": alpha.to_json(),
        "window": n,
        "estimate": estimate.to_json(),
        "deviation": deviations,
    });
    if replicates > 0 {
        let report = independence_check(&alpha, n, t, replicates, seed)?;
        json["independence"] = json!({
            "coordinates": report.coordinates,
            "replicates": report.replicates,
            "max_deviation": report.max_deviation,
        });
    }
    Ok(Output::json(json).with_table(vec!["label", "estimate", "estimate_float", "alpha"], rows))
}

fn part_l(global: &GlobalOptions, m: usize, l: usize, samples: Option<u64>, tensor: bool) -> Result<Output> {
    let mut json = json!({ "l": l, "m": m });
    if l == 2 {
        let exact = part_l_overlap(l, m)?;
        json["exact"] = json!(format_rational(&exact));
    } else if samples.is_none() {
        return Err(Error::Usage(format!("l = {l} has no exact value; pass --samples with --tensor")));
    }
    if let Some(samples) = samples {
        let seed = require_seed(global, "part-l --samples")?;
        let est = mc_part_l_overlap(l, m, samples, seed, tensor)?;
        json["mc_estimate"] = json!(est.estimate);
        json["mc_stderr"] = json!(est.stderr);
        json["samples"] = json!(samples);
    }
    Ok(Output::json(json))
}

fn young(partition: &str) -> Result<Output> {
    let eta = SignedPartition::from_json(&read_json_arg(partition)?)?;
    let y = SignedYoungSubgroup::new(&eta);
    let n = normalizer_symbolic(&y);
    Ok(Output::json(json!({
        "partition": eta.to_json(),
        "canonical": y.partition().to_json(),
        "normalizer": n.partition().to_json(),
        "self_normalizing": is_self_normalizing(&y),
        "n2_equals_n": check_n2_equals_n(&y),
    })))
}

fn chain_json(chain: &[LatticeMeasure<'_>]) -> Value {
    json!({
        "steps": chain.len() - 1,
        "measures": chain.iter().map(|m| m.to_json()).collect::<Vec<_>>(),
        "fixpoint_tnf_measure": chain.last().expect("nonempty chain").is_tnf_measure(),
    })
}

fn lattice(cmd: &LatticeCommand) -> Result<Output> {
    match cmd {
        LatticeCommand::Enumerate { n, allow_degree_six } => {
            let l = enumerate_subgroups_with(*n, LatticeOptions { allow_degree_six: *allow_degree_six })?;
            let rows = (0..l.len())
                .map(|i| {
                    vec![
                        i.to_string(),
                        l.order(i).to_string(),
                        l.generators(i).iter().map(|g| g.to_string()).collect::<Vec<_>>().join(","),
                        l.normalizer(i).to_string(),
                        l.class_of(i).to_string(),
                        l.is_self_normalizing(i).to_string(),
                    ]
                })
                .collect();
            Ok(Output::json(l.to_json()).with_table(
                vec!["index", "order", "generators", "normalizer", "class", "self_normalizing"],
                rows,
            ))
        }
        LatticeCommand::Hierarchy { n, start, allow_degree_six } => {
            let l = enumerate_subgroups_with(*n, LatticeOptions { allow_degree_six: *allow_degree_six })?;
            let chains: Vec<Value> = match start {
                Some(spec) => {
                    let h = l.resolve_spec(spec)?;
                    vec![json!({ "start": h, "chain": chain_json(&LatticeMeasure::point_mass(&l, h).hierarchy_chain()) })]
                }
                None => ergodic_ad_measures(&l)
                    .iter()
                    .enumerate()
                    .map(|(c, m)| json!({ "class": c, "chain": chain_json(&m.hierarchy_chain()) }))
                    .collect(),
            };
            Ok(Output::json(json!({
                "degree": n,
                "subgroup_count": l.len(),
                "self_normalizing": l.self_normalizing_set(),
                "chains": chains,
            })))
        }
    }
}

fn experiments(
    global: &GlobalOptions,
    name: &str,
    config: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> Result<Output> {
    let mut cfg = match config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {path:?}: {e}")))?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if cfg.name != name {
                return Err(Error::Usage(format!("--name {name} but config names suite {:?}", cfg.name)));
            }
            if global.seed.is_some() {
                cfg.seed = global.seed;
            }
            cfg
        }
        None => ExperimentConfig::default_for(name, require_seed(global, "experiments run")?)?,
    };
    if global.mode == ModeArg::Float {
        cfg.mode = NumericMode::Float;
    }
    if let Some(dir) = out {
        cfg.out = Some(dir.clone());
    }
    let report = run_suite(&cfg)?;
    let rows = report.csv_rows();
    Ok(Output {
        exit: if report.verdict { 0 } else { 1 },
        ..Output::json(report.to_json()).with_table(CSV_HEADER.to_vec(), rows)
    })
}
