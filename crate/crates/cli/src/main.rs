//! `visemap`: catalog inspection, map algebra, derivation and scoring.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use visemap_core::derive::derive_loose_traced;
use visemap_core::eval::{sweep_csv, ScoreReport};
use visemap_core::{
    aggregate, apply_map, combine, confusion_factor, derive_tight, load_confusion, score, sweep, to_graph,
    true_positive_only, Catalog, ClassMode, ConfusionMatrix, Coverage, MergeAggregation, PhonemeInventory,
    Stage, TranscriptSet, VisemeMap,
};

const CATALOG_ENV: &str = "VISEMAP_CATALOG";

#[derive(Parser)]
#[command(name = "visemap", version, about = "Phoneme-to-viseme map toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog maps with their confusion factors.
    List {
        #[arg(long, value_enum)]
        coverage: Option<CoverageArg>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a map in file format.
    Show { map: String },
    /// Print V, P and the confusion factor of a map.
    Cf { map: String },
    /// Pair a consonant map with a vowel map.
    Combine {
        #[arg(long)]
        consonants: String,
        #[arg(long)]
        vowels: String,
        /// Inventory file, or `avl2` / `catalog` for the built-in ones.
        #[arg(long, default_value = "avl2")]
        inventory: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a phoneme transcript file to viseme labels.
    Apply {
        #[arg(long)]
        map: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Inspect the symmetrized confusion graph of a matrix.
    Graph {
        #[arg(long)]
        confusions: PathBuf,
        /// Summary counts instead of the edge list.
        #[arg(long)]
        stats: bool,
    },
    /// Derive a map from a confusion matrix.
    Derive {
        #[arg(long)]
        confusions: PathBuf,
        #[arg(long, default_value = "avl2")]
        inventory: String,
        #[arg(long, value_enum)]
        stage: StageArg,
        #[arg(long, value_enum)]
        classes: ModeArg,
        #[arg(long, value_enum, default_value_t = AggregationArg::Sum)]
        aggregation: AggregationArg,
        #[arg(long, default_value = "derived")]
        id: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Score hypothesis transcripts against references.
    Score {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long = "hyp")]
        hypothesis: PathBuf,
        #[arg(long)]
        per_fold: bool,
    },
    /// Score every consonant x vowel pairing, one hypothesis file per map.
    Sweep {
        /// `all` or a comma-separated list of ids.
        #[arg(long, default_value = "all")]
        consonant_maps: String,
        #[arg(long, default_value = "all")]
        vowel_maps: String,
        #[arg(long, default_value = "avl2")]
        inventory: String,
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Directory holding `<map id>.tsv` for every pairing.
        #[arg(long)]
        hyp_dir: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CoverageArg {
    Consonant,
    Vowel,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Tight,
    Loose,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Mixed,
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregationArg {
    Sum,
    MaxEdge,
}

/// A failed command: the error kind name and a message.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.kind, self.message)
    }
}

impl From<visemap_core::Error> for Failure {
    fn from(e: visemap_core::Error) -> Self {
        Failure {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn io(path: &Path, e: io::Error) -> Self {
        Failure {
            kind: "IoError",
            message: format!("{}: {e}", path.display()),
        }
    }

    fn in_file(path: &Path, e: visemap_core::Error) -> Self {
        Failure {
            kind: e.kind(),
            message: format!("{}: {e}", path.display()),
        }
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

fn read(path: &Path) -> CmdResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
fn emit(path: Option<&Path>, contents: &str) -> CmdResult {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        return out
            .write_all(contents.as_bytes())
            .map_err(|e| Failure::io(Path::new("<stdout>"), e));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Failure::io(dir, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| Failure::io(path, e))?;
    tmp.persist(path).map_err(|e| Failure::io(path, e.error))?;
    Ok(())
}

/// Built-in maps plus any `.map` files in `$VISEMAP_CATALOG`.
fn load_catalog() -> CmdResult<Catalog> {
    let mut catalog = Catalog::builtin();
    if let Some(dir) = std::env::var_os(CATALOG_ENV) {
        let dir = PathBuf::from(dir);
        catalog.load_dir(&dir).map_err(|e| Failure::in_file(&dir, e))?;
    }
    Ok(catalog)
}

/// A map argument is a file path if one exists, otherwise a catalog id.
fn resolve_map(catalog: &Catalog, arg: &str) -> CmdResult<VisemeMap> {
    let path = Path::new(arg);
    if path.is_file() {
        return VisemeMap::parse(&read(path)?).map_err(|e| Failure::in_file(path, e));
    }
    Ok(catalog.require(arg)?.clone())
}

fn resolve_inventory(arg: &str) -> CmdResult<PhonemeInventory> {
    match arg {
        "avl2" => Ok(PhonemeInventory::avl2().clone()),
        "catalog" => Ok(PhonemeInventory::catalog().clone()),
        file => {
            let path = Path::new(file);
            PhonemeInventory::parse(&read(path)?).map_err(|e| Failure::in_file(path, e))
        }
    }
}

fn load_transcripts(path: &Path) -> CmdResult<TranscriptSet> {
    TranscriptSet::parse_tsv(&read(path)?).map_err(|e| Failure::in_file(path, e))
}

fn load_matrix(path: &Path) -> CmdResult<ConfusionMatrix> {
    load_confusion(&read(path)?).map_err(|e| Failure::in_file(path, e))
}

fn cmd_list(coverage: Option<CoverageArg>, format: Format) -> CmdResult<String> {
    let catalog = load_catalog()?;
    let wanted = coverage.map(|c| match c {
        CoverageArg::Consonant => Coverage::Consonant,
        CoverageArg::Vowel => Coverage::Vowel,
        CoverageArg::Full => Coverage::Full,
    });
    let maps: Vec<&VisemeMap> = catalog
        .iter()
        .filter(|m| wanted.is_none_or(|c| m.coverage() == c))
        .collect();
    match format {
        Format::Text => {
            let width = maps.iter().map(|m| m.id().len()).max().unwrap_or(0);
            let mut out = String::new();
            for m in maps {
                let cf = confusion_factor(m)?;
                out.push_str(&format!(
                    "{:<width$}  {:<9}  {cf}\n",
                    m.id(),
                    m.coverage().as_str()
                ));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let header = ["id", "coverage", "visemes", "phonemes", "cf", "citation"];
            w.write_record(header).expect("in-memory write");
            for m in maps {
                let cf = confusion_factor(m)?;
                w.write_record([
                    m.id(),
                    m.coverage().as_str(),
                    &cf.viseme_count.to_string(),
                    &cf.phoneme_count.to_string(),
                    &format!("{:.3}", cf.cf),
                    m.citation(),
                ])
                .expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            Ok(String::from_utf8(bytes).expect("utf-8 fields"))
        }
    }
}

fn cmd_graph(confusions: &Path, stats: bool) -> CmdResult<String> {
    let m = load_matrix(confusions)?;
    let g = to_graph(&m);
    let mut out = String::new();
    if stats {
        let isolated = g.isolated();
        let tp = true_positive_only(&m);
        out.push_str(&format!("vertices {}\n", g.len()));
        out.push_str(&format!("edges {}\n", g.edge_count()));
        out.push_str(&format!("isolated {}:", isolated.len()));
        for s in &isolated {
            out.push_str(&format!(" {s}"));
        }
        out.push_str(&format!("\ntrue-positive-only {}:", tp.len()));
        for s in &tp {
            out.push_str(&format!(" {s}"));
        }
        out.push('\n');
    } else {
        out.push_str("a,b,weight\n");
        for a in 0..g.len() {
            for b in g.neighbors(a).iter().filter(|&b| b > a) {
                out.push_str(&format!(
                    "{},{},{}\n",
                    g.vertices()[a],
                    g.vertices()[b],
                    g.weight(a, b)
                ));
            }
        }
    }
    Ok(out)
}

fn cmd_derive(
    confusions: &Path,
    inventory: &str,
    stage: StageArg,
    mode: ModeArg,
    aggregation: AggregationArg,
    id: &str,
) -> CmdResult<String> {
    let m = load_matrix(confusions)?;
    let inv = resolve_inventory(inventory)?;
    let mode = match mode {
        ModeArg::Mixed => ClassMode::Mixed,
        ModeArg::Split => ClassMode::Split,
    };
    let stage = match stage {
        StageArg::Tight => Stage::Tight,
        StageArg::Loose => Stage::Loose,
    };
    let aggregation = match aggregation {
        AggregationArg::Sum => MergeAggregation::Sum,
        AggregationArg::MaxEdge => MergeAggregation::MaxEdge,
    };
    let tight = derive_tight(&m, &inv, mode)?;
    let map = match stage {
        Stage::Tight => tight,
        Stage::Loose => derive_loose_traced(&tight, &m, &inv, mode, aggregation)?.map,
    };
    let source = confusions.file_name().map_or_else(
        || confusions.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    );
    let map = map.renamed(id, format!("derived({source}, {stage}, {mode})"))?;
    Ok(map.serialize())
}

fn counts_line(report: &ScoreReport) -> CmdResult<String> {
    let t = report.total;
    let c = t.correctness().ok_or(visemap_core::Error::EmptyReference)?;
    Ok(format!(
        "N={} D={} S={} C={c:.3}\n",
        t.n_ref, t.deletions, t.substitutions
    ))
}

fn cmd_score(reference: &Path, hypothesis: &Path, per_fold: bool) -> CmdResult<String> {
    let refs = load_transcripts(reference)?;
    let hyps = load_transcripts(hypothesis)?;
    let report = score(&refs, &hyps)?;
    let mut out = String::new();
    if per_fold {
        for (fold, c) in &report.per_fold {
            let value = c
                .correctness()
                .map_or_else(|| "-".to_string(), |v| format!("{v:.3}"));
            out.push_str(&format!(
                "fold {fold}: N={} D={} S={} C={value}\n",
                c.n_ref, c.deletions, c.substitutions
            ));
        }
    }
    out.push_str(&counts_line(&report)?);
    if per_fold {
        let summary = aggregate(&report.fold_correctness())?;
        out.push_str(&format!(
            "mean C={:.3} se={:.3} folds={}\n",
            summary.mean, summary.std_error, summary.fold_count
        ));
    }
    Ok(out)
}

/// Resolves `all` or a comma-separated id list to maps of the given coverage.
fn select_maps(catalog: &Catalog, arg: &str, coverage: Coverage) -> CmdResult<Vec<VisemeMap>> {
    let maps: Vec<VisemeMap> = if arg == "all" {
        catalog.with_coverage(coverage).cloned().collect()
    } else {
        arg.split(',')
            .map(|id| resolve_map(catalog, id.trim()))
            .collect::<CmdResult<_>>()?
    };
    Ok(maps)
}

fn cmd_sweep(
    consonant_maps: &str,
    vowel_maps: &str,
    inventory: &str,
    reference: &Path,
    hyp_dir: &Path,
) -> CmdResult<String> {
    let catalog = load_catalog()?;
    let inv = resolve_inventory(inventory)?;
    let cons = select_maps(&catalog, consonant_maps, Coverage::Consonant)?;
    let vows = select_maps(&catalog, vowel_maps, Coverage::Vowel)?;
    let mut maps = Vec::with_capacity(cons.len() * vows.len());
    for c in &cons {
        for v in &vows {
            maps.push(combine(c, v, &inv)?);
        }
    }
    let refs = load_transcripts(reference)?;
    let mut hyps = HashMap::new();
    for map in &maps {
        let path = hyp_dir.join(format!("{}.tsv", map.id()));
        if !path.is_file() {
            return Err(visemap_core::Error::IncompleteSweep(format!(
                "no hypothesis file {}",
                path.display()
            ))
            .into());
        }
        hyps.insert(map.id().to_string(), load_transcripts(&path)?);
    }
    let rows = sweep(&maps, &refs, &hyps)?;
    Ok(sweep_csv(&rows))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::List { coverage, format } => emit(None, &cmd_list(coverage, format)?),
        Command::Show { map } => emit(None, &resolve_map(&load_catalog()?, &map)?.serialize()),
        Command::Cf { map } => {
            let report = confusion_factor(&resolve_map(&load_catalog()?, &map)?)?;
            emit(None, &format!("{report}\n"))
        }
        Command::Combine {
            consonants,
            vowels,
            inventory,
            output,
        } => {
            let catalog = load_catalog()?;
            let c = resolve_map(&catalog, &consonants)?;
            let v = resolve_map(&catalog, &vowels)?;
            let map = combine(&c, &v, &resolve_inventory(&inventory)?)?;
            emit(output.as_deref(), &map.serialize())
        }
        Command::Apply { map, input, output } => {
            let map = resolve_map(&load_catalog()?, &map)?;
            let items = load_transcripts(&input)?
                .iter()
                .map(|t| apply_map(&map, t))
                .collect();
            let converted = TranscriptSet::new(items)?;
            emit(output.as_deref(), &converted.to_tsv())
        }
        Command::Graph { confusions, stats } => emit(None, &cmd_graph(&confusions, stats)?),
        Command::Derive {
            confusions,
            inventory,
            stage,
            classes,
            aggregation,
            id,
            output,
        } => {
            let text = cmd_derive(&confusions, &inventory, stage, classes, aggregation, &id)?;
            emit(output.as_deref(), &text)
        }
        Command::Score {
            reference,
            hypothesis,
            per_fold,
        } => emit(None, &cmd_score(&reference, &hypothesis, per_fold)?),
        Command::Sweep {
            consonant_maps,
            vowel_maps,
            inventory,
            reference,
            hyp_dir,
            output,
        } => {
            let csv = cmd_sweep(&consonant_maps, &vowel_maps, &inventory, &reference, &hyp_dir)?;
            emit(output.as_deref(), &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(1)
        }
    }
}
