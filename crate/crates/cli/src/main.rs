//! `namedict`: build, curate and query an Arabic first-name variant
//! dictionary.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use namedict::builder::{read_corpus, BuildOptions};
use namedict::curate::{apply_patches, CurateError, Patch};
use namedict::rules::{R4Variant, RuleOptions};
use namedict::store::Summary;
use namedict::{
    build, search_read, standardize_write, stats, CleanError, Dictionary, Expansion, RuleId, RuleSet, RuleTable,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "namedict", version, about = "Arabic first-name variant dictionary")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dictionary from a `name<TAB>count` corpus.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        rules: RuleArgs,
    },
    /// Reading mode: list the names to search for.
    Query {
        #[arg(long)]
        dict: PathBuf,
        /// Patches applied in order before the lookup.
        #[arg(long)]
        patch: Vec<PathBuf>,
        /// Expand to the whole variant group, not just listed alternatives.
        #[arg(long)]
        component: bool,
        name: String,
    },
    /// Writing mode: suggest the standard form of a name.
    Standardize {
        #[arg(long)]
        dict: PathBuf,
        name: String,
    },
    /// Apply curation patches and write the result.
    Patch {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long, required = true)]
        patch: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare a dictionary before and after curation.
    Stats {
        #[arg(long)]
        before: PathBuf,
        #[arg(long)]
        after: PathBuf,
    },
    /// Print the active rule table.
    Rules {
        #[command(flatten)]
        rules: RuleArgs,
    },
}

#[derive(Args)]
struct RuleArgs {
    /// Turn a rule off (repeatable), e.g. `--disable-rule R13c`.
    #[arg(long = "disable-rule", value_name = "ID")]
    disable: Vec<RuleId>,
    /// Letter pair used by rule 4.
    #[arg(long, default_value = "sheen", value_name = "sheen|theh|both")]
    r4: R4Variant,
}

impl RuleArgs {
    fn table(&self) -> RuleTable {
        RuleTable::new(RuleOptions { disabled: self.disable.iter().copied().collect::<RuleSet>(), r4: self.r4 })
    }
}

/// A failure and the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: 1, message: message.to_string() }
    }

    fn curation(message: impl ToString) -> Self {
        Failure { code: 3, message: message.to_string() }
    }

    fn at(path: &Path, err: impl ToString) -> Self {
        Failure::input(format!("{}: {}", path.display(), err.to_string()))
    }
}

impl From<CleanError> for Failure {
    fn from(err: CleanError) -> Self {
        Failure { code: 2, message: err.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::input(err)
    }
}

fn curate_failure(path: Option<&Path>, err: CurateError) -> Failure {
    match err {
        CurateError::Parse { .. } | CurateError::Io(_) => match path {
            Some(p) => Failure::at(p, err),
            None => Failure::input(err),
        },
        other => Failure::curation(other),
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("namedict: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Build { corpus, out: path, jobs, rules } => cmd_build(&corpus, &path, jobs, &rules, format, out),
        Command::Query { dict, patch, component, name } => {
            let mode = if component { Expansion::Component } else { Expansion::Adjacent };
            cmd_query(&dict, &patch, mode, &name, format, out)
        }
        Command::Standardize { dict, name } => cmd_standardize(&dict, &name, format, out),
        Command::Patch { dict, patch, out: path } => cmd_patch(&dict, &patch, &path, format, out),
        Command::Stats { before, after } => cmd_stats(&before, &after, format, out),
        Command::Rules { rules } => cmd_rules(&rules, format, out),
    }
}

fn load_dict(path: &Path) -> Result<Dictionary, Failure> {
    Dictionary::load_from_path(path).map_err(|e| Failure::at(path, e))
}

fn load_patches(paths: &[PathBuf]) -> Result<Vec<Patch>, Failure> {
    paths
        .iter()
        .map(|p| Patch::load_from_path(p).map_err(|e| curate_failure(Some(p), e)))
        .collect()
}

fn patched(dict: Dictionary, patches: &[Patch]) -> Result<Dictionary, Failure> {
    if patches.is_empty() {
        return Ok(dict);
    }
    let outcome = apply_patches(&dict, patches).map_err(|e| curate_failure(None, e))?;
    for w in &outcome.warnings {
        eprintln!("namedict: warning: {w}");
    }
    Ok(outcome.dictionary)
}

fn write_summary(summary: &Summary, format: Format, out: &mut impl Write) -> Outcome {
    match format {
        Format::Tsv => writeln!(out, "{summary}")?,
        Format::Jsonl => writeln!(
            out,
            "{}",
            json!({
                "names": summary.names,
                "names_with_alternatives": summary.names_with_alternatives,
                "components": summary.components,
                "max_alternatives": summary.max_alternatives,
                "pairs": summary.pairs,
            })
        )?,
    }
    Ok(())
}

fn cmd_build(corpus: &Path, path: &Path, jobs: usize, rules: &RuleArgs, format: Format, out: &mut impl Write) -> Outcome {
    let file = File::open(corpus).map_err(|e| Failure::at(corpus, e))?;
    let records = read_corpus(BufReader::new(file)).map_err(|e| Failure::at(corpus, e))?;
    let options = BuildOptions { jobs, ..Default::default() };
    let dict = build(&records, &rules.table(), options).map_err(|e| Failure::at(corpus, e))?;
    dict.save_to_path(path).map_err(|e| Failure::at(path, e))?;
    write_summary(&dict.summary(), format, out)
}

fn cmd_query(dict: &Path, patches: &[PathBuf], mode: Expansion, name: &str, format: Format, out: &mut impl Write) -> Outcome {
    let patches = load_patches(patches)?;
    let dict = patched(load_dict(dict)?, &patches)?;
    let result = search_read(&dict, name, mode)?;
    for (n, count) in &result.expansion {
        let role = match &result.standard {
            None => "unknown",
            Some(s) if s == n => "standard",
            Some(_) => "variant",
        };
        match format {
            Format::Tsv => writeln!(out, "{n}\t{count}\t{role}")?,
            Format::Jsonl => writeln!(out, "{}", json!({ "name": n.as_str(), "count": count, "role": role }))?,
        }
    }
    Ok(())
}

fn cmd_standardize(dict: &Path, name: &str, format: Format, out: &mut impl Write) -> Outcome {
    let dict = load_dict(dict)?;
    let advice = standardize_write(&dict, name)?;
    let status = if !dict.contains(advice.entered.as_str()) {
        "unknown"
    } else if advice.is_nonstandard {
        "nonstandard"
    } else {
        "standard"
    };
    match format {
        Format::Tsv => writeln!(out, "{}\t{}\t{status}", advice.entered, advice.standard)?,
        Format::Jsonl => writeln!(
            out,
            "{}",
            json!({ "entered": advice.entered.as_str(), "standard": advice.standard.as_str(), "status": status })
        )?,
    }
    Ok(())
}

fn cmd_patch(dict: &Path, patches: &[PathBuf], path: &Path, format: Format, out: &mut impl Write) -> Outcome {
    let patches = load_patches(patches)?;
    let dict = patched(load_dict(dict)?, &patches)?;
    dict.save_to_path(path).map_err(|e| Failure::at(path, e))?;
    write_summary(&dict.summary(), format, out)
}

fn cmd_stats(before: &Path, after: &Path, format: Format, out: &mut impl Write) -> Outcome {
    let s = stats(&load_dict(before)?, &load_dict(after)?).map_err(|e| curate_failure(None, e))?;
    match format {
        Format::Tsv => writeln!(out, "{s}")?,
        Format::Jsonl => {
            for row in &s.buckets.rows {
                let line = json!({
                    "alternatives": row.alternatives,
                    "before": row.before,
                    "after": row.after,
                    "change": row.change(),
                });
                writeln!(out, "{line}")?;
            }
            let rate = |r: &namedict::curate::Rate| json!({ "numerator": r.numerator, "denominator": r.denominator, "value": r.as_f64() });
            let totals = json!({
                "total_before": s.buckets.total_before(),
                "total_after": s.buckets.total_after(),
                "auto_pairs": s.auto_pairs,
                "rejected_pairs": s.rejected_pairs,
                "added_pairs": s.added_pairs,
                "acceptance_error_rate": rate(&s.acceptance_error_rate),
                "rejection_error_rate": rate(&s.rejection_error_rate),
            });
            writeln!(out, "{totals}")?;
        }
    }
    Ok(())
}

fn cmd_rules(rules: &RuleArgs, format: Format, out: &mut impl Write) -> Outcome {
    for line in rules.table().describe() {
        match format {
            Format::Tsv => writeln!(out, "{line}")?,
            Format::Jsonl => {
                let f: Vec<&str> = line.splitn(5, '\t').collect();
                let obj = json!({ "id": f[0], "kind": f[1], "letters": f[2], "site": f[3], "summary": f.get(4).copied().unwrap_or("") });
                writeln!(out, "{obj}")?;
            }
        }
    }
    Ok(())
}
