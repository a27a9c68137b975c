//! The `cs` command line.
//!
//! Every command prints one JSON value on standard output; diagnostics go to
//! standard error. Exit codes: 0 on success, 1 on an internal failure, 2 on
//! bad input (unreadable or invalid files, unknown names, bad arguments).

use std::ffi::OsString;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::concepts::Concept;
use crate::error::{Error, Result};
use crate::geometry::DomainSet;
use crate::measure::concept_size;
use crate::oracle::{mc_measure, McConfig};
use crate::relations;
use crate::space_io::{export_plot, load_space, save_space, ConceptRecord, Space};

#[derive(Debug, Parser)]
#[command(name = "cs", version, about = "Fuzzy concepts in conceptual spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a space file and summarize its concepts.
    Validate { space: PathBuf },
    /// Build a new concept from existing ones.
    Op {
        #[command(subcommand)]
        op: Op,
    },
    /// Evaluate a relation or a measurement.
    Rel {
        #[command(subcommand)]
        rel: Rel,
    },
    /// Export an SVG view of concepts on two dimensions.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct Save {
    /// Store the result in the space under this name.
    #[arg(long, requires = "out")]
    save: Option<String>,
    /// Where to write the updated space file.
    #[arg(long, requires = "save")]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Op {
    Intersect {
        space: PathBuf,
        a: String,
        b: String,
        #[command(flatten)]
        save: Save,
    },
    Unify {
        space: PathBuf,
        a: String,
        b: String,
        #[command(flatten)]
        save: Save,
    },
    Project {
        space: PathBuf,
        concept: String,
        #[arg(long, value_delimiter = ',', required = true)]
        domains: Vec<String>,
        #[command(flatten)]
        save: Save,
    },
    /// Split a concept at a value of one dimension. Saving stores
    /// NAME_lower and NAME_upper.
    Cut {
        space: PathBuf,
        concept: String,
        /// Dimension index or name.
        #[arg(long)]
        dim: String,
        #[arg(long, allow_negative_numbers = true)]
        value: f64,
        #[command(flatten)]
        save: Save,
    },
}

#[derive(Debug, Subcommand)]
enum Rel {
    Subsethood { space: PathBuf, a: String, b: String },
    Implies { space: PathBuf, a: String, b: String },
    Similarity { space: PathBuf, a: String, b: String },
    Between { space: PathBuf, a: String, b: String, c: String },
    Size {
        space: PathBuf,
        concept: String,
        /// Also estimate the size by Monte-Carlo sampling.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Membership {
        space: PathBuf,
        concept: String,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        point: Vec<f64>,
    },
}

#[derive(Debug, Args)]
struct PlotArgs {
    space: PathBuf,
    /// Two dimension names, e.g. hue,sweet.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
    dims: Vec<String>,
    /// α level of an outline; repeatable.
    #[arg(long = "alpha", default_values_t = [0.5])]
    alphas: Vec<f64>,
    /// Concepts to draw; all when omitted.
    #[arg(long, value_delimiter = ',')]
    concepts: Vec<String>,
    #[arg(long)]
    out: PathBuf,
}

/// Runs the command line on `args` (including the program name) and
/// returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| execute(cli.command))) {
        Ok(Ok(value)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            match writeln!(stdout, "{text}") {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    1
                }
            }
        }
        Ok(Err(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
        Err(_) => {
            let _ = writeln!(stderr, "error: internal failure");
            1
        }
    }
}

fn execute(command: Command) -> Result<Value> {
    match command {
        Command::Validate { space } => validate(&load_space(space)?),
        Command::Op { op } => operate(op),
        Command::Rel { rel } => relate(rel),
        Command::Plot(args) => plot(args),
    }
}

fn validate(space: &Space) -> Result<Value> {
    let concepts: serde_json::Map<String, Value> = space
        .concepts()
        .iter()
        .map(|(name, c)| {
            let summary = json!({
                "domains": c.domains(),
                "cuboids": c.core().cuboids().len(),
                "mu0": c.mu0(),
                "c": c.c(),
            });
            (name.clone(), summary)
        })
        .collect();
    Ok(json!({
        "dimensions": space.structure().dimension_names(),
        "domains": space.structure().domains(),
        "concepts": concepts,
    }))
}

fn record(concept: &Concept) -> Value {
    serde_json::to_value(ConceptRecord::from_concept(concept)).expect("records serialize")
}

fn store(mut space: Space, save: Save, results: Vec<(String, Concept)>) -> Result<()> {
    if let (Some(_), Some(out)) = (save.save, save.out) {
        for (name, concept) in results {
            space.insert(name, concept)?;
        }
        save_space(&space, out)?;
    }
    Ok(())
}

fn binary(space: &Space, a: &str, b: &str) -> Result<(Concept, Concept)> {
    Ok((space.concept(a)?.clone(), space.concept(b)?.clone()))
}

fn operate(op: Op) -> Result<Value> {
    match op {
        Op::Intersect { space, a, b, save } => {
            let space = load_space(space)?;
            let (a, b) = binary(&space, &a, &b)?;
            single(space, save, a.intersect(&b)?)
        }
        Op::Unify { space, a, b, save } => {
            let space = load_space(space)?;
            let (a, b) = binary(&space, &a, &b)?;
            single(space, save, a.unify(&b)?)
        }
        Op::Project {
            space,
            concept,
            domains,
            save,
        } => {
            let space = load_space(space)?;
            let target: DomainSet = domains.into_iter().collect();
            let result = space.concept(&concept)?.project(&target)?;
            single(space, save, result)
        }
        Op::Cut {
            space,
            concept,
            dim,
            value,
            save,
        } => {
            let space = load_space(space)?;
            let d = match dim.parse::<usize>() {
                Ok(d) => d,
                Err(_) => space
                    .structure()
                    .dimension_index(&dim)
                    .ok_or(Error::UnknownDimension(dim))?,
            };
            let (upper, lower) = space.concept(&concept)?.cut(d, value)?;
            let output = json!({
                "lower": lower.as_ref().map(record),
                "upper": upper.as_ref().map(record),
            });
            let base = save.save.clone().unwrap_or_default();
            let mut results = Vec::new();
            if let Some(c) = lower {
                results.push((format!("{base}_lower"), c));
            }
            if let Some(c) = upper {
                results.push((format!("{base}_upper"), c));
            }
            store(space, save, results)?;
            Ok(output)
        }
    }
}

fn single(space: Space, save: Save, result: Concept) -> Result<Value> {
    let output = record(&result);
    let name = save.save.clone().unwrap_or_default();
    store(space, save, vec![(name, result)])?;
    Ok(output)
}

fn relate(rel: Rel) -> Result<Value> {
    match rel {
        Rel::Subsethood { space, a, b } => {
            let space = load_space(space)?;
            Ok(json!(relations::subsethood(space.concept(&a)?, space.concept(&b)?)?))
        }
        Rel::Implies { space, a, b } => {
            let space = load_space(space)?;
            Ok(json!(relations::implication(space.concept(&a)?, space.concept(&b)?)?))
        }
        Rel::Similarity { space, a, b } => {
            let space = load_space(space)?;
            Ok(json!(relations::concept_similarity(space.concept(&a)?, space.concept(&b)?)?))
        }
        Rel::Between { space, a, b, c } => {
            let space = load_space(space)?;
            let between = relations::concept_between(
                space.concept(&a)?,
                space.concept(&b)?,
                space.concept(&c)?,
            )?;
            Ok(json!(between))
        }
        Rel::Size {
            space,
            concept,
            verify,
            samples,
            seed,
        } => {
            let space = load_space(space)?;
            let concept = space.concept(&concept)?;
            let size = concept_size(concept)?;
            if !verify {
                return Ok(json!(size));
            }
            let est = mc_measure(concept, &McConfig::new(samples, seed))?;
            Ok(json!({
                "closed_form": size,
                "estimate": est.estimate,
                "stderr": est.stderr,
                "relative_deviation": (est.estimate - size) / size,
                "samples": est.samples,
                "seed": est.seed,
                "algorithm": est.algorithm,
            }))
        }
        Rel::Membership {
            space,
            concept,
            point,
        } => {
            let space = load_space(space)?;
            space.structure().check_point(&point)?;
            Ok(json!(space.concept(&concept)?.membership(&point)))
        }
    }
}

fn plot(args: PlotArgs) -> Result<Value> {
    let space = load_space(&args.space)?;
    let [x, y] = <[String; 2]>::try_from(args.dims).map_err(|dims| {
        Error::InvalidParameter(format!("--dims needs two dimension names, got {}", dims.len()))
    })?;
    let names: Vec<String> = if args.concepts.is_empty() {
        space.concepts().keys().cloned().collect()
    } else {
        args.concepts
    };
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    export_plot(&space, &names, (&x, &y), &args.alphas, &args.out)?;
    Ok(json!({
        "out": args.out,
        "concepts": names,
        "dims": [x, y],
        "alphas": args.alphas,
    }))
}
