//! `ultrametric` command-line tool.
//!
//! Every command reads JSON from `--in` (or stdin) and writes JSON to `--out`
//! (or stdout). Exit status: 0 on success, 1 on a domain error, 2 on I/O or
//! parse errors. Error documents go to stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use ultrametric::gen::{default_labels, random_space, GenParams};
use ultrametric::io::{BalleanDoc, FamilyDoc, SpaceDoc, TreeDoc};
use ultrametric::{
    add_leaf_transform, ballean_space, build_tree, canonical_form, check_tree, hausdorff, is_isometric,
    iterate_ballean, reconstruct, validate, validate_family, Dist, Error, RootedTree, SetFamily, Space,
};

#[derive(Parser)]
#[command(name = "ultrametric", version, about = "Finite ultrametric spaces: trees, balleans, isometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric and strong triangle axioms
    Validate(Input),
    /// Build the representing tree of a space
    Tree(TreeArgs),
    /// Distance between two named points
    Dist(DistArgs),
    /// Ballean of a space with the Hausdorff distance matrix
    Ballean(Input),
    /// Hausdorff distance between two subsets
    Hausdorff(HausdorffArgs),
    /// n-th iterated ballean space
    Iterate(IterateArgs),
    /// Tree of the ballean predicted by adding a leaf under each internal vertex
    Transform(TreeArgs),
    /// Check the level-n conditions on a labeled tree
    CheckTree(CheckTreeArgs),
    /// Decide whether a set family is the ballean of some ultrametric
    ValidateFamily(Input),
    /// Ultrametric whose ballean is the given family
    Reconstruct(Input),
    /// Decide whether two spaces are isometric
    Isometric(IsometricArgs),
    /// Canonical form digest of a space's tree or of a tree document
    Canon(CanonArgs),
    /// Random ultrametric space
    Gen(GenArgs),
}

#[derive(Args)]
struct Input {
    /// Input JSON file; stdin when omitted
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct TreeArgs {
    #[command(flatten)]
    io: Input,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct DistArgs {
    #[command(flatten)]
    io: Input,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
}

#[derive(Args)]
struct HausdorffArgs {
    #[command(flatten)]
    io: Input,
    /// First subset as a JSON array of point names
    #[arg(long)]
    a: String,
    /// Second subset as a JSON array of point names
    #[arg(long)]
    b: String,
}

#[derive(Args)]
struct IterateArgs {
    #[command(flatten)]
    io: Input,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Print only the point count and diameter
    #[arg(long)]
    stats: bool,
}

#[derive(Args)]
struct CheckTreeArgs {
    #[command(flatten)]
    io: Input,
    #[arg(long, default_value_t = 0)]
    n: usize,
}

#[derive(Args)]
struct IsometricArgs {
    #[command(flatten)]
    io: Input,
    /// Second space
    #[arg(long, value_name = "PATH")]
    other: PathBuf,
}

#[derive(Args)]
struct CanonArgs {
    #[command(flatten)]
    io: Input,
    /// Include vertex labels in the form
    #[arg(long)]
    labeled: bool,
    /// Also print the full encoding
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    leaves: usize,
    /// Comma-separated distance values
    #[arg(long, value_delimiter = ',')]
    labels: Vec<Dist>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Failure of a command, carrying its exit status.
enum Failure {
    Domain { code: String, message: String, witness: Option<Value> },
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Structure(_) => Failure::Input(e.to_string()),
            other => Failure::Domain { code: other.code().into(), message: other.to_string(), witness: None },
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn io_error(path: &Path, e: io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read_text(path: Option<&Path>) -> Outcome<String> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| io_error(p, e)),
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Outcome<T> {
    serde_json::from_str(text).map_err(|e| Failure::Input(format!("invalid JSON: {e}")))
}

fn load<T: serde::de::DeserializeOwned>(path: Option<&Path>) -> Outcome<T> {
    parse(&read_text(path)?)
}

fn load_space(path: Option<&Path>) -> Outcome<Space> {
    Ok(Space::try_from(load::<SpaceDoc>(path)?)?)
}

fn load_family(path: Option<&Path>) -> Outcome<SetFamily> {
    Ok(SetFamily::try_from(load::<FamilyDoc>(path)?)?)
}

fn emit_text(out: Option<&Path>, text: &str) -> Outcome<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

fn emit<T: Serialize>(out: Option<&Path>, doc: &T) -> Outcome<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    emit_text(out, &text)
}

fn emit_tree(args: &TreeArgs, tree: &RootedTree) -> Outcome<()> {
    match args.format {
        Format::Json => emit(args.io.out.as_deref(), &TreeDoc::from(tree)),
        Format::Dot => emit_text(args.io.out.as_deref(), &ultrametric::io::to_dot(tree)),
    }
}

fn names(f: &SetFamily, member: &[usize]) -> Value {
    json!(f.names_of(member))
}

/// Names the failing triple when a command needs an ultrametric input.
fn require_ultrametric(space: &Space) -> Outcome<()> {
    let report = space.report();
    match report.witness {
        Some((x, y, z)) if !report.is_ultrametric => Err(Failure::Domain {
            code: "not-ultrametric".into(),
            message: "the input space is not ultrametric".into(),
            witness: Some(json!([space.name(x), space.name(y), space.name(z)])),
        }),
        _ => Ok(()),
    }
}

fn load_ultrametric(path: Option<&Path>) -> Outcome<Space> {
    let space = load_space(path)?;
    require_ultrametric(&space)?;
    Ok(space)
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Validate(io) => {
            let space = load_space(io.input.as_deref())?;
            let report = validate(&space);
            emit(io.out.as_deref(), &report)?;
            if report.is_ultrametric {
                return Ok(());
            }
            let witness = report.witness.map(|(x, y, z)| json!([space.name(x), space.name(y), space.name(z)]));
            Err(Failure::Domain {
                code: if report.is_metric { "not-ultrametric" } else { "not-metric" }.into(),
                message: if report.is_metric {
                    "the strong triangle inequality fails"
                } else {
                    "the triangle inequality fails"
                }
                .into(),
                witness,
            })
        }
        Command::Tree(args) => {
            let space = load_ultrametric(args.io.input.as_deref())?;
            emit_tree(&args, &build_tree(&space)?.to_rooted())
        }
        Command::Dist(args) => {
            let space = load_space(args.io.input.as_deref())?;
            let (x, y) = (space.index_of(&args.x)?, space.index_of(&args.y)?);
            emit(args.io.out.as_deref(), &json!({"x": args.x, "y": args.y, "dist": space.dist(x, y)}))
        }
        Command::Ballean(io) => {
            let space = load_ultrametric(io.input.as_deref())?;
            emit(io.out.as_deref(), &BalleanDoc::from(&ballean_space(&space)?))
        }
        Command::Hausdorff(args) => {
            let space = load_space(args.io.input.as_deref())?;
            let a = space.indices_of(&parse::<Vec<String>>(&args.a)?)?;
            let b = space.indices_of(&parse::<Vec<String>>(&args.b)?)?;
            emit(args.io.out.as_deref(), &json!({"hausdorff": hausdorff(&space, &a, &b)?}))
        }
        Command::Iterate(args) => {
            let space = load_ultrametric(args.io.input.as_deref())?;
            let level = iterate_ballean(&space, args.n)?;
            if args.stats {
                emit(args.io.out.as_deref(), &json!({"points": level.len(), "diam": level.diameter()}))
            } else {
                emit(args.io.out.as_deref(), &SpaceDoc::from(&level))
            }
        }
        Command::Transform(args) => {
            let space = load_ultrametric(args.io.input.as_deref())?;
            emit_tree(&args, &add_leaf_transform(&build_tree(&space)?))
        }
        Command::CheckTree(args) => {
            let doc: TreeDoc = load(args.io.input.as_deref())?;
            let tree = RootedTree::try_from(&doc)?;
            let report = check_tree(&tree, args.n);
            emit(args.io.out.as_deref(), &report)?;
            if report.passed {
                return Ok(());
            }
            Err(Failure::Domain {
                code: "tree-conditions".into(),
                message: format!("{} violation(s) of the level-{} conditions", report.violations.len(), args.n),
                witness: Some(serde_json::to_value(&report.violations).expect("violations serialize")),
            })
        }
        Command::ValidateFamily(io) => {
            let family = load_family(io.input.as_deref())?;
            let report = validate_family(&family);
            emit(io.out.as_deref(), &report)?;
            if report.is_ballean {
                return Ok(());
            }
            let (message, witness) = if let Some((a, b)) = &report.crossing_pair {
                ("two members cross", json!([names(&family, a), names(&family, b)]))
            } else if report.missing_universe {
                ("the whole set is not a member", json!(family.universe()))
            } else {
                let missing: Vec<&str> =
                    report.missing_singletons.iter().map(|&i| family.universe()[i].as_str()).collect();
                ("singletons are missing", json!(missing))
            };
            Err(Failure::Domain { code: "invalid-family".into(), message: message.into(), witness: Some(witness) })
        }
        Command::Reconstruct(io) => {
            let family = load_family(io.input.as_deref())?;
            emit(io.out.as_deref(), &SpaceDoc::from(&reconstruct(&family)?))
        }
        Command::Isometric(args) => {
            let a = load_ultrametric(args.io.input.as_deref())?;
            let b = load_ultrametric(Some(&args.other))?;
            emit(args.io.out.as_deref(), &json!({"isometric": is_isometric(&a, &b)?}))
        }
        Command::Canon(args) => {
            let value: Value = parse(&read_text(args.io.input.as_deref())?)?;
            let tree = if value.get("points").is_some() {
                let doc: SpaceDoc = serde_json::from_value(value).map_err(|e| Failure::Input(e.to_string()))?;
                let space = Space::try_from(doc)?;
                require_ultrametric(&space)?;
                build_tree(&space)?.to_rooted()
            } else {
                let doc: TreeDoc = serde_json::from_value(value).map_err(|e| Failure::Input(e.to_string()))?;
                RootedTree::try_from(&doc)?
            };
            let form = canonical_form(&tree, args.labeled)?;
            let mut doc = json!({"digest": form.digest(), "labeled": args.labeled});
            if args.full {
                doc["encoding"] = json!(form.encoding());
            }
            emit(args.io.out.as_deref(), &doc)
        }
        Command::Gen(args) => {
            let labels = if args.labels.is_empty() { default_labels() } else { args.labels };
            let space = random_space(&GenParams::new(args.leaves, args.seed).with_labels(labels))?;
            emit(args.out.as_deref(), &SpaceDoc::from(&space))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain { code, message, witness }) => {
            let mut doc = json!({"code": code, "message": message});
            if let Some(w) = witness {
                doc["witness"] = w;
            }
            eprintln!("{}", serde_json::to_string_pretty(&doc).expect("error documents serialize"));
            ExitCode::from(1)
        }
        Err(Failure::Input(message)) => {
            let doc = json!({"code": "input-error", "message": message});
            eprintln!("{}", serde_json::to_string_pretty(&doc).expect("error documents serialize"));
            ExitCode::from(2)
        }
    }
}
