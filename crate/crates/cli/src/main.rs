//! Command-line surface over the enumeration library: generate catalogs,
//! canonicalize and decode individual graphs, cross-check the encoding
//! against the brute-force oracle, and export DOT drawings.
//!
//! Exit codes: 0 on success, 1 when a check fails (verification, or input
//! that names a structurally invalid graph), 2 on usage and input-format
//! errors.

use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use stratifold::canonical::{decode, decode_str, encode, CanonicalString};
use stratifold::catalog::{
    make_tag, read_catalog, stats_table, stats_table_from_store, to_dot_named, write_catalog,
    CatalogRecord,
};
use stratifold::generator::enumerate_with;
use stratifold::graph::{census, is_isomorphic_bruteforce, Color, TrivalentGraph};
use stratifold::Mode;

#[derive(Parser)]
#[command(
    name = "stratifold",
    version,
    about = "Enumerate trivalent 2-stratifold graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Naive,
    Symmetry,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::Naive => Mode::Naive,
            ModeArg::Symmetry => Mode::SymmetryReduced,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecodeFormat {
    Dot,
    Jsonl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all graphs up to a white-vertex bound; write the catalog
    /// and a stats CSV next to it, and print the stats table.
    Enumerate {
        /// Largest white-vertex count to enumerate (at least 2).
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        max_white: u64,
        /// Attachment strategy; both find the same graphs.
        #[arg(long, value_enum, default_value_t = ModeArg::Naive)]
        mode: ModeArg,
        /// Catalog path; the stats file takes the same name with a .csv extension.
        #[arg(long, default_value = "catalog.jsonl")]
        out: PathBuf,
    },
    /// Print the canonical string of one graph, given as a catalog record,
    /// an edge list, or any well-formed string.
    #[command(group(ArgGroup::new("input").required(true).args(["in_file", "string"])))]
    Canon {
        /// File holding either one catalog record (a JSON line) or an edge
        /// list with one "u v w color_u color_v" line per edge.
        #[arg(long = "in", value_name = "FILE")]
        in_file: Option<PathBuf>,
        /// A well-formed string; its graph is re-encoded canonically.
        #[arg(long)]
        string: Option<String>,
    },
    /// Rebuild the graph a string names and emit it.
    Decode {
        #[arg(long)]
        string: String,
        #[arg(long, value_enum, default_value_t = DecodeFormat::Dot)]
        format: DecodeFormat,
    },
    /// Cross-check string equality against brute-force isomorphism and
    /// decode round-trips over every graph up to a white-vertex bound.
    Verify {
        /// Bound on white vertices (2 to 8; larger graphs exceed the
        /// brute-force oracle's size limit).
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=8))]
        max_white: u64,
    },
    /// Write DOT drawings for every graph in a catalog.
    Export {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Directory for the drawings, one g{n}_{id}.dot per graph.
        #[arg(long)]
        out: PathBuf,
        /// Write a single catalog.dot holding every graph instead.
        #[arg(long)]
        concat: bool,
    },
    /// Recompute the stats table from a catalog and print it.
    Stats {
        #[arg(long)]
        catalog: PathBuf,
    },
}

/// Failures past argument parsing: `Input` covers unreadable or ill-formed
/// input (exit 2), `Check` covers inputs or runs that fail a semantic check
/// (exit 1).
enum CliError {
    Input(String),
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Check(_) => ExitCode::from(1),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(message) | CliError::Check(message) => f.write_str(message),
        }
    }
}

fn input_err(message: impl Into<String>) -> CliError {
    CliError::Input(message.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Enumerate {
            max_white,
            mode,
            out,
        } => run_enumerate(max_white as usize, mode.into(), &out),
        Command::Canon { in_file, string } => run_canon(in_file.as_deref(), string.as_deref()),
        Command::Decode { string, format } => run_decode(&string, format),
        Command::Verify { max_white } => run_verify(max_white as usize),
        Command::Export {
            catalog,
            format: ExportFormat::Dot,
            out,
            concat,
        } => run_export(&catalog, &out, concat),
        Command::Stats { catalog } => run_stats(&catalog),
    }
}

fn run_enumerate(max_white: usize, mode: Mode, out: &Path) -> Result<(), CliError> {
    let result = enumerate_with(max_white, mode, |n, distinct, created| {
        eprintln!("n={n} distinct={distinct} created={created}");
    })
    .map_err(|e| input_err(e.to_string()))?;

    let file = fs::File::create(out)
        .map_err(|e| input_err(format!("cannot write {}: {e}", out.display())))?;
    write_catalog(&result.store, file)
        .map_err(|e| input_err(format!("cannot write {}: {e}", out.display())))?;

    let table = stats_table(&result);
    let stats_path = out.with_extension("csv");
    fs::write(&stats_path, &table)
        .map_err(|e| input_err(format!("cannot write {}: {e}", stats_path.display())))?;
    print!("{table}");
    Ok(())
}

fn canonicalize(value: &str) -> Result<CanonicalString, CliError> {
    let graph = decode_str(value).map_err(|e| match e {
        stratifold::canonical::DecodeError::Syntax(err) => {
            input_err(format!("ill-formed string: {err}"))
        }
        other => CliError::Check(format!("string names an invalid graph: {other}")),
    })?;
    Ok(encode(&graph))
}

fn parse_color(token: &str, line_no: usize) -> Result<Color, CliError> {
    match token {
        "W" | "w" => Ok(Color::White),
        "B" | "b" => Ok(Color::Black),
        other => Err(input_err(format!(
            "line {line_no}: color must be W or B, got {other}"
        ))),
    }
}

/// Builds a graph from "u v w color_u color_v" lines. Vertex ids must be
/// 0-based and dense; colors must agree across mentions.
fn parse_edge_list(text: &str) -> Result<TrivalentGraph, CliError> {
    let mut edges: Vec<(usize, usize, u8)> = Vec::new();
    let mut colors: Vec<Option<Color>> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w, cu, cv] = tokens.as_slice() else {
            return Err(input_err(format!(
                "line {line_no}: expected \"u v w color_u color_v\", got {line:?}"
            )));
        };
        let u: usize = u
            .parse()
            .map_err(|_| input_err(format!("line {line_no}: bad vertex id {u:?}")))?;
        let v: usize = v
            .parse()
            .map_err(|_| input_err(format!("line {line_no}: bad vertex id {v:?}")))?;
        let w: u8 = w
            .parse()
            .map_err(|_| input_err(format!("line {line_no}: bad weight {w:?}")))?;
        let cu = parse_color(cu, line_no)?;
        let cv = parse_color(cv, line_no)?;
        if colors.len() <= u.max(v) {
            colors.resize(u.max(v) + 1, None);
        }
        for (id, color) in [(u, cu), (v, cv)] {
            match colors[id] {
                None => colors[id] = Some(color),
                Some(existing) if existing == color => {}
                Some(_) => {
                    return Err(input_err(format!(
                        "line {line_no}: vertex {id} changes color"
                    )));
                }
            }
        }
        edges.push((u, v, w));
    }
    let colors: Vec<Color> = colors
        .into_iter()
        .enumerate()
        .map(|(id, c)| c.ok_or_else(|| input_err(format!("vertex {id} never appears"))))
        .collect::<Result<_, _>>()?;
    if colors.is_empty() {
        return Err(input_err("the edge list is empty"));
    }
    TrivalentGraph::from_parts(colors, &edges).map_err(|e| input_err(e.to_string()))
}

fn run_canon(in_file: Option<&Path>, string: Option<&str>) -> Result<(), CliError> {
    let canon = match (in_file, string) {
        (None, Some(s)) => canonicalize(s)?,
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
            let body = text.trim();
            if body.starts_with('{') {
                let record = CatalogRecord::from_line(body)
                    .map_err(|e| input_err(format!("not a catalog record: {e}")))?;
                canonicalize(&record.canon)?
            } else {
                let graph = parse_edge_list(body)?;
                let violations = stratifold::validate(&graph);
                if !violations.is_empty() {
                    let listed: Vec<String> = violations.iter().map(ToString::to_string).collect();
                    return Err(CliError::Check(format!(
                        "the edge list is not a valid graph: {}",
                        listed.join("; ")
                    )));
                }
                encode(&graph)
            }
        }
        _ => unreachable!("clap enforces exactly one input"),
    };
    println!("{canon}");
    Ok(())
}

fn run_decode(string: &str, format: DecodeFormat) -> Result<(), CliError> {
    let graph = decode_str(string).map_err(|e| match e {
        stratifold::canonical::DecodeError::Syntax(err) => {
            input_err(format!("ill-formed string: {err}"))
        }
        other => CliError::Check(format!("string names an invalid graph: {other}")),
    })?;
    match format {
        DecodeFormat::Dot => print!("{}", to_dot_named(&graph, "g")),
        DecodeFormat::Jsonl => {
            let canon = encode(&graph);
            let record = CatalogRecord {
                n: census(&graph).white,
                id: 0,
                canon: canon.as_str().to_owned(),
                tag: make_tag(&graph, 0).as_array(),
            };
            println!("{}", record.to_line());
        }
    }
    Ok(())
}

fn run_verify(max_white: usize) -> Result<(), CliError> {
    let result = enumerate_with(max_white, Mode::Naive, |n, distinct, created| {
        eprintln!("n={n} distinct={distinct} created={created}");
    })
    .map_err(|e| input_err(e.to_string()))?;
    let reduced = stratifold::enumerate(max_white, Mode::SymmetryReduced)
        .map_err(|e| input_err(e.to_string()))?;
    if reduced.distinct_counts != result.distinct_counts {
        return Err(CliError::Check(
            "the two attachment strategies disagree on distinct counts".into(),
        ));
    }

    let mut pairs = 0usize;
    for n in 2..=max_white {
        let group = result.store.group(n);
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                let isomorphic = is_isomorphic_bruteforce(&a.graph, &b.graph)
                    .map_err(|e| CliError::Check(e.to_string()))?;
                if isomorphic {
                    return Err(CliError::Check(format!(
                        "distinct strings {} and {} name isomorphic graphs",
                        a.canon, b.canon
                    )));
                }
                pairs += 1;
            }
        }
        for record in group {
            let rebuilt = decode(&record.canon).map_err(|e| CliError::Check(e.to_string()))?;
            let same = is_isomorphic_bruteforce(&rebuilt, &record.graph)
                .map_err(|e| CliError::Check(e.to_string()))?;
            if !same {
                return Err(CliError::Check(format!(
                    "decoding {} does not restore its graph",
                    record.canon
                )));
            }
        }
        eprintln!("n={n} verified");
    }
    println!(
        "verified {} graphs, {pairs} in-group pairs, all round trips: OK",
        result.store.len()
    );
    Ok(())
}

fn run_export(catalog: &Path, out: &Path, concat: bool) -> Result<(), CliError> {
    let file = fs::File::open(catalog)
        .map_err(|e| input_err(format!("cannot read {}: {e}", catalog.display())))?;
    let store = read_catalog(BufReader::new(file)).map_err(|e| input_err(e.to_string()))?;
    fs::create_dir_all(out)
        .map_err(|e| input_err(format!("cannot create {}: {e}", out.display())))?;
    if concat {
        let mut bundle = String::new();
        for record in store.records() {
            let n = census(&record.graph).white;
            bundle.push_str(&to_dot_named(
                &record.graph,
                &format!("g{n}_{}", record.ordinal),
            ));
        }
        let path = out.join("catalog.dot");
        fs::write(&path, bundle)
            .map_err(|e| input_err(format!("cannot write {}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    } else {
        let mut written = 0usize;
        for record in store.records() {
            let n = census(&record.graph).white;
            let name = format!("g{n}_{}", record.ordinal);
            let path = out.join(format!("{name}.dot"));
            fs::write(&path, to_dot_named(&record.graph, &name))
                .map_err(|e| input_err(format!("cannot write {}: {e}", path.display())))?;
            written += 1;
        }
        eprintln!("wrote {written} files to {}", out.display());
    }
    Ok(())
}

fn run_stats(catalog: &Path) -> Result<(), CliError> {
    let file = fs::File::open(catalog)
        .map_err(|e| input_err(format!("cannot read {}: {e}", catalog.display())))?;
    let store = read_catalog(BufReader::new(file)).map_err(|e| input_err(e.to_string()))?;
    print!("{}", stats_table_from_store(&store));
    Ok(())
}
