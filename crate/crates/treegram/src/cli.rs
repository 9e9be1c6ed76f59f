//! Command-line front end: encode and decode tree files, sample from the
//! source models, enumerate small tree universes, run redundancy benchmarks,
//! and print per-tree statistics.
//!
//! Exit codes: 0 on success, 1 for usage problems (bad flags, bad model
//! specs), 2 for data problems (unparsable input, codec failures, sampler
//! dead ends). Diagnostics go to stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{entropy_length_bound, redundancy_monte_carlo, write_bench_csv, BenchModel};
use crate::bits::BitString;
use crate::codec::{codeword_length, decode, encode};
use crate::grammar::{distinct_subtree_count, representation_ratio};
use crate::sources::{mix, DepthCentricModel, LeafCentricModel};
use crate::tree::{enumerate_trees_with_cap, BinaryTree, DEFAULT_ENUMERATION_CAP};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_DATA: i32 = 2;

#[derive(Parser)]
#[command(
    name = "treegram",
    version,
    about = "Lossless grammar-based compression for full binary trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode trees, one per input line, into prefix-free codewords.
    Encode(EncodeArgs),
    /// Decode codewords back into trees.
    Decode(DecodeArgs),
    /// Sample trees from a source model.
    Gen(GenArgs),
    /// List every tree with a given number of leaves.
    Enumerate(EnumerateArgs),
    /// Estimate per-leaf redundancy by sampling; writes a CSV table.
    Bench(BenchArgs),
    /// Print size, depth, grammar, and length statistics per tree.
    Stats(StatsArgs),
}

#[derive(Args)]
struct EncodeArgs {
    /// Input tree file, one tree per line; stdin when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write length-prefixed binary records instead of bit-text lines.
    #[arg(long)]
    packed: bool,
}

#[derive(Args)]
struct DecodeArgs {
    /// Input codeword file; stdin when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output tree file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read length-prefixed binary records instead of bit-text lines.
    #[arg(long)]
    packed: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Model spec: "bisection", "uniform-split,a=0.25", "depth-gap,m=2",
    /// or "table,file=PATH[,mode=leaf|depth]".
    #[arg(long)]
    model: String,
    /// Target leaf count; selects leaf-centric sampling.
    #[arg(long)]
    n: Option<u64>,
    /// Target depth; selects depth-centric sampling.
    #[arg(long)]
    depth: Option<u64>,
    /// How many trees to sample.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output tree file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Leaf count of the listed trees.
    #[arg(long)]
    n: u64,
    /// Refuse leaf counts above this; the universe grows exponentially.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Output tree file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Model spec; leaf-centric unless it is "depth-gap,..." or carries
    /// "mode=depth".
    #[arg(long)]
    model: String,
    /// Comma-separated sizes: leaf counts for leaf-centric models, depths
    /// for depth-centric ones.
    #[arg(long)]
    sizes: String,
    /// Trees sampled per size.
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    /// Input tree file, one tree per line; stdin when omitted.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Optional model spec; adds the self-information column.
    #[arg(long)]
    model: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn data(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_DATA,
        message: message.into(),
    }
}

/// Parse argv and dispatch; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version render through Err but are not failures.
            if e.use_stderr() {
                let _ = write!(io::stderr(), "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(io::stdout(), "{e}");
            return EXIT_OK;
        }
    };
    let result = match cli.command {
        Command::Encode(args) => cmd_encode(&args),
        Command::Decode(args) => cmd_decode(&args),
        Command::Gen(args) => cmd_gen(&args),
        Command::Enumerate(args) => cmd_enumerate(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Stats(args) => cmd_stats(&args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) => fs::read(p).map_err(|e| data(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| data(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn write_output(path: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, bytes).map_err(|e| data(format!("cannot write {}: {e}", p.display())))
        }
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| data(format!("cannot write stdout: {e}"))),
    }
}

fn text_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    String::from_utf8(read_input(path)?).map_err(|_| data("input is not valid text"))
}

/// Trees one per line; blank lines are skipped.
fn parse_trees(text: &str) -> Result<Vec<BinaryTree>, CliError> {
    let mut trees = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tree = BinaryTree::parse(line).map_err(|e| data(format!("line {}: {e}", idx + 1)))?;
        trees.push(tree);
    }
    Ok(trees)
}

fn cmd_encode(args: &EncodeArgs) -> Result<(), CliError> {
    let trees = parse_trees(&text_input(&args.input)?)?;
    let mut out = Vec::new();
    for (idx, t) in trees.iter().enumerate() {
        let bits = encode(t).map_err(|e| data(format!("tree {}: {e}", idx + 1)))?;
        if args.packed {
            out.extend_from_slice(&bits.to_packed_record());
        } else {
            out.extend_from_slice(bits.to_text().as_bytes());
            out.push(b'\n');
        }
    }
    write_output(&args.out, &out)
}

fn cmd_decode(args: &DecodeArgs) -> Result<(), CliError> {
    let mut out = String::new();
    if args.packed {
        let raw = read_input(&args.input)?;
        let mut rest = raw.as_slice();
        let mut record = 0usize;
        while !rest.is_empty() {
            record += 1;
            let (bits, used) = BitString::from_packed_record(rest)
                .map_err(|e| data(format!("record {record}: {e}")))?;
            let tree = decode_exact(&bits).map_err(|e| data(format!("record {record}: {e}")))?;
            out.push_str(&tree.to_text());
            out.push('\n');
            rest = &rest[used..];
        }
    } else {
        let text = text_input(&args.input)?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bits =
                BitString::from_text(line).map_err(|e| data(format!("line {}: {e}", idx + 1)))?;
            let tree = decode_exact(&bits).map_err(|e| data(format!("line {}: {e}", idx + 1)))?;
            out.push_str(&tree.to_text());
            out.push('\n');
        }
    }
    write_output(&args.out, out.as_bytes())
}

/// Decode one framed codeword; trailing bits in the frame are corruption.
fn decode_exact(bits: &BitString) -> Result<BinaryTree, String> {
    let (tree, consumed) = decode(bits).map_err(|e| e.to_string())?;
    if consumed != bits.len() {
        return Err(format!(
            "codeword uses {consumed} of {} bits; trailing bits are not allowed",
            bits.len()
        ));
    }
    Ok(tree)
}

fn gen_seed(seed: u64, index: u64) -> u64 {
    mix(mix(seed) ^ index)
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let mut out = String::new();
    match (args.n, args.depth) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(usage("gen needs exactly one of --n or --depth"));
        }
        (Some(n), None) => {
            let model = LeafCentricModel::from_spec(&args.model)
                .map_err(|e| usage(format!("bad model spec: {e}")))?;
            for index in 0..args.count {
                let t = model
                    .sample(n, gen_seed(args.seed, index))
                    .map_err(|e| data(format!("sample {}: {e}", index + 1)))?;
                out.push_str(&t.to_text());
                out.push('\n');
            }
        }
        (None, Some(d)) => {
            let model = DepthCentricModel::from_spec(&args.model)
                .map_err(|e| usage(format!("bad model spec: {e}")))?;
            for index in 0..args.count {
                let t = model
                    .sample(d, gen_seed(args.seed, index))
                    .map_err(|e| data(format!("sample {}: {e}", index + 1)))?;
                out.push_str(&t.to_text());
                out.push('\n');
            }
        }
    }
    write_output(&args.out, out.as_bytes())
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<(), CliError> {
    if args.n > args.cap {
        return Err(usage(format!("--n {} exceeds --cap {}", args.n, args.cap)));
    }
    let trees = enumerate_trees_with_cap(args.n, args.cap).map_err(|e| usage(e.to_string()))?;
    let mut out = String::new();
    for t in &trees {
        out.push_str(&t.to_text());
        out.push('\n');
    }
    write_output(&args.out, out.as_bytes())
}

fn parse_sizes(text: &str) -> Result<Vec<u64>, CliError> {
    let mut sizes = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let size = part
            .parse::<u64>()
            .map_err(|_| usage(format!("bad size {part:?} in --sizes")))?;
        sizes.push(size);
    }
    if sizes.is_empty() {
        return Err(usage("--sizes needs at least one integer"));
    }
    Ok(sizes)
}

/// A spec names a depth-centric model iff it is a gap model or a table
/// explicitly marked mode=depth; everything else is leaf-centric.
fn parse_bench_model(spec: &str) -> Result<BenchModel, CliError> {
    if spec.starts_with("depth-gap") || spec.contains("mode=depth") {
        DepthCentricModel::from_spec(spec)
            .map(BenchModel::Depth)
            .map_err(|e| usage(format!("bad model spec: {e}")))
    } else {
        LeafCentricModel::from_spec(spec)
            .map(BenchModel::Leaf)
            .map_err(|e| usage(format!("bad model spec: {e}")))
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let sizes = parse_sizes(&args.sizes)?;
    if args.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    let model = parse_bench_model(&args.model)?;
    let records = redundancy_monte_carlo(&model, &sizes, args.samples, args.seed)
        .map_err(|e| data(e.to_string()))?;
    let mut out = Vec::new();
    write_bench_csv(&mut out, &records).map_err(|e| data(e.to_string()))?;
    write_output(&args.out, &out)
}

fn cmd_stats(args: &StatsArgs) -> Result<(), CliError> {
    let trees = parse_trees(&text_input(&args.input)?)?;
    let model = match &args.model {
        Some(spec) => Some(parse_bench_model(spec)?),
        None => None,
    };
    let mut out = String::new();
    for (idx, t) in trees.iter().enumerate() {
        let tag = |e: &dyn std::fmt::Display| data(format!("tree {}: {e}", idx + 1));
        let n_vars = distinct_subtree_count(t).map_err(|e| tag(&e))?;
        let ratio = representation_ratio(t).map_err(|e| tag(&e))?;
        let bits = codeword_length(t).map_err(|e| tag(&e))?;
        let bound = entropy_length_bound(t).map_err(|e| tag(&e))?;
        out.push_str(&format!(
            "|t|={} d={} N={} r={} L={} bound={}",
            t.num_leaves(),
            t.depth(),
            n_vars,
            ratio,
            bits,
            bound
        ));
        if let Some(model) = &model {
            let info = 0.0 - model.log2_prob(t).map_err(|e| tag(&e))?;
            out.push_str(&format!(" info={info}"));
        }
        out.push('\n');
    }
    write_output(&args.out, out.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_parsing() {
        assert_eq!(
            parse_sizes("100,1000,10000").unwrap(),
            vec![100, 1000, 10000]
        );
        assert_eq!(parse_sizes(" 5 , 10 ").unwrap(), vec![5, 10]);
        assert!(parse_sizes("").is_err());
        assert!(parse_sizes(",,").is_err());
        assert!(parse_sizes("5,x").is_err());
        assert_eq!(parse_sizes("7").unwrap(), vec![7]);
    }

    #[test]
    fn bench_model_mode_inference() {
        assert!(matches!(
            parse_bench_model("bisection").unwrap(),
            BenchModel::Leaf(_)
        ));
        assert!(matches!(
            parse_bench_model("uniform-split,a=0.25").unwrap(),
            BenchModel::Leaf(_)
        ));
        assert!(matches!(
            parse_bench_model("depth-gap,m=2").unwrap(),
            BenchModel::Depth(_)
        ));
        assert!(parse_bench_model("uniform-split,a=0.6").is_err());
        assert!(parse_bench_model("nonsense").is_err());
    }

    #[test]
    fn table_mode_inference_uses_mode_key() {
        let mut leaf_file = tempfile::NamedTempFile::new().unwrap();
        writeln!(leaf_file, "2 1 1 1.0").unwrap();
        let path = leaf_file.path().display();
        assert!(matches!(
            parse_bench_model(&format!("table,file={path}")).unwrap(),
            BenchModel::Leaf(_)
        ));
        assert!(matches!(
            parse_bench_model(&format!("table,file={path},mode=leaf")).unwrap(),
            BenchModel::Leaf(_)
        ));
        let mut depth_file = tempfile::NamedTempFile::new().unwrap();
        writeln!(depth_file, "1 0 0 1.0").unwrap();
        let path = depth_file.path().display();
        assert!(matches!(
            parse_bench_model(&format!("table,file={path},mode=depth")).unwrap(),
            BenchModel::Depth(_)
        ));
    }

    #[test]
    fn tree_file_parsing_skips_blank_lines() {
        let trees = parse_trees("(LL)\n\n  \n((LL)L)\n").unwrap();
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[1].to_text(), "((LL)L)");
        let err = parse_trees("(LL)\n(L\n").unwrap_err();
        assert_eq!(err.code, EXIT_DATA);
        assert!(err.message.starts_with("line 2"));
    }

    #[test]
    fn exact_consumption_rejects_trailing_bits() {
        let ok = decode_exact(&BitString::from_text("1").unwrap()).unwrap();
        assert_eq!(ok.to_text(), "(LL)");
        let err = decode_exact(&BitString::from_text("10").unwrap()).unwrap_err();
        assert!(err.contains("1 of 2 bits"));
    }

    #[test]
    fn gen_seed_is_index_sensitive() {
        assert_ne!(gen_seed(0, 0), gen_seed(0, 1));
        assert_ne!(gen_seed(0, 0), gen_seed(1, 0));
        assert_eq!(gen_seed(9, 4), gen_seed(9, 4));
    }

    #[test]
    fn encode_decode_files_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let trees_path = dir.path().join("trees.txt");
        let codes_path = dir.path().join("codes.txt");
        let back_path = dir.path().join("back.txt");
        fs::write(&trees_path, "(LL)\n(((L(LL))(LL))(L(LL)))\n").unwrap();

        cmd_encode(&EncodeArgs {
            input: Some(trees_path.clone()),
            out: Some(codes_path.clone()),
            packed: false,
        })
        .map_err(|e| e.message)
        .unwrap();
        let codes = fs::read_to_string(&codes_path).unwrap();
        assert_eq!(codes, "1\n00011101000010011000001\n");

        cmd_decode(&DecodeArgs {
            input: Some(codes_path),
            out: Some(back_path.clone()),
            packed: false,
        })
        .map_err(|e| e.message)
        .unwrap();
        assert_eq!(
            fs::read_to_string(&back_path).unwrap(),
            fs::read_to_string(&trees_path).unwrap()
        );
    }

    #[test]
    fn packed_files_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let trees_path = dir.path().join("trees.txt");
        let packed_path = dir.path().join("codes.bin");
        let back_path = dir.path().join("back.txt");
        let source = "((LL)(LL))\n((LL)L)\n(L(LL))\n";
        fs::write(&trees_path, source).unwrap();

        cmd_encode(&EncodeArgs {
            input: Some(trees_path),
            out: Some(packed_path.clone()),
            packed: true,
        })
        .map_err(|e| e.message)
        .unwrap();
        // Three records: 8 header bytes plus ceil(bits / 8) payload each.
        let raw = fs::read(&packed_path).unwrap();
        assert_eq!(raw.len(), (8 + 2) + (8 + 1) + (8 + 1));

        cmd_decode(&DecodeArgs {
            input: Some(packed_path),
            out: Some(back_path.clone()),
            packed: true,
        })
        .map_err(|e| e.message)
        .unwrap();
        assert_eq!(fs::read_to_string(&back_path).unwrap(), source);
    }

    #[test]
    fn empty_input_yields_empty_output() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.txt");
        let out = dir.path().join("out.txt");
        fs::write(&empty, "").unwrap();
        cmd_encode(&EncodeArgs {
            input: Some(empty),
            out: Some(out.clone()),
            packed: false,
        })
        .map_err(|e| e.message)
        .unwrap();
        assert_eq!(fs::read(&out).unwrap(), b"");
    }

    #[test]
    fn gen_requires_exactly_one_size_flag() {
        let err = cmd_gen(&GenArgs {
            model: "bisection".into(),
            n: None,
            depth: None,
            count: 1,
            seed: 0,
            out: None,
        })
        .unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        let err = cmd_gen(&GenArgs {
            model: "bisection".into(),
            n: Some(4),
            depth: Some(2),
            count: 1,
            seed: 0,
            out: None,
        })
        .unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
    }

    #[test]
    fn gen_writes_deterministic_trees() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.txt");
        let b = dir.path().join("b.txt");
        for path in [&a, &b] {
            cmd_gen(&GenArgs {
                model: "bisection".into(),
                n: Some(8),
                depth: None,
                count: 3,
                seed: 1,
                out: Some(path.clone()),
            })
            .map_err(|e| e.message)
            .unwrap();
        }
        let text = fs::read_to_string(&a).unwrap();
        assert_eq!(text, fs::read_to_string(&b).unwrap());
        // Eight leaves under bisection always split evenly.
        assert_eq!(text, "(((LL)(LL))((LL)(LL)))\n".repeat(3));
    }

    #[test]
    fn gen_depth_mode_hits_exact_depth() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("trees.txt");
        cmd_gen(&GenArgs {
            model: "depth-gap,m=1".into(),
            n: None,
            depth: Some(3),
            count: 1,
            seed: 5,
            out: Some(out.clone()),
        })
        .map_err(|e| e.message)
        .unwrap();
        let text = fs::read_to_string(&out).unwrap();
        let tree = BinaryTree::parse(text.trim()).unwrap();
        assert_eq!(tree.depth(), 3);
        assert_eq!(tree.num_leaves(), 5);
    }

    #[test]
    fn enumerate_writes_whole_universe() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("t4.txt");
        cmd_enumerate(&EnumerateArgs {
            n: 4,
            cap: DEFAULT_ENUMERATION_CAP,
            out: Some(out.clone()),
        })
        .map_err(|e| e.message)
        .unwrap();
        let text = fs::read_to_string(&out).unwrap();
        assert_eq!(text.lines().count(), 5);
        let err = cmd_enumerate(&EnumerateArgs {
            n: 13,
            cap: DEFAULT_ENUMERATION_CAP,
            out: None,
        })
        .unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
    }

    #[test]
    fn bench_writes_csv_with_header() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("bench.csv");
        cmd_bench(&BenchArgs {
            model: "bisection".into(),
            sizes: "2,4".into(),
            samples: 10,
            seed: 0,
            out: Some(out.clone()),
        })
        .map_err(|e| e.message)
        .unwrap();
        let text = fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,samples,mean_bits_per_leaf,mean_info_per_leaf,redundancy,mean_repr_ratio,seed"
        );
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn stats_reports_known_columns() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("trees.txt");
        let out = dir.path().join("stats.txt");
        fs::write(
            &input,
            "(LL)\n(((((LL)L)(L(LL)))(L(LL)))((((LL)L)(L(LL)))L))\n",
        )
        .unwrap();
        cmd_stats(&StatsArgs {
            input: Some(input.clone()),
            model: None,
            out: Some(out.clone()),
        })
        .map_err(|e| e.message)
        .unwrap();
        let text = fs::read_to_string(&out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "|t|=2 d=1 N=2 r=1 L=1 bound=5");
        assert!(lines[1].starts_with("|t|=16 d=5 N=8 r=0.5 L=40 bound=47.39"));

        cmd_stats(&StatsArgs {
            input: Some(input),
            model: Some("bisection".into()),
            out: Some(out.clone()),
        })
        .map_err(|e| e.message)
        .unwrap();
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.lines().next().unwrap().ends_with("info=0"));
    }

    #[test]
    fn cli_parses_subcommands() {
        let cli = Cli::try_parse_from(["treegram", "encode", "--in", "x.txt", "--packed"]).unwrap();
        match cli.command {
            Command::Encode(args) => {
                assert_eq!(args.input.unwrap().to_str().unwrap(), "x.txt");
                assert!(args.packed);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["treegram", "bogus"]).is_err());
        assert!(Cli::try_parse_from(["treegram"]).is_err());
    }
}
