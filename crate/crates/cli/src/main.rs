mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use cuttree::dimacs::{parse_graph, parse_tree, write_graph, write_tree};
use cuttree::oc::init_mu_for_root;
use cuttree::oracle::{all_pairs_min_cut, check_cut_tree, check_oc_tree, OracleMode, EXHAUSTIVE_LIMIT};
use cuttree::{generate, ordered_cuts, GenSpec, Graph, NodeId, RunMetrics};
use rayon::prelude::*;

use bench::{average, run_cell, write_rows, Alg, Format, Row};

#[derive(Parser)]
#[command(name = "cuttree", version, about = "Gomory-Hu cut trees: generate, run, verify, bench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance from a spec such as `cycle:n=64,w=1..1000,seed=1`.
    Gen {
        spec: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a cut tree of a graph file.
    Run {
        graph: PathBuf,
        #[arg(long, value_enum)]
        alg: Alg,
        /// Where to write the tree (default: stdout).
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Where to write the metrics row (default: stderr).
        #[arg(long)]
        metrics: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Check a cut tree against brute-force min cuts. Without a tree, checks
    /// every algorithm. With `--oc`, checks a tree of ordered cuts instead.
    Verify {
        graph: PathBuf,
        tree: Option<PathBuf>,
        #[arg(long)]
        oc: bool,
        /// Sequence for `--oc`, comma separated, 1-based (default: the
        /// driver's first-round order).
        #[arg(long)]
        seq: Option<String>,
    },
    /// Run algorithms over generated families and print averaged metrics.
    Bench {
        /// Instance specs; the seed of each spec is the first of the run.
        #[arg(long = "family", required = true)]
        families: Vec<String>,
        #[arg(long, value_enum, value_delimiter = ',', default_values = ["ghh", "ghr", "oc"])]
        alg: Vec<Alg>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Also print one row per seed.
        #[arg(long)]
        per_seed: bool,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Gen { spec, output } => gen(&spec, output.as_deref()),
        Cmd::Run { graph, alg, tree, metrics, format } => {
            run(&graph, alg, tree.as_deref(), metrics.as_deref(), format)
        }
        Cmd::Verify { graph, tree, oc, seq } => verify(&graph, tree.as_deref(), oc, seq.as_deref()),
        Cmd::Bench { families, alg, seeds, format, per_seed, threads, output } => {
            if let Some(t) = threads {
                rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
            }
            bench(&families, &alg, seeds, format, per_seed, output.as_deref())
        }
    }
}

fn emit(path: Option<&Path>, text: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(text)?),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("in {}", path.display()))
}

fn gen(spec: &str, output: Option<&Path>) -> Result<()> {
    let spec: GenSpec = spec.parse()?;
    let out = generate(&spec)?;
    let mut comments = vec![format!("cuttree gen {spec}")];
    if out.augmented {
        comments.push("disconnected output joined by weight-1 edges".to_string());
        eprintln!("note: {spec} was disconnected; added weight-1 edges between components");
    }
    emit(output, write_graph(&out.graph, &comments).as_bytes())
}

fn run(graph: &Path, alg: Alg, tree: Option<&Path>, metrics: Option<&Path>, format: Format) -> Result<()> {
    let g = read_graph(graph)?;
    let res = alg.run(&g).with_context(|| format!("{} on {}", alg.name(), graph.display()))?;
    emit(tree, write_tree(&res.tree).as_bytes())?;
    let row = Row::from_metrics(&graph.display().to_string(), alg.name(), &res.metrics);
    let mut buf = Vec::new();
    write_rows(&mut buf, format, &[row])?;
    match metrics {
        Some(p) => fs::write(p, buf)?,
        None => std::io::stderr().write_all(&buf)?,
    }
    Ok(())
}

fn parse_seq(text: &str, n: usize) -> Result<Vec<NodeId>> {
    text.split(',')
        .map(|t| {
            let v: usize = t.trim().parse().with_context(|| format!("bad sequence element {t:?}"))?;
            if v == 0 || v > n {
                bail!("sequence element {v} outside 1..={n}");
            }
            Ok(v - 1)
        })
        .collect()
}

fn verify(graph: &Path, tree: Option<&Path>, oc: bool, seq: Option<&str>) -> Result<()> {
    let g = read_graph(graph)?;
    let n = g.node_count();
    if oc {
        let seq = match seq {
            Some(s) => parse_seq(s, n)?,
            None => {
                let (s, mu) = init_mu_for_root(&g);
                let mut rest: Vec<NodeId> = (0..n).filter(|&v| v != s).collect();
                rest.sort_by_key(|&v| (std::cmp::Reverse(mu[v]), v));
                std::iter::once(s).chain(rest).collect()
            }
        };
        let t = ordered_cuts(&g, &seq, &mut RunMetrics::default())?;
        let problems = check_oc_tree(&t, &g);
        if !problems.is_empty() {
            bail!("tree of ordered cuts is invalid:\n{}", problems.join("\n"));
        }
        println!("tree of ordered cuts over {} elements: valid", seq.len());
        return Ok(());
    }
    let mode = if n <= EXHAUSTIVE_LIMIT { OracleMode::Exhaustive } else { OracleMode::MaxFlow };
    let truth = all_pairs_min_cut(&g, mode)?;
    let trees = match tree {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            vec![(p.display().to_string(), parse_tree(&text, n)?)]
        }
        None => [Alg::Ghh, Alg::Ghr, Alg::Gus, Alg::Oc]
            .into_iter()
            .map(|a| Ok((a.name().to_string(), a.run(&g)?.tree)))
            .collect::<Result<_>>()?,
    };
    let mut failed = false;
    for (name, t) in trees {
        let bad = check_cut_tree(&t, &truth)?;
        println!("{name}: {} mismatches over {} pairs ({mode:?} oracle)", bad.len(), n * (n - 1) / 2);
        for b in bad.iter().take(5) {
            println!("  ({}, {}): tree {} graph {}", b.u + 1, b.v + 1, b.got, b.expected);
        }
        failed |= !bad.is_empty();
    }
    if failed {
        bail!("verification failed");
    }
    Ok(())
}

fn bench(
    families: &[String],
    algs: &[Alg],
    seeds: u64,
    format: Format,
    per_seed: bool,
    output: Option<&Path>,
) -> Result<()> {
    if seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let specs: Vec<GenSpec> = families.iter().map(|f| f.parse()).collect::<cuttree::Result<_>>()?;
    let cells: Vec<(usize, u64)> = (0..specs.len()).flat_map(|i| (0..seeds).map(move |s| (i, s))).collect();
    let results: Vec<Vec<Row>> = cells
        .par_iter()
        .map(|&(i, s)| {
            let spec = specs[i].clone().seed(specs[i].seed + s);
            let g = generate(&spec)?.graph;
            let name = spec.to_string();
            algs.iter().map(|&a| run_cell(&name, &g, a)).collect()
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let mut base = spec.clone();
        base.seed = spec.seed;
        for (j, _) in algs.iter().enumerate() {
            let cell: Vec<Row> = results[i * seeds as usize..(i + 1) * seeds as usize]
                .iter()
                .map(|r| r[j].clone())
                .collect();
            if per_seed {
                rows.extend(cell.iter().cloned());
            }
            let mut avg = average(&cell);
            avg.instance = format!("{base} x{seeds}");
            rows.push(avg);
        }
    }
    let mut buf = Vec::new();
    write_rows(&mut buf, format, &rows)?;
    emit(output, &buf)
}
