use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use latpoly::ehrhart::{exception_keys, h_star, ConjectureSummary};
use latpoly::enumerate::EnumOptions;
use latpoly::properties::{AnalyzeOptions, PropertyRecord, DEFAULT_BUDGET, PROPERTY_NAMES};
use latpoly::simplices::SimplexEnumerator;
use latpoly::store::{self, DatabaseRecord, DbInfo, Fixture, ALGORITHM_VERSION};
use latpoly::{Error, Result};

/// Enumerate and analyse lattice polytopes of small volume up to unimodular equivalence.
#[derive(Parser)]
#[command(name = "latpoly", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Node budget for the unimodular cover and triangulation searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Highest dilation checked for IDP.
    #[arg(long, global = true)]
    idp_max_degree: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate all polytopes of dimension D and volume at most K.
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_volume: u64,
        #[arg(long)]
        out: PathBuf,
        /// Continue an interrupted run from its manifest.
        #[arg(long)]
        resume: bool,
        /// Keep every class found from every seed (testing only).
        #[arg(long)]
        no_dedup: bool,
        /// Skip the largest-simplex pruning.
        #[arg(long)]
        no_simplex_filter: bool,
    },
    /// Enumerate simplices of dimension D.
    Simplices {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_volume: Option<u64>,
        #[arg(long)]
        exact_volume: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Property flags per polytope as CSV.
    Analyze {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        props: Props,
    },
    /// h*-vectors per polytope as CSV.
    Hstar {
        #[command(flatten)]
        io: InOut,
    },
    /// Check the conjectured h*-inequalities.
    Conjectures {
        #[command(flatten)]
        io: InOut,
    },
    /// Per-volume counts of each property.
    Stats {
        #[command(flatten)]
        io: InOut,
        #[command(flatten)]
        props: Props,
    },
    /// Compare per-volume counts with the reference tables.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        props: Props,
        /// Replacement reference counts file.
        #[arg(long)]
        counts: Option<PathBuf>,
        /// Replacement reference smooth counts file.
        #[arg(long)]
        smooth: Option<PathBuf>,
    },
    /// Compare two databases by canonical key.
    Diff { left: PathBuf, right: PathBuf },
}

#[derive(Args)]
struct InOut {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Props {
    /// Comma-separated subset of spanning,va,idp,uc,ut,smooth.
    #[arg(long, value_delimiter = ',', default_value = "spanning,va,idp,uc,ut,smooth")]
    props: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn analyze_options(cli: &Cli, props: &Props) -> Result<AnalyzeOptions> {
    for p in &props.props {
        if !PROPERTY_NAMES.contains(&p.as_str()) {
            return Err(Error::PreconditionViolated(format!(
                "unknown property `{p}` (expected one of {})",
                PROPERTY_NAMES.join(",")
            )));
        }
    }
    Ok(AnalyzeOptions { props: props.props.clone(), budget: cli.budget, idp_max_degree: cli.idp_max_degree })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Records plus the database's dimension and volume bound.
fn load(path: &Path) -> Result<(usize, u64, Vec<DatabaseRecord>)> {
    let (info, recs) = store::read_db(path)?;
    let dim = info.as_ref().map(|i| i.dim).or(recs.first().map(|r| r.dim)).unwrap_or(0);
    let k = info.map(|i| i.max_volume).or(recs.iter().map(|r| r.volume).max()).unwrap_or(0);
    if let Some(r) = recs.iter().find(|r| r.dim != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: r.dim });
    }
    Ok((dim, k, recs))
}

fn flag(f: Option<bool>) -> &'static str {
    match f {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

fn analyse_table(cli: &Cli, input: &Path, props: &Props) -> Result<store::StatsTable> {
    let opts = analyze_options(cli, props)?;
    let (dim, k, recs) = load(input)?;
    let flags = store::analyze_all(&recs, &opts)?;
    let pairs: Vec<(DatabaseRecord, PropertyRecord)> = recs.into_iter().zip(flags).collect();
    Ok(store::stats(dim, k, &pairs))
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Enumerate { dim, max_volume, out, resume, no_dedup, no_simplex_filter } => {
            if *dim < 2 || *max_volume < 1 {
                return Err(Error::PreconditionViolated("need --dim >= 2 and --max-volume >= 1".into()));
            }
            let opts = EnumOptions { dedup: !no_dedup, biggest_simplex_filter: !no_simplex_filter, ..Default::default() };
            let recs = store::enumerate_to_file(*dim, *max_volume, out, *resume, &opts)?;
            let mut counts = vec![0usize; *max_volume as usize];
            for r in &recs {
                counts[r.volume as usize - 1] += 1;
            }
            for (v, c) in counts.iter().enumerate() {
                println!("{} {}", v + 1, c);
            }
            println!("total {}", recs.len());
        }
        Cmd::Simplices { dim, max_volume, exact_volume, out } => {
            let volumes: Vec<u64> = match (max_volume, exact_volume) {
                (_, Some(v)) => vec![*v],
                (Some(k), None) => (1..=*k).collect(),
                (None, None) => return Err(Error::PreconditionViolated("give --max-volume or --exact-volume".into())),
            };
            if *dim < 1 || volumes.contains(&0) {
                return Err(Error::PreconditionViolated("need --dim >= 1 and positive volumes".into()));
            }
            let en = SimplexEnumerator::new();
            let mut recs = Vec::new();
            for &v in &volumes {
                let s = en.get(*dim, v);
                println!("{} {}", v, s.len());
                recs.extend(s.members.iter().map(|(k, vs)| DatabaseRecord::new(k, vs.clone())));
            }
            let info = DbInfo {
                dim: *dim,
                max_volume: *volumes.last().unwrap(),
                algorithm_version: ALGORITHM_VERSION,
                kind: "simplices".into(),
            };
            store::write_db(out, &info, &recs)?;
        }
        Cmd::Analyze { io, props } => {
            let opts = analyze_options(cli, props)?;
            let (_, _, recs) = load(&io.input)?;
            let flags = store::analyze_all(&recs, &opts)?;
            let mut s = String::from("key,volume,points,spanning,va,idp,uc,ut,smooth\n");
            for (r, f) in recs.iter().zip(&flags) {
                let n = r.polytope()?.num_points();
                let cells = [f.spanning, f.very_ample, f.idp, f.unimodular_cover, f.unimodular_triangulation, f.smooth];
                let cells: Vec<&str> = cells.iter().map(|c| flag(*c)).collect();
                s.push_str(&format!("{},{},{},{}\n", r.key(), r.volume, n, cells.join(",")));
            }
            emit(&io.out, &s)?;
        }
        Cmd::Hstar { io } => {
            let (dim, _, recs) = load(&io.input)?;
            let rows: Vec<String> = recs
                .par_iter()
                .map(|r| {
                    let p = r.polytope()?;
                    let h = h_star(&p)?;
                    let hs: Vec<String> = h.0.iter().map(|x| x.to_string()).collect();
                    Ok(format!(
                        "{},{},{},{},{},{}\n",
                        r.key(),
                        r.volume,
                        p.num_points(),
                        p.num_interior(),
                        hs.join(","),
                        h.degree()
                    ))
                })
                .collect::<Result<_>>()?;
            let hcols: Vec<String> = (0..=dim).map(|i| format!("h{i}")).collect();
            let mut s = format!("key,volume,points,interior,{},degree\n", hcols.join(","));
            s.extend(rows);
            emit(&io.out, &s)?;
        }
        Cmd::Conjectures { io } => {
            let (_, k, recs) = load(&io.input)?;
            let hs: Vec<_> = recs.par_iter().map(|r| h_star(&r.polytope()?)).collect::<Result<_>>()?;
            let exceptions = exception_keys(k);
            let mut sum = ConjectureSummary::default();
            for (r, h) in recs.iter().zip(&hs) {
                sum.add(&r.key(), h, &exceptions);
            }
            emit(&io.out, &sum.to_string())?;
        }
        Cmd::Stats { io, props } => {
            let t = analyse_table(cli, &io.input, props)?;
            match &io.out {
                Some(p) => fs::write(p, t.to_csv())?,
                None => print!("{t}"),
            }
        }
        Cmd::Verify { input, props, counts, smooth } => {
            let fixture = match (counts, smooth) {
                (None, None) => Fixture::embedded(),
                (c, s) => {
                    let read = |p: &Option<PathBuf>| -> Result<String> {
                        Ok(match p {
                            Some(p) => fs::read_to_string(p)?,
                            None => String::new(),
                        })
                    };
                    Fixture::parse(&read(c)?, &read(s)?)?
                }
            };
            let t = analyse_table(cli, input, props)?;
            print!("{t}");
            let rep = store::verify(&t, &fixture);
            for m in &rep.mismatches {
                println!("mismatch {m}");
            }
            println!("{} cells compared, {} mismatches", rep.compared, rep.mismatches.len());
            return Ok(rep.ok() && rep.compared > 0);
        }
        Cmd::Diff { left, right } => {
            let (_, _, a) = load(left)?;
            let (_, _, b) = load(right)?;
            let d = store::diff(&a, &b);
            for k in &d.only_left {
                println!("< {k}");
            }
            for k in &d.only_right {
                println!("> {k}");
            }
            if d.duplicates_left + d.duplicates_right > 0 {
                println!("duplicate keys: {} left, {} right", d.duplicates_left, d.duplicates_right);
            }
            println!("{} only left, {} only right", d.only_left.len(), d.only_right.len());
            return Ok(d.is_empty());
        }
    }
    Ok(true)
}
