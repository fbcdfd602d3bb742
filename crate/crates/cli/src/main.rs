//! `gsdf`: search, classify and verify GS-difference families.
//!
//! Exit codes: 0 success, 1 exhaustive search found nothing, 2 bad input or
//! a failed verification.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gsdf_core::blockgen::{collect_rows, format_row_file, read_row_file, write_row_file};
use gsdf_core::catalog::{catalog, catalog_entry, table1};
use gsdf_core::equivalence::{classify, small_classes};
use gsdf_core::family::{format_families, format_family, read_families, read_family};
use gsdf_core::matcher::{bins_match, MatchOptions, DEFAULT_THRESHOLD};
use gsdf_core::params::{enumerate_param_sets, enumerate_skew_param_sets};
use gsdf_core::search::{recompute_row, search, SearchOptions};
use gsdf_core::verify::{certify, format_hadamard, gs_array_of};
use gsdf_core::{Error, GsParamSet, SymmetryType, Tag, TypedFamily};

#[derive(Parser)]
#[command(name = "gsdf", version, about = "Goethals-Seidel difference families in cyclic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TypeArg {
    Ksss,
    Kkss,
    Kkks,
}

impl From<TypeArg> for SymmetryType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::Ksss => SymmetryType::Ksss,
            TypeArg::Kkss => SymmetryType::Kkss,
            TypeArg::Kkks => SymmetryType::Kkks,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Skew,
    Symmetric,
}

#[derive(clap::Args, Clone, Copy)]
struct Workers {
    /// Worker threads (0 = one per core)
    #[arg(long, env = "GSDF_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Pair-product size below which a matching case is solved directly
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: u64,
}

#[derive(Subcommand)]
enum Command {
    /// List GS-parameter sets of order v
    Params {
        v: u32,
        /// Only sets admitting this symmetry type
        #[arg(long = "type")]
        ty: Option<TypeArg>,
        /// Include sets with k1 < (v-1)/2
        #[arg(long, conflicts_with = "ty")]
        all: bool,
    },
    /// Write the row file of all skew or symmetric blocks of one size
    Generate {
        #[arg(long)]
        v: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Keep blocks that fail the spectral bound
        #[arg(long)]
        no_filter: bool,
        /// Output path (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Match four row files on column sums equal to lambda
    Match {
        #[arg(num_args = 4, required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        lambda: u32,
        #[command(flatten)]
        workers: Workers,
        /// Output path for the families (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partition the families of a file into equivalence classes
    Classify {
        input: PathBuf,
        /// Dilation-only classes with unordered blocks
        #[arg(long)]
        small: bool,
    },
    /// Certify one family and optionally write its Hadamard matrix
    Verify {
        family: PathBuf,
        #[arg(long)]
        hadamard: Option<PathBuf>,
    },
    /// Exhaustive search for one order and symmetry type
    Search {
        #[arg(long)]
        v: u32,
        #[arg(long = "type", value_enum)]
        ty: TypeArg,
        #[command(flatten)]
        workers: Workers,
        #[arg(long)]
        no_filter: bool,
        /// Write every family found
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the report here as well as to stdout
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the Hadamard matrix of the first class representative
        #[arg(long)]
        hadamard: Option<PathBuf>,
    },
    /// Embedded reference families
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Recompute the existence table up to an order
    Table1 {
        #[arg(long, default_value_t = 15)]
        max_v: u32,
        #[command(flatten)]
        workers: Workers,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Labels and parameters
    List,
    /// Certify every entry
    VerifyAll,
    /// Print one entry in family-file format
    Show { label: String },
}

enum Outcome {
    Done,
    Absent,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Absent) => ExitCode::from(1),
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> gsdf_core::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> gsdf_core::Result<Outcome> {
    match cmd {
        Command::Params { v, ty, all } => {
            let sets = match (ty, all) {
                (_, true) => enumerate_param_sets(v),
                (Some(t), false) => SymmetryType::from(t).param_sets(v)?,
                (None, false) => enumerate_skew_param_sets(v)?,
            };
            for p in &sets {
                let types: Vec<String> = SymmetryType::ALL
                    .iter()
                    .filter(|t| t.admits(p))
                    .map(|t| t.to_string())
                    .collect();
                println!("{p} {}", types.join(","));
            }
            Ok(if sets.is_empty() { Outcome::Absent } else { Outcome::Done })
        }
        Command::Generate {
            v,
            k,
            kind,
            no_filter,
            out,
        } => {
            let kind = match kind {
                KindArg::Skew => Tag::Skew,
                KindArg::Symmetric => Tag::Symmetric,
            };
            let file = collect_rows(v, k, kind, !no_filter)?;
            match out {
                Some(p) => write_row_file(&p, &file)?,
                None => print!("{}", format_row_file(&file)),
            }
            Ok(Outcome::Done)
        }
        Command::Match {
            files,
            lambda,
            workers,
            out,
        } => {
            let rows = files
                .iter()
                .map(|p| read_row_file(p))
                .collect::<gsdf_core::Result<Vec<_>>>()?;
            let v = rows[0].v;
            let params = GsParamSet::new(v, std::array::from_fn(|i| rows[i].k), lambda)?;
            let tags: [Tag; 4] = std::array::from_fn(|i| rows[i].kind);
            let m = bins_match(
                [&rows[0], &rows[1], &rows[2], &rows[3]],
                lambda,
                MatchOptions {
                    threshold: workers.threshold,
                    jobs: workers.jobs,
                },
            )?;
            if m.cases == 0 {
                eprintln!("no column-1 case sums to {lambda}: the problem has no solution");
            }
            let fams = m
                .quadruples
                .iter()
                .map(|q| TypedFamily::new(params, *q, tags))
                .collect::<gsdf_core::Result<Vec<_>>>()?;
            emit(out.as_deref(), &format_families(&fams))?;
            eprintln!("{} families", fams.len());
            Ok(if fams.is_empty() { Outcome::Absent } else { Outcome::Done })
        }
        Command::Classify { input, small } => {
            let fams = read_families(&input)?;
            let classes = if small { small_classes(&fams) } else { classify(&fams) };
            println!("{} families, {} {}classes", fams.len(), classes.len(), if small { "small " } else { "" });
            for (i, c) in classes.iter().enumerate() {
                println!("# class {} size {}", i + 1, c.size());
                print!("{}", format_family(&c.representative));
            }
            Ok(Outcome::Done)
        }
        Command::Verify { family, hadamard } => {
            let f = read_family(&family)?;
            let cert = certify(&f);
            println!("{}", cert.summary(&f));
            if let Some(p) = hadamard {
                emit(Some(&p), &format_hadamard(&gs_array_of(&f).matrix))?;
            }
            Ok(if cert.passed() { Outcome::Done } else { Outcome::Failed })
        }
        Command::Search {
            v,
            ty,
            workers,
            no_filter,
            out,
            report,
            hadamard,
        } => {
            let opts = SearchOptions {
                filter: !no_filter,
                threshold: workers.threshold,
                jobs: workers.jobs,
            };
            let r = search(v, ty.into(), opts)?;
            let text = r.render();
            print!("{text}");
            if let Some(p) = report {
                emit(Some(&p), &text)?;
            }
            if let Some(p) = out {
                emit(Some(&p), &format_families(&r.families()))?;
            }
            if let Some(p) = hadamard {
                if let Some(c) = r.outcomes.iter().flat_map(|o| o.classes.first()).next() {
                    emit(Some(&p), &format_hadamard(&gs_array_of(&c.representative).matrix))?;
                }
            }
            Ok(if !r.verified() {
                Outcome::Failed
            } else if r.family_count() == 0 {
                Outcome::Absent
            } else {
                Outcome::Done
            })
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => {
                for e in catalog() {
                    println!("{} {} {}", e.label, e.params(), e.symmetry_type);
                }
                Ok(Outcome::Done)
            }
            CatalogAction::VerifyAll => {
                let mut failures = 0;
                let entries = catalog();
                for e in &entries {
                    let c = certify(&e.family);
                    println!("{} {}", e.label, c.summary(&e.family));
                    if !c.passed() {
                        failures += 1;
                    }
                }
                println!("{} entries, {failures} failures", entries.len());
                Ok(if failures == 0 { Outcome::Done } else { Outcome::Failed })
            }
            CatalogAction::Show { label } => {
                let e = catalog_entry(&label)
                    .ok_or_else(|| Error::Parameters(format!("no catalog entry '{label}'")))?;
                print!("@{}\n{}", e.label, format_family(&e.family));
                Ok(Outcome::Done)
            }
        },
        Command::Table1 { max_v, workers } => {
            let opts = SearchOptions {
                filter: true,
                threshold: workers.threshold,
                jobs: workers.jobs,
            };
            let mut mismatches = 0;
            for row in table1().iter().filter(|r| r.params.v <= max_v) {
                let got = recompute_row(row, opts)?;
                let mut line = String::new();
                write!(line, "{}", row.params).unwrap();
                for ((ty, g), want) in SymmetryType::ALL.iter().zip(got).zip(row.verdicts) {
                    let ok = g == want;
                    if !ok {
                        mismatches += 1;
                    }
                    write!(
                        line,
                        " {ty}={g}{}",
                        if ok { "" } else { "(MISMATCH)" }
                    )
                    .unwrap();
                }
                println!("{line}");
            }
            println!("{mismatches} mismatches");
            Ok(if mismatches == 0 { Outcome::Done } else { Outcome::Failed })
        }
    }
}
