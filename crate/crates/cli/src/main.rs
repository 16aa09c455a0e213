//! `nrdsts` command line. Exit status: 0 when everything passes, 1 on a
//! mathematical failure (verification failure, missing ingredient, search
//! without result), 2 on usage, parse or I/O errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nrdsts::catalog::Catalog;
use nrdsts::cyclotomic::{build_k4, search_k4, search_starters, StarterQuadruple};
use nrdsts::design::io::DesignFile;
use nrdsts::design::{verify_nr_star, Design, ResolutionClasses};
use nrdsts::frames::{fill_frame, inflate_frame, search_frame, verify_frame, Frame, FrameSearch};
use nrdsts::gdd::GroupType;
use nrdsts::known::{build_own, K4_37_BASE, K4_37_TRANSLATES};
use nrdsts::latin::{mols_of_order, td_from_mols, truncate_td, Truncation};
use nrdsts::multiplier::{build_multiplier, search_cyclic};
use nrdsts::pipeline::{
    emit_base_class_listing, parse_recipes, reproduce, reproduce_field_table, reproduce_tables, verify_file,
    RowOutcome, TableEntry,
};
use nrdsts::search::{Budget, SearchOutcome};
use nrdsts::Error;

#[derive(Parser)]
#[command(name = "nrdsts", version, about = "Self-orthogonal near-resolvable duplicated Steiner triple systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a design from this crate's constructions and write it.
    Construct(ConstructArgs),
    /// Run one of the exhaustive searches.
    Search {
        #[command(subcommand)]
        what: SearchCommand,
    },
    /// Latin squares, transversal designs and truncations.
    Latin {
        #[command(subcommand)]
        what: LatinCommand,
    },
    /// Frame search, inflation and fill.
    Frame {
        #[command(subcommand)]
        what: FrameCommand,
    },
    /// Recipe execution.
    Pipeline {
        #[command(subcommand)]
        what: PipelineCommand,
    },
    /// Parse a design, GDD or frame file and run every applicable check.
    Verify { file: PathBuf },
    /// Print listings.
    Emit {
        #[command(subcommand)]
        what: EmitCommand,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructKind {
    /// Whatever construction the crate has for `v`.
    Own,
    /// Field construction from a listed row, or from `--quad`.
    Cyclotomic,
    /// Block size 4 on F_q (tripled design).
    K4,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: ConstructKind,
    /// Number of points.
    v: u32,
    /// Generator to index cosets by (cyclotomic with `--quad` only).
    #[arg(long)]
    omega: Option<u32>,
    /// Starter quadruple `x,y,z,t`; repeat for several.
    #[arg(long = "quad", value_parser = parse_quad)]
    quads: Vec<StarterQuadruple>,
    /// Search budget for the k4 search when no data is listed.
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Starter quadruples for the field construction on F_q.
    Starters {
        q: u32,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
    },
    /// Block-size-4 instances on F_q.
    K4 {
        q: u32,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
    },
    /// Cyclic multiplier constructions on Z_v.
    Cyclic {
        v: u32,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
        /// Write the resulting design here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LatinCommand {
    /// Print `count` mutually orthogonal Latin squares of order `n`.
    Mols {
        n: u32,
        #[arg(long, default_value_t = 3)]
        count: u32,
    },
    /// Write TD(k, n) as a GDD file.
    Td {
        n: u32,
        k: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Truncate a transversal design (variants 1-4) and write the GDD.
    Truncate {
        #[arg(long)]
        variant: u8,
        /// TD order; variant 4 always uses 19.
        #[arg(long, default_value_t = 19)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        w: u32,
        #[arg(long, default_value_t = 0)]
        y: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum FrameCommand {
    /// Search for a frame of the given type, e.g. `2^13`.
    Search {
        #[arg(value_name = "TYPE")]
        ftype: String,
        /// Seed for the randomized search.
        #[arg(long, conflicts_with = "exhaustive", required_unless_present = "exhaustive")]
        seed: Option<u64>,
        /// Scan the whole space (small types only).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Inflate a frame by three MOLS of order `n`.
    Inflate {
        frame: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Fill every hole of a frame; one filler file per group, in group order,
    /// or a single file used for every group.
    Fill {
        frame: PathBuf,
        #[arg(long = "filler", required = true)]
        fillers: Vec<PathBuf>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum PipelineCommand {
    /// Execute every `x` of a recipe file.
    Run {
        recipe: PathBuf,
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Directory for the constructed designs.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute the built-in recipes for 3 <= x <= 369.
    ReproduceTables {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild and verify all field constructions.
    FieldTable {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum EmitCommand {
    /// Base-class rows of the field construction on F_q.
    BaseRows {
        #[arg(default_value_t = 103)]
        q: u32,
    },
}

fn parse_quad(s: &str) -> Result<StarterQuadruple, String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("bad number in `{s}`")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y, z, t] => Ok(StarterQuadruple::new(x, y, z, t)),
        _ => Err(format!("expected x,y,z,t, got `{s}`")),
    }
}

/// Outcome of a command that ran to completion.
enum Status {
    Pass,
    Fail,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification { .. } | Error::MissingIngredient(_) | Error::Conditions(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Writes through a temporary file so readers never see a partial file.
fn write_atomic(path: &Path, text: &str) -> nrdsts::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn write_nrdsts(path: &Path, d: &Design, rc: &ResolutionClasses) -> nrdsts::Result<()> {
    verify_nr_star(d, rc).into_result("output")?;
    let text = DesignFile::from_design(d, Some(rc)).with_self_orthogonal(true).to_text();
    write_atomic(path, &text)
}

fn read_nrdsts(path: &Path) -> nrdsts::Result<(Design, ResolutionClasses)> {
    let f = DesignFile::read(path)?;
    let d = f.to_design()?;
    let rc = f
        .classes
        .ok_or_else(|| Error::InvalidResolution(format!("{} has no classes section", path.display())))?;
    verify_nr_star(&d, &rc).into_result(&path.display().to_string())?;
    Ok((d, rc))
}

fn load_catalog(dir: Option<&Path>) -> nrdsts::Result<Catalog> {
    dir.map_or(Ok(Catalog::new()), Catalog::load_dir)
}

fn searched<T>(what: &str, outcome: SearchOutcome<T>, used: u64) -> Option<T> {
    match outcome {
        SearchOutcome::Found(t) => {
            println!("{what}: found after {used} steps");
            Some(t)
        }
        SearchOutcome::Exhausted => {
            println!("{what}: exhausted, none exists ({used} steps)");
            None
        }
        SearchOutcome::OutOfBudget => {
            println!("{what}: budget of {used} steps spent, inconclusive");
            None
        }
    }
}

fn run(cmd: Command) -> nrdsts::Result<Status> {
    match cmd {
        Command::Construct(a) => construct(a),
        Command::Search { what } => search(what),
        Command::Latin { what } => latin(what),
        Command::Frame { what } => frame(what),
        Command::Pipeline { what } => pipeline(what),
        Command::Verify { file } => {
            let (kind, report) = verify_file(&file)?;
            println!("{kind:?}");
            print!("{report}");
            Ok(if report.passed() { Status::Pass } else { Status::Fail })
        }
        Command::Emit {
            what: EmitCommand::BaseRows { q },
        } => {
            for row in emit_base_class_listing(q)? {
                println!("{row}");
            }
            Ok(Status::Pass)
        }
    }
}

fn construct(a: ConstructArgs) -> nrdsts::Result<Status> {
    let (d, rc) = match a.kind {
        ConstructKind::Own => build_own(a.v)
            .ok_or_else(|| Error::MissingIngredient(format!("no construction for NR*DSTS({})", a.v)))??,
        ConstructKind::Cyclotomic if a.quads.is_empty() => {
            let row = nrdsts::cyclotomic::field_table()
                .into_iter()
                .find(|r| r.q == a.v)
                .ok_or_else(|| Error::Precondition(format!("no listed starter for q = {}; pass --quad", a.v)))?;
            nrdsts::cyclotomic::build_cyclotomic(a.v, Some(row.omega), &row.quads)?
        }
        ConstructKind::Cyclotomic => nrdsts::cyclotomic::build_cyclotomic(a.v, a.omega, &a.quads)?,
        ConstructKind::K4 if a.v == 37 => build_k4(37, Some(2), K4_37_BASE, K4_37_TRANSLATES)?,
        ConstructKind::K4 => {
            let mut budget = Budget::new(a.budget);
            let outcome = search_k4(a.v, &mut budget)?;
            let Some(inst) = searched("k4", outcome, budget.used()) else {
                return Ok(Status::Fail);
            };
            build_k4(inst.q, None, inst.base, inst.translates)?
        }
    };
    write_nrdsts(&a.out, &d, &rc)?;
    println!("wrote {} points, {} classes to {}", d.v(), rc.len(), a.out.display());
    Ok(Status::Pass)
}

fn search(what: SearchCommand) -> nrdsts::Result<Status> {
    let found = match what {
        SearchCommand::Starters { q, budget } => {
            let mut b = Budget::new(budget);
            let outcome = search_starters(q, &mut b)?;
            searched("starters", outcome, b.used()).map(|quads| {
                for s in quads {
                    println!("{},{},{},{}", s.x, s.y, s.z, s.t);
                }
            })
        }
        SearchCommand::K4 { q, budget } => {
            let mut b = Budget::new(budget);
            let outcome = search_k4(q, &mut b)?;
            searched("k4", outcome, b.used()).map(|k| println!("base {:?} translates {:?}", k.base, k.translates))
        }
        SearchCommand::Cyclic { v, budget, out } => {
            let mut b = Budget::new(budget);
            let outcome = search_cyclic(v, &mut b)?;
            match searched("cyclic", outcome, b.used()) {
                None => None,
                Some(s) => {
                    println!("m {} blocks {:?} translates {:?}", s.m, s.base_blocks, s.translates);
                    if let Some(out) = out {
                        let (d, rc) = build_multiplier(&s)?;
                        write_nrdsts(&out, &d, &rc)?;
                    }
                    Some(())
                }
            }
        }
    };
    Ok(if found.is_some() { Status::Pass } else { Status::Fail })
}

fn latin(what: LatinCommand) -> nrdsts::Result<Status> {
    match what {
        LatinCommand::Mols { n, count } => {
            let squares = mols_of_order(n, count)?;
            for (i, l) in squares.iter().enumerate() {
                if i > 0 {
                    println!();
                }
                for r in 0..n {
                    let row: Vec<String> = (0..n).map(|c| l.get(r, c).to_string()).collect();
                    println!("{}", row.join(" "));
                }
            }
        }
        LatinCommand::Td { n, k, out } => {
            if k < 2 {
                return Err(Error::Range(format!("block size {k} is below 2")));
            }
            let td = td_from_mols(&mols_of_order(n, k - 2)?)?;
            write_atomic(&out, &td.to_gdd().to_file().to_text())?;
        }
        LatinCommand::Truncate { variant, n, w, y, out } => {
            let (t, k, n) = match variant {
                1 => (Truncation::One { w }, 8, n),
                2 => (Truncation::Two { w, y }, 9, n),
                3 => (Truncation::Three { w, y }, 10, n),
                4 => (Truncation::Four { w, y }, 20, 19),
                _ => return Err(Error::Range(format!("truncation variant {variant}"))),
            };
            let g = truncate_td(&td_from_mols(&mols_of_order(n, k - 2)?)?, t)?;
            println!("type {}", g.group_type());
            write_atomic(&out, &g.to_file().to_text())?;
        }
    }
    Ok(Status::Pass)
}

fn frame(what: FrameCommand) -> nrdsts::Result<Status> {
    match what {
        FrameCommand::Search {
            ftype,
            seed,
            exhaustive,
            budget,
            out,
        } => {
            let ty = GroupType::parse(&ftype)?;
            let mode = match seed {
                Some(seed) if !exhaustive => FrameSearch::Randomized { seed },
                _ => FrameSearch::Exhaustive,
            };
            let mut b = Budget::new(budget);
            let outcome = search_frame(&ty, mode, &mut b)?;
            let Some(f) = searched(&format!("frame {ty}"), outcome, b.used()) else {
                return Ok(Status::Fail);
            };
            match out {
                Some(p) => write_atomic(&p, &f.to_text())?,
                None => print!("{}", f.to_text()),
            }
        }
        FrameCommand::Inflate { frame, n, out } => {
            let f = Frame::read(&frame)?;
            let big = inflate_frame(&f, &mols_of_order(n, 3)?)?;
            verify_frame(&big).into_result("inflated frame")?;
            println!("type {}", big.frame_type());
            write_atomic(&out, &big.to_text())?;
        }
        FrameCommand::Fill { frame, fillers, out } => {
            let f = Frame::read(&frame)?;
            let loaded = fillers.iter().map(|p| read_nrdsts(p)).collect::<nrdsts::Result<Vec<_>>>()?;
            let loaded = match loaded.len() {
                1 => vec![loaded[0].clone(); f.groups().len()],
                _ => loaded,
            };
            let (d, rc) = fill_frame(&f, &loaded)?;
            write_nrdsts(&out, &d, &rc)?;
            println!("wrote {} points, {} classes to {}", d.v(), rc.len(), out.display());
        }
    }
    Ok(Status::Pass)
}

fn print_entries(entries: &[TableEntry]) -> Status {
    let mut counts = [0usize; 3];
    for e in entries {
        println!("{e}");
        counts[match e.outcome {
            RowOutcome::Constructed { .. } => 0,
            RowOutcome::Skipped(_) => 1,
            RowOutcome::Failed(_) => 2,
        }] += 1;
    }
    println!(
        "constructed {}, skipped {}, failed {}",
        counts[0], counts[1], counts[2]
    );
    if counts[2] == 0 {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn design_sink(out: Option<PathBuf>) -> nrdsts::Result<impl FnMut(u32, &Design, &ResolutionClasses) -> nrdsts::Result<()>> {
    if let Some(dir) = &out {
        std::fs::create_dir_all(dir)?;
    }
    Ok(move |x: u32, d: &Design, rc: &ResolutionClasses| match &out {
        Some(dir) => write_nrdsts(&dir.join(format!("nrdsts-{}.design", 6 * x + 1)), d, rc),
        None => Ok(()),
    })
}

fn pipeline(what: PipelineCommand) -> nrdsts::Result<Status> {
    match what {
        PipelineCommand::Run { recipe, catalog, out } => {
            let recipes = parse_recipes(&std::fs::read_to_string(&recipe)?)?;
            let mut cat = load_catalog(catalog.as_deref())?;
            let entries = reproduce(&recipes, &mut cat, design_sink(out)?)?;
            Ok(print_entries(&entries))
        }
        PipelineCommand::ReproduceTables { catalog, out } => {
            let mut cat = load_catalog(catalog.as_deref())?;
            let entries = reproduce_tables(&mut cat, design_sink(out)?)?;
            Ok(print_entries(&entries))
        }
        PipelineCommand::FieldTable { out } => {
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
            }
            let rows = reproduce_field_table();
            for r in &rows {
                println!("x={} q={} {}", r.x, r.q, if r.passed() { "PASS" } else { "FAIL" });
                if !r.passed() {
                    print!("{}", r.report);
                }
                if let (Some(dir), false) = (&out, r.file.is_empty()) {
                    write_atomic(&dir.join(format!("nrdsts-{}.design", r.q)), &r.file)?;
                }
            }
            let passed = rows.iter().filter(|r| r.passed()).count();
            println!("{passed}/{} pass", rows.len());
            Ok(if passed == rows.len() { Status::Pass } else { Status::Fail })
        }
    }
}
