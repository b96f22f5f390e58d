//! Command-line front end: invariants, comparisons, Seifert reports, scans
//! and topograph pictures.

use std::error::Error;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use topograph_core::scan::{criteria_disagreements, emit_panel, parabola_points};
use topograph_core::seifert::{
    form_invariants, lemma_parameters, main_bound_threshold, n0_threshold, thm_n0_applies,
};
use topograph_core::{
    alexander_coefficient, emit_grid, invariant, lemma_bounds, parabola_alexander_trivial,
    render_topograph, scan, seifert_forms, seifert_matrices, split_by_type, thm_main_bound,
    BinaryQuadraticForm, GridFormat, OrbitCache, Provenance, ScanOptions, SeifertParams,
};

/// Exit code for bad arguments.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for a failed computation or I/O.
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "topograph",
    version,
    about = "Isomorphism of integral binary quadratic forms via Conway's topograph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the complete invariant of Ax² + Hxy + By².
    #[command(allow_negative_numbers = true)]
    Invariant { a: BigInt, h: BigInt, b: BigInt },
    /// Decide whether two forms are isomorphic over ℤ.
    #[command(allow_negative_numbers = true)]
    Compare {
        a0: BigInt,
        h0: BigInt,
        b0: BigInt,
        a1: BigInt,
        h1: BigInt,
        b1: BigInt,
    },
    /// Report the Seifert matrices, forms and criteria for one parameter point.
    #[command(allow_negative_numbers = true)]
    Seifert {
        p: BigInt,
        q: BigInt,
        k: BigInt,
        n: BigInt,
    },
    /// Scan the square |k|, |n| <= size for fixed p, q.
    #[command(allow_negative_numbers = true)]
    Scan {
        p: i64,
        q: i64,
        #[arg(long)]
        size: i64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScanFormat::Csv)]
        format: ScanFormat,
        /// Orbit cache file, read if present and rewritten after every batch.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Worker threads (0: one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also compare against -Q1.
        #[arg(long)]
        two_sided: bool,
        /// Also write one panel per topograph type next to --out.
        #[arg(long, requires = "out")]
        split: bool,
        /// List cells where the one- and two-sided comparisons differ.
        #[arg(long)]
        report_disagreements: bool,
    },
    /// Draw the topograph near the marked superbase.
    #[command(allow_negative_numbers = true)]
    Render {
        a: BigInt,
        h: BigInt,
        b: BigInt,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScanFormat {
    Csv,
    Ppm,
    PpmAscii,
    Ascii,
    Svg,
}

impl ScanFormat {
    fn grid_format(self) -> GridFormat {
        match self {
            ScanFormat::Csv => GridFormat::Csv,
            ScanFormat::Ppm => GridFormat::Ppm,
            ScanFormat::PpmAscii => GridFormat::PpmAscii,
            ScanFormat::Ascii => GridFormat::Ascii,
            ScanFormat::Svg => GridFormat::Svg,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RenderFormat {
    Dot,
    Ascii,
}

type CliResult = Result<(), Box<dyn Error>>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Invariant { a, h, b } => {
            writeln!(out, "{}", invariant(&BinaryQuadraticForm::new(a, h, b))?)?;
        }
        Command::Compare {
            a0,
            h0,
            b0,
            a1,
            h1,
            b1,
        } => {
            let i0 = invariant(&BinaryQuadraticForm::new(a0, h0, b0))?;
            let i1 = invariant(&BinaryQuadraticForm::new(a1, h1, b1))?;
            writeln!(out, "{}", if i0 == i1 { "EQUAL" } else { "DIFFERENT" })?;
            writeln!(out, "{i0}")?;
            writeln!(out, "{i1}")?;
        }
        Command::Seifert { p, q, k, n } => seifert_report(&SeifertParams::new(p, q, k, n)?, out)?,
        Command::Scan {
            p,
            q,
            size,
            out: path,
            format,
            cache,
            jobs,
            two_sided,
            split,
            report_disagreements,
        } => {
            if size < 0 {
                return Err("--size must be nonnegative".into());
            }
            let options = ScanOptions {
                jobs,
                two_sided,
                checkpoint: cache.clone(),
                ..ScanOptions::default()
            };
            let mut orbit_cache = match &cache {
                Some(file) if file.exists() => OrbitCache::load(file)?,
                _ => OrbitCache::new(p, q, two_sided),
            };
            let grid = scan(p, q, -size..=size, -size..=size, &options, &mut orbit_cache)?;
            if let Some(file) = &cache {
                orbit_cache.save(file)?;
            }
            let bytes = emit_grid(&grid, format.grid_format())?;
            match &path {
                Some(file) => fs::write(file, &bytes)?,
                None => out.write_all(&bytes)?,
            }
            if split {
                let base = path.as_deref().expect("clap requires --out with --split");
                for (panel, part) in split_by_type(&grid)? {
                    let file = panel_path(base, panel.name());
                    fs::write(&file, emit_panel(&part, format.grid_format()))?;
                    writeln!(err, "wrote {}", file.display())?;
                }
            }
            let computed = grid
                .cells
                .values()
                .filter(|c| c.provenance == Provenance::Computed)
                .count();
            let orange = grid.cells.values().filter(|c| c.distinguishable).count();
            writeln!(
                err,
                "scanned {} cells of ({p},{q}): {computed} computed, {} from cache, {orange} distinguishable, {} parabola points",
                grid.cells.len(),
                grid.cells.len() - computed,
                parabola_points(&grid).len()
            )?;
            if report_disagreements {
                let cells = criteria_disagreements(&grid)?;
                writeln!(
                    err,
                    "one-sided and two-sided comparisons differ at {} cells",
                    cells.len()
                )?;
                for (k, n) in cells {
                    writeln!(err, "  k={k} n={n}")?;
                }
            }
        }
        Command::Render {
            a,
            h,
            b,
            depth,
            format,
        } => {
            let tree = render_topograph(&BinaryQuadraticForm::new(a, h, b), depth)?;
            let text = match format {
                RenderFormat::Dot => tree.to_dot(),
                RenderFormat::Ascii => tree.to_ascii(),
            };
            write!(out, "{text}")?;
        }
    }
    Ok(())
}

fn panel_path(base: &Path, panel: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{panel}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{panel}"),
    };
    base.with_file_name(name)
}

fn matrix(m: &[[BigInt; 2]; 2]) -> String {
    format!("[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn seifert_report(sp: &SeifertParams, out: &mut dyn Write) -> CliResult {
    writeln!(
        out,
        "parameters p={} q={} k={} n={} r={} s={}{}",
        sp.p,
        sp.q,
        sp.k,
        sp.n,
        sp.r,
        sp.s,
        if sp.mirrored {
            " (mirror: forms negated)"
        } else {
            ""
        }
    )?;
    let m = seifert_matrices(sp);
    writeln!(out, "V0 = {}", matrix(&m.v0))?;
    writeln!(out, "V1 = {}", matrix(&m.v1))?;
    let (q0, q1) = seifert_forms(sp);
    writeln!(out, "Q0 = {q0}")?;
    writeln!(out, "Q1 = {q1}")?;
    let inv = form_invariants(sp)?;
    writeln!(out, "invariant Q0  = {}", inv.q0)?;
    writeln!(out, "invariant Q1  = {}", inv.q1)?;
    writeln!(out, "invariant -Q1 = {}", inv.neg_q1)?;
    writeln!(
        out,
        "forms: {}",
        if inv.distinguishable() {
            "non-isomorphic"
        } else {
            "isomorphic"
        }
    )?;
    writeln!(out, "distinguishable = {}", inv.distinguishable())?;
    writeln!(
        out,
        "oriented_pair_distinct = {}",
        inv.oriented_pair_distinct()
    )?;
    writeln!(
        out,
        "main bound: n >= {} and 2kp != 1 (mod q): {}",
        main_bound_threshold(sp),
        thm_main_bound(sp)
    )?;
    writeln!(
        out,
        "on parabola qn = k(pk-1): {}",
        parabola_alexander_trivial(sp)
    )?;
    let c = alexander_coefficient(sp);
    let middle = BigInt::from(1) - BigInt::from(2) * &c;
    writeln!(
        out,
        "alexander coefficient C = {c}: {c}t^2 + ({middle})t + {c}"
    )?;
    let (u, v0, v1, t) = lemma_parameters(sp);
    write!(out, "lemma u={u} v0={v0} v1={v1} t={t}: ")?;
    match lemma_bounds(&u, &v0, &v1) {
        Ok(b) => writeln!(out, "t0={} t1={}", b.t0, b.t1)?,
        Err(e) => writeln!(out, "no bound ({e})")?,
    }
    writeln!(
        out,
        "n = 0 threshold k0 = {}: applies = {}",
        n0_threshold(&sp.p, &sp.q),
        thm_n0_applies(sp)
    )?;
    Ok(())
}
