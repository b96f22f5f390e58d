//! Rectangular `(k, n)` scans for a fixed `(p, q)`, memoized per
//! `⟨tau, rho⟩`-orbit, with a persistent orbit cache.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::error::ScanError;
use crate::seifert::{form_invariants, orbit_key, rho, tau, tau_inverse, OrbitKey, SeifertParams};
use crate::topograph::TopographKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    /// Compare `Q0` against both `Q1` and `-Q1`.
    pub two_sided: bool,
    /// Reuse one computation per orbit. Off means every cell is computed.
    pub memoize: bool,
    /// Orbits computed per batch before merging into the cache.
    pub batch_size: usize,
    /// Rewrite this cache file after every batch.
    pub checkpoint: Option<PathBuf>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            jobs: 0,
            two_sided: false,
            memoize: true,
            batch_size: 256,
            checkpoint: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    CacheHit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellOutcome {
    pub distinguishable: bool,
    /// Kind of the topograph of `Q1` (always equal to that of `Q0`).
    pub topograph_type: TopographKind,
    pub orbit_key: OrbitKey,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanGrid {
    pub p: i64,
    pub q: i64,
    pub k_min: i64,
    pub k_max: i64,
    pub n_min: i64,
    pub n_max: i64,
    pub two_sided: bool,
    pub cells: BTreeMap<(i64, i64), CellOutcome>,
}

impl ScanGrid {
    pub fn width(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn contains(&self, k: i64, n: i64) -> bool {
        (self.k_min..=self.k_max).contains(&k) && (self.n_min..=self.n_max).contains(&n)
    }

    pub fn get(&self, k: i64, n: i64) -> Option<&CellOutcome> {
        self.cells.get(&(k, n))
    }

    pub fn check_complete(&self) -> Result<(), ScanError> {
        for k in self.k_min..=self.k_max {
            for n in self.n_min..=self.n_max {
                if !self.cells.contains_key(&(k, n)) {
                    return Err(ScanError::IncompleteGrid { k, n });
                }
            }
        }
        Ok(())
    }

    fn base_params(&self) -> SeifertParams {
        SeifertParams::new(self.p, self.q, 0, 0).expect("grid was built from valid (p, q)")
    }

    /// Checks that every in-range pair of cells related by `tau` or `rho`
    /// carries the same outcome.
    pub fn audit_symmetry(&self) -> Result<(), ScanError> {
        let base = self.base_params();
        for (&(k, n), cell) in &self.cells {
            let here = base.with_kn(k.into(), n.into());
            let images = [
                (tau(&here), "tau"),
                (tau_inverse(&here), "tau^-1"),
                (rho(&here), "rho"),
            ];
            for (image, name) in images {
                let (Ok(k2), Ok(n2)) = (i64::try_from(&image.k), i64::try_from(&image.n)) else {
                    continue;
                };
                if let Some(other) = self.cells.get(&(k2, n2)) {
                    if other.distinguishable != cell.distinguishable {
                        return Err(ScanError::SymmetryViolation(k, n, k2, n2, name));
                    }
                }
            }
        }
        Ok(())
    }

    /// Grid restored from [`emit_csv`] output. Provenance is set to cache hit.
    pub fn from_csv(p: i64, q: i64, two_sided: bool, text: &str) -> Result<ScanGrid, ScanError> {
        let malformed = |line: usize, detail: String| ScanError::Malformed {
            what: "csv",
            line,
            detail,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header == CSV_HEADER => {}
            _ => return Err(malformed(1, "missing header".into())),
        }
        let mut cells = BTreeMap::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let [k, n, dist, kind, key] = fields[..] else {
                return Err(malformed(i + 1, format!("expected 5 fields: {line}")));
            };
            let k: i64 = k
                .parse()
                .map_err(|_| malformed(i + 1, format!("bad k {k:?}")))?;
            let n: i64 = n
                .parse()
                .map_err(|_| malformed(i + 1, format!("bad n {n:?}")))?;
            let cell = CellOutcome {
                distinguishable: parse_bool(dist).ok_or_else(|| malformed(i + 1, dist.into()))?,
                topograph_type: kind.parse().map_err(|_| malformed(i + 1, kind.into()))?,
                orbit_key: key.parse().map_err(|e| malformed(i + 1, e))?,
                provenance: Provenance::CacheHit,
            };
            cells.insert((k, n), cell);
        }
        let ks = cells.keys().map(|&(k, _)| k);
        let ns = cells.keys().map(|&(_, n)| n);
        let (Some(k_min), Some(k_max)) = (ks.clone().min(), ks.max()) else {
            return Err(ScanError::EmptyRange("csv has no rows"));
        };
        let (n_min, n_max) = (ns.clone().min().unwrap(), ns.max().unwrap());
        Ok(ScanGrid {
            p,
            q,
            k_min,
            k_max,
            n_min,
            n_max,
            two_sided,
            cells,
        })
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

fn mode_name(two_sided: bool) -> &'static str {
    if two_sided {
        "two-sided"
    } else {
        "one-sided"
    }
}

/// Orbit key to outcome, for one `(p, q)` and comparison mode.
///
/// Text form: a `#` header line naming the panel, then one
/// `orbit_key<TAB>distinguishable<TAB>type` record per line, sorted by key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCache {
    pub p: i64,
    pub q: i64,
    pub two_sided: bool,
    entries: BTreeMap<OrbitKey, (bool, TopographKind)>,
}

impl OrbitCache {
    pub fn new(p: i64, q: i64, two_sided: bool) -> Self {
        Self {
            p,
            q,
            two_sided,
            entries: BTreeMap::new(),
        }
    }

    fn header(&self) -> String {
        format!(
            "# orbit-cache p={} q={} mode={}",
            self.p,
            self.q,
            mode_name(self.two_sided)
        )
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &OrbitKey) -> Option<(bool, TopographKind)> {
        self.entries.get(key).copied()
    }

    pub fn insert(&mut self, key: OrbitKey, distinguishable: bool, kind: TopographKind) {
        self.entries.insert(key, (distinguishable, kind));
    }

    /// Adds every cell of a grid of the same panel and mode.
    pub fn absorb(&mut self, grid: &ScanGrid) -> Result<(), ScanError> {
        self.check_panel(grid.p, grid.q, grid.two_sided)?;
        for cell in grid.cells.values() {
            self.insert(
                cell.orbit_key.clone(),
                cell.distinguishable,
                cell.topograph_type,
            );
        }
        Ok(())
    }

    fn check_panel(&self, p: i64, q: i64, two_sided: bool) -> Result<(), ScanError> {
        let other = OrbitCache::new(p, q, two_sided);
        if other.header() != self.header() {
            return Err(ScanError::CacheMismatch {
                expected: other.header(),
                found: self.header(),
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for (key, (dist, kind)) in &self.entries {
            let _ = writeln!(out, "{key}\t{dist}\t{kind}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<OrbitCache, ScanError> {
        let malformed = |line: usize, detail: String| ScanError::Malformed {
            what: "cache",
            line,
            detail,
        };
        let mut lines = text.lines().enumerate();
        let header = lines
            .next()
            .map(|(_, h)| h)
            .ok_or_else(|| malformed(1, "empty file".into()))?;
        let fields: BTreeMap<&str, &str> = header
            .strip_prefix("# orbit-cache ")
            .ok_or_else(|| malformed(1, header.into()))?
            .split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect();
        let num = |name: &str| -> Result<i64, ScanError> {
            fields
                .get(name)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| malformed(1, format!("missing {name}")))
        };
        let two_sided = match fields.get("mode") {
            Some(&"one-sided") => false,
            Some(&"two-sided") => true,
            _ => return Err(malformed(1, "missing mode".into())),
        };
        let mut cache = OrbitCache::new(num("p")?, num("q")?, two_sided);
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            let [key, dist, kind] = parts[..] else {
                return Err(malformed(i + 1, line.into()));
            };
            let key: OrbitKey = key.parse().map_err(|e| malformed(i + 1, e))?;
            let dist = parse_bool(dist).ok_or_else(|| malformed(i + 1, dist.into()))?;
            let kind: TopographKind = kind.parse().map_err(|_| malformed(i + 1, kind.into()))?;
            cache.insert(key, dist, kind);
        }
        Ok(cache)
    }

    pub fn load(path: &Path) -> Result<OrbitCache, ScanError> {
        OrbitCache::parse(&fs::read_to_string(path)?)
    }

    /// Writes through a temporary file so an interrupted write keeps the old cache.
    pub fn save(&self, path: &Path) -> Result<(), ScanError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_text())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Computes one cell directly: `(distinguishable, kind)`.
pub fn compute_cell(
    params: &SeifertParams,
    two_sided: bool,
    k: i64,
    n: i64,
) -> Result<(bool, TopographKind), ScanError> {
    let inv = form_invariants(params).map_err(|source| ScanError::Cell { k, n, source })?;
    if inv.q0.kind() != inv.q1.kind() {
        return Err(ScanError::TypeMismatch {
            k,
            n,
            q0: inv.q0.kind().tag(),
            q1: inv.q1.kind().tag(),
        });
    }
    let dist = if two_sided {
        inv.oriented_pair_distinct()
    } else {
        inv.distinguishable()
    };
    Ok((dist, inv.q1.kind()))
}

fn validate_panel(p: i64, q: i64) -> Result<SeifertParams, ScanError> {
    let valid = p > 1 && q > 1 && p.gcd(&q) == 1;
    if !valid {
        return Err(ScanError::InvalidPanel { p, q });
    }
    SeifertParams::new(p, q, 0, 0).map_err(|_| ScanError::InvalidPanel { p, q })
}

/// Fills every cell of `k_range × n_range`.
///
/// Cells are grouped by orbit key; each orbit missing from `cache` is
/// computed once (or every cell, with memoization off) on a worker pool,
/// and results are merged into `cache` after each batch. The result does
/// not depend on the number of workers.
pub fn scan(
    p: i64,
    q: i64,
    k_range: RangeInclusive<i64>,
    n_range: RangeInclusive<i64>,
    options: &ScanOptions,
    cache: &mut OrbitCache,
) -> Result<ScanGrid, ScanError> {
    let base = validate_panel(p, q)?;
    if k_range.is_empty() {
        return Err(ScanError::EmptyRange("k"));
    }
    if n_range.is_empty() {
        return Err(ScanError::EmptyRange("n"));
    }
    cache.check_panel(p, q, options.two_sided)?;

    let mut keys: BTreeMap<(i64, i64), OrbitKey> = BTreeMap::new();
    for k in k_range.clone() {
        for n in n_range.clone() {
            keys.insert((k, n), orbit_key(&base.with_kn(k.into(), n.into())));
        }
    }

    // work items in (k, n) order; one representative per unseen orbit
    let mut work: Vec<((i64, i64), OrbitKey)> = Vec::new();
    if options.memoize {
        let mut claimed = std::collections::BTreeSet::new();
        for (&cell, key) in &keys {
            if cache.get(key).is_none() && claimed.insert(key.clone()) {
                work.push((cell, key.clone()));
            }
        }
    } else {
        work = keys.iter().map(|(&c, key)| (c, key.clone())).collect();
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))?;

    let mut direct: BTreeMap<(i64, i64), (bool, TopographKind)> = BTreeMap::new();
    for batch in work.chunks(options.batch_size.max(1)) {
        let results: Vec<Result<(bool, TopographKind), ScanError>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&((k, n), _)| {
                    compute_cell(&base.with_kn(k.into(), n.into()), options.two_sided, k, n)
                })
                .collect()
        });
        for (((k, n), key), result) in batch.iter().zip(results) {
            let (dist, kind) = result?;
            direct.insert((*k, *n), (dist, kind));
            cache.insert(key.clone(), dist, kind);
        }
        if let Some(path) = &options.checkpoint {
            cache.save(path)?;
        }
    }

    let mut cells = BTreeMap::new();
    for ((k, n), key) in keys {
        let (outcome, provenance) = match direct.get(&(k, n)) {
            Some(&v) => (v, Provenance::Computed),
            None => (
                cache.get(&key).expect("every orbit was computed or cached"),
                Provenance::CacheHit,
            ),
        };
        cells.insert(
            (k, n),
            CellOutcome {
                distinguishable: outcome.0,
                topograph_type: outcome.1,
                orbit_key: key,
                provenance,
            },
        );
    }

    let grid = ScanGrid {
        p,
        q,
        k_min: *k_range.start(),
        k_max: *k_range.end(),
        n_min: *n_range.start(),
        n_max: *n_range.end(),
        two_sided: options.two_sided,
        cells,
    };
    grid.audit_symmetry()?;
    Ok(grid)
}

/// Square panel `|k|, |n| <= size` with a fresh cache.
pub fn scan_square(
    p: i64,
    q: i64,
    size: i64,
    options: &ScanOptions,
) -> Result<ScanGrid, ScanError> {
    let mut cache = OrbitCache::new(p, q, options.two_sided);
    scan(p, q, -size..=size, -size..=size, options, &mut cache)
}

/// Cells in range where the one-sided and two-sided comparisons differ.
pub fn criteria_disagreements(grid: &ScanGrid) -> Result<Vec<(i64, i64)>, ScanError> {
    let base = validate_panel(grid.p, grid.q)?;
    let mut memo: BTreeMap<&OrbitKey, bool> = BTreeMap::new();
    let mut out = Vec::new();
    for (&(k, n), cell) in &grid.cells {
        let differ = match memo.get(&cell.orbit_key) {
            Some(&d) => d,
            None => {
                let inv = form_invariants(&base.with_kn(k.into(), n.into()))
                    .map_err(|source| ScanError::Cell { k, n, source })?;
                let d = inv.distinguishable() != inv.oriented_pair_distinct();
                memo.insert(&cell.orbit_key, d);
                d
            }
        };
        if differ {
            out.push((k, n));
        }
    }
    Ok(out)
}

/// Three-way split of a panel by the shape of the topographs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypePanel {
    /// Definite forms.
    Well,
    /// Indefinite forms that never take the value 0.
    River,
    /// Forms representing 0: lake, weir, lake pair or zero.
    Factorizable,
}

impl TypePanel {
    pub fn of(kind: TopographKind) -> TypePanel {
        match kind {
            TopographKind::Well => TypePanel::Well,
            TopographKind::River => TypePanel::River,
            _ => TypePanel::Factorizable,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TypePanel::Well => "well",
            TypePanel::River => "river",
            TypePanel::Factorizable => "factorizable",
        }
    }
}

/// Partial grids, one per [`TypePanel`], sharing the bounds of `grid`.
pub fn split_by_type(grid: &ScanGrid) -> Result<BTreeMap<TypePanel, ScanGrid>, ScanError> {
    grid.check_complete()?;
    let mut out: BTreeMap<TypePanel, ScanGrid> =
        [TypePanel::Well, TypePanel::River, TypePanel::Factorizable]
            .into_iter()
            .map(|panel| {
                (
                    panel,
                    ScanGrid {
                        cells: BTreeMap::new(),
                        ..grid.clone()
                    },
                )
            })
            .collect();
    for (&kn, cell) in &grid.cells {
        out.get_mut(&TypePanel::of(cell.topograph_type))
            .expect("all panels present")
            .cells
            .insert(kn, cell.clone());
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "k,n,distinguishable,type,orbit_key";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridFormat {
    Csv,
    /// Binary portable pixmap (P6), one pixel per cell.
    Ppm,
    /// Plain portable pixmap (P3).
    PpmAscii,
    Ascii,
    Svg,
}

impl std::str::FromStr for GridFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(GridFormat::Csv),
            "ppm" => Ok(GridFormat::Ppm),
            "ppm-ascii" => Ok(GridFormat::PpmAscii),
            "ascii" => Ok(GridFormat::Ascii),
            "svg" => Ok(GridFormat::Svg),
            other => Err(format!("unknown grid format {other:?}")),
        }
    }
}

/// Non-isomorphic forms.
pub const ORANGE: [u8; 3] = [0xF2, 0x8E, 0x2B];
/// Isomorphic forms.
pub const BLUE: [u8; 3] = [0x3D, 0x6F, 0xB6];
/// Cell absent from a partial grid.
pub const BLANK: [u8; 3] = [0xFF, 0xFF, 0xFF];

/// Renders a completed grid. Rows run from `n_max` down to `n_min`,
/// columns from `k_min` to `k_max`.
pub fn emit_grid(grid: &ScanGrid, format: GridFormat) -> Result<Vec<u8>, ScanError> {
    grid.check_complete()?;
    Ok(render(grid, format))
}

/// Like [`emit_grid`], but missing cells are drawn blank (for split panels).
pub fn emit_panel(grid: &ScanGrid, format: GridFormat) -> Vec<u8> {
    render(grid, format)
}

fn color(cell: Option<&CellOutcome>) -> [u8; 3] {
    match cell {
        Some(c) if c.distinguishable => ORANGE,
        Some(_) => BLUE,
        None => BLANK,
    }
}

fn rows(grid: &ScanGrid) -> impl Iterator<Item = (i64, Vec<Option<&CellOutcome>>)> {
    (grid.n_min..=grid.n_max).rev().map(move |n| {
        let row = (grid.k_min..=grid.k_max).map(|k| grid.get(k, n)).collect();
        (n, row)
    })
}

fn render(grid: &ScanGrid, format: GridFormat) -> Vec<u8> {
    match format {
        GridFormat::Csv => emit_csv(grid).into_bytes(),
        GridFormat::Ppm => {
            let mut out = format!("P6\n{} {}\n255\n", grid.width(), grid.height()).into_bytes();
            for (_, row) in rows(grid) {
                for cell in row {
                    out.extend_from_slice(&color(cell));
                }
            }
            out
        }
        GridFormat::PpmAscii => {
            let mut out = format!("P3\n{} {}\n255\n", grid.width(), grid.height());
            for (_, row) in rows(grid) {
                let line: Vec<String> = row
                    .into_iter()
                    .map(|c| {
                        let [r, g, b] = color(c);
                        format!("{r} {g} {b}")
                    })
                    .collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
        GridFormat::Ascii => {
            let mut out = String::new();
            for (_, row) in rows(grid) {
                for cell in row {
                    out.push(match cell {
                        Some(c) if c.distinguishable => '#',
                        Some(_) => '.',
                        None => ' ',
                    });
                }
                out.push('\n');
            }
            out.into_bytes()
        }
        GridFormat::Svg => emit_svg(grid).into_bytes(),
    }
}

fn emit_csv(grid: &ScanGrid) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (&(k, n), cell) in &grid.cells {
        let _ = writeln!(
            out,
            "{k},{n},{},{},{}",
            cell.distinguishable, cell.topograph_type, cell.orbit_key
        );
    }
    out
}

const SVG_CELL: usize = 8;

fn emit_svg(grid: &ScanGrid) -> String {
    let (w, h) = (grid.width() * SVG_CELL, grid.height() * SVG_CELL);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">"
    );
    let _ = writeln!(
        out,
        "<title>p={} q={} k=[{},{}] n=[{},{}] {}</title>",
        grid.p,
        grid.q,
        grid.k_min,
        grid.k_max,
        grid.n_min,
        grid.n_max,
        mode_name(grid.two_sided)
    );
    let _ = writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>");
    for (row_index, (n, row)) in rows(grid).enumerate() {
        for (col, cell) in row.into_iter().enumerate() {
            let Some(c) = cell else { continue };
            let [r, g, b] = color(Some(c));
            let k = grid.k_min + col as i64;
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{SVG_CELL}\" height=\"{SVG_CELL}\" fill=\"#{r:02x}{g:02x}{b:02x}\"><title>k={k} n={n} {}</title></rect>",
                col * SVG_CELL,
                row_index * SVG_CELL,
                c.topograph_type
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Lattice points `(k, n)` of the parabola `qn = k(pk - 1)` inside the grid.
pub fn parabola_points(grid: &ScanGrid) -> Vec<(i64, i64)> {
    let (p, q) = (BigInt::from(grid.p), BigInt::from(grid.q));
    (grid.k_min..=grid.k_max)
        .filter_map(|k| {
            let kb = BigInt::from(k);
            let num = &kb * (&p * &kb - BigInt::one());
            let (n, rem) = num.div_rem(&q);
            let n = i64::try_from(&n).ok()?;
            (rem == BigInt::from(0) && grid.contains(k, n)).then_some((k, n))
        })
        .collect()
}
