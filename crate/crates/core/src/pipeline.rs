//! Recipes for NR*DSTS(6x + 1), the runner that executes them against a
//! [`Catalog`], and the file-level verification and listing helpers used by
//! the command line.
//!
//! A recipe file is a sequence of blank-line separated blocks of `key = value`
//! lines; `#` starts a comment. Every block has `x` (a value or an inclusive
//! range `a-b`) and `construction`; the remaining keys depend on the
//! construction:
//!
//! | construction   | keys                                          |
//! |----------------|-----------------------------------------------|
//! | `frame-fill`   | `frame` (group type)                          |
//! | `inflate-fill` | `frame` (uniform type), `n`                   |
//! | `truncation`   | `variant`, `n`, `w`, `y`, `sum`, `exclude`    |
//! | `gdd-data`     | `gdd` (group type)                            |
//!
//! `literature`, `cyclotomic`, `halfset`, `multiplier`, `pbd` and `none` take
//! no parameters.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;

use crate::catalog::Catalog;
use crate::cyclotomic::{base_rows, build_cyclotomic, field_table, BaseRow, CyclotomicSetup};
use crate::design::io::DesignFile;
use crate::design::{
    is_duplicated_sts, is_repeated_system, verify_bibd, verify_near_resolution, verify_nr_star, verify_resolution,
    verify_self_orthogonal, Design, ResolutionClasses, ResolutionKind,
};
use crate::frames::{fill_frame, verify_frame, Frame};
use crate::gdd::{verify_gdd, Gdd, GroupType};
use crate::known::build_own;
use crate::latin::{mols_of_order, td_from_mols, truncate_td, Truncation};
use crate::recursions::{missing_for_gdd, nrdsts_from_gdd, nrdsts_from_pbd, nrdsts_inflate_fill};
use crate::report::VerificationReport;
use crate::{Error, Result};

/// Recipes for `3 <= x <= 52`.
pub const SMALL_RECIPES: &str = include_str!("../recipes/small.recipe");
/// Recipes for `53 <= x <= 369`; ranges overlap.
pub const LARGE_RECIPES: &str = include_str!("../recipes/large.recipe");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// Small designs supplied as catalog data files.
    Literature,
    Cyclotomic,
    Halfset,
    Multiplier,
    /// Fill a catalog frame; hole `G_i` takes an NR*DSTS(|G_i| + 1).
    FrameFill { frame: GroupType },
    /// Inflate a uniform catalog frame by three MOLS of order `n`, then fill.
    InflateFill { frame: GroupType, n: u32 },
    /// Truncate a transversal design to a GDD, weight it by 6 and fill.
    Truncation(TruncationRange),
    /// Delete a point from a catalog PBD(x + 1, {7, 8, 9}).
    Pbd,
    /// Weight a catalog GDD of the given type by 6 and fill.
    GddData { gdd: GroupType },
    /// No construction is known.
    Unknown,
}

/// Parameter ranges of a truncation row. `x` is determined by `variant`:
/// 1: `7n + w`; 2: `7n + w + y`; 3: `8(n - 1) + w + y`; 4: `133 + w + y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationRange {
    pub variant: u8,
    pub n: u32,
    pub w: Vec<u32>,
    pub y: Vec<u32>,
    /// Allowed values of `w + y`.
    pub sum: Option<RangeInclusive<u32>>,
    /// Values neither `w` nor `y` may take.
    pub exclude: Vec<u32>,
}

impl TruncationRange {
    fn x_of(&self, w: u32, y: u32) -> u32 {
        match self.variant {
            1 => 7 * self.n + w,
            2 => 7 * self.n + w + y,
            3 => 8 * (self.n - 1) + w + y,
            _ => 133 + w + y,
        }
    }

    /// All admissible `(w, y)` giving `x`, `w` ascending.
    pub fn parameters_for(&self, x: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for &w in &self.w {
            for &y in &self.y {
                let ok = self.x_of(w, y) == x
                    && !self.exclude.contains(&w)
                    && !self.exclude.contains(&y)
                    && self.sum.as_ref().is_none_or(|s| s.contains(&(w + y)));
                if ok {
                    out.push((w, y));
                }
            }
        }
        out
    }

    fn truncation(&self, w: u32, y: u32) -> Truncation {
        match self.variant {
            1 => Truncation::One { w },
            2 => Truncation::Two { w, y },
            3 => Truncation::Three { w, y },
            _ => Truncation::Four { w, y },
        }
    }

    /// The TD order and block size the variant truncates.
    fn td_parameters(&self) -> (u32, u32) {
        match self.variant {
            1 => (self.n, 8),
            2 => (self.n, 9),
            3 => (self.n, 10),
            _ => (19, 20),
        }
    }

    /// Group sizes of the truncated GDD, zero-size groups dropped.
    fn group_sizes(&self, w: u32, y: u32) -> Vec<u32> {
        let mut s = match self.variant {
            1 => vec![self.n; 7],
            2 => vec![self.n; 7],
            3 => vec![self.n - 1; 8],
            _ => [vec![7; (19 - w) as usize], vec![8; w as usize]].concat(),
        };
        if self.variant != 4 {
            s.push(w);
        }
        if self.variant != 1 {
            s.push(y);
        }
        s.retain(|&g| g > 0);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recipe {
    pub x: RangeInclusive<u32>,
    pub construction: Construction,
}

impl Recipe {
    pub fn applies_to(&self, x: u32) -> bool {
        if !self.x.contains(&x) {
            return false;
        }
        match &self.construction {
            Construction::Truncation(t) => !t.parameters_for(x).is_empty(),
            _ => true,
        }
    }

    pub fn name(&self) -> String {
        match &self.construction {
            Construction::Literature => "literature".into(),
            Construction::Cyclotomic => "cyclotomic".into(),
            Construction::Halfset => "halfset".into(),
            Construction::Multiplier => "multiplier".into(),
            Construction::FrameFill { frame } => format!("frame-fill {frame}"),
            Construction::InflateFill { frame, n } => format!("inflate-fill {frame} n={n}"),
            Construction::Truncation(t) if t.variant == 4 => {
                format!("truncation {} TD(20,19)", t.variant)
            }
            Construction::Truncation(t) => {
                let (n, k) = t.td_parameters();
                format!("truncation {} TD({k},{n})", t.variant)
            }
            Construction::Pbd => "pbd".into(),
            Construction::GddData { gdd } => format!("gdd-data {gdd}"),
            Construction::Unknown => "none".into(),
        }
    }
}

fn parse_range(line: usize, s: &str) -> Result<RangeInclusive<u32>> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| Error::parse(line, format!("bad number `{t}`")))
    };
    match s.split_once('-') {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(Error::parse(line, format!("empty range `{s}`")));
            }
            Ok(a..=b)
        }
        None => {
            let a = num(s)?;
            Ok(a..=a)
        }
    }
}

/// A comma-separated list of values and ranges, e.g. `0,3-23`.
fn parse_set(line: usize, s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        out.extend(parse_range(line, part)?);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parses a recipe file.
pub fn parse_recipes(text: &str) -> Result<Vec<Recipe>> {
    let mut recipes = Vec::new();
    let mut block: Vec<(usize, String, String)> = Vec::new();
    let lines = text.lines().map(Some).chain(std::iter::once(None));
    for (i, line) in lines.enumerate() {
        let content = line.map(|l| l.split('#').next().unwrap_or("").trim());
        match content {
            Some("") if line.is_some_and(|l| l.trim_start().starts_with('#')) => {}
            Some("") | None => {
                if !block.is_empty() {
                    recipes.push(recipe_from_block(&block)?);
                    block.clear();
                }
            }
            Some(c) => {
                let (k, v) = c
                    .split_once('=')
                    .ok_or_else(|| Error::parse(i + 1, format!("expected `key = value`, got `{c}`")))?;
                let k = k.trim().to_string();
                if block.iter().any(|(_, bk, _)| *bk == k) {
                    return Err(Error::parse(i + 1, format!("duplicate key `{k}`")));
                }
                block.push((i + 1, k, v.trim().to_string()));
            }
        }
    }
    Ok(recipes)
}

fn recipe_from_block(block: &[(usize, String, String)]) -> Result<Recipe> {
    let first = block[0].0;
    let get = |k: &str| block.iter().find(|(_, bk, _)| bk == k).map(|(l, _, v)| (*l, v.as_str()));
    let need = |k: &str| get(k).ok_or_else(|| Error::parse(first, format!("missing key `{k}`")));
    let number = |k: &str| -> Result<u32> {
        let (l, v) = need(k)?;
        v.parse().map_err(|_| Error::parse(l, format!("bad `{k}` value `{v}`")))
    };
    let set_or = |k: &str, default: u32| -> Result<Vec<u32>> {
        get(k).map_or(Ok(vec![default]), |(l, v)| parse_set(l, v))
    };
    let group_type = |k: &str| -> Result<GroupType> {
        let (l, v) = need(k)?;
        GroupType::parse(v).map_err(|_| Error::parse(l, format!("bad group type `{v}`")))
    };
    let (xl, xv) = need("x")?;
    let x = parse_range(xl, xv)?;
    let (cl, cv) = need("construction")?;
    let construction = match cv {
        "literature" => Construction::Literature,
        "cyclotomic" => Construction::Cyclotomic,
        "halfset" => Construction::Halfset,
        "multiplier" => Construction::Multiplier,
        "frame-fill" => Construction::FrameFill {
            frame: group_type("frame")?,
        },
        "inflate-fill" => Construction::InflateFill {
            frame: group_type("frame")?,
            n: number("n")?,
        },
        "truncation" => {
            let variant = number("variant")?;
            if !(1..=4).contains(&variant) {
                return Err(Error::parse(cl, format!("unknown truncation variant {variant}")));
            }
            let n = if variant == 4 { 19 } else { number("n")? };
            let exclude = match get("exclude") {
                None => Vec::new(),
                Some((l, v)) => parse_set(l, v)?,
            };
            Construction::Truncation(TruncationRange {
                variant: variant as u8,
                n,
                w: set_or("w", 0)?,
                y: set_or("y", 0)?,
                sum: get("sum").map(|(l, v)| parse_range(l, v)).transpose()?,
                exclude,
            })
        }
        "pbd" => Construction::Pbd,
        "gdd-data" => Construction::GddData { gdd: group_type("gdd")? },
        "none" => Construction::Unknown,
        other => return Err(Error::parse(cl, format!("unknown construction `{other}`"))),
    };
    Ok(Recipe { x, construction })
}

/// The built-in recipes, small orders first.
pub fn builtin_recipes() -> Vec<Recipe> {
    let mut r = parse_recipes(SMALL_RECIPES).expect("built-in recipes parse");
    r.extend(parse_recipes(LARGE_RECIPES).expect("built-in recipes parse"));
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOutcome {
    /// Built and verified; the number of near-resolution classes.
    Constructed { classes: usize },
    /// Ingredients are missing; each entry names one.
    Skipped(Vec<String>),
    Failed(String),
}

impl RowOutcome {
    pub fn status(&self) -> &'static str {
        match self {
            RowOutcome::Constructed { .. } => "constructed",
            RowOutcome::Skipped(_) => "skipped",
            RowOutcome::Failed(_) => "failed",
        }
    }
}

impl fmt::Display for RowOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowOutcome::Constructed { classes } => write!(f, "constructed ({classes} classes)"),
            RowOutcome::Skipped(m) => write!(f, "skipped (missing {})", m.join(", ")),
            RowOutcome::Failed(e) => write!(f, "failed ({})", e.lines().next().unwrap_or("")),
        }
    }
}

/// Executes `recipe` for one `x`. The design is returned only when it is a
/// verified NR*DSTS(6x + 1).
pub fn run_recipe(recipe: &Recipe, x: u32, catalog: &mut Catalog) -> (RowOutcome, Option<Built>) {
    let v = 6 * x + 1;
    match execute(recipe, x, catalog) {
        Ok(Ok((d, rc))) => {
            if d.v() != v {
                return (RowOutcome::Failed(format!("built {} points, expected {v}", d.v())), None);
            }
            let report = verify_nr_star(&d, &rc);
            if report.passed() {
                (RowOutcome::Constructed { classes: rc.len() }, Some((d, rc)))
            } else {
                (RowOutcome::Failed(format!("output fails verification:\n{report}")), None)
            }
        }
        Ok(Err(missing)) => (RowOutcome::Skipped(missing), None),
        Err(Error::MissingIngredient(m)) => (RowOutcome::Skipped(vec![m]), None),
        Err(e) => (RowOutcome::Failed(e.to_string()), None),
    }
}

pub type Built = (Design, ResolutionClasses);

/// `Ok(Err(missing))` when ingredients are absent.
fn execute(recipe: &Recipe, x: u32, catalog: &mut Catalog) -> Result<std::result::Result<Built, Vec<String>>> {
    let v = 6 * x + 1;
    let nrdsts_name = |v: u32| format!("NR*DSTS({v})");
    match &recipe.construction {
        Construction::Literature => Ok(catalog.nrdsts(v).ok_or_else(|| vec![nrdsts_name(v)])),
        Construction::Cyclotomic | Construction::Halfset | Construction::Multiplier => match build_own(v) {
            Some(r) => r.map(Ok),
            None => Err(Error::Precondition(format!("no {} construction for {v}", recipe.name()))),
        },
        Construction::Unknown => Ok(Err(vec!["a construction".into()])),
        Construction::FrameFill { frame } => {
            let mut missing = Vec::new();
            if catalog.frame(frame).is_none() {
                missing.push(format!("frame {frame}"));
            }
            for s in frame.0.keys() {
                if !catalog.has_nrdsts(s + 1) {
                    missing.push(nrdsts_name(s + 1));
                }
            }
            if !missing.is_empty() {
                return Ok(Err(missing));
            }
            let f = catalog.frame(frame).expect("checked").clone();
            let mut fillers = Vec::new();
            for g in f.groups() {
                let w = g.len() as u32 + 1;
                fillers.push(catalog.nrdsts(w).ok_or_else(|| Error::MissingIngredient(nrdsts_name(w)))?);
            }
            fill_frame(&f, &fillers).map(Ok)
        }
        Construction::InflateFill { frame, n } => {
            let [t] = frame.0.keys().copied().collect::<Vec<_>>()[..] else {
                return Err(Error::Precondition(format!("frame type {frame} is not uniform")));
            };
            let mut missing = Vec::new();
            if catalog.frame(frame).is_none() {
                missing.push(format!("frame {frame}"));
            }
            if !catalog.has_nrdsts(t * n + 1) {
                missing.push(nrdsts_name(t * n + 1));
            }
            if !missing.is_empty() {
                return Ok(Err(missing));
            }
            let mols = mols_of_order(*n, 3)?;
            let f = catalog.frame(frame).expect("checked").clone();
            let filler = catalog
                .nrdsts(t * n + 1)
                .ok_or_else(|| Error::MissingIngredient(nrdsts_name(t * n + 1)))?;
            nrdsts_inflate_fill(&f, &mols, &filler).map(Ok)
        }
        Construction::Truncation(t) => {
            let params = t.parameters_for(x);
            // Prefer parameters whose fillers are all available.
            let &(w, y) = params
                .iter()
                .find(|&&(w, y)| t.group_sizes(w, y).iter().all(|&s| catalog.has_nrdsts(6 * s + 1)))
                .or(params.first())
                .ok_or_else(|| Error::Precondition(format!("{} does not cover x = {x}", recipe.name())))?;
            let (n, k) = t.td_parameters();
            let td = td_from_mols(&mols_of_order(n, k - 2)?)?;
            let g = truncate_td(&td, t.truncation(w, y))?;
            gdd_route(&g, catalog)
        }
        Construction::Pbd => match catalog.pbd(x + 1, &[7, 8, 9]).cloned() {
            None => Ok(Err(vec![format!("PBD({}, {{7,8,9}})", x + 1)])),
            Some(pbd) => {
                let g = crate::gdd::pbd_delete_point(&pbd, pbd.v() - 1)?;
                let missing = missing_for_gdd(&g, catalog);
                if !missing.is_empty() {
                    return Ok(Err(missing));
                }
                nrdsts_from_pbd(&pbd, catalog).map(Ok)
            }
        },
        Construction::GddData { gdd } => match catalog.gdd_of_type(gdd).cloned() {
            None => Ok(Err(vec![format!("GDD of type {gdd}")])),
            Some(g) => gdd_route(&g, catalog),
        },
    }
}

fn gdd_route(g: &Gdd, catalog: &mut Catalog) -> Result<std::result::Result<Built, Vec<String>>> {
    let missing = missing_for_gdd(g, catalog);
    if !missing.is_empty() {
        return Ok(Err(missing));
    }
    nrdsts_from_gdd(g, catalog).map(Ok)
}

/// One `x` of the reproduction run.
#[derive(Debug, Clone)]
pub struct TableEntry {
    pub x: u32,
    /// Names of every recipe covering `x`, in file order.
    pub applicable: Vec<String>,
    /// The recipe that was executed: the first applicable one.
    pub used: String,
    pub outcome: RowOutcome,
}

impl fmt::Display for TableEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={} v={} [{}] {}", self.x, 6 * self.x + 1, self.used, self.outcome)?;
        if self.applicable.len() > 1 {
            write!(f, "; also: {}", self.applicable[1..].join(", "))?;
        }
        Ok(())
    }
}

/// Runs every `x` covered by `recipes`, using the first applicable recipe.
/// `sink` sees each constructed design.
pub fn reproduce(
    recipes: &[Recipe],
    catalog: &mut Catalog,
    mut sink: impl FnMut(u32, &Design, &ResolutionClasses) -> Result<()>,
) -> Result<Vec<TableEntry>> {
    let lo = recipes.iter().map(|r| *r.x.start()).min().unwrap_or(1);
    let hi = recipes.iter().map(|r| *r.x.end()).max().unwrap_or(0);
    let mut out = Vec::new();
    for x in lo..=hi {
        let covering: Vec<&Recipe> = recipes.iter().filter(|r| r.applies_to(x)).collect();
        let Some(first) = covering.first() else {
            out.push(TableEntry {
                x,
                applicable: Vec::new(),
                used: "-".into(),
                outcome: RowOutcome::Skipped(vec!["a recipe covering this x".into()]),
            });
            continue;
        };
        let (outcome, built) = run_recipe(first, x, catalog);
        if let Some((d, rc)) = built {
            sink(x, &d, &rc)?;
        }
        out.push(TableEntry {
            x,
            applicable: covering.iter().map(|r| r.name()).collect(),
            used: first.name(),
            outcome,
        });
    }
    Ok(out)
}

/// [`reproduce`] over the built-in recipes.
pub fn reproduce_tables(
    catalog: &mut Catalog,
    sink: impl FnMut(u32, &Design, &ResolutionClasses) -> Result<()>,
) -> Result<Vec<TableEntry>> {
    reproduce(&builtin_recipes(), catalog, sink)
}

/// Per-row result of rebuilding the field constructions.
#[derive(Debug, Clone)]
pub struct FieldRowResult {
    pub x: u32,
    pub q: u32,
    pub report: VerificationReport,
    /// Canonical design file of the output, empty on a build error.
    pub file: String,
}

impl FieldRowResult {
    pub fn passed(&self) -> bool {
        self.report.passed() && !self.file.is_empty()
    }
}

/// Rebuilds every field-construction row and runs the three verifiers.
pub fn reproduce_field_table() -> Vec<FieldRowResult> {
    field_table()
        .into_iter()
        .map(|row| match build_cyclotomic(row.q, Some(row.omega), &row.quads) {
            Ok((d, rc)) => {
                let mut report = VerificationReport::new();
                report.extend_prefixed("dsts", is_duplicated_sts(&d));
                report.extend_prefixed("near_resolution", verify_near_resolution(&d, &rc));
                report.extend_prefixed("self_orthogonal", verify_self_orthogonal(&d, &rc));
                let file = DesignFile::from_design(&d, Some(&rc))
                    .with_self_orthogonal(true)
                    .to_text();
                FieldRowResult {
                    x: row.x,
                    q: row.q,
                    report,
                    file,
                }
            }
            Err(e) => {
                let mut report = VerificationReport::new();
                report.fail("build", crate::report::Witness::Text(e.to_string()), "construction failed");
                FieldRowResult {
                    x: row.x,
                    q: row.q,
                    report,
                    file: String::new(),
                }
            }
        })
        .collect()
}

/// Base-class rows of the field construction for `q`, in the order `H` is
/// enumerated.
pub fn emit_base_class_listing(q: u32) -> Result<Vec<BaseRow>> {
    let row = field_table()
        .into_iter()
        .find(|r| r.q == q)
        .ok_or_else(|| Error::Precondition(format!("no listed field construction for q = {q}")))?;
    let setup = CyclotomicSetup::new(q, Some(row.omega))?;
    Ok(base_rows(&setup, &row.quads))
}

/// What a verified file turned out to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Design,
    Resolution,
    Gdd,
    Frame,
}

/// Parses `path` and runs every oracle its contents call for: frames get
/// [`verify_frame`], files with groups get [`verify_gdd`], designs get
/// [`verify_bibd`] plus the STS or duplicated-STS test for `k = 3`, and a
/// classes section adds the resolution checks (and self-orthogonality when
/// the file claims it).
pub fn verify_file(path: impl AsRef<Path>) -> Result<(FileKind, VerificationReport)> {
    let text = std::fs::read_to_string(path)?;
    verify_text(&text)
}

pub fn verify_text(text: &str) -> Result<(FileKind, VerificationReport)> {
    let head = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if head.starts_with("frame") {
        let f = Frame::parse(text)?;
        return Ok((FileKind::Frame, verify_frame(&f)));
    }
    let file = DesignFile::parse(text)?;
    if file.groups.is_some() {
        let g = Gdd::from_file(&file)?;
        return Ok((FileKind::Gdd, verify_gdd(&g)));
    }
    let d = file.to_design()?;
    let mut report = VerificationReport::new();
    report.extend_prefixed("bibd", verify_bibd(&d));
    if d.k() == 3 && d.lambda() == 1 {
        report.extend_prefixed("sts", is_repeated_system(&d, 1));
    } else if d.k() == 3 && d.lambda() == 2 {
        report.extend_prefixed("dsts", is_duplicated_sts(&d));
    }
    let Some(rc) = &file.classes else {
        return Ok((FileKind::Design, report));
    };
    match rc.kind {
        ResolutionKind::Resolvable => report.extend_prefixed("resolution", verify_resolution(&d, rc)),
        ResolutionKind::NearResolvable => report.extend_prefixed("near_resolution", verify_near_resolution(&d, rc)),
    }
    if file.self_orthogonal {
        report.extend_prefixed("self_orthogonal", verify_self_orthogonal(&d, rc));
    }
    Ok((FileKind::Resolution, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Witness;

    #[test]
    fn builtin_recipes_cover_every_x_but_101() {
        // 101 = 8 * 12 + 5 needs w + y = 5 in the n = 13 row, below its
        // lower bound of 3 + 3, and exceeds the n = 11 row's maximum of 100.
        let recipes = builtin_recipes();
        let uncovered: Vec<u32> = (3..=369).filter(|&x| !recipes.iter().any(|r| r.applies_to(x))).collect();
        assert_eq!(uncovered, vec![101]);
    }

    #[test]
    fn truncation_parameters() {
        let recipes = builtin_recipes();
        let r = recipes.iter().find(|r| r.applies_to(59)).unwrap();
        let Construction::Truncation(t) = &r.construction else { panic!() };
        assert_eq!(t.parameters_for(59), vec![(0, 3)]);
        // The n = 23 row skips w or y in {19, 22}.
        let r = recipes.iter().find(|r| r.x == (164..=205)).unwrap();
        let Construction::Truncation(t) = &r.construction else { panic!() };
        assert!(t.parameters_for(205).iter().all(|&(w, y)| w != 22 && y != 19));
        assert_eq!(t.parameters_for(205), vec![(21, 23), (23, 21)]);
        assert_eq!(t.parameters_for(164), vec![(0, 3), (3, 0)]);
    }

    #[test]
    fn overlapping_rows_are_all_recorded() {
        let recipes = parse_recipes(LARGE_RECIPES).unwrap();
        let mut cat = Catalog::new();
        let entries = reproduce(&recipes[..5], &mut cat, |_, _, _| Ok(())).unwrap();
        let e = entries.iter().find(|e| e.x == 57).unwrap();
        assert_eq!(e.used, "pbd");
        assert!(matches!(&e.outcome, RowOutcome::Skipped(m) if m[0].contains("PBD(58")));
        let e = entries.iter().find(|e| e.x == 53).unwrap();
        assert!(matches!(&e.outcome, RowOutcome::Skipped(m) if m.contains(&"frame 6^7".to_string())));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_recipes("x = 3\nconstruction = nonsense\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_recipes("x = 3\n\nconstruction = none\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = parse_recipes("x = 9-4\nconstruction = none\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn cyclotomic_row_constructs() {
        let r = parse_recipes("x = 17\nconstruction = cyclotomic\n").unwrap();
        let (o, built) = run_recipe(&r[0], 17, &mut Catalog::new());
        assert_eq!(o, RowOutcome::Constructed { classes: 103 });
        assert_eq!(built.unwrap().0.v(), 103);
    }

    #[test]
    fn listing_first_row() {
        let rows = emit_base_class_listing(103).unwrap();
        assert_eq!(rows.len(), 17);
        let r = rows[0];
        assert_eq!((r.block, r.shifted, r.translate, r.negated), ([1, 4, 6], [21, 24, 26], 20, 83));
    }

    #[test]
    fn verify_text_detects_swapped_class() {
        let (d, mut rc) = build_own(19).unwrap().unwrap();
        let text = DesignFile::from_design(&d, Some(&rc)).with_self_orthogonal(true).to_text();
        let (kind, report) = verify_text(&text).unwrap();
        assert_eq!(kind, FileKind::Resolution);
        assert!(report.passed(), "{report}");
        // Reassign the twins of class a's blocks to class b: every block of
        // a now also sits in b.
        let cls = rc.class_of_labels(d.num_blocks());
        let a = 0;
        let b = (1..rc.len()).find(|&b| rc.classes[a].iter().all(|&l| cls[twin(&d, l)] != Some(b))).unwrap();
        let twins: Vec<usize> = rc.classes[a].iter().map(|&l| twin(&d, l)).collect();
        for c in rc.classes.iter_mut() {
            c.retain(|l| !twins.contains(l));
        }
        rc.classes[b] = twins;
        let text = DesignFile::from_design(&d, Some(&rc)).with_self_orthogonal(true).to_text();
        let (_, report) = verify_text(&text).unwrap();
        let check = report.check("self_orthogonal.class_pair_intersection").unwrap();
        assert!(!check.passed);
        assert_eq!(check.witness, Some(Witness::Classes(a, b)));
    }

    /// The other label with the same block contents.
    fn twin(d: &Design, l: usize) -> usize {
        (0..d.num_blocks()).find(|&m| m != l && d.block(m) == d.block(l)).unwrap()
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let (d, rc) = build_own(19).unwrap().unwrap();
        let text = DesignFile::from_design(&d, Some(&rc)).to_text();
        let cut: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(verify_text(&cut), Err(Error::Parse { .. })));
    }
}
