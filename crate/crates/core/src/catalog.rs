//! Ingredient store for the recursive constructions.
//!
//! A catalog directory holds `*.frame` files (frame format), `*.design` files
//! (design format with a near-resolvable class section) and `*.gdd` files
//! (design format with a groups section, PBDs included). Every object is
//! verified when it enters the catalog.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::Path;

use crate::design::io::DesignFile;
use crate::design::{verify_nr_star, Design, ResolutionClasses};
use crate::frames::{verify_frame, Frame};
use crate::gdd::{verify_gdd, Gdd, GroupType};
use crate::known::build_own;
use crate::{Error, Result};

#[derive(Debug, Default, Clone)]
pub struct Catalog {
    frames: BTreeMap<GroupType, Frame>,
    designs: BTreeMap<u32, (Design, ResolutionClasses)>,
    gdds: Vec<Gdd>,
    /// Self-built designs, cached; `None` records a failed build.
    own: BTreeMap<u32, Option<(Design, ResolutionClasses)>>,
}

impl Catalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads every recognized file in `dir`; unknown extensions are ignored.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let mut cat = Self::new();
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.sort();
        for p in paths {
            let ext = p.extension().and_then(|e| e.to_str()).unwrap_or("");
            let tag = |e: Error| Error::Precondition(format!("{}: {e}", p.display()));
            match ext {
                "frame" => cat.add_frame(Frame::read(&p).map_err(tag)?).map_err(tag)?,
                "design" => {
                    let f = DesignFile::read(&p).map_err(tag)?;
                    let d = f.to_design().map_err(tag)?;
                    let rc = f
                        .classes
                        .ok_or_else(|| tag(Error::InvalidResolution("no classes section".into())))?;
                    cat.add_design(d, rc).map_err(tag)?;
                }
                "gdd" => cat.add_gdd(Gdd::from_file(&DesignFile::read(&p).map_err(tag)?).map_err(tag)?).map_err(tag)?,
                _ => {}
            }
        }
        Ok(cat)
    }

    pub fn add_frame(&mut self, f: Frame) -> Result<()> {
        verify_frame(&f).into_result("catalog frame")?;
        self.frames.entry(f.frame_type()).or_insert(f);
        Ok(())
    }

    pub fn add_design(&mut self, d: Design, rc: ResolutionClasses) -> Result<()> {
        verify_nr_star(&d, &rc).into_result("catalog design")?;
        self.designs.entry(d.v()).or_insert((d, rc));
        Ok(())
    }

    pub fn add_gdd(&mut self, g: Gdd) -> Result<()> {
        verify_gdd(&g).into_result("catalog GDD")?;
        self.gdds.push(g);
        Ok(())
    }

    pub fn frame(&self, ty: &GroupType) -> Option<&Frame> {
        self.frames.get(ty)
    }

    pub fn frames(&self) -> impl Iterator<Item = &Frame> {
        self.frames.values()
    }

    /// A PBD on `v` points with block sizes drawn from `sizes`.
    pub fn pbd(&self, v: u32, sizes: &[u32]) -> Option<&Gdd> {
        self.gdds.iter().find(|g| {
            g.v() == v && g.groups().iter().all(|x| x.len() == 1) && g.block_sizes().iter().all(|k| sizes.contains(k))
        })
    }

    pub fn gdd_of_type(&self, ty: &GroupType) -> Option<&Gdd> {
        self.gdds.iter().find(|g| &g.group_type() == ty)
    }

    /// Whether an NR*DSTS(v) can be supplied. Self-built candidates are
    /// built (and cached) to find out.
    pub fn has_nrdsts(&mut self, v: u32) -> bool {
        self.build_cached(v);
        matches!(self.own.get(&v), Some(Some(_))) || self.designs.contains_key(&v)
    }

    /// An NR*DSTS(v): self-built when this crate has a construction that
    /// succeeds, otherwise from the loaded files.
    pub fn nrdsts(&mut self, v: u32) -> Option<(Design, ResolutionClasses)> {
        self.build_cached(v);
        match self.own.get(&v) {
            Some(Some(d)) => Some(d.clone()),
            _ => self.designs.get(&v).cloned(),
        }
    }

    fn build_cached(&mut self, v: u32) {
        if let Entry::Vacant(slot) = self.own.entry(v) {
            if let Some(built) = build_own(v) {
                slot.insert(built.ok());
            }
        }
    }
}
