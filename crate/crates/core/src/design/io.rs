//! Line-oriented text format shared by designs, resolutions and GDDs.
//!
//! ```text
//! design <v> <k> <lambda> <b>
//! <b lines, one block each: sorted space-separated points>
//! classes <n> <resolvable|near-resolvable> [self-orthogonal]
//! <n lines: space-separated block labels, optionally ending in missing=<p>>
//! groups <m>
//! <m lines: space-separated points>
//! ```
//!
//! `k` is a comma-separated list for mixed block sizes (GDDs and PBDs). The
//! `classes` and `groups` sections are optional. Writing is canonical, so a
//! parsed canonical file writes back byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use super::{Design, Point, ResolutionClasses, ResolutionKind};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignFile {
    pub v: u32,
    /// Sorted distinct block sizes.
    pub block_sizes: Vec<u32>,
    pub lambda: u32,
    pub blocks: Vec<Vec<Point>>,
    pub classes: Option<ResolutionClasses>,
    /// The file claims its classes are self-orthogonal.
    pub self_orthogonal: bool,
    pub groups: Option<Vec<Vec<Point>>>,
}

impl DesignFile {
    pub fn from_design(d: &Design, classes: Option<&ResolutionClasses>) -> Self {
        Self {
            v: d.v(),
            block_sizes: vec![d.k()],
            lambda: d.lambda(),
            blocks: d.blocks().to_vec(),
            classes: classes.cloned(),
            self_orthogonal: false,
            groups: None,
        }
    }

    pub fn with_self_orthogonal(mut self, claim: bool) -> Self {
        self.self_orthogonal = claim;
        self
    }

    pub fn to_design(&self) -> Result<Design> {
        match self.block_sizes.as_slice() {
            [k] => Design::new(self.v, *k, self.lambda, self.blocks.clone()),
            _ => Err(Error::InvalidDesign(format!(
                "mixed block sizes {:?} do not form a uniform design",
                self.block_sizes
            ))),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let ks: Vec<String> = self.block_sizes.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(
            out,
            "design {} {} {} {}",
            self.v,
            ks.join(","),
            self.lambda,
            self.blocks.len()
        );
        for b in &self.blocks {
            out.push_str(&join(b));
            out.push('\n');
        }
        if let Some(rc) = &self.classes {
            let _ = write!(out, "classes {} {}", rc.classes.len(), rc.kind.as_str());
            if self.self_orthogonal {
                out.push_str(" self-orthogonal");
            }
            out.push('\n');
            for (i, c) in rc.classes.iter().enumerate() {
                out.push_str(&join(c));
                if let Some(Some(p)) = rc.missing.get(i) {
                    if !c.is_empty() {
                        out.push(' ');
                    }
                    let _ = write!(out, "missing={p}");
                }
                out.push('\n');
            }
        }
        if let Some(groups) = &self.groups {
            let _ = writeln!(out, "groups {}", groups.len());
            for g in groups {
                out.push_str(&join(g));
                out.push('\n');
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
        let h: Vec<&str> = header.split(' ').collect();
        if h.len() != 5 || h[0] != "design" {
            return Err(Error::parse(ln, "expected `design v k lambda b`"));
        }
        let v = num(ln, h[1])?;
        let block_sizes = h[2]
            .split(',')
            .map(|s| num(ln, s))
            .collect::<Result<Vec<u32>>>()?;
        if block_sizes.windows(2).any(|w| w[0] >= w[1]) || block_sizes.is_empty() {
            return Err(Error::parse(ln, "block sizes must be strictly increasing"));
        }
        let lambda = num(ln, h[3])?;
        let b = num(ln, h[4])? as usize;
        let mut blocks = Vec::with_capacity(b);
        for _ in 0..b {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| Error::parse(ln + blocks.len() + 1, "file ends inside block list"))?;
            let pts = points(ln, l)?;
            if pts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(ln, "block points must be strictly increasing"));
            }
            if pts.iter().any(|&p| p >= v) {
                return Err(Error::parse(ln, format!("point out of range 0..{v}")));
            }
            if !block_sizes.contains(&(pts.len() as u32)) {
                return Err(Error::parse(ln, format!("block size {} not declared", pts.len())));
            }
            blocks.push(pts);
        }
        let mut file = DesignFile {
            v,
            block_sizes,
            lambda,
            blocks,
            classes: None,
            self_orthogonal: false,
            groups: None,
        };
        while let Some((ln, l)) = lines.next() {
            let words: Vec<&str> = l.split(' ').collect();
            match words[0] {
                "classes" if file.classes.is_none() && file.groups.is_none() => {
                    let (kind, so) = match &words[1..] {
                        [_, k] => (*k, false),
                        [_, k, "self-orthogonal"] => (*k, true),
                        _ => return Err(Error::parse(ln, "expected `classes n kind`")),
                    };
                    let kind = match kind {
                        "resolvable" => ResolutionKind::Resolvable,
                        "near-resolvable" => ResolutionKind::NearResolvable,
                        other => return Err(Error::parse(ln, format!("unknown kind `{other}`"))),
                    };
                    let n = num(ln, words[1])? as usize;
                    let mut classes = Vec::with_capacity(n);
                    let mut missing = Vec::with_capacity(n);
                    for i in 0..n {
                        let (cl, line) = lines
                            .next()
                            .ok_or_else(|| Error::parse(ln + i + 1, "file ends inside classes"))?;
                        let (labels, miss) = match line.rsplit_once("missing=") {
                            Some((head, p)) => {
                                let p = num(cl, p)?;
                                (head.strip_suffix(' ').unwrap_or(head), Some(p))
                            }
                            None => (line, None),
                        };
                        if miss.is_some() && kind == ResolutionKind::Resolvable {
                            return Err(Error::parse(cl, "missing= in a resolvable class"));
                        }
                        let labels: Vec<usize> =
                            points(cl, labels)?.into_iter().map(|x| x as usize).collect();
                        if labels.iter().any(|&l| l >= file.blocks.len()) {
                            return Err(Error::parse(cl, "block label out of range"));
                        }
                        classes.push(labels);
                        missing.push(miss);
                    }
                    file.classes = Some(ResolutionClasses {
                        kind,
                        classes,
                        missing,
                    });
                    file.self_orthogonal = so;
                }
                "groups" if file.groups.is_none() && words.len() == 2 => {
                    let m = num(ln, words[1])? as usize;
                    let mut groups = Vec::with_capacity(m);
                    for i in 0..m {
                        let (gl, line) = lines
                            .next()
                            .ok_or_else(|| Error::parse(ln + i + 1, "file ends inside groups"))?;
                        let g = points(gl, line)?;
                        if g.windows(2).any(|w| w[0] >= w[1]) || g.iter().any(|&p| p >= v) {
                            return Err(Error::parse(gl, "group points must be increasing and in range"));
                        }
                        groups.push(g);
                    }
                    file.groups = Some(groups);
                }
                _ => return Err(Error::parse(ln, format!("unexpected line `{l}`"))),
            }
        }
        Ok(file)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Writes through a temporary sibling file and renames it into place.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), &self.to_text())
    }
}

pub(crate) fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub(crate) fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub(crate) fn num(line: usize, s: &str) -> Result<u32> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("expected a number, got `{s}`")))
}

pub(crate) fn points(line: usize, s: &str) -> Result<Vec<u32>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(' ').map(|w| num(line, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::fixtures::fano;

    #[test]
    fn canonical_text_round_trips() {
        let d = fano().duplicated();
        let rc = ResolutionClasses::near_resolvable(&d, vec![(0..7).collect(), (7..14).collect()]);
        let text = DesignFile::from_design(&d, Some(&rc)).to_text();
        let back = DesignFile::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.to_design().unwrap(), d);
        assert_eq!(back.classes.unwrap(), rc);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let text = DesignFile::from_design(&fano(), None).to_text();
        let cut: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
        match DesignFile::parse(&cut) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(DesignFile::parse("").is_err());
        assert!(DesignFile::parse("design 7 3 1 1\n0 1 x\n").is_err());
        assert!(DesignFile::parse("design 7 3 1 1\n0 1 9\n").is_err());
        assert!(DesignFile::parse("design 7 3 1 1\n1 0 2\n").is_err());
        assert!(DesignFile::parse("design 7 3 1 1\n0 1 2\nextra\n").is_err());
    }

    #[test]
    fn groups_section() {
        let text = "design 4 2 1 4\n0 2\n0 3\n1 2\n1 3\ngroups 2\n0 1\n2 3\n";
        let f = DesignFile::parse(text).unwrap();
        assert_eq!(f.groups.as_ref().unwrap().len(), 2);
        assert_eq!(f.to_text(), text);
    }
}
