//! On-disk cache of basis slices and an in-memory store with size bounds.
//!
//! One file per bucket holds the header
//! `basis <flavor> <n> <V> <E> <L> <count> <convention-id>` and one key per
//! line; a `.sha256` sidecar carries the digest of the file. Files are
//! written to a temporary name and renamed into place.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};

use crate::canon::canonical_form;
use crate::enumerate::{enumerate_basis, enumerate_operad_basis, BasisSlice};
use crate::error::{BasisError, CacheError};
use crate::flavor::{ComplexSpec, Flavor};
use crate::graph::DirectedGraph;
use crate::sign::FlipReading;

pub const CACHE_ENV: &str = "GC_CACHE_DIR";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug)]
pub struct BasisCache {
    dir: PathBuf,
}

/// Outcome of a cache lookup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheHit {
    Hit,
    Built,
    Rebuilt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub file: String,
    pub flavor: Flavor,
    pub n: i64,
    pub v: usize,
    pub e: usize,
    pub l: usize,
    pub count: usize,
    pub convention: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub file: String,
    pub ok: bool,
    pub reason: Option<String>,
}

impl BasisCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    /// Cache rooted at `$GC_CACHE_DIR`, if set.
    pub fn from_env() -> Result<Option<Self>, CacheError> {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Ok(Some(Self::new(PathBuf::from(d))?)),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file_name(spec: &ComplexSpec, v: usize, e: usize, l: usize) -> String {
        let parity = if spec.n.rem_euclid(2) == 1 { "odd" } else { "even" };
        format!("{}-{}-{}-v{}-e{}-l{}.basis", spec.flavor, parity, spec.reading.id(), v, e, l)
    }

    pub fn path_for(&self, spec: &ComplexSpec, v: usize, e: usize, l: usize) -> PathBuf {
        self.dir.join(Self::file_name(spec, v, e, l))
    }

    /// Return the cached slice, or enumerate, store and return it.
    /// Corrupt entries are rebuilt with a warning.
    pub fn get_or_build(
        &self,
        spec: &ComplexSpec,
        v: usize,
        e: usize,
        l: usize,
    ) -> Result<(BasisSlice, CacheHit), CacheError> {
        let path = self.path_for(spec, v, e, l);
        let mut status = CacheHit::Built;
        if path.exists() {
            match read_entry(&path, spec, v, e, l) {
                Ok(slice) => return Ok((slice, CacheHit::Hit)),
                Err(err) => {
                    log::warn!("{err}; rebuilding");
                    status = CacheHit::Rebuilt;
                }
            }
        }
        let slice = enumerate_basis(spec, v, e, l)?;
        write_entry(&path, &slice)?;
        Ok((slice, status))
    }

    pub fn entries(&self) -> Result<Vec<CacheEntry>, CacheError> {
        let mut out = Vec::new();
        for item in fs::read_dir(&self.dir)? {
            let path = item?.path();
            if path.extension().and_then(|x| x.to_str()) != Some("basis") {
                continue;
            }
            let file = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            let text = fs::read_to_string(&path)?;
            match parse_header(text.lines().next().unwrap_or("")) {
                Some((flavor, n, v, e, l, count, convention)) => {
                    out.push(CacheEntry { file, flavor, n, v, e, l, count, convention })
                }
                None => out.push(CacheEntry {
                    file,
                    flavor: Flavor::FGC,
                    n: 0,
                    v: 0,
                    e: 0,
                    l: 0,
                    count: 0,
                    convention: "unreadable".into(),
                }),
            }
        }
        out.sort_by(|a, b| a.file.cmp(&b.file));
        Ok(out)
    }

    /// Remove every cache file; returns how many basis entries were removed.
    pub fn purge(&self) -> Result<usize, CacheError> {
        let mut removed = 0;
        for item in fs::read_dir(&self.dir)? {
            let path = item?.path();
            match path.extension().and_then(|x| x.to_str()) {
                Some("basis") => {
                    fs::remove_file(&path)?;
                    removed += 1;
                }
                Some("sha256") | Some("tmp") => fs::remove_file(&path)?,
                _ => {}
            }
        }
        Ok(removed)
    }

    /// Check every entry against its digest and a fresh enumeration.
    pub fn verify(&self) -> Result<Vec<VerifyOutcome>, CacheError> {
        let mut out = Vec::new();
        for entry in self.entries()? {
            let path = self.dir.join(&entry.file);
            let reading = entry.convention.split('-').next().and_then(|r| r.parse::<FlipReading>().ok());
            let outcome = match reading {
                None => Err(format!("unknown convention {:?}", entry.convention)),
                Some(reading) => {
                    let spec = ComplexSpec::new(entry.flavor, entry.n).with_reading(reading);
                    match read_entry(&path, &spec, entry.v, entry.e, entry.l) {
                        Err(err) => Err(err.to_string()),
                        Ok(slice) => match enumerate_basis(&spec, entry.v, entry.e, entry.l) {
                            Ok(fresh) if fresh == slice => Ok(()),
                            Ok(_) => Err("differs from a fresh enumeration".to_string()),
                            Err(err) => Err(err.to_string()),
                        },
                    }
                }
            };
            out.push(VerifyOutcome { file: entry.file, ok: outcome.is_ok(), reason: outcome.err() });
        }
        Ok(out)
    }
}

fn header(slice: &BasisSlice) -> String {
    format!(
        "basis {} {} {} {} {} {} {}",
        slice.spec.flavor,
        slice.spec.n,
        slice.v,
        slice.e,
        slice.l,
        slice.len(),
        slice.spec.conv().id()
    )
}

type Header = (Flavor, i64, usize, usize, usize, usize, String);

fn parse_header(line: &str) -> Option<Header> {
    let p: Vec<&str> = line.split_whitespace().collect();
    if p.len() != 8 || p[0] != "basis" {
        return None;
    }
    Some((
        p[1].parse().ok()?,
        p[2].parse().ok()?,
        p[3].parse().ok()?,
        p[4].parse().ok()?,
        p[5].parse().ok()?,
        p[6].parse().ok()?,
        p[7].to_string(),
    ))
}

pub(crate) fn render(slice: &BasisSlice) -> String {
    let mut text = header(slice);
    text.push('\n');
    for key in slice.keys() {
        text.push_str(key);
        text.push('\n');
    }
    text
}

fn write_entry(path: &Path, slice: &BasisSlice) -> Result<(), CacheError> {
    let text = render(slice);
    let dir = path.parent().unwrap_or(Path::new("."));
    let digest = sha256_hex(text.as_bytes());
    let mut side = tempfile::Builder::new().suffix(".tmp").tempfile_in(dir)?;
    side.write_all(format!("{digest}\n").as_bytes())?;
    side.persist(path.with_extension("basis.sha256")).map_err(|e| e.error)?;
    let mut tmp = tempfile::Builder::new().suffix(".tmp").tempfile_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn read_entry(path: &Path, spec: &ComplexSpec, v: usize, e: usize, l: usize) -> Result<BasisSlice, CacheError> {
    let corrupt = |reason: String| CacheError::Corrupt { path: path.display().to_string(), reason };
    let text = fs::read_to_string(path)?;
    let digest =
        fs::read_to_string(path.with_extension("basis.sha256")).map_err(|_| corrupt("missing digest".into()))?;
    if digest.trim() != sha256_hex(text.as_bytes()) {
        return Err(corrupt("digest mismatch".into()));
    }
    let mut lines = text.lines();
    let (flavor, n, hv, he, hl, count, convention) =
        parse_header(lines.next().unwrap_or("")).ok_or_else(|| corrupt("bad header".into()))?;
    if flavor != spec.flavor || (n - spec.n).rem_euclid(2) != 0 || (hv, he, hl) != (v, e, l) {
        return Err(corrupt("header does not match the requested bucket".into()));
    }
    if convention != spec.conv().id() {
        return Err(corrupt(format!("convention {convention} differs from {}", spec.conv().id())));
    }
    let mut graphs = Vec::with_capacity(count);
    let mut prev: Option<String> = None;
    for line in lines {
        let g = DirectedGraph::parse(line).map_err(|err| corrupt(err.to_string()))?;
        if (g.n_vertices(), g.n_edges(), g.n_legs()) != (v, e, l) || !spec.admissible(&g) {
            return Err(corrupt(format!("entry {line:?} does not belong to the bucket")));
        }
        let form = canonical_form(&g, spec.conv(), spec.directed());
        if form.is_zero() || form.sign != 1 || form.graph != g {
            return Err(corrupt(format!("entry {line:?} is not a canonical nonzero class")));
        }
        if prev.as_deref().is_some_and(|p| p >= line) {
            return Err(corrupt("entries are not strictly sorted".into()));
        }
        prev = Some(line.to_string());
        graphs.push(g);
    }
    if graphs.len() != count {
        return Err(corrupt(format!("header announces {count} entries, found {}", graphs.len())));
    }
    Ok(BasisSlice::from_graphs(*spec, 0, v, e, l, graphs))
}

/// Size limits for enumerated buckets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_v: usize,
    pub max_e: usize,
    pub max_l: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Self { max_v: 9, max_e: 13, max_l: 8 }
    }
}

impl Bounds {
    pub fn check(&self, v: usize, e: usize, l: usize) -> Result<(), BasisError> {
        if v > self.max_v || e > self.max_e || l > self.max_l {
            return Err(BasisError::OutOfBounds { v, e, l, max_v: self.max_v, max_e: self.max_e, max_l: self.max_l });
        }
        Ok(())
    }
}

type SliceKey = (ComplexSpec, usize, usize, usize, usize);

/// Bounded, memoized access to basis slices, optionally backed by a disk cache.
pub struct BasisStore {
    pub bounds: Bounds,
    cache: Option<BasisCache>,
    memo: Mutex<HashMap<SliceKey, Arc<BasisSlice>>>,
}

impl BasisStore {
    pub fn new(bounds: Bounds, cache: Option<BasisCache>) -> Self {
        Self { bounds, cache, memo: Mutex::new(HashMap::new()) }
    }

    pub fn in_memory(bounds: Bounds) -> Self {
        Self::new(bounds, None)
    }

    pub fn cache(&self) -> Option<&BasisCache> {
        self.cache.as_ref()
    }

    /// Slice of a graph complex bucket; errors beyond the bounds.
    pub fn basis(&self, spec: &ComplexSpec, v: usize, e: usize, l: usize) -> Result<Arc<BasisSlice>, CacheError> {
        self.bounds.check(v, e, l)?;
        let key = (*spec, 0, v, e, l);
        if let Some(s) = self.memo.lock().expect("basis memo poisoned").get(&key) {
            return Ok(s.clone());
        }
        let slice = match &self.cache {
            Some(cache) => cache.get_or_build(spec, v, e, l)?.0,
            None => enumerate_basis(spec, v, e, l)?,
        };
        let slice = Arc::new(slice);
        self.memo.lock().expect("basis memo poisoned").insert(key, slice.clone());
        Ok(slice)
    }

    /// Slice of an operad bucket (kept in memory only).
    pub fn operad_basis(
        &self,
        spec: &ComplexSpec,
        n_ext: usize,
        v_int: usize,
        e: usize,
    ) -> Result<Arc<BasisSlice>, CacheError> {
        self.bounds.check(n_ext + v_int, e, 0)?;
        let key = (*spec, n_ext, v_int, e, 0);
        if let Some(s) = self.memo.lock().expect("basis memo poisoned").get(&key) {
            return Ok(s.clone());
        }
        let slice = Arc::new(enumerate_operad_basis(spec, n_ext, v_int, e)?);
        self.memo.lock().expect("basis memo poisoned").insert(key, slice.clone());
        Ok(slice)
    }
}
