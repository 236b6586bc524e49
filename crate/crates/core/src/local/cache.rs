//! On-disk caches: a versioned binary file per local context and a JSON file
//! per BFS audit.
//!
//! Context file layout (little endian):
//! `"HQLC" | version u32 | q u32 | D u32 | N u32 | k u32 | pair hash u64 |`
//! `x entries | y entries | κ u32 |` then for `Γ(x)` and `Γ(y)`:
//! `neighbor entries (κ·D·(N-D) bytes) | labels (κ) | distance to other center (κ) |`
//! `adjacency offsets ((κ+1)·u32) | edge count u32 | targets (u32 each)`.

use std::fs;
use std::hash::{Hash, Hasher};
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use super::bfs::{bfs_distance_audit, BfsAudit};
use super::{classes_from_labels, CrossMode, Csr, LocalContext, Side, Which};
use crate::error::{Error, Result};
use crate::field::MatVertex;
use crate::kernel::RankKernel;
use crate::params::GraphParams;

pub const MAGIC: &[u8; 4] = b"HQLC";
pub const CONTEXT_VERSION: u32 = 1;
pub const BFS_VERSION: u32 = 1;

pub fn pair_hash(x: &MatVertex, y: &MatVertex) -> u64 {
    let mut h = FnvHasher::default();
    x.hash(&mut h);
    y.hash(&mut h);
    h.finish()
}

pub fn context_path(
    dir: &Path,
    p: &GraphParams,
    k: usize,
    x: &MatVertex,
    y: &MatVertex,
) -> PathBuf {
    dir.join(format!(
        "local-q{}-D{}-N{}-k{}-{:016x}.bin",
        p.q(),
        p.d(),
        p.n(),
        k,
        pair_hash(x, y)
    ))
}

fn put_u32(w: &mut impl Write, v: u32) -> Result<()> {
    Ok(w.write_all(&v.to_le_bytes())?)
}

fn get_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn get_bytes(r: &mut impl Read, n: usize) -> Result<Vec<u8>> {
    let mut b = vec![0u8; n];
    r.read_exact(&mut b)?;
    Ok(b)
}

fn len_u32(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Cache(format!("length {n} does not fit the cache format")))
}

pub fn save_context(ctx: &LocalContext, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    let mut w = BufWriter::new(fs::File::create(&tmp)?);
    let p = ctx.params();
    w.write_all(MAGIC)?;
    for v in [
        CONTEXT_VERSION,
        p.q(),
        p.d() as u32,
        p.n() as u32,
        ctx.k() as u32,
    ] {
        put_u32(&mut w, v)?;
    }
    w.write_all(&pair_hash(ctx.x(), ctx.y()).to_le_bytes())?;
    w.write_all(ctx.x().entries())?;
    w.write_all(ctx.y().entries())?;
    put_u32(&mut w, len_u32(ctx.kappa())?)?;
    for which in [Which::X, Which::Y] {
        let s = ctx.side(which);
        for v in &s.neighbors {
            w.write_all(v.entries())?;
        }
        w.write_all(&s.labels)?;
        w.write_all(&s.dist_other)?;
        for &o in &s.adjacency.offsets {
            put_u32(&mut w, o)?;
        }
        put_u32(&mut w, len_u32(s.adjacency.targets.len())?)?;
        for &t in &s.adjacency.targets {
            put_u32(&mut w, t)?;
        }
    }
    w.into_inner()
        .map_err(|e| Error::Io(e.into_error()))?
        .sync_all()?;
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn load_context(
    path: &Path,
    p: &GraphParams,
    x: &MatVertex,
    y: &MatVertex,
    mode: CrossMode,
) -> Result<LocalContext> {
    let mut r = BufReader::new(fs::File::open(path)?);
    let magic = get_bytes(&mut r, 4)?;
    if magic != MAGIC {
        return Err(Error::Cache(format!("{}: bad magic", path.display())));
    }
    let version = get_u32(&mut r)?;
    if version != CONTEXT_VERSION {
        return Err(Error::Cache(format!(
            "{}: version {version}, expected {CONTEXT_VERSION}",
            path.display()
        )));
    }
    let header = [get_u32(&mut r)?, get_u32(&mut r)?, get_u32(&mut r)?];
    if header != [p.q(), p.d() as u32, p.n() as u32] {
        return Err(Error::Cache(format!(
            "{}: parameters {header:?} do not match {p}",
            path.display()
        )));
    }
    let k = get_u32(&mut r)? as usize;
    let mut hb = [0u8; 8];
    r.read_exact(&mut hb)?;
    if u64::from_le_bytes(hb) != pair_hash(x, y) {
        return Err(Error::Cache(format!(
            "{}: pair hash mismatch",
            path.display()
        )));
    }
    let (rows, cols) = (p.rows(), p.cols());
    let rc = rows * cols;
    let read_vertex = |r: &mut BufReader<fs::File>| -> Result<MatVertex> {
        MatVertex::from_entries(rows, cols, &get_bytes(r, rc)?, p.field())
    };
    if read_vertex(&mut r)? != *x || read_vertex(&mut r)? != *y {
        return Err(Error::Cache(format!(
            "{}: stored pair differs",
            path.display()
        )));
    }
    let kappa = get_u32(&mut r)? as usize;
    if p.valency() != kappa.into() {
        return Err(Error::Cache(format!(
            "{}: κ = {kappa} is wrong for {p}",
            path.display()
        )));
    }
    let kernel = RankKernel::new(p.field().clone(), rows, cols);
    let mut sides = Vec::with_capacity(2);
    for center in [*x, *y] {
        let neighbors = (0..kappa)
            .map(|_| read_vertex(&mut r))
            .collect::<Result<Vec<_>>>()?;
        let labels = get_bytes(&mut r, kappa)?;
        if labels.iter().any(|&l| !(1..=6).contains(&l)) {
            return Err(Error::Cache(format!(
                "{}: class label out of range",
                path.display()
            )));
        }
        let dist_other = get_bytes(&mut r, kappa)?;
        let offsets = (0..=kappa)
            .map(|_| get_u32(&mut r))
            .collect::<Result<Vec<_>>>()?;
        let edges = get_u32(&mut r)? as usize;
        if offsets.last().copied() != Some(edges as u32) {
            return Err(Error::Cache(format!(
                "{}: adjacency offsets inconsistent",
                path.display()
            )));
        }
        let targets = (0..edges)
            .map(|_| get_u32(&mut r))
            .collect::<Result<Vec<_>>>()?;
        let classes = classes_from_labels(&labels);
        sides.push(Side {
            center,
            packed: kernel.pack_all(&neighbors),
            neighbors,
            adjacency: Csr { offsets, targets },
            dist_other,
            labels,
            classes,
        });
    }
    let ys = sides.pop().expect("two sides");
    let xs = sides.pop().expect("two sides");
    Ok(LocalContext::from_parts(p, k, xs, ys, mode))
}

/// Loads the context from `dir` when present and valid, otherwise builds and stores it.
/// The flag is `true` when the context came from the cache.
pub fn load_or_build(
    dir: Option<&Path>,
    p: &GraphParams,
    x: MatVertex,
    y: MatVertex,
    mode: CrossMode,
) -> Result<(LocalContext, bool)> {
    let Some(dir) = dir else {
        return Ok((LocalContext::build(p, x, y, mode)?, false));
    };
    let k = super::distance(p, &x, &y)?;
    let path = context_path(dir, p, k, &x, &y);
    if path.exists() {
        if let Ok(ctx) = load_context(&path, p, &x, &y, mode) {
            return Ok((ctx, true));
        }
    }
    let ctx = LocalContext::build(p, x, y, mode)?;
    save_context(&ctx, &path)?;
    Ok((ctx, false))
}

#[derive(Serialize, Deserialize)]
struct BfsCacheFile {
    version: String,
    audit: BfsAudit,
}

fn bfs_version() -> String {
    format!("{}+{}", env!("CARGO_PKG_VERSION"), BFS_VERSION)
}

pub fn bfs_path(dir: &Path, p: &GraphParams) -> PathBuf {
    dir.join(format!("bfs-q{}-D{}-N{}.json", p.q(), p.d(), p.n()))
}

/// BFS audit, reused from `dir` when a file of the current version exists.
pub fn bfs_cached(dir: Option<&Path>, p: &GraphParams, limit: u64) -> Result<(BfsAudit, bool)> {
    if let Some(dir) = dir {
        let path = bfs_path(dir, p);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(file) = serde_json::from_str::<BfsCacheFile>(&text) {
                if file.version == bfs_version()
                    && (file.audit.q, file.audit.d, file.audit.n) == (p.q(), p.d(), p.n())
                {
                    return Ok((file.audit, true));
                }
            }
        }
    }
    let audit = bfs_distance_audit(p, limit)?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        let file = BfsCacheFile {
            version: bfs_version(),
            audit: audit.clone(),
        };
        let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Cache(e.to_string()))?;
        fs::write(bfs_path(dir, p), text)?;
    }
    Ok((audit, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::{canonical_pair, empirical_c};

    #[test]
    fn context_round_trip() {
        let dir = std::env::temp_dir().join(format!("bsc-cache-test-{}", std::process::id()));
        let p = GraphParams::new(3, 3, 7).unwrap();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let (built, hit) = load_or_build(Some(&dir), &p, x, y, CrossMode::OnTheFly).unwrap();
        assert!(!hit);
        let (loaded, hit) = load_or_build(Some(&dir), &p, x, y, CrossMode::OnTheFly).unwrap();
        assert!(hit);
        assert_eq!(built.class_sizes(Which::X), loaded.class_sizes(Which::X));
        assert_eq!(
            built.side(Which::Y).adjacency,
            loaded.side(Which::Y).adjacency
        );
        assert_eq!(
            empirical_c(&built, Which::X).unwrap(),
            empirical_c(&loaded, Which::X).unwrap()
        );

        // a different pair must not match this file
        let path = context_path(&dir, &p, 2, &x, &y);
        let other = MatVertex::from_fn(3, 4, |r, c| u8::from(r == c && r < 2) * 2).unwrap();
        assert!(matches!(
            load_context(&path, &p, &x, &other, CrossMode::OnTheFly),
            Err(Error::Cache(_))
        ));
        fs::remove_dir_all(&dir).unwrap();
    }
}
