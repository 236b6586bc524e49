//! Neighborhoods of a fixed pair `x, y` at distance `k`, their six-class
//! partitions, and the counts read directly off the graph.

pub mod bfs;
pub mod cache;
pub mod spectrum;

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{enumerate_rank_one, rank, MatVertex};
use crate::kernel::{PackedVertex, RankKernel};
use crate::linalg::{rat, RatMatrix};
use crate::params::{ClosedForms, GraphParams, Table6};
use crate::report::Report;

/// Upper bound on the neighborhood size the engine will build.
pub const MAX_LOCAL_VALENCY: u64 = 40_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CrossMode {
    /// Keep the full `Γ(x) × Γ(y)` distance table in memory.
    #[default]
    Cached,
    /// Recompute cross distances whenever they are needed.
    OnTheFly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    X,
    Y,
}

/// Compressed adjacency lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Csr {
    pub offsets: Vec<u32>,
    pub targets: Vec<u32>,
}

impl Csr {
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    fn from_lists(lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0u32);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        for l in lists {
            targets.extend(l);
            offsets.push(targets.len() as u32);
        }
        Self { offsets, targets }
    }
}

/// One center vertex, its neighbors, and their partition relative to the other center.
#[derive(Clone, Debug)]
pub struct Side {
    pub center: MatVertex,
    pub neighbors: Vec<MatVertex>,
    pub(crate) packed: Vec<PackedVertex>,
    pub adjacency: Csr,
    /// Distance from each neighbor to the other center.
    pub dist_other: Vec<u8>,
    /// Class label `1..=6` of each neighbor.
    pub labels: Vec<u8>,
    pub classes: [Vec<u32>; 6],
}

impl Side {
    pub fn class(&self, i: usize) -> &[u32] {
        &self.classes[i - 1]
    }

    pub fn class_sizes(&self) -> Table6<u64> {
        Table6::from_fn(|i| self.class(i).len() as u64)
    }
}

#[derive(Debug)]
pub struct LocalContext {
    params: GraphParams,
    k: usize,
    kernel: RankKernel,
    x: Side,
    y: Side,
    cross: Option<Vec<u8>>,
    cross_hist: OnceLock<Vec<u32>>,
}

pub fn neighbors(p: &GraphParams, v: &MatVertex) -> Result<Vec<MatVertex>> {
    enumerate_rank_one(p.rows(), p.cols(), p.field())?
        .into_iter()
        .map(|m| v.add(&m, p.field()))
        .collect()
}

pub fn distance(p: &GraphParams, u: &MatVertex, v: &MatVertex) -> Result<usize> {
    Ok(rank(&u.sub(v, p.field())?, p.field()))
}

/// `x = 0`, `y` with ones at `(1,1) .. (k,k)`.
pub fn canonical_pair(p: &GraphParams, k: usize) -> Result<(MatVertex, MatVertex)> {
    p.check_distance(k)?;
    let x = MatVertex::zero(p.rows(), p.cols())?;
    let y = MatVertex::from_fn(p.rows(), p.cols(), |r, c| u8::from(r == c && r < k))?;
    Ok((x, y))
}

/// Uniform `x` and `y = x + Σ u_i v_i^t` with independent `u_1..u_k` and `v_1..v_k`.
pub fn random_pair(p: &GraphParams, k: usize, seed: u64) -> Result<(MatVertex, MatVertex)> {
    p.check_distance(k)?;
    let (rows, cols, q) = (p.rows(), p.cols(), p.q() as u8);
    let f = p.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = MatVertex::from_fn(rows, cols, |_, _| rng.gen_range(0..q))?;
    let independent = |len: usize, rng: &mut ChaCha8Rng| -> Result<MatVertex> {
        loop {
            let m = MatVertex::from_fn(k, len, |_, _| rng.gen_range(0..q))?;
            if rank(&m, f) == k {
                return Ok(m);
            }
        }
    };
    let us = independent(rows, &mut rng)?;
    let vs = independent(cols, &mut rng)?;
    let mut y = x;
    for i in 0..k {
        y = y.add(&MatVertex::outer(us.row(i), vs.row(i), f)?, f)?;
    }
    Ok((x, y))
}

fn checked_pow(q: u32, e: usize) -> Result<u64> {
    (q as u64)
        .checked_pow(e as u32)
        .ok_or(Error::Overflow("class pattern"))
}

/// The `(n-, n+)` signatures of classes 2..=5.
fn class_patterns(p: &GraphParams, k: usize) -> Result<[(u64, u64); 4]> {
    let pk1 = checked_pow(p.q(), k - 1)?;
    let pk = checked_pow(p.q(), k)?;
    let pd = checked_pow(p.q(), p.d())?;
    let pm = checked_pow(p.q(), p.m())?;
    Ok([
        (2 * pk1, 0),
        (2 * pk1 - 1, 0),
        (pk1, pd - pk),
        (pk1, pm - pk),
    ])
}

impl LocalContext {
    pub fn build(
        params: &GraphParams,
        x: MatVertex,
        y: MatVertex,
        mode: CrossMode,
    ) -> Result<Self> {
        let shape = (params.rows(), params.cols());
        for v in [&x, &y] {
            if v.shape() != shape {
                return Err(Error::ShapeMismatch {
                    left_rows: v.rows(),
                    left_cols: v.cols(),
                    right_rows: shape.0,
                    right_cols: shape.1,
                });
            }
        }
        let k = distance(params, &x, &y)?;
        params.check_distance(k)?;
        let kappa = params.valency();
        if kappa > MAX_LOCAL_VALENCY.into() {
            return Err(Error::TooLarge {
                what: "local context",
                estimate: format!("κ = {kappa}"),
                limit: MAX_LOCAL_VALENCY.to_string(),
            });
        }
        let kernel = RankKernel::new(params.field().clone(), shape.0, shape.1);
        let patterns = class_patterns(params, k)?;
        let xs = build_side(params, &kernel, x, y, k, &patterns)?;
        let ys = build_side(params, &kernel, y, x, k, &patterns)?;
        let cross = match mode {
            CrossMode::Cached => Some(
                xs.packed
                    .par_iter()
                    .flat_map_iter(|u| {
                        ys.packed
                            .iter()
                            .map(|v| kernel.rank_diff(u, v))
                            .collect::<Vec<_>>()
                    })
                    .collect(),
            ),
            CrossMode::OnTheFly => None,
        };
        Ok(Self {
            params: params.clone(),
            k,
            kernel,
            x: xs,
            y: ys,
            cross,
            cross_hist: OnceLock::new(),
        })
    }

    /// Reassembles a context from stored parts, re-deriving the class lists.
    pub(crate) fn from_parts(
        params: &GraphParams,
        k: usize,
        x: Side,
        y: Side,
        mode: CrossMode,
    ) -> Self {
        let kernel = RankKernel::new(params.field().clone(), params.rows(), params.cols());
        let cross = (mode == CrossMode::Cached).then(|| {
            x.packed
                .par_iter()
                .flat_map_iter(|u| {
                    y.packed
                        .iter()
                        .map(|v| kernel.rank_diff(u, v))
                        .collect::<Vec<_>>()
                })
                .collect()
        });
        Self {
            params: params.clone(),
            k,
            kernel,
            x,
            y,
            cross,
            cross_hist: OnceLock::new(),
        }
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kappa(&self) -> usize {
        self.x.neighbors.len()
    }

    pub fn kernel(&self) -> &RankKernel {
        &self.kernel
    }

    pub fn side(&self, w: Which) -> &Side {
        match w {
            Which::X => &self.x,
            Which::Y => &self.y,
        }
    }

    pub fn x(&self) -> &MatVertex {
        &self.x.center
    }

    pub fn y(&self) -> &MatVertex {
        &self.y.center
    }

    pub fn has_cross_table(&self) -> bool {
        self.cross.is_some()
    }

    /// `∂(u, v)` for `u` the `i`-th neighbor of `x` and `v` the `j`-th neighbor of `y`.
    pub fn cross_distance(&self, i: usize, j: usize) -> u8 {
        match &self.cross {
            Some(t) => t[i * self.kappa() + j],
            None => self.kernel.rank_diff(&self.x.packed[i], &self.y.packed[j]),
        }
    }

    /// Width of one row of [`Self::cross_histograms`].
    pub fn hist_stride(&self) -> usize {
        6 * (self.params.d() + 1)
    }

    /// Row `i`: counts of `v ∈ Γ(y)` by `(class of v, ∂(u_i, v))`, flattened as `class * (D+1) + dist`.
    pub fn cross_histograms(&self) -> &[u32] {
        self.cross_hist.get_or_init(|| {
            let stride = self.hist_stride();
            let dd = self.params.d() + 1;
            let kappa = self.kappa();
            (0..kappa)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let mut row = vec![0u32; stride];
                    for j in 0..kappa {
                        let l = self.y.labels[j] as usize - 1;
                        row[l * dd + self.cross_distance(i, j) as usize] += 1;
                    }
                    row
                })
                .collect()
        })
    }

    pub fn class_sizes(&self, w: Which) -> Table6<u64> {
        self.side(w).class_sizes()
    }
}

fn build_side(
    p: &GraphParams,
    kernel: &RankKernel,
    center: MatVertex,
    other: MatVertex,
    k: usize,
    patterns: &[(u64, u64); 4],
) -> Result<Side> {
    let nbrs = neighbors(p, &center)?;
    let packed = kernel.pack_all(&nbrs);
    let other_p = kernel.pack(&other);
    let dist_other: Vec<u8> = packed
        .par_iter()
        .map(|u| kernel.rank_diff(u, &other_p))
        .collect();

    // Two neighbors of one vertex differ by at most two rank-one terms.
    let lists: Vec<Result<Vec<u32>>> = packed
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            let mut out = Vec::new();
            for (j, v) in packed.iter().enumerate() {
                match kernel.rank_diff(u, v) {
                    1 => out.push(j as u32),
                    0 if i != j => return Err(local_err("duplicate neighbor", &nbrs[i])),
                    d if d > 2 => return Err(local_err("neighbors at distance > 2", &nbrs[i])),
                    _ => {}
                }
            }
            Ok(out)
        })
        .collect();
    let adjacency = Csr::from_lists(lists.into_iter().collect::<Result<_>>()?);

    let labels: Vec<Result<u8>> = (0..nbrs.len())
        .into_par_iter()
        .map(|i| {
            let d = dist_other[i] as usize;
            if d + 1 == k {
                return Ok(1);
            }
            if d == k + 1 {
                return Ok(6);
            }
            let (mut n_minus, mut n_plus) = (0u64, 0u64);
            for &j in adjacency.neighbors(i) {
                let dj = dist_other[j as usize] as usize;
                if dj + 1 == k {
                    n_minus += 1;
                } else if dj == k + 1 {
                    n_plus += 1;
                }
            }
            match (d == k)
                .then(|| patterns.iter().position(|&pat| pat == (n_minus, n_plus)))
                .flatten()
            {
                Some(pos) => Ok(pos as u8 + 2),
                None => Err(Error::StructuralViolation {
                    vertex: nbrs[i].to_string(),
                    dist: d,
                    n_minus: n_minus as usize,
                    n_plus: n_plus as usize,
                }),
            }
        })
        .collect();
    let labels: Vec<u8> = labels.into_iter().collect::<Result<_>>()?;
    let classes = classes_from_labels(&labels);
    Ok(Side {
        center,
        neighbors: nbrs,
        packed,
        adjacency,
        dist_other,
        labels,
        classes,
    })
}

pub(crate) fn classes_from_labels(labels: &[u8]) -> [Vec<u32>; 6] {
    let mut classes: [Vec<u32>; 6] = Default::default();
    for (i, &l) in labels.iter().enumerate() {
        classes[l as usize - 1].push(i as u32);
    }
    classes
}

fn local_err(what: &str, v: &MatVertex) -> Error {
    Error::Inconsistency {
        table: "local graph",
        detail: format!("{what} at {v}"),
    }
}

/// A 6x6 count matrix whose rows are constant over each class.
pub type CountMatrix = [[u64; 6]; 6];

pub fn counts_to_rat(m: &CountMatrix) -> RatMatrix {
    RatMatrix::from_fn(6, 6, |i, j| rat(m[i][j] as i64))
}

/// Quotient matrix of the partition of `Γ(x)` (or `Γ(y)`), with constancy
/// enforced over every vertex of each class.
pub fn empirical_c(ctx: &LocalContext, w: Which) -> Result<CountMatrix> {
    let side = ctx.side(w);
    let rows: Vec<[u64; 6]> = (0..ctx.kappa())
        .into_par_iter()
        .map(|i| {
            let mut row = [0u64; 6];
            for &j in side.adjacency.neighbors(i) {
                row[side.labels[j as usize] as usize - 1] += 1;
            }
            row
        })
        .collect();
    let mut out = [[0u64; 6]; 6];
    for i in 1..=6 {
        let members = side.class(i);
        let first = rows[members[0] as usize];
        if let Some(&bad) = members.iter().find(|&&z| rows[z as usize] != first) {
            return Err(Error::EquitabilityViolation {
                class: i,
                vertex: side.neighbors[bad as usize].to_string(),
                expected: first.to_vec(),
                found: rows[bad as usize].to_vec(),
            });
        }
        out[i - 1] = first;
    }
    Ok(out)
}

/// `D^(ℓ)` for every `ℓ` in `0..=D`, with constancy enforced over each class of `Γ(x)`.
pub fn empirical_d_all(ctx: &LocalContext) -> Result<Vec<CountMatrix>> {
    let hist = ctx.cross_histograms();
    let stride = ctx.hist_stride();
    let dd = ctx.params().d() + 1;
    let mut out = vec![[[0u64; 6]; 6]; dd];
    for i in 1..=6 {
        let members = ctx.x.class(i);
        let row = |z: u32| &hist[z as usize * stride..(z as usize + 1) * stride];
        let first = row(members[0]);
        if let Some(&bad) = members.iter().find(|&&z| row(z) != first) {
            return Err(Error::EquitabilityViolation {
                class: i,
                vertex: ctx.x.neighbors[bad as usize].to_string(),
                expected: first.iter().map(|&c| c as u64).collect(),
                found: row(bad).iter().map(|&c| c as u64).collect(),
            });
        }
        for j in 0..6 {
            for (l, m) in out.iter_mut().enumerate() {
                m[i - 1][j] = first[j * dd + l] as u64;
            }
        }
    }
    Ok(out)
}

/// `D^(ℓ)`; the zero matrix beyond the diameter.
pub fn empirical_d(ctx: &LocalContext, ell: usize) -> Result<CountMatrix> {
    Ok(empirical_d_all(ctx)?
        .get(ell)
        .copied()
        .unwrap_or([[0; 6]; 6]))
}

fn count_witness(found: &CountMatrix, expected: &RatMatrix) -> serde_json::Value {
    let f = counts_to_rat(found);
    match f.first_difference(expected) {
        Some((i, j)) => json!({
            "cell": [i + 1, j + 1],
            "found": found[i][j],
            "expected": expected[(i, j)].to_string(),
        }),
        None => json!(null),
    }
}

/// Class sizes, quotient matrices and cross-distance counts against the closed forms.
pub fn verify_partition(ctx: &LocalContext, cf: &ClosedForms) -> Report {
    let mut r = Report::new();
    let sizes: Vec<u64> = cf
        .osize
        .iter()
        .map(|s| s.try_into().unwrap_or(u64::MAX))
        .collect();
    let (sx, sy) = (ctx.class_sizes(Which::X), ctx.class_sizes(Which::Y));
    r.check(
        "local-class-sizes",
        "both local partitions cover κ vertices with |O_i| = |O′_i| given by the closed forms",
        sx.as_slice() == sizes.as_slice() && sy.as_slice() == sizes.as_slice(),
        || json!({ "x": sx.as_slice(), "y": sy.as_slice(), "expected": sizes }),
    );
    for (w, name) in [(Which::X, "local-c-x"), (Which::Y, "local-c-y")] {
        let id = "every vertex of class i has C_{ij} neighbors in class j";
        match empirical_c(ctx, w) {
            Ok(m) => r.check(name, id, counts_to_rat(&m) == cf.c, || {
                count_witness(&m, &cf.c)
            }),
            Err(e) => r.fail(name, id, json!(e.to_string())),
        }
    }
    let k = ctx.k();
    let window = |ell: usize| ell + 2 >= k && ell <= k + 2;
    let offset_name = |ell: usize| match ell as i64 - k as i64 {
        0 => "local-d-k".to_string(),
        o => format!("local-d-k{o:+}"),
    };
    match empirical_d_all(ctx) {
        Ok(all) => {
            for ell in (k.saturating_sub(2)..=k + 2).filter(|&l| l + 2 >= k) {
                let found = all.get(ell).copied().unwrap_or([[0; 6]; 6]);
                let expected = cf
                    .dmats
                    .get(&ell)
                    .cloned()
                    .unwrap_or_else(|| RatMatrix::zeros(6, 6));
                r.check(
                    &offset_name(ell),
                    &format!("every u ∈ O_i has D^({ell})_{{ij}} vertices of O′_j at distance {ell} = k{:+}", ell as i64 - k as i64),
                    counts_to_rat(&found) == expected,
                    || count_witness(&found, &expected),
                );
            }
            let stray: Vec<usize> = (0..all.len())
                .filter(|&l| !window(l) && all[l].iter().flatten().any(|&c| c != 0))
                .collect();
            r.check(
                "local-d-outside",
                "no u ∈ Γ(x), v ∈ Γ(y) have |∂(u,v) - k| > 2",
                stray.is_empty(),
                || json!({ "distances": stray }),
            );
        }
        Err(e) => r.fail(
            "local-d-constant",
            "cross-distance counts are constant on classes",
            json!(e.to_string()),
        ),
    }
    r
}

/// Random triangle-inequality checks among `x`, `y` and their neighbors, and
/// the 1-Lipschitz property of `∂(·, y)` along every local edge.
pub fn triangle_spot_check(ctx: &LocalContext, samples: usize, seed: u64) -> Report {
    let mut r = Report::new();
    let p = ctx.params();
    let pool: Vec<MatVertex> = [ctx.x.center, ctx.y.center]
        .into_iter()
        .chain(ctx.x.neighbors.iter().copied())
        .chain(ctx.y.neighbors.iter().copied())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = None;
    for _ in 0..samples {
        let [a, b, c] = [0; 3].map(|_| pool[rng.gen_range(0..pool.len())]);
        let d = |u: &MatVertex, v: &MatVertex| distance(p, u, v).expect("same shape");
        if d(&a, &c) > d(&a, &b) + d(&b, &c) {
            bad = Some(json!([a.to_string(), b.to_string(), c.to_string()]));
            break;
        }
    }
    r.check(
        "local-triangle",
        "∂(a,c) <= ∂(a,b) + ∂(b,c) on sampled triples",
        bad.is_none(),
        || bad.clone().unwrap_or_default(),
    );
    let mut bad = None;
    'outer: for side in [&ctx.x, &ctx.y] {
        for i in 0..side.neighbors.len() {
            for &j in side.adjacency.neighbors(i) {
                if side.dist_other[i].abs_diff(side.dist_other[j as usize]) > 1 {
                    bad = Some(json!([
                        side.neighbors[i].to_string(),
                        side.neighbors[j as usize].to_string()
                    ]));
                    break 'outer;
                }
            }
        }
    }
    r.check(
        "local-lipschitz",
        "|∂(z,y) - ∂(w,y)| <= 1 for adjacent z, w",
        bad.is_none(),
        || bad.clone().unwrap_or_default(),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{closed_form_c, partition_sizes};

    fn base() -> GraphParams {
        GraphParams::new(3, 3, 7).unwrap()
    }

    #[test]
    fn neighbors_of_zero_are_rank_one() {
        let p = base();
        let z = MatVertex::zero(3, 4).unwrap();
        let n = neighbors(&p, &z).unwrap();
        assert_eq!(n.len(), 1040);
        assert!(n.iter().all(|v| rank(v, p.field()) == 1));
        assert!(!n.contains(&z));
    }

    #[test]
    fn pairs_have_requested_distance() {
        let p = base();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        assert_eq!(distance(&p, &x, &y).unwrap(), 2);
        assert_eq!(distance(&p, &x, &x).unwrap(), 0);
        assert!(canonical_pair(&p, 3).is_err());
        let p4 = GraphParams::new(3, 4, 9).unwrap();
        let (x, y) = canonical_pair(&p4, 3).unwrap();
        assert_eq!(distance(&p4, &x, &y).unwrap(), 3);
        for seed in 0..20 {
            let (a, b) = random_pair(&p4, 3, seed).unwrap();
            assert_eq!(distance(&p4, &a, &b).unwrap(), 3);
            assert_eq!(random_pair(&p4, 3, seed).unwrap(), (a, b));
        }
    }

    #[test]
    fn base_partition_and_counts() {
        let p = base();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::Cached).unwrap();
        assert_eq!(ctx.class_sizes(Which::X).0, [12, 8, 12, 288, 72, 648]);
        assert_eq!(ctx.class_sizes(Which::Y).0, [12, 8, 12, 288, 72, 648]);
        let sizes = partition_sizes(&p, 2).unwrap();
        for i in 1..=6 {
            assert_eq!(sizes[i], ctx.class_sizes(Which::X)[i].into());
        }
        let c = empirical_c(&ctx, Which::X).unwrap();
        assert_eq!(counts_to_rat(&c), closed_form_c(&p, 2).unwrap());
        assert_eq!(c, empirical_c(&ctx, Which::Y).unwrap());
        assert!(c.iter().all(|row| row.iter().sum::<u64>() == 103));
        let d1 = empirical_d(&ctx, 1).unwrap();
        assert_eq!(d1[0][0], 4);
        assert_eq!(empirical_d(&ctx, 4).unwrap(), [[0; 6]; 6]);
        assert!(triangle_spot_check(&ctx, 500, 1).all_pass());
    }

    #[test]
    fn cross_modes_agree() {
        let p = base();
        let (x, y) = random_pair(&p, 2, 7).unwrap();
        let a = LocalContext::build(&p, x, y, CrossMode::Cached).unwrap();
        let b = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        assert_eq!(a.class_sizes(Which::X), b.class_sizes(Which::X));
        assert_eq!(empirical_d_all(&a).unwrap(), empirical_d_all(&b).unwrap());
    }

    #[test]
    fn build_rejects_wrong_distance() {
        let p = base();
        let x = MatVertex::zero(3, 4).unwrap();
        let y = MatVertex::from_fn(3, 4, |r, c| u8::from(r == 0 && c == 0)).unwrap();
        assert!(matches!(
            LocalContext::build(&p, x, y, CrossMode::OnTheFly),
            Err(Error::OutOfRange { what: "k", .. })
        ));
    }

    #[test]
    fn partition_suite_at_base() {
        let p = base();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        let r = verify_partition(&ctx, &ClosedForms::new(&p, 2).unwrap());
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.len(), 9);
    }
}
