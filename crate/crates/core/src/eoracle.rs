//! Exact inner products of `E`-images of formal vertex sums.
//!
//! `⟨E u, E v⟩ = |X|⁻¹ Σ_{a,b} u_a v_b θ*_{∂(a,b)}`. Pairs are counted per
//! distance, so each block of equal coefficients costs `D + 1` rational
//! products no matter how many vertex pairs it holds.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::MatVertex;
use crate::kernel::{PackedVertex, RankKernel};
use crate::linalg::{rat, rat_str, rats_str, RatMatrix, Rational};
use crate::local::spectrum::{local_spectrum_table, polynomial_equals_all_ones};
use crate::local::{LocalContext, Which};
use crate::params::{spectrum, ClosedForms, GraphParams};
use crate::report::Report;

/// A finite formal sum `Σ c_v v̂` with no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexSum {
    terms: BTreeMap<MatVertex, Rational>,
}

impl VertexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(v: MatVertex) -> Self {
        let mut s = Self::new();
        s.add_term(v, rat(1));
        s
    }

    /// `Ω̂ = Σ_{v ∈ Ω} v̂`.
    pub fn from_set<'a>(vs: impl IntoIterator<Item = &'a MatVertex>) -> Self {
        let mut s = Self::new();
        for v in vs {
            s.add_term(*v, rat(1));
        }
        s
    }

    pub fn add_term(&mut self, v: MatVertex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(v).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&v);
        }
    }

    pub fn terms(&self) -> &BTreeMap<MatVertex, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, v: &MatVertex) -> Rational {
        self.terms.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: &Rational, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(*v, s * c);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.axpy(&rat(1), other)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.axpy(&rat(-1), other)
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        Self::new().axpy(s, self)
    }
}

fn check_shape(p: &GraphParams, s: &VertexSum) -> Result<()> {
    match s.terms.keys().find(|m| m.shape() != (p.rows(), p.cols())) {
        Some(m) => Err(Error::ShapeMismatch {
            left_rows: m.rows(),
            left_cols: m.cols(),
            right_rows: p.rows(),
            right_cols: p.cols(),
        }),
        None => Ok(()),
    }
}

fn coefficient_blocks(kernel: &RankKernel, s: &VertexSum) -> BTreeMap<Rational, Vec<PackedVertex>> {
    let mut out: BTreeMap<Rational, Vec<PackedVertex>> = BTreeMap::new();
    for (v, c) in &s.terms {
        out.entry(c.clone()).or_default().push(kernel.pack(v));
    }
    out
}

fn block_histogram(
    kernel: &RankKernel,
    a: &[PackedVertex],
    b: &[PackedVertex],
    len: usize,
) -> Vec<u64> {
    a.par_chunks(32)
        .fold(
            || vec![0u64; len],
            |mut h, chunk| {
                for u in chunk {
                    kernel.histogram_into(u, b, &mut h);
                }
                h
            },
        )
        .reduce(
            || vec![0u64; len],
            |x, y| x.iter().zip(&y).map(|(s, t)| s + t).collect(),
        )
}

/// `Σ_d counts[d] θ*_d`.
fn weigh(counts: &[u64], theta_star: &[Rational]) -> Rational {
    counts
        .iter()
        .zip(theta_star)
        .map(|(&n, t)| t * Rational::from_integer(BigInt::from(n)))
        .sum()
}

/// `⟨E u, E v⟩`, exact.
pub fn e_inner(p: &GraphParams, u: &VertexSum, v: &VertexSum) -> Result<Rational> {
    check_shape(p, u)?;
    check_shape(p, v)?;
    let kernel = RankKernel::new(p.field().clone(), p.rows(), p.cols());
    let ts = spectrum(p).theta_star;
    let (bu, bv) = (
        coefficient_blocks(&kernel, u),
        coefficient_blocks(&kernel, v),
    );
    let mut total = Rational::zero();
    for (cu, au) in &bu {
        for (cv, av) in &bv {
            let hist = block_histogram(&kernel, au, av, p.d() + 1);
            total += cu * cv * weigh(&hist, &ts);
        }
    }
    let n = Rational::from_integer(BigInt::from(p.vertex_count()));
    Ok(total / n)
}

/// `E u = 0`, decided by `‖E u‖² = 0`.
pub fn e_norm_zero(p: &GraphParams, u: &VertexSum) -> Result<bool> {
    Ok(e_inner(p, u, u)?.is_zero())
}

/// Gram matrix of the `E`-images, symmetric by construction.
pub fn gram(p: &GraphParams, list: &[VertexSum]) -> Result<RatMatrix> {
    let n = list.len();
    let mut m = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = e_inner(p, &list[i], &list[j])?;
            m[(j, i)] = v.clone();
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

/// The fourteen vertex sums every local identity is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    X,
    Y,
    /// `Ô_i`, class `i` of the partition of `Γ(x)`, `1 <= i <= 6`.
    O(usize),
    /// `Ô′_i`, class `i` of the partition of `Γ(y)`.
    OPrime(usize),
}

pub const ATOM_COUNT: usize = 14;

impl Atom {
    pub fn index(self) -> usize {
        match self {
            Atom::X => 0,
            Atom::Y => 1,
            Atom::O(i) => 1 + i,
            Atom::OPrime(i) => 7 + i,
        }
    }

    pub fn all() -> [Atom; ATOM_COUNT] {
        std::array::from_fn(|n| match n {
            0 => Atom::X,
            1 => Atom::Y,
            2..=7 => Atom::O(n - 1),
            _ => Atom::OPrime(n - 7),
        })
    }
}

/// Rational combination of the fourteen atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomVec(pub Vec<Rational>);

impl AtomVec {
    pub fn zero() -> Self {
        Self(vec![Rational::zero(); ATOM_COUNT])
    }

    pub fn atom(a: Atom) -> Self {
        let mut v = Self::zero();
        v.0[a.index()] = rat(1);
        v
    }

    /// `Σ_i c_i Ô_i`, or `Σ_i c_i Ô′_i` when `primed`; `coords` is 0-based.
    pub fn from_classes(coords: &[Rational], primed: bool) -> Self {
        let mut v = Self::zero();
        for (i, c) in coords.iter().enumerate() {
            let a = if primed {
                Atom::OPrime(i + 1)
            } else {
                Atom::O(i + 1)
            };
            v.0[a.index()] = c.clone();
        }
        v
    }

    pub fn axpy(&self, s: &Rational, other: &Self) -> Self {
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.axpy(&rat(1), other)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.axpy(&rat(-1), other)
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }
}

/// Pair-distance counts between the fourteen atoms of one local context.
#[derive(Clone, Debug)]
pub struct AtomGram {
    counts: Vec<Vec<Vec<u64>>>,
    weights: RatMatrix,
    vertex_count: Rational,
}

impl AtomGram {
    pub fn build(ctx: &LocalContext) -> Self {
        let p = ctx.params();
        let dd = p.d() + 1;
        let kernel = ctx.kernel();
        let (xs, ys) = (ctx.side(Which::X), ctx.side(Which::Y));
        let mut counts = vec![vec![vec![0u64; dd]; ATOM_COUNT]; ATOM_COUNT];
        let mut set = |a: Atom, b: Atom, h: Vec<u64>| {
            counts[b.index()][a.index()] = h.clone();
            counts[a.index()][b.index()] = h;
        };
        let single = |d: usize| {
            let mut h = vec![0u64; dd];
            h[d] = 1;
            h
        };
        set(Atom::X, Atom::X, single(0));
        set(Atom::Y, Atom::Y, single(0));
        set(Atom::X, Atom::Y, single(ctx.k()));

        for i in 1..=6 {
            for (side, center, own, other) in [
                (xs, Atom::X, Atom::O(i), Atom::Y),
                (ys, Atom::Y, Atom::OPrime(i), Atom::X),
            ] {
                let members: Vec<PackedVertex> = side
                    .class(i)
                    .iter()
                    .map(|&v| side.packed[v as usize])
                    .collect();
                let mut h = vec![0u64; dd];
                kernel.histogram_into(&kernel.pack(&side.center), &members, &mut h);
                set(center, own, h);
                let mut h = vec![0u64; dd];
                for &v in side.class(i) {
                    h[side.dist_other[v as usize] as usize] += 1;
                }
                set(other, own, h);
            }
        }

        // Two neighbors of one center are equal, adjacent, or at distance 2.
        for (side, atom) in [
            (xs, Atom::O as fn(usize) -> Atom),
            (ys, Atom::OPrime as fn(usize) -> Atom),
        ] {
            let mut adj = [[0u64; 6]; 6];
            for (v, &l) in side.labels.iter().enumerate() {
                for &w in side.adjacency.neighbors(v) {
                    adj[l as usize - 1][side.labels[w as usize] as usize - 1] += 1;
                }
            }
            for i in 1..=6 {
                for j in i..=6 {
                    let (ni, nj) = (side.class(i).len() as u64, side.class(j).len() as u64);
                    let same = if i == j { ni } else { 0 };
                    let mut h = vec![0u64; dd];
                    h[0] = same;
                    h[1] = adj[i - 1][j - 1];
                    h[2] = ni * nj - same - h[1];
                    set(atom(i), atom(j), h);
                }
            }
        }

        let stride = ctx.hist_stride();
        let hist = ctx.cross_histograms();
        for i in 1..=6 {
            for j in 1..=6 {
                let mut h = vec![0u64; dd];
                for &v in xs.class(i) {
                    let row = &hist[v as usize * stride + (j - 1) * dd..][..dd];
                    for (t, &c) in h.iter_mut().zip(row) {
                        *t += c as u64;
                    }
                }
                set(Atom::O(i), Atom::OPrime(j), h);
            }
        }

        let ts = spectrum(p).theta_star;
        let weights = RatMatrix::from_fn(ATOM_COUNT, ATOM_COUNT, |a, b| weigh(&counts[a][b], &ts));
        let vertex_count = Rational::from_integer(BigInt::from(p.vertex_count()));
        Self {
            counts,
            weights,
            vertex_count,
        }
    }

    /// Number of pairs `(u, v)` with `u` in atom `a`, `v` in atom `b`, by distance.
    pub fn pair_counts(&self, a: Atom, b: Atom) -> &[u64] {
        &self.counts[a.index()][b.index()]
    }

    pub fn inner(&self, u: &AtomVec, v: &AtomVec) -> Rational {
        self.weights.bilinear(&u.0, &v.0) / &self.vertex_count
    }

    pub fn norm_sq(&self, u: &AtomVec) -> Rational {
        self.inner(u, u)
    }

    pub fn gram(&self, list: &[AtomVec]) -> RatMatrix {
        RatMatrix::from_fn(list.len(), list.len(), |i, j| {
            self.inner(&list[i], &list[j])
        })
    }
}

/// Expands an atom combination into an explicit vertex sum.
pub fn lift(ctx: &LocalContext, u: &AtomVec) -> VertexSum {
    let mut s = VertexSum::new();
    for a in Atom::all() {
        let c = &u.0[a.index()];
        if c.is_zero() {
            continue;
        }
        let members: Vec<MatVertex> = match a {
            Atom::X => vec![*ctx.x()],
            Atom::Y => vec![*ctx.y()],
            Atom::O(i) => {
                let side = ctx.side(Which::X);
                side.class(i)
                    .iter()
                    .map(|&v| side.neighbors[v as usize])
                    .collect()
            }
            Atom::OPrime(i) => {
                let side = ctx.side(Which::Y);
                side.class(i)
                    .iter()
                    .map(|&v| side.neighbors[v as usize])
                    .collect()
            }
        };
        for m in members {
            s.add_term(m, c.clone());
        }
    }
    s
}

/// Named vectors of the local identities, as atom combinations.
struct Named {
    x: AtomVec,
    y: AtomVec,
    o: Vec<AtomVec>,
    op: Vec<AtomVec>,
    ov: Vec<AtomVec>,
    h: Vec<AtomVec>,
    hp: Vec<AtomVec>,
}

impl Named {
    fn new(cf: &ClosedForms) -> Self {
        let t = &cf.tables;
        let x = AtomVec::atom(Atom::X);
        let y = AtomVec::atom(Atom::Y);
        let o: Vec<AtomVec> = (1..=6).map(|i| AtomVec::atom(Atom::O(i))).collect();
        let op: Vec<AtomVec> = (1..=6).map(|i| AtomVec::atom(Atom::OPrime(i))).collect();
        let ov = (1..=6).map(|i| o[i - 1].axpy(&-&t.lambda[i], &x)).collect();
        let h = (0..6)
            .map(|j| AtomVec::from_classes(&cf.h.column(j), false))
            .collect();
        let hp = (0..6)
            .map(|j| AtomVec::from_classes(&cf.h.column(j), true))
            .collect();
        Self {
            x,
            y,
            o,
            op,
            ov,
            h,
            hp,
        }
    }
}

fn sum(vs: &[AtomVec]) -> AtomVec {
    vs.iter().fold(AtomVec::zero(), |a, b| a.plus(b))
}

/// Records a pass when `‖v‖² = 0`, otherwise the norm as witness.
fn vanish(r: &mut Report, g: &AtomGram, name: &str, identity: &str, v: &AtomVec) {
    let n = g.norm_sq(v);
    r.check(
        name,
        identity,
        n.is_zero(),
        || json!({ "norm_sq": rat_str(&n) }),
    );
}

/// Records a pass when every listed vector vanishes.
fn vanish_all(r: &mut Report, g: &AtomGram, name: &str, identity: &str, vs: &[AtomVec]) {
    let norms: Vec<Rational> = vs.iter().map(|v| g.norm_sq(v)).collect();
    let bad: Vec<usize> = (0..vs.len())
        .filter(|&j| !norms[j].is_zero())
        .map(|j| j + 1)
        .collect();
    r.check(
        name,
        identity,
        bad.is_empty(),
        || json!({ "indices": bad, "norm_sq": rats_str(&norms) }),
    );
}

fn matrix_witness(found: &RatMatrix, expected: &RatMatrix) -> Value {
    match found.first_difference(expected) {
        Some((i, j)) => json!({
            "cell": [i + 1, j + 1],
            "found": rat_str(&found[(i, j)]),
            "expected": rat_str(&expected[(i, j)]),
        }),
        None => json!({ "shape": [found.rows(), found.cols()] }),
    }
}

/// Every vanishing-norm and inner-product identity on the local span, using a
/// fresh atom Gram of `ctx` and the tables of `cf`.
pub fn verify_eigenspace_identities(ctx: &LocalContext, cf: &ClosedForms) -> Report {
    verify_with_atoms(&AtomGram::build(ctx), cf)
}

/// As [`verify_eigenspace_identities`] with a precomputed atom Gram.
pub fn verify_with_atoms(g: &AtomGram, cf: &ClosedForms) -> Report {
    let mut r = Report::new();
    let p = &cf.params;
    let t = &cf.tables;
    let k = cf.k;
    let nx = cf.vertex_count();
    let ts = &cf.spectrum.theta_star;
    let theta1 = cf.theta1();
    let q = rat(p.q() as i64);
    let c = rat(1) / big_pow(p, k - 1);
    let v = Named::new(cf);
    let (x, y) = (&v.x, &v.y);
    let xmy = x.minus(y);
    let xpy = x.plus(y);

    let xx = g.inner(x, x);
    let xy = g.inner(x, y);
    let yy = g.inner(y, y);
    let ok = xx == &ts[0] / &nx && yy == xx && xy == &ts[k] / &nx;
    r.check(
        "e-inner-dual",
        "⟨Ex̂,Ex̂⟩ = ⟨Eŷ,Eŷ⟩ = θ*_0/|X|, ⟨Ex̂,Eŷ⟩ = θ*_k/|X|",
        ok,
        || json!({ "xx": rat_str(&xx), "xy": rat_str(&xy), "yy": rat_str(&yy) }),
    );
    let det = &xx * &yy - &xy * &xy;
    let expect = (&ts[0] * &ts[0] - &ts[k] * &ts[k]) / (&nx * &nx);
    r.check(
        "e-xy-independent",
        "det Gram(Ex̂, Eŷ) = (θ*_0² - θ*_k²)/|X|² > 0",
        det == expect && det.is_positive(),
        || json!({ "det": rat_str(&det), "expected": rat_str(&expect) }),
    );

    let xi = y
        .axpy(&((rat(1) - &c) / (&q - rat(1))), x)
        .axpy(&-&c, &v.o[0])
        .axpy(&c, &v.o[1]);
    vanish(
        &mut r,
        g,
        "e-dependence",
        "Eŷ + (1-q^{1-k})/(q-1) Ex̂ - q^{1-k} EÔ_1 + q^{1-k} EÔ_2 = 0",
        &xi,
    );
    vanish(
        &mut r,
        g,
        "e-osum-x",
        "θ_1 Ex̂ = Σ_i EÔ_i",
        &x.scaled(theta1).minus(&sum(&v.o)),
    );
    vanish(
        &mut r,
        g,
        "e-osum-y",
        "θ_1 Eŷ = Σ_i EÔ′_i",
        &y.scaled(theta1).minus(&sum(&v.op)),
    );

    for i in 1..=6 {
        let d = v.o[i - 1].minus(&v.op[i - 1]).axpy(&-&t.lambda[i], &xmy);
        vanish(
            &mut r,
            g,
            &format!("strengthened-bsc-{i}"),
            &format!("EÔ_{i} - EÔ′_{i} = λ_{i}(Ex̂ - Eŷ)"),
            &d,
        );
    }

    let go = g.gram(&v.o);
    let rank = go.rank();
    r.check(
        "e-dim-s",
        "Gram(EÔ_1..EÔ_6) has rank 6",
        rank == 6,
        || json!({ "rank": rank }),
    );
    let scaled = go.scale(&nx);
    r.check(
        "e-gram-closed-form",
        "|X| Gram(EÔ_1..EÔ_6) = G",
        scaled == cf.g,
        || matrix_witness(&scaled, &cf.g),
    );
    let gp = g.gram(&v.op);
    r.check(
        "e-gram-swap",
        "Gram(EÔ′_1..EÔ′_6) = Gram(EÔ_1..EÔ_6)",
        gp == go,
        || matrix_witness(&gp, &go),
    );

    vanish(
        &mut r,
        g,
        "e-ocheck-sum",
        "Σ_i EO∨_i = 0 with O∨_i = Ô_i - λ_i x̂",
        &sum(&v.ov),
    );
    let d = xpy.minus(&v.ov[0].minus(&v.ov[1]).scaled(&c));
    vanish(
        &mut r,
        g,
        "e-ocheck-xpy",
        "Ex̂ + Eŷ = q^{1-k}(EO∨_1 - EO∨_2)",
        &d,
    );
    let ips: Vec<Rational> = v.ov.iter().map(|o| g.inner(o, &xmy)).collect();
    r.check(
        "e-ocheck-orthogonal",
        "⟨EO∨_i, Ex̂ - Eŷ⟩ = 0 for all i",
        ips.iter().all(Zero::is_zero),
        || json!({ "inner": rats_str(&ips) }),
    );

    let found: Vec<Rational> = v.h.iter().map(|h| g.inner(x, h)).collect();
    let expected: Vec<Rational> = (1..=6)
        .map(|j| {
            if j == 1 {
                theta1 * &t.eta[1] / &nx
            } else {
                Rational::zero()
            }
        })
        .collect();
    r.check(
        "e-h-x-inner",
        "⟨Ex̂, h_1⟩ = θ_1η_1/|X|, ⟨Ex̂, h_j⟩ = 0 for j > 1",
        found == expected,
        || json!({ "found": rats_str(&found), "expected": rats_str(&expected) }),
    );

    let diag = RatMatrix::diag(
        &(1..=6)
            .map(|j| &t.epsfac[j] * &t.eta[j] / &nx)
            .collect::<Vec<_>>(),
    );
    let gh = g.gram(&v.h);
    r.check(
        "e-h-orthogonal",
        "Gram(h_1..h_6) = diag(ε_jη_j)/|X|",
        gh == diag,
        || matrix_witness(&gh, &diag),
    );
    let ghp = g.gram(&v.hp);
    r.check(
        "e-hprime-orthogonal",
        "Gram(h′_1..h′_6) = diag(ε_jη_j)/|X|",
        ghp == diag,
        || matrix_witness(&ghp, &diag),
    );

    let ey = y.minus(&(1..=6).fold(AtomVec::zero(), |a, j| a.axpy(&t.gamma[j], &v.h[j - 1])));
    let ex = x.minus(&(1..=6).fold(AtomVec::zero(), |a, j| a.axpy(&t.gamma[j], &v.hp[j - 1])));
    vanish_all(
        &mut r,
        g,
        "e-gamma-expansion",
        "Eŷ = Σ_j γ_j h_j and Ex̂ = Σ_j γ_j h′_j",
        &[ey, ex],
    );

    let diffs: Vec<AtomVec> = (1..=6)
        .map(|j| v.h[j - 1].minus(&v.hp[j - 1]).axpy(&-&t.mu[j], &xmy))
        .collect();
    vanish_all(
        &mut r,
        g,
        "e-h-minus-hprime",
        "h_j - h′_j = μ_j(Ex̂ - Eŷ) for all j",
        &diffs,
    );

    let hv: Vec<AtomVec> = (1..=6).map(|j| v.h[j - 1].axpy(&-&t.mu[j], x)).collect();
    vanish(
        &mut r,
        g,
        "e-hcheck-one-zero",
        "h∨_1 = h_1 - μ_1 Ex̂ = 0",
        &hv[0],
    );
    let d = xpy.minus(&(2..=5).fold(AtomVec::zero(), |a, j| a.axpy(&t.gamma[j], &hv[j - 1])));
    vanish(
        &mut r,
        g,
        "e-hcheck-xpy",
        "Ex̂ + Eŷ = Σ_{j=2..5} γ_j h∨_j",
        &d,
    );
    vanish(
        &mut r,
        g,
        "e-omega-swap",
        "h_6 = h′_6",
        &v.h[5].minus(&v.hp[5]),
    );
    r
}

fn big_pow(p: &GraphParams, e: usize) -> Rational {
    Rational::from_integer(p.pow(e))
}

/// The local neighbors of `x` span `EV`: nonvanishing of the eigenvalues of
/// `θ*_0 I + θ*_1 Ã + θ*_2 (J - Ã - I)`, the polynomial identity `f(Ã) = J`,
/// and a nonsingular Gram on a random 6-subset of `Γ(x)`.
pub fn verify_local_basis(ctx: &LocalContext, cf: &ClosedForms, seed: u64) -> Report {
    let mut r = Report::new();
    let p = ctx.params();
    let ts = &cf.spectrum.theta_star;
    let theta1 = cf.theta1();
    let kappa = Rational::from_integer(cf.kappa.clone());
    let a1 = Rational::from_integer(cf.a1.clone());
    let q = rat(p.q() as i64);

    let trivial = &ts[0] + &ts[1] * &a1 + &ts[2] * (&kappa - &a1 - rat(1));
    let shift = (&ts[0] - &ts[2]) / (&ts[1] - &ts[2]);
    let nontrivial: Vec<Rational> = local_spectrum_table(p)[1..]
        .iter()
        .map(|(eta, _)| (&ts[1] - &ts[2]) * (Rational::from_integer(eta.clone()) + &q + rat(1)))
        .collect();
    let ok = trivial == theta1 * &ts[1]
        && !trivial.is_zero()
        && shift == &q + rat(1)
        && nontrivial.iter().all(|e| !e.is_zero());
    r.check(
        "local-basis-scalars",
        "θ_1θ*_1 ≠ 0 and (θ*_1 - θ*_2)(η + q + 1) ≠ 0 for each nontrivial local eigenvalue η",
        ok,
        || json!({ "trivial": rat_str(&trivial), "shift": rat_str(&shift), "nontrivial": rats_str(&nontrivial) }),
    );

    let id =
        "f(Ã) = J for the quartic f vanishing on the nontrivial local eigenvalues with f(a_1) = κ";
    match polynomial_equals_all_ones(ctx) {
        Ok(None) => r.pass("local-basis-polynomial", id),
        Ok(Some((i, j, v))) => r.fail(
            "local-basis-polynomial",
            id,
            json!({ "cell": [i, j], "value": v }),
        ),
        Err(Error::TooLarge { estimate, .. }) => r.skip("local-basis-polynomial", id, &estimate),
        Err(e) => r.fail("local-basis-polynomial", id, json!(e.to_string())),
    }

    let side = ctx.side(Which::X);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<usize> = sample(&mut rng, side.neighbors.len(), 6).into_vec();
    let sums: Vec<VertexSum> = picks
        .iter()
        .map(|&i| VertexSum::vertex(side.neighbors[i]))
        .collect();
    let id = "Gram of E-images of six random neighbors of x is nonsingular";
    match gram(p, &sums) {
        Ok(m) => {
            let det = m.determinant();
            r.check(
                "local-basis-sample",
                id,
                !det.is_zero(),
                || json!({ "picks": picks, "det": rat_str(&det) }),
            );
        }
        Err(e) => r.fail("local-basis-sample", id, json!(e.to_string())),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::{canonical_pair, CrossMode};
    use proptest::prelude::*;

    fn base() -> GraphParams {
        GraphParams::new(3, 3, 7).unwrap()
    }

    #[test]
    fn single_vertex_products() {
        let p = base();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let (vx, vy) = (VertexSum::vertex(x), VertexSum::vertex(y));
        assert_eq!(
            e_inner(&p, &vx, &vx).unwrap(),
            Rational::new(1040.into(), 531_441.into())
        );
        assert_eq!(
            e_inner(&p, &vx, &vy).unwrap(),
            Rational::new(68.into(), 531_441.into())
        );
        assert!(e_norm_zero(&p, &VertexSum::new()).unwrap());
        assert!(!e_norm_zero(&p, &vx).unwrap());
    }

    #[test]
    fn add_term_drops_cancelled_coefficients() {
        let v = MatVertex::zero(3, 4).unwrap();
        let mut s = VertexSum::vertex(v);
        s.add_term(v, rat(-1));
        assert!(s.is_empty());
        s.add_term(v, rat(0));
        assert!(s.is_empty());
    }

    #[test]
    fn rejects_wrong_shape() {
        let p = base();
        let s = VertexSum::vertex(MatVertex::zero(2, 4).unwrap());
        assert!(matches!(
            e_inner(&p, &s, &s),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn atom_gram_agrees_with_direct_sums() {
        let p = base();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        let g = AtomGram::build(&ctx);
        let probes = [
            (Atom::O(1), Atom::OPrime(2)),
            (Atom::O(3), Atom::O(5)),
            (Atom::X, Atom::OPrime(4)),
            (Atom::Y, Atom::O(2)),
            (Atom::OPrime(6), Atom::OPrime(6)),
        ];
        for (a, b) in probes {
            let (u, v) = (AtomVec::atom(a), AtomVec::atom(b));
            let direct = e_inner(&p, &lift(&ctx, &u), &lift(&ctx, &v)).unwrap();
            assert_eq!(g.inner(&u, &v), direct, "{a:?} {b:?}");
        }
    }

    #[test]
    fn base_identities_hold() {
        let p = base();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        let cf = ClosedForms::new(&p, 2).unwrap();
        let r = verify_eigenspace_identities(&ctx, &cf);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.len(), 25);
        let b = verify_local_basis(&ctx, &cf, 7);
        assert!(b.all_pass(), "{:?}", b.failures().collect::<Vec<_>>());
    }

    #[test]
    fn perturbed_lambda_is_caught() {
        let p = base();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        let mut cf = ClosedForms::new(&p, 2).unwrap();
        cf.tables.lambda[4] += rat(1);
        let r = verify_eigenspace_identities(&ctx, &cf);
        assert_eq!(
            r.status("strengthened-bsc-4"),
            Some(crate::report::Status::Fail)
        );
        assert_eq!(
            r.status("strengthened-bsc-3"),
            Some(crate::report::Status::Pass)
        );
    }

    fn small_sum() -> impl Strategy<Value = VertexSum> {
        prop::collection::vec((0u64..531_441, -5i64..=5), 0..6).prop_map(|terms| {
            let mut s = VertexSum::new();
            for (idx, c) in terms {
                s.add_term(MatVertex::from_index(idx, 3, 4, 3).unwrap(), rat(c));
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn inner_is_symmetric_and_bilinear(u in small_sum(), v in small_sum(), w in small_sum(), s in -4i64..=4) {
            let p = base();
            let uv = e_inner(&p, &u, &v).unwrap();
            prop_assert_eq!(&uv, &e_inner(&p, &v, &u).unwrap());
            let lhs = e_inner(&p, &u.axpy(&rat(s), &w), &v).unwrap();
            let rhs = uv + rat(s) * e_inner(&p, &w, &v).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert!(!e_inner(&p, &u, &u).unwrap().is_negative());
        }
    }
}
