//! Brute-force triple sums over the whole vertex set.
//!
//! `⟨Eu ⋆ Ev, Ew⟩ = Σ_{z ∈ X} (Eu)_z (Ev)_z (Ew)_z` with
//! `(Eu)_z = |X|⁻¹ Σ_a u_a θ*_{∂(a,z)}`. Everything is integer until the final
//! division, so the sums are exact.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::NortonOps;
use crate::eoracle::{Atom, AtomVec, VertexSum, ATOM_COUNT};
use crate::error::{Error, Result};
use crate::field::MatVertex;
use crate::kernel::{PackedVertex, RankKernel};
use crate::linalg::{rat, rat_str, rats_str, Rational};
use crate::local::{LocalContext, Which};
use crate::params::{spectrum, GraphParams};
use crate::report::Report;
use crate::smodel::SVector;

/// Largest `|X|` the brute-force oracle will enumerate.
pub const MAX_HEAVY_VERTICES: u64 = 2_000_000;

const CHUNK: u64 = 4096;

/// Called with `(vertices done, total)` while a sweep runs.
pub type Progress<'a> = &'a (dyn Fn(u64, u64) + Sync);

fn enumerable(p: &GraphParams) -> Result<u64> {
    match p.vertex_count_u64() {
        Some(n) if n <= MAX_HEAVY_VERTICES => Ok(n),
        _ => Err(Error::TooLarge {
            what: "brute-force triple sum",
            estimate: format!("|X| = {} vertices", p.vertex_count()),
            limit: MAX_HEAVY_VERTICES.to_string(),
        }),
    }
}

fn integer_theta_star(p: &GraphParams) -> Result<Vec<i64>> {
    spectrum(p)
        .theta_star
        .iter()
        .map(|t| {
            if t.is_integer() {
                t.to_integer()
                    .to_i64()
                    .ok_or(Error::Overflow("dual eigenvalue"))
            } else {
                Err(Error::Inconsistency {
                    table: "dual eigenvalues",
                    detail: format!("{t} is not an integer"),
                })
            }
        })
        .collect()
}

/// `u = U/den` with integer coefficients `U`.
struct IntegerSum {
    terms: Vec<(PackedVertex, i64)>,
    den: BigInt,
}

fn integerize(kernel: &RankKernel, s: &VertexSum) -> Result<IntegerSum> {
    let den = s
        .terms()
        .values()
        .fold(BigInt::one(), |a, c| a.lcm(c.denom()));
    let terms = s
        .terms()
        .iter()
        .map(|(v, c)| {
            let n = (c * Rational::from_integer(den.clone())).to_integer();
            Ok((
                kernel.pack(v),
                n.to_i64()
                    .ok_or(Error::Overflow("triple-sum coefficient"))?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(IntegerSum { terms, den })
}

fn progress_tick(done: &AtomicU64, n: u64, total: u64, progress: Option<Progress>) {
    let d = done.fetch_add(n, Ordering::Relaxed) + n;
    if let Some(f) = progress {
        f(d, total);
    }
}

/// `⟨Eu ⋆ Ev, Ew⟩` by direct enumeration of `X`.
pub fn brute_triple(
    p: &GraphParams,
    u: &VertexSum,
    v: &VertexSum,
    w: &VertexSum,
) -> Result<Rational> {
    brute_triple_with_progress(p, u, v, w, None)
}

pub fn brute_triple_with_progress(
    p: &GraphParams,
    u: &VertexSum,
    v: &VertexSum,
    w: &VertexSum,
    progress: Option<Progress>,
) -> Result<Rational> {
    let n = enumerable(p)?;
    let ts = integer_theta_star(p)?;
    let kernel = RankKernel::new(p.field().clone(), p.rows(), p.cols());
    let sums = [
        integerize(&kernel, u)?,
        integerize(&kernel, v)?,
        integerize(&kernel, w)?,
    ];
    let (rows, cols, q) = (p.rows(), p.cols(), p.q());
    let done = AtomicU64::new(0);
    let total = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<BigInt> {
            let mut acc = BigInt::zero();
            let hi = ((c + 1) * CHUNK).min(n);
            for idx in c * CHUNK..hi {
                let z = kernel.pack(&MatVertex::from_index(idx, rows, cols, q)?);
                let mut prod = BigInt::one();
                for s in &sums {
                    let f: i128 = s
                        .terms
                        .iter()
                        .map(|(a, c)| *c as i128 * ts[kernel.rank_diff(a, &z) as usize] as i128)
                        .sum();
                    prod *= f;
                }
                acc += prod;
            }
            progress_tick(&done, hi - c * CHUNK, n, progress);
            Ok(acc)
        })
        .try_reduce(BigInt::zero, |a, b| Ok(a + b))?;
    let nx = BigInt::from(n);
    let den = &sums[0].den * &sums[1].den * &sums[2].den * &nx * &nx * &nx;
    Ok(Rational::new(total, den))
}

/// Index of the sorted triple `a <= b <= c` in the packed tensor.
fn packed_index(mut t: [usize; 3]) -> usize {
    t.sort_unstable();
    let [a, b, c] = t;
    a * ATOM_COUNT * ATOM_COUNT + b * ATOM_COUNT + c
}

/// Triple sums of the fourteen atoms, `Σ_z F_a(z) F_b(z) F_c(z)` with
/// `F_a(z) = Σ_{v ∈ a} θ*_{∂(v,z)}`.
#[derive(Clone, Debug)]
pub struct HeavyOracle {
    tensor: Vec<i128>,
    vertex_count: Rational,
}

impl HeavyOracle {
    pub fn build(ctx: &LocalContext, progress: Option<Progress>) -> Result<Self> {
        let p = ctx.params();
        let n = enumerable(p)?;
        let ts = integer_theta_star(p)?;
        let kernel = ctx.kernel();
        let members: Vec<Vec<PackedVertex>> = Atom::all()
            .iter()
            .map(|a| match *a {
                Atom::X => vec![kernel.pack(ctx.x())],
                Atom::Y => vec![kernel.pack(ctx.y())],
                Atom::O(i) => {
                    let s = ctx.side(Which::X);
                    s.class(i).iter().map(|&v| s.packed[v as usize]).collect()
                }
                Atom::OPrime(i) => {
                    let s = ctx.side(Which::Y);
                    s.class(i).iter().map(|&v| s.packed[v as usize]).collect()
                }
            })
            .collect();
        let triples: Vec<[usize; 3]> = (0..ATOM_COUNT)
            .flat_map(|a| {
                (a..ATOM_COUNT).flat_map(move |b| (b..ATOM_COUNT).map(move |c| [a, b, c]))
            })
            .collect();
        let (rows, cols, q) = (p.rows(), p.cols(), p.q());
        let dd = p.d() + 1;
        let done = AtomicU64::new(0);
        let sums = (0..n.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| -> Result<Vec<i128>> {
                let mut acc = vec![0i128; triples.len()];
                let mut hist = vec![0u64; dd];
                let hi = ((c + 1) * CHUNK).min(n);
                for idx in c * CHUNK..hi {
                    let z = kernel.pack(&MatVertex::from_index(idx, rows, cols, q)?);
                    let f: Vec<i128> = members
                        .iter()
                        .map(|m| {
                            hist.iter_mut().for_each(|h| *h = 0);
                            kernel.histogram_into(&z, m, &mut hist);
                            hist.iter()
                                .zip(&ts)
                                .map(|(&h, &t)| h as i128 * t as i128)
                                .sum()
                        })
                        .collect();
                    for (s, &[a, b, c]) in acc.iter_mut().zip(&triples) {
                        *s += f[a] * f[b] * f[c];
                    }
                }
                progress_tick(&done, hi - c * CHUNK, n, progress);
                Ok(acc)
            })
            .try_reduce(
                || vec![0i128; triples.len()],
                |a, b| Ok(a.iter().zip(&b).map(|(s, t)| s + t).collect()),
            )?;
        let mut tensor = vec![0i128; ATOM_COUNT.pow(3)];
        for (s, t) in sums.iter().zip(&triples) {
            tensor[packed_index(*t)] = *s;
        }
        Ok(Self {
            tensor,
            vertex_count: Rational::from_integer(BigInt::from(n)),
        })
    }

    /// `⟨Eu ⋆ Ev, Ew⟩` for atom combinations.
    pub fn triple(&self, u: &AtomVec, v: &AtomVec, w: &AtomVec) -> Rational {
        let mut total = Rational::zero();
        for (a, ua) in u.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, vb) in v.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let uv = ua * vb;
                for (c, wc) in w.0.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let t = self.tensor[packed_index([a, b, c])];
                    total += &uv * wc * Rational::from_integer(BigInt::from(t));
                }
            }
        }
        let n3 = &self.vertex_count * &self.vertex_count * &self.vertex_count;
        total / n3
    }
}

/// `Σ_i u_i Ô_i` as an atom combination.
pub fn lift_s(u: &SVector) -> AtomVec {
    AtomVec::from_classes(&u.0, false)
}

fn random_svector(rng: &mut ChaCha8Rng) -> SVector {
    SVector((0..6).map(|_| rat(rng.gen_range(-3..=3))).collect())
}

fn random_small_sum(p: &GraphParams, rng: &mut ChaCha8Rng, pool: &[MatVertex]) -> VertexSum {
    let mut s = VertexSum::new();
    for _ in 0..3 {
        let v = if rng.gen_bool(0.5) {
            pool[rng.gen_range(0..pool.len())]
        } else {
            let idx = rng.gen_range(0..p.vertex_count_u64().unwrap_or(1));
            MatVertex::from_index(idx, p.rows(), p.cols(), p.q()).expect("index in range")
        };
        s.add_term(v, rat(rng.gen_range(-2..=2)));
    }
    s
}

/// Heavy-mode identities: the atom tensor against the operator model and
/// against the general enumeration.
pub fn heavy_checks(
    oracle: &HeavyOracle,
    ops: &NortonOps,
    ctx: &LocalContext,
    seed: u64,
) -> Report {
    let mut r = Report::new();
    let m = &ops.model;
    let p = ctx.params();
    let nx = &m.vertex_count;
    let (ax, ay) = (AtomVec::atom(Atom::X), AtomVec::atom(Atom::Y));
    let axmy = ax.minus(&ay);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let a1 = Rational::from_integer(m.cf.a1.clone());
    let cube = oracle.triple(&ax, &ax, &ax);
    let expect = &a1 * &m.cf.spectrum.theta_star[0] / (nx * nx);
    r.check(
        "heavy-x-cube",
        "⟨Ex̂ ⋆ Ex̂, Ex̂⟩ = q¹₁₁ θ*_0/|X|²",
        cube == expect,
        || json!({ "found": rat_str(&cube), "expected": rat_str(&expect) }),
    );

    let xy = ops.x_star(&m.y);
    let y_lift = lift_s(&m.y);
    let mut bad: Option<Value> = None;
    for n in 0..5 {
        let t = random_svector(&mut rng);
        let lt = lift_s(&t);
        let model = m.inner(&xy, &t);
        let (direct, lifted) = (
            oracle.triple(&ax, &ay, &lt),
            oracle.triple(&ax, &y_lift, &lt),
        );
        if direct != model || lifted != model {
            bad = Some(
                json!({ "t": n, "model": rat_str(&model), "vertex_y": rat_str(&direct), "lifted_y": rat_str(&lifted) }),
            );
            break;
        }
    }
    r.check(
        "heavy-calibration",
        "⟨Ex̂ ⋆ Eŷ, t⟩ by enumeration equals ⟨Lx ŷ, t⟩ under G for five test vectors",
        bad.is_none(),
        || bad.clone().unwrap_or_default(),
    );

    let res = oracle.triple(&ax, &ay, &axmy);
    r.check(
        "heavy-xy-sym",
        "⟨Ex̂ ⋆ Eŷ, Ex̂ - Eŷ⟩ = 0 by enumeration",
        res.is_zero(),
        || json!({ "inner": rat_str(&res) }),
    );

    let g = &m.g;
    let c = &m.cf.c;
    let bad = (0..36).find(|&n| {
        let (i, j) = (n / 6, n % 6);
        let found = oracle.triple(
            &ax,
            &AtomVec::atom(Atom::O(j + 1)),
            &AtomVec::atom(Atom::O(i + 1)),
        );
        let expect: Rational =
            (0..6).map(|l| &c[(l, j)] * &g[(l, i)]).sum::<Rational>() / (nx * nx);
        found != expect
    });
    r.check(
        "heavy-nadj",
        "⟨Ex̂ ⋆ EÔ_j, EÔ_i⟩ = Σ_l C_{lj} G_{li}/|X|²",
        bad.is_none(),
        || json!({ "i": bad.map(|n| n / 6 + 1), "j": bad.map(|n| n % 6 + 1) }),
    );

    let mut bad: Option<Value> = None;
    for n in 0..10 {
        let (s, t) = (random_svector(&mut rng), random_svector(&mut rng));
        let model = m.inner(&ops.x_star(&s), &t);
        let found = oracle.triple(&ax, &lift_s(&s), &lift_s(&t));
        if found != model {
            bad = Some(json!({ "pair": n, "s": rats_str(&s.0), "t": rats_str(&t.0) }));
            break;
        }
    }
    r.check(
        "heavy-cross-validation",
        "⟨Lx s, t⟩ under G equals the enumerated triple on ten random pairs",
        bad.is_none(),
        || bad.clone().unwrap_or_default(),
    );

    let single = |v: &MatVertex| VertexSum::vertex(*v);
    let id = "the atom tensor agrees with direct enumeration on ⟨Ex̂ ⋆ Eŷ, Ex̂⟩";
    match brute_triple(p, &single(ctx.x()), &single(ctx.y()), &single(ctx.x())) {
        Ok(direct) => {
            let t = oracle.triple(&ax, &ay, &ax);
            r.check(
                "heavy-direct",
                id,
                direct == t,
                || json!({ "direct": rat_str(&direct), "tensor": rat_str(&t) }),
            );
        }
        Err(e) => r.fail("heavy-direct", id, json!(e.to_string())),
    }

    let pool: Vec<MatVertex> = ctx
        .side(Which::X)
        .neighbors
        .iter()
        .take(64)
        .copied()
        .collect();
    let sums = [0; 3].map(|_| random_small_sum(p, &mut rng, &pool));
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let id = "⟨u ⋆ v, w⟩ is invariant under all six argument permutations";
    let values: Result<Vec<Rational>> = perms
        .iter()
        .map(|[a, b, c]| brute_triple(p, &sums[*a], &sums[*b], &sums[*c]))
        .collect();
    match values {
        Ok(vals) => r.check(
            "heavy-permutation-symmetry",
            id,
            vals.iter().all(|v| *v == vals[0]),
            || json!({ "values": rats_str(&vals) }),
        ),
        Err(e) => r.fail("heavy-permutation-symmetry", id, json!(e.to_string())),
    }
    r
}

/// Necessary condition for `Sym(S) ⋆ Sym(S) ⊆ Sym(S)`: every product of two
/// `O∨` vectors is orthogonal to `x̂ - ŷ`. Reported as consistent or refuted only.
pub fn conjecture_probe(oracle: &HeavyOracle, ops: &NortonOps) -> Report {
    let mut r = Report::new();
    let t = &ops.model.cf.tables;
    let ax = AtomVec::atom(Atom::X);
    let axmy = ax.minus(&AtomVec::atom(Atom::Y));
    let omega = lift_s(&ops.model.omega);
    let ov: Vec<AtomVec> = (1..=6)
        .map(|i| AtomVec::atom(Atom::O(i)).axpy(&-&t.lambda[i], &ax))
        .collect();
    let mut rows = Vec::new();
    let mut consistent = true;
    for i in 0..6 {
        for j in i..6 {
            let asym = oracle.triple(&ov[i], &ov[j], &axmy);
            let om = oracle.triple(&ov[i], &ov[j], &omega);
            consistent &= asym.is_zero();
            rows.push(
                json!({ "i": i + 1, "j": j + 1, "asym": rat_str(&asym), "omega": rat_str(&om) }),
            );
        }
    }
    r.exploratory(
        "conj-sym-star-sym",
        "⟨EO∨_i ⋆ EO∨_j, Ex̂ - Eŷ⟩ = 0 for all i <= j (necessary for Sym(S) ⋆ Sym(S) ⊆ Sym(S))",
        consistent,
        json!(rows),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_index_is_symmetric() {
        assert_eq!(packed_index([3, 1, 2]), packed_index([1, 2, 3]));
        assert_eq!(packed_index([0, 0, 13]), 13);
    }

    #[test]
    fn refuses_large_configurations() {
        let p = GraphParams::new(3, 4, 9).unwrap();
        let s = VertexSum::vertex(MatVertex::zero(4, 5).unwrap());
        assert!(matches!(
            brute_triple(&p, &s, &s, &s),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn single_vertex_cube() {
        // ⟨Ex̂ ⋆ Ex̂, Ex̂⟩ = Σ_z (θ*_{∂(x,z)}/|X|)³ = Σ_i k_i θ*_i³ / |X|³
        let p = GraphParams::new(3, 3, 7).unwrap();
        let x = VertexSum::vertex(MatVertex::zero(3, 4).unwrap());
        let got = brute_triple(&p, &x, &x, &x).unwrap();
        let sizes = crate::local::bfs::expected_sphere_sizes(&p).unwrap();
        let ts = spectrum(&p).theta_star;
        let n = rat(531_441);
        let expect: Rational = sizes
            .iter()
            .zip(&ts)
            .map(|(&k, t)| rat(k as i64) * t * t * t)
            .sum::<Rational>()
            / (&n * &n * &n);
        assert_eq!(got, expect);
        // same value from the Krein identity
        assert_eq!(got, rat(103) * rat(1040) / (&n * &n));
    }
}
