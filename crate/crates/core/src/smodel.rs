//! Six-dimensional coordinate model of `S = span{EÔ_1, ..., EÔ_6}`.
//!
//! Every vector is stored in the `Ô` chart. The swap `σ` exchanging the roles
//! of `x` and `y` acts by the matrix `T` whose column `j` holds the
//! coordinates of `EÔ′_j = EÔ_j - λ_j(Ex̂ - Eŷ)`.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::eoracle::{e_inner, VertexSum};
use crate::error::{Error, Result};
use crate::linalg::{rat, rat_str, rats_str, RatMatrix, Rational};
use crate::local::{LocalContext, Which};
use crate::params::{ClosedForms, GraphParams};
use crate::report::Report;

/// Coordinates in the basis `EÔ_1..EÔ_6`; index 0 holds the `Ô_1` coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SVector(pub Vec<Rational>);

impl SVector {
    pub fn zero() -> Self {
        Self(vec![Rational::zero(); 6])
    }

    /// `EÔ_i` for `1 <= i <= 6`.
    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i - 1] = rat(1);
        v
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.0[i - 1]
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

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn apply(m: &RatMatrix, v: &Self) -> Self {
        Self(m.mul_vec(&v.0))
    }

    pub fn to_json(&self) -> Value {
        json!(rats_str(&self.0))
    }
}

/// Index `j` of every table below is 0-based, holding the object with subscript `j + 1`.
#[derive(Clone, Debug)]
pub struct SModel {
    pub cf: ClosedForms,
    pub vertex_count: Rational,
    /// `G_{ij} = |X| ⟨EÔ_i, EÔ_j⟩`.
    pub g: RatMatrix,
    pub t: RatMatrix,
    pub t_inv: RatMatrix,
    pub x: SVector,
    pub y: SVector,
    pub o_prime: Vec<SVector>,
    pub o_check: Vec<SVector>,
    pub h: Vec<SVector>,
    pub h_prime: Vec<SVector>,
    pub h_check: Vec<SVector>,
    pub omega: SVector,
}

impl SModel {
    /// Populates every named vector from the closed forms alone.
    pub fn from_closed_forms(cf: &ClosedForms) -> Result<Self> {
        let p = &cf.params;
        let t = &cf.tables;
        let q = rat(p.q() as i64);
        let c = rat(1) / Rational::from_integer(p.pow(cf.k - 1));
        let x = SVector(vec![rat(1) / cf.theta1(); 6]);
        let y = x
            .scaled(&-((rat(1) - &c) / (&q - rat(1))))
            .axpy(&c, &SVector::basis(1))
            .axpy(&-&c, &SVector::basis(2));
        let xmy = x.minus(&y);
        let o_prime: Vec<SVector> = (1..=6)
            .map(|j| SVector::basis(j).axpy(&-&t.lambda[j], &xmy))
            .collect();
        let tm = RatMatrix::from_columns(&o_prime.iter().map(|v| v.0.clone()).collect::<Vec<_>>());
        let t_inv = tm.inverse().map_err(|_| Error::Singular("swap matrix T"))?;
        let o_check = (1..=6)
            .map(|i| SVector::basis(i).axpy(&-&t.lambda[i], &x))
            .collect();
        let h: Vec<SVector> = (0..6).map(|j| SVector(cf.h.column(j))).collect();
        let h_prime = h.iter().map(|v| SVector::apply(&tm, v)).collect();
        let h_check = (1..=6).map(|j| h[j - 1].axpy(&-&t.mu[j], &x)).collect();
        let omega = SVector(cf.h.column(5));
        Ok(Self {
            cf: cf.clone(),
            vertex_count: cf.vertex_count(),
            g: cf.g.clone(),
            t: tm,
            t_inv,
            x,
            y,
            o_prime,
            o_check,
            h,
            h_prime,
            h_check,
            omega,
        })
    }

    pub fn params(&self) -> &GraphParams {
        &self.cf.params
    }

    /// `uᵗ (G/|X|) v`.
    pub fn inner(&self, u: &SVector, v: &SVector) -> Rational {
        self.g.bilinear(&u.0, &v.0) / &self.vertex_count
    }

    pub fn gram(&self, list: &[SVector]) -> RatMatrix {
        RatMatrix::from_fn(list.len(), list.len(), |i, j| {
            self.inner(&list[i], &list[j])
        })
    }

    /// Rank of the Gram matrix; equals the dimension of the span since `G > 0`.
    pub fn rank(&self, list: &[SVector]) -> usize {
        self.gram(list).rank()
    }

    /// `σ u`.
    pub fn swap(&self, u: &SVector) -> SVector {
        SVector::apply(&self.t, u)
    }

    pub fn x_minus_y(&self) -> SVector {
        self.x.minus(&self.y)
    }

    pub fn x_plus_y(&self) -> SVector {
        self.x.plus(&self.y)
    }

    /// Orthogonal split `u = sym + asym` with `asym ∈ span(x̂ - ŷ)`.
    pub fn decompose(&self, u: &SVector) -> (SVector, SVector) {
        let a = self.x_minus_y();
        let asym = a.scaled(&(self.inner(u, &a) / self.inner(&a, &a)));
        (u.minus(&asym), asym)
    }

    /// `u` with its `x̂ - ŷ` component removed; zero iff `u ∈ span(x̂ - ŷ)`.
    pub fn off_asym(&self, u: &SVector) -> SVector {
        self.decompose(u).0
    }

    pub fn to_json(&self) -> Value {
        let list =
            |vs: &[SVector]| Value::from(vs.iter().map(SVector::to_json).collect::<Vec<_>>());
        json!({
            "closed_forms": self.cf.to_json(),
            "vertex_count": rat_str(&self.vertex_count),
            "G": self.g.to_strings(),
            "T": self.t.to_strings(),
            "x": self.x.to_json(),
            "y": self.y.to_json(),
            "o_prime": list(&self.o_prime),
            "o_check": list(&self.o_check),
            "h": list(&self.h),
            "h_prime": list(&self.h_prime),
            "h_check": list(&self.h_check),
            "omega": self.omega.to_json(),
        })
    }
}

pub fn build_s_model(p: &GraphParams, k: usize) -> Result<SModel> {
    SModel::from_closed_forms(&ClosedForms::new(p, k)?)
}

fn vec_witness(found: &SVector, expected: &SVector) -> Value {
    json!({ "found": found.to_json(), "expected": expected.to_json() })
}

fn first_bad(n: usize, mut ok: impl FnMut(usize) -> bool) -> Option<usize> {
    (0..n).find(|&j| !ok(j))
}

/// Identities of the coordinate model that need no graph.
pub fn verify_s_model(m: &SModel) -> Report {
    let mut r = Report::new();
    let t = &m.cf.tables;
    let nx = &m.vertex_count;
    let ts = &m.cf.spectrum.theta_star;
    let theta1 = m.cf.theta1();
    let xmy = m.x_minus_y();
    let xpy = m.x_plus_y();
    let id6 = RatMatrix::identity(6);

    let minors = m.g.leading_minors();
    r.check(
        "s-g-positive",
        "all leading principal minors of G are positive",
        minors.iter().all(Signed::is_positive),
        || json!({ "minors": rats_str(&minors) }),
    );
    let tt = &m.t * &m.t;
    r.check(
        "s-swap-involution",
        "T² = I",
        tt == id6,
        || json!({ "T2": tt.to_strings() }),
    );
    let tgt = &(&m.t.transpose() * &m.g) * &m.t;
    r.check(
        "s-swap-isometry",
        "Tᵗ G T = G",
        tgt == m.g,
        || json!({ "TtGT": tgt.to_strings() }),
    );
    let sx = m.swap(&m.x);
    r.check("s-swap-x", "σ x̂ = ŷ", sx == m.y, || {
        vec_witness(&sx, &m.y)
    });

    let xx = m.inner(&m.x, &m.x);
    let xy = m.inner(&m.x, &m.y);
    let ok = xx == &ts[0] / nx && xy == &ts[m.cf.k] / nx;
    r.check(
        "s-inner-dual",
        "⟨x̂,x̂⟩ = θ*_0/|X| and ⟨x̂,ŷ⟩ = θ*_k/|X| in coordinates",
        ok,
        || json!({ "xx": rat_str(&xx), "xy": rat_str(&xy) }),
    );

    let rank = m.rank(&m.h);
    r.check(
        "s-h-basis",
        "h_1..h_6 span S",
        rank == 6,
        || json!({ "rank": rank }),
    );
    let h1 = m.x.scaled(theta1);
    r.check("s-h1-x", "h_1 = θ_1 x̂", m.h[0] == h1, || {
        vec_witness(&m.h[0], &h1)
    });
    let diag = RatMatrix::diag(
        &(1..=6)
            .map(|j| &t.epsfac[j] * &t.eta[j] / nx)
            .collect::<Vec<_>>(),
    );
    let gh = m.gram(&m.h);
    r.check(
        "s-h-orthogonal",
        "⟨h_j, h_l⟩ = δ_{jl} ε_jη_j/|X|",
        gh == diag,
        || json!({ "gram": gh.to_strings() }),
    );
    let ghp = m.gram(&m.h_prime);
    r.check(
        "s-hprime-orthogonal",
        "⟨h′_j, h′_l⟩ = δ_{jl} ε_jη_j/|X|",
        ghp == diag,
        || json!({ "gram": ghp.to_strings() }),
    );
    let ey = (1..=6).fold(SVector::zero(), |a, j| a.axpy(&t.gamma[j], &m.h[j - 1]));
    r.check("s-gamma-expansion", "ŷ = Σ_j γ_j h_j", ey == m.y, || {
        vec_witness(&ey, &m.y)
    });
    let bad = first_bad(6, |j| {
        m.h[j].minus(&m.h_prime[j]) == xmy.scaled(&t.mu[j + 1])
    });
    r.check(
        "s-h-minus-hprime",
        "h_j - h′_j = μ_j(x̂ - ŷ) for all j",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );

    r.check(
        "s-hcheck-one-zero",
        "h∨_1 = 0",
        m.h_check[0].is_zero(),
        || m.h_check[0].to_json(),
    );
    let sym_hv = &m.h_check[1..];
    let rank = m.rank(sym_hv);
    let bad = first_bad(5, |j| {
        m.inner(&sym_hv[j], &xmy).is_zero() && m.swap(&sym_hv[j]) == sym_hv[j]
    });
    r.check(
        "s-hcheck-sym-basis",
        "h∨_2..h∨_6 are σ-fixed, orthogonal to x̂ - ŷ, and of rank 5",
        rank == 5 && bad.is_none(),
        || json!({ "rank": rank, "j": bad.map(|j| j + 2) }),
    );
    let bad = first_bad(6, |j| {
        let via_ov = (0..6).fold(SVector::zero(), |a, i| {
            a.axpy(&m.cf.h[(i, j)], &m.o_check[i])
        });
        via_ov == m.h_check[j]
    });
    r.check(
        "s-hcheck-ocheck",
        "h∨_j = Σ_i H_{ij} O∨_i",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );
    let ehv = (2..=5).fold(SVector::zero(), |a, j| {
        a.axpy(&t.gamma[j], &m.h_check[j - 1])
    });
    r.check(
        "s-hcheck-xpy",
        "x̂ + ŷ = Σ_{j=2..5} γ_j h∨_j",
        ehv == xpy,
        || vec_witness(&ehv, &xpy),
    );

    let bad = first_bad(6, |i| m.inner(&m.o_check[i], &xmy).is_zero());
    r.check(
        "s-ocheck-orthogonal",
        "⟨O∨_i, x̂ - ŷ⟩ = 0",
        bad.is_none(),
        || json!({ "i": bad.map(|i| i + 1) }),
    );

    let sym_dim = 6 - (&m.t - &id6).rank();
    let asym_dim = 6 - (&m.t + &id6).rank();
    let anti = m.swap(&xmy) == xmy.scaled(&rat(-1));
    r.check(
        "s-sym-asym-dims",
        "dim Sym(S) = 5, dim ASym(S) = 1 = dim span(x̂ - ŷ)",
        sym_dim == 5 && asym_dim == 1 && anti,
        || json!({ "sym": sym_dim, "asym": asym_dim, "xmy_antisymmetric": anti }),
    );

    let (s, _) = m.decompose(&xmy);
    let (_, a) = m.decompose(&xpy);
    let bad = first_bad(6, |i| {
        let (sym, asym) = m.decompose(&SVector::basis(i + 1));
        asym == xmy.scaled(&(&t.lambda[i + 1] / rat(2))) && m.swap(&sym) == sym
    });
    r.check(
        "s-decompose",
        "x̂ - ŷ is antisymmetric, x̂ + ŷ symmetric, and Ô_i splits with antisymmetric part (λ_i/2)(x̂ - ŷ)",
        s.is_zero() && a.is_zero() && bad.is_none(),
        || json!({ "i": bad.map(|i| i + 1) }),
    );
    r
}

fn random_svector(rng: &mut ChaCha8Rng) -> SVector {
    SVector((0..6).map(|_| rat(rng.gen_range(-3..=3))).collect())
}

/// Lifts `Σ u_i EÔ_i` to the explicit sum over the classes of `Γ(x)`.
pub fn lift(ctx: &LocalContext, u: &SVector) -> VertexSum {
    let side = ctx.side(Which::X);
    let mut s = VertexSum::new();
    for i in 1..=6 {
        for &v in side.class(i) {
            s.add_term(side.neighbors[v as usize], u.coord(i).clone());
        }
    }
    s
}

/// `s_inner` against direct vertex-sum inner products on random pairs.
pub fn cross_validate(m: &SModel, ctx: &LocalContext, pairs: usize, seed: u64) -> Report {
    let mut r = Report::new();
    let id = "uᵗ(G/|X|)v = ⟨E lift(u), E lift(v)⟩ on random coordinate pairs";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in 0..pairs {
        let (u, v) = (random_svector(&mut rng), random_svector(&mut rng));
        let model = m.inner(&u, &v);
        match e_inner(ctx.params(), &lift(ctx, &u), &lift(ctx, &v)) {
            Ok(direct) if direct == model => {}
            Ok(direct) => {
                r.fail(
                    "s-cross-validation",
                    id,
                    json!({
                        "pair": n, "u": u.to_json(), "v": v.to_json(),
                        "model": rat_str(&model), "direct": rat_str(&direct),
                    }),
                );
                return r;
            }
            Err(e) => {
                r.fail("s-cross-validation", id, json!(e.to_string()));
                return r;
            }
        }
    }
    r.pass_with("s-cross-validation", id, json!({ "pairs": pairs }));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::{canonical_pair, CrossMode};

    fn base_model() -> SModel {
        build_s_model(&GraphParams::new(3, 3, 7).unwrap(), 2).unwrap()
    }

    #[test]
    fn coordinates_at_base() {
        let m = base_model();
        assert_eq!(m.x, SVector(vec![Rational::new(1.into(), 311.into()); 6]));
        assert!(m.h_check[0].is_zero());
        assert_eq!(m.omega, SVector(m.cf.h.column(5)));
        assert_eq!(
            m.inner(&m.x, &m.x),
            Rational::new(1040.into(), 531_441.into())
        );
    }

    #[test]
    fn model_identities_hold() {
        for (q, d, n, k) in [
            (3, 3, 7, 2),
            (3, 4, 9, 2),
            (3, 4, 9, 3),
            (5, 3, 7, 2),
            (3, 5, 11, 4),
        ] {
            let m = build_s_model(&GraphParams::new(q, d, n).unwrap(), k).unwrap();
            let r = verify_s_model(&m);
            assert!(
                r.all_pass(),
                "({q},{d},{n},{k}) {:?}",
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn perturbed_mu_is_caught() {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let mut cf = ClosedForms::new(&p, 2).unwrap();
        cf.tables.mu[3] += rat(1);
        let r = verify_s_model(&SModel::from_closed_forms(&cf).unwrap());
        assert!(!r.all_pass());
    }

    #[test]
    fn model_matches_direct_products() {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        let r = cross_validate(&base_model(), &ctx, 10, 3);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
