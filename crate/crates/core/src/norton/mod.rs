//! Norton multiplication by `Ex̂` and `Eŷ` as exact operators on `S`.
//!
//! `Lx = C/|X|` in the `Ô` chart and `Ly = T Lx T⁻¹`. No other products are
//! formed here; anything outside these two operators goes through the heavy
//! oracle.

pub mod heavy;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{rat, rat_str, rats_str, RatMatrix, Rational};
use crate::report::Report;
use crate::smodel::{SModel, SVector};

/// Default longest word in the word check; `2 + 4 + ... + 2^10 = 2046` words.
pub const DEFAULT_MAX_WORD: usize = 10;

#[derive(Clone, Debug)]
pub struct NortonOps {
    pub model: SModel,
    pub lx: RatMatrix,
    pub ly: RatMatrix,
}

impl NortonOps {
    /// Fails when `Lx ŷ ≠ Ly x̂`, which would break commutativity of `⋆`.
    pub fn new(model: &SModel) -> Result<Self> {
        let lx = model.cf.c.scale(&(rat(1) / &model.vertex_count));
        let ly = &(&model.t * &lx) * &model.t_inv;
        let ops = Self {
            model: model.clone(),
            lx,
            ly,
        };
        let (a, b) = (ops.x_star(&model.y), ops.y_star(&model.x));
        if a != b {
            return Err(Error::Inconsistency {
                table: "Norton operators",
                detail: format!(
                    "Lx ŷ = {:?} but Ly x̂ = {:?}",
                    rats_str(&a.0),
                    rats_str(&b.0)
                ),
            });
        }
        Ok(ops)
    }

    /// `Ex̂ ⋆ v`.
    pub fn x_star(&self, v: &SVector) -> SVector {
        SVector::apply(&self.lx, v)
    }

    /// `Eŷ ⋆ v`.
    pub fn y_star(&self, v: &SVector) -> SVector {
        SVector::apply(&self.ly, v)
    }

    /// `(Ex̂ + Eŷ) ⋆ v`.
    pub fn b_star(&self, v: &SVector) -> SVector {
        self.x_star(v).plus(&self.y_star(v))
    }

    /// `(Ex̂ - Eŷ) ⋆ v`.
    pub fn d_star(&self, v: &SVector) -> SVector {
        self.x_star(v).minus(&self.y_star(v))
    }

    fn nx(&self) -> &Rational {
        &self.model.vertex_count
    }
}

/// `s_j = Σ_i λ_i C_{ij} - λ_j q¹₁₁`, the eigenvalue of `EO∨_j ⋆` on `x̂ - ŷ` times `|X|`.
pub fn sym_asym_scalars(m: &SModel) -> Vec<Rational> {
    let t = &m.cf.tables;
    let a1 = Rational::from_integer(m.cf.a1.clone());
    (1..=6)
        .map(|j| {
            let s: Rational = (1..=6)
                .map(|i| &t.lambda[i] * &m.cf.c[(i - 1, j - 1)])
                .sum();
            s - &t.lambda[j] * &a1
        })
        .collect()
}

/// The same six scalars from their factored closed forms.
pub fn sym_asym_closed_forms(m: &SModel) -> Vec<Rational> {
    let p = m.params();
    let k = m.cf.k;
    let pw = |e: usize| Rational::from_integer(p.pow(e));
    let q = rat(p.q() as i64);
    let (qd, qm, qk, qk1) = (pw(p.d()), pw(p.m()), pw(k), pw(k - 1));
    vec![
        &qk1 * (&qd + &qm - rat(2) * &qk1 - &q),
        rat(-2) * &qk1 * (&qk1 - rat(1)),
        -(&q - rat(2)) * &qk1 * (rat(2) * &qk1 - rat(1)),
        (&qd - rat(2) * &qk) * (&qm - &qk) / &q,
        (&qd - &qk) * (&qm - rat(2) * &qk) / &q,
        rat(-2) * (&qd - &qk) * (&qm - &qk) / &q,
    ]
}

fn vw(v: &SVector) -> Value {
    v.to_json()
}

fn first_bad(n: usize, mut ok: impl FnMut(usize) -> bool) -> Option<usize> {
    (0..n).find(|&j| !ok(j))
}

/// Every product identity expressible through `Lx` and `Ly`.
pub fn verify_norton_identities(ops: &NortonOps) -> Report {
    let mut r = Report::new();
    let m = &ops.model;
    let t = &m.cf.tables;
    let ts = &m.cf.spectrum.theta_star;
    let th = &m.cf.spectrum.theta;
    let k = m.cf.k;
    let nx = ops.nx();
    let (x, y) = (&m.x, &m.y);
    let xmy = m.x_minus_y();
    let xpy = m.x_plus_y();
    let a1 = Rational::from_integer(m.cf.a1.clone());
    let cm = &m.cf.c;

    let xx = ops.x_star(x);
    let expect = x.scaled(&(&a1 / nx));
    r.check(
        "n-x-star-x",
        "Ex̂ ⋆ Ex̂ = q¹₁₁ Ex̂/|X|",
        xx == expect,
        || json!({ "found": vw(&xx) }),
    );
    let yy = ops.y_star(y);
    let expect = y.scaled(&(&a1 / nx));
    r.check(
        "n-y-star-y",
        "Eŷ ⋆ Eŷ = q¹₁₁ Eŷ/|X|",
        yy == expect,
        || json!({ "found": vw(&yy) }),
    );

    let xy = ops.x_star(y);
    let yx = ops.y_star(x);
    r.check(
        "n-commute",
        "Ex̂ ⋆ Eŷ = Eŷ ⋆ Ex̂",
        xy == yx,
        || json!({ "xy": vw(&xy), "yx": vw(&yx) }),
    );
    let den = nx * (&th[1] - &th[2]);
    let closed = SVector::basis(1)
        .scaled(&(&ts[k - 1] - &ts[k]))
        .axpy(&(&ts[k + 1] - &ts[k]), &SVector::basis(6))
        .axpy(&((&th[1] - &th[2]) * &ts[k]), x)
        .axpy(&(&th[2] - &th[0]), y)
        .scaled(&(rat(1) / &den));
    let alt = m.o_check[0]
        .scaled(&(&ts[k - 1] - &ts[k]))
        .axpy(&(&ts[k + 1] - &ts[k]), &m.o_check[5])
        .axpy(&(&th[2] - &th[0]), &xpy)
        .scaled(&(rat(1) / &den));
    r.check(
        "n-x-star-y",
        "|X|(θ_1-θ_2) Ex̂⋆Eŷ = (θ*_{k-1}-θ*_k)EÔ_1 + (θ*_{k+1}-θ*_k)EÔ_6 + (θ_1-θ_2)θ*_k Ex̂ + (θ_2-θ_0)Eŷ",
        xy == closed,
        || json!({ "found": vw(&xy), "closed": vw(&closed) }),
    );
    r.check(
        "n-x-star-y-check",
        "|X|(θ_1-θ_2) Ex̂⋆Eŷ = (θ*_{k-1}-θ*_k)EO∨_1 + (θ*_{k+1}-θ*_k)EO∨_6 + (θ_2-θ_0)(Ex̂+Eŷ)",
        xy == alt,
        || json!({ "found": vw(&xy), "closed": vw(&alt) }),
    );
    let res = m.inner(&xy, &xmy);
    r.check(
        "n-xy-sym",
        "Ex̂ ⋆ Eŷ ∈ Sym(S)",
        res.is_zero(),
        || json!({ "inner": rat_str(&res) }),
    );

    let via_h = (1..=5).fold(SVector::zero(), |a, j| {
        a.axpy(&(&t.gamma[j] * &t.vartheta[j] / nx), &m.h[j - 1])
    });
    r.check(
        "n-xyh",
        "Ex̂ ⋆ Eŷ = |X|⁻¹ Σ_{j=1..5} γ_jϑ_j h_j",
        via_h == xy,
        || json!({ "via_h": vw(&via_h) }),
    );
    let via_hv = (2..=5).fold(SVector::zero(), |a, j| {
        a.axpy(&(&t.gamma[j] * &t.vartheta[j] / nx), &m.h_check[j - 1])
    });
    r.check(
        "n-xyhv",
        "Ex̂ ⋆ Eŷ = |X|⁻¹ Σ_{j=2..5} γ_jϑ_j h∨_j",
        via_hv == xy,
        || json!({ "via_hcheck": vw(&via_hv) }),
    );

    let bad = first_bad(6, |j| {
        ops.x_star(&m.h[j]) == m.h[j].scaled(&(&t.vartheta[j + 1] / nx))
    });
    r.check(
        "n-h-eigen",
        "Ex̂ ⋆ h_j = ϑ_j h_j/|X| for all j",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );
    let bad = first_bad(6, |j| {
        ops.y_star(&m.h_prime[j]) == m.h_prime[j].scaled(&(&t.vartheta[j + 1] / nx))
    });
    r.check(
        "n-hprime-eigen",
        "Eŷ ⋆ h′_j = ϑ_j h′_j/|X| for all j",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );

    let s = sym_asym_scalars(m);
    let cs = sym_asym_closed_forms(m);
    let c_ov = |j: usize| {
        (0..6).fold(SVector::zero(), |a, i| {
            a.axpy(&(&cm[(i, j)] / nx), &m.o_check[i])
        })
    };
    let bad = first_bad(6, |j| {
        ops.x_star(&m.o_check[j]) == c_ov(j).axpy(&(&s[j] / nx), x)
            && ops.y_star(&m.o_check[j]) == c_ov(j).axpy(&(&s[j] / nx), y)
    });
    r.check(
        "n-x-ocheck",
        "Ex̂ ⋆ EO∨_j = |X|⁻¹ Σ_i C_{ij} EO∨_i + s_j Ex̂/|X|, and likewise with ŷ",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );
    let bad = first_bad(6, |j| {
        ops.d_star(&m.o_check[j]) == xmy.scaled(&(&cs[j] / nx))
    });
    r.check(
        "n-sym-star-asym",
        "EO∨_j ⋆ (Ex̂ - Eŷ) = s_j(Ex̂ - Eŷ)/|X| with the six factored s_j",
        bad.is_none() && s == cs,
        || json!({ "j": bad.map(|j| j + 1), "s": rats_str(&s), "closed": rats_str(&cs) }),
    );
    let bad = first_bad(36, |n| {
        m.inner(&ops.d_star(&m.o_check[n / 6]), &m.o_check[n % 6])
            .is_zero()
    });
    r.check(
        "n-sym-asym-in-asym",
        "Sym(S) ⋆ ASym(S) ⊆ ASym(S)",
        bad.is_none(),
        || json!({ "j": bad.map(|n| n / 6 + 1), "i": bad.map(|n| n % 6 + 1) }),
    );
    let dd = ops
        .x_star(x)
        .axpy(&rat(-2), &ops.x_star(y))
        .plus(&ops.y_star(y));
    let res = m.inner(&dd, &xmy);
    r.check(
        "n-asym-asym-in-sym",
        "ASym(S) ⋆ ASym(S) ⊆ Sym(S)",
        res.is_zero(),
        || json!({ "product": vw(&dd), "inner": rat_str(&res) }),
    );
    let bad = first_bad(6, |j| {
        ops.b_star(&m.o_check[j]) == c_ov(j).scaled(&rat(2)).axpy(&(&s[j] / nx), &xpy)
            && m.inner(&ops.b_star(&m.o_check[j]), &xmy).is_zero()
    });
    r.check(
        "n-xpy-sym",
        "(Ex̂ + Eŷ) ⋆ EO∨_j = 2|X|⁻¹ Σ_i C_{ij} EO∨_i + s_j(Ex̂ + Eŷ)/|X| ∈ Sym(S)",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );

    let shift = |j: usize| (&t.vartheta[j + 1] - &t.vartheta[1]) * &t.mu[j + 1] / nx;
    let scale = |j: usize| &t.vartheta[j + 1] / nx;
    let bad = first_bad(6, |j| {
        let hv = &m.h_check[j];
        ops.x_star(hv) == hv.scaled(&scale(j)).axpy(&shift(j), x)
            && ops.y_star(hv) == hv.scaled(&scale(j)).axpy(&shift(j), y)
    });
    r.check(
        "n-xy-act-hcheck",
        "Ex̂ ⋆ h∨_j = |X|⁻¹ϑ_j h∨_j + |X|⁻¹(ϑ_j - ϑ_1)μ_j Ex̂, and likewise with ŷ",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );
    let bad = first_bad(6, |j| ops.d_star(&m.h_check[j]) == xmy.scaled(&shift(j)));
    r.check(
        "n-hcheck-diff",
        "h∨_j ⋆ (Ex̂ - Eŷ) = |X|⁻¹(ϑ_j - ϑ_1)μ_j(Ex̂ - Eŷ)",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );
    let bad = first_bad(6, |j| {
        let hv = &m.h_check[j];
        ops.b_star(hv) == hv.scaled(&(rat(2) * scale(j))).axpy(&shift(j), &xpy)
    });
    r.check(
        "n-xpy-act-hcheck",
        "(Ex̂ + Eŷ) ⋆ h∨_j = 2|X|⁻¹ϑ_j h∨_j + |X|⁻¹(ϑ_j - ϑ_1)μ_j(Ex̂ + Eŷ)",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );
    r
}

/// Stacks vectors as rows.
fn rows(vs: &[&SVector]) -> RatMatrix {
    RatMatrix::from_rows(vs.iter().map(|v| v.0.clone()).collect())
}

fn pairwise_orthogonal(m: &SModel, vs: &[&SVector]) -> bool {
    (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| m.inner(vs[i], vs[j]).is_zero()))
}

/// `ω = h_6`: common eigenvector, swap invariance, and the splittings of `S` around it.
pub fn verify_omega(ops: &NortonOps) -> Report {
    let mut r = Report::new();
    let m = &ops.model;
    let t = &m.cf.tables;
    let w = &m.omega;
    let q = rat(m.params().q() as i64);
    let ev = -&q / ops.nx();
    let xmy = m.x_minus_y();

    let (lw, lyw) = (ops.x_star(w), ops.y_star(w));
    let expect = w.scaled(&ev);
    r.check(
        "prop-omega-eigen",
        "Ex̂ ⋆ ω = Eŷ ⋆ ω = -q ω/|X|",
        lw == expect && lyw == expect,
        || json!({ "eigenvalue": rat_str(&ev), "x_star": vw(&lw), "y_star": vw(&lyw) }),
    );
    let sw = m.swap(w);
    r.check(
        "omega-swap",
        "σ ω = ω",
        sw == *w,
        || json!({ "swapped": vw(&sw) }),
    );
    let (xw, yw) = (m.inner(&m.x, w), m.inner(&m.y, w));
    r.check(
        "omega-perp-xy",
        "⟨Ex̂, ω⟩ = ⟨Eŷ, ω⟩ = 0",
        xw.is_zero() && yw.is_zero(),
        || json!({ "x": rat_str(&xw), "y": rat_str(&yw) }),
    );
    let via_ov = (1..=6).fold(SVector::zero(), |a, i| {
        a.axpy(&t.omega[i], &m.o_check[i - 1])
    });
    r.check(
        "omega-ocheck",
        "ω = Σ_i ω_i EO∨_i",
        via_ov == *w,
        || json!({ "via_ocheck": vw(&via_ov) }),
    );

    let perp: Vec<&SVector> = m.h[..5].iter().collect();
    let bad = first_bad(5, |j| {
        m.inner(&ops.x_star(perp[j]), w).is_zero() && m.inner(&ops.y_star(perp[j]), w).is_zero()
    });
    r.check(
        "omega-perp-invariant",
        "Ex̂ ⋆ ω⊥ ⊆ ω⊥ and Eŷ ⋆ ω⊥ ⊆ ω⊥",
        bad.is_none(),
        || json!({ "j": bad.map(|j| j + 1) }),
    );

    let hp: Vec<&SVector> = m.h_prime[..5].iter().collect();
    let ok = |vs: &[&SVector]| {
        vs.iter().all(|v| m.inner(v, w).is_zero())
            && pairwise_orthogonal(m, vs)
            && rows(vs).rank() == 5
    };
    r.check(
        "omega-perp-bases",
        "h_1..h_5 and h′_1..h′_5 are orthogonal bases of ω⊥",
        ok(&perp) && ok(&hp),
        || json!({ "h": ok(&perp), "h_prime": ok(&hp) }),
    );

    let hv: Vec<&SVector> = m.h_check[1..5].iter().collect();
    let in_sym = |v: &SVector| m.swap(v) == *v;
    let sym_perp = hv.iter().all(|v| in_sym(v) && m.inner(v, w).is_zero());
    let free = {
        let fixed = &m.t - &RatMatrix::identity(6);
        let mut stacked: Vec<Vec<Rational>> = (0..6).map(|i| fixed.row(i).to_vec()).collect();
        stacked.push(m.g.mul_vec(&w.0));
        6 - RatMatrix::from_rows(stacked).rank()
    };
    r.check(
        "omega-perp-sym-basis",
        "h∨_2..h∨_5 form a basis of ω⊥ ∩ Sym(S), which has dimension 4",
        sym_perp && rows(&hv).rank() == 4 && free == 4,
        || json!({ "members_ok": sym_perp, "rank": rows(&hv).rank(), "dimension": free }),
    );

    let mut full: Vec<&SVector> = vec![w, &xmy];
    full.extend(hv.iter().copied());
    let cross_orth = hv
        .iter()
        .all(|v| m.inner(v, w).is_zero() && m.inner(v, &xmy).is_zero());
    let s_split = rows(&full).rank() == 6 && m.inner(w, &xmy).is_zero() && cross_orth;
    let mut sym_list: Vec<&SVector> = vec![w];
    sym_list.extend(hv.iter().copied());
    let sym_split = in_sym(w) && hv.iter().all(|v| in_sym(v)) && rows(&sym_list).rank() == 5;
    let mut perp_list: Vec<&SVector> = vec![&xmy];
    perp_list.extend(hv.iter().copied());
    let perp_split = m.inner(&xmy, w).is_zero() && rows(&perp_list).rank() == 5;
    r.check(
        "omega-decompositions",
        "S = span ω ⊕ ASym(S) ⊕ (ω⊥ ∩ Sym(S)), Sym(S) = span ω ⊕ (ω⊥ ∩ Sym(S)), ω⊥ = ASym(S) ⊕ (ω⊥ ∩ Sym(S))",
        s_split && sym_split && perp_split,
        || json!({ "s": s_split, "sym": sym_split, "omega_perp": perp_split }),
    );
    r
}

/// `v, f(v), f(f(v)), ...`, `len` vectors in all.
fn orbit(v: &SVector, len: usize, f: impl Fn(&SVector) -> SVector) -> Vec<SVector> {
    let mut out = vec![v.clone()];
    while out.len() < len {
        let next = f(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// Families generated from `x̂` and `ŷ` that span `ω⊥` and `ω⊥ ∩ Sym(S)`.
pub fn verify_generation(ops: &NortonOps) -> Report {
    let mut r = Report::new();
    let m = &ops.model;
    let w = &m.omega;
    let perp = |vs: &[SVector]| vs.iter().all(|v| m.inner(v, w).is_zero());

    let xf = orbit(&m.y, 5, |v| ops.x_star(v));
    let (rank, inside) = (m.rank(&xf), perp(&xf));
    r.check(
        "gen-x-family",
        "ŷ, Ex̂⋆ŷ, ..., (Ex̂⋆)⁴ŷ form a basis of ω⊥",
        rank == 5 && inside,
        || json!({ "rank": rank, "in_omega_perp": inside }),
    );
    let yf = orbit(&m.x, 5, |v| ops.y_star(v));
    let (rank, inside) = (m.rank(&yf), perp(&yf));
    r.check(
        "gen-y-family",
        "x̂, Eŷ⋆x̂, ..., (Eŷ⋆)⁴x̂ form a basis of ω⊥",
        rank == 5 && inside,
        || json!({ "rank": rank, "in_omega_perp": inside }),
    );
    let bf = orbit(&m.x_plus_y(), 4, |v| ops.b_star(v));
    let sym = bf.iter().all(|v| m.swap(v) == *v);
    let (rank, inside) = (m.rank(&bf), perp(&bf));
    r.check(
        "gen-b-family",
        "B, B⋆B, B⋆(B⋆B), B⋆(B⋆(B⋆B)) with B = Ex̂ + Eŷ form a basis of ω⊥ ∩ Sym(S)",
        rank == 4 && inside && sym,
        || json!({ "rank": rank, "in_omega_perp": inside, "symmetric": sym }),
    );
    r
}

/// Word over `{x, y}` of length `len`, bit `i` set when letter `i` (from the left) is `y`.
fn word_string(bits: usize, len: usize) -> String {
    (0..len)
        .map(|i| if bits >> i & 1 == 1 { 'y' } else { 'x' })
        .collect()
}

/// `v(w) = Ez_1 ⋆ (Ez_2 ⋆ (... ⋆ Ez_n))` for every word of each length, indexed by bits.
fn word_vectors(
    n_max: usize,
    base: [&SVector; 2],
    apply: impl Fn(bool, &SVector) -> SVector + Sync,
) -> Vec<Vec<SVector>> {
    let mut levels: Vec<Vec<SVector>> = vec![vec![base[0].clone(), base[1].clone()]];
    for len in 2..=n_max {
        let prev = levels.last().expect("level 1");
        // word = first letter + suffix; suffix bits are the word bits shifted by one
        let cur: Vec<SVector> = (0..1usize << len)
            .into_par_iter()
            .map(|bits| apply(bits & 1 == 1, &prev[bits >> 1]))
            .collect();
        levels.push(cur);
    }
    levels
}

/// For each word `w` of length at most `n_max`, `v(w) - v(w̄) ∈ span(Ex̂ - Eŷ)`,
/// where `w̄` swaps the letters. Also checks `v(w̄) = σ v(w)` and that the
/// computation in the `Ô′` chart maps back to the same vectors.
pub fn bbalanced_word_check(ops: &NortonOps, n_max: usize) -> Report {
    let mut r = Report::new();
    let m = &ops.model;
    let id = "v(w) - v(w̄) ∈ span(Ex̂ - Eŷ) for every word w over {x, y} of length 1..n";
    if n_max == 0 {
        r.fail("thm-bbalanced", id, json!("word length must be at least 1"));
        return r;
    }
    let levels = word_vectors(n_max, [&m.x, &m.y], |is_y, v| {
        if is_y {
            ops.y_star(v)
        } else {
            ops.x_star(v)
        }
    });

    let find = |pred: &(dyn Fn(usize, usize) -> bool + Sync)| -> Option<(usize, usize)> {
        levels.iter().enumerate().find_map(|(l, lv)| {
            (0..lv.len())
                .into_par_iter()
                .find_first(|&b| !pred(l, b))
                .map(|b| (l + 1, b))
        })
    };
    let full = |len: usize| (1usize << len) - 1;
    let words: usize = levels.iter().map(Vec::len).sum();

    let bad = find(&|l, b| {
        m.off_asym(&levels[l][b].minus(&levels[l][b ^ full(l + 1)]))
            .is_zero()
    });
    match bad {
        None => r.pass_with(
            "thm-bbalanced",
            id,
            json!({ "n_max": n_max, "words": words }),
        ),
        Some((len, b)) => {
            let res = m.off_asym(&levels[len - 1][b].minus(&levels[len - 1][b ^ full(len)]));
            r.fail(
                "thm-bbalanced",
                id,
                json!({ "word": word_string(b, len), "residual": vw(&res) }),
            )
        }
    }

    let bad = find(&|l, b| levels[l][b ^ full(l + 1)] == m.swap(&levels[l][b]));
    r.check(
        "word-swap-equivariance",
        "v(w̄) = σ v(w) for every word",
        bad.is_none(),
        || json!({ "word": bad.map(|(len, b)| word_string(b, len)) }),
    );

    // In the Ô′ chart the roles of the two operators are exchanged.
    let lx_p = &(&m.t_inv * &ops.lx) * &m.t;
    let ly_p = &(&m.t_inv * &ops.ly) * &m.t;
    let (xp, yp) = (
        SVector::apply(&m.t_inv, &m.x),
        SVector::apply(&m.t_inv, &m.y),
    );
    let primed = word_vectors(n_max, [&xp, &yp], |is_y, v| {
        SVector::apply(if is_y { &ly_p } else { &lx_p }, v)
    });
    let bad = find(&|l, b| SVector::apply(&m.t, &primed[l][b]) == levels[l][b]);
    r.check(
        "word-chart-independence",
        "word vectors computed in the Ô′ chart map back to the same vectors",
        bad.is_none(),
        || json!({ "word": bad.map(|(len, b)| word_string(b, len)) }),
    );
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{ClosedForms, GraphParams};
    use crate::report::Status;
    use crate::smodel::build_s_model;

    fn ops(q: u32, d: usize, n: usize, k: usize) -> NortonOps {
        NortonOps::new(&build_s_model(&GraphParams::new(q, d, n).unwrap(), k).unwrap()).unwrap()
    }

    #[test]
    fn base_scalars() {
        let o = ops(3, 3, 7, 2);
        assert_eq!(
            sym_asym_scalars(&o.model),
            [297, -12, -15, 216, 378, -864].map(rat).to_vec()
        );
        let x4 = o.d_star(&o.model.o_check[3]);
        assert_eq!(
            x4,
            o.model
                .x_minus_y()
                .scaled(&Rational::new(648.into(), 1_594_323.into()))
        );
    }

    #[test]
    fn all_suites_pass() {
        for (q, d, n, k) in [
            (3, 3, 7, 2),
            (3, 4, 9, 2),
            (3, 4, 9, 3),
            (5, 3, 7, 2),
            (7, 4, 9, 3),
        ] {
            let o = ops(q, d, n, k);
            let mut r = verify_norton_identities(&o);
            r.extend(verify_omega(&o));
            r.extend(verify_generation(&o));
            r.extend(bbalanced_word_check(&o, 6));
            assert!(
                r.all_pass(),
                "({q},{d},{n},{k}) {:?}",
                r.failures().collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn word_indexing() {
        let o = ops(3, 3, 7, 2);
        let m = &o.model;
        let levels = word_vectors(3, [&m.x, &m.y], |is_y, v| {
            if is_y {
                o.y_star(v)
            } else {
                o.x_star(v)
            }
        });
        assert_eq!(levels.iter().map(Vec::len).collect::<Vec<_>>(), [2, 4, 8]);
        // "xy" = Ex̂ ⋆ Eŷ, bits 0b10
        assert_eq!(levels[1][0b10], o.x_star(&m.y));
        // "yxx" = Eŷ ⋆ (Ex̂ ⋆ Ex̂), bits 0b001
        assert_eq!(levels[2][0b001], o.y_star(&o.x_star(&m.x)));
        assert_eq!(word_string(0b001, 3), "yxx");
    }

    #[test]
    fn perturbed_c_breaks_eigen_relations() {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let mut cf = ClosedForms::new(&p, 2).unwrap();
        cf.c[(2, 4)] += rat(1);
        let m = crate::smodel::SModel::from_closed_forms(&cf).unwrap();
        match NortonOps::new(&m) {
            Err(_) => {}
            Ok(o) => {
                let r = verify_norton_identities(&o);
                assert_eq!(r.status("n-h-eigen"), Some(Status::Fail));
            }
        }
    }
}
