//! Closed-form parameters of the bilinear forms graph and of the six-class
//! partition of a neighborhood, with the identities that tie them together.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{is_odd_prime, PrimeField, MAX_ENTRIES};
use crate::linalg::{big, rat, rat_str, rats_str, RatMatrix, Rational};
use crate::report::Report;

/// Validated `(q, D, N)` with `q` an odd prime and `N > 2D >= 6`.
#[derive(Clone, Debug, Serialize)]
pub struct GraphParams {
    q: u32,
    #[serde(rename = "D")]
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(skip)]
    field: PrimeField,
}

impl PartialEq for GraphParams {
    fn eq(&self, other: &Self) -> bool {
        (self.q, self.d, self.n) == (other.q, other.d, other.n)
    }
}

impl Eq for GraphParams {}

impl fmt::Display for GraphParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, D={}, N={})", self.q, self.d, self.n)
    }
}

impl GraphParams {
    pub fn new(q: u32, d: usize, n: usize) -> Result<Self> {
        if !is_odd_prime(q) {
            return Err(Error::InvalidParams(format!(
                "q = {q} must be an odd prime"
            )));
        }
        if 2 * d < 6 || n <= 2 * d {
            return Err(Error::InvalidParams(format!(
                "need N > 2D >= 6, got D = {d}, N = {n}"
            )));
        }
        if d * (n - d) > MAX_ENTRIES {
            return Err(Error::UnsupportedShape {
                rows: d,
                cols: n - d,
                reason: "more entries than a vertex can hold",
            });
        }
        let field = PrimeField::new(q)?;
        Ok(Self { q, d, n, field })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N - D`.
    pub fn m(&self) -> usize {
        self.n - self.d
    }

    pub fn rows(&self) -> usize {
        self.d
    }

    pub fn cols(&self) -> usize {
        self.n - self.d
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn pow(&self, e: usize) -> BigInt {
        Pow::pow(BigInt::from(self.q), e)
    }

    pub fn vertex_count(&self) -> BigUint {
        Pow::pow(BigUint::from(self.q), self.d * self.m())
    }

    /// `|X|` when it fits in a `u64`.
    pub fn vertex_count_u64(&self) -> Option<u64> {
        self.vertex_count().to_u64()
    }

    pub fn valency(&self) -> BigInt {
        exact_div(
            (self.pow(self.m()) - 1) * (self.pow(self.d) - 1),
            BigInt::from(self.q - 1),
        )
    }

    pub fn check_distance(&self, k: usize) -> Result<()> {
        if k < 2 || k + 1 > self.d {
            return Err(Error::OutOfRange {
                what: "k",
                value: k as i64,
                lo: 2,
                hi: self.d as i64 - 1,
            });
        }
        Ok(())
    }
}

fn exact_div(a: BigInt, b: BigInt) -> BigInt {
    let (quo, rem) = a.div_rem(&b);
    debug_assert!(rem.is_zero(), "inexact division");
    quo
}

/// Six values indexed `1..=6`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table6<T>(pub [T; 6]);

impl<T> Table6<T> {
    pub fn from_fn(mut f: impl FnMut(usize) -> T) -> Self {
        Table6(std::array::from_fn(|i| f(i + 1)))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }
}

impl<T: Clone> Table6<T> {
    pub fn to_vec(&self) -> Vec<T> {
        self.0.to_vec()
    }
}

impl<T> Index<usize> for Table6<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        assert!((1..=6).contains(&i), "table index {i} outside 1..=6");
        &self.0[i - 1]
    }
}

impl<T> IndexMut<usize> for Table6<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        assert!((1..=6).contains(&i), "table index {i} outside 1..=6");
        &mut self.0[i - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionNumbers {
    pub c: BigInt,
    pub a: BigInt,
    pub b: BigInt,
}

pub fn intersection_numbers(p: &GraphParams, i: usize) -> Result<IntersectionNumbers> {
    if i > p.d() {
        return Err(Error::OutOfRange {
            what: "i",
            value: i as i64,
            lo: 0,
            hi: p.d() as i64,
        });
    }
    let q1 = BigInt::from(p.q() - 1);
    let c = if i == 0 {
        BigInt::zero()
    } else {
        exact_div(p.pow(i - 1) * (p.pow(i) - 1), q1.clone())
    };
    let b = exact_div((p.pow(p.m()) - p.pow(i)) * (p.pow(p.d()) - p.pow(i)), q1);
    let a = p.valency() - &b - &c;
    Ok(IntersectionNumbers { c, a, b })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub theta: Vec<Rational>,
    pub theta_star: Vec<Rational>,
}

impl Spectrum {
    /// `θ*_i`, or `None` outside `0..=D`.
    pub fn ts(&self, i: i64) -> Option<&Rational> {
        usize::try_from(i).ok().and_then(|i| self.theta_star.get(i))
    }

    /// `θ*_i`, panicking outside the diameter.
    pub fn t(&self, i: usize) -> &Rational {
        &self.theta_star[i]
    }
}

pub fn spectrum(p: &GraphParams) -> Spectrum {
    let q1 = rat(p.q() as i64 - 1);
    let eig = |i: usize| big(&(p.pow(p.n() - i) + 1 - p.pow(p.d()) - p.pow(p.m()))) / &q1;
    let theta: Vec<Rational> = (0..=p.d()).map(eig).collect();
    let theta_star = theta.clone();
    Spectrum { theta, theta_star }
}

/// Rational powers of `q` and the usual abbreviations.
struct Pw {
    q: Rational,
    d: usize,
    m: usize,
    n: usize,
    k: usize,
}

impl Pw {
    fn new(p: &GraphParams, k: usize) -> Self {
        Self {
            q: rat(p.q() as i64),
            d: p.d(),
            m: p.m(),
            n: p.n(),
            k,
        }
    }

    fn p(&self, e: usize) -> Rational {
        Pow::pow(&self.q, e)
    }

    fn q1(&self) -> Rational {
        &self.q - rat(1)
    }

    fn pd(&self) -> Rational {
        self.p(self.d)
    }

    fn pm(&self) -> Rational {
        self.p(self.m)
    }

    fn pk(&self) -> Rational {
        self.p(self.k)
    }

    fn pk1(&self) -> Rational {
        self.p(self.k - 1)
    }

    fn pk2(&self) -> Rational {
        self.p(self.k - 2)
    }
}

pub fn partition_sizes(p: &GraphParams, k: usize) -> Result<Table6<BigInt>> {
    p.check_distance(k)?;
    let pw = Pw::new(p, k);
    let (q, q1) = (&pw.q, pw.q1());
    let (pd, pm, pk, pk1) = (pw.pd(), pw.pm(), pw.pk(), pw.pk1());
    let sizes = [
        &pk1 * (&pk - rat(1)) / &q1,
        (&pk - rat(1)) * (&pk1 - rat(1)) / &q1,
        &pk1 * (&pk - rat(1)) * (q - rat(2)) / &q1,
        (&pm - &pk) * (&pk - rat(1)) / &q1,
        (&pd - &pk) * (&pk - rat(1)) / &q1,
        (&pm - &pk) * (&pd - &pk) / &q1,
    ];
    Ok(Table6(sizes.map(|s| {
        debug_assert!(s.is_integer());
        s.to_integer()
    })))
}

fn m6(rows: [[Rational; 6]; 6]) -> RatMatrix {
    RatMatrix::from_rows(rows.into_iter().map(Vec::from).collect())
}

/// Quotient matrix: entry `(i, j)` counts neighbors in `O_j` of a vertex of `O_i`.
pub fn closed_form_c(p: &GraphParams, k: usize) -> Result<RatMatrix> {
    p.check_distance(k)?;
    let pw = Pw::new(p, k);
    let q = &pw.q;
    let (pd, pm, pk, pk1) = (pw.pd(), pw.pm(), pw.pk(), pw.pk1());
    let z = rat(0);
    let two_pk1 = &pk1 * rat(2);
    Ok(m6([
        [
            (&pk1 - rat(1)) * rat(2),
            (&pk1 - rat(1)) * rat(2),
            (&two_pk1 - rat(1)) * (q - rat(2)),
            &pm - &pk,
            &pd - &pk,
            z.clone(),
        ],
        [
            two_pk1.clone(),
            &two_pk1 - rat(2) - q,
            &two_pk1 * (q - rat(2)),
            &pm - &pk,
            &pd - &pk,
            z.clone(),
        ],
        [
            &two_pk1 - rat(1),
            (&pk1 - rat(1)) * rat(2),
            &pk * rat(2) - &pk1 * rat(4) - q + rat(1),
            &pm - &pk,
            &pd - &pk,
            z.clone(),
        ],
        [
            pk1.clone(),
            &pk1 - rat(1),
            &pk1 * (q - rat(2)),
            &pm - q - rat(1),
            z.clone(),
            &pd - &pk,
        ],
        [
            pk1.clone(),
            &pk1 - rat(1),
            &pk1 * (q - rat(2)),
            z.clone(),
            &pd - q - rat(1),
            &pm - &pk,
        ],
        [
            z.clone(),
            z.clone(),
            z,
            &pk - rat(1),
            &pk - rat(1),
            &pm + &pd - &pk * rat(2) - q,
        ],
    ]))
}

/// Eigenvector matrix of the quotient matrix; column `j` belongs to `ϑ_j`.
pub fn closed_form_h(p: &GraphParams, k: usize) -> Result<RatMatrix> {
    p.check_distance(k)?;
    let pw = Pw::new(p, k);
    let (q, q1) = (&pw.q, pw.q1());
    let (pd, pm, pk, pk1) = (pw.pd(), pw.pm(), pw.pk(), pw.pk1());
    let pn = pw.p(pw.n);
    let one = rat(1);
    let z = rat(0);
    let a = (&pn - pw.p(pw.m + 1) - pw.p(pw.d + 1) + pw.p(pw.k + 1) - &pk + q) / (&q1 * &q1);
    let w1 = (&pd - &pk) * (&pm - &pk) * (&pk1 - rat(1)) / (&pk * &q1);
    let dk = (&pd - &pk) / &q1;
    let mk = (&pm - &pk) / &q1;
    let k1 = (&pk - rat(1)) / &q1;
    Ok(m6([
        [
            one.clone(),
            dk.clone(),
            mk.clone(),
            q - rat(2),
            a.clone(),
            w1.clone(),
        ],
        [
            one.clone(),
            dk.clone(),
            mk.clone(),
            z.clone(),
            (&pk - &pn) / &q1,
            (&pd - &pk) * (&pm - &pk) / (q * &q1),
        ],
        [one.clone(), dk.clone(), mk.clone(), rat(-1), a, w1],
        [
            one.clone(),
            dk.clone(),
            -k1.clone(),
            z.clone(),
            (&pk - &pd) / &q1,
            -(&pd - &pk) * (&pk1 - rat(1)) / &q1,
        ],
        [
            one.clone(),
            -k1.clone(),
            mk,
            z.clone(),
            (&pk - &pm) / &q1,
            -(&pm - &pk) * (&pk1 - rat(1)) / &q1,
        ],
        [
            one,
            -k1.clone(),
            -k1.clone(),
            z,
            k1,
            (&pk - rat(1)) * (&pk1 - rat(1)) / &q1,
        ],
    ]))
}

/// `G_ij = |O_i| (δ θ*_0 + C_ij θ*_1 + (|O_j| - C_ij - δ) θ*_2)`.
fn gram_from(c: &RatMatrix, osize: &Table6<BigInt>, sp: &Spectrum, swap: bool) -> RatMatrix {
    RatMatrix::from_fn(6, 6, |i, j| {
        let (a, b) = if swap { (j, i) } else { (i, j) };
        let delta = if a == b { rat(1) } else { rat(0) };
        let cab = &c[(a, b)];
        big(&osize[a + 1])
            * (&delta * sp.t(0) + cab * sp.t(1) + (big(&osize[b + 1]) - cab - &delta) * sp.t(2))
    })
}

/// `|X|` times the Gram matrix of `E Ô_1, ..., E Ô_6`.
pub fn closed_form_g(p: &GraphParams, k: usize) -> Result<RatMatrix> {
    let c = closed_form_c(p, k)?;
    Ok(gram_from(&c, &partition_sizes(p, k)?, &spectrum(p), false))
}

/// Entry `(i, j)` counts vertices of `O'_j` at distance `ell` from a vertex of `O_i`.
pub fn closed_form_d(p: &GraphParams, k: usize, ell: usize) -> Result<RatMatrix> {
    p.check_distance(k)?;
    if ell + 2 < k || ell > k + 2 {
        return Err(Error::OutOfRange {
            what: "ell",
            value: ell as i64,
            lo: k as i64 - 2,
            hi: k as i64 + 2,
        });
    }
    let pw = Pw::new(p, k);
    let (q, q1) = (&pw.q, pw.q1());
    let (pd, pm, pk, pk1, pk2) = (pw.pd(), pw.pm(), pw.pk(), pw.pk1(), pw.pk2());
    let z = || rat(0);
    let zero_row = || [z(), z(), z(), z(), z(), z()];
    let mut out = RatMatrix::zeros(6, 6);
    if ell + 2 == k {
        out[(0, 0)] = &pk2 * (&pk1 - rat(1)) / &q1;
    } else if ell + 1 == k {
        let g = (&pk1 - rat(1)) / &q1;
        let p2k3 = pw.p(2 * k - 3);
        let p2k2 = pw.p(2 * k - 2);
        out = m6([
            [
                &pk2 * (&pk1 - rat(1)) * rat(2),
                (&pk1 - rat(1)) * (&pk2 + &g),
                &g * &pk2 * (q * rat(2) - rat(1)) * (q - rat(2)),
                (&pk1 - rat(1)) * (&pm - &pk) / &q1,
                (&pk1 - rat(1)) * (&pd - &pk) / &q1,
                z(),
            ],
            [
                &pk1 * (&pk2 + &g),
                p2k3.clone(),
                &p2k3 * (q - rat(2)),
                z(),
                z(),
                z(),
            ],
            [
                &g * &pk2 * (q * rat(2) - rat(1)),
                &pk2 * (&pk1 - rat(1)),
                &pk2 * (&pk - &pk1 * rat(2) + rat(2)),
                z(),
                z(),
                z(),
            ],
            [
                (&pk1 - rat(1)) * &pk1 / &q1,
                z(),
                z(),
                p2k2.clone(),
                z(),
                z(),
            ],
            [(&pk1 - rat(1)) * &pk1 / &q1, z(), z(), z(), p2k2, z()],
            zero_row(),
        ]);
    } else if ell == k {
        let g = (&pk1 - rat(1)) / &q1;
        let h = (&pk - &pk1 + &pk2 - rat(1)) / &q1;
        let p2k3 = pw.p(2 * k - 3);
        let p2k2 = pw.p(2 * k - 2);
        let top = &pk - &pk1 + rat(1);
        out = m6([
            [
                &pk2 * &top,
                (&pk1 - rat(1)) * (&pk1 - &pk2),
                &pk2 * &top * (q - rat(2)),
                &pk1 * (&pm - &pk),
                &pk1 * (&pd - &pk),
                (&pm - &pk) * (&pd - &pk) / &q1,
            ],
            [
                &p2k3 * &q1,
                (&pk - rat(1)) * (&pk1 - rat(1)) / &q1 - &p2k3,
                (q - rat(2)) * &pk1 * &h,
                (&pm - &pk) * (&pk - rat(1)) / &q1,
                (&pd - &pk) * (&pk - rat(1)) / &q1,
                z(),
            ],
            [
                &pk2 * &top,
                (&pk1 - rat(1)) * &h,
                &pk2 * (q - rat(2)) * (&pk + &g) - &pk1,
                (&pm - &pk) * (&pk - rat(1)) / &q1,
                (&pd - &pk) * (&pk - rat(1)) / &q1,
                z(),
            ],
            [
                p2k2.clone(),
                (&pk1 - rat(1)) * (&pk - rat(1)) / &q1,
                &pk1 * (q - rat(2)) * (&pk - rat(1)) / &q1,
                (&pm - &pk) * (&pk - rat(1)) / &q1 - &p2k2,
                (&pd - &pk) * (&pk1 - rat(1)) / &q1,
                &pk1 * (&pd - &pk),
            ],
            [
                p2k2.clone(),
                (&pk1 - rat(1)) * (&pk - rat(1)) / &q1,
                &pk1 * (q - rat(2)) * (&pk - rat(1)) / &q1,
                (&pm - &pk) * (&pk1 - rat(1)) / &q1,
                (&pd - &pk) * (&pk - rat(1)) / &q1 - &p2k2,
                (&pm - &pk) * &pk1,
            ],
            [
                (&pk - rat(1)) * &pk1 / &q1,
                z(),
                z(),
                &pk1 * (&pk - rat(1)),
                &pk1 * (&pk - rat(1)),
                &q1 * pw.p(2 * k - 1) + &pk1,
            ],
        ]);
    } else if ell == k + 1 {
        let md = (&pm - &pk) * (&pd - &pk) / &q1;
        out = m6([
            zero_row(),
            [z(), z(), z(), z(), z(), md.clone()],
            [z(), z(), z(), z(), z(), md],
            [
                z(),
                z(),
                z(),
                z(),
                (&pd - &pk) * &pk1,
                (&pd - &pk) * (&pm - &pk * rat(2) + &pk1) / &q1,
            ],
            [
                z(),
                z(),
                z(),
                (&pm - &pk) * &pk1,
                z(),
                (&pm - &pk) * (&pd - &pk * rat(2) + &pk1) / &q1,
            ],
            [
                z(),
                (&pk - rat(1)) * (&pk1 - rat(1)) / &q1,
                (&pk - rat(1)) * &pk1 * (q - rat(2)) / &q1,
                (&pk - rat(1)) * (&pm - &pk * rat(2) + &pk1) / &q1,
                (&pk - rat(1)) * (&pd - &pk * rat(2) + &pk1) / &q1,
                &pk1 * (pw.p(pw.d + 1) + pw.p(pw.m + 1) - pw.p(k + 2) - pw.p(k + 1) * rat(2) + &pk
                    - rat(1)),
            ],
        ]);
    } else {
        out[(5, 5)] = (&pd - pw.p(k + 1)) * (&pm - pw.p(k + 1)) / &q1;
    }
    Ok(out)
}

/// Per-class scalar tables for a fixed distance `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarTables {
    pub k: usize,
    pub lambda: Table6<Rational>,
    pub mu: Table6<Rational>,
    pub gamma: Table6<Rational>,
    pub omega: Table6<Rational>,
    pub eta: Table6<Rational>,
    pub epsfac: Table6<Rational>,
    pub vartheta: Table6<Rational>,
    pub eps_offset: Table6<i8>,
}

pub const EPS_OFFSET: [i8; 6] = [-1, 0, 0, 0, 0, 1];

/// `λ_i = |O_i| (θ*_1 - θ*_{k+ε(i)}) / (θ*_0 - θ*_k)`.
fn lambda_from_spectrum(sp: &Spectrum, osize: &Table6<BigInt>, k: usize) -> Table6<Rational> {
    Table6::from_fn(|i| {
        let shifted = (k as i64 + EPS_OFFSET[i - 1] as i64) as usize;
        big(&osize[i]) * (sp.t(1) - sp.t(shifted)) / (sp.t(0) - sp.t(k))
    })
}

/// `μ_j = Σ_i λ_i H_ij`.
fn mu_from_h(lambda: &Table6<Rational>, h: &RatMatrix) -> Table6<Rational> {
    Table6::from_fn(|j| (1..=6).map(|i| &lambda[i] * &h[(i - 1, j - 1)]).sum())
}

pub fn scalar_tables(p: &GraphParams, k: usize) -> Result<ScalarTables> {
    p.check_distance(k)?;
    let sp = spectrum(p);
    let osize = partition_sizes(p, k)?;
    let h = closed_form_h(p, k)?;
    let pw = Pw::new(p, k);
    let (q, q1) = (&pw.q, pw.q1());
    let (pd, pm, pk, pk1, pk2) = (pw.pd(), pw.pm(), pw.pk(), pw.pk1(), pw.pk2());
    let pn = pw.p(pw.n);
    let theta1 = sp.theta[1].clone();

    let lambda = Table6([
        &pk * (&pk2 - rat(1)) / &q1,
        (&pk1 - rat(1)) * (&pk1 - rat(1)) / &q1,
        &pk1 * (&pk1 - rat(1)) * (q - rat(2)) / &q1,
        (&pm - &pk) * (&pk1 - rat(1)) / &q1,
        (&pd - &pk) * (&pk1 - rat(1)) / &q1,
        (&pd - &pk) * (&pm - &pk) / (q * &q1),
    ]);
    let via_spectrum = lambda_from_spectrum(&sp, &osize, k);
    if via_spectrum != lambda {
        return Err(Error::Inconsistency {
            table: "lambda",
            detail: format!(
                "{:?} vs {:?}",
                rats_str(lambda.as_slice()),
                rats_str(via_spectrum.as_slice())
            ),
        });
    }

    let big_p = ((&pm - q) * (pw.p(pw.d - 1) - rat(1)) + pw.p(pw.n - k) * (&pk1 - rat(1)) * &q1)
        / (&q1 * &q1);
    let mu = Table6([
        theta1.clone(),
        -pw.p(pw.m - 1) * (&pd - &pk) / &q1,
        -pw.p(pw.d - 1) * (&pm - &pk) / &q1,
        -(q - rat(2)) * &pk1,
        -&pk1 * &big_p,
        rat(0),
    ]);
    let via_h = mu_from_h(&lambda, &h);
    if via_h != mu {
        return Err(Error::Inconsistency {
            table: "mu",
            detail: format!(
                "{:?} vs {:?}",
                rats_str(mu.as_slice()),
                rats_str(via_h.as_slice())
            ),
        });
    }

    let g = (&pm - rat(1)) * (&pd - rat(1));
    let mid = q1.clone() / (&pk1 * &g);
    let gamma = Table6([
        (pw.p(pw.n - k) - &pm - &pd + rat(1)) / (&theta1 * &g),
        mid.clone(),
        mid.clone(),
        rat(1) / (&pk1 * &q1),
        mid,
        rat(0),
    ]);

    let w1 = (&pd - &pk) * (&pm - &pk) * (&pk1 - rat(1)) / (&pk * &q1);
    let omega = Table6([
        w1.clone(),
        (&pd - &pk) * (&pm - &pk) / (q * &q1),
        w1,
        -(&pd - &pk) * (&pk1 - rat(1)) / &q1,
        -(&pm - &pk) * (&pk1 - rat(1)) / &q1,
        (&pk - rat(1)) * (&pk1 - rat(1)) / &q1,
    ]);

    let dm = (&pd - rat(1)) * (&pm - rat(1));
    let q1sq = &q1 * &q1;
    let q1cu = &q1sq * &q1;
    let eta = Table6([
        &dm / &q1,
        (&pd - &pk) * (&pk - rat(1)) * &dm / &q1cu,
        (&pm - &pk) * (&pk - rat(1)) * &dm / &q1cu,
        (q - rat(2)) * &pk1 * (&pk - rat(1)),
        &big_p * &pk * (&pk - rat(1)) * &dm / &q1sq,
        &big_p * (&pk - rat(1)) * (&pk1 - rat(1)) * (&pd - &pk) * (&pm - &pk) / (&q1 * q),
    ]);

    let epsfac = Table6([
        &theta1 * &theta1,
        pw.p(2 * pw.n - pw.d - 2),
        pw.p(pw.n + pw.d - 2),
        pw.p(pw.n - 1),
        pw.p(pw.n - 2),
        pw.p(pw.n - 2),
    ]);
    debug_assert_eq!(pn, pw.p(pw.n));

    let vartheta = Table6([
        &pm + &pd - q - rat(2),
        &pm - q - rat(1),
        &pd - q - rat(1),
        rat(-1),
        -q.clone(),
        -q.clone(),
    ]);

    Ok(ScalarTables {
        k,
        lambda,
        mu,
        gamma,
        omega,
        eta,
        epsfac,
        vartheta,
        eps_offset: Table6(EPS_OFFSET),
    })
}

/// Every closed-form matrix and table at one `(q, D, N, k)`.
///
/// Fields are public so that tests can perturb single entries;
/// [`verify_closed_form_identities`] only reads the stored values.
#[derive(Clone, Debug)]
pub struct ClosedForms {
    pub params: GraphParams,
    pub k: usize,
    pub spectrum: Spectrum,
    pub kappa: BigInt,
    pub a1: BigInt,
    pub osize: Table6<BigInt>,
    pub c: RatMatrix,
    pub h: RatMatrix,
    pub g: RatMatrix,
    /// `D^(ℓ)` for `ℓ = k-2 ..= k+2`.
    pub dmats: BTreeMap<usize, RatMatrix>,
    pub tables: ScalarTables,
}

impl ClosedForms {
    pub fn new(params: &GraphParams, k: usize) -> Result<Self> {
        params.check_distance(k)?;
        let dmats = (k - 2..=k + 2)
            .map(|l| Ok((l, closed_form_d(params, k, l)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            params: params.clone(),
            k,
            spectrum: spectrum(params),
            kappa: params.valency(),
            a1: intersection_numbers(params, 1)?.a,
            osize: partition_sizes(params, k)?,
            c: closed_form_c(params, k)?,
            h: closed_form_h(params, k)?,
            g: closed_form_g(params, k)?,
            dmats,
            tables: scalar_tables(params, k)?,
        })
    }

    pub fn osize_rat(&self, i: usize) -> Rational {
        big(&self.osize[i])
    }

    pub fn theta1(&self) -> &Rational {
        &self.spectrum.theta[1]
    }

    /// `|X|` as a rational.
    pub fn vertex_count(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.params.vertex_count()))
    }

    /// Exact JSON export; every rational is a `"num/den"` string.
    pub fn to_json(&self) -> Value {
        let t = &self.tables;
        let tab = |x: &Table6<Rational>| Value::from(rats_str(x.as_slice()));
        let dmats: serde_json::Map<String, Value> = self
            .dmats
            .iter()
            .map(|(l, m)| (l.to_string(), json!(m.to_strings())))
            .collect();
        json!({
            "q": self.params.q(),
            "D": self.params.d(),
            "N": self.params.n(),
            "k": self.k,
            "kappa": self.kappa.to_string(),
            "a1": self.a1.to_string(),
            "theta": rats_str(&self.spectrum.theta),
            "theta_star": rats_str(&self.spectrum.theta_star),
            "osize": self.osize.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "C": self.c.to_strings(),
            "H": self.h.to_strings(),
            "G": self.g.to_strings(),
            "D_ell": dmats,
            "lambda": tab(&t.lambda),
            "mu": tab(&t.mu),
            "gamma": tab(&t.gamma),
            "omega": tab(&t.omega),
            "eta": tab(&t.eta),
            "epsfac": tab(&t.epsfac),
            "vartheta": tab(&t.vartheta),
            "eps_offset": t.eps_offset.as_slice(),
        })
    }
}

fn cells(v: &[(usize, usize)]) -> Value {
    json!(v.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>())
}

fn mismatches(a: &RatMatrix, b: &RatMatrix) -> Vec<(usize, usize)> {
    (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| a[(i, j)] != b[(i, j)])
        .collect()
}

fn cmp_tables(name: &str, a: &Table6<Rational>, b: &Table6<Rational>) -> Value {
    let bad: Vec<usize> = (1..=6).filter(|&i| a[i] != b[i]).collect();
    json!({ "table": name, "indices": bad, "stored": rats_str(a.as_slice()), "recomputed": rats_str(b.as_slice()) })
}

/// Checks every identity among the stored closed forms.
pub fn verify_closed_form_identities(cf: &ClosedForms) -> Report {
    let mut r = Report::new();
    let p = &cf.params;
    let sp = &cf.spectrum;
    let t = &cf.tables;
    let k = cf.k;
    let d = p.d();
    let kappa = big(&cf.kappa);
    let a1 = big(&cf.a1);
    let q = rat(p.q() as i64);
    let q1 = &q - rat(1);
    let pw = |e: usize| big(&p.pow(e));

    let ints: Vec<IntersectionNumbers> = (0..=d)
        .map(|i| intersection_numbers(p, i).expect("i <= D"))
        .collect();

    let bad: Vec<usize> = (0..=d)
        .filter(|&i| &ints[i].a + &ints[i].b + &ints[i].c != cf.kappa)
        .collect();
    r.check(
        "intersection-sum",
        "c_i + a_i + b_i = κ for 0 <= i <= D",
        bad.is_empty(),
        || json!({ "i": bad }),
    );

    let bad: Vec<usize> = (1..=d)
        .filter(|&i| {
            let bracket = (pw(i) - rat(1)) / &q1;
            let expect = bracket * (pw(p.m()) + pw(d) - pw(i) - pw(i - 1) - rat(1));
            big(&ints[i].a) != expect
        })
        .collect();
    r.check(
        "a-closed-form",
        "a_i = [i](q^{N-D} + q^D - q^i - q^{i-1} - 1)",
        bad.is_empty() && ints[0].a.is_zero(),
        || json!({ "i": bad }),
    );

    r.check(
        "theta-decreasing",
        "θ_0 > θ_1 > ... > θ_D",
        sp.theta.windows(2).all(|w| w[0] > w[1]),
        || json!(rats_str(&sp.theta)),
    );
    r.check(
        "self-dual",
        "θ_i = θ*_i",
        sp.theta == sp.theta_star,
        || json!({ "theta": rats_str(&sp.theta), "theta_star": rats_str(&sp.theta_star) }),
    );
    r.check(
        "theta0-valency",
        "θ_0 = κ",
        sp.theta[0] == kappa,
        || json!({ "theta0": rat_str(&sp.theta[0]), "kappa": cf.kappa.to_string() }),
    );

    let bad: Vec<usize> = (0..=d)
        .filter(|&i| {
            let mut lhs = sp.t(i) * big(&ints[i].a);
            if i > 0 {
                lhs += sp.t(i - 1) * big(&ints[i].c);
            }
            if i < d {
                lhs += sp.t(i + 1) * big(&ints[i].b);
            }
            lhs != &sp.theta[1] * sp.t(i)
        })
        .collect();
    r.check(
        "three-term",
        "θ*_{i-1} c_i + θ*_i a_i + θ*_{i+1} b_i = θ_1 θ*_i",
        bad.is_empty(),
        || json!({ "i": bad }),
    );

    let dim = (pw(p.m()) - rat(1)) * (pw(d) - rat(1)) / &q1;
    r.check(
        "dim-ev",
        "dim EV = θ*_0 = (q^{N-D} - 1)(q^D - 1)/(q - 1)",
        sp.t(0) == &dim,
        || json!({ "theta_star0": rat_str(sp.t(0)), "formula": rat_str(&dim) }),
    );
    let q111 = pw(p.m()) + pw(d) - &q - rat(2);
    r.check("krein-q111", "q^1_{11} = a_1 = q^{N-D} + q^D - q - 2", q111 == a1 && t.vartheta[1] == a1, || {
        json!({ "a1": cf.a1.to_string(), "formula": rat_str(&q111), "vartheta1": rat_str(&t.vartheta[1]) })
    });

    let osum: BigInt = cf.osize.iter().sum();
    r.check(
        "osize-sum",
        "Σ |O_i| = κ",
        osum == cf.kappa,
        || json!({ "sum": osum.to_string() }),
    );
    r.check(
        "osize-positive",
        "|O_i| > 0",
        cf.osize.iter().all(Signed::is_positive),
        || json!(cf.osize.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
    );

    let bad: Vec<usize> = (0..6)
        .filter(|&i| cf.c.row(i).iter().sum::<Rational>() != a1)
        .collect();
    r.check(
        "c-row-sums",
        "Σ_j C_ij = a_1",
        bad.is_empty(),
        || json!({ "rows": bad.iter().map(|i| i + 1).collect::<Vec<_>>() }),
    );
    let bad = nonint_cells(&cf.c);
    r.check(
        "c-nonnegative-integer",
        "C_ij ∈ Z_{>=0}",
        bad.is_empty(),
        || cells(&bad),
    );
    let oc = &RatMatrix::diag(&(1..=6).map(|i| cf.osize_rat(i)).collect::<Vec<_>>()) * &cf.c;
    let bad = mismatches(&oc, &oc.transpose());
    r.check(
        "c-reversible",
        "diag(|O|) C is symmetric",
        bad.is_empty(),
        || cells(&bad),
    );

    let ch = &cf.c * &cf.h;
    let hv = &cf.h * &RatMatrix::diag(t.vartheta.as_slice());
    let bad = mismatches(&ch, &hv);
    r.check("h-eigenvectors", "C H = H diag(ϑ)", bad.is_empty(), || {
        json!({ "cells": cells(&bad), "first": bad.first().map(|&(i, j)| [rat_str(&ch[(i, j)]), rat_str(&hv[(i, j)])]) })
    });

    let osz = RatMatrix::diag(&(1..=6).map(|i| cf.osize_rat(i)).collect::<Vec<_>>());
    let hoh = &(&cf.h.transpose() * &osz) * &cf.h;
    let eta_diag = RatMatrix::diag(t.eta.as_slice());
    let bad = mismatches(&hoh, &eta_diag);
    r.check("h-eta-diagonal", "H^t diag(|O|) H = diag(η)", bad.is_empty(), || {
        json!({ "cells": cells(&bad), "first": bad.first().map(|&(i, j)| [rat_str(&hoh[(i, j)]), rat_str(&eta_diag[(i, j)])]) })
    });
    r.check(
        "eta-positive",
        "η_j > 0",
        t.eta.iter().all(Signed::is_positive),
        || json!(rats_str(t.eta.as_slice())),
    );
    let det = cf.h.determinant();
    r.check(
        "h-invertible",
        "det H ≠ 0",
        !det.is_zero(),
        || json!({ "det": rat_str(&det) }),
    );

    let g_swapped = gram_from(&cf.c, &cf.osize, sp, true);
    let bad = mismatches(&cf.g, &g_swapped);
    r.check(
        "g-two-forms",
        "|O_i|(δθ*_0 + C_ij θ*_1 + ...) = |O_j|(δθ*_0 + C_ji θ*_1 + ...)",
        bad.is_empty(),
        || cells(&bad),
    );
    let hgh = &(&cf.h.transpose() * &cf.g) * &cf.h;
    let eps_eta: Vec<Rational> = (1..=6).map(|j| &t.epsfac[j] * &t.eta[j]).collect();
    let target = RatMatrix::diag(&eps_eta);
    let bad = mismatches(&hgh, &target);
    r.check("g-h-diagonal", "H^t G H = diag(ε_j η_j)", bad.is_empty(), || {
        json!({ "cells": cells(&bad), "first": bad.first().map(|&(i, j)| [rat_str(&hgh[(i, j)]), rat_str(&target[(i, j)])]) })
    });
    r.check(
        "g-positive-definite",
        "leading principal minors of G > 0",
        cf.g.is_positive_definite(),
        || json!(rats_str(&cf.g.leading_minors())),
    );

    let lam_sp = lambda_from_spectrum(sp, &cf.osize, k);
    r.check(
        "lambda-two-way",
        "λ_i = |O_i|(θ*_1 - θ*_{k+ε(i)})/(θ*_0 - θ*_k)",
        lam_sp == t.lambda,
        || cmp_tables("lambda", &t.lambda, &lam_sp),
    );
    let lsum: Rational = t.lambda.iter().sum();
    r.check(
        "lambda-sum",
        "Σ λ_i = θ_1",
        &lsum == cf.theta1(),
        || json!({ "sum": rat_str(&lsum) }),
    );

    let mu_h = mu_from_h(&t.lambda, &cf.h);
    r.check("mu-two-way", "μ_j = Σ_i λ_i H_ij", mu_h == t.mu, || {
        cmp_tables("mu", &t.mu, &mu_h)
    });
    r.check(
        "mu-boundary",
        "μ_1 = θ_1, μ_6 = 0",
        &t.mu[1] == cf.theta1() && t.mu[6].is_zero(),
        || json!(rats_str(t.mu.as_slice())),
    );

    let gm: Rational = (1..=6).map(|j| &t.gamma[j] * &t.mu[j]).sum();
    r.check(
        "gamma-mu",
        "Σ γ_j μ_j = -1",
        gm == rat(-1),
        || json!({ "sum": rat_str(&gm) }),
    );
    let vgm: Rational = (1..=6)
        .map(|j| &t.vartheta[j] * &t.gamma[j] * &t.mu[j])
        .sum();
    r.check(
        "gamma-mu-vartheta",
        "Σ ϑ_j γ_j μ_j = 0",
        vgm.is_zero(),
        || json!({ "sum": rat_str(&vgm) }),
    );
    r.check("gamma6-zero", "γ_6 = 0", t.gamma[6].is_zero(), || {
        json!(rat_str(&t.gamma[6]))
    });
    r.check(
        "vartheta-repeat",
        "ϑ_5 = ϑ_6 = -q",
        t.vartheta[5] == t.vartheta[6] && t.vartheta[6] == -&q,
        || json!(rats_str(t.vartheta.as_slice())),
    );
    let h6 = Table6::from_fn(|i| cf.h[(i - 1, 5)].clone());
    r.check("omega-column", "ω_i = H_i6", h6 == t.omega, || {
        cmp_tables("omega", &t.omega, &h6)
    });
    r.check(
        "eps-offsets",
        "ε(i) = (-1, 0, 0, 0, 0, 1)",
        t.eps_offset.0 == EPS_OFFSET,
        || json!(t.eps_offset.as_slice()),
    );

    let mut bad = Vec::new();
    for (l, m) in &cf.dmats {
        for cell in nonint_cells(m) {
            bad.push((*l, cell));
        }
    }
    r.check(
        "d-nonnegative-integer",
        "D^(ℓ)_ij ∈ Z_{>=0}",
        bad.is_empty(),
        || {
            json!(bad
                .iter()
                .map(|(l, (i, j))| [*l, i + 1, j + 1])
                .collect::<Vec<_>>())
        },
    );
    let beyond: Vec<usize> = cf
        .dmats
        .iter()
        .filter(|(l, m)| **l > d && !m.is_zero())
        .map(|(l, _)| *l)
        .collect();
    r.check(
        "d-beyond-diameter",
        "D^(ℓ) = 0 for ℓ > D",
        beyond.is_empty(),
        || json!({ "ell": beyond }),
    );
    let bad: Vec<usize> = (0..6)
        .filter(|&i| {
            let total: Rational = cf.dmats.values().flat_map(|m| m.row(i).iter()).sum();
            total != kappa
        })
        .collect();
    r.check(
        "d-row-totals",
        "Σ_ℓ Σ_j D^(ℓ)_ij = κ",
        bad.is_empty(),
        || json!({ "rows": bad.iter().map(|i| i + 1).collect::<Vec<_>>() }),
    );
    let top = cf.dmats.get(&(k + 2));
    let expect = (pw(d) - pw(k + 1)) * (pw(p.m()) - pw(k + 1)) / &q1;
    let top_ok = top.is_some_and(|m| {
        (0..6).all(|i| {
            (0..6).all(|j| {
                if (i, j) == (5, 5) {
                    m[(i, j)] == expect
                } else {
                    m[(i, j)].is_zero()
                }
            })
        })
    });
    r.check(
        "d-top-entry",
        "D^(k+2) = (q^D - q^{k+1})(q^{N-D} - q^{k+1})/(q - 1) e_6 e_6^t",
        top_ok,
        || json!({ "expected": rat_str(&expect) }),
    );

    let mut bad = Vec::new();
    for i in 0..6 {
        let shifted = (k as i64 + t.eps_offset.0[i] as i64) as usize;
        for j in 0..6 {
            let delta = if i == j { rat(1) } else { rat(0) };
            let cij = &cf.c[(i, j)];
            let mut lhs =
                &delta * sp.t(0) + cij * sp.t(1) + (cf.osize_rat(j + 1) - cij - &delta) * sp.t(2);
            for (l, m) in &cf.dmats {
                if let Some(ts) = sp.ts(*l as i64) {
                    lhs -= &m[(i, j)] * ts;
                }
            }
            let rhs = &t.lambda[j + 1] * (sp.t(1) - sp.t(shifted));
            if lhs != rhs {
                bad.push((i, j));
            }
        }
    }
    r.check(
        "d-step-grid",
        "δθ*_0 + C_ij θ*_1 + (|O_j| - C_ij - δ)θ*_2 - Σ_ℓ D^(ℓ)_ij θ*_ℓ = λ_j(θ*_1 - θ*_{k+ε(i)})",
        bad.is_empty(),
        || cells(&bad),
    );
    r
}

fn nonint_cells(m: &RatMatrix) -> Vec<(usize, usize)> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| !m[(i, j)].is_integer() || m[(i, j)].is_negative())
        .collect()
}

/// Converts a nonnegative integral rational to `u64`.
pub fn rat_to_u64(r: &Rational) -> Option<u64> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_u64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn base() -> GraphParams {
        GraphParams::new(3, 3, 7).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GraphParams::new(2, 3, 7).is_err());
        assert!(GraphParams::new(9, 3, 7).is_err());
        assert!(GraphParams::new(3, 2, 7).is_err());
        assert!(GraphParams::new(3, 3, 6).is_err());
        let p = base();
        assert!(p.check_distance(2).is_ok());
        assert!(matches!(
            p.check_distance(3),
            Err(Error::OutOfRange { what: "k", .. })
        ));
        assert!(p.check_distance(1).is_err());
    }

    #[test]
    fn intersection_numbers_base() {
        let p = base();
        assert_eq!(p.valency(), BigInt::from(1040));
        let i1 = intersection_numbers(&p, 1).unwrap();
        assert_eq!((i1.c, i1.a, i1.b), (1.into(), 103.into(), 936.into()));
        let i2 = intersection_numbers(&p, 2).unwrap();
        assert_eq!((i2.c, i2.a, i2.b), (12.into(), 380.into(), 648.into()));
        let i0 = intersection_numbers(&p, 0).unwrap();
        assert_eq!((i0.c, i0.a, i0.b), (0.into(), 0.into(), 1040.into()));
        assert_eq!(intersection_numbers(&p, 3).unwrap().c, BigInt::from(117));
        assert!(intersection_numbers(&p, 4).is_err());
    }

    #[test]
    fn spectrum_base() {
        let sp = spectrum(&base());
        assert_eq!(sp.theta, ints(&[1040, 311, 68, -13]));
        assert_eq!(sp.ts(-1), None);
        assert_eq!(sp.ts(4), None);
    }

    #[test]
    fn partition_sizes_examples() {
        let s = partition_sizes(&base(), 2).unwrap();
        assert_eq!(s.0, [12, 8, 12, 288, 72, 648].map(BigInt::from));
        let p = GraphParams::new(3, 4, 9).unwrap();
        assert_eq!(partition_sizes(&p, 2).unwrap()[1], BigInt::from(12));
        assert_eq!(partition_sizes(&p, 3).unwrap()[6], BigInt::from(5832));
        assert!(partition_sizes(&p, 4).is_err());
    }

    #[test]
    fn tables_base() {
        let t = scalar_tables(&base(), 2).unwrap();
        assert_eq!(t.lambda.to_vec(), ints(&[0, 2, 3, 72, 18, 216]));
        assert_eq!(t.mu.to_vec(), ints(&[311, -243, -324, -3, -1197, 0]));
        assert_eq!(t.vartheta.to_vec(), ints(&[103, 77, 23, -1, -3, -3]));
        assert_eq!(t.eps_offset.0, [-1, 0, 0, 0, 0, 1]);
        assert_eq!(t.gamma[4], ratio(1, 6));
    }

    #[test]
    fn d_matrix_spot_values() {
        let p = base();
        assert_eq!(closed_form_d(&p, 2, 1).unwrap()[(0, 0)], rat(4));
        assert!(closed_form_d(&p, 2, 4).unwrap().is_zero());
        assert!(closed_form_d(&p, 2, 5).is_err());
    }

    #[test]
    fn all_identities_hold() {
        for (q, d, n, k) in [
            (3, 3, 7, 2),
            (3, 4, 9, 2),
            (3, 4, 9, 3),
            (5, 4, 9, 2),
            (7, 3, 7, 2),
            (5, 5, 11, 3),
        ] {
            let p = GraphParams::new(q, d, n).unwrap();
            let cf = ClosedForms::new(&p, k).unwrap();
            let r = verify_closed_form_identities(&cf);
            let bad: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
            assert!(bad.is_empty(), "({q},{d},{n},{k}): {bad:?}");
            assert!(r.len() >= 30);
        }
    }

    #[test]
    fn perturbed_h_reports_cell() {
        let mut cf = ClosedForms::new(&base(), 2).unwrap();
        cf.h[(0, 0)] = rat(2);
        let r = verify_closed_form_identities(&cf);
        let c = r.get("h-eigenvectors").unwrap();
        assert_eq!(c.status, crate::report::Status::Fail);
        let cells = &c.witness.as_ref().unwrap()["cells"];
        assert!(cells.as_array().unwrap().iter().any(|v| v[1] == 1));
    }

    #[test]
    fn json_export_is_exact() {
        let cf = ClosedForms::new(&base(), 2).unwrap();
        let v = cf.to_json();
        assert_eq!(v["lambda"][3], "72/1");
        assert_eq!(v["gamma"][3], "1/6");
        assert_eq!(v["osize"][5], "648");
    }
}
