//! Exact integer matrix arithmetic on the local graph of `x`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::json;

use super::{Csr, LocalContext, Which};
use crate::error::{Error, Result};
use crate::linalg::{big, rat, rat_str, rats_str, RatMatrix, Rational};
use crate::params::{intersection_numbers, GraphParams};
use crate::report::Report;

/// Largest local graph for which dense products are attempted.
pub const MAX_DENSE_LOCAL: usize = 4096;

/// Eigenvalues of the local graph with their multiplicities, trivial one first.
pub fn local_spectrum_table(p: &GraphParams) -> Vec<(BigInt, Rational)> {
    let q = BigInt::from(p.q());
    let q1 = rat(p.q() as i64 - 1);
    let (pd, pm) = (p.pow(p.d()), p.pow(p.m()));
    let a1 = &pm + &pd - &q - 2;
    vec![
        (a1, rat(1)),
        (&pm - &q - 1, (big(&pd) - big(&q)) / &q1),
        (&pd - &q - 1, (big(&pm) - big(&q)) / &q1),
        (
            BigInt::from(-1),
            big(&((&pd - 1) * (&pm - 1) * (&q - 2))) / (&q1 * &q1),
        ),
        (-q.clone(), big(&((&pd - &q) * (&pm - &q))) / (&q1 * &q1)),
    ]
}

/// Dense square integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    n: usize,
    data: Vec<i64>,
}

impl Dense {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    /// `(A - shift I) self` for the 0/1 adjacency `A`.
    fn shifted_product(&self, adj: &Csr, shift: i64) -> Self {
        let n = self.n;
        let mut data = vec![0i64; n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
            for &j in adj.neighbors(i) {
                let src = &self.data[j as usize * n..(j as usize + 1) * n];
                for (o, s) in out.iter_mut().zip(src) {
                    *o += s;
                }
            }
            if shift != 0 {
                let own = &self.data[i * n..(i + 1) * n];
                for (o, s) in out.iter_mut().zip(own) {
                    *o -= shift * s;
                }
            }
        });
        Self { n, data }
    }

    fn max_abs(&self) -> i64 {
        self.data.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

/// Applies `(A - r I)` for each root in turn, starting from the identity.
///
/// Entries stay below `Π (a1 + |r|)`, checked against `i64` up front.
fn factor_chain(adj: &Csr, degree: i64, roots: &[i64]) -> Result<Vec<Dense>> {
    let mut bound: i128 = 1;
    for r in roots {
        bound = bound.saturating_mul((degree + r.abs()) as i128);
    }
    if bound >= i64::MAX as i128 / 2 {
        return Err(Error::Overflow("local annihilator product"));
    }
    let mut out = Vec::with_capacity(roots.len());
    let mut cur = Dense::identity(adj.len());
    for &r in roots {
        cur = cur.shifted_product(adj, r);
        out.push(cur.clone());
    }
    Ok(out)
}

fn too_large(ctx: &LocalContext) -> Option<String> {
    (ctx.kappa() > MAX_DENSE_LOCAL).then(|| {
        format!(
            "κ = {} exceeds the dense local-matrix budget {MAX_DENSE_LOCAL}",
            ctx.kappa()
        )
    })
}

fn root_values(p: &GraphParams) -> Result<Vec<i64>> {
    local_spectrum_table(p)
        .iter()
        .map(|(e, _)| e.to_i64().ok_or(Error::Overflow("local eigenvalue")))
        .collect()
}

/// Annihilating polynomial and trace-recovered multiplicities of the local graph.
pub fn local_spectrum_check(ctx: &LocalContext) -> Report {
    let mut r = Report::new();
    let names = [
        (
            "local-annihilator",
            "Π over the five local eigenvalues η of (Ã - ηI) = 0",
        ),
        ("local-traces", "tr Ã = 0, tr Ã² = κ a_1"),
        (
            "local-multiplicities",
            "multiplicities from tr Ã^m (m = 0..4) match the local spectrum table",
        ),
    ];
    if let Some(reason) = too_large(ctx) {
        for (n, id) in names {
            r.skip(n, id, &reason);
        }
        return r;
    }
    let p = ctx.params();
    let adj = &ctx.side(Which::X).adjacency;
    let table = local_spectrum_table(p);
    let roots = match root_values(p) {
        Ok(v) => v,
        Err(e) => {
            r.fail(names[0].0, names[0].1, json!(e.to_string()));
            return r;
        }
    };
    let degree = roots[0];
    match factor_chain(adj, degree, &roots) {
        Ok(chain) => {
            let last = chain.last().expect("five factors");
            r.check(names[0].0, names[0].1, last.max_abs() == 0, || {
                let idx = last.data.iter().position(|&v| v != 0).unwrap_or(0);
                json!({ "row": idx / last.n, "col": idx % last.n, "value": last.data[idx] })
            });
        }
        Err(e) => r.fail(names[0].0, names[0].1, json!(e.to_string())),
    }

    let traces = trace_powers(adj);
    let kappa = ctx.kappa() as i128;
    let a1 = intersection_numbers(p, 1)
        .map(|i| i.a.to_i128().unwrap_or(-1))
        .unwrap_or(-1);
    r.check(
        names[1].0,
        names[1].1,
        traces[1] == 0 && traces[2] == kappa * a1,
        || json!({ "traces": traces.iter().map(|t| t.to_string()).collect::<Vec<_>>() }),
    );

    let v = RatMatrix::from_fn(5, 5, |m, e| {
        Rational::from_integer(table[e].0.pow(m as u32))
    });
    let rhs: Vec<Rational> = traces
        .iter()
        .map(|&t| Rational::from_integer(BigInt::from(t)))
        .collect();
    let expected: Vec<Rational> = table.iter().map(|(_, m)| m.clone()).collect();
    match v.solve(&rhs) {
        Ok(mult) => r.check(
            names[2].0,
            names[2].1,
            mult == expected,
            || json!({ "recovered": rats_str(&mult), "expected": rats_str(&expected) }),
        ),
        Err(e) => r.fail(names[2].0, names[2].1, json!(e.to_string())),
    }
    r
}

/// `tr Ã^m` for `m = 0..=4`.
pub fn trace_powers(adj: &Csr) -> [i128; 5] {
    let n = adj.len();
    let a2 = Dense::identity(n)
        .shifted_product(adj, 0)
        .shifted_product(adj, 0);
    let (t3, t4) = (0..n)
        .into_par_iter()
        .map(|i| {
            let t3: i128 = adj
                .neighbors(i)
                .iter()
                .map(|&j| a2.get(i, j as usize) as i128)
                .sum();
            let t4: i128 = (0..n).map(|j| (a2.get(i, j) as i128).pow(2)).sum();
            (t3, t4)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let t2: i128 = (0..n).map(|i| a2.get(i, i) as i128).sum();
    [n as i128, 0, t2, t3, t4]
}

/// Checks `κ Π (Ã - rI) = Π (a_1 - r) J` over the four nontrivial local eigenvalues.
/// Returns `Ok(None)` on success and the first offending cell otherwise.
pub fn polynomial_equals_all_ones(ctx: &LocalContext) -> Result<Option<(usize, usize, String)>> {
    if let Some(reason) = too_large(ctx) {
        return Err(Error::TooLarge {
            what: "local polynomial check",
            estimate: reason,
            limit: MAX_DENSE_LOCAL.to_string(),
        });
    }
    let p = ctx.params();
    let roots = root_values(p)?;
    let a1 = roots[0];
    let nontrivial = &roots[1..];
    let chain = factor_chain(&ctx.side(Which::X).adjacency, a1, nontrivial)?;
    let prod = chain.last().expect("four factors");
    let scale: i128 = nontrivial.iter().map(|&r| (a1 - r) as i128).product();
    let kappa = ctx.kappa() as i128;
    let n = prod.n;
    let bad = prod.data.iter().position(|&v| kappa * v as i128 != scale);
    Ok(bad.map(|idx| {
        let value = Rational::new(BigInt::from(prod.data[idx]) * kappa, BigInt::from(scale));
        (idx / n, idx % n, rat_str(&value))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::{canonical_pair, CrossMode};

    #[test]
    fn table_at_base() {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let t = local_spectrum_table(&p);
        let eig: Vec<i64> = t.iter().map(|(e, _)| e.to_i64().unwrap()).collect();
        assert_eq!(eig, [103, 77, 23, -1, -3]);
        let mult: Vec<Rational> = t.iter().map(|(_, m)| m.clone()).collect();
        assert_eq!(mult, [1, 12, 39, 520, 468].map(rat).to_vec());
    }

    #[test]
    fn small_dense_products() {
        // path 0 - 1 - 2
        let adj = Csr {
            offsets: vec![0, 1, 3, 4],
            targets: vec![1, 0, 2, 1],
        };
        let t = trace_powers(&adj);
        assert_eq!(t, [3, 0, 4, 0, 8]);
        let a = Dense::identity(3).shifted_product(&adj, 0);
        assert_eq!(a.get(0, 1), 1);
        assert_eq!(a.get(0, 2), 0);
    }

    #[test]
    fn base_local_spectrum() {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let (x, y) = canonical_pair(&p, 2).unwrap();
        let ctx = LocalContext::build(&p, x, y, CrossMode::OnTheFly).unwrap();
        let r = local_spectrum_check(&ctx);
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(polynomial_equals_all_ones(&ctx).unwrap(), None);
    }
}
