//! Full breadth-first search over the vertex set, auditing that graph
//! distance from the zero matrix equals rank.

use std::sync::atomic::{AtomicU8, Ordering};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{enumerate_rank_one, MatVertex};
use crate::kernel::RankKernel;
use crate::params::{intersection_numbers, GraphParams};
use crate::report::Report;

/// Default ceiling on `|X|` for the audit.
pub const DEFAULT_BFS_LIMIT: u64 = 2_000_000;

const UNSEEN: u8 = u8::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsAudit {
    pub q: u32,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub vertex_count: u64,
    /// `|Γ_i(0)|` as found by the search.
    pub sphere_sizes: Vec<u64>,
    /// `b_0 ... b_{i-1} / (c_1 ... c_i)`.
    pub expected_sphere_sizes: Vec<u64>,
    pub unreached: u64,
    pub rank_mismatches: u64,
    pub first_mismatch: Option<String>,
}

impl BfsAudit {
    pub fn rank_metric_ok(&self) -> bool {
        self.unreached == 0 && self.rank_mismatches == 0
    }

    pub fn spheres_ok(&self) -> bool {
        self.sphere_sizes == self.expected_sphere_sizes
    }

    pub fn passed(&self) -> bool {
        self.rank_metric_ok()
            && self.spheres_ok()
            && self.sphere_sizes.iter().sum::<u64>() == self.vertex_count
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.check("bfs-rank-metric", "BFS distance from 0 equals rank on every vertex", self.rank_metric_ok(), || {
            json!({ "unreached": self.unreached, "mismatches": self.rank_mismatches, "first": self.first_mismatch })
        });
        r.check(
            "bfs-sphere-sizes",
            "|Γ_i| = b_0 ... b_{i-1} / (c_1 ... c_i)",
            self.spheres_ok(),
            || json!({ "found": self.sphere_sizes, "expected": self.expected_sphere_sizes }),
        );
        let total: u64 = self.sphere_sizes.iter().sum();
        r.check(
            "bfs-vertex-total",
            "Σ_i |Γ_i| = |X|",
            total == self.vertex_count,
            || json!({ "total": total, "vertex_count": self.vertex_count }),
        );
        r
    }
}

/// `b_0 ... b_{i-1} / (c_1 ... c_i)` for `0 <= i <= D`.
pub fn expected_sphere_sizes(p: &GraphParams) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(p.d() + 1);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..=p.d() {
        if i > 0 {
            num *= intersection_numbers(p, i - 1)?.b;
            den *= intersection_numbers(p, i)?.c;
        }
        let v = &num / &den;
        out.push(v.to_u64().ok_or(Error::Overflow("sphere size"))?);
    }
    Ok(out)
}

/// Digitwise base-`q` addition in chunks of `c` digits, with `q^(2c) <= 2^20`.
struct ChunkAdder {
    qc: u64,
    chunks: usize,
    table: Vec<u32>,
}

impl ChunkAdder {
    fn new(q: u32, digits: usize) -> Self {
        let q64 = q as u64;
        let mut c = 1;
        while q64.pow(2 * (c as u32 + 1)) <= 1 << 20 {
            c += 1;
        }
        let qc = q64.pow(c as u32);
        let mut table = vec![0u32; (qc * qc) as usize];
        for a in 0..qc {
            for b in 0..qc {
                let (mut x, mut y, mut s, mut place) = (a, b, 0, 1);
                for _ in 0..c {
                    s += ((x % q64 + y % q64) % q64) * place;
                    x /= q64;
                    y /= q64;
                    place *= q64;
                }
                table[(a * qc + b) as usize] = s as u32;
            }
        }
        Self {
            qc,
            chunks: digits.div_ceil(c),
            table,
        }
    }

    fn split(&self, mut v: u64, out: &mut [u64]) {
        for o in out.iter_mut() {
            *o = v % self.qc;
            v /= self.qc;
        }
    }

    #[inline]
    fn add(&self, a: &[u64], b: &[u64]) -> u64 {
        let mut s = 0u64;
        let mut place = 1u64;
        for (x, y) in a.iter().zip(b) {
            s += self.table[(x * self.qc + y) as usize] as u64 * place;
            place *= self.qc;
        }
        s
    }
}

/// Runs the search from the zero matrix over all of `X`.
pub fn bfs_distance_audit(p: &GraphParams, limit: u64) -> Result<BfsAudit> {
    let total = p.vertex_count();
    let count = match total.to_u64() {
        Some(c) if c <= limit && c <= u32::MAX as u64 => c,
        _ => {
            return Err(Error::TooLarge {
                what: "BFS audit",
                estimate: format!("|X| = {total}"),
                limit: limit.to_string(),
            })
        }
    };
    let q = p.q();
    let (rows, cols) = (p.rows(), p.cols());
    let adder = ChunkAdder::new(q, rows * cols);
    let nc = adder.chunks;
    let offsets: Vec<u64> = enumerate_rank_one(rows, cols, p.field())?
        .iter()
        .flat_map(|m| {
            let mut parts = vec![0u64; nc];
            adder.split(m.index(q), &mut parts);
            parts
        })
        .collect();

    let dist: Vec<AtomicU8> = (0..count).map(|_| AtomicU8::new(UNSEEN)).collect();
    dist[0].store(0, Ordering::Relaxed);
    let mut frontier: Vec<u32> = vec![0];
    let mut level = 0u8;
    while !frontier.is_empty() {
        let next_level = level + 1;
        let mut next: Vec<u32> = frontier
            .par_iter()
            .fold(Vec::new, |mut acc, &v| {
                let mut parts = vec![0u64; nc];
                adder.split(v as u64, &mut parts);
                for off in offsets.chunks_exact(nc) {
                    let w = adder.add(&parts, off) as usize;
                    if dist[w].load(Ordering::Relaxed) == UNSEEN
                        && dist[w]
                            .compare_exchange(
                                UNSEEN,
                                next_level,
                                Ordering::Relaxed,
                                Ordering::Relaxed,
                            )
                            .is_ok()
                    {
                        acc.push(w as u32);
                    }
                }
                acc
            })
            .reduce(Vec::new, |mut a, b| {
                a.extend(b);
                a
            });
        next.sort_unstable();
        frontier = next;
        level = next_level;
    }

    let kernel = RankKernel::new(p.field().clone(), rows, cols);
    let (sizes, unreached, mismatches, first) = (0..count)
        .into_par_iter()
        .fold(
            || (vec![0u64; p.d() + 1], 0u64, 0u64, None::<u64>),
            |(mut sizes, mut unreached, mut bad, mut first), idx| {
                let d = dist[idx as usize].load(Ordering::Relaxed);
                if d == UNSEEN {
                    unreached += 1;
                    return (sizes, unreached, bad, first);
                }
                let m = MatVertex::from_index(idx, rows, cols, q).expect("index in range");
                let r = kernel.rank(&kernel.pack(&m));
                if r != d {
                    bad += 1;
                    first = Some(first.map_or(idx, |f: u64| f.min(idx)));
                }
                if (d as usize) < sizes.len() {
                    sizes[d as usize] += 1;
                } else {
                    bad += 1;
                }
                (sizes, unreached, bad, first)
            },
        )
        .reduce(
            || (vec![0u64; p.d() + 1], 0, 0, None),
            |a, b| {
                let sizes = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                let first = match (a.3, b.3) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (sizes, a.1 + b.1, a.2 + b.2, first)
            },
        );
    Ok(BfsAudit {
        q,
        d: p.d(),
        n: p.n(),
        vertex_count: count,
        sphere_sizes: sizes,
        expected_sphere_sizes: expected_sphere_sizes(p)?,
        unreached,
        rank_mismatches: mismatches,
        first_mismatch: first.map(|i| {
            MatVertex::from_index(i, rows, cols, q)
                .expect("index")
                .to_string()
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunk_adder_matches_digitwise_sum() {
        let adder = ChunkAdder::new(3, 12);
        let f = crate::field::PrimeField::new(3).unwrap();
        for (a, b) in [(0u64, 0u64), (5, 7), (531440, 1), (123456, 400000)] {
            let (ma, mb) = (
                MatVertex::from_index(a, 3, 4, 3).unwrap(),
                MatVertex::from_index(b, 3, 4, 3).unwrap(),
            );
            let mut pa = vec![0; adder.chunks];
            let mut pb = vec![0; adder.chunks];
            adder.split(a, &mut pa);
            adder.split(b, &mut pb);
            assert_eq!(adder.add(&pa, &pb), ma.add(&mb, &f).unwrap().index(3));
        }
    }

    #[test]
    fn expected_spheres_at_base() {
        let p = GraphParams::new(3, 3, 7).unwrap();
        let s = expected_sphere_sizes(&p).unwrap();
        assert_eq!(s[1], 1040);
        assert_eq!(s[3], 449_280);
        assert_eq!(s.iter().sum::<u64>(), 531_441);
    }

    #[test]
    fn refuses_large_configurations() {
        let p = GraphParams::new(3, 4, 9).unwrap();
        assert!(matches!(
            bfs_distance_audit(&p, DEFAULT_BFS_LIMIT),
            Err(Error::TooLarge { .. })
        ));
    }
}
