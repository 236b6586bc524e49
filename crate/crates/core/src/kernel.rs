//! Hot-path rank of differences.
//!
//! Over GF(3) each row is held as two bit planes (`ones`, `twos`) marking the
//! entries equal to 1 and 2; row additions are then a handful of word-wide
//! boolean operations. Other fields fall back to the byte eliminator in
//! [`crate::field::rank`]. Both paths return identical ranks.

use crate::field::{rank, MatVertex, PrimeField};

pub const MAX_PACKED_ROWS: usize = 8;
pub const MAX_PACKED_COLS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TernaryRows {
    ones: [u32; MAX_PACKED_ROWS],
    twos: [u32; MAX_PACKED_ROWS],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PackedVertex {
    Ternary(TernaryRows),
    Bytes(MatVertex),
}

#[inline(always)]
fn t_add(x1: u32, x2: u32, y1: u32, y2: u32) -> (u32, u32) {
    let x0 = !(x1 | x2);
    let y0 = !(y1 | y2);
    (
        (x0 & y1) | (x1 & y0) | (x2 & y2),
        (x0 & y2) | (x2 & y0) | (x1 & y1),
    )
}

#[inline(always)]
fn t_sub(x1: u32, x2: u32, y1: u32, y2: u32) -> (u32, u32) {
    t_add(x1, x2, y2, y1)
}

/// Rank of the bitsliced rows `ones[..n]`, `twos[..n]` (consumed).
#[inline]
fn ternary_rank(
    ones: &mut [u32; MAX_PACKED_ROWS],
    twos: &mut [u32; MAX_PACKED_ROWS],
    n: usize,
) -> u8 {
    let mut rank = 0;
    for i in 0..n {
        let mask = ones[i] | twos[i];
        if mask == 0 {
            continue;
        }
        rank += 1;
        let bit = mask & mask.wrapping_neg();
        // pivot row scaled so that its pivot entry is 1
        let (p1, p2) = if ones[i] & bit != 0 {
            (ones[i], twos[i])
        } else {
            (twos[i], ones[i])
        };
        for j in i + 1..n {
            if ones[j] & bit != 0 {
                (ones[j], twos[j]) = t_sub(ones[j], twos[j], p1, p2);
            } else if twos[j] & bit != 0 {
                (ones[j], twos[j]) = t_add(ones[j], twos[j], p1, p2);
            }
        }
    }
    rank
}

/// Computes `rank(a - b)` for vertices of one fixed shape.
#[derive(Clone, Debug)]
pub struct RankKernel {
    field: PrimeField,
    rows: usize,
    cols: usize,
    ternary: bool,
}

impl RankKernel {
    pub fn new(field: PrimeField, rows: usize, cols: usize) -> Self {
        let ternary = field.q() == 3 && rows <= MAX_PACKED_ROWS && cols <= MAX_PACKED_COLS;
        Self {
            field,
            rows,
            cols,
            ternary,
        }
    }

    /// Forces the byte eliminator even where bit planes are available.
    pub fn reference(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            ternary: false,
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_bitsliced(&self) -> bool {
        self.ternary
    }

    pub fn pack(&self, m: &MatVertex) -> PackedVertex {
        debug_assert_eq!(m.shape(), (self.rows, self.cols));
        if !self.ternary {
            return PackedVertex::Bytes(*m);
        }
        let mut t = TernaryRows {
            ones: [0; MAX_PACKED_ROWS],
            twos: [0; MAX_PACKED_ROWS],
        };
        for r in 0..self.rows {
            for (c, &e) in m.row(r).iter().enumerate() {
                match e {
                    1 => t.ones[r] |= 1 << c,
                    2 => t.twos[r] |= 1 << c,
                    _ => {}
                }
            }
        }
        PackedVertex::Ternary(t)
    }

    pub fn pack_all(&self, ms: &[MatVertex]) -> Vec<PackedVertex> {
        ms.iter().map(|m| self.pack(m)).collect()
    }

    #[inline]
    pub fn rank(&self, a: &PackedVertex) -> u8 {
        match a {
            PackedVertex::Ternary(t) => {
                let (mut ones, mut twos) = (t.ones, t.twos);
                ternary_rank(&mut ones, &mut twos, self.rows)
            }
            PackedVertex::Bytes(m) => rank(m, &self.field) as u8,
        }
    }

    /// `rank(a - b)`, i.e. the graph distance between `a` and `b`.
    #[inline]
    pub fn rank_diff(&self, a: &PackedVertex, b: &PackedVertex) -> u8 {
        match (a, b) {
            (PackedVertex::Ternary(x), PackedVertex::Ternary(y)) => {
                let mut ones = [0u32; MAX_PACKED_ROWS];
                let mut twos = [0u32; MAX_PACKED_ROWS];
                for r in 0..self.rows {
                    (ones[r], twos[r]) = t_sub(x.ones[r], x.twos[r], y.ones[r], y.twos[r]);
                }
                ternary_rank(&mut ones, &mut twos, self.rows)
            }
            (PackedVertex::Bytes(x), PackedVertex::Bytes(y)) => {
                let d = x.sub(y, &self.field).expect("kernel shape");
                rank(&d, &self.field) as u8
            }
            _ => panic!("vertices packed by different kernels"),
        }
    }

    /// Distance histogram: `hist[d]` counts `b` in `bs` with `rank(a - b) = d`.
    pub fn histogram_into(&self, a: &PackedVertex, bs: &[PackedVertex], hist: &mut [u64]) {
        for b in bs {
            hist[self.rank_diff(a, b) as usize] += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ternary_add_matches_field() {
        let f = PrimeField::new(3).unwrap();
        let enc = |v: u8| ((v == 1) as u32, (v == 2) as u32);
        for a in 0..3u8 {
            for b in 0..3u8 {
                let (a1, a2) = enc(a);
                let (b1, b2) = enc(b);
                assert_eq!(t_add(a1, a2, b1, b2), enc(f.add_raw(a, b)), "{a}+{b}");
                assert_eq!(t_sub(a1, a2, b1, b2), enc(f.sub_raw(a, b)), "{a}-{b}");
            }
        }
    }

    #[test]
    fn dispatch() {
        let f3 = PrimeField::new(3).unwrap();
        assert!(RankKernel::new(f3.clone(), 4, 5).is_bitsliced());
        assert!(!RankKernel::reference(f3, 4, 5).is_bitsliced());
        assert!(!RankKernel::new(PrimeField::new(5).unwrap(), 4, 5).is_bitsliced());
    }

    fn arb_pair(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = (MatVertex, MatVertex)> {
        let n = rows * cols;
        (
            proptest::collection::vec(0..q as u8, n),
            proptest::collection::vec(0..q as u8, n),
            0..=rows,
        )
            .prop_map(move |(a, b, keep)| {
                // zero some rows of the difference so low ranks are exercised
                let ma = MatVertex::from_fn(rows, cols, |r, c| a[r * cols + c]).unwrap();
                let mb = MatVertex::from_fn(rows, cols, |r, c| {
                    if r < keep {
                        a[r * cols + c]
                    } else {
                        b[r * cols + c]
                    }
                })
                .unwrap();
                (ma, mb)
            })
    }

    proptest! {
        #[test]
        fn bitsliced_rank_matches_reference((a, b) in arb_pair(3, 4, 5)) {
            let f = PrimeField::new(3).unwrap();
            let fast = RankKernel::new(f.clone(), 4, 5);
            let slow = RankKernel::reference(f.clone(), 4, 5);
            let expect = rank(&a.sub(&b, &f).unwrap(), &f) as u8;
            prop_assert_eq!(fast.rank_diff(&fast.pack(&a), &fast.pack(&b)), expect);
            prop_assert_eq!(slow.rank_diff(&slow.pack(&a), &slow.pack(&b)), expect);
            prop_assert_eq!(fast.rank(&fast.pack(&a)) as usize, rank(&a, &f));
        }

        #[test]
        fn bitsliced_rank_extreme_shapes((a, b) in arb_pair(3, 8, 8), (c, d) in arb_pair(3, 2, 32)) {
            let f = PrimeField::new(3).unwrap();
            let square = RankKernel::new(f.clone(), 8, 8);
            let expect = rank(&a.sub(&b, &f).unwrap(), &f) as u8;
            prop_assert_eq!(square.rank_diff(&square.pack(&a), &square.pack(&b)), expect);
            let wide = RankKernel::new(f.clone(), 2, 32);
            let expect = rank(&c.sub(&d, &f).unwrap(), &f) as u8;
            prop_assert_eq!(wide.rank_diff(&wide.pack(&c), &wide.pack(&d)), expect);
        }

        #[test]
        fn generic_kernel_gf7((a, b) in arb_pair(7, 3, 4)) {
            let f = PrimeField::new(7).unwrap();
            let k = RankKernel::new(f.clone(), 3, 4);
            let expect = rank(&a.sub(&b, &f).unwrap(), &f) as u8;
            prop_assert_eq!(k.rank_diff(&k.pack(&a), &k.pack(&b)), expect);
        }
    }
}
