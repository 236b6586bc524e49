//! Prime-field scalars and the small dense matrices that serve as vertices
//! of the bilinear forms graph.
//!
//! A vertex is a `rows x cols` matrix over GF(q) stored as a packed row-major
//! residue array. Distance between two vertices is the rank of their
//! difference; [`rank`] is the reference eliminator, and
//! [`crate::kernel::RankKernel`] provides the packed hot-path variant.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Upper bound on `rows * cols` for a [`MatVertex`].
pub const MAX_ENTRIES: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn value(self) -> u8 {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
}

/// GF(q) for an odd prime `q < 256`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u8,
    inv: Vec<u8>,
}

pub fn is_odd_prime(q: u32) -> bool {
    q >= 3
        && q % 2 == 1
        && (3..)
            .step_by(2)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if !is_odd_prime(q) || q > 251 {
            return Err(Error::InvalidParams(format!(
                "q = {q} must be an odd prime below 256"
            )));
        }
        let mut inv = vec![0u8; q as usize];
        for a in 1..q {
            let b = (1..q).find(|b| (a * b) % q == 1).expect("prime field");
            inv[a as usize] = b as u8;
        }
        Ok(Self { q: q as u8, inv })
    }

    pub fn q(&self) -> u32 {
        self.q as u32
    }

    pub fn element(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.q as i64) as u8)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add_raw(a.0, b.0))
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.sub_raw(a.0, b.0))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_raw(a.0, b.0))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.sub_raw(0, a.0))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse { q: self.q() });
        }
        Ok(FieldElement(self.inv[a.0 as usize]))
    }

    /// Binary field operation; for [`ArithOp::Inv`] the second operand is ignored.
    pub fn apply(&self, op: ArithOp, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Inv => self.inv(a)?,
        })
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u8, b: u8) -> u8 {
        let s = a as u16 + b as u16;
        let q = self.q as u16;
        (if s >= q { s - q } else { s }) as u8
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            (a as u16 + self.q as u16 - b as u16) as u8
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.q as u16) as u8
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}

/// A `rows x cols` matrix over GF(q); one vertex of the graph.
///
/// Entries beyond `rows * cols` are always zero, so the derived `Eq`, `Ord`
/// and `Hash` agree with entrywise comparison.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatVertex {
    rows: u8,
    cols: u8,
    entries: [u8; MAX_ENTRIES],
}

impl MatVertex {
    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols > MAX_ENTRIES {
            return Err(Error::UnsupportedShape {
                rows,
                cols,
                reason: "need 1 <= rows, cols and rows * cols <= 64",
            });
        }
        Ok(Self {
            rows: rows as u8,
            cols: cols as u8,
            entries: [0; MAX_ENTRIES],
        })
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: &[u8],
        field: &PrimeField,
    ) -> Result<Self> {
        let mut m = Self::zero(rows, cols)?;
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                left_rows: rows,
                left_cols: cols,
                right_rows: entries.len(),
                right_cols: 1,
            });
        }
        for (dst, &e) in m.entries.iter_mut().zip(entries) {
            if e as u32 >= field.q() {
                return Err(Error::InvalidParams(format!(
                    "entry {e} is not a residue mod {}",
                    field.q()
                )));
            }
            *dst = e;
        }
        Ok(m)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut m = Self::zero(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                m.entries[r * cols + c] = f(r, c);
            }
        }
        Ok(m)
    }

    /// Outer product `u v^t`.
    pub fn outer(u: &[u8], v: &[u8], field: &PrimeField) -> Result<Self> {
        Self::from_fn(u.len(), v.len(), |r, c| field.mul_raw(u[r], v[c]))
    }

    pub fn rows(&self) -> usize {
        self.rows as usize
    }

    pub fn cols(&self) -> usize {
        self.cols as usize
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries[..self.rows() * self.cols()]
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols() + c]
    }

    pub fn row(&self, r: usize) -> &[u8] {
        let c = self.cols();
        &self.entries[r * c..(r + 1) * c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left_rows: self.rows(),
                left_cols: self.cols(),
                right_rows: other.rows(),
                right_cols: other.cols(),
            });
        }
        Ok(())
    }

    /// Entrywise difference `self - other`.
    pub fn sub(&self, other: &Self, field: &PrimeField) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = *self;
        for (o, &b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *o = field.sub_raw(*o, b);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self, field: &PrimeField) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = *self;
        for (o, &b) in out.entries.iter_mut().zip(other.entries.iter()) {
            *o = field.add_raw(*o, b);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let (r, c) = self.shape();
        Self::from_fn(c, r, |i, j| self.get(j, i)).expect("transpose keeps entry count")
    }

    /// Position of this matrix in the base-q enumeration of all matrices of
    /// its shape (entry `i` in row-major order is digit `i`).
    pub fn index(&self, q: u32) -> u64 {
        self.entries()
            .iter()
            .rev()
            .fold(0u64, |acc, &e| acc * q as u64 + e as u64)
    }

    pub fn from_index(mut idx: u64, rows: usize, cols: usize, q: u32) -> Result<Self> {
        let mut m = Self::zero(rows, cols)?;
        for e in m.entries[..rows * cols].iter_mut() {
            *e = (idx % q as u64) as u8;
            idx /= q as u64;
        }
        Ok(m)
    }
}

impl fmt::Debug for MatVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatVertex({self})")
    }
}

/// Rows separated by `;`. Entries are single digits when every entry is
/// below 10, otherwise comma separated.
impl fmt::Display for MatVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.entries().iter().any(|&e| e >= 10);
        for r in 0..self.rows() {
            if r > 0 {
                f.write_str(";")?;
            }
            for (c, e) in self.row(r).iter().enumerate() {
                if wide && c > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MatVertex {
    type Err = Error;

    /// Parses the [`fmt::Display`] form. Entries are not reduced; callers
    /// validate them against a field.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot parse matrix {s:?}"));
        let rows: Vec<Vec<u8>> = s
            .split(';')
            .map(|row| {
                let row = row.trim();
                if row.contains(',') {
                    row.split(',')
                        .map(|e| e.trim().parse::<u8>().map_err(|_| bad()))
                        .collect()
                } else {
                    row.chars()
                        .map(|ch| ch.to_digit(10).map(|d| d as u8).ok_or_else(bad))
                        .collect()
                }
            })
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, Vec::len);
        if cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(bad());
        }
        let flat: Vec<u8> = rows.concat();
        let mut m = Self::zero(rows.len(), cols)?;
        m.entries[..flat.len()].copy_from_slice(&flat);
        Ok(m)
    }
}

/// Reference rank by Gaussian elimination, pivoting on the first nonzero
/// entry in column order.
pub fn rank(m: &MatVertex, field: &PrimeField) -> usize {
    let (rows, cols) = m.shape();
    let mut a = m.entries;
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if p != rank {
            for c in 0..cols {
                a.swap(p * cols + c, rank * cols + c);
            }
        }
        let inv = field.inv_raw(a[rank * cols + col]);
        for c in col..cols {
            a[rank * cols + c] = field.mul_raw(a[rank * cols + c], inv);
        }
        for r in rank + 1..rows {
            let f = a[r * cols + col];
            if f != 0 {
                for c in col..cols {
                    let t = field.mul_raw(f, a[rank * cols + c]);
                    a[r * cols + c] = field.sub_raw(a[r * cols + c], t);
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// All nonzero vectors of GF(q)^len, in base-q order of their entries.
pub fn nonzero_vectors(len: usize, field: &PrimeField) -> Vec<Vec<u8>> {
    let q = field.q() as u64;
    let total = q.pow(len as u32);
    (1..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let d = (idx % q) as u8;
                    idx /= q;
                    d
                })
                .collect()
        })
        .collect()
}

/// Every rank-one `rows x cols` matrix exactly once, as `u v^t` with `u`
/// normalized so that its first nonzero entry is 1.
pub fn enumerate_rank_one(rows: usize, cols: usize, field: &PrimeField) -> Result<Vec<MatVertex>> {
    MatVertex::zero(rows, cols)?;
    let us: Vec<Vec<u8>> = nonzero_vectors(rows, field)
        .into_iter()
        .filter(|u| u.iter().find(|&&e| e != 0) == Some(&1))
        .collect();
    let vs = nonzero_vectors(cols, field);
    let mut out = Vec::with_capacity(us.len() * vs.len());
    for u in &us {
        for v in &vs {
            out.push(MatVertex::outer(u, v, field)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn gf(q: u32) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn small_field_arithmetic() {
        let f3 = gf(3);
        assert_eq!(f3.add(f3.element(2), f3.element(2)), f3.element(1));
        assert_eq!(f3.inv(f3.element(2)).unwrap(), f3.element(2));
        let f5 = gf(5);
        assert_eq!(f5.inv(f5.element(3)).unwrap(), f5.element(2));
        assert_eq!(
            f5.apply(ArithOp::Sub, f5.element(1), f5.element(3))
                .unwrap(),
            f5.element(3)
        );
        assert!(matches!(
            f5.inv(FieldElement::ZERO),
            Err(Error::ZeroInverse { q: 5 })
        ));
    }

    #[test]
    fn rejects_even_and_composite_orders() {
        for q in [0, 1, 2, 4, 9, 15, 256] {
            assert!(PrimeField::new(q).is_err(), "q = {q}");
        }
        for q in [3, 5, 7, 11, 251] {
            assert!(PrimeField::new(q).is_ok(), "q = {q}");
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [3u32, 5, 7] {
            let f = gf(q);
            let els: Vec<_> = (0..q as i64).map(|v| f.element(v)).collect();
            for &a in &els {
                assert_eq!(f.mul(f.element(q as i64), a), FieldElement::ZERO);
                if a != FieldElement::ZERO {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(f.sub(a, b), b), a);
                    for &c in &els {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn mat_sub_examples() {
        let f = gf(3);
        let a = MatVertex::from_entries(3, 4, &[0, 1, 2, 0, 1, 1, 2, 2, 0, 0, 1, 2], &f).unwrap();
        let b = MatVertex::from_entries(3, 4, &[2, 2, 2, 1, 0, 1, 0, 2, 1, 1, 1, 0], &f).unwrap();
        assert!(a.sub(&a, &f).unwrap().is_zero());
        let s = a
            .sub(&b, &f)
            .unwrap()
            .add(&b.sub(&a, &f).unwrap(), &f)
            .unwrap();
        assert!(s.is_zero());
        assert!(a.sub(&b, &f).unwrap().entries().iter().all(|&e| e < 3));
        let c = MatVertex::zero(4, 3).unwrap();
        assert!(matches!(a.sub(&c, &f), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn rank_examples() {
        let f = gf(3);
        assert_eq!(rank(&MatVertex::zero(3, 4).unwrap(), &f), 0);
        let uv = MatVertex::outer(&[0, 2, 1], &[1, 0, 2, 2], &f).unwrap();
        assert_eq!(rank(&uv, &f), 1);
        let id = MatVertex::from_fn(3, 4, |r, c| (r == c) as u8).unwrap();
        assert_eq!(rank(&id, &f), 3);
        let id = MatVertex::from_fn(4, 5, |r, c| (r == c) as u8).unwrap();
        assert_eq!(rank(&id, &f), 4);
    }

    #[test]
    fn rank_one_enumeration_counts() {
        let f = gf(3);
        let list = enumerate_rank_one(3, 4, &f).unwrap();
        assert_eq!(list.len(), (27 - 1) * (81 - 1) / 2);
        assert_eq!(list.len(), 1040);
        let set: BTreeSet<_> = list.iter().collect();
        assert_eq!(set.len(), list.len());
        assert!(list.iter().all(|m| rank(m, &f) == 1));

        let list = enumerate_rank_one(4, 5, &f).unwrap();
        assert_eq!(list.len(), 9680);
        assert_eq!(list.iter().collect::<BTreeSet<_>>().len(), 9680);

        let f5 = gf(5);
        let list = enumerate_rank_one(2, 3, &f5).unwrap();
        assert_eq!(list.len(), (25 - 1) * (125 - 1) / 4);
        assert_eq!(list.iter().collect::<BTreeSet<_>>().len(), list.len());
    }

    #[test]
    fn display_parse_round_trip() {
        let f = gf(7);
        let m = MatVertex::from_fn(3, 4, |r, c| ((r * 5 + c * 3) % 7) as u8).unwrap();
        let s = m.to_string();
        assert_eq!(s.parse::<MatVertex>().unwrap(), m);
        assert!("01;2".parse::<MatVertex>().is_err());
        let big = MatVertex::from_entries(1, 2, &[10, 3], &gf(11)).unwrap();
        assert_eq!(big.to_string(), "10,3");
        assert_eq!("10,3".parse::<MatVertex>().unwrap(), big);
        let _ = f;
    }

    fn arb_matrix(q: u32, rows: usize, cols: usize) -> impl Strategy<Value = MatVertex> {
        proptest::collection::vec(0..q as u8, rows * cols)
            .prop_map(move |e| MatVertex::from_fn(rows, cols, |r, c| e[r * cols + c]).unwrap())
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(m in arb_matrix(3, 4, 5)) {
            let f = gf(3);
            prop_assert_eq!(rank(&m, &f), rank(&m.transpose(), &f));
        }

        #[test]
        fn rank_is_subadditive(a in arb_matrix(5, 3, 4), b in arb_matrix(5, 3, 4)) {
            let f = gf(5);
            let s = a.add(&b, &f).unwrap();
            prop_assert!(rank(&s, &f) <= rank(&a, &f) + rank(&b, &f));
            prop_assert!(rank(&s, &f) <= 3);
        }

        #[test]
        fn index_round_trip(m in arb_matrix(3, 3, 4)) {
            let idx = m.index(3);
            prop_assert!(idx < 3u64.pow(12));
            prop_assert_eq!(MatVertex::from_index(idx, 3, 4, 3).unwrap(), m);
        }
    }
}
