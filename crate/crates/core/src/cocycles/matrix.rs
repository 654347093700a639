//! Dense matrices over a [`Ring`], with unit-pivot elimination and the
//! division-free Berkowitz determinant.

use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RingElement {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: RingElement) {
        self.data[r * self.cols + c] = x;
    }

    /// The leading `rows x cols` block.
    pub fn leading(&self, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(&self.ring, rows, cols);
        for r in 0..rows.min(self.rows) {
            for c in 0..cols.min(self.cols) {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        let mut out = Matrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * other.cols + j];
                    *slot = &*slot + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(&self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    /// `X` with `self · X = rhs`, by Gauss-Jordan elimination that only ever
    /// divides by units. Fails if some column has no unit pivot.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for j in 0..n {
            let p = (j..n)
                .find(|&i| a.get(i, j).is_unit())
                .ok_or_else(|| Error::NotAUnit(format!("no unit pivot in column {j} of a {n}x{n} system")))?;
            a.swap_rows(p, j);
            b.swap_rows(p, j);
            let inv = a.get(j, j).invert()?;
            a.scale_row(j, &inv);
            b.scale_row(j, &inv);
            for i in 0..n {
                if i == j || a.get(i, j).is_zero() {
                    continue;
                }
                let f = a.get(i, j).clone();
                a.sub_row_multiple(i, j, &f);
                b.sub_row_multiple(i, j, &f);
            }
        }
        Ok(b)
    }

    /// `Y` with `Y · self = rhs`.
    pub fn solve_left(&self, rhs: &Matrix) -> Result<Matrix> {
        Ok(self.transpose().solve(&rhs.transpose())?.transpose())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, x: &RingElement) {
        for c in 0..self.cols {
            let slot = &mut self.data[r * self.cols + c];
            if !slot.is_zero() {
                *slot = &*slot * x;
            }
        }
    }

    /// `row[i] -= f · row[j]`.
    fn sub_row_multiple(&mut self, i: usize, j: usize, f: &RingElement) {
        for c in 0..self.cols {
            let src = &self.data[j * self.cols + c];
            if src.is_zero() {
                continue;
            }
            let d = f * src;
            let slot = &mut self.data[i * self.cols + c];
            *slot = &*slot - &d;
        }
    }

    /// Determinant by Berkowitz's algorithm, which uses no division.
    pub fn det(&self) -> RingElement {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        let ring = &self.ring;
        if n == 0 {
            return ring.one();
        }
        // coefficients of det(λI - A_r), highest degree first
        let mut poly = vec![ring.one(), -self.get(0, 0)];
        for r in 1..n {
            // A_(r+1) = [[A_r, col], [row, arr]]
            let col: Vec<RingElement> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let row: Vec<RingElement> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut toeplitz = Vec::with_capacity(r + 2);
            toeplitz.push(ring.one());
            toeplitz.push(-self.get(r, r));
            let mut v = col;
            for _ in 0..r {
                let dot = row.iter().zip(&v).fold(ring.zero(), |acc, (x, y)| &acc + &(x * y));
                toeplitz.push(-&dot);
                v = (0..r).map(|i| (0..r).fold(ring.zero(), |acc, k| &acc + &(self.get(i, k) * &v[k]))).collect();
            }
            let mut next = vec![ring.zero(); r + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, c) in poly.iter().enumerate().take(i + 1) {
                    if !c.is_zero() && !toeplitz[i - j].is_zero() {
                        *slot = &*slot + &(&toeplitz[i - j] * c);
                    }
                }
            }
            poly = next;
        }
        let c = poly.pop().unwrap();
        if n.is_multiple_of(2) {
            c
        } else {
            -c
        }
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}x{} matrix", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                m.set(r, c, ring.from_i64(*x));
            }
        }
        m
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &Matrix) -> RingElement {
        let n = m.rows();
        if n == 0 {
            return m.ring().one();
        }
        let mut acc = m.ring().zero();
        for c in 0..n {
            let mut minor = Matrix::zeros(m.ring(), n - 1, n - 1);
            for r in 1..n {
                let mut cc = 0;
                for k in 0..n {
                    if k != c {
                        minor.set(r - 1, cc, m.get(r, k).clone());
                        cc += 1;
                    }
                }
            }
            let term = m.get(0, c) * &cofactor_det(&minor);
            acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn berkowitz_matches_cofactors() {
        let r = Ring::rationals();
        let m = from_rows(&r, &[&[2, -1, 0, 3], &[1, 4, 2, -2], &[0, 5, -3, 1], &[7, 0, 1, 1]]);
        assert_eq!(m.det(), cofactor_det(&m));
        let z4 = Ring::parse("Z/4[e;2]").unwrap();
        let e = z4.generator("e").unwrap();
        let mut m = Matrix::identity(&z4, 3);
        m.set(0, 1, e.clone());
        m.set(1, 0, z4.from_i64(2));
        m.set(2, 2, &z4.from_i64(3) + &e);
        m.set(1, 2, z4.from_i64(3));
        assert_eq!(m.det(), cofactor_det(&m));
    }

    #[test]
    fn solve_inverts() {
        let r = Ring::parse("Z/8").unwrap();
        let a = from_rows(&r, &[&[3, 2, 0], &[4, 1, 6], &[2, 0, 5]]);
        let b = from_rows(&r, &[&[1, 0], &[2, 7], &[0, 3]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let y = a.solve_left(&b.transpose()).unwrap();
        assert_eq!(y.mul(&a), b.transpose());
    }

    #[test]
    fn no_unit_pivot() {
        let r = Ring::parse("Z/4").unwrap();
        let a = from_rows(&r, &[&[2, 0], &[0, 1]]);
        assert!(a.solve(&Matrix::identity(&r, 2)).is_err());
    }
}
