//! Dense linear algebra over a prime field `Z/pZ`.

use std::fmt;

use crate::arith::inv_mod_prime;

/// Row-major matrix over `Z/pZ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatModP {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for MatModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatModP(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl MatModP {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row.iter().map(|&x| x.rem_euclid(p as i64) as u32));
        }
        Self { p, rows: r, cols: c, data }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul(&self, other: &MatModP) -> MatModP {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let p = self.p as u64;
        let mut out = MatModP::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % p) as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn sub(&self, other: &MatModP) -> MatModP {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + p - b) % p).collect();
        MatModP { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &MatModP) -> MatModP {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + b) % p).collect();
        MatModP { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> MatModP {
        let p = self.p as u64;
        let data = self.data.iter().map(|&a| (a as u64 * c as u64 % p) as u32).collect();
        MatModP { p: self.p, rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut e: u64) -> MatModP {
        assert_eq!(self.rows, self.cols);
        let mut acc = MatModP::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == MatModP::identity(self.p, self.rows)
    }

    /// Block-diagonal sum of two square matrices.
    pub fn direct_sum(&self, other: &MatModP) -> MatModP {
        let n = self.rows + other.rows;
        let mut out = MatModP::zeros(self.p, n, n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p as u64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = inv_mod_prime(self.get(r, c) as u64, p).expect("pivot is nonzero");
            for j in 0..self.cols {
                let idx = r * self.cols + j;
                self.data[idx] = (self.data[idx] as u64 * inv % p) as u32;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c) as u64;
                if f == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let sub = f * self.get(r, j) as u64 % p;
                    let idx = i * self.cols + j;
                    self.data[idx] = ((self.data[idx] as u64 + p - sub) % p) as u32;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn determinant(&self) -> u32 {
        assert_eq!(self.rows, self.cols);
        let p = self.p as u64;
        let mut m = self.clone();
        let n = self.rows;
        let mut det: u64 = 1;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else {
                return 0;
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = (p - det) % p;
            }
            let pivot = m.get(c, c) as u64;
            det = det * pivot % p;
            let inv = inv_mod_prime(pivot, p).expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m.get(i, c) as u64 * inv % p;
                if f == 0 {
                    continue;
                }
                for j in c..n {
                    let sub = f * m.get(c, j) as u64 % p;
                    let idx = i * n + j;
                    m.data[idx] = ((m.data[idx] as u64 + p - sub) % p) as u32;
                }
            }
        }
        det as u32
    }

    pub fn inverse(&self) -> Option<MatModP> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = MatModP::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = MatModP::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.get(r, f)) % p;
                }
                v
            })
            .collect()
    }
}

/// Solution set of an affine system `A x = b` over `Z/pZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Empty,
    /// One particular solution plus the dimension of the homogeneous kernel.
    Space {
        particular: Vec<u32>,
        kernel_dim: usize,
    },
}

impl AffineSolution {
    /// Number of solutions, `p^kernel_dim`, or zero.
    pub fn count(&self, p: u32) -> u128 {
        match self {
            AffineSolution::Empty => 0,
            AffineSolution::Space { kernel_dim, .. } => (p as u128).pow(*kernel_dim as u32),
        }
    }
}

/// Solves `rows · x = rhs` for `x ∈ (Z/pZ)^n`.
pub fn solve_affine(p: u32, n: usize, rows: &[Vec<u32>], rhs: &[u32]) -> AffineSolution {
    assert_eq!(rows.len(), rhs.len());
    if rows.is_empty() {
        return AffineSolution::Space { particular: vec![0; n], kernel_dim: n };
    }
    let mut aug = MatModP::zeros(p, rows.len(), n + 1);
    for (i, (row, &b)) in rows.iter().zip(rhs).enumerate() {
        for (j, &a) in row.iter().enumerate() {
            aug.set(i, j, a);
        }
        aug.set(i, n, b);
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return AffineSolution::Empty;
    }
    let mut particular = vec![0u32; n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug.get(r, n);
    }
    AffineSolution::Space { particular, kernel_dim: n - pivots.len() }
}

/// Dot product mod `p`.
pub fn dot(p: u32, a: &[u32], b: &[u32]) -> u32 {
    let p64 = p as u64;
    (a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64 % p64).sum::<u64>() % p64) as u32
}
