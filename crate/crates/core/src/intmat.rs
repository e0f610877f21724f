//! Dense integer matrices: Bareiss determinants, Smith and Hermite normal forms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.data.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.data.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: cols.len(),
            data: self.data.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        IntMatrix {
            rows: rows.len(),
            cols: cols.len(),
            data: rows.iter().map(|&i| cols.iter().map(|&j| self.data[i][j].clone()).collect()).collect(),
        }
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// U·A·V = D with U, V unimodular and D diagonal with d_i | d_{i+1}.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.data[i][i].clone()).collect()
    }

    /// Torsion of the cokernel (factors > 1) and its free rank.
    pub fn cokernel(&self) -> (Vec<BigInt>, usize) {
        let torsion = self.invariant_factors().into_iter().filter(|x| !x.is_one()).collect();
        (torsion, self.d.rows - self.rank)
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for r in m.data.iter_mut() {
        r.swap(a, b);
    }
}

/// row_dst -= q · row_src
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src_row = m.data[src].clone();
    for (x, y) in m.data[dst].iter_mut().zip(&src_row) {
        *x -= q * y;
    }
}

/// col_dst -= q · col_src
fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for r in m.data.iter_mut() {
        let v = q * &r[src];
        r[dst] -= v;
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d.data[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| d.data[i][j].abs() < d.data[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.data.swap(t, pi);
        u.data.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);

        let mut done = true;
        for i in t + 1..rows {
            let q = d.data[i][t].div_floor(&d.data[t][t]);
            row_axpy(&mut d, i, t, &q);
            row_axpy(&mut u, i, t, &q);
            if !d.data[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = d.data[t][j].div_floor(&d.data[t][t]);
            col_axpy(&mut d, j, t, &q);
            col_axpy(&mut v, j, t, &q);
            if !d.data[t][j].is_zero() {
                done = false;
            }
        }
        if !done {
            continue;
        }
        // divisibility: fold an offending row into the pivot row and retry
        let p = d.data[t][t].clone();
        let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.data[i][j].is_multiple_of(&p)));
        if let Some(i) = offending {
            let minus_one = -BigInt::one();
            row_axpy(&mut d, t, i, &minus_one);
            row_axpy(&mut u, t, i, &minus_one);
            continue;
        }
        if p.is_negative() {
            for x in d.data[t].iter_mut().chain(u.data[t].iter_mut()) {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    SmithForm { u, v, d, rank: t }
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// echelon rows with positive pivots and entries above pivots in [0, pivot).
pub fn hermite_normal_form(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = vectors.to_vec();
    let mut out_rows = 0;
    for c in 0..dim {
        if out_rows == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (out_rows..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(out_rows, piv);
            let mut clean = true;
            for i in out_rows + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[out_rows][c]);
                let src = m[out_rows].clone();
                for (x, y) in m[i].iter_mut().zip(&src) {
                    *x -= &q * y;
                }
                if !m[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if out_rows < m.len() && !m[out_rows][c].is_zero() {
            if m[out_rows][c].is_negative() {
                for x in m[out_rows].iter_mut() {
                    *x = -x.clone();
                }
            }
            let src = m[out_rows].clone();
            for i in 0..out_rows {
                let q = m[i][c].div_floor(&src[c]);
                for (x, y) in m[i].iter_mut().zip(&src) {
                    *x -= &q * y;
                }
            }
            out_rows += 1;
        }
    }
    m.truncate(out_rows);
    m
}

/// Integral basis of ker A in Hermite normal form.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    let basis: Vec<Vec<BigInt>> = (snf.rank..a.cols).map(|j| snf.v.column(j)).collect();
    hermite_normal_form(&basis, a.cols)
}

/// Whether two integer bases span the same lattice.
pub fn same_lattice(a: &[Vec<BigInt>], b: &[Vec<BigInt>], dim: usize) -> bool {
    hermite_normal_form(a, dim) == hermite_normal_form(b, dim)
}
