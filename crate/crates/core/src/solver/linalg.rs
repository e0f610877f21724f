use num_rational::BigRational;
use num_traits::Zero;

/// Solves Σ_k a_k·columns[k] = rhs over Q, if consistent.
pub fn solve_columns(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = rhs.len();
    let k = columns.len();
    let mut rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let mut r: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            r.push(rhs[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..m).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for x in rows[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let src = rows[row].clone();
                for (x, y) in rows[i].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if rows[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = rows[r][k].clone();
    }
    Some(sol)
}

/// Determinant over Q by Gaussian elimination.
pub fn determinant(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::from_integer(1.into());
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            let src = a[c].clone();
            for (x, y) in a[i].iter_mut().zip(&src) {
                *x -= &f * y;
            }
        }
    }
    det
}
