//! Gaussian elimination over the rationals.

use crate::scalar::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..ncols {
                let d = &f * &m[r][j];
                m[i][j] -= &d;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    rref(rows).1.len()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in order.
pub fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Matrix = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Unique solutions of `A x = b` for each right-hand side, where `A` is
/// `m × n`. Returns `None` if `A` has rank below `n` or any system is
/// inconsistent.
pub fn solve_unique(a: &[Vec<Rational>], rhs: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let k = rhs.len();
    let aug: Matrix = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= n) || pivots.len() < n {
        return None;
    }
    Some(
        (0..k)
            .map(|j| (0..n).map(|i| red[i][n + j].clone()).collect())
            .collect(),
    )
}

pub fn determinant(square: &[Vec<Rational>]) -> Rational {
    let n = square.len();
    let mut m: Matrix = square.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].recip().expect("nonzero pivot");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= &d;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn rank_and_rref() {
        let m = vec![row(&[1, 2]), row(&[2, 4]), row(&[0, 1])];
        assert_eq!(rank(&m), 2);
        let (r, p) = rref(&m);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r, vec![row(&[1, 0]), row(&[0, 1])]);
        assert_eq!(independent_subset(&m), vec![0, 2]);
    }

    #[test]
    fn solve_overdetermined_consistent() {
        // x + y = 3, x - y = 1, 2x = 4
        let a = vec![row(&[1, 1]), row(&[1, -1]), row(&[2, 0])];
        let sol = solve_unique(&a, &[row(&[3, 1, 4])]).unwrap();
        assert_eq!(sol[0], row(&[2, 1]));
        assert!(solve_unique(&a, &[row(&[3, 1, 5])]).is_none());
        assert!(solve_unique(&[row(&[1, 1])], &[row(&[1])]).is_none());
    }

    #[test]
    fn det() {
        let m = vec![row(&[2, 1]), row(&[1, 3])];
        assert_eq!(determinant(&m), Rational::from(5));
        assert_eq!(determinant(&[row(&[0, 1]), row(&[1, 0])]), Rational::from(-1));
    }
}
