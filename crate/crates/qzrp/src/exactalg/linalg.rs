//! Fraction-free (Bareiss) elimination.

use num_traits::Num;

/// Solve `a x = b` for square `a` without fractions.
///
/// Returns `(det, y)` where `det = det(a)` and `y = det * x`, so every entry
/// stays in the coefficient ring when `R` is an integral domain. Pivots are
/// the first nonzero entry in each column, scanning rows top to bottom.
/// Returns `None` when `a` is singular.
pub fn bareiss_solve<R: Clone + Num>(a: &[Vec<R>], b: &[R]) -> Option<(R, Vec<R>)> {
    let m = a.len();
    assert_eq!(b.len(), m, "right-hand side has the wrong length");
    let mut w: Vec<Vec<R>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), m, "matrix is not square");
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut prev = R::one();
    let mut negate = false;
    for k in 0..m {
        let p = (k..m).find(|&i| !w[i][k].is_zero())?;
        if p != k {
            w.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..m {
            for j in k + 1..=m {
                let v = (w[i][j].clone() * w[k][k].clone() - w[i][k].clone() * w[k][j].clone()) / prev.clone();
                w[i][j] = v;
            }
            w[i][k] = R::zero();
        }
        prev = w[k][k].clone();
    }
    // prev is the determinant of the row-swapped matrix
    let det_swapped = prev;
    let mut y = vec![R::zero(); m];
    for i in (0..m).rev() {
        let mut s = det_swapped.clone() * w[i][m].clone();
        for j in i + 1..m {
            s = s - w[i][j].clone() * y[j].clone();
        }
        y[i] = s / w[i][i].clone();
    }
    let det = if negate { R::zero() - det_swapped } else { det_swapped };
    if negate {
        // det * x = -(det_swapped * x)
        for v in y.iter_mut() {
            *v = R::zero() - v.clone();
        }
    }
    Some((det, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn small_integer_system() {
        // 2x + y = 5, x + 3y = 10 -> x = 1, y = 3, det = 5
        let a = vec![vec![bi(2), bi(1)], vec![bi(1), bi(3)]];
        let (det, y) = bareiss_solve(&a, &[bi(5), bi(10)]).unwrap();
        assert_eq!(det, bi(5));
        assert_eq!(y, vec![bi(5), bi(15)]);
    }

    #[test]
    fn needs_pivot_swap() {
        let a = vec![vec![bi(0), bi(1)], vec![bi(1), bi(0)]];
        let (det, y) = bareiss_solve(&a, &[bi(7), bi(4)]).unwrap();
        assert_eq!(det, bi(-1));
        assert_eq!(y, vec![bi(-4), bi(-7)]);
    }

    #[test]
    fn singular() {
        let a = vec![vec![bi(1), bi(2)], vec![bi(2), bi(4)]];
        assert!(bareiss_solve(&a, &[bi(1), bi(1)]).is_none());
    }

    #[test]
    fn works_over_floats() {
        let a = vec![vec![4.0f64, 1.0], vec![2.0, 3.0]];
        let (det, y) = bareiss_solve(&a, &[1.0, 2.0]).unwrap();
        assert!((y[0] / det - 0.1).abs() < 1e-12);
        assert!((y[1] / det - 0.6).abs() < 1e-12);
    }
}
