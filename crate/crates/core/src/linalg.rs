//! Dense exact rational linear algebra: elimination, determinants, ranks,
//! affine coordinates. Sizes here are tiny (ambient dimension at most 4 plus
//! a height coordinate), so everything is straightforward Gaussian
//! elimination with exact pivots.

use crate::rat::Rat;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<Rat>>;

/// Solves the square system `A x = b` by Gauss-Jordan elimination.
/// Returns `None` when `A` is singular.
pub fn solve_square(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let sub = &f * &m[col][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant by fraction-preserving elimination.
pub fn det(a: &Matrix) -> Rat {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    let mut m = a.to_vec();
    let mut d = Rat::one();
    for col in 0..n {
        let piv = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if piv != col {
            m.swap(col, piv);
            d = -d;
        }
        d *= m[col][col].clone();
        let p = m[col][col].clone();
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for c in col..n {
                    let sub = &f * &m[col][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
    }
    d
}

/// Row rank of an arbitrary rectangular matrix.
pub fn rank(a: &Matrix) -> usize {
    if a.is_empty() {
        return 0;
    }
    let rows = a.len();
    let cols = a[0].len();
    let mut m = a.to_vec();
    let mut rk = 0;
    for col in 0..cols {
        if rk == rows {
            break;
        }
        let piv = match (rk..rows).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(rk, piv);
        let p = m[rk][col].clone();
        for r in rk + 1..rows {
            if !m[r][col].is_zero() {
                let f = &m[r][col] / &p;
                for c in col..cols {
                    let sub = &f * &m[rk][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        rk += 1;
    }
    rk
}

/// One-dimensional kernel of a rectangular matrix, if the kernel has
/// dimension exactly one. Returns a nonzero representative. Used for the
/// affine-dependence (Radon) coefficients of `n+2` points.
pub fn kernel_vector(a: &Matrix) -> Option<Vec<Rat>> {
    if a.is_empty() {
        return None;
    }
    let rows = a.len();
    let cols = a[0].len();
    let mut m = a.to_vec();
    // reduced row echelon with pivot-column tracking
    let mut pivot_cols = Vec::new();
    let mut rk = 0;
    for col in 0..cols {
        if rk == rows {
            break;
        }
        let piv = match (rk..rows).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(rk, piv);
        let p = m[rk][col].clone();
        for x in m[rk].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..rows {
            if r != rk && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..cols {
                    let sub = &f * &m[rk][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        pivot_cols.push(col);
        rk += 1;
    }
    if cols - rk != 1 {
        return None;
    }
    let free_col = (0..cols).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![Rat::zero(); cols];
    v[free_col] = Rat::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -m[row][free_col].clone();
    }
    Some(v)
}

/// Affine coordinates of `p` with respect to the affinely independent
/// `points` (coordinates sum to one). `None` when `p` is outside the affine
/// hull or the points are dependent.
pub fn affine_coords(points: &[Vec<Rat>], p: &[Rat]) -> Option<Vec<Rat>> {
    let k = points.len();
    let dim = p.len();
    assert!(points.iter().all(|q| q.len() == dim));
    if k == 0 {
        return None;
    }
    // Solve [P^T; 1^T] lambda = [p; 1]; the system is (dim+1) x k. Use
    // least-structure approach: pick k independent rows via elimination on
    // the full rectangular system and verify the remaining rows.
    let mut rows: Matrix = Vec::with_capacity(dim + 1);
    let mut rhs: Vec<Rat> = Vec::with_capacity(dim + 1);
    for d in 0..dim {
        rows.push(points.iter().map(|q| q[d].clone()).collect());
        rhs.push(p[d].clone());
    }
    rows.push(vec![Rat::one(); k]);
    rhs.push(Rat::one());
    solve_rect_exact(&rows, &rhs)
}

/// Solves a (possibly overdetermined) rectangular system exactly, returning
/// `None` when inconsistent or underdetermined.
fn solve_rect_exact(a: &Matrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rk = 0;
    for col in 0..cols {
        if rk == rows {
            break;
        }
        let piv = match (rk..rows).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(rk, piv);
        let p = m[rk][col].clone();
        for x in m[rk].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..rows {
            if r != rk && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=cols {
                    let sub = &f * &m[rk][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        pivot_cols.push(col);
        rk += 1;
    }
    // inconsistent rows
    for r in rk..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    if rk < cols {
        return None; // underdetermined
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = m[row][cols].clone();
    }
    Some(x)
}

/// True when the points are affinely independent (they span a simplex of
/// dimension `points.len() - 1`).
pub fn affinely_independent(points: &[Vec<Rat>]) -> bool {
    if points.is_empty() {
        return false;
    }
    if points.len() == 1 {
        return true;
    }
    let base = &points[0];
    let diffs: Matrix = points[1..]
        .iter()
        .map(|q| q.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&diffs) == points.len() - 1
}

/// Signed volume of a full-dimensional simplex given by `dim+1` points in
/// `R^dim`, times `dim!` left out: callers compare absolute values, so the
/// `1/dim!` factor is irrelevant as long as it is used consistently.
pub fn simplex_det(points: &[Vec<Rat>]) -> Rat {
    let dim = points[0].len();
    assert_eq!(points.len(), dim + 1);
    let base = &points[0];
    let m: Matrix = points[1..]
        .iter()
        .map(|q| q.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    det(&m)
}

/// Unnormalized volume |det|/1 of a simplex; see [`simplex_det`].
pub fn simplex_volume(points: &[Vec<Rat>]) -> Rat {
    simplex_det(points).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn solve_and_det() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve_square(&a, &[rat(5), rat(10)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
        assert_eq!(det(&a), rat(5));
        let sing = m(&[&[1, 2], &[2, 4]]);
        assert!(solve_square(&sing, &[rat(1), rat(2)]).is_none());
        assert_eq!(det(&sing), rat(0));
    }

    #[test]
    fn rank_of_rectangles() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1], &[1, 1]])), 2);
    }

    #[test]
    fn affine_coordinates_of_midpoint() {
        let tri = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
        ];
        let lam = affine_coords(&tri, &[ratio(1, 3), ratio(1, 3)]).unwrap();
        assert_eq!(lam, vec![ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
        // outside the hull still solves (coords go negative)
        let lam = affine_coords(&tri, &[rat(2), rat(0)]).unwrap();
        assert_eq!(lam, vec![rat(-1), rat(2), rat(0)]);
    }

    #[test]
    fn kernel_of_dependence() {
        // four points in the plane: unique affine dependence
        // rows: x coords, y coords, all-ones
        let a = m(&[&[0, 2, 0, 1], &[0, 0, 2, 1], &[1, 1, 1, 1]]);
        let k = kernel_vector(&a).unwrap();
        // (1,1) = 1/4*(0,0) wrong scale; verify A k = 0 instead
        for row in &a {
            let s: Rat = row.iter().zip(&k).map(|(a, b)| a * b).sum();
            assert_eq!(s, rat(0));
        }
    }

    #[test]
    fn independence_and_volume() {
        let pts = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
        ];
        assert!(affinely_independent(&pts));
        assert_eq!(simplex_volume(&pts), rat(1));
        let degen = vec![
            vec![rat(0), rat(0)],
            vec![rat(1), rat(1)],
            vec![rat(2), rat(2)],
        ];
        assert!(!affinely_independent(&degen));
    }
}
