//! Exact integer and rational matrix routines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::Rat;

pub type IMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<Rat>>;

pub fn to_imat(m: &[Vec<i64>]) -> IMat {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn to_qmat(m: &IMat) -> QMat {
    m.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| r.iter().zip(b.iter()).fold(BigInt::zero(), |acc, (x, row)| if x.is_zero() { acc } else { acc + x * &row[j] }))
                .collect()
        })
        .collect()
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| r.iter().zip(b.iter()).fold(Rat::zero(), |acc, (x, row)| if x.is_zero() { acc } else { acc + x * &row[j] }))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IMat, v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// `uᵀ G v`.
pub fn bilinear(g: &IMat, u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(mat_vec(g, v)).map(|(a, b)| a * b).sum()
}

pub fn qbilinear(g: &IMat, u: &[Rat], v: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() && !g[i][j].is_zero() {
                acc += ui * vj * Rat::from_integer(g[i][j].clone());
            }
        }
    }
    acc
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over ℚ.
pub fn rank(m: &IMat) -> usize {
    let mut a = to_qmat(m);
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Solves `m x = b` over ℚ for square nonsingular `m`.
pub fn solve_rational(m: &IMat, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.len();
    let mut a: QMat = to_qmat(m);
    for (row, bi) in a.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for j in c..=n {
            a[c][j] = &a[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Inverse over ℚ of a square nonsingular matrix.
pub fn inverse_rational(m: &IMat) -> Option<QMat> {
    let n = m.len();
    let cols: Option<Vec<Vec<Rat>>> = (0..n)
        .map(|j| {
            let e: Vec<Rat> = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
            solve_rational(m, &e)
        })
        .collect();
    cols.map(|c| transpose(&c))
}

/// Signature `(positive, negative)` by congruence diagonalization over ℚ.
pub fn signature(m: &IMat) -> (usize, usize) {
    let n = m.len();
    let mut a = to_qmat(m);
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k].is_zero() {
            // bring a nonzero diagonal entry to position k, or create one
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // e_k ← e_k + s e_j with s = ±1 chosen to make the entry nonzero
                let two = Rat::from_integer(2.into());
                let s = if (&a[k][j] * &two + &a[j][j]).is_zero() { -Rat::one() } else { Rat::one() };
                for c in 0..n {
                    let t = &s * &a[j][c];
                    a[k][c] += t;
                }
                for r in 0..n {
                    let t = &s * &a[r][j];
                    a[r][k] += t;
                }
            } else {
                k += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        for j in k + 1..n {
            a[k][j] = Rat::zero();
        }
        for i in k + 1..n {
            a[i][k] = Rat::zero();
        }
        k += 1;
    }
    (pos, neg)
}

/// Smith normal form `u · m · v = d` with unimodular `u`, `v`; returns
/// `(d_diagonal, u, v)` where the diagonal has length `min(rows, cols)` and
/// nonnegative entries each dividing the next (zeros last).
pub fn smith(m: &IMat) -> (Vec<BigInt>, IMat, IMat) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let row_op = |a: &mut IMat, u: &mut IMat, dst: usize, src: usize, f: &BigInt| {
        // row dst -= f * row src
        if f.is_zero() {
            return;
        }
        let (s, d) = (a[src].clone(), &mut a[dst]);
        for (x, y) in d.iter_mut().zip(&s) {
            *x -= f * y;
        }
        let (s, d) = (u[src].clone(), &mut u[dst]);
        for (x, y) in d.iter_mut().zip(&s) {
            *x -= f * y;
        }
    };
    let col_op = |a: &mut IMat, v: &mut IMat, dst: usize, src: usize, f: &BigInt| {
        if f.is_zero() {
            return;
        }
        for r in a.iter_mut() {
            let t = f * &r[src];
            r[dst] -= t;
        }
        for r in v.iter_mut() {
            let t = f * &r[src];
            r[dst] -= t;
        }
    };
    let n = rows.min(cols);
    for k in 0..n {
        loop {
            // pivot: smallest nonzero absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(k, pi);
            u.swap(k, pi);
            for r in a.iter_mut() {
                r.swap(k, pj);
            }
            for r in v.iter_mut() {
                r.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..rows {
                let f = a[i][k].div_floor(&a[k][k]);
                row_op(&mut a, &mut u, i, k, &f);
                if !a[i][k].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                let f = a[k][j].div_floor(&a[k][k]);
                col_op(&mut a, &mut v, j, k, &f);
                if !a[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !(&a[i][j] % &a[k][k]).is_zero()));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_op(&mut a, &mut u, k, i, &minus_one);
                }
                None => break,
            }
        }
        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -x.clone();
            }
            for x in u[k].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let d = (0..n).map(|i| a[i][i].clone()).collect();
    (d, u, v)
}

/// Row-style Hermite normal form of the row span; zero rows dropped.
pub fn hnf_rows(m: &IMat) -> IMat {
    let mut a: IMat = m.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][c].abs()).unwrap();
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].div_floor(&a[r][c]);
                let src = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let f = a[i][c].div_floor(&a[r][c]);
                if !f.is_zero() {
                    let src = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(&src) {
                        *x -= &f * y;
                    }
                }
            }
            r += 1;
        }
    }
    a.retain(|r| r.iter().any(|x| !x.is_zero()));
    a
}

/// Basis of the integer kernel `{x : m x = 0}` as rows.
pub fn integer_kernel(m: &IMat) -> IMat {
    let cols = m.first().map_or(0, |r| r.len());
    let (d, _, v) = smith(m);
    let r = d.iter().filter(|x| !x.is_zero()).count();
    (r..cols).map(|j| v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Common denominator of a rational vector.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn rat_to_int(v: &[Rat]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_rank() {
        let m = to_imat(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(det(&m), BigInt::from(4));
        assert_eq!(rank(&m), 3);
        assert_eq!(signature(&m), (3, 0));
        let u = to_imat(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(signature(&u), (1, 1));
    }

    #[test]
    fn smith_transforms() {
        let m = to_imat(&[vec![-8, 4], vec![4, -8]]);
        let (d, u, v) = smith(&m);
        assert_eq!(d, vec![BigInt::from(4), BigInt::from(12)]);
        let p = mat_mul(&mat_mul(&u, &m), &v);
        assert_eq!(p, to_imat(&[vec![4, 0], vec![0, 12]]));
    }

    #[test]
    fn kernel() {
        let m = to_imat(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for r in &k {
            assert!(mat_vec(&m, r).iter().all(|x| x.is_zero()));
        }
    }
}
