//! Small dense linear algebra over exact rings and fields.

use super::field::{Field, Ring};

pub type Row<R> = [R; 4];
pub type Mat4<R> = [Row<R>; 4];

/// Determinant of a square matrix given as rows, by cofactor expansion.
pub fn det<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n));
    match n {
        0 => panic!("determinant of an empty matrix"),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = m[0][0].zero_like();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<R>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].clone() * det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

pub fn det4<R: Ring>(m: &Mat4<R>) -> R {
    let rows: Vec<Vec<R>> = m.iter().map(|r| r.to_vec()).collect();
    det(&rows)
}

/// The vector `c` with `det[v; r1; r2; r3] = v . c`; it is orthogonal to the three rows.
pub fn cross3<R: Ring>(r1: &Row<R>, r2: &Row<R>, r3: &Row<R>) -> Row<R> {
    std::array::from_fn(|k| {
        let minor: Vec<Vec<R>> = [r1, r2, r3]
            .iter()
            .map(|r| (0..4).filter(|&c| c != k).map(|c| r[c].clone()).collect())
            .collect();
        let d = det(&minor);
        if k % 2 == 0 {
            d
        } else {
            -d
        }
    })
}

pub fn dot<R: Ring>(u: &Row<R>, v: &Row<R>) -> R {
    let mut acc = u[0].clone() * v[0].clone();
    for k in 1..4 {
        acc = acc + u[k].clone() * v[k].clone();
    }
    acc
}

pub fn is_zero_row<R: Ring>(r: &Row<R>) -> bool {
    r.iter().all(Ring::is_zero)
}

/// Whether two vectors are proportional (including the zero vector).
pub fn proportional<R: Ring>(u: &Row<R>, v: &Row<R>) -> bool {
    for i in 0..4 {
        for j in (i + 1)..4 {
            let m = u[i].clone() * v[j].clone() - u[j].clone() * v[i].clone();
            if !m.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Rank over the fraction field, via the largest nonvanishing minor.
pub fn rank_by_minors<R: Ring>(rows: &[Row<R>]) -> usize {
    let r = rows.len();
    for k in (1..=r.min(4)).rev() {
        for rs in combinations(r, k) {
            for cs in combinations(4, k) {
                let m: Vec<Vec<R>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect())
                    .collect();
                if !det(&m).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref<F: Field>(rows: &mut [Vec<F>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        rows[r] = rows[r].iter().map(|x| x.clone() * inv.clone()).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let sub: Vec<F> = rows[r].iter().map(|x| x.clone() * f.clone()).collect();
                rows[i] = rows[i]
                    .iter()
                    .zip(sub)
                    .map(|(x, y)| x.clone() - y)
                    .collect();
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank<F: Field>(rows: &[Row<F>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<F>> = rows.iter().map(|r| r.to_vec()).collect();
    rref(&mut m).len()
}

/// A basis of `{v : r . v = 0 for every row r}`.
pub fn null_space<F: Field>(rows: &[Row<F>], template: &F) -> Vec<Row<F>> {
    let mut m: Vec<Vec<F>> = rows.iter().map(|r| r.to_vec()).collect();
    let pivots = if m.is_empty() {
        Vec::new()
    } else {
        rref(&mut m)
    };
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v: Row<F> = std::array::from_fn(|_| template.zero_like());
            v[fc] = template.one_like();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][fc].clone();
            }
            v
        })
        .collect()
}

pub fn mat_mul<F: Field>(a: &Mat4<F>, b: &Mat4<F>) -> Mat4<F> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = a[i][0].clone() * b[0][j].clone();
            for k in 1..4 {
                acc = acc + a[i][k].clone() * b[k][j].clone();
            }
            acc
        })
    })
}

/// Row vector times matrix.
pub fn row_mul<R: Ring>(v: &Row<R>, m: &Mat4<R>) -> Row<R> {
    std::array::from_fn(|j| {
        let mut acc = v[0].clone() * m[0][j].clone();
        for k in 1..4 {
            acc = acc + v[k].clone() * m[k][j].clone();
        }
        acc
    })
}

pub fn inverse<F: Field>(m: &Mat4<F>) -> Option<Mat4<F>> {
    let t = &m[0][0];
    let mut aug: Vec<Vec<F>> = (0..4)
        .map(|i| {
            let mut r = m[i].to_vec();
            r.extend((0..4).map(|j| if i == j { t.one_like() } else { t.zero_like() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < 4 || piv[3] != 3 {
        return None;
    }
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| aug[i][4 + j].clone())
    }))
}

/// Coordinates `x` with `x * basis = v` for a basis of four rows.
pub fn coords_in_basis<F: Field>(v: &Row<F>, basis: &Mat4<F>) -> Option<Row<F>> {
    let inv = inverse(basis)?;
    Some(row_mul(v, &inv))
}
