use num_integer::Integer;
use serde::Serialize;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is upper echelon with positive pivots and every entry above a
/// pivot reduced into `[0, pivot)`; zero rows are dropped, so it is the unique
/// canonical basis of the row lattice.
pub fn hermite_normal_form(rows: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut r = 0;
    for col in 0..k {
        if r == a.len() {
            break;
        }
        loop {
            let pivot = (r..a.len()).filter(|&i| a[i][col] != 0).min_by_key(|&i| (a[i][col].abs(), i));
            let Some(p) = pivot else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][col] != 0 {
                    let q = Integer::div_floor(&a[i][col], &a[r][col]);
                    sub_row(&mut a, i, r, q);
                    done &= a[i][col] == 0;
                }
            }
            if done {
                break;
            }
        }
        if r < a.len() && a[r][col] != 0 {
            if a[r][col] < 0 {
                a[r].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..r {
                let q = Integer::div_floor(&a[i][col], &a[r][col]);
                sub_row(&mut a, i, r, q);
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

fn sub_row(a: &mut [Vec<i64>], target: usize, source: usize, q: i64) {
    if q == 0 {
        return;
    }
    let src = a[source].clone();
    for (x, s) in a[target].iter_mut().zip(src) {
        *x -= q * s;
    }
}

/// Whether `v` lies in the row lattice of a Hermite basis.
pub fn hermite_contains(basis: &[Vec<i64>], v: &[i64]) -> bool {
    let mut t = v.to_vec();
    for row in basis {
        let col = row.iter().position(|&x| x != 0).expect("hermite rows are nonzero");
        let (q, rem) = t[col].div_rem(&row[col]);
        if rem != 0 {
            return false;
        }
        for (x, s) in t.iter_mut().zip(row) {
            *x -= q * s;
        }
    }
    t.iter().all(|&x| x == 0)
}

/// Smith data for a full-row-rank `r x k` matrix `b`: invariant factors
/// `d_0 | d_1 | ...` and a unimodular `v` (with inverse) such that
/// `U b v = diag(d)` for some unimodular `U`. The row lattice of `b` then has
/// basis `d_i * row_i(v_inv)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithData {
    pub invariants: Vec<i64>,
    pub v: Vec<Vec<i64>>,
    pub v_inv: Vec<Vec<i64>>,
}

pub fn smith(b: &[Vec<i64>], k: usize) -> SmithData {
    let r = b.len();
    let mut a: Vec<Vec<i64>> = b.to_vec();
    let mut v = identity(k);
    let mut v_inv = identity(k);
    for t in 0..r.min(k) {
        loop {
            let pivot = (t..r)
                .flat_map(|i| (t..k).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| (a[i][j].abs(), i, j));
            let Some((pi, pj)) = pivot else { break };
            a.swap(t, pi);
            swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
            let p = a[t][t];
            for i in t + 1..r {
                let q = a[i][t] / p;
                sub_row(&mut a, i, t, q);
            }
            for j in t + 1..k {
                let q = a[t][j] / p;
                col_sub(&mut a, &mut v, &mut v_inv, j, t, q);
            }
            let clean = (t + 1..r).all(|i| a[i][t] == 0) && (t + 1..k).all(|j| a[t][j] == 0);
            if !clean {
                continue;
            }
            let bad_row = (t + 1..r).find(|&i| (t + 1..k).any(|j| a[i][j] % p != 0));
            match bad_row {
                Some(i) => {
                    let src = a[i].clone();
                    a[t].iter_mut().zip(src).for_each(|(x, s)| *x += s);
                }
                None => break,
            }
        }
        if t < r && a[t][t] < 0 {
            a[t].iter_mut().for_each(|x| *x = -*x);
        }
    }
    let invariants = (0..r.min(k)).map(|i| a[i][i]).filter(|&d| d != 0).collect();
    SmithData { invariants, v, v_inv }
}

fn identity(k: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect()
}

fn swap_cols(a: &mut [Vec<i64>], v: &mut [Vec<i64>], v_inv: &mut [Vec<i64>], x: usize, y: usize) {
    if x == y {
        return;
    }
    for row in a.iter_mut().chain(v.iter_mut()) {
        row.swap(x, y);
    }
    v_inv.swap(x, y);
}

/// `col_j -= q col_t`, mirrored on `v` and (inversely) on `v_inv`.
fn col_sub(a: &mut [Vec<i64>], v: &mut [Vec<i64>], v_inv: &mut [Vec<i64>], j: usize, t: usize, q: i64) {
    if q == 0 {
        return;
    }
    for row in a.iter_mut().chain(v.iter_mut()) {
        row[j] -= q * row[t];
    }
    let src = v_inv[j].clone();
    for (x, s) in v_inv[t].iter_mut().zip(src) {
        *x += q * s;
    }
}

#[cfg(test)]
fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
        .collect()
}

pub(crate) fn vec_mat(v: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.first().map_or(0, Vec::len);
    (0..n).map(|j| v.iter().zip(m).map(|(x, row)| x * row[j]).sum()).collect()
}
