use std::collections::BTreeSet;

use super::matrix::{mul, sub, Matrix, Overflow, Ring};

/// Invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    /// Nonzero diagonal entries `d₁ | d₂ | …`, all positive.
    pub diagonal: Vec<T>,
}

impl<T> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Unimodular `u`, `v` and diagonal `d` with `u · m · v = d`.
#[derive(Clone)]
pub struct SmithTransforms<T> {
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub d: Matrix<T>,
}

/// Smith normal form by dense elimination.
pub fn smith_normal_form<T: Ring>(m: &Matrix<T>) -> Result<SmithForm<T>, Overflow> {
    let mut a = m.clone();
    dense(&mut a, None)
}

/// Smith normal form together with the transforms that produce it.
pub fn smith_with_transforms<T: Ring>(m: &Matrix<T>) -> Result<(SmithForm<T>, SmithTransforms<T>), Overflow> {
    let mut a = m.clone();
    let mut u = Matrix::identity(m.rows());
    let mut v = Matrix::identity(m.cols());
    let form = dense(&mut a, Some((&mut u, &mut v)))?;
    Ok((form, SmithTransforms { u, v, d: a }))
}

/// Position of the nonzero entry of least absolute value in the lower-right
/// block starting at `k`; ties go to the lowest row, then lowest column.
fn min_pivot<T: Ring>(a: &Matrix<T>, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let one = ax.is_one();
                best = Some((i, j, ax));
                if one {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn dense<T: Ring>(a: &mut Matrix<T>, mut track: Option<(&mut Matrix<T>, &mut Matrix<T>)>) -> Result<SmithForm<T>, Overflow> {
    let (m, n) = (a.rows(), a.cols());
    let mut diagonal = Vec::new();
    for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = min_pivot(a, k) else {
                return Ok(SmithForm { diagonal });
            };
            a.swap_rows(k, pi);
            a.swap_cols(k, pj);
            if let Some((u, v)) = track.as_mut() {
                u.swap_rows(k, pi);
                v.swap_cols(k, pj);
            }
            let p = a[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..m {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let q = a[(i, k)].div_floor(&p);
                a.row_axpy(i, k, &q)?;
                if let Some((u, _)) = track.as_mut() {
                    u.row_axpy(i, k, &q)?;
                }
                clean &= a[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let q = a[(k, j)].div_floor(&p);
                a.col_axpy(j, k, &q)?;
                if let Some((_, v)) = track.as_mut() {
                    v.col_axpy(j, k, &q)?;
                }
                clean &= a[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole remaining block
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -T::one();
                    a.row_axpy(k, i, &minus_one)?;
                    if let Some((u, _)) = track.as_mut() {
                        u.row_axpy(k, i, &minus_one)?;
                    }
                }
                None => break,
            }
        }
        if a[(k, k)].is_negative() {
            a.negate_row(k);
            if let Some((u, _)) = track.as_mut() {
                u.negate_row(k);
            }
        }
        diagonal.push(a[(k, k)].clone());
    }
    Ok(SmithForm { diagonal })
}

/// Sparse row: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow<T> = Vec<(usize, T)>;

/// Smith normal form of a sparse matrix. Unit entries are eliminated first
/// (each contributes an invariant factor 1), choosing short rows and sparse
/// columns to limit fill-in; whatever remains is handed to the dense
/// routine.
pub fn smith_sparse<T: Ring>(rows: Vec<SparseRow<T>>, ncols: usize) -> Result<SmithForm<T>, Overflow> {
    let mut rows: Vec<Option<SparseRow<T>>> = rows.into_iter().map(|r| if r.is_empty() { None } else { Some(r) }).collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
    for (i, r) in rows.iter().enumerate() {
        if let Some(r) = r {
            for (j, _) in r {
                col_rows[*j].insert(i);
            }
        }
    }
    let mut units = 0usize;
    loop {
        let mut order: Vec<(usize, usize)> = rows.iter().enumerate().filter_map(|(i, r)| r.as_ref().map(|r| (r.len(), i))).collect();
        order.sort_unstable();
        let mut changed = false;
        for (_, r) in order {
            let Some(row) = rows[r].as_ref() else { continue };
            let pick = row
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .map(|(j, _)| (col_rows[*j].len(), *j))
                .min();
            let Some((_, c)) = pick else { continue };
            pivot(&mut rows, &mut col_rows, r, c)?;
            units += 1;
            changed = true;
        }
        if !changed {
            break;
        }
    }

    // what survives usually splits into many small blocks; solve each densely
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].is_some()).collect();
    let mut diagonal = vec![T::one(); units];
    let mut tail = Vec::new();
    let mut row_seen = vec![false; rows.len()];
    let mut col_pos = vec![usize::MAX; ncols];
    for &start in &live_rows {
        if row_seen[start] {
            continue;
        }
        row_seen[start] = true;
        let (mut block_rows, mut block_cols) = (vec![start], Vec::new());
        let mut k = 0;
        while k < block_rows.len() {
            for (j, _) in rows[block_rows[k]].as_ref().unwrap() {
                if col_pos[*j] != usize::MAX {
                    continue;
                }
                col_pos[*j] = block_cols.len();
                block_cols.push(*j);
                for &i in &col_rows[*j] {
                    if !row_seen[i] {
                        row_seen[i] = true;
                        block_rows.push(i);
                    }
                }
            }
            k += 1;
        }
        let mut block = Matrix::zeros(block_rows.len(), block_cols.len());
        for (k, &i) in block_rows.iter().enumerate() {
            for (j, v) in rows[i].as_ref().unwrap() {
                block[(k, col_pos[*j])] = v.clone();
            }
        }
        for d in dense(&mut block, None)?.diagonal {
            if d.is_one() {
                diagonal.push(d);
            } else {
                tail.push(d);
            }
        }
    }
    diagonal.extend(divisibility_chain(tail)?);
    Ok(SmithForm { diagonal })
}

/// Invariant factors of a diagonal matrix: repeated gcd/lcm exchange until
/// each entry divides the next.
fn divisibility_chain<T: Ring>(mut d: Vec<T>) -> Result<Vec<T>, Overflow> {
    d.sort_unstable();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            if d[j].is_multiple_of(&d[i]) {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = mul(&d[i].div_floor(&g), &d[j])?;
            d[i] = g;
            d[j] = l;
        }
    }
    Ok(d)
}

fn pivot<T: Ring>(rows: &mut [Option<SparseRow<T>>], col_rows: &mut [BTreeSet<usize>], r: usize, c: usize) -> Result<(), Overflow> {
    let prow = rows[r].take().unwrap();
    for (j, _) in &prow {
        col_rows[*j].remove(&r);
    }
    let u = prow.iter().find(|(j, _)| *j == c).unwrap().1.clone();
    let others: Vec<usize> = col_rows[c].iter().copied().collect();
    for i in others {
        let row = rows[i].take().unwrap();
        let a_ic = row.iter().find(|(j, _)| *j == c).unwrap().1.clone();
        let factor = mul(&a_ic, &u)?;
        let merged = axpy(&row, &prow, &factor)?;
        for (j, _) in &row {
            col_rows[*j].remove(&i);
        }
        for (j, _) in &merged {
            col_rows[*j].insert(i);
        }
        rows[i] = if merged.is_empty() { None } else { Some(merged) };
    }
    Ok(())
}

/// `a − f·b` on sorted sparse rows.
fn axpy<T: Ring>(a: &SparseRow<T>, b: &SparseRow<T>, f: &T) -> Result<SparseRow<T>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = -mul(f, &b[j].1)?;
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = sub(&a[i].1, &mul(f, &b[j].1)?)?;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}
