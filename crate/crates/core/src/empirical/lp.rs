//! Exact linear feasibility over the rationals.
//!
//! `A w = b, w >= 0` is decided with a phase-one simplex under Bland's rule,
//! which cannot cycle. Infeasibility comes with a Farkas vector `z` such that
//! `zᵀA >= 0` and `zᵀb < 0`. Unconstrained systems use reduced row echelon
//! form and report a row combination `y` with `yᵀA = 0`, `yᵀb != 0`.

use num::{BigRational, One, Signed, Zero};

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Q>),
    /// Farkas vector, one entry per row.
    Infeasible(Vec<Q>),
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Decides `A w = b, w >= 0`.
pub fn nonnegative_feasibility(a: &[Vec<Q>], b: &[Q]) -> Feasibility {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Flip rows so the right-hand side is non-negative; remember the signs
    // to map the certificate back.
    let sign: Vec<Q> = b.iter().map(|v| if v.is_negative() { q(-1) } else { q(1) }).collect();
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            row.extend(a[i].iter().map(|v| v * &sign[i]));
            row.extend((0..m).map(|k| if k == i { q(1) } else { q(0) }));
            row.push(&b[i] * &sign[i]);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs for minimizing the sum of artificials.
    let mut cost: Vec<Q> = vec![q(0); width];
    for row in &t {
        for (j, v) in row.iter().enumerate() {
            if j < n || j == width - 1 {
                cost[j] -= v;
            }
        }
    }
    loop {
        let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // Unbounded direction cannot occur for a phase-one objective
            // bounded below by zero.
            unreachable!("phase one is bounded")
        };
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
    }
    let objective = -cost[width - 1].clone();
    if objective.is_zero() {
        let mut w = vec![q(0); n];
        for (i, &j) in basis.iter().enumerate() {
            if j < n {
                w[j] = t[i][width - 1].clone();
            }
        }
        Feasibility::Feasible(w)
    } else {
        // y_i = 1 - reduced cost of artificial i satisfies Aᵀy <= 0 and
        // bᵀy > 0 on the flipped system; negate and unflip.
        let z = (0..m).map(|i| -(q(1) - &cost[n + i]) * &sign[i]).collect();
        Feasibility::Infeasible(z)
    }
}

fn pivot(t: &mut [Vec<Q>], cost: &mut [Q], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

/// Checks a Farkas vector against the system it certifies.
pub fn verify_farkas(a: &[Vec<Q>], b: &[Q], z: &[Q]) -> bool {
    let n = a.first().map_or(0, Vec::len);
    let zb: Q = z.iter().zip(b).map(|(x, y)| x * y).sum();
    zb.is_negative() && (0..n).all(|j| !z.iter().zip(a).map(|(x, row)| x * &row[j]).sum::<Q>().is_negative())
}

/// Solves `A w = b` with no sign constraint. On failure returns `y` with
/// `yᵀA = 0` and `yᵀb = 1`.
pub fn free_solution(a: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>, Vec<Q>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // Augment with the identity to track row combinations.
    let mut t: Vec<Vec<Q>> = (0..m)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            row.extend((0..m).map(|k| if k == i { q(1) } else { q(0) }));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !t[i][c].is_zero()) else { continue };
        t.swap(r, p);
        let pv = t[r][c].clone();
        for v in t[r].iter_mut() {
            *v /= &pv;
        }
        let pr = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, x) in row.iter_mut().zip(&pr) {
                    *v -= &f * x;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    for row in &t[r..] {
        if !row[n].is_zero() {
            let scale = row[n].clone();
            return Err(row[n + 1..].iter().map(|v| v / &scale).collect());
        }
    }
    let mut w = vec![q(0); n];
    for (i, &c) in pivots.iter().enumerate() {
        w[c] = t[i][n].clone();
    }
    Ok(w)
}

/// Rank of a matrix.
pub fn rank(a: &[Vec<Q>]) -> usize {
    let mut t: Vec<Vec<Q>> = a.to_vec();
    let m = t.len();
    let n = t.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !t[i][c].is_zero()) else { continue };
        t.swap(r, p);
        for i in r + 1..m {
            if !t[i][c].is_zero() {
                let f = &t[i][c] / &t[r][c];
                let pr = t[r].clone();
                for (v, x) in t[i].iter_mut().zip(&pr) {
                    *v -= &f * x;
                }
            }
        }
        r += 1;
    }
    r
}

/// Decides `A w = b, w >= 0` by trying every basis: a feasible system has a
/// basic feasible solution supported on `rank(A)` independent columns.
/// Exponential; returns `None` when there are more than `limit` columns.
pub fn vertex_enumeration(a: &[Vec<Q>], b: &[Q], limit: usize) -> Option<Option<Vec<Q>>> {
    let n = a.first().map_or(0, Vec::len);
    if n > limit {
        return None;
    }
    let r = rank(a);
    let mut chosen: Vec<usize> = (0..r).collect();
    loop {
        // Any nonnegative solution on the chosen columns is a witness; basic
        // solutions are all reached since every basis is some r-subset.
        let sub: Vec<Vec<Q>> = a.iter().map(|row| chosen.iter().map(|&j| row[j].clone()).collect()).collect();
        if let Ok(x) = free_solution(&sub, b) {
            if x.iter().all(|v| !v.is_negative()) {
                let mut w = vec![Q::zero(); n];
                for (k, &j) in chosen.iter().enumerate() {
                    w[j] = x[k].clone();
                }
                return Some(Some(w));
            }
        }
        // Next r-combination in lexicographic order.
        let Some(k) = (0..r).rev().find(|&k| chosen[k] < n - r + k) else { return Some(None) };
        chosen[k] += 1;
        for j in k + 1..r {
            chosen[j] = chosen[j - 1] + 1;
        }
        if r == 0 {
            return Some(None);
        }
    }
}

pub fn one() -> Q {
    Q::one()
}
