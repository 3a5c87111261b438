//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub fn gcd(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Cofactor expansion along the first row.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `D_k = gcd` of the `k×k` minors, for `k = 1..=min(rows, cols)`.
pub fn determinantal_divisors(m: &[Vec<i128>]) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> =
                    rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        out.push(g);
    }
    out
}

/// Smith diagonal from determinantal divisors: `d_k = D_k / D_{k-1}`,
/// zero once `D_k` vanishes.
pub fn diagonal_from_divisors(m: &[Vec<i128>]) -> Vec<i128> {
    let ds = determinantal_divisors(m);
    let mut prev = 1;
    ds.iter()
        .map(|&d| {
            if d == 0 {
                0
            } else {
                let q = d / prev;
                prev = d;
                q
            }
        })
        .collect()
}

/// Textbook reduction without transforms: repeatedly move the smallest
/// nonzero entry of the trailing block to the pivot and reduce its row and
/// column, then turn the diagonal into a divisor chain by gcd/lcm swaps.
pub fn naive_smith_diagonal(m: &[Vec<i128>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let n = rows.min(cols);
    for k in 0..n {
        loop {
            let best = (k..rows)
                .flat_map(|i| (k..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((i, j)) = best else { break };
            a.swap(k, i);
            for row in a.iter_mut() {
                row.swap(k, j);
            }
            let p = a[k][k];
            for i in k + 1..rows {
                let f = a[i][k] / p;
                for j in 0..cols {
                    a[i][j] -= f * a[k][j];
                }
            }
            for j in k + 1..cols {
                let f = a[k][j] / p;
                for row in a.iter_mut() {
                    row[j] -= f * row[k];
                }
            }
            let clear = (k + 1..rows).all(|i| a[i][k] == 0) && (k + 1..cols).all(|j| a[k][j] == 0);
            if clear {
                break;
            }
        }
    }
    let mut diag: Vec<i128> = (0..n).map(|k| a[k][k].abs()).collect();
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (diag[i], diag[j]);
            let g = gcd(x, y);
            diag[i] = g;
            diag[j] = if g == 0 { 0 } else { (x / g * y).abs() };
        }
    }
    diag
}

pub fn m_rows(a: i128, b: i128, c: i128) -> Vec<Vec<i128>> {
    vec![vec![a, -b, 0], vec![0, b, -c], vec![-a, 0, c]]
}

pub fn is_prime_naive(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Every primitive `(x, y, z)` in the box `[-bound, bound]³` with
/// `A x^a + B y^b + C z^c = 0`, sorted.
pub fn brute_force_solutions(coeffs: [i64; 3], exps: [u32; 3], bound: i64) -> Vec<[i64; 3]> {
    let term = |c: i64, v: i64, e: u32| BigInt::from(c) * BigInt::from(v).pow(e);
    let mut out = Vec::new();
    for x in -bound..=bound {
        let tx = term(coeffs[0], x, exps[0]);
        for y in -bound..=bound {
            let txy = &tx + term(coeffs[1], y, exps[1]);
            for z in -bound..=bound {
                if x.gcd(&y).gcd(&z) != 1 {
                    continue;
                }
                if (&txy + term(coeffs[2], z, exps[2])).is_zero() {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out.sort();
    out
}

pub type Q = Ratio<BigInt>;

/// Affine point of `v² = u³ - d u`; `None` is the point at infinity.
pub type Pt = Option<(Q, Q)>;

pub fn q(n: i64) -> Q {
    Ratio::from_integer(BigInt::from(n))
}

pub fn curve_add(d: i64, p: &Pt, r: &Pt) -> Pt {
    let (Some((x1, y1)), Some((x2, y2))) = (p, r) else {
        return p.clone().or_else(|| r.clone());
    };
    let lambda = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return None;
        }
        (q(3) * x1 * x1 - q(d)) / (q(2) * y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &lambda * &lambda - x1 - x2;
    let y3 = lambda * (x1 - &x3) - y1;
    Some((x3, y3))
}

/// Order of `p` if it is at most 12, found by repeated addition.
pub fn small_order(d: i64, p: &Pt) -> Option<u32> {
    let mut acc = p.clone();
    for k in 1..=12 {
        if acc.is_none() {
            return Some(k);
        }
        acc = curve_add(d, &acc, p);
    }
    None
}

/// Rational points `(p/r, v)` with `|p| <= num`, `r <= den` on
/// `v² = u³ - d u`, plus infinity.
pub fn small_height_points(d: i64, num: i64, den: i64) -> Vec<Pt> {
    let mut out: Vec<Pt> = vec![None];
    for r in 1..=den {
        for p in -num..=num {
            if p.gcd(&r) != 1 {
                continue;
            }
            let u = Ratio::new(BigInt::from(p), BigInt::from(r));
            let rhs = &u * &u * &u - q(d) * &u;
            if rhs.is_negative() {
                continue;
            }
            let (n, m) = (rhs.numer().clone(), rhs.denom().clone());
            let (sn, sm) = (n.sqrt(), m.sqrt());
            if &sn * &sn == n && &sm * &sm == m {
                let v = Ratio::new(sn, sm);
                if !v.is_zero() {
                    out.push(Some((u.clone(), -v.clone())));
                }
                out.push(Some((u, v)));
            }
        }
    }
    out
}

pub fn torsion_by_search(d: i64, num: i64, den: i64) -> Vec<Pt> {
    small_height_points(d, num, den)
        .into_iter()
        .filter(|p| small_order(d, p).is_some())
        .collect()
}
