//! Linear systems over `Z/m`.

use num_integer::Integer;

/// Finds one solution `u` of `M u = b (mod m)`, or `None` when the system is
/// inconsistent.
///
/// The matrix is diagonalized with unimodular row and column operations
/// carried out on representatives in `[0, m)`; column operations are
/// accumulated so the diagonal solution can be mapped back.
pub fn solve_mod(matrix: &[Vec<u64>], rhs: &[u64], m: u64) -> Option<Vec<u64>> {
    assert!(m >= 1);
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    if m == 1 {
        return Some(vec![0; cols]);
    }
    let mut a: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
    let mut b: Vec<u64> = rhs.iter().map(|&x| x % m).collect();
    let mut v: Vec<Vec<u64>> =
        (0..cols).map(|i| (0..cols).map(|j| u64::from(i == j)).collect()).collect();

    let sub_mul = |x: u64, q: u64, y: u64| -> u64 {
        let p = (q as u128 * y as u128 % m as u128) as u64;
        (x + m - p) % m
    };

    let diag = rows.min(cols);
    for t in 0..diag {
        loop {
            // Smallest nonzero representative in the remaining block.
            let mut best: Option<(usize, usize, u64)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.map_or(true, |(_, _, bx)| x < bx) {
                        best = Some((i, j, x));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            a.swap(t, pi);
            b.swap(t, pi);
            if pj != t {
                a.iter_mut().for_each(|r| r.swap(t, pj));
                v.iter_mut().for_each(|r| r.swap(t, pj));
            }
            let pivot = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / pivot;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = sub_mul(a[i][j], q, a[t][j]);
                    }
                    b[i] = sub_mul(b[i], q, b[t]);
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / pivot;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] = sub_mul(row[j], q, row[t]);
                    }
                    for row in v.iter_mut() {
                        row[j] = sub_mul(row[j], q, row[t]);
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }

    // Diagonal system d_i y_i = b_i.
    let mut y = vec![0u64; cols];
    for i in 0..rows {
        let d = if i < cols { a[i][i] } else { 0 };
        let g = d.gcd(&m);
        if b[i] % g != 0 {
            return None;
        }
        if d == 0 {
            continue;
        }
        let modulus = m / g;
        let inv = mod_inverse((d / g) % modulus, modulus);
        y[i] = ((b[i] / g) as u128 * inv as u128 % modulus as u128) as u64;
    }
    let u = (0..cols)
        .map(|r| {
            let s: u128 = (0..cols).map(|c| v[r][c] as u128 * y[c] as u128 % m as u128).sum();
            (s % m as u128) as u64
        })
        .collect();
    Some(u)
}

/// Inverse of `a` modulo `m` (requires `gcd(a, m) = 1`); 0 when `m = 1`.
pub fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let eg = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(eg.gcd, 1);
    eg.x.rem_euclid(m as i128) as u64
}
