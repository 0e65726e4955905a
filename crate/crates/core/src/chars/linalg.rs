//! Dense linear algebra over a finite field given by its element codes.

use crate::coeff::FieldDesc;

pub type Matrix = Vec<Vec<u32>>;

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(k: &FieldDesc, mut rows: Matrix) -> (Matrix, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = k.inv_code(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = k.mul_codes(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    let t = k.mul_codes(f, rows[r][j]);
                    rows[i][j] = k.sub_codes(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(k: &FieldDesc, rows: Matrix) -> usize {
    rref(k, rows).1.len()
}

/// Basis of `{x : A x = 0}`.
pub fn nullspace(k: &FieldDesc, a: Matrix, ncols: usize) -> Matrix {
    let (r, pivots) = rref(k, a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u32; ncols];
            v[f] = 1;
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = k.neg_code(row[f]);
            }
            v
        })
        .collect()
}

pub fn mat_mul(k: &FieldDesc, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = vec![vec![0u32; m]; n];
    for i in 0..n {
        for l in 0..inner {
            let x = a[i][l];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = k.add_codes(out[i][j], k.mul_codes(x, b[l][j]));
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as u32).collect())
        .collect()
}

/// `h(A)` for a polynomial `h` given low-to-high.
pub fn eval_poly(k: &FieldDesc, h: &[u32], a: &Matrix) -> Matrix {
    let n = a.len();
    let mut acc = vec![vec![0u32; n]; n];
    for &c in h.iter().rev() {
        acc = mat_mul(k, &acc, a);
        for i in 0..n {
            acc[i][i] = k.add_codes(acc[i][i], c);
        }
    }
    acc
}

/// Characteristic polynomial `det(x I - A)`, monic, low-to-high, via
/// reduction to Hessenberg form.
pub fn charpoly(k: &FieldDesc, a: &Matrix) -> Vec<u32> {
    let n = a.len();
    let mut h = a.clone();
    for c in 0..n.saturating_sub(2) {
        let Some(r) = (c + 1..n).find(|&i| h[i][c] != 0) else {
            continue;
        };
        if r != c + 1 {
            h.swap(r, c + 1);
            for row in h.iter_mut() {
                row.swap(r, c + 1);
            }
        }
        let inv = k.inv_code(h[c + 1][c]).unwrap();
        for i in c + 2..n {
            let u = k.mul_codes(h[i][c], inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = k.mul_codes(u, h[c + 1][j]);
                h[i][j] = k.sub_codes(h[i][j], t);
            }
            for row in h.iter_mut() {
                let t = k.mul_codes(u, row[i]);
                row[c + 1] = k.add_codes(row[c + 1], t);
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}
    let mut ps: Vec<Vec<u32>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &ps[m - 1];
        let mut next = vec![0u32; m + 1];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = k.add_codes(next[d + 1], c);
            next[d] = k.sub_codes(next[d], k.mul_codes(h[m - 1][m - 1], c));
        }
        let mut prod = 1u32;
        for i in (1..m).rev() {
            prod = k.mul_codes(prod, h[i][i - 1]);
            let coef = k.mul_codes(h[i - 1][m - 1], prod);
            if coef == 0 {
                continue;
            }
            for (d, &c) in ps[i - 1].iter().enumerate() {
                next[d] = k.sub_codes(next[d], k.mul_codes(coef, c));
            }
        }
        ps.push(next);
    }
    ps.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ff_make;

    fn det_brute(k: &FieldDesc, a: &Matrix) -> u32 {
        // Leibniz formula
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = 0;
        fn heap(
            k: &FieldDesc,
            a: &Matrix,
            perm: &mut Vec<usize>,
            m: usize,
            sign: &mut bool,
            total: &mut u32,
        ) {
            if m == 1 {
                let mut t = 1;
                for (i, &j) in perm.iter().enumerate() {
                    t = k.mul_codes(t, a[i][j]);
                }
                *total = if *sign {
                    k.sub_codes(*total, t)
                } else {
                    k.add_codes(*total, t)
                };
                return;
            }
            for i in 0..m - 1 {
                heap(k, a, perm, m - 1, sign, total);
                if m.is_multiple_of(2) {
                    perm.swap(i, m - 1)
                } else {
                    perm.swap(0, m - 1)
                }
                *sign = !*sign;
            }
            heap(k, a, perm, m - 1, sign, total);
        }
        let mut sign = false;
        heap(k, a, &mut perm, n, &mut sign, &mut total);
        total
    }

    #[test]
    fn charpoly_constant_term_is_signed_determinant() {
        let k = ff_make(5, 1).unwrap();
        let mut seed = 7u64;
        for _ in 0..200 {
            let a: Matrix = (0..4)
                .map(|_| {
                    (0..4)
                        .map(|_| {
                            seed = seed
                                .wrapping_mul(6364136223846793005)
                                .wrapping_add(1442695040888963407);
                            ((seed >> 33) % 5) as u32
                        })
                        .collect()
                })
                .collect();
            let cp = charpoly(&k, &a);
            assert_eq!(cp.len(), 5);
            assert_eq!(cp[4], 1);
            // det(-A) = det(A) for n = 4
            assert_eq!(cp[0], det_brute(&k, &a));
            // Cayley-Hamilton
            let z = eval_poly(&k, &cp, &a);
            assert!(z.iter().flatten().all(|&x| x == 0));
        }
    }

    #[test]
    fn nullspace_dimension() {
        let k = ff_make(2, 1).unwrap();
        let a = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let ns = nullspace(&k, a.clone(), 3);
        assert_eq!(ns, vec![vec![1, 1, 1]]);
        assert_eq!(rank(&k, a), 2);
    }
}
