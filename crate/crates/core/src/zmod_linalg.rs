//! Linear algebra over `Z/p^k`.
//!
//! Two independent kernel routines live here: plain Gauss-Jordan
//! elimination over `F_p`, and a Smith-form diagonalisation over the local
//! ring `Z/p^k` (every element is a unit times a power of `p`, so choosing
//! the pivot of least valuation never needs division by a non-unit).

use crate::error::{Error, Result};
use crate::residue::{checked_pow, is_prime, mod_pow};

/// Largest modulus handled here; keeps products inside `u64`.
const MAX_MODULUS: u64 = 1 << 31;

fn valuation_of(mut x: u64, p: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut e = 0;
    while x.is_multiple_of(p) {
        x /= p;
        e += 1;
    }
    e
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = crate::residue::ext_gcd(a as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

/// Null-space basis over `F_p` of the matrix whose rows are `rows`.
pub fn kernel_fp(rows: &[Vec<u64>], ncols: usize, p: u64) -> Result<Vec<Vec<u64>>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % p).collect())
        .collect();
    let pivots = rref_in_place(&mut m, ncols, p);
    let mut basis = Vec::new();
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; ncols];
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = Some(row);
        }
        v
    };
    for free in 0..ncols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut vec = vec![0u64; ncols];
        vec[free] = 1;
        for (row, &c) in pivots.iter().enumerate() {
            vec[c] = (p - m[row][free]) % p;
        }
        basis.push(vec);
    }
    Ok(basis)
}

/// Reduced row echelon form over `F_p`; returns the pivot columns.
fn rref_in_place(m: &mut Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(sel) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, sel);
        let inv = inverse_mod(m[row][col], p).expect("nonzero element of F_p is a unit");
        for x in m[row].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && line[col] != 0 {
                let f = line[col];
                for (x, &y) in line.iter_mut().zip(&pivot).take(ncols) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    pivots
}

/// Rank over `F_p`.
pub fn rank_fp(rows: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x % p).collect())
        .collect();
    rref_in_place(&mut m, ncols, p).len()
}

/// Whether two families span the same subspace of `F_p^n`.
pub fn same_span_fp(a: &[Vec<u64>], b: &[Vec<u64>], ncols: usize, p: u64) -> bool {
    let ra = rank_fp(a, ncols, p);
    let rb = rank_fp(b, ncols, p);
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    ra == rb && rank_fp(&both, ncols, p) == ra
}

/// Whether `v` lies in the `F_p`-span of `basis`.
pub fn in_span_fp(basis: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let n = v.len();
    let r = rank_fp(basis, n, p);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    rank_fp(&ext, n, p) == r
}

/// Diagonal form `U R V = D` over `Z/p^k`. Only `V` is kept: it is all the
/// kernel computation needs.
#[derive(Debug, Clone)]
pub struct LocalSmith {
    pub p: u64,
    pub k: u32,
    /// `p`-adic valuation of each diagonal entry, one per column of `R`;
    /// `k` marks a zero entry (including columns past the rank).
    pub valuations: Vec<u32>,
    /// Column transform, stored column-major: `v[j]` is column `j`.
    pub v: Vec<Vec<u64>>,
}

/// Diagonalise `rows` (entries mod `p^k`) by unimodular row and column
/// operations.
pub fn local_smith(rows: &[Vec<u64>], ncols: usize, p: u64, k: u32) -> Result<LocalSmith> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = checked_pow(p, k)?;
    if q > MAX_MODULUS {
        return Err(Error::LimitExceeded {
            what: "modulus p^k",
            size: q as u128,
            limit: MAX_MODULUS as u128,
        });
    }
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "row length mismatch");
            r.iter().map(|&x| x % q).collect()
        })
        .filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0))
        .collect();
    // identity, column-major
    let mut v: Vec<Vec<u64>> = (0..ncols)
        .map(|j| {
            let mut c = vec![0u64; ncols];
            c[j] = 1;
            c
        })
        .collect();
    let mut valuations = vec![k; ncols];
    let nrows = a.len();
    for t in 0..ncols.min(nrows) {
        // pivot of least valuation in the remaining block
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for (r, row) in a.iter().enumerate().skip(t) {
            for (c, &x) in row.iter().enumerate().skip(t) {
                if x == 0 {
                    continue;
                }
                let e = valuation_of(x, p, k);
                if best.is_none_or(|(be, _, _)| e < be) {
                    best = Some((e, r, c));
                    if e == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((e, pr, pc)) = best else {
            break;
        };
        a.swap(t, pr);
        if pc != t {
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
            v.swap(t, pc);
        }
        let pivot = a[t][t];
        let pe = p.pow(e);
        let unit_inv = inverse_mod(pivot / pe, q).expect("unit part is invertible");
        // clear column t with row operations
        for r in 0..nrows {
            if r == t || a[r][t] == 0 {
                continue;
            }
            let f = (a[r][t] / pe) % q * unit_inv % q;
            let (head, tail) = if r < t {
                let (h, tl) = a.split_at_mut(t);
                (&mut h[r], &tl[0])
            } else {
                let (h, tl) = a.split_at_mut(r);
                (&mut tl[0], &h[t])
            };
            for c in t..ncols {
                head[c] = (head[c] + q - f * tail[c] % q) % q;
            }
        }
        // clear row t with column operations, mirrored on V
        for c in (t + 1)..ncols {
            let x = a[t][c];
            if x == 0 {
                continue;
            }
            let f = (x / pe) % q * unit_inv % q;
            for row in a.iter_mut() {
                row[c] = (row[c] + q - f * row[t] % q) % q;
            }
            let (left, right) = v.split_at_mut(c);
            let vt = &left[t];
            for (dst, &src) in right[0].iter_mut().zip(vt.iter()) {
                *dst = (*dst + q - f * src % q) % q;
            }
        }
        valuations[t] = e;
    }
    Ok(LocalSmith {
        p,
        k,
        valuations,
        v,
    })
}

/// A generator of a finite `Z/p^k`-module together with its order `p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub vector: Vec<u64>,
    pub order_exponent: u32,
}

/// Kernel of `rows` over `Z/p^k`, as a direct sum of cyclic pieces.
#[derive(Debug, Clone)]
pub struct ModuleKernel {
    pub p: u64,
    pub k: u32,
    /// Length of the vectors.
    pub ncols: usize,
    pub generators: Vec<Generator>,
}

impl ModuleKernel {
    /// `log_p` of the number of kernel elements.
    pub fn size_exponent(&self) -> u32 {
        self.generators.iter().map(|g| g.order_exponent).sum()
    }

    pub fn size(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.size_exponent())
    }

    /// Every element of the kernel; `None` if there are more than `limit`.
    pub fn enumerate(&self, limit: u128) -> Option<Vec<Vec<u64>>> {
        let size = self.size()?;
        if size > limit {
            return None;
        }
        let q = self.p.pow(self.k);
        let mut out = vec![vec![0u64; self.ncols]];
        for g in &self.generators {
            let order = self.p.pow(g.order_exponent);
            let mut next = Vec::with_capacity(out.len() * order as usize);
            for base in &out {
                for c in 0..order {
                    next.push(
                        base.iter()
                            .zip(&g.vector)
                            .map(|(&b, &x)| (b + c * x) % q)
                            .collect(),
                    );
                }
            }
            out = next;
        }
        out.sort();
        Some(out)
    }
}

/// Kernel of `rows` over `Z/p^k` via [`local_smith`].
pub fn kernel_zpk(rows: &[Vec<u64>], ncols: usize, p: u64, k: u32) -> Result<ModuleKernel> {
    let s = local_smith(rows, ncols, p, k)?;
    let q = p.pow(k);
    let mut generators = Vec::new();
    for (j, &e) in s.valuations.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let scale = mod_pow(p, (k - e) as u64, q);
        let vector: Vec<u64> = s.v[j].iter().map(|&x| x * scale % q).collect();
        generators.push(Generator {
            vector,
            order_exponent: e,
        });
    }
    Ok(ModuleKernel {
        p,
        k,
        ncols,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(rows: &[Vec<u64>], x: &[u64], q: u64) -> Vec<u64> {
        rows.iter()
            .map(|r| r.iter().zip(x).map(|(&a, &b)| a * b % q).sum::<u64>() % q)
            .collect()
    }

    #[test]
    fn fp_kernel_of_small_matrix() {
        // x + y + z = 0 and x - y = 0 over F_5 => kernel spanned by (1,1,3)
        let rows = vec![vec![1, 1, 1], vec![1, 4, 0]];
        let k = kernel_fp(&rows, 3, 5).unwrap();
        assert_eq!(k, vec![vec![2, 2, 1]]);
    }

    #[test]
    fn local_smith_kernel_counts() {
        // 3x = 0 over Z/9: kernel {0,3,6}
        let k = kernel_zpk(&[vec![3]], 1, 3, 2).unwrap();
        assert_eq!(k.size(), Some(3));
        assert_eq!(k.enumerate(100).unwrap(), vec![vec![0], vec![3], vec![6]]);
        // no relations: everything
        let k = kernel_zpk(&[], 2, 3, 2).unwrap();
        assert_eq!(k.size(), Some(81));
    }

    #[test]
    fn kernel_matches_brute_force_mod_9() {
        let rows = vec![vec![3, 6, 0], vec![1, 2, 3], vec![0, 3, 3]];
        let q = 9;
        let k = kernel_zpk(&rows, 3, 3, 2).unwrap();
        let mut brute = Vec::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    let x = vec![a, b, c];
                    if apply(&rows, &x, q).iter().all(|&y| y == 0) {
                        brute.push(x);
                    }
                }
            }
        }
        brute.sort();
        assert_eq!(k.enumerate(10_000).unwrap(), brute);
    }

    #[test]
    fn both_routes_agree_mod_p() {
        let rows = vec![
            vec![1, 2, 3, 4, 0],
            vec![2, 4, 6, 8, 0],
            vec![0, 1, 0, 1, 1],
        ];
        let a = kernel_fp(&rows, 5, 7).unwrap();
        let b: Vec<Vec<u64>> = kernel_zpk(&rows, 5, 7, 1)
            .unwrap()
            .generators
            .into_iter()
            .map(|g| g.vector)
            .collect();
        assert!(same_span_fp(&a, &b, 5, 7));
        assert_eq!(a.len(), 3);
    }
}
