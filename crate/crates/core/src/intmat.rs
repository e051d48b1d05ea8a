//! Smith normal form over `Z` and finitely presented abelian groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Convert a small integer matrix.
pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    (0..inner).fold(BigInt::zero(), |acc, k| {
                        if row[k].is_zero() {
                            acc
                        } else {
                            acc + &row[k] * &b[k][c]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `U R V = D` with `U`, `V` unimodular and `d_1 | d_2 | ...` on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rows: usize,
    pub cols: usize,
}

impl Snf {
    /// Diagonal entries (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.d[i][i].clone()).collect()
    }
}

fn row_op(m: &mut IntMatrix, target: usize, src: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (t, s) in m[target].iter_mut().zip(src_row) {
        *t -= factor * s;
    }
}

fn col_op(m: &mut IntMatrix, target: usize, src: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[target] -= factor * s;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form; reconstruction and unimodularity are verified.
pub fn smith_normal_form(r: &IntMatrix, ncols: usize) -> Result<Snf> {
    let rows = r.len();
    if r.iter().any(|row| row.len() != ncols) {
        return Err(Error::InvalidParameter("ragged relation matrix".into()));
    }
    let mut d = r.clone();
    let mut u = identity(rows);
    let mut v = identity(ncols);
    for t in 0..rows.min(ncols) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let pick = |d: &IntMatrix| {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = pick(&d) else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_op(&mut d, i, t, &q);
                row_op(&mut u, i, t, &q);
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_op(&mut d, j, t, &q);
                col_op(&mut v, j, t, &q);
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // enforce divisibility of the rest of the block
                let bad = (t + 1..rows)
                    .find(|&i| (t + 1..ncols).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
                match bad {
                    None => break,
                    Some(i) => {
                        let one = BigInt::from(-1);
                        row_op(&mut d, t, i, &one);
                        row_op(&mut u, t, i, &one);
                    }
                }
            }
            // move the smallest entry of row/column t into the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !d[i][t].is_zero() && d[i][t].abs() < d[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if !d[t][j].is_zero() && d[t][j].abs() < d[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                d.swap(t, best.0);
                u.swap(t, best.0);
            }
            if best.1 != t {
                swap_cols(&mut d, t, best.1);
                swap_cols(&mut v, t, best.1);
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let snf = Snf {
        u,
        d,
        v,
        rows,
        cols: ncols,
    };
    verify_snf(r, &snf)?;
    Ok(snf)
}

fn verify_snf(r: &IntMatrix, s: &Snf) -> Result<()> {
    let urv = mat_mul(&mat_mul(&s.u, r, s.rows, s.cols), &s.v, s.cols, s.cols);
    if urv != s.d {
        return Err(Error::Invariant("U R V != D".into()));
    }
    for i in 0..s.rows {
        for j in 0..s.cols {
            if i != j && !s.d[i][j].is_zero() {
                return Err(Error::Invariant("D is not diagonal".into()));
            }
        }
    }
    let diag = s.diagonal();
    for w in diag.windows(2) {
        if !(w[0].is_zero() && w[1].is_zero()) && !w[1].is_multiple_of(&w[0]) {
            return Err(Error::Invariant("diagonal is not a divisor chain".into()));
        }
    }
    for m in [&s.u, &s.v] {
        if determinant(m).abs() != BigInt::one() {
            return Err(Error::Invariant("transform is not unimodular".into()));
        }
    }
    Ok(())
}

/// `Z^n` modulo the row span of `relations`.
#[derive(Debug, Clone)]
pub struct FPAbelianGroup {
    names: Vec<String>,
    relations: IntMatrix,
    snf: Snf,
}

/// Order of an element: finite or infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Finite(#[serde(with = "big_str")] BigInt),
    Infinite,
}

mod big_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Order {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

impl FPAbelianGroup {
    pub fn new(names: Vec<String>, relations: IntMatrix) -> Result<Self> {
        let snf = smith_normal_form(&relations, names.len())?;
        Ok(FPAbelianGroup {
            names,
            relations,
            snf,
        })
    }

    pub fn from_small(names: &[&str], relations: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            int_matrix(relations),
        )
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    /// Diagonal factor for each generator slot after the change of basis
    /// (zero = free).
    fn factors(&self) -> Vec<BigInt> {
        let diag = self.snf.diagonal();
        (0..self.names.len())
            .map(|i| diag.get(i).cloned().unwrap_or_else(BigInt::zero))
            .collect()
    }

    pub fn free_rank(&self) -> usize {
        self.factors().iter().filter(|d| d.is_zero()).count()
    }

    /// Nontrivial torsion invariants `d_i > 1`.
    pub fn torsion_invariants(&self) -> Vec<BigInt> {
        self.factors()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }

    /// E.g. `Z^2`, `Z/10`, `Z/2 + Z/6 + Z`.
    pub fn structure(&self) -> String {
        let mut parts: Vec<String> = self
            .torsion_invariants()
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Element from `(name, coefficient)` pairs.
    pub fn element(&self, terms: &[(&str, i64)]) -> Result<Vec<BigInt>> {
        let mut x = vec![BigInt::zero(); self.names.len()];
        for (name, c) in terms {
            let i = self
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown generator {name}")))?;
            x[i] += BigInt::from(*c);
        }
        Ok(x)
    }

    /// Least `n > 0` with `n x` in the relation lattice.
    pub fn element_order(&self, x: &[BigInt]) -> Result<Order> {
        if x.len() != self.names.len() {
            return Err(Error::InvalidParameter("element length mismatch".into()));
        }
        let n = self.names.len();
        let y: Vec<BigInt> = (0..n)
            .map(|c| (0..n).fold(BigInt::zero(), |acc, k| acc + &x[k] * &self.snf.v[k][c]))
            .collect();
        let mut order = BigInt::one();
        for (yi, di) in y.iter().zip(self.factors()) {
            if di.is_zero() {
                if !yi.is_zero() {
                    return Ok(Order::Infinite);
                }
                continue;
            }
            let part = &di / di.gcd(yi);
            order = order.lcm(&part);
        }
        Ok(Order::Finite(order))
    }

    /// Whether `x` lies in the relation lattice.
    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.element_order(x)? == Order::Finite(BigInt::one()))
    }
}
