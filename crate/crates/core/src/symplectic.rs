//! Symplectic matrices over `Z` and `F_2`, quadratic forms with the standard
//! polarization, the elementary generators `E_ij`, and Lagrangian counts.
//!
//! Basis order is `e_1..e_g, f_1..f_g` with `(e_i, f_j) = delta_ij`, so
//! `J = [[0, I], [-I, 0]]`. Over `F_2` a vector is a bitmask: bit `i` is the
//! `e_{i+1}` coordinate and bit `g+i` the `f_{i+1}` coordinate.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::Outcome;
use crate::residue::{checked_pow, is_prime};

/// Largest `g` for which forms are enumerated.
pub const MAX_FORM_GENUS: usize = 4;
/// Default cap on `p^{2r}` for Lagrangian enumeration.
pub const DEFAULT_LAGRANGIAN_LIMIT: u64 = 729;

/// A `2g x 2g` integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SympMatrix {
    g: usize,
    entries: Vec<i64>,
}

impl SympMatrix {
    pub fn identity(g: usize) -> Self {
        let n = 2 * g;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        SympMatrix { g, entries }
    }

    /// Build from rows; fails unless the result preserves `J`.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n % 2 == 1 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("need a square matrix of even size".into()));
        }
        let m = SympMatrix {
            g: n / 2,
            entries: rows.into_iter().flatten().collect(),
        };
        if !m.is_symplectic() {
            return Err(Error::NotSymplectic);
        }
        Ok(m)
    }

    fn from_blocks(a: &[i64], b: &[i64], c: &[i64], d: &[i64], g: usize) -> Self {
        let n = 2 * g;
        let mut entries = vec![0; n * n];
        for r in 0..g {
            for s in 0..g {
                entries[r * n + s] = a[r * g + s];
                entries[r * n + g + s] = b[r * g + s];
                entries[(g + r) * n + s] = c[r * g + s];
                entries[(g + r) * n + g + s] = d[r * g + s];
            }
        }
        SympMatrix { g, entries }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.dim() + c]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim()).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.g, other.g, "size mismatch");
        let n = self.dim();
        let mut entries = vec![0i64; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == 0 {
                    continue;
                }
                for c in 0..n {
                    entries[r * n + c] += a * other.entries[k * n + c];
                }
            }
        }
        SympMatrix { g: self.g, entries }
    }

    fn transpose(&self) -> Self {
        let n = self.dim();
        let mut entries = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c];
            }
        }
        SympMatrix { g: self.g, entries }
    }

    fn j(g: usize) -> Self {
        let z = vec![0; g * g];
        let mut id = vec![0; g * g];
        let mut neg = vec![0; g * g];
        for i in 0..g {
            id[i * g + i] = 1;
            neg[i * g + i] = -1;
        }
        Self::from_blocks(&z, &id, &neg, &z, g)
    }

    /// `M^T J M = J`.
    pub fn is_symplectic(&self) -> bool {
        let j = Self::j(self.g);
        self.transpose().mul(&j).mul(self) == j
    }

    /// `M^{-1} = -J M^T J` for symplectic `M`.
    pub fn inverse(&self) -> Self {
        let j = Self::j(self.g);
        let mut inv = j.mul(&self.transpose()).mul(&j);
        inv.entries.iter_mut().for_each(|x| *x = -*x);
        inv
    }

    pub fn mod2(&self) -> F2Matrix {
        let n = self.dim();
        let cols = (0..n)
            .map(|c| {
                (0..n).fold(0u32, |acc, r| {
                    acc | (((self.get(r, c).rem_euclid(2)) as u32) << r)
                })
            })
            .collect();
        F2Matrix { g: self.g, cols }
    }
}

/// Commutator convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `a b a^{-1} b^{-1}`
    ABAinvBinv,
    /// `a^{-1} b^{-1} a b`
    AinvBinvAB,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::ABAinvBinv, Convention::AinvBinvAB];

    pub fn commutator(self, a: &SympMatrix, b: &SympMatrix) -> SympMatrix {
        let (ai, bi) = (a.inverse(), b.inverse());
        match self {
            Convention::ABAinvBinv => a.mul(b).mul(&ai).mul(&bi),
            Convention::AinvBinvAB => ai.mul(&bi).mul(a).mul(b),
        }
    }
}

/// The convention fixed for every commutator witness.
pub const COMMUTATOR_CONVENTION: Convention = Convention::ABAinvBinv;

/// A `2g x 2g` matrix over `F_2`; column `j` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Matrix {
    g: usize,
    cols: Vec<u32>,
}

impl F2Matrix {
    pub fn identity(g: usize) -> Self {
        F2Matrix {
            g,
            cols: (0..2 * g).map(|i| 1 << i).collect(),
        }
    }

    pub fn from_cols(g: usize, cols: Vec<u32>) -> Self {
        assert_eq!(cols.len(), 2 * g);
        F2Matrix { g, cols }
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn apply(&self, x: u32) -> u32 {
        let mut acc = 0;
        let mut bits = x;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            acc ^= self.cols[j];
            bits &= bits - 1;
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        F2Matrix {
            g: self.g,
            cols: other.cols.iter().map(|&c| self.apply(c)).collect(),
        }
    }

    pub fn is_symplectic(&self) -> bool {
        let n = 2 * self.g;
        (0..n).all(|i| {
            (0..n).all(|j| omega2(self.g, self.cols[i], self.cols[j]) == omega2(self.g, 1 << i, 1 << j))
        })
    }

    /// Inverse of a symplectic matrix: `J M^T J` mod 2.
    pub fn symplectic_inverse(&self) -> Self {
        let n = 2 * self.g;
        let swap = |i: usize| if i < self.g { i + self.g } else { i - self.g };
        // (J M^T J)_{rc} = M_{swap c, swap r}
        let cols = (0..n)
            .map(|c| {
                (0..n).fold(0u32, |acc, r| {
                    acc | (((self.cols[swap(r)] >> swap(c)) & 1) << r)
                })
            })
            .collect();
        F2Matrix { g: self.g, cols }
    }

    /// Rows as 0/1 lists, for display.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        let n = 2 * self.g;
        (0..n)
            .map(|r| (0..n).map(|c| ((self.cols[c] >> r) & 1) as u8).collect())
            .collect()
    }
}

/// Standard symplectic pairing mod 2.
pub fn omega2(g: usize, u: u32, v: u32) -> u32 {
    let mask = (1u32 << g) - 1;
    let (ux, uy) = (u & mask, u >> g);
    let (vx, vy) = (v & mask, v >> g);
    ((ux & vy) ^ (uy & vx)).count_ones() % 2
}

/// Even or odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// `q(x) = sum x_i y_i + <lin, x>` over `F_2`: a quadratic refinement of the
/// standard pairing, determined by its values `lin` on the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadraticFormF2 {
    g: usize,
    lin: u32,
}

impl QuadraticFormF2 {
    pub fn new(g: usize, lin: u32) -> Result<Self> {
        if g == 0 || g > 15 || lin >> (2 * g) != 0 {
            return Err(Error::InvalidParameter(format!("bad form data g={g} lin={lin:#b}")));
        }
        Ok(QuadraticFormF2 { g, lin })
    }

    /// From the values on `e_1..e_g` and `f_1..f_g`.
    pub fn from_basis_values(a: &[u8], b: &[u8]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidParameter("length mismatch".into()));
        }
        let g = a.len();
        let lin = a
            .iter()
            .chain(b)
            .enumerate()
            .fold(0u32, |acc, (i, &v)| acc | (((v & 1) as u32) << i));
        Self::new(g, lin)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// Values on the basis vectors, as a bitmask.
    pub fn basis_values(&self) -> u32 {
        self.lin
    }

    pub fn eval(&self, x: u32) -> u32 {
        let mask = (1u32 << self.g) - 1;
        ((x & mask & (x >> self.g)).count_ones() + (x & self.lin).count_ones()) % 2
    }

    pub fn zero_count(&self) -> u64 {
        (0..1u32 << (2 * self.g)).filter(|&x| self.eval(x) == 0).count() as u64
    }

    /// `(M q)(x) = q(M^{-1} x)` for symplectic `M` over `F_2`.
    pub fn act(&self, m: &F2Matrix) -> Self {
        let inv = m.symplectic_inverse();
        let lin = (0..2 * self.g).fold(0u32, |acc, i| acc | (self.eval(inv.apply(1 << i)) << i));
        QuadraticFormF2 { g: self.g, lin }
    }

    /// Human-readable polynomial, e.g. `x1y1+x2y2+x2+y2`.
    pub fn describe(&self) -> String {
        let mut s: Vec<String> = (1..=self.g).map(|i| format!("x{i}y{i}")).collect();
        for i in 0..2 * self.g {
            if (self.lin >> i) & 1 == 1 {
                s.push(if i < self.g {
                    format!("x{}", i + 1)
                } else {
                    format!("y{}", i - self.g + 1)
                });
            }
        }
        s.join("+")
    }
}

/// `sum x_i y_i`.
pub fn standard_even_form(g: usize) -> Result<QuadraticFormF2> {
    QuadraticFormF2::new(g, 0)
}

/// Parity from the number of zeros.
pub fn form_parity(q: &QuadraticFormF2) -> Result<Parity> {
    let g = q.g as u32;
    let zeros = q.zero_count();
    let even = (1u64 << (2 * g - 1)) + (1u64 << (g - 1));
    let odd = (1u64 << (2 * g - 1)) - (1u64 << (g - 1));
    match zeros {
        z if z == even => Ok(Parity::Even),
        z if z == odd => Ok(Parity::Odd),
        z => Err(Error::Invariant(format!("form with {z} zeros is neither even nor odd"))),
    }
}

/// Every form with the standard polarization, tagged with its parity.
pub fn enumerate_forms(g: usize) -> Result<Vec<(QuadraticFormF2, Parity)>> {
    if g == 0 || g > MAX_FORM_GENUS {
        return Err(Error::LimitExceeded {
            what: "genus for form enumeration",
            size: g as u128,
            limit: MAX_FORM_GENUS as u128,
        });
    }
    (0..1u32 << (2 * g))
        .map(|lin| {
            let q = QuadraticFormF2::new(g, lin)?;
            Ok((q, form_parity(&q)?))
        })
        .collect()
}

/// Whether `(i, j)` (1-based) lies in the admissible index set.
pub fn in_sigma(i: usize, j: usize) -> bool {
    !((i % 2 == 1 && j == i + 1) || (i.is_multiple_of(2) && j + 1 == i))
}

/// All admissible index pairs for size `2g`.
pub fn sigma(g: usize) -> Vec<(usize, usize)> {
    let n = 2 * g;
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| in_sigma(i, j))
        .collect()
}

/// `E_ij` exactly as the block cases prescribe.
pub fn elementary_matrix(i: usize, j: usize, g: usize) -> Result<SympMatrix> {
    let n = 2 * g;
    if g == 0 || i == 0 || j == 0 || i > n || j > n || !in_sigma(i, j) {
        return Err(Error::IndexNotAdmissible(i, j));
    }
    let id: Vec<i64> = (0..g * g).map(|t| (t / g == t % g) as i64).collect();
    let zero = vec![0i64; g * g];
    // gamma_kl: symmetric, ones at (k,l) and (l,k)
    let gamma = |k: usize, l: usize| {
        let mut m = zero.clone();
        m[(k - 1) * g + (l - 1)] = 1;
        m[(l - 1) * g + (k - 1)] = 1;
        m
    };
    // identity plus `c` at (k,l)
    let unip = |k: usize, l: usize, c: i64| {
        let mut m = id.clone();
        m[(k - 1) * g + (l - 1)] += c;
        m
    };
    Ok(match (i % 2, j % 2) {
        (0, 0) => SympMatrix::from_blocks(&id, &zero, &gamma(i / 2, j / 2), &id, g),
        (1, 1) => {
            let neg: Vec<i64> = gamma(i.div_ceil(2), j.div_ceil(2)).iter().map(|x| -x).collect();
            SympMatrix::from_blocks(&id, &neg, &zero, &id, g)
        }
        (1, 0) => {
            let (k, l) = (i.div_ceil(2), j / 2);
            // e_kl and e_lk^{-1}; k != l since (2k-1, 2k) is excluded
            SympMatrix::from_blocks(&unip(k, l, 1), &zero, &zero, &unip(l, k, -1), g)
        }
        _ => return elementary_matrix(j, i, g),
    })
}

/// Mod-2 reduction preserves `sum x_i y_i`.
pub fn in_gamma12(m: &SympMatrix) -> Result<bool> {
    if !m.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    let q0 = standard_even_form(m.genus())?;
    let mb = m.mod2();
    Ok((0..1u32 << m.dim()).all(|x| q0.eval(mb.apply(x)) == q0.eval(x)))
}

/// One instance of a commutator relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    /// 1 or 2.
    pub relation: u8,
    pub a: (usize, usize),
    pub b: (usize, usize),
    /// `(i,l)` for relation 1; `(i,i)` for relation 2, whose target is `E_ii^2`.
    pub target: (usize, usize),
}

impl RelationInstance {
    pub fn target_matrix(&self, g: usize) -> Result<SympMatrix> {
        let e = elementary_matrix(self.target.0, self.target.1, g)?;
        Ok(if self.relation == 2 { e.mul(&e) } else { e })
    }

    pub fn holds(&self, g: usize, conv: Convention) -> Result<bool> {
        let a = elementary_matrix(self.a.0, self.a.1, g)?;
        let b = elementary_matrix(self.b.0, self.b.1, g)?;
        Ok(conv.commutator(&a, &b) == self.target_matrix(g)?)
    }
}

/// All index tuples to which relations (1) and (2) apply: `j` even,
/// `(j,k)` not admissible, indices distinct.
pub fn relation_instances(g: usize) -> Vec<RelationInstance> {
    let s = sigma(g);
    let mut out = Vec::new();
    for &(i, j) in &s {
        if j % 2 == 1 {
            continue;
        }
        for &(k, l) in &s {
            if in_sigma(j, k) {
                continue;
            }
            let distinct3 = i != j && i != k && j != k;
            if distinct3 && l != i && l != j && l != k && in_sigma(i, l) {
                out.push(RelationInstance {
                    relation: 1,
                    a: (i, j),
                    b: (k, l),
                    target: (i, l),
                });
            }
            if distinct3 && l == i {
                out.push(RelationInstance {
                    relation: 2,
                    a: (i, j),
                    b: (k, i),
                    target: (i, i),
                });
            }
        }
    }
    out
}

/// Both relations over every admissible tuple, under each convention.
pub fn verify_commutator_relations(g: usize) -> Result<Outcome> {
    if !(2..=3).contains(&g) {
        return Err(Error::InvalidParameter(format!("g must be 2 or 3, got {g}")));
    }
    let instances = relation_instances(g);
    let mut satisfying = Vec::new();
    let mut first_failure = None;
    for conv in Convention::ALL {
        let mut all = true;
        for inst in &instances {
            if !inst.holds(g, conv)? {
                all = false;
                if conv == COMMUTATOR_CONVENTION && first_failure.is_none() {
                    first_failure = Some(inst.clone());
                }
            }
        }
        if all {
            satisfying.push(conv);
        }
    }
    let counts = [1u8, 2].map(|r| instances.iter().filter(|x| x.relation == r).count());
    let witness = json!({
        "g": g,
        "convention": COMMUTATOR_CONVENTION,
        "conventions_satisfying_all": satisfying,
        "convention_unique": satisfying.len() == 1,
        "instances_relation_1": counts[0],
        "instances_relation_2": counts[1],
    });
    Ok(Outcome::from_check(first_failure.is_none(), witness, || {
        json!({ "instance": first_failure })
    }))
}

/// Generators of the kernel subgroup, labelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaGenerator {
    pub label: String,
    pub index: (usize, usize),
    pub squared: bool,
    pub matrix: SympMatrix,
}

/// `E_{2k-1,2l}`, `E_{2l,2k-1}`, `E_{2k,2l}`, `E_{2k-1,2l-1}` for `k != l`,
/// and `E_ii^2` for every `i`.
pub fn delta_generators(g: usize) -> Result<Vec<DeltaGenerator>> {
    if !(2..=3).contains(&g) {
        return Err(Error::InvalidParameter(format!("g must be 2 or 3, got {g}")));
    }
    let mut out = Vec::new();
    let mut push = |i: usize, j: usize, squared: bool| -> Result<()> {
        let e = elementary_matrix(i, j, g)?;
        let matrix = if squared { e.mul(&e) } else { e };
        let label = if squared {
            format!("E{i},{j}^2")
        } else {
            format!("E{i},{j}")
        };
        out.push(DeltaGenerator {
            label,
            index: (i, j),
            squared,
            matrix,
        });
        Ok(())
    };
    for k in 1..=g {
        for l in 1..=g {
            if k == l {
                continue;
            }
            push(2 * k - 1, 2 * l, false)?;
            push(2 * l, 2 * k - 1, false)?;
            push(2 * k, 2 * l, false)?;
            push(2 * k - 1, 2 * l - 1, false)?;
        }
    }
    for i in 1..=2 * g {
        push(i, i, true)?;
    }
    Ok(out)
}

/// Which of the three block shapes a matrix has, if any.
pub fn delta_shape(m: &SympMatrix) -> Option<&'static str> {
    let g = m.genus();
    let block = |r0: usize, c0: usize| -> Vec<i64> {
        (0..g * g).map(|t| m.get(r0 + t / g, c0 + t % g)).collect()
    };
    let (a, b, c, d) = (block(0, 0), block(0, g), block(g, 0), block(g, g));
    let is_id = |x: &[i64]| (0..g * g).all(|t| x[t] == (t / g == t % g) as i64);
    let is_zero = |x: &[i64]| x.iter().all(|&v| v == 0);
    let sym_even = |x: &[i64]| {
        (0..g).all(|r| x[r * g + r] % 2 == 0) && (0..g).all(|r| (0..g).all(|s| x[r * g + s] == x[s * g + r]))
    };
    if is_id(&a) && is_id(&d) && is_zero(&c) && sym_even(&b) {
        return Some("upper");
    }
    if is_id(&a) && is_id(&d) && is_zero(&b) && sym_even(&c) {
        return Some("lower");
    }
    if is_zero(&b) && is_zero(&c) && m.is_symplectic() && det_small(&a, g) == 1 {
        return Some("block-diagonal");
    }
    None
}

fn det_small(a: &[i64], g: usize) -> i64 {
    match g {
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        _ => (0..g)
            .map(|c| {
                let minor: Vec<i64> = (1..g)
                    .flat_map(|r| (0..g).filter(move |&cc| cc != c).map(move |cc| (r, cc)))
                    .map(|(r, cc)| a[r * g + cc])
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * a[c] * det_small(&minor, g - 1)
            })
            .sum(),
    }
}

/// Each generator as a commutator of two `Gamma_{1,2}` elements, with the
/// relation instance used.
pub fn verify_delta_in_commutators(g: usize) -> Result<Outcome> {
    let gens = delta_generators(g)?;
    let instances = relation_instances(g);
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    let mut bad_shape = Vec::new();
    for gen in &gens {
        if delta_shape(&gen.matrix).is_none() || !in_gamma12(&gen.matrix)? {
            bad_shape.push(gen.label.clone());
        }
        let mut found = None;
        for inst in &instances {
            if inst.target != gen.index || (inst.relation == 2) != gen.squared {
                continue;
            }
            let a = elementary_matrix(inst.a.0, inst.a.1, g)?;
            let b = elementary_matrix(inst.b.0, inst.b.1, g)?;
            if in_gamma12(&a)? && in_gamma12(&b)? && COMMUTATOR_CONVENTION.commutator(&a, &b) == gen.matrix {
                found = Some(inst.clone());
                break;
            }
        }
        match found {
            Some(inst) => witnesses.push(json!({"generator": gen.label, "instance": inst})),
            None => missing.push(gen.label.clone()),
        }
    }
    let witness = json!({
        "g": g,
        "generators": gens.len(),
        "witnessed": witnesses,
        "convention": COMMUTATOR_CONVENTION,
    });
    let ok = missing.is_empty() && bad_shape.is_empty();
    Ok(Outcome::from_check(ok, witness, || {
        json!({"without_witness": missing, "bad_shape_or_not_in_gamma12": bad_shape})
    }))
}

/// `Sp_4(F_2)` acting on the six odd forms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct S6Action {
    pub odd_forms: Vec<QuadraticFormF2>,
    /// Group elements with the permutation they induce on `odd_forms`.
    pub table: Vec<(F2Matrix, Vec<usize>)>,
}

impl S6Action {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn permutation(&self, m: &F2Matrix) -> Option<&[usize]> {
        self.table
            .iter()
            .find(|(x, _)| x == m)
            .map(|(_, p)| p.as_slice())
    }
}

/// Every symplectic 4x4 matrix over `F_2`.
pub fn sp4_f2() -> Vec<F2Matrix> {
    (0..1u32 << 16)
        .map(|bits| F2Matrix::from_cols(2, (0..4).map(|c| (bits >> (4 * c)) & 0xf).collect()))
        .filter(|m| m.is_symplectic())
        .collect()
}

fn odd_forms(g: usize) -> Result<Vec<QuadraticFormF2>> {
    Ok(enumerate_forms(g)?
        .into_iter()
        .filter(|(_, p)| *p == Parity::Odd)
        .map(|(q, _)| q)
        .collect())
}

/// Permutation of `forms` induced by `m`: `perm[i]` is the index of `m q_i`.
pub fn induced_permutation(m: &F2Matrix, forms: &[QuadraticFormF2]) -> Result<Vec<usize>> {
    forms
        .iter()
        .map(|q| {
            let image = q.act(m);
            forms
                .iter()
                .position(|x| *x == image)
                .ok_or_else(|| Error::Invariant("action does not preserve the form set".into()))
        })
        .collect()
}

/// Build the action table and check order 720, homomorphism, faithfulness
/// and surjectivity onto `S_6`.
pub fn sp4_s6_action() -> Result<S6Action> {
    let forms = odd_forms(2)?;
    if forms.len() != 6 {
        return Err(Error::Invariant(format!("{} odd forms, expected 6", forms.len())));
    }
    let group = sp4_f2();
    if group.len() != 720 {
        return Err(Error::Invariant(format!("|Sp4(F2)| = {}, expected 720", group.len())));
    }
    let table: Vec<(F2Matrix, Vec<usize>)> = group
        .into_iter()
        .map(|m| {
            let p = induced_permutation(&m, &forms)?;
            Ok((m, p))
        })
        .collect::<Result<_>>()?;
    let index: HashMap<&F2Matrix, &Vec<usize>> = table.iter().map(|(m, p)| (m, p)).collect();
    for (m, pm) in &table {
        for (n, pn) in &table {
            let pmn = index[&m.mul(n)];
            if (0..6).any(|i| pmn[i] != pm[pn[i]]) {
                return Err(Error::Invariant("action is not a homomorphism".into()));
            }
        }
    }
    let distinct: std::collections::HashSet<&Vec<usize>> = table.iter().map(|(_, p)| p).collect();
    if distinct.len() != 720 {
        return Err(Error::Invariant("action is not faithful".into()));
    }
    Ok(S6Action {
        odd_forms: forms,
        table,
    })
}

/// Sorted cycle lengths, fixed points included.
pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

pub fn permutation_sign(perm: &[usize]) -> i8 {
    let transpositions: usize = cycle_type(perm).iter().map(|l| l - 1).sum();
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of the permutation a `g = 2` symplectic matrix induces on odd forms.
pub fn sign_character(m: &SympMatrix) -> Result<i8> {
    if m.genus() != 2 {
        return Err(Error::InvalidParameter("sign character is defined for g = 2".into()));
    }
    if !m.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    Ok(permutation_sign(&induced_permutation(&m.mod2(), &odd_forms(2)?)?))
}

/// Order, parity counts, faithfulness and the cycle types of `E_14`, `E_11`.
pub fn verify_sp4_s6() -> Result<Outcome> {
    let action = sp4_s6_action()?;
    let forms = enumerate_forms(2)?;
    let odd = forms.iter().filter(|(_, p)| *p == Parity::Odd).count();
    let even = forms.len() - odd;
    let e14 = elementary_matrix(1, 4, 2)?;
    let e11 = elementary_matrix(1, 1, 2)?;
    let p14 = induced_permutation(&e14.mod2(), &action.odd_forms)?;
    let p11 = induced_permutation(&e11.mod2(), &action.odd_forms)?;
    let ct14 = cycle_type(&p14);
    let ct11 = cycle_type(&p11);
    let e14_ok = ct14 == [2, 2, 2] && permutation_sign(&p14) == -1 && in_gamma12(&e14)?;
    let e11_ok = ct11 == [1, 1, 1, 1, 2] && permutation_sign(&p11) == -1;
    let witness = json!({
        "order": action.order(),
        "odd_forms": odd,
        "even_forms": even,
        "faithful_homomorphism": true,
        "e14_cycle_type": ct14,
        "e14_sign": permutation_sign(&p14),
        "e11_cycle_type": ct11,
        "e11_sign": permutation_sign(&p11),
    });
    let ok = action.order() == 720 && odd == 6 && even == 10 && e14_ok && e11_ok;
    Ok(Outcome::from_check(ok, witness.clone(), || witness))
}

/// The odd form `x1y1 + x2y2 + x2 + y2` (`x2^2 = x2` over `F_2`).
pub fn printed_odd_form() -> QuadraticFormF2 {
    QuadraticFormF2::from_basis_values(&[0, 1], &[0, 1]).expect("valid form")
}

/// Whether `E_11` fixes the odd form `x1y1 + x2y2 + x2 + y2`; also lists
/// the odd forms it does fix.
pub fn verify_e11_fixed_odd_form() -> Result<Outcome> {
    let target = printed_odd_form();
    let m = elementary_matrix(1, 1, 2)?.mod2();
    let fixed: Vec<String> = odd_forms(2)?
        .into_iter()
        .filter(|q| q.act(&m) == *q)
        .map(|q| q.describe())
        .collect();
    let image = target.act(&m);
    let ok = image == target;
    let witness = json!({
        "form": target.describe(),
        "parity": form_parity(&target)?,
        "image_under_e11": image.describe(),
        "odd_forms_fixed_by_e11": fixed,
        "other_e_ii_fixing_form": (1..=4)
            .filter(|&i| {
                elementary_matrix(i, i, 2)
                    .map(|e| target.act(&e.mod2()) == target)
                    .unwrap_or(false)
            })
            .map(|i| format!("E{i},{i}"))
            .collect::<Vec<_>>(),
    });
    Ok(Outcome::from_check(ok, witness.clone(), || {
        json!({"form": target.describe(), "image": image.describe()})
    }))
}

/// Number of Lagrangian subspaces of `F_p^{2r}`, by enumerating reduced
/// row echelon bases of `r`-dimensional subspaces.
pub fn lagrangian_enumerate(p: u64, r: usize, limit: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("r must be >= 1".into()));
    }
    let size = checked_pow(p, 2 * r as u32)?;
    if size > limit {
        return Err(Error::LimitExceeded {
            what: "p^(2r)",
            size: size as u128,
            limit: limit as u128,
        });
    }
    let n = 2 * r;
    let omega = |u: &[u64], v: &[u64]| -> u64 {
        (0..r).fold(0u64, |acc, i| (acc + u[i] * v[r + i] + p * p - u[r + i] * v[i]) % p)
    };
    let mut count = 0u64;
    for pivots in combinations(n, r) {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|row| {
                let piv = &pivots;
                ((piv[row] + 1)..n)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (row, c))
            })
            .collect();
        let total = p.pow(free.len() as u32);
        for mut idx in 0..total {
            let mut rows = vec![vec![0u64; n]; r];
            for (row, &c) in pivots.iter().enumerate() {
                rows[row][c] = 1;
            }
            for &(row, c) in &free {
                rows[row][c] = idx % p;
                idx /= p;
            }
            let isotropic = (0..r).all(|a| ((a + 1)..r).all(|b| omega(&rows[a], &rows[b]) == 0));
            if isotropic {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
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

/// `prod_{i=1}^r (p^i + 1)`.
pub fn lagrangian_formula(p: u64, r: usize) -> Result<u128> {
    (1..=r as u32).try_fold(1u128, |acc, i| {
        (p as u128)
            .checked_pow(i)
            .and_then(|x| acc.checked_mul(x + 1))
            .ok_or(Error::Overflow("Lagrangian count"))
    })
}

/// Enumerated count against the product formula.
pub fn verify_lagrangian_count(p: u64, r: usize, limit: u64) -> Result<Outcome> {
    let formula = lagrangian_formula(p, r)?;
    let counted = lagrangian_enumerate(p, r, limit)?;
    let witness = json!({"p": p, "r": r, "count": counted, "formula": formula.to_string()});
    Ok(Outcome::from_check(counted as u128 == formula, witness.clone(), || witness))
}

/// The count is prime to `p` (enumerated too when within `limit`).
pub fn covering_degree_prime_check(p: u64, r: usize, limit: u64) -> Result<Outcome> {
    let formula = lagrangian_formula(p, r)?;
    let enumerated = match lagrangian_enumerate(p, r, limit) {
        Ok(c) => Some(c),
        Err(Error::LimitExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let gcd = num_integer::gcd(formula, p as u128);
    let agrees = enumerated.is_none_or(|c| c as u128 == formula);
    let witness = json!({
        "p": p,
        "r": r,
        "degree": formula.to_string(),
        "enumerated": enumerated,
        "gcd": gcd.to_string(),
    });
    Ok(Outcome::from_check(gcd == 1 && agrees, witness.clone(), || witness))
}
