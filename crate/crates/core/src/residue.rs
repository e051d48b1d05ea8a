//! Exact arithmetic over the integers and the residue rings `Z/mZ`:
//! valuations, quadratic residue symbols and small congruence solvers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes `<= bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// `base^exp mod modulus` with 128-bit intermediates.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base as u128) % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Reduce a signed integer into `[0, modulus)`.
pub fn reduce(value: i128, modulus: u64) -> u64 {
    value.rem_euclid(modulus as i128) as u64
}

/// Checked `p^k`.
pub fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k).ok_or(Error::Overflow("prime power"))
}

/// A prime together with an exponent `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    p: u64,
    k: u32,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("prime power exponent must be >= 1".into()));
        }
        checked_pow(p, k)?;
        Ok(PrimePower { p, k })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }
}

/// An element of `Z/mZ`, always stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueElement {
    modulus: u64,
    value: u64,
}

impl ResidueElement {
    pub fn new(value: i128, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!(
                "modulus must be >= 2, got {modulus}"
            )));
        }
        Ok(ResidueElement {
            modulus,
            value: reduce(value, modulus),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, exp: u64) -> Self {
        ResidueElement {
            modulus: self.modulus,
            value: mod_pow(self.value, exp, self.modulus),
        }
    }

    /// Multiplicative inverse, if the element is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let (g, x, _) = ext_gcd(self.value as i128, self.modulus as i128);
        (g == 1).then(|| ResidueElement {
            modulus: self.modulus,
            value: reduce(x, self.modulus),
        })
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues with different moduli cannot be combined"
        );
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl Add for ResidueElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check_same(&rhs);
        let v = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        ResidueElement {
            modulus: self.modulus,
            value: v as u64,
        }
    }
}

impl Sub for ResidueElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ResidueElement {
    type Output = Self;
    fn neg(self) -> Self {
        ResidueElement {
            modulus: self.modulus,
            value: (self.modulus - self.value) % self.modulus,
        }
    }
}

impl Mul for ResidueElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check_same(&rhs);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        ResidueElement {
            modulus: self.modulus,
            value: v as u64,
        }
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Largest `e` with `p^e | n`.
pub fn p_adic_valuation(n: i128, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InfiniteValuation);
    }
    let p = p as i128;
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// [`p_adic_valuation`] for big integers.
pub fn p_adic_valuation_big(n: &BigInt, p: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n.is_zero() {
        return Err(Error::InfiniteValuation);
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = (&n / &p, &n % &p);
        if !r.is_zero() {
            return Ok(e);
        }
        n = q;
        e += 1;
    }
}

/// Legendre symbol `(n/p)` for an odd prime `p`, computed with the
/// reciprocity-based Jacobi algorithm.
pub fn legendre_symbol(n: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let mut a = reduce(n as i128, p);
    let mut m = p;
    let mut sign = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            sign = -sign;
        }
        a %= m;
    }
    Ok(if m == 1 { sign } else { 0 })
}

/// Euler's criterion `n^((p-1)/2) mod p`, mapped to `{-1, 0, 1}`.
pub fn euler_criterion(n: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let r = mod_pow(reduce(n as i128, p), (p - 1) / 2, p);
    Ok(match r {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// For every residue `t mod m`, the smallest `x` with `x^2 = t`, if any.
fn smallest_roots(m: u64) -> Vec<Option<u64>> {
    let mut roots = vec![None; m as usize];
    for x in 0..m {
        let sq = (x as u128 * x as u128 % m as u128) as usize;
        if roots[sq].is_none() {
            roots[sq] = Some(x);
        }
    }
    roots
}

fn modulus_limit(m: u64) -> Result<()> {
    const LIMIT: u64 = 1 << 24;
    if m > LIMIT {
        return Err(Error::LimitExceeded {
            what: "modulus",
            size: m as u128,
            limit: LIMIT as u128,
        });
    }
    Ok(())
}

/// Lexicographically smallest `(n, m)` in `[0, p^N)^2` with
/// `n^2 + m^2 = -1 mod p^N`.
pub fn solve_two_squares_neg1(p: u64, exponent: u32) -> Result<(u64, u64)> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if exponent == 0 {
        return Err(Error::InvalidParameter("exponent must be >= 1".into()));
    }
    let modulus = checked_pow(p, exponent)?;
    solve_binary_form_neg1(1, modulus)?.ok_or_else(|| {
        Error::Invariant(format!("no solution to n^2+m^2 = -1 mod {modulus}"))
    })
}

/// Hensel-lift a solution of `n^2 + m^2 = -1` from `mod p` to `mod p^N`.
///
/// The starting pair is the smallest solution mod `p`; the result is a valid
/// solution but not necessarily the lexicographically smallest one.
pub fn hensel_two_squares_neg1(p: u64, exponent: u32) -> Result<(u64, u64)> {
    let (n0, m0) = solve_two_squares_neg1(p, 1)?;
    let modulus = checked_pow(p, exponent)?;
    // One of the two coordinates is a unit mod p; lift that one.
    let (fixed, mut moving, swapped) = if m0 % p != 0 {
        (n0, m0, false)
    } else {
        (m0, n0, true)
    };
    let mut pk = p;
    for _ in 1..exponent {
        let next = pk * p;
        let f = (fixed as u128 * fixed as u128 + moving as u128 * moving as u128 + 1) % next as u128;
        let inv = ResidueElement::new(2 * moving as i128, next)?
            .inverse()
            .ok_or_else(|| Error::Invariant("Hensel derivative not invertible".into()))?;
        let step = (f * inv.value() as u128) % next as u128;
        moving = ((moving as u128 + next as u128 - step) % next as u128) as u64;
        pk = next;
    }
    let (n, m) = if swapped {
        (moving % modulus, fixed % modulus)
    } else {
        (fixed % modulus, moving % modulus)
    };
    Ok((n, m))
}

/// Lexicographically smallest `(a, b)` in `[0, N)^2` with
/// `a^2 + l b^2 = -1 mod N`, or `None` when no pair exists.
pub fn solve_binary_form_neg1(l: u64, modulus: u64) -> Result<Option<(u64, u64)>> {
    if modulus < 2 {
        return Err(Error::InvalidParameter("modulus must be >= 2".into()));
    }
    modulus_limit(modulus)?;
    let roots = smallest_roots(modulus);
    let m = modulus as u128;
    let minus_one = m - 1;
    for a in 0..modulus {
        let a2 = a as u128 * a as u128 % m;
        // l b^2 = -1 - a^2; scan b in order for the smallest root.
        let target = (minus_one + m - a2) % m;
        if l % modulus == 1 {
            if let Some(b) = roots[target as usize] {
                return Ok(Some((a, b)));
            }
            continue;
        }
        for b in 0..modulus {
            if (l as u128 % m) * (b as u128 * b as u128 % m) % m == target {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Lexicographically smallest `(n, m, p, q)` with
/// `n^2 + m^2 + p^2 + q^2 = -1 mod N`.
pub fn solve_four_squares_neg1(modulus: u64) -> Result<[u64; 4]> {
    if modulus < 2 {
        return Err(Error::InvalidParameter("modulus must be >= 2".into()));
    }
    modulus_limit(modulus)?;
    let m = modulus as u128;
    // smallest (p, q) representing each residue as a sum of two squares
    let mut two: Vec<Option<(u64, u64)>> = vec![None; modulus as usize];
    let squares: Vec<u128> = (0..modulus).map(|x| x as u128 * x as u128 % m).collect();
    let mut remaining = modulus;
    'outer: for p in 0..modulus {
        for q in 0..modulus {
            let t = ((squares[p as usize] + squares[q as usize]) % m) as usize;
            if two[t].is_none() {
                two[t] = Some((p, q));
                remaining -= 1;
                if remaining == 0 {
                    break 'outer;
                }
            }
        }
    }
    for n in 0..modulus {
        for k in 0..modulus {
            let used = (squares[n as usize] + squares[k as usize]) % m;
            let target = ((m - 1) + m - used) % m;
            if let Some((p, q)) = two[target as usize] {
                return Ok([n, k, p, q]);
            }
        }
    }
    Err(Error::Invariant(format!(
        "no four-square representation of -1 mod {modulus}"
    )))
}

/// Convert a small big integer to `i128`, reporting overflow.
pub fn big_to_i128(n: &BigInt) -> Result<i128> {
    n.to_i128().ok_or(Error::Overflow("big integer conversion"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(p_adic_valuation(12, 2), Ok(2));
        assert_eq!(p_adic_valuation(27, 3), Ok(3));
        assert_eq!(p_adic_valuation(-50, 5), Ok(2));
        assert_eq!(p_adic_valuation(0, 5), Err(Error::InfiniteValuation));
        assert_eq!(p_adic_valuation(7, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(1, 7), Ok(1));
        assert_eq!(legendre_symbol(0, 5), Ok(0));
        assert_eq!(legendre_symbol(3, 7), Ok(-1));
        assert_eq!(legendre_symbol(-1, 7), Ok(-1));
        assert_eq!(legendre_symbol(-1, 13), Ok(1));
        assert!(legendre_symbol(3, 2).is_err());
        assert!(legendre_symbol(3, 9).is_err());
    }

    #[test]
    fn legendre_matches_enumerated_squares() {
        for p in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for n in -30i64..30 {
                let r = reduce(n as i128, p);
                let expected = if r == 0 {
                    0
                } else if squares.contains(&r) {
                    1
                } else {
                    -1
                };
                assert_eq!(legendre_symbol(n, p).unwrap(), expected, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn two_squares_examples() {
        assert_eq!(solve_two_squares_neg1(3, 1), Ok((1, 1)));
        assert_eq!(solve_two_squares_neg1(7, 1), Ok((2, 3)));
        let (n, m) = solve_two_squares_neg1(3, 2).unwrap();
        assert_eq!((n * n + m * m) % 9, 8);
        assert_eq!((n, m), (1, 4));
        assert!(solve_two_squares_neg1(2, 1).is_err());
    }

    #[test]
    fn hensel_lift_is_a_solution() {
        for p in [3u64, 5, 7, 11, 13] {
            for e in 1..=4 {
                let m = p.pow(e);
                let (a, b) = hensel_two_squares_neg1(p, e).unwrap();
                assert_eq!((a * a + b * b + 1) % m, 0, "p={p} e={e}");
            }
        }
    }

    #[test]
    fn binary_form_examples() {
        assert_eq!(solve_binary_form_neg1(1, 3), Ok(Some((1, 1))));
        assert_eq!(solve_binary_form_neg1(2, 9), Ok(Some((0, 2))));
        assert_eq!(solve_binary_form_neg1(4, 2), Ok(Some((1, 0))));
        // a^2 = -1 mod 4 has no solution and l = 4 kills b
        assert_eq!(solve_binary_form_neg1(4, 4), Ok(None));
    }

    #[test]
    fn four_squares_examples() {
        // lexicographically least; (1,0,0,0) is an equally valid witness
        assert_eq!(solve_four_squares_neg1(2), Ok([0, 0, 0, 1]));
        assert_eq!((1 + 1) % 2, 0);
        let w = solve_four_squares_neg1(8).unwrap();
        assert_eq!(w.iter().map(|x| x * x).sum::<u64>() % 8, 7);
        let mut brute = None;
        'b: for a in 0..8u64 {
            for b in 0..8 {
                for c in 0..8 {
                    for d in 0..8 {
                        if (a * a + b * b + c * c + d * d) % 8 == 7 {
                            brute = Some([a, b, c, d]);
                            break 'b;
                        }
                    }
                }
            }
        }
        assert_eq!(Some(w), brute);
        let w = solve_four_squares_neg1(12).unwrap();
        assert_eq!(w.iter().map(|x| x * x).sum::<u64>() % 12, 11);
    }

    #[test]
    fn residue_element_ops() {
        let a = ResidueElement::new(-1, 9).unwrap();
        assert_eq!(a.value(), 8);
        let b = ResidueElement::new(4, 9).unwrap();
        assert_eq!((a * b).value(), 5);
        assert_eq!((a + b).value(), 3);
        assert_eq!((a - b).value(), 4);
        assert_eq!(b.inverse().unwrap().value(), 7);
        assert!(ResidueElement::new(3, 9).unwrap().inverse().is_none());
        assert!(ResidueElement::new(3, 1).is_err());
        assert_eq!(b.pow(3).value(), 64 % 9);
    }

    #[test]
    fn prime_power_validation() {
        assert_eq!(PrimePower::new(5, 2).unwrap().modulus(), 25);
        assert!(PrimePower::new(6, 2).is_err());
        assert!(PrimePower::new(5, 0).is_err());
        assert!(PrimePower::new(2, 80).is_err());
    }
}
