//! Dense polynomials over `Z/p^k` and `(t-1)`-adic valuations.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::Outcome;
use crate::residue::{checked_pow, is_prime, mod_pow};
use crate::special_maps::PeriodicMap;

/// Polynomial with coefficients mod `p^k`, index = degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyOverZpk {
    p: u64,
    k: u32,
    coeffs: Vec<u64>,
}

impl PolyOverZpk {
    pub fn new(p: u64, k: u32, coeffs: Vec<i128>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        let q = checked_pow(p, k)?;
        if q > 1 << 31 {
            return Err(Error::Overflow("polynomial coefficient modulus"));
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.rem_euclid(q as i128) as u64)
            .collect();
        Ok(Self::raw(p, k, coeffs))
    }

    fn raw(p: u64, k: u32, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyOverZpk { p, k, coeffs }
    }

    pub fn zero(p: u64, k: u32) -> Result<Self> {
        Self::new(p, k, Vec::new())
    }

    /// `(t - 1)^e`.
    pub fn t_minus_one_pow(p: u64, k: u32, e: u32) -> Result<Self> {
        let mut acc = Self::new(p, k, vec![1])?;
        let lin = Self::new(p, k, vec![-1, 1])?;
        for _ in 0..e {
            acc = acc.mul(&lin);
        }
        Ok(acc)
    }

    /// `c t^e`.
    pub fn monomial(p: u64, k: u32, c: i128, e: usize) -> Result<Self> {
        let mut coeffs = vec![0i128; e + 1];
        coeffs[e] = c;
        Self::new(p, k, coeffs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn q(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, other: &Self) {
        assert!(self.p == other.p && self.k == other.k, "coefficient rings differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let q = self.q();
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                (self.coeffs.get(i).copied().unwrap_or(0) + other.coeffs.get(i).copied().unwrap_or(0))
                    % q
            })
            .collect();
        Self::raw(self.p, self.k, c)
    }

    pub fn scale(&self, s: i128) -> Self {
        let q = self.q();
        let s = s.rem_euclid(q as i128) as u64;
        Self::raw(self.p, self.k, self.coeffs.iter().map(|c| c * s % q).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::raw(self.p, self.k, Vec::new());
        }
        let q = self.q();
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % q;
            }
        }
        Self::raw(self.p, self.k, c)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let q = self.q();
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| (i as u64 % q) * a % q)
            .collect();
        Self::raw(self.p, self.k, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let q = self.q();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (acc * (x % q) + c) % q)
    }

    /// Quotient and remainder on division by `t - 1`.
    pub fn divide_by_t_minus_one(&self) -> (Self, u64) {
        let q = self.q();
        let Some(deg) = self.degree() else {
            return (self.clone(), 0);
        };
        let mut quot = vec![0u64; deg];
        let mut carry = 0u64;
        for i in (0..=deg).rev() {
            let v = (self.coeffs[i] + carry) % q;
            if i == 0 {
                return (Self::raw(self.p, self.k, quot), v);
            }
            quot[i - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Remainder on division by a monic polynomial.
    pub fn rem_monic(&self, divisor: &Self) -> Result<Self> {
        self.check(divisor);
        let q = self.q();
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidParameter("division by zero polynomial".into()))?;
        if divisor.coeffs[dd] != 1 {
            return Err(Error::InvalidParameter("divisor must be monic".into()));
        }
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let lead = *r.last().expect("nonempty");
            let shift = r.len() - 1 - dd;
            if lead != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    r[shift + j] = (r[shift + j] + q - lead * d % q) % q;
                }
            }
            r.pop();
        }
        Ok(Self::raw(self.p, self.k, r))
    }

    /// Multiplicity of the root `t = 1`, by repeated synthetic division.
    pub fn t1_valuation(&self) -> Result<u32> {
        if self.k != 1 {
            return Err(Error::InvalidParameter(
                "(t-1)-adic valuation needs coefficients in F_p (k = 1)".into(),
            ));
        }
        if self.is_zero() {
            return Err(Error::InfiniteValuation);
        }
        let mut cur = self.clone();
        let mut v = 0;
        loop {
            let (quot, rem) = cur.divide_by_t_minus_one();
            if rem != 0 {
                return Ok(v);
            }
            cur = quot;
            v += 1;
        }
    }

    /// Same valuation read off from derivatives at `t = 1`. Only meaningful
    /// while the multiplicity stays below `p` (`j!` must be a unit).
    pub fn t1_valuation_by_derivatives(&self) -> Result<u32> {
        if self.k != 1 {
            return Err(Error::InvalidParameter("needs k = 1".into()));
        }
        if self.is_zero() {
            return Err(Error::InfiniteValuation);
        }
        let mut d = self.clone();
        for j in 0..self.p {
            if d.eval(1) != 0 {
                return Ok(j as u32);
            }
            d = d.derivative();
        }
        Err(Error::Inapplicable(
            "multiplicity >= p is invisible to derivatives in characteristic p".into(),
        ))
    }
}

/// `S_r(t) = sum_{n<p} n^r t^n` over `F_p`, with `0^0 = 1`.
pub fn power_sum_poly(r: u64, p: u64) -> Result<PolyOverZpk> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    PolyOverZpk::new(p, 1, (0..p).map(|n| mod_pow(n, r, p) as i128).collect())
}

fn odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `v(S_r) = p - 1 - r` for `0 <= r <= p-1`.
pub fn verify_lemma_val(p: u64) -> Result<Outcome> {
    odd_prime(p)?;
    let mut vals = Vec::new();
    let mut bad = None;
    for r in 0..p {
        let v = power_sum_poly(r, p)?.t1_valuation()?;
        let expected = p - 1 - r;
        if bad.is_none() && v as u64 != expected {
            bad = Some(json!({"r": r, "expected": expected, "valuation": v}));
        }
        vals.push(v);
    }
    Ok(Outcome::from_check(bad.is_none(), json!({"p": p, "valuations": vals}), || {
        bad.unwrap()
    }))
}

/// `S_r = (-1)^r r! t^r (t-1)^{p-1-r}` modulo `(t-1)^{p-r}`.
pub fn verify_sr_congruence(p: u64) -> Result<Outcome> {
    odd_prime(p)?;
    let mut fact: i128 = 1;
    let mut bad = None;
    let mut checked = 0;
    for r in 0..p {
        if r > 0 {
            fact = fact * r as i128 % p as i128;
        }
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let rhs = PolyOverZpk::monomial(p, 1, sign * fact, r as usize)?
            .mul(&PolyOverZpk::t_minus_one_pow(p, 1, (p - 1 - r) as u32)?);
        let diff = power_sum_poly(r, p)?.sub(&rhs);
        let ok = match diff.t1_valuation() {
            Err(Error::InfiniteValuation) => true,
            Ok(v) => v as u64 >= p - r,
            Err(e) => return Err(e),
        };
        if r == 0 && !diff.is_zero() {
            bad.get_or_insert(json!({"r": 0, "reason": "S_0 differs from (t-1)^(p-1)"}));
        }
        if !ok {
            bad.get_or_insert(json!({"r": r, "difference": diff.coeffs()}));
        }
        checked += 1;
    }
    Ok(Outcome::from_check(bad.is_none(), json!({"p": p, "checked": checked}), || {
        bad.unwrap()
    }))
}

/// `S_r = S_{r+p-1}` and `S_{r+1} = t S_r'` for `1 <= r <= r_max`.
pub fn verify_sr_identities(p: u64, r_max: u64) -> Result<Outcome> {
    odd_prime(p)?;
    let t = PolyOverZpk::monomial(p, 1, 1, 1)?;
    let mut bad = None;
    for r in 1..=r_max {
        let s = power_sum_poly(r, p)?;
        if s != power_sum_poly(r + p - 1, p)? {
            bad = Some(json!({"r": r, "identity": "periodicity"}));
            break;
        }
        if power_sum_poly(r + 1, p)? != t.mul(&s.derivative()) {
            bad = Some(json!({"r": r, "identity": "derivative"}));
            break;
        }
    }
    Ok(Outcome::from_check(
        bad.is_none(),
        json!({"p": p, "r_max": r_max}),
        || bad.unwrap(),
    ))
}

/// `Q_phi(t) = sum_{n < p^N} phi(n) t^n`.
pub fn generating_poly(phi: &PeriodicMap) -> PolyOverZpk {
    PolyOverZpk::raw(phi.p(), phi.k(), phi.values().to_vec())
}

/// `deg phi <= g+1` iff `t^{p^N} - 1` divides `Q_phi (t-1)^{g+2}`; for
/// `k = 1` also iff `v(Q_phi) >= p^N - g - 2`.
pub fn verify_degree_divisibility(phi: &PeriodicMap, g: u32) -> Result<Outcome> {
    let (p, k) = (phi.p(), phi.k());
    let period = phi.period() as usize;
    let q_phi = generating_poly(phi);
    let degree = phi.degree();
    let low_degree = degree <= g as u64 + 1;
    let product = q_phi.mul(&PolyOverZpk::t_minus_one_pow(p, k, g + 2)?);
    let mut cyc = vec![0i128; period + 1];
    cyc[0] = -1;
    cyc[period] = 1;
    let divides = product.rem_monic(&PolyOverZpk::new(p, k, cyc)?)?.is_zero();
    let mut witness = json!({
        "degree": degree,
        "g": g,
        "divisible": divides,
    });
    let mut ok = low_degree == divides;
    if k == 1 {
        let threshold = period as i64 - g as i64 - 2;
        let (val, val_ok) = match q_phi.t1_valuation() {
            Ok(v) => (Some(v), v as i64 >= threshold),
            Err(Error::InfiniteValuation) => (None, true),
            Err(e) => return Err(e),
        };
        witness["valuation"] = json!(val);
        witness["valuation_threshold"] = json!(threshold);
        ok &= val_ok == low_degree;
    }
    Ok(Outcome::from_check(ok, witness.clone(), || witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i128]) -> PolyOverZpk {
        PolyOverZpk::new(p, 1, c.to_vec()).unwrap()
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum_poly(0, 3).unwrap(), poly(3, &[1, 1, 1]));
        assert_eq!(power_sum_poly(1, 3).unwrap(), poly(3, &[0, 1, 2]));
        assert_eq!(power_sum_poly(4, 5).unwrap().coeffs(), &[0, 1, 1, 1, 1]);
        assert_eq!(
            power_sum_poly(0, 3).unwrap(),
            PolyOverZpk::t_minus_one_pow(3, 1, 2).unwrap()
        );
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(PolyOverZpk::t_minus_one_pow(5, 1, 4).unwrap().t1_valuation(), Ok(4));
        assert_eq!(poly(3, &[0, 1, 2]).t1_valuation(), Ok(1));
        assert_eq!(poly(3, &[1, 0, 0, 1, 0, 0, 1]).t1_valuation(), Ok(6));
        assert_eq!(poly(3, &[]).t1_valuation(), Err(Error::InfiniteValuation));
        // derivatives cannot see multiplicity 6 in characteristic 3
        assert!(poly(3, &[1, 0, 0, 1, 0, 0, 1]).t1_valuation_by_derivatives().is_err());
    }

    #[test]
    fn lemma_val_and_congruence() {
        for p in [3, 5, 7, 11, 13] {
            assert_eq!(verify_lemma_val(p).unwrap().status, crate::Status::Pass);
            assert_eq!(verify_sr_congruence(p).unwrap().status, crate::Status::Pass);
            assert_eq!(verify_sr_identities(p, 3 * p).unwrap().status, crate::Status::Pass);
        }
        assert_eq!(power_sum_poly(0, 3).unwrap().t1_valuation(), Ok(2));
    }

    #[test]
    fn generating_poly_examples() {
        let ind = PeriodicMap::from_fn(3, 1, 2, |n| (n % 3 == 0) as i128).unwrap();
        assert_eq!(generating_poly(&ind), poly(3, &[1, 0, 0, 1, 0, 0, 1]));
        let id = PeriodicMap::from_fn(3, 1, 1, |n| n as i128).unwrap();
        assert_eq!(generating_poly(&id), power_sum_poly(1, 3).unwrap());
        assert!(generating_poly(&PeriodicMap::zero(3, 1, 2).unwrap()).is_zero());
    }

    #[test]
    fn divisibility_examples() {
        let mono = PeriodicMap::monomial(5, 1, 1, 2).unwrap();
        let o = verify_degree_divisibility(&mono, 2).unwrap();
        assert_eq!(o.status, crate::Status::Pass);
        let ind = PeriodicMap::from_fn(3, 1, 2, |n| (n % 3 == 0) as i128).unwrap();
        let o = verify_degree_divisibility(&ind, 1).unwrap();
        assert_eq!(o.witness["valuation"], 6);
        assert_eq!(o.witness["valuation_threshold"], 6);
    }
}
