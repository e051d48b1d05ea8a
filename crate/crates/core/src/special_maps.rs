//! Periodic maps `Z -> Z/p^k`, their difference degree, and the linear
//! conditions cutting out g-special and weakly special maps.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bounds::n_p_g;
use crate::error::{Error, Result};
use crate::report::{Outcome, Status};
use crate::residue::{checked_pow, is_prime, mod_pow};
use crate::zmod_linalg::{in_span_fp, kernel_fp, kernel_zpk, same_span_fp};

/// Default cap on the period `p^N` for kernel computations.
pub const DEFAULT_PERIOD_LIMIT: u64 = 125;
/// Kernels with more elements than this are not enumerated.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 1 << 16;
/// Hard cap on stored tables.
const MAX_PERIOD: u64 = 1 << 20;
const MAX_MODULUS: u64 = 1 << 31;

/// A map `Z -> Z/p^k` of period `p^N`, stored as its values on `0..p^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicMap {
    p: u64,
    k: u32,
    n: u32,
    values: Vec<u64>,
}

impl PeriodicMap {
    pub fn new(p: u64, k: u32, n: u32, values: Vec<i128>) -> Result<Self> {
        let (period, q) = validate_shape(p, k, n)?;
        if values.len() as u64 != period {
            return Err(Error::InvalidParameter(format!(
                "table has {} entries, period is {period}",
                values.len()
            )));
        }
        let values = values
            .into_iter()
            .map(|v| v.rem_euclid(q as i128) as u64)
            .collect();
        Ok(PeriodicMap { p, k, n, values })
    }

    pub fn from_fn(p: u64, k: u32, n: u32, f: impl Fn(u64) -> i128) -> Result<Self> {
        let (period, _) = validate_shape(p, k, n)?;
        Self::new(p, k, n, (0..period).map(f).collect())
    }

    pub fn zero(p: u64, k: u32, n: u32) -> Result<Self> {
        Self::from_fn(p, k, n, |_| 0)
    }

    /// `n -> n^g`, with `0^0 = 1`.
    pub fn monomial(p: u64, k: u32, n: u32, g: u32) -> Result<Self> {
        let q = validate_shape(p, k, n)?.1;
        Self::from_fn(p, k, n, |x| mod_pow(x, g as u64, q) as i128)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The `N` of the period `p^N`.
    pub fn period_exponent(&self) -> u32 {
        self.n
    }

    pub fn period(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.k)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn eval(&self, n: i128) -> u64 {
        self.values[n.rem_euclid(self.values.len() as i128) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn same_shape(&self, other: &Self) {
        assert!(
            self.p == other.p && self.k == other.k && self.n == other.n,
            "maps of different shape"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_shape(other);
        let q = self.modulus();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a + b) % q)
            .collect();
        self.with_values(values)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i128) -> Self {
        let q = self.modulus();
        let c = c.rem_euclid(q as i128) as u64;
        let values = self.values.iter().map(|v| v * c % q).collect();
        self.with_values(values)
    }

    fn with_values(&self, values: Vec<u64>) -> Self {
        PeriodicMap {
            p: self.p,
            k: self.k,
            n: self.n,
            values,
        }
    }

    /// `n -> phi(n+1) - phi(n)`.
    pub fn difference(&self) -> Self {
        let q = self.modulus();
        let len = self.values.len();
        let values = (0..len)
            .map(|i| (self.values[(i + 1) % len] + q - self.values[i]) % q)
            .collect();
        self.with_values(values)
    }

    /// Least `l` with `delta^(l+1) phi = 0`; the zero map has degree 0.
    pub fn degree(&self) -> u64 {
        let bound = self.k as u64 * self.period();
        let mut cur = self.clone();
        let mut l = 0u64;
        loop {
            cur = cur.difference();
            if cur.is_zero() {
                return l;
            }
            l += 1;
            assert!(l <= bound, "difference degree exceeds k*p^N");
        }
    }

    /// `n -> phi(n) - n^g phi(1)`.
    pub fn deviation_from_monomial(&self, g: u32) -> Self {
        let mono = PeriodicMap::monomial(self.p, self.k, self.n, g).expect("shape already valid");
        self.sub(&mono.scale(self.values[1 % self.values.len()] as i128))
    }

    /// Whether `p^e` kills every value.
    pub fn annihilated_by(&self, e: u32) -> bool {
        if e >= self.k {
            return true;
        }
        let q = self.modulus();
        let pe = self.p.pow(e);
        self.values.iter().all(|&v| (v * pe).is_multiple_of(q))
    }

    /// First index where `p^e * phi` is nonzero.
    fn first_survivor(&self, e: u32) -> Option<u64> {
        if e >= self.k {
            return None;
        }
        let q = self.modulus();
        let pe = self.p.pow(e);
        self.values
            .iter()
            .position(|&v| !(v * pe).is_multiple_of(q))
            .map(|i| i as u64)
    }
}

fn validate_shape(p: u64, k: u32, n: u32) -> Result<(u64, u64)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter("k and N must be >= 1".into()));
    }
    let period = checked_pow(p, n)?;
    let q = checked_pow(p, k)?;
    if period > MAX_PERIOD {
        return Err(Error::LimitExceeded {
            what: "period p^N",
            size: period as u128,
            limit: MAX_PERIOD as u128,
        });
    }
    if q > MAX_MODULUS {
        return Err(Error::LimitExceeded {
            what: "modulus p^k",
            size: q as u128,
            limit: MAX_MODULUS as u128,
        });
    }
    Ok((period, q))
}

/// Why a map fails to be (weakly) g-special.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Degree { degree: u64, bound: u64 },
    Scaling { n: u64, m: u64, lhs: u64, rhs: u64 },
    SquareValue { m: u64, lhs: u64, rhs: u64 },
}

/// A boolean answer with the offending data when it is `false`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub violation: Option<Violation>,
}

impl Verdict {
    fn from(violation: Option<Violation>) -> Self {
        Verdict {
            holds: violation.is_none(),
            violation,
        }
    }
}

/// Residues of `m` that matter: `m^2 n` depends on `m mod p^N` and `m^(2g)`
/// on `m mod p^k`.
fn multiplier_range(phi: &PeriodicMap) -> u64 {
    phi.p.pow(phi.n.max(phi.k))
}

fn scaling_violation(phi: &PeriodicMap, g: u32, n: u64, m: u64) -> Option<Violation> {
    let period = phi.period() as u128;
    let q = phi.modulus();
    let idx = ((m as u128 % period) * (m as u128 % period) % period * (n as u128 % period)
        % period) as i128;
    let lhs = phi.eval(idx);
    let rhs = (mod_pow(m % q, 2 * g as u64, q) as u128 * phi.eval(n as i128) as u128
        % q as u128) as u64;
    (lhs != rhs).then_some(Violation::Scaling { n, m, lhs, rhs })
}

fn degree_violation(phi: &PeriodicMap, g: u32) -> Option<Violation> {
    let degree = phi.degree();
    let bound = g as u64 + 1;
    (degree > bound).then_some(Violation::Degree { degree, bound })
}

/// Degree at most `g+1` and `phi(m^2 n) = m^(2g) phi(n)` for all `n, m`.
pub fn is_g_special(phi: &PeriodicMap, g: u32) -> Verdict {
    if let Some(v) = degree_violation(phi, g) {
        return Verdict::from(Some(v));
    }
    for m in 0..multiplier_range(phi) {
        for n in 0..phi.period() {
            if let Some(v) = scaling_violation(phi, g, n, m) {
                return Verdict::from(Some(v));
            }
        }
    }
    Verdict::from(None)
}

/// Degree at most `g+1` and `phi(m^2) = m^(2g) phi(1)` for `m` prime to `p`.
pub fn is_weakly_special(phi: &PeriodicMap, g: u32) -> Verdict {
    if let Some(v) = degree_violation(phi, g) {
        return Verdict::from(Some(v));
    }
    for m in (0..multiplier_range(phi)).filter(|m| m % phi.p != 0) {
        if let Some(Violation::Scaling { m, lhs, rhs, .. }) = scaling_violation(phi, g, 1, m) {
            return Verdict::from(Some(Violation::SquareValue { m, lhs, rhs }));
        }
    }
    Verdict::from(None)
}

/// Which family of maps a kernel describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    Special,
    Weak,
}

/// `(p, k, N, g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapParams {
    pub p: u64,
    pub k: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub g: u32,
}

impl MapParams {
    pub fn new(p: u64, k: u32, n: u32, g: u32) -> Result<Self> {
        validate_shape(p, k, n)?;
        if g == 0 {
            return Err(Error::InvalidParameter("g must be >= 1".into()));
        }
        Ok(MapParams { p, k, n, g })
    }
}

fn binomial_row(n: u32, q: u64) -> Vec<u64> {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = (row[i - 1] + row[i]) % q;
        }
        row = next;
    }
    row
}

/// Rows of the linear system (entries mod `p^k`, one column per table
/// entry) whose kernel is the requested family. Duplicate rows are removed.
pub fn linear_system(params: MapParams, condition: Condition) -> Result<Vec<Vec<u64>>> {
    let MapParams { p, k, n, g } = params;
    let (period, q) = validate_shape(p, k, n)?;
    let len = period as usize;
    let mut rows = BTreeSet::new();
    // delta^(g+2) phi (i) = sum_j (-1)^(g+2-j) C(g+2, j) phi(i+j)
    let binom = binomial_row(g + 2, q);
    for i in 0..len {
        let mut row = vec![0u64; len];
        for (j, &c) in binom.iter().enumerate() {
            let sign_neg = (g as usize + 2 - j) % 2 == 1;
            let c = if sign_neg { (q - c) % q } else { c };
            let col = (i + j) % len;
            row[col] = (row[col] + c) % q;
        }
        rows.insert(row);
    }
    let m_range = p.pow(n.max(k));
    for m in 0..m_range {
        if condition == Condition::Weak && m % p == 0 {
            continue;
        }
        let sq = (m as u128 * m as u128 % period as u128) as u64;
        let coef = mod_pow(m % q, 2 * g as u64, q);
        let ns: Vec<u64> = match condition {
            Condition::Special => (0..period).collect(),
            Condition::Weak => vec![1 % period],
        };
        for x in ns {
            let mut row = vec![0u64; len];
            let target = (sq as u128 * x as u128 % period as u128) as usize;
            row[target] = 1;
            row[x as usize] = (row[x as usize] + q - coef) % q;
            rows.insert(row);
        }
    }
    Ok(rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect())
}

/// Kernel of [`linear_system`] as a sum of cyclic submodules.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecialKernel {
    pub params: MapParams,
    pub condition: Condition,
    /// Generators with the `log_p` of their additive orders.
    pub generators: Vec<(PeriodicMap, u32)>,
}

impl SpecialKernel {
    pub fn size_exponent(&self) -> u32 {
        self.generators.iter().map(|(_, e)| e).sum()
    }

    pub fn size(&self) -> Option<u128> {
        (self.params.p as u128).checked_pow(self.size_exponent())
    }

    pub fn maps(&self) -> impl Iterator<Item = &PeriodicMap> {
        self.generators.iter().map(|(m, _)| m)
    }

    /// All elements, or `None` if there are more than `limit`.
    pub fn elements(&self, limit: u128) -> Option<Vec<PeriodicMap>> {
        let size = self.size()?;
        if size > limit {
            return None;
        }
        let MapParams { p, k, n, .. } = self.params;
        let mut out = vec![PeriodicMap::zero(p, k, n).ok()?];
        for (gen, e) in &self.generators {
            let order = p.pow(*e);
            let mut next = Vec::with_capacity(out.len() * order as usize);
            for base in &out {
                let mut cur = base.clone();
                for _ in 0..order {
                    next.push(cur.clone());
                    cur = cur.add(gen);
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.values.cmp(&b.values));
        Some(out)
    }
}

fn check_period_limit(params: MapParams, limit: u64) -> Result<()> {
    let period = params.p.pow(params.n);
    if period > limit {
        return Err(Error::LimitExceeded {
            what: "period p^N",
            size: period as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// Kernel of the requested family, via the Smith form over `Z/p^k`.
pub fn family_kernel(params: MapParams, condition: Condition, limit: u64) -> Result<SpecialKernel> {
    check_period_limit(params, limit)?;
    let MapParams { p, k, n, .. } = params;
    let rows = linear_system(params, condition)?;
    let len = p.pow(n) as usize;
    let kern = kernel_zpk(&rows, len, p, k)?;
    let generators = kern
        .generators
        .into_iter()
        .map(|g| {
            let values = g.vector.into_iter().map(|x| x as i128).collect();
            Ok((PeriodicMap::new(p, k, n, values)?, g.order_exponent))
        })
        .collect::<Result<_>>()?;
    Ok(SpecialKernel {
        params,
        condition,
        generators,
    })
}

/// The group of g-special maps with the default period limit.
pub fn special_kernel(p: u64, k: u32, n: u32, g: u32) -> Result<SpecialKernel> {
    family_kernel(MapParams::new(p, k, n, g)?, Condition::Special, DEFAULT_PERIOD_LIMIT)
}

/// The group of weakly special maps with the default period limit.
pub fn weak_kernel(p: u64, k: u32, n: u32, g: u32) -> Result<SpecialKernel> {
    family_kernel(MapParams::new(p, k, n, g)?, Condition::Weak, DEFAULT_PERIOD_LIMIT)
}

/// Null space over `F_p` by plain elimination (the `k = 1` cross-check).
pub fn special_kernel_fp(p: u64, n: u32, g: u32, condition: Condition) -> Result<Vec<PeriodicMap>> {
    let params = MapParams::new(p, 1, n, g)?;
    let rows = linear_system(params, condition)?;
    kernel_fp(&rows, p.pow(n) as usize, p)?
        .into_iter()
        .map(|v| PeriodicMap::new(p, 1, n, v.into_iter().map(|x| x as i128).collect()))
        .collect()
}

/// Whether the Smith-form kernel and the `F_p` elimination kernel coincide.
pub fn kernel_routes_agree(p: u64, n: u32, g: u32, condition: Condition) -> Result<bool> {
    let params = MapParams::new(p, 1, n, g)?;
    let a: Vec<Vec<u64>> = special_kernel_fp(p, n, g, condition)?
        .into_iter()
        .map(|m| m.values)
        .collect();
    let b: Vec<Vec<u64>> = family_kernel(params, condition, u64::MAX)?
        .generators
        .into_iter()
        .map(|(m, _)| m.values)
        .collect();
    Ok(same_span_fp(&a, &b, p.pow(n) as usize, p))
}

/// Knobs shared by the verifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub period_limit: u64,
    /// Random `(n, m)` re-checks per generator after a pass.
    pub spot_checks: u32,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            period_limit: DEFAULT_PERIOD_LIMIT,
            spot_checks: 1000,
            seed: 0,
        }
    }
}

/// The property a counterexample breaks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Predicate {
    /// `p^exponent (phi(n) - n^g phi(1)) = 0`.
    Annihilated { g: u32, exponent: u32 },
    /// `phi` lies in the `F_p`-span of the given monomials.
    InMonomialSpan { exponents: Vec<u32> },
    /// `phi(m^2 n) = m^(2g) phi(n)`.
    Scaling { g: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub map: PeriodicMap,
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub predicate: Predicate,
}

impl Counterexample {
    /// Re-evaluate the predicate from scratch; `true` means it still fails.
    pub fn revalidates(&self) -> bool {
        let phi = &self.map;
        match &self.predicate {
            Predicate::Annihilated { g, exponent } => {
                let Some(n) = self.n else { return false };
                let dev = phi.deviation_from_monomial(*g);
                let q = phi.modulus() as u128;
                let pe = (phi.p as u128).pow(*exponent);
                !(dev.eval(n as i128) as u128 * pe).is_multiple_of(q)
            }
            Predicate::InMonomialSpan { exponents } => {
                let basis = monomial_basis(phi.p, phi.n, exponents);
                !in_span_fp(&basis, &phi.values, phi.p)
            }
            Predicate::Scaling { g } => match (self.n, self.m) {
                (Some(n), Some(m)) => scaling_violation(phi, *g, n, m).is_some(),
                _ => false,
            },
        }
    }
}

fn monomial_basis(p: u64, n: u32, exponents: &[u32]) -> Vec<Vec<u64>> {
    exponents
        .iter()
        .map(|&e| {
            PeriodicMap::monomial(p, 1, n, e)
                .expect("shape validated by caller")
                .values
        })
        .collect()
}

/// Result of one of the lemma verifiers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecialityReport {
    pub params: MapParams,
    pub condition: Condition,
    pub kernel_generators: Vec<PeriodicMap>,
    pub kernel_size: u128,
    pub status: Status,
    /// Pass/fail as computed, before any hypothesis gate is applied.
    pub observed: Status,
    /// Set when the parameters lie outside the statement's hypotheses.
    pub hypothesis_failure: Option<String>,
    pub counterexample: Option<Counterexample>,
    pub spot_checks: u32,
}

impl SpecialityReport {
    pub fn to_outcome(&self) -> Outcome {
        let witness = json!({
            "kernel_size": self.kernel_size.to_string(),
            "kernel_generators": self.kernel_generators.iter().map(|m| m.values()).collect::<Vec<_>>(),
            "condition": self.condition,
            "spot_checks": self.spot_checks,
        });
        let out = Outcome::from_check(self.observed == Status::Pass, witness, || {
            serde_json::to_value(&self.counterexample).unwrap_or_default()
        });
        match &self.hypothesis_failure {
            Some(reason) => out.exploratory(reason),
            None => out,
        }
    }
}

fn spot_check(
    kernel: &SpecialKernel,
    opts: &VerifyOptions,
) -> Option<Counterexample> {
    let g = kernel.params.g;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for phi in kernel.maps() {
        for _ in 0..opts.spot_checks {
            let n: u64 = rng.gen_range(0..1_000_000);
            let m: u64 = rng.gen_range(0..1_000_000);
            match kernel.condition {
                Condition::Special => {
                    if scaling_violation(phi, g, n, m).is_some() {
                        return Some(Counterexample {
                            map: phi.clone(),
                            n: Some(n),
                            m: Some(m),
                            predicate: Predicate::Scaling { g },
                        });
                    }
                }
                Condition::Weak => {
                    if !m.is_multiple_of(phi.p) && scaling_violation(phi, g, 1, m).is_some() {
                        return Some(Counterexample {
                            map: phi.clone(),
                            n: Some(1),
                            m: Some(m),
                            predicate: Predicate::Scaling { g },
                        });
                    }
                }
            }
        }
    }
    None
}

fn finish(
    kernel: SpecialKernel,
    failure: Option<Counterexample>,
    hypothesis_failure: Option<String>,
    opts: &VerifyOptions,
) -> SpecialityReport {
    let (failure, spot_checks) = match failure {
        Some(c) => (Some(c), 0),
        None => (spot_check(&kernel, opts), opts.spot_checks),
    };
    let observed = if failure.is_some() {
        Status::Fail
    } else {
        Status::Pass
    };
    let status = if hypothesis_failure.is_some() {
        Status::HypothesisNotMet
    } else {
        observed
    };
    SpecialityReport {
        params: kernel.params,
        condition: kernel.condition,
        kernel_size: kernel.size().unwrap_or(u128::MAX),
        kernel_generators: kernel.generators.into_iter().map(|(m, _)| m).collect(),
        status,
        observed,
        hypothesis_failure,
        counterexample: failure,
        spot_checks,
    }
}

/// Checks on generators suffice: the deviation `phi - n^g phi(1)` is linear.
fn annihilation_check(
    kernel: SpecialKernel,
    exponent: u32,
    hypothesis_failure: Option<String>,
    opts: &VerifyOptions,
) -> SpecialityReport {
    let g = kernel.params.g;
    let failure = kernel.maps().find_map(|phi| {
        let dev = phi.deviation_from_monomial(g);
        dev.first_survivor(exponent).map(|n| Counterexample {
            map: phi.clone(),
            n: Some(n),
            m: None,
            predicate: Predicate::Annihilated { g, exponent },
        })
    });
    finish(kernel, failure, hypothesis_failure, opts)
}

fn gate(failures: Vec<&str>) -> Option<String> {
    (!failures.is_empty()).then(|| failures.join("; "))
}

/// Every g-special map is `n -> n^g phi(1)` (hypotheses `p >= 2g+1`, `p != 3`).
pub fn verify_lemma_ar1(p: u64, k: u32, n: u32, g: u32, opts: &VerifyOptions) -> Result<SpecialityReport> {
    let params = MapParams::new(p, k, n, g)?;
    let mut bad = Vec::new();
    if p < 2 * g as u64 + 1 {
        bad.push("needs p >= 2g+1");
    }
    if p == 3 {
        bad.push("needs p != 3");
    }
    let kernel = family_kernel(params, Condition::Special, opts.period_limit)?;
    Ok(annihilation_check(kernel, 0, gate(bad), opts))
}

/// Over `F_p`, g-special maps lie in the span of `n^g` and `n^(g-(p-1)/2)`.
pub fn verify_lemma_modp(p: u64, n: u32, g: u32, opts: &VerifyOptions) -> Result<SpecialityReport> {
    let params = MapParams::new(p, 1, n, g)?;
    let mut bad = Vec::new();
    if p <= 3 {
        bad.push("needs p > 3");
    }
    let half = (p - 1) / 2;
    if !(half < g as u64 && (g as u64) < 2 * p - 1) {
        bad.push("needs (p-1)/2 < g < 2p-1");
    }
    let kernel = family_kernel(params, Condition::Special, opts.period_limit)?;
    let mut exponents = vec![g];
    if g as u64 > half {
        exponents.push(g - half as u32);
    }
    let basis = monomial_basis(p, n, &exponents);
    let failure = kernel.maps().find_map(|phi| {
        (!in_span_fp(&basis, &phi.values, p)).then(|| Counterexample {
            map: phi.clone(),
            n: None,
            m: None,
            predicate: Predicate::InMonomialSpan {
                exponents: exponents.clone(),
            },
        })
    });
    Ok(finish(kernel, failure, gate(bad), opts))
}

/// `p (phi(n) - n^g phi(1)) = 0` for `k = N = 2`, `(p+1)/2 < g < (3p-1)/2`.
pub fn verify_lemma_modp2(p: u64, g: u32, opts: &VerifyOptions) -> Result<SpecialityReport> {
    let params = MapParams::new(p, 2, 2, g)?;
    let mut bad = Vec::new();
    if p <= 3 {
        bad.push("needs p > 3");
    }
    let g2 = 2 * g as u64;
    if !(p + 1 < g2 && g2 < 3 * p - 1) {
        bad.push("needs (p+1)/2 < g < (3p-1)/2");
    }
    let kernel = family_kernel(params, Condition::Special, opts.period_limit)?;
    Ok(annihilation_check(kernel, 1, gate(bad), opts))
}

/// `p (phi(n) - n^g phi(1)) = 0` for `p > 3`, `g < (3p-1)/2`, `g != (p+1)/2`.
pub fn verify_theorem_ar2(p: u64, k: u32, n: u32, g: u32, opts: &VerifyOptions) -> Result<SpecialityReport> {
    let params = MapParams::new(p, k, n, g)?;
    let mut bad = Vec::new();
    if p <= 3 {
        bad.push("needs p > 3");
    }
    let g2 = 2 * g as u64;
    if g2 >= 3 * p - 1 {
        bad.push("needs g < (3p-1)/2");
    }
    if g2 == p + 1 {
        bad.push("needs g != (p+1)/2");
    }
    let kernel = family_kernel(params, Condition::Special, opts.period_limit)?;
    Ok(annihilation_check(kernel, 1, gate(bad), opts))
}

/// `p^2 (phi(n) - n^g phi(1)) = 0` for `g = (p+1)/2`, `k <= 3`.
pub fn verify_p2_annihilation(p: u64, k: u32, n: u32, opts: &VerifyOptions) -> Result<SpecialityReport> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let g = p.div_ceil(2) as u32;
    let params = MapParams::new(p, k, n, g)?;
    let mut bad = Vec::new();
    if p <= 3 {
        bad.push("needs p > 3");
    }
    if k > 3 {
        bad.push("needs k <= 3");
    }
    let kernel = family_kernel(params, Condition::Special, opts.period_limit)?;
    Ok(annihilation_check(kernel, 2, gate(bad), opts))
}

/// `p^n(p,g) (f(n) - n^g f(1)) = 0` for weakly special `f`.
pub fn verify_weak_proposition(p: u64, k: u32, n: u32, g: u32, opts: &VerifyOptions) -> Result<SpecialityReport> {
    let params = MapParams::new(p, k, n, g)?;
    let exponent = n_p_g(p, g)?;
    let kernel = family_kernel(params, Condition::Weak, opts.period_limit)?;
    Ok(annihilation_check(kernel, exponent, None, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_examples() {
        let c = PeriodicMap::from_fn(5, 1, 1, |_| 3).unwrap();
        assert!(c.difference().is_zero());
        let id = PeriodicMap::from_fn(5, 1, 1, |n| n as i128).unwrap();
        assert_eq!(id.difference().values(), &[1, 1, 1, 1, 1]);
        let ind = PeriodicMap::from_fn(3, 1, 2, |n| (n % 3 == 0) as i128).unwrap();
        assert_eq!(ind.difference().values(), &[2, 0, 1, 2, 0, 1, 2, 0, 1]);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(PeriodicMap::zero(5, 1, 1).unwrap().degree(), 0);
        let id = PeriodicMap::from_fn(5, 1, 1, |n| n as i128).unwrap();
        assert_eq!(id.degree(), 1);
        let ind = PeriodicMap::from_fn(3, 1, 2, |n| (n % 3 == 0) as i128).unwrap();
        assert_eq!(ind.degree(), 2);
        assert!(!ind.difference().difference().is_zero());
    }

    #[test]
    fn special_predicates() {
        for (p, g) in [(5, 2), (7, 3), (11, 2)] {
            let mono = PeriodicMap::monomial(p, 1, 1, g).unwrap();
            assert!(is_g_special(&mono, g).holds);
            assert!(is_weakly_special(&mono, g).holds);
        }
        assert!(is_g_special(&PeriodicMap::zero(5, 1, 2).unwrap(), 2).holds);
        let shifted = PeriodicMap::from_fn(5, 1, 1, |n| (n * n) as i128 + 1).unwrap();
        let v = is_g_special(&shifted, 2);
        assert!(!v.holds);
        match v.violation.unwrap() {
            Violation::Scaling { n, m, .. } => {
                assert!(scaling_violation(&shifted, 2, n, m).is_some())
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kernel_example_sizes() {
        let k = special_kernel(5, 1, 2, 2).unwrap();
        assert_eq!(k.size(), Some(5));
        let k = special_kernel(7, 1, 1, 3).unwrap();
        let mono = PeriodicMap::monomial(7, 1, 1, 3).unwrap();
        let all = k.elements(1 << 16).unwrap();
        assert!(all.contains(&mono));
        assert!(kernel_routes_agree(5, 2, 2, Condition::Special).unwrap());
        assert!(kernel_routes_agree(3, 2, 1, Condition::Special).unwrap());
    }

    #[test]
    fn lemma_examples() {
        let o = VerifyOptions::default();
        assert_eq!(verify_lemma_ar1(5, 1, 2, 2, &o).unwrap().status, Status::Pass);
        let r = verify_lemma_ar1(3, 1, 2, 1, &o).unwrap();
        assert_eq!(r.status, Status::HypothesisNotMet);
        assert_eq!(verify_lemma_modp(5, 2, 3, &o).unwrap().status, Status::Pass);
        assert_eq!(verify_lemma_modp2(5, 4, &o).unwrap().status, Status::Pass);
    }
}
