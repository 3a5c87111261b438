//! Exact integer helpers: lcm of a triple, factorization, perfect powers and
//! canonical points of the projective line over Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{pow, Int};

/// `lcm(a, b, c)` computed as `abc / gcd(bc, ac, ab)`.
pub fn lcm_triple<T: Int>(a: &T, b: &T, c: &T) -> T {
    let ab = a.clone() * b.clone();
    let m = (b.clone() * c.clone())
        .gcd(&(a.clone() * c.clone()))
        .gcd(&ab);
    ab * c.clone() / m
}

/// Effort caps for factorization.
///
/// The defaults handle anything up to roughly 30 decimal digits with small
/// cofactors comfortably; larger inputs may hit the rho cap and report
/// [`Error::WorkLimitExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkLimits {
    /// Trial division covers primes below this bound.
    pub trial_bound: u64,
    /// Total iterations of the rho walk across all restarts.
    pub rho_iterations: u64,
    /// Inputs wider than this are refused outright.
    pub max_bits: u64,
    pub seed: u64,
}

impl Default for WorkLimits {
    fn default() -> Self {
        WorkLimits {
            trial_bound: 10_000,
            rho_iterations: 4_000_000,
            max_bits: 512,
            seed: 0x5eed_f00d_1234_abcd,
        }
    }
}

/// `sign * prod p^e` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Factorization<T: Int> {
    #[serde(with = "crate::decimal::display")]
    pub sign: i8,
    #[serde(with = "factor_list")]
    pub factors: Vec<(T, u32)>,
}

impl<T: Int> Factorization<T> {
    pub fn product(&self) -> T {
        let mag = self
            .factors
            .iter()
            .fold(T::one(), |acc, (p, e)| acc * pow(p, *e));
        if self.sign < 0 {
            -mag
        } else {
            mag
        }
    }

    pub fn primes(&self) -> impl Iterator<Item = &T> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &T) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

impl<T: Int> fmt::Display for Factorization<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.sign < 0 { "-1" } else { "1" })?;
        for (p, e) in &self.factors {
            if *e == 1 {
                write!(f, " * {p}")?;
            } else {
                write!(f, " * {p}^{e}")?;
            }
        }
        Ok(())
    }
}

mod factor_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        prime: String,
        #[serde(with = "crate::decimal::display")]
        exponent: u32,
    }

    pub fn serialize<T: Int, S: Serializer>(xs: &[(T, u32)], s: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<Entry> = xs
            .iter()
            .map(|(p, e)| Entry {
                prime: p.to_string(),
                exponent: *e,
            })
            .collect();
        entries.serialize(s)
    }

    pub fn deserialize<'de, T: Int, D: Deserializer<'de>>(d: D) -> Result<Vec<(T, u32)>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| {
                e.prime
                    .parse::<T>()
                    .map(|p| (p, e.exponent))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// Factors a nonzero integer into primes.
///
/// Trial division up to `limits.trial_bound`, then Brent's variant of
/// Pollard rho from a seeded generator, so failures are reproducible.
pub fn factorize<T: Int>(n: &T, limits: &WorkLimits) -> Result<Factorization<T>> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let big = n.to_bigint();
    if big.bits() > limits.max_bits {
        return Err(Error::WorkLimitExceeded {
            value: n.to_string(),
        });
    }
    let mut primes = factor_big(&big.abs(), limits).map_err(|_| Error::WorkLimitExceeded {
        value: n.to_string(),
    })?;
    primes.sort();
    let mut factors: Vec<(T, u32)> = Vec::new();
    for p in primes {
        let p = T::from_bigint(&p).expect("prime divisors fit the input type");
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization {
        sign: if n.is_negative() { -1 } else { 1 },
        factors,
    })
}

struct Exhausted;

/// Prime factors of `n > 0` with multiplicity, unsorted.
fn factor_big(n: &BigInt, limits: &WorkLimits) -> Result<Vec<BigInt>, Exhausted> {
    let mut out = Vec::new();
    let mut rest = n.clone();
    if let Some(small) = rest.to_u128() {
        let (found, cofactor) = trial_divide_u128(small, limits.trial_bound);
        out.extend(found.into_iter().map(BigInt::from));
        rest = BigInt::from(cofactor);
    } else {
        let mut p = 2u64;
        while p < limits.trial_bound {
            let bp = BigInt::from(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
                out.push(bp.clone());
            }
            p += if p == 2 { 1 } else { 2 };
        }
    }
    if rest.is_one() {
        return Ok(out);
    }
    let tb = BigInt::from(limits.trial_bound);
    if rest < &tb * &tb {
        out.push(rest);
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
    let mut budget = limits.rho_iterations;
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            out.push(m);
            continue;
        }
        let d = match m.to_u64() {
            Some(small) => split_u64(small, &mut rng, &mut budget).map(BigInt::from),
            None => split(&m, &mut rng, &mut budget),
        }
        .ok_or(Exhausted)?;
        stack.push(&m / &d);
        stack.push(d);
    }
    Ok(out)
}

fn trial_divide_u128(mut n: u128, bound: u64) -> (Vec<u128>, u128) {
    let mut found = Vec::new();
    let mut p: u128 = 2;
    while p < bound as u128 && p * p <= n {
        while n % p == 0 {
            n /= p;
            found.push(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 && p * p > n {
        found.push(n);
        n = 1;
    }
    (found, n)
}

/// A nontrivial divisor of the composite `n`, or `None` once the budget is spent.
fn split(n: &BigInt, rng: &mut ChaCha8Rng, budget: &mut u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    if let Some(r) = perfect_power_base(n) {
        return Some(r);
    }
    const BATCH: u64 = 128;
    while *budget > 0 {
        let c = BigInt::from(rng.gen_range(1u64..u64::MAX)) % n;
        let mut y = BigInt::from(rng.gen::<u64>()) % n;
        let step = |v: &BigInt| (v * v + &c) % n;
        let mut g = BigInt::one();
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() && *budget > 0 {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let lim = BATCH.min(r - k);
                for _ in 0..lim {
                    y = step(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                *budget = budget.saturating_sub(lim);
                g = q.gcd(n);
                k += lim;
            }
            r *= 2;
        }
        if &g == n {
            // the batch overshot; replay one step at a time
            loop {
                ys = step(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
    }
    None
}

/// [`split`] in machine words.
fn split_u64(n: u64, rng: &mut ChaCha8Rng, budget: &mut u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    if let Some(r) = perfect_power_base(&BigInt::from(n)) {
        return r.to_u64();
    }
    const BATCH: u64 = 128;
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    while *budget > 0 {
        let c = rng.gen_range(1..n);
        let step = |v: u64| ((mulmod(v, v) as u128 + c as u128) % n as u128) as u64;
        let mut y = rng.gen_range(0..n);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let (mut x, mut ys) = (y, y);
        while g == 1 && *budget > 0 {
            x = y;
            for _ in 0..r {
                y = step(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let lim = BATCH.min(r - k);
                for _ in 0..lim {
                    y = step(y);
                    q = mulmod(q, x.abs_diff(y));
                }
                *budget = budget.saturating_sub(lim);
                g = q.gcd(&n);
                k += lim;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = step(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
    }
    None
}

fn perfect_power_base(n: &BigInt) -> Option<BigInt> {
    (2..=n.bits() as u32).find_map(|k| {
        let r = n.nth_root(k);
        (r > BigInt::one() && pow(&r, k) == *n).then_some(r)
    })
}

const SMALL_PRIMES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first thirteen prime bases, which is deterministic
/// below 3.3 * 10^24 and a strong probable-prime test above that.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in SMALL_PRIMES {
        let bp = BigInt::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for a in SMALL_PRIMES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn is_prime<T: Int>(n: &T) -> bool {
    is_probable_prime(&n.to_bigint())
}

/// The `n`-th root of `v` when `v` is a perfect `n`-th power.
///
/// Even exponents require `v >= 0` and return the nonnegative root.
pub fn perfect_nth_root<T: Int>(v: &T, n: u32) -> Option<T> {
    assert!(n >= 1, "root exponent must be positive");
    if n == 1 {
        return Some(v.clone());
    }
    if v.is_negative() && n % 2 == 0 {
        return None;
    }
    let mag = v.abs();
    let r = mag.nth_root(n);
    if pow(&r, n) != mag {
        return None;
    }
    Some(if v.is_negative() { -r } else { r })
}

/// A point of P^1(Q) in canonical form: coprime integers with `t > 0`, or
/// `(1:0)` for the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawPoint<T>", into = "RawPoint<T>")]
pub struct ProjPoint<T: Int> {
    s: T,
    t: T,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RawPoint<T: Int> {
    #[serde(with = "crate::decimal")]
    s: T,
    #[serde(with = "crate::decimal")]
    t: T,
}

impl<T: Int> TryFrom<RawPoint<T>> for ProjPoint<T> {
    type Error = Error;

    fn try_from(raw: RawPoint<T>) -> Result<Self> {
        ProjPoint::new(raw.s, raw.t)
    }
}

impl<T: Int> From<ProjPoint<T>> for RawPoint<T> {
    fn from(p: ProjPoint<T>) -> Self {
        RawPoint { s: p.s, t: p.t }
    }
}

impl<T: Int> ProjPoint<T> {
    /// Normalizes `(s : t)`; fails only on `(0, 0)`.
    pub fn new(s: T, t: T) -> Result<Self> {
        if s.is_zero() && t.is_zero() {
            return Err(Error::ZeroPoint);
        }
        let g = s.gcd(&t);
        let (mut s, mut t) = (s / g.clone(), t / g);
        if t.is_negative() || (t.is_zero() && s.is_negative()) {
            s = -s;
            t = -t;
        }
        Ok(ProjPoint { s, t })
    }

    pub fn zero() -> Self {
        ProjPoint {
            s: T::zero(),
            t: T::one(),
        }
    }

    pub fn one() -> Self {
        ProjPoint {
            s: T::one(),
            t: T::one(),
        }
    }

    pub fn infinity() -> Self {
        ProjPoint {
            s: T::one(),
            t: T::zero(),
        }
    }

    pub fn s(&self) -> &T {
        &self.s
    }

    pub fn t(&self) -> &T {
        &self.t
    }

    pub fn is_infinity(&self) -> bool {
        self.t.is_zero()
    }
}

impl<T: Int> fmt::Display for ProjPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.s, self.t)
    }
}

/// See [`ProjPoint::new`].
pub fn normalize_projective<T: Int>(s: T, t: T) -> Result<ProjPoint<T>> {
    ProjPoint::new(s, t)
}

/// Generator `|ad - bc|` of the ideal where `P = (c:d)` and `Q = (a:b)` meet.
pub fn intersection_ideal<T: Int>(p: &ProjPoint<T>, q: &ProjPoint<T>) -> T {
    let det = q.s.clone() * p.t.clone() - q.t.clone() * p.s.clone();
    det.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_triple(&2i64, &3, &7), 42);
        assert_eq!(lcm_triple(&1i64, &1, &1), 1);
        assert_eq!(lcm_triple(&4i64, &4, &2), 4);
        assert_eq!(lcm_triple(&big(6), &big(10), &big(15)), big(30));
    }

    #[test]
    fn factorize_examples() {
        let lim = WorkLimits::default();
        let f = factorize(&42i64, &lim).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(2, 1), (3, 1), (7, 1)]);

        let f = factorize(&-8i64, &lim).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.factors, vec![(2, 3)]);

        let f = factorize(&1i64, &lim).unwrap();
        assert_eq!(f.sign, 1);
        assert!(f.factors.is_empty());

        assert!(factorize(&0i64, &lim).is_err());
    }

    #[test]
    fn factorize_needs_rho() {
        // product of two primes above the trial bound
        let p = big(1_000_003);
        let q = big(998_244_353);
        let n = &p * &q * &p;
        let f = factorize(&n, &WorkLimits::default()).unwrap();
        assert_eq!(f.factors, vec![(p.clone(), 2), (q.clone(), 1)]);
        assert_eq!(f.product(), n);

        let big_semi: BigInt = "1000000000000000000117".parse::<BigInt>().unwrap()
            * "1000000000039".parse::<BigInt>().unwrap();
        let f = factorize(&big_semi, &WorkLimits::default()).unwrap();
        assert_eq!(f.product(), big_semi);
        assert_eq!(f.factors.len(), 2);
    }

    #[test]
    fn factorize_respects_work_cap() {
        let n = big(1_000_003) * big(998_244_353);
        let starved = WorkLimits {
            rho_iterations: 1,
            ..WorkLimits::default()
        };
        assert!(matches!(
            factorize(&n, &starved),
            Err(Error::WorkLimitExceeded { .. })
        ));
        let narrow = WorkLimits {
            max_bits: 8,
            ..WorkLimits::default()
        };
        assert!(matches!(
            factorize(&big(1000), &narrow),
            Err(Error::WorkLimitExceeded { .. })
        ));
    }

    #[test]
    fn primality() {
        let primes: Vec<i64> = (0..200).filter(|n| is_prime(n)).collect();
        let sieve: Vec<i64> = (2..200)
            .filter(|n| (2..*n).take_while(|d| d * d <= *n).all(|d| n % d != 0))
            .collect();
        assert_eq!(primes, sieve);
        assert!(is_prime(&big(998_244_353)));
        // strong pseudoprime to several small bases
        assert!(!is_prime(&big(3_215_031_751)));
    }

    #[test]
    fn normalize_examples() {
        let p = ProjPoint::new(-9i64, -1).unwrap();
        assert_eq!((p.s(), p.t()), (&9, &1));
        let p = ProjPoint::new(4i64, 6).unwrap();
        assert_eq!((p.s(), p.t()), (&2, &3));
        let p = ProjPoint::new(-3i64, 0).unwrap();
        assert_eq!(p, ProjPoint::infinity());
        assert_eq!(ProjPoint::new(0i64, -5).unwrap(), ProjPoint::zero());
        assert_eq!(ProjPoint::<i64>::new(0, 0), Err(Error::ZeroPoint));
    }

    #[test]
    fn intersection_examples() {
        let q = ProjPoint::new(-7i64, 3).unwrap();
        assert_eq!(intersection_ideal(&ProjPoint::zero(), &q), 7);
        let one = ProjPoint::<i64>::one();
        assert_eq!(intersection_ideal(&one, &one), 0);
        let q = ProjPoint::new(3i64, 1).unwrap();
        assert_eq!(intersection_ideal(&ProjPoint::infinity(), &q), 1);
    }

    #[test]
    fn perfect_power_examples() {
        assert_eq!(perfect_nth_root(&16i64, 4), Some(2));
        assert_eq!(perfect_nth_root(&4i64, 4), None);
        assert_eq!(perfect_nth_root(&-8i64, 3), Some(-2));
        assert_eq!(perfect_nth_root(&-16i64, 4), None);
        assert_eq!(perfect_nth_root(&0i64, 5), Some(0));
        assert_eq!(perfect_nth_root(&-7i64, 1), Some(-7));
    }

    #[test]
    fn projpoint_json_uses_strings() {
        let p = ProjPoint::new(big(-9), big(-1)).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"s":"9","t":"1"}"#);
        let back: ProjPoint<BigInt> = serde_json::from_str(r#"{"s":"-4","t":"-6"}"#).unwrap();
        assert_eq!(back, ProjPoint::new(big(2), big(3)).unwrap());
        assert!(serde_json::from_str::<ProjPoint<BigInt>>(r#"{"s":"0","t":"0"}"#).is_err());
    }
}
