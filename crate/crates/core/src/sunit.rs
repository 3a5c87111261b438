//! Arithmetic in rings of S-integers `Z[S⁻¹]`: valuations, unit classes
//! modulo n-th powers (Kummer classes `H¹(R, μₙ) ≅ R^×/(R^×)ⁿ`) and
//! n-th-power tests for principal ideals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, WorkLimits};
use crate::error::{Error, Result};
use crate::scalar::{pow, Int};

/// The ring `Z[S⁻¹]` for a finite set `S` of primes, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "", try_from = "Vec<String>", into = "Vec<String>")]
pub struct SRing<T: Int> {
    primes: Vec<T>,
}

impl<T: Int> SRing<T> {
    /// Sorts and deduplicates; every entry must be a positive prime.
    pub fn new(mut primes: Vec<T>) -> Result<Self> {
        primes.sort();
        primes.dedup();
        if let Some(bad) = primes.iter().find(|p| !is_prime(*p)) {
            return Err(Error::NotPrime(bad.to_string()));
        }
        Ok(SRing { primes })
    }

    /// The ring `Z`.
    pub fn integers() -> Self {
        SRing { primes: Vec::new() }
    }

    pub fn primes(&self) -> &[T] {
        &self.primes
    }

    pub fn inverts(&self, p: &T) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    /// Divides every prime of `S` out of `s`, returning the part of `s`
    /// supported away from `S` (sign preserved).
    pub fn strip_units(&self, s: &T) -> T {
        let mut rest = s.clone();
        for p in &self.primes {
            if rest.is_zero() {
                break;
            }
            while (rest.clone() % p.clone()).is_zero() {
                rest = rest / p.clone();
            }
        }
        rest
    }

    /// Whether the nonzero integer `x` is a unit of `Z[S⁻¹]`.
    pub fn is_unit(&self, x: &T) -> bool {
        !x.is_zero() && self.strip_units(x).abs().is_one()
    }

    /// Is `S` a subset of `other`'s prime set?
    pub fn is_subring_of(&self, other: &SRing<T>) -> bool {
        self.primes.iter().all(|p| other.inverts(p))
    }

    pub fn union(&self, other: &SRing<T>) -> SRing<T> {
        let mut primes = self.primes.clone();
        primes.extend(other.primes.iter().cloned());
        primes.sort();
        primes.dedup();
        SRing { primes }
    }
}

impl<T: Int> TryFrom<Vec<String>> for SRing<T> {
    type Error = Error;

    fn try_from(items: Vec<String>) -> Result<Self> {
        let primes = items
            .iter()
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| Error::InvalidInput(format!("bad prime {s:?}: {e}")))
            })
            .collect::<Result<Vec<T>>>()?;
        SRing::new(primes)
    }
}

impl<T: Int> From<SRing<T>> for Vec<String> {
    fn from(r: SRing<T>) -> Self {
        r.primes.iter().map(ToString::to_string).collect()
    }
}

impl<T: Int> fmt::Display for SRing<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primes.is_empty() {
            return write!(f, "Z");
        }
        let inv: Vec<String> = self.primes.iter().map(|p| format!("1/{p}")).collect();
        write!(f, "Z[{}]", inv.join(", "))
    }
}

/// Largest `e` with `p^e | s`.
pub fn valuation<T: Int>(s: &T, p: &T) -> u32 {
    assert!(!s.is_zero(), "valuation of zero");
    let mut rest = s.clone();
    let mut e = 0;
    while (rest.clone() % p.clone()).is_zero() {
        rest = rest / p.clone();
        e += 1;
    }
    e
}

/// Representatives of `R^×/(R^×)ⁿ` in the canonical form
/// `ε · ∏ p^{e_p}` with `0 <= e_p < n` and `ε = ±1` only when `n` is even.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct UnitClassGroup<T: Int> {
    #[serde(with = "crate::decimal::display")]
    pub modulus: u32,
    pub ring: SRing<T>,
    #[serde(with = "crate::decimal::seq")]
    pub representatives: Vec<T>,
}

impl<T: Int> UnitClassGroup<T> {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// The canonical representative of the class of the unit `u`.
    pub fn class_of(&self, u: &T) -> Result<T> {
        unit_class_rep(u, self.modulus, &self.ring)
    }

    /// Whether `u / v` is an n-th power of a unit.
    pub fn equivalent(&self, u: &T, v: &T) -> Result<bool> {
        Ok(self.class_of(u)? == self.class_of(v)?)
    }
}

/// Canonical representative of the class of the unit `u` in `R^×/(R^×)ⁿ`.
pub fn unit_class_rep<T: Int>(u: &T, n: u32, ring: &SRing<T>) -> Result<T> {
    if !ring.is_unit(u) {
        return Err(Error::InvalidInput(format!("{u} is not a unit of {ring}")));
    }
    let mut rep = if u.is_negative() && n % 2 == 0 {
        -T::one()
    } else {
        T::one()
    };
    for p in ring.primes() {
        rep = rep * pow(p, valuation(u, p) % n);
    }
    Ok(rep)
}

pub fn s_unit_reps<T: Int>(ring: &SRing<T>, n: u32) -> UnitClassGroup<T> {
    assert!(n >= 2, "unit classes need n >= 2");
    let mut positive = vec![T::one()];
    for p in ring.primes() {
        let powers: Vec<T> = (0..n).map(|e| pow(p, e)).collect();
        positive = positive
            .iter()
            .flat_map(|r| powers.iter().map(move |q| r.clone() * q.clone()))
            .collect();
    }
    let mut representatives = positive.clone();
    if n % 2 == 0 {
        representatives.extend(positive.into_iter().map(|r| -r));
    }
    UnitClassGroup {
        modulus: n,
        ring: ring.clone(),
        representatives,
    }
}

/// If the ideal `s·Z[S⁻¹]` is an n-th power `Jⁿ`, returns the positive
/// generator of `J` supported away from `S`.
pub fn is_nth_power_ideal<T: Int>(
    s: &T,
    n: u32,
    ring: &SRing<T>,
    limits: &WorkLimits,
) -> Result<Option<T>> {
    if s.is_zero() {
        return Err(Error::InvalidInput("the zero ideal has no root".into()));
    }
    assert!(n >= 1, "root exponent must be positive");
    let rest = ring.strip_units(s).abs();
    if rest.is_one() {
        return Ok(Some(T::one()));
    }
    let fact = factorize(&rest, limits)?;
    let mut root = T::one();
    for (p, e) in &fact.factors {
        if e % n != 0 {
            return Ok(None);
        }
        root = root * pow(p, e / n);
    }
    Ok(Some(root))
}
