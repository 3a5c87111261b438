//! Parsers for the textual argument formats.

use fermat_descent::{Error, IntMatrixZ, Integer, ProjPointQ, Rational, Result, SRingZ};
use num_bigint::BigInt;

pub fn integer(text: &str) -> Result<Integer> {
    text.trim()
        .parse::<BigInt>()
        .map_err(|_| Error::InvalidInput(format!("not an integer: {text:?}")))
}

pub fn integers(text: &str) -> Result<Vec<Integer>> {
    text.split(',').map(integer).collect()
}

pub fn triple(text: &str, what: &str) -> Result<[Integer; 3]> {
    integers(text)?
        .try_into()
        .map_err(|_| Error::InvalidInput(format!("{what} needs three comma-separated integers")))
}

/// Rows separated by `;`, entries by `,`.
pub fn matrix(text: &str) -> Result<IntMatrixZ> {
    let rows = text
        .split(';')
        .map(integers)
        .collect::<Result<Vec<_>>>()?;
    IntMatrixZ::from_rows(rows)
}

/// Comma-separated primes; the empty string is `Z`.
pub fn ring(text: &str) -> Result<SRingZ> {
    if text.trim().is_empty() {
        return Ok(SRingZ::integers());
    }
    let primes = integers(text)?;
    if let Some(p) = primes.iter().find(|p| **p < BigInt::from(2)) {
        return Err(Error::NotPrime(p.to_string()));
    }
    SRingZ::new(primes)
}

/// `s/t`, `s:t`, or a bare integer `s` meaning `(s:1)`; `inf` is `(1:0)`.
pub fn point(text: &str) -> Result<ProjPointQ> {
    let t = text.trim();
    if matches!(t, "inf" | "infinity" | "oo") {
        return Ok(ProjPointQ::infinity());
    }
    let (s, d) = match t.split_once(['/', ':']) {
        Some((s, d)) => (integer(s)?, integer(d)?),
        None => (integer(t)?, BigInt::from(1)),
    };
    ProjPointQ::new(s, d)
}

/// `n/d` or `n`.
pub fn rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let d = integer(d)?;
            if d == BigInt::from(0) {
                return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(integer(n)?, d))
        }
        None => Ok(Rational::from_integer(integer(t)?)),
    }
}
