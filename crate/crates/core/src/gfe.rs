//! Generalized Fermat equations `A x^a + B y^b + C z^c = 0`: bad primes,
//! bounded enumeration of primitive solutions, the j-map to `P¹` and the
//! correspondence between solutions and points of the Belyi stack.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, perfect_nth_root, ProjPoint, WorkLimits};
use crate::error::{Error, Result};
use crate::group::Signature;
use crate::scalar::{convert, pow, Int};
use crate::stack::{is_stack_point, MarkedPoint, StackPointCertificate, StackPointStatus};
use crate::sunit::{unit_class_rep, valuation, SRing};

/// `A x^a + B y^b + C z^c = 0` with `ABC ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawGfe<T>", into = "RawGfe<T>")]
pub struct Gfe<T: Int> {
    sig: Signature,
    coeffs: [T; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RawGfe<T: Int> {
    signature: Signature,
    #[serde(with = "crate::decimal::triple")]
    coefficients: [T; 3],
}

impl<T: Int> TryFrom<RawGfe<T>> for Gfe<T> {
    type Error = Error;

    fn try_from(raw: RawGfe<T>) -> Result<Self> {
        Gfe::new(raw.signature, raw.coefficients)
    }
}

impl<T: Int> From<Gfe<T>> for RawGfe<T> {
    fn from(f: Gfe<T>) -> Self {
        RawGfe {
            signature: f.sig,
            coefficients: f.coeffs,
        }
    }
}

impl<T: Int> Gfe<T> {
    pub fn new(sig: Signature, coeffs: [T; 3]) -> Result<Self> {
        if coeffs.iter().any(Zero::is_zero) {
            return Err(Error::ZeroCoefficient);
        }
        Ok(Gfe { sig, coeffs })
    }

    /// `x^a + y^b + z^c = 0`
    pub fn unit(sig: Signature) -> Self {
        Gfe {
            sig,
            coeffs: [T::one(), T::one(), T::one()],
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn coefficients(&self) -> &[T; 3] {
        &self.coeffs
    }

    /// `A x^a + B y^b + C z^c`
    pub fn evaluate(&self, xyz: &[T; 3]) -> T {
        evaluate_with(&self.coeffs, &self.sig, xyz)
    }
}

fn evaluate_with<T: Int>(coeffs: &[T; 3], sig: &Signature, xyz: &[T; 3]) -> T {
    (0..3).fold(T::zero(), |acc, i| {
        acc + coeffs[i].clone() * pow(&xyz[i], sig.exponents()[i])
    })
}

impl<T: Int> fmt::Display for Gfe<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = ["x", "y", "z"];
        for (i, (c, e)) in self.coeffs.iter().zip(self.sig.exponents()).enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                _ => write!(f, " {sign} ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "{}^{e}", vars[i])?;
        }
        write!(f, " = 0")
    }
}

/// An integer solution with `gcd(x, y, z) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound = "", try_from = "Vec<String>", into = "Vec<String>")]
pub struct PrimitiveSolution<T: Int> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Int> PrimitiveSolution<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        PrimitiveSolution { x, y, z }
    }

    pub fn triple(&self) -> [T; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn is_primitive(&self) -> bool {
        self.x.gcd(&self.y).gcd(&self.z).is_one()
    }
}

impl<T: Int> fmt::Display for PrimitiveSolution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl<T: Int> TryFrom<Vec<String>> for PrimitiveSolution<T> {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        let parsed = v
            .iter()
            .map(|s| {
                s.parse::<T>()
                    .map_err(|e| Error::InvalidInput(format!("bad integer {s:?}: {e}")))
            })
            .collect::<Result<Vec<T>>>()?;
        let [x, y, z]: [T; 3] = parsed
            .try_into()
            .map_err(|_| Error::InvalidInput("a solution has three coordinates".into()))?;
        let sol = PrimitiveSolution { x, y, z };
        if !sol.is_primitive() {
            return Err(Error::InvalidInput(format!("{sol} is not primitive")));
        }
        Ok(sol)
    }
}

impl<T: Int> From<PrimitiveSolution<T>> for Vec<String> {
    fn from(s: PrimitiveSolution<T>) -> Self {
        vec![s.x.to_string(), s.y.to_string(), s.z.to_string()]
    }
}

/// Primes dividing `abc·ABC`.
pub fn bad_prime_set<T: Int>(f: &Gfe<T>, limits: &WorkLimits) -> Result<SRing<T>> {
    let mut primes = Vec::new();
    for e in f.sig.exponents() {
        primes.extend(factorize(&T::small(e), limits)?.factors.into_iter().map(|(p, _)| p));
    }
    for c in &f.coeffs {
        primes.extend(factorize(c, limits)?.factors.into_iter().map(|(p, _)| p));
    }
    SRing::new(primes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Reject `(x, y)` residue classes with no matching `z` modulo a few
    /// auxiliary primes before extracting roots.
    pub sieve: bool,
    pub max_sieve_primes: usize,
    /// Largest auxiliary prime considered; each prime costs a `p²` table.
    pub max_sieve_prime: u64,
    pub parallel: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            sieve: true,
            max_sieve_primes: 4,
            max_sieve_prime: 2048,
            parallel: true,
        }
    }
}

/// The auxiliary sieve primes: the smallest `p ≡ 1 (mod lcm(a,b,c))` with
/// `p ∤ abcABC`, where power residues are sparsest.
pub fn sieve_primes<T: Int>(f: &Gfe<T>, opts: &EnumerationOptions) -> Vec<u64> {
    let l = f.sig.lcm();
    let bad = f
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc * c.to_bigint())
        * BigInt::from(f.sig.exponents().iter().map(|&e| e as u64).product::<u64>());
    let mut out = Vec::new();
    let mut p = l + 1;
    while out.len() < opts.max_sieve_primes && p <= opts.max_sieve_prime {
        if is_prime(&(p as i64)) && !(&bad % p).is_zero() {
            out.push(p);
        }
        p += l;
    }
    out
}

/// Residue-class filter for one auxiliary prime.
struct ResidueSieve {
    p: u64,
    /// `allowed[xr * p + yr]`: some `z` solves the equation mod `p`.
    allowed: Vec<bool>,
}

impl ResidueSieve {
    fn new<T: Int>(f: &Gfe<T>, p: u64) -> Self {
        let [a, b, c] = f.sig.exponents();
        let coef = |i: usize| -> u64 {
            let r = f.coeffs[i].to_bigint().mod_floor(&BigInt::from(p));
            r.to_u64().expect("residue below p")
        };
        let (ca, cb, cc) = (coef(0), coef(1), coef(2));
        let pw = |x: u64, e: u32| -> u64 {
            let mut acc = 1u64;
            for _ in 0..e {
                acc = acc * x % p;
            }
            acc
        };
        let mut z_values = vec![false; p as usize];
        for z in 0..p {
            z_values[(cc * pw(z, c) % p) as usize] = true;
        }
        let xs: Vec<u64> = (0..p).map(|x| ca * pw(x, a) % p).collect();
        let ys: Vec<u64> = (0..p).map(|y| cb * pw(y, b) % p).collect();
        let mut allowed = vec![false; (p * p) as usize];
        for (xr, xv) in xs.iter().enumerate() {
            for (yr, yv) in ys.iter().enumerate() {
                let need = (2 * p - xv - yv) % p;
                allowed[xr * p as usize + yr] = z_values[need as usize];
            }
        }
        ResidueSieve { p, allowed }
    }

    fn residue(&self, v: i64) -> usize {
        v.rem_euclid(self.p as i64) as usize
    }
}

/// All primitive solutions with `max(|x|, |y|, |z|) <= bound`, sorted
/// lexicographically.
pub fn enumerate_primitive_solutions<T: Int>(
    f: &Gfe<T>,
    bound: u64,
    opts: &EnumerationOptions,
) -> Vec<PrimitiveSolution<T>> {
    let sieves: Vec<ResidueSieve> = if opts.sieve {
        sieve_primes(f, opts)
            .into_iter()
            .map(|p| ResidueSieve::new(f, p))
            .collect()
    } else {
        Vec::new()
    };
    let bound = i64::try_from(bound).expect("bound fits i64");
    let mut out: Vec<PrimitiveSolution<T>> = if fits_i128(f, bound) {
        let coeffs = f.coeffs.clone().map(|c| convert::<T, i128>(&c).expect("checked"));
        enumerate_in(&coeffs, &f.sig, bound, &sieves, opts.parallel)
            .into_iter()
            .map(|s| s.map(|v| convert::<i128, T>(&v).expect("bounded by input")))
            .map(|[x, y, z]| PrimitiveSolution::new(x, y, z))
            .collect()
    } else {
        let coeffs = f.coeffs.clone().map(|c| c.to_bigint());
        enumerate_in(&coeffs, &f.sig, bound, &sieves, opts.parallel)
            .into_iter()
            .map(|s| s.map(|v| T::from_bigint(&v).expect("bounded by input")))
            .map(|[x, y, z]| PrimitiveSolution::new(x, y, z))
            .collect()
    };
    out.sort();
    out
}

/// Whether every term `A x^a` and partial sum fits comfortably in `i128`.
fn fits_i128<T: Int>(f: &Gfe<T>, bound: i64) -> bool {
    let limit = BigInt::from(i128::MAX) / 4;
    f.coeffs.iter().zip(f.sig.exponents()).all(|(c, e)| {
        c.to_bigint().abs() * num_traits::pow(BigInt::from(bound), e as usize) < limit
    })
}

fn enumerate_in<U: Int>(
    coeffs: &[U; 3],
    sig: &Signature,
    bound: i64,
    sieves: &[ResidueSieve],
    parallel: bool,
) -> Vec<[U; 3]> {
    let [a, b, c] = sig.exponents();
    let terms = |coef: &U, e: u32| -> Vec<U> {
        (-bound..=bound)
            .map(|v| coef.clone() * pow(&U::from_i64(v).expect("fits"), e))
            .collect()
    };
    let x_terms = terms(&coeffs[0], a);
    let y_terms = terms(&coeffs[1], b);

    let row = |x: i64| -> Vec<[U; 3]> {
        let mut found = Vec::new();
        let ax = &x_terms[(x + bound) as usize];
        let x_res: Vec<usize> = sieves.iter().map(|s| s.residue(x)).collect();
        for y in -bound..=bound {
            let pass = sieves.iter().zip(&x_res).all(|(s, &xr)| {
                s.allowed[xr * s.p as usize + s.residue(y)]
            });
            if !pass {
                continue;
            }
            let rest = -(ax.clone() + y_terms[(y + bound) as usize].clone());
            let (q, r) = rest.div_rem(&coeffs[2]);
            if !r.is_zero() {
                continue;
            }
            let Some(root) = perfect_nth_root(&q, c) else {
                continue;
            };
            if root > U::from_i64(bound).expect("fits") {
                continue;
            }
            let xu = U::from_i64(x).expect("fits");
            let yu = U::from_i64(y).expect("fits");
            let mut zs = vec![root.clone()];
            if c % 2 == 0 && !root.is_zero() {
                zs.insert(0, -root);
            }
            for z in zs {
                if xu.gcd(&yu).gcd(&z).is_one() {
                    found.push([xu.clone(), yu.clone(), z]);
                }
            }
        }
        found
    };
    if parallel {
        (-bound..=bound).into_par_iter().flat_map_iter(row).collect()
    } else {
        (-bound..=bound).flat_map(row).collect()
    }
}

/// `(x, y, z) ↦ (-A x^a : C z^c)`.
pub fn j_map<T: Int>(f: &Gfe<T>, sol: &PrimitiveSolution<T>) -> Result<ProjPoint<T>> {
    let [a, _, c] = f.sig.exponents();
    let s = -(f.coeffs[0].clone() * pow(&sol.x, a));
    let t = f.coeffs[2].clone() * pow(&sol.z, c);
    if s.is_zero() && t.is_zero() {
        return Err(Error::DegeneratePoint);
    }
    ProjPoint::new(s, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryKind {
    /// A primitive integer solution of the equation itself.
    Primitive,
    /// A solution over `R` of `A' x^a + B' y^b + C' z^c = 0` where the
    /// coefficients are unit-class representatives of `R^×`.
    UnitAdjusted,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Recovered<T: Int> {
    #[serde(with = "crate::decimal::triple")]
    pub solution: [T; 3],
    #[serde(with = "crate::decimal::triple")]
    pub coefficients: [T; 3],
    pub kind: RecoveryKind,
}

/// Recovers the solutions lying over a stack point `Q`.
///
/// Always returns every primitive solution of `f` with `j(x, y, z) = Q`:
/// writing `-A x^a = λs`, `B y^b = λ(s-t)` and `C z^c = λt`, primitivity
/// forces `λ` to be supported on the primes of `ABC` with
/// `v_p(λ) <= max(v_p(A), v_p(B), v_p(C))`, so the search over `λ` is finite.
///
/// With `search_units`, also returns the solution built from the root
/// generators of `Q` over `R`, with each coefficient reduced to its class in
/// `R^×/(R^×)^n`; these are flagged [`RecoveryKind::UnitAdjusted`].
pub fn recover_solutions<T: Int>(
    q: &ProjPoint<T>,
    f: &Gfe<T>,
    ring: &SRing<T>,
    search_units: bool,
    limits: &WorkLimits,
) -> Result<Vec<Recovered<T>>> {
    let cert = is_stack_point(q, &f.sig, ring, limits)?;
    if !cert.accepted() {
        return Err(Error::NotAStackPoint {
            point: q.to_string(),
            signature: f.sig.to_string(),
            ring: ring.to_string(),
        });
    }
    let mut out: Vec<Recovered<T>> = primitive_preimages(q, f, limits)?
        .into_iter()
        .map(|s| Recovered {
            solution: s.triple(),
            coefficients: f.coeffs.clone(),
            kind: RecoveryKind::Primitive,
        })
        .collect();
    if search_units {
        for r in unit_adjusted(&cert, f, ring)? {
            let duplicate = out
                .iter()
                .any(|o| o.solution == r.solution && o.coefficients == r.coefficients);
            if !duplicate {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Every primitive solution `sol` of `f` with `j_map(f, sol) = q`, sorted.
pub fn primitive_preimages<T: Int>(
    q: &ProjPoint<T>,
    f: &Gfe<T>,
    limits: &WorkLimits,
) -> Result<Vec<PrimitiveSolution<T>>> {
    let [a, b, c] = f.sig.exponents();
    let [ca, cb, cc] = f.coeffs.clone();
    let (s, t) = (q.s().clone(), q.t().clone());

    let mut out = Vec::new();
    for lambda in lambda_candidates(&f.coeffs, limits)? {
        let xa = -(lambda.clone() * s.clone());
        let yb = lambda.clone() * (s.clone() - t.clone());
        let zc = lambda.clone() * t.clone();
        let roots = [(xa, &ca, a), (yb, &cb, b), (zc, &cc, c)].map(|(v, coef, e)| {
            let (quot, rem) = v.div_rem(coef);
            if !rem.is_zero() {
                return Vec::new();
            }
            signed_roots(&quot, e)
        });
        for x in &roots[0] {
            for y in &roots[1] {
                for z in &roots[2] {
                    let sol = PrimitiveSolution::new(x.clone(), y.clone(), z.clone());
                    if sol.is_primitive() && f.evaluate(&sol.triple()).is_zero() {
                        out.push(sol);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All `r` with `r^e = v`: both signs for even `e`.
fn signed_roots<T: Int>(v: &T, e: u32) -> Vec<T> {
    match perfect_nth_root(v, e) {
        None => Vec::new(),
        Some(r) if r.is_zero() => vec![r],
        Some(r) if e % 2 == 0 => vec![-r.clone(), r],
        Some(r) => vec![r],
    }
}

/// `±∏ p^{f_p}` over primes `p | ABC` with `0 <= f_p <= max v_p(coefficients)`.
fn lambda_candidates<T: Int>(coeffs: &[T; 3], limits: &WorkLimits) -> Result<Vec<T>> {
    let mut caps: Vec<(T, u32)> = Vec::new();
    for c in coeffs {
        for (p, e) in factorize(c, limits)?.factors {
            match caps.iter_mut().find(|(q, _)| *q == p) {
                Some((_, cap)) => *cap = (*cap).max(e),
                None => caps.push((p, e)),
            }
        }
    }
    let mut values = vec![T::one()];
    for (p, cap) in caps {
        let powers: Vec<T> = (0..=cap).map(|e| pow(&p, e)).collect();
        values = values
            .iter()
            .flat_map(|v| powers.iter().map(move |q| v.clone() * q.clone()))
            .collect();
    }
    let negatives: Vec<T> = values.iter().map(|v| -v.clone()).collect();
    values.extend(negatives);
    Ok(values)
}

fn unit_adjusted<T: Int>(
    cert: &StackPointCertificate<T>,
    f: &Gfe<T>,
    ring: &SRing<T>,
) -> Result<Vec<Recovered<T>>> {
    let q = &cert.point;
    let sig = &f.sig;
    let roots: [T; 3] = match (&cert.status, &cert.roots) {
        (StackPointStatus::SmoothWithRoots, Some(r)) => r.clone(),
        (StackPointStatus::Marked { at }, _) => {
            let (o, i) = (T::one, T::zero);
            match at {
                MarkedPoint::Zero => [i(), o(), o()],
                MarkedPoint::One => [o(), i(), o()],
                MarkedPoint::Infinity => [o(), o(), i()],
            }
        }
        _ => unreachable!("accepted certificate"),
    };
    let (s, t) = (q.s().clone(), q.t().clone());
    let mut out = Vec::new();
    for eps in [T::one(), -T::one()] {
        // values of A'x^a, B'y^b, C'z^c for the representative (εs : εt)
        let targets = [
            -(eps.clone() * s.clone()),
            eps.clone() * (s.clone() - t.clone()),
            eps.clone() * t.clone(),
        ];
        let mut solution = roots.clone();
        let mut coefficients = f.coeffs.clone();
        for i in 0..3 {
            let e = sig.exponents()[i];
            if roots[i].is_zero() {
                continue;
            }
            let unit = targets[i].clone() / pow(&roots[i], e);
            let (rep, scale) = split_unit(&unit, e, ring);
            coefficients[i] = rep;
            solution[i] = roots[i].clone() * scale;
        }
        if !evaluate_with(&coefficients, sig, &solution).is_zero() {
            continue;
        }
        let r = Recovered {
            solution,
            coefficients,
            kind: RecoveryKind::UnitAdjusted,
        };
        if !out.contains(&r) {
            out.push(r);
        }
    }
    for r in &mut out {
        if r.coefficients == f.coeffs
            && PrimitiveSolution::new(r.solution[0].clone(), r.solution[1].clone(), r.solution[2].clone())
                .is_primitive()
        {
            r.kind = RecoveryKind::Primitive;
        }
    }
    Ok(out)
}

/// Writes the integral unit `u` as `rep · scale^e` with `rep` the canonical
/// representative of its class in `R^×/(R^×)^e`.
fn split_unit<T: Int>(u: &T, e: u32, ring: &SRing<T>) -> (T, T) {
    let rep = unit_class_rep(u, e, ring).expect("u is a unit of R");
    let mut scale = T::one();
    for p in ring.primes() {
        scale = scale * pow(p, valuation(u, p) / e);
    }
    if u.is_negative() && !rep.is_negative() {
        // odd e: -1 = (-1)^e moves into the scale
        scale = -scale;
    }
    (rep, scale)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InclusionEntry<T: Int> {
    pub solution: PrimitiveSolution<T>,
    pub image: ProjPoint<T>,
    pub certificate: StackPointCertificate<T>,
}

/// Outcome of checking `j(U(Z)) ⊆ P¹(a,b,c)⟨Z[S⁻¹]⟩` on a search box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct InclusionReport<T: Int> {
    pub equation: Gfe<T>,
    pub ring: SRing<T>,
    #[serde(with = "crate::decimal::display")]
    pub bound: u64,
    pub entries: Vec<InclusionEntry<T>>,
    pub violations: Vec<InclusionEntry<T>>,
}

impl<T: Int> InclusionReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_descent_inclusion<T: Int>(
    f: &Gfe<T>,
    bound: u64,
    opts: &EnumerationOptions,
    limits: &WorkLimits,
) -> Result<InclusionReport<T>> {
    let ring = bad_prime_set(f, limits)?;
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for sol in enumerate_primitive_solutions(f, bound, opts) {
        let image = j_map(f, &sol)?;
        let certificate = is_stack_point(&image, &f.sig, &ring, limits)?;
        let entry = InclusionEntry {
            solution: sol,
            image,
            certificate,
        };
        if !entry.certificate.accepted() {
            violations.push(entry.clone());
        }
        entries.push(entry);
    }
    Ok(InclusionReport {
        equation: f.clone(),
        ring,
        bound,
        entries,
        violations,
    })
}
