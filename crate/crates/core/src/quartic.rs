//! Descent for `x⁴ + y⁴ = z²` through the quartic twists
//! `E_d : v²w = u³ - d·u·w²` and their Belyi maps `φ_d(u:v:w) = (u² : u² - dw²)`.
//!
//! The pipeline in [`sieve_442`] covers `P¹(4,4,2)` by the `E_d`, keeps the
//! twists that can meet an integral solution, collects the images of their
//! rational points, and sieves those candidates with the stack-point test
//! over `Z` before recovering solutions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, perfect_nth_root, ProjPoint, WorkLimits};
use crate::error::{Error, Result};
use crate::gfe::{
    enumerate_primitive_solutions, primitive_preimages, EnumerationOptions, Gfe, PrimitiveSolution,
};
use crate::group::Signature;
use crate::scalar::{pow, Int};
use crate::stack::{is_stack_point, MarkedPoint, StackPointCertificate};
use crate::sunit::{s_unit_reps, SRing};

/// `E_d : v² = u³ - d·u` in affine coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TwistedCurve<T: Int> {
    #[serde(with = "crate::decimal")]
    d: T,
}

pub fn twist_curve<T: Int>(d: T) -> Result<TwistedCurve<T>> {
    if d.is_zero() {
        return Err(Error::SingularCurve);
    }
    Ok(TwistedCurve { d })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "", rename_all = "snake_case", tag = "kind")]
pub enum CurvePoint<T: Int> {
    /// `O = (0:1:0)`
    Infinity,
    Affine {
        #[serde(with = "crate::decimal::rational")]
        u: Ratio<T>,
        #[serde(with = "crate::decimal::rational")]
        v: Ratio<T>,
    },
}

impl<T: Int> CurvePoint<T> {
    pub fn affine(u: Ratio<T>, v: Ratio<T>) -> Self {
        CurvePoint::Affine { u, v }
    }

    pub fn integral(u: T, v: T) -> Self {
        CurvePoint::Affine {
            u: Ratio::from_integer(u),
            v: Ratio::from_integer(v),
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { u, v } => u.is_integer() && v.is_integer(),
        }
    }
}

impl<T: Int> PartialOrd for CurvePoint<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `O` first, then by `(u, v)`.
impl<T: Int> Ord for CurvePoint<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CurvePoint::Infinity, CurvePoint::Infinity) => Ordering::Equal,
            (CurvePoint::Infinity, _) => Ordering::Less,
            (_, CurvePoint::Infinity) => Ordering::Greater,
            (CurvePoint::Affine { u: u1, v: v1 }, CurvePoint::Affine { u: u2, v: v2 }) => {
                u1.cmp(u2).then_with(|| v1.cmp(v2))
            }
        }
    }
}

impl<T: Int> fmt::Display for CurvePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { u, v } => write!(f, "({u}, {v})"),
        }
    }
}

impl<T: Int> fmt::Display for TwistedCurve<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.d.is_negative() { '+' } else { '-' };
        let mag = self.d.abs();
        if mag.is_one() {
            write!(f, "v^2w = u^3 {sign} uw^2")
        } else {
            write!(f, "v^2w = u^3 {sign} {mag}uw^2")
        }
    }
}

impl<T: Int> TwistedCurve<T> {
    pub fn d(&self) -> &T {
        &self.d
    }

    fn a4(&self) -> Ratio<T> {
        Ratio::from_integer(-self.d.clone())
    }

    pub fn contains(&self, p: &CurvePoint<T>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { u, v } => {
                v.clone() * v.clone() == u.clone() * u.clone() * u.clone() + self.a4() * u.clone()
            }
        }
    }

    pub fn negate(&self, p: &CurvePoint<T>) -> CurvePoint<T> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { u, v } => CurvePoint::affine(u.clone(), -v.clone()),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &CurvePoint<T>, q: &CurvePoint<T>) -> CurvePoint<T> {
        let (CurvePoint::Affine { u: u1, v: v1 }, CurvePoint::Affine { u: u2, v: v2 }) = (p, q)
        else {
            return match p {
                CurvePoint::Infinity => q.clone(),
                _ => p.clone(),
            };
        };
        let slope = if u1 == u2 {
            if (v1.clone() + v2.clone()).is_zero() {
                // P + (-P), including doubling a 2-torsion point
                return CurvePoint::Infinity;
            }
            let three = Ratio::from_integer(T::small(3));
            let two = Ratio::from_integer(T::small(2));
            (three * u1.clone() * u1.clone() + self.a4()) / (two * v1.clone())
        } else {
            (v2.clone() - v1.clone()) / (u2.clone() - u1.clone())
        };
        let u3 = slope.clone() * slope.clone() - u1.clone() - u2.clone();
        let v3 = slope * (u1.clone() - u3.clone()) - v1.clone();
        CurvePoint::affine(u3, v3)
    }

    pub fn multiple(&self, p: &CurvePoint<T>, k: u32) -> CurvePoint<T> {
        let mut acc = CurvePoint::Infinity;
        for _ in 0..k {
            acc = self.add(&acc, p);
        }
        acc
    }

    /// Order of `p` if it is at most `max`.
    ///
    /// Stops at the first non-integral multiple: on this integral model every
    /// torsion point is integral.
    pub fn order(&self, p: &CurvePoint<T>, max: u32) -> Option<u32> {
        let mut acc = p.clone();
        for k in 1..=max {
            if acc == CurvePoint::Infinity {
                return Some(k);
            }
            if !acc.is_integral() {
                return None;
            }
            acc = self.add(&acc, p);
        }
        None
    }
}

/// `φ_d(u:v:w) = (u² : u² - dw²)`, with `φ_d(O) = (1:1)`.
///
/// At `O` both coordinates vanish; near `O` one has `w ~ u³`, so
/// `u² - dw² = u²(1 - du⁴ + ...)` and the quotient tends to `1`.
pub fn belyi_eval<T: Int>(e: &TwistedCurve<T>, p: &CurvePoint<T>) -> ProjPoint<T> {
    match p {
        CurvePoint::Infinity => ProjPoint::one(),
        CurvePoint::Affine { u, .. } => {
            let (num, den) = (u.numer().clone(), u.denom().clone());
            let s = num.clone() * num;
            let t = s.clone() - e.d.clone() * den.clone() * den;
            ProjPoint::new(s, t).expect("u² and u² - d never vanish together")
        }
    }
}

/// Positive divisors of `n != 0`.
fn divisors<T: Int>(n: &T, limits: &WorkLimits) -> Result<Vec<T>> {
    let f = factorize(&n.abs(), limits)?;
    let mut out = vec![T::one()];
    for (p, e) in &f.factors {
        let powers: Vec<T> = (0..=*e).map(|k| pow(p, k)).collect();
        out = out
            .iter()
            .flat_map(|d| powers.iter().map(move |q| d.clone() * q.clone()))
            .collect();
    }
    out.sort();
    Ok(out)
}

/// The rational torsion subgroup of `E_d`, sorted with `O` first.
///
/// Torsion points on the integral model `v² = u³ - du` are integral with
/// `v = 0` or `v² | 4|d|³`; each candidate is kept when its order is at
/// most 12.
pub fn torsion_points<T: Int>(e: &TwistedCurve<T>) -> Result<Vec<CurvePoint<T>>> {
    let limits = WorkLimits::default();
    let d = e.d.clone();
    let mut candidates = vec![CurvePoint::Infinity, CurvePoint::integral(T::zero(), T::zero())];
    if let Some(r) = perfect_nth_root(&d, 2) {
        candidates.push(CurvePoint::integral(r.clone(), T::zero()));
        candidates.push(CurvePoint::integral(-r, T::zero()));
    }
    let disc = T::small(4) * pow(&d.abs(), 3);
    for sq in divisors(&disc, &limits)? {
        let Some(v) = perfect_nth_root(&sq, 2) else {
            continue;
        };
        // u divides the constant term v² of u³ - du - v²
        for u0 in divisors(&sq, &limits)? {
            for u in [u0.clone(), -u0] {
                if pow(&u, 3) - d.clone() * u.clone() == sq {
                    candidates.push(CurvePoint::integral(u.clone(), v.clone()));
                    candidates.push(CurvePoint::integral(u, -v.clone()));
                }
            }
        }
    }
    let mut out: Vec<CurvePoint<T>> = candidates
        .into_iter()
        .filter(|p| e.contains(p) && e.order(p, 12).is_some())
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Rational points with `u = p/q`, `|p| <= height`, `1 <= q <= height`,
/// together with `O`.
pub fn rational_points_bounded<T: Int>(e: &TwistedCurve<T>, height: u64) -> Vec<CurvePoint<T>> {
    let h = T::from_u64(height).expect("height fits");
    let mut out = vec![CurvePoint::Infinity];
    let mut q = T::one();
    while q <= h {
        let mut p = -h.clone();
        while p <= h {
            if p.gcd(&q).is_one() {
                // v² = (p³ - d p q²) / q³, so v = sqrt(N q) / q²
                let n = pow(&p, 3) - e.d.clone() * p.clone() * q.clone() * q.clone();
                if let Some(r) = perfect_nth_root(&(n * q.clone()), 2) {
                    let u = Ratio::new(p.clone(), q.clone());
                    let v = Ratio::new(r, q.clone() * q.clone());
                    if !v.is_zero() {
                        out.push(CurvePoint::affine(u.clone(), -v.clone()));
                    }
                    out.push(CurvePoint::affine(u, v));
                }
            }
            p = p + T::one();
        }
        q = q + T::one();
    }
    out.sort();
    out
}

/// The `d` for which `-d` is a positive square, i.e. for which
/// `y⁴ = -λ²d` can hold with `λ ≠ 0`.
pub fn admissible_twists<T: Int>(reps: &[T]) -> Vec<T> {
    reps.iter()
        .filter(|d| d.is_negative() && perfect_nth_root(&-(*d).clone(), 2).is_some())
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "", rename_all = "snake_case", tag = "kind")]
pub enum CandidateSource<T: Int> {
    Marked {
        at: MarkedPoint,
    },
    Twist {
        #[serde(with = "crate::decimal")]
        d: T,
        point: CurvePoint<T>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Candidate<T: Int> {
    pub point: ProjPoint<T>,
    pub sources: Vec<CandidateSource<T>>,
    pub certificate: StackPointCertificate<T>,
    pub recovered: Vec<PrimitiveSolution<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TwistData<T: Int> {
    pub curve: TwistedCurve<T>,
    pub admissible: bool,
    /// Full torsion for admissible twists; a bounded point search otherwise.
    pub points: Vec<CurvePoint<T>>,
    pub images: Vec<ProjPoint<T>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SieveReport<T: Int> {
    pub equation: Gfe<T>,
    #[serde(with = "crate::decimal::seq")]
    pub unit_classes: Vec<T>,
    #[serde(with = "crate::decimal::seq")]
    pub admissible_twists: Vec<T>,
    /// Twists whose Mordell-Weil group is taken to be finite (rank 0); this
    /// is not computed here.
    #[serde(with = "crate::decimal::seq")]
    pub assumed_finite: Vec<T>,
    pub twists: Vec<TwistData<T>>,
    pub candidates: Vec<Candidate<T>>,
    pub solutions: Vec<PrimitiveSolution<T>>,
    #[serde(with = "crate::decimal::display")]
    pub bound_check: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SieveOptions {
    /// Also feed bounded point sets of the non-admissible twists into the
    /// candidate list, searching to this height.
    pub nonadmissible_height: Option<u64>,
    pub enumeration: EnumerationOptions,
}

/// `x⁴ + y⁴ - z² = 0`
pub fn fermat_quartic<T: Int>() -> Gfe<T> {
    Gfe::new(
        Signature::new(4, 4, 2).expect("valid"),
        [T::one(), T::one(), -T::one()],
    )
    .expect("nonzero coefficients")
}

/// Runs the covering, twisting and sieving pipeline for `x⁴ + y⁴ = z²`
/// and cross-checks the result against exhaustive enumeration up to
/// `bound_check`.
pub fn sieve_442<T: Int>(
    bound_check: u64,
    opts: &SieveOptions,
    limits: &WorkLimits,
) -> Result<SieveReport<T>> {
    let f = fermat_quartic::<T>();
    let sig = *f.signature();
    let two = SRing::new(vec![T::small(2)])?;
    let classes = s_unit_reps(&two, 4);
    let admissible = admissible_twists(&classes.representatives);

    let mut sources: BTreeMap<ProjPoint<T>, Vec<CandidateSource<T>>> = BTreeMap::new();
    for at in MarkedPoint::ALL {
        sources
            .entry(at.point())
            .or_default()
            .push(CandidateSource::Marked { at });
    }

    let mut twists = Vec::new();
    for d in &classes.representatives {
        let is_admissible = admissible.contains(d);
        let points = match (is_admissible, opts.nonadmissible_height) {
            (true, _) => torsion_points(&twist_curve(d.clone())?)?,
            (false, Some(h)) => rational_points_bounded(&twist_curve(d.clone())?, h),
            (false, None) => continue,
        };
        let curve = twist_curve(d.clone())?;
        let mut images = Vec::new();
        for p in &points {
            let q = belyi_eval(&curve, p);
            sources.entry(q.clone()).or_default().push(CandidateSource::Twist {
                d: d.clone(),
                point: p.clone(),
            });
            if !images.contains(&q) {
                images.push(q);
            }
        }
        images.sort();
        twists.push(TwistData {
            curve,
            admissible: is_admissible,
            points,
            images,
        });
    }

    let z = SRing::integers();
    let mut candidates = Vec::new();
    let mut solutions = Vec::new();
    for (point, srcs) in sources {
        let certificate = is_stack_point(&point, &sig, &z, limits)?;
        let recovered = if certificate.accepted() {
            primitive_preimages(&point, &f, limits)?
        } else {
            Vec::new()
        };
        solutions.extend(recovered.iter().cloned());
        candidates.push(Candidate {
            point,
            sources: srcs,
            certificate,
            recovered,
        });
    }
    solutions.sort();
    solutions.dedup();

    let enumerated = enumerate_primitive_solutions(&f, bound_check, &opts.enumeration);
    if enumerated != solutions {
        return Err(Error::PipelineMismatch {
            sieve: format_solutions(&solutions),
            enumerated: format_solutions(&enumerated),
        });
    }

    Ok(SieveReport {
        equation: f,
        unit_classes: classes.representatives,
        assumed_finite: admissible.clone(),
        admissible_twists: admissible,
        twists,
        candidates,
        solutions,
        bound_check,
    })
}

fn format_solutions<T: Int>(sols: &[PrimitiveSolution<T>]) -> String {
    let parts: Vec<String> = sols.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}
