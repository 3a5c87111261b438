//! Points of the Belyi stack `P¹(a,b,c)` over `Z[S⁻¹]`.
//!
//! `P¹(a,b,c)` is the projective line rooted at `P₀ = (0:1)`, `P₁ = (1:1)`
//! and `P_∞ = (1:0)` with multiplicities `a`, `b`, `c`. Over a PID a point
//! `Q = (s:t)` off the marked points lifts to the stack exactly when the
//! ideals `sR`, `(s-t)R` and `tR` are `a`-th, `b`-th and `c`-th powers.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{intersection_ideal, ProjPoint, WorkLimits};
use crate::error::{Error, Result};
use crate::group::Signature;
use crate::scalar::Int;
use crate::sunit::{is_nth_power_ideal, SRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkedPoint {
    Zero,
    One,
    Infinity,
}

impl MarkedPoint {
    pub const ALL: [MarkedPoint; 3] = [MarkedPoint::Zero, MarkedPoint::One, MarkedPoint::Infinity];

    pub fn point<T: Int>(self) -> ProjPoint<T> {
        match self {
            MarkedPoint::Zero => ProjPoint::zero(),
            MarkedPoint::One => ProjPoint::one(),
            MarkedPoint::Infinity => ProjPoint::infinity(),
        }
    }

    /// The multiplicity attached to this point by the signature.
    pub fn multiplicity(self, sig: &Signature) -> u32 {
        match self {
            MarkedPoint::Zero => sig.a(),
            MarkedPoint::One => sig.b(),
            MarkedPoint::Infinity => sig.c(),
        }
    }

    pub fn of<T: Int>(q: &ProjPoint<T>) -> Option<MarkedPoint> {
        MarkedPoint::ALL.into_iter().find(|m| m.point::<T>() == *q)
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MarkedPoint::Zero => "0",
            MarkedPoint::One => "1",
            MarkedPoint::Infinity => "inf",
        })
    }
}

/// `#μₙ(R)` for a subring `R` of `Q`.
pub fn roots_of_unity_order(n: u32) -> u32 {
    if n % 2 == 0 {
        2
    } else {
        1
    }
}

/// A point of the single root stack `ⁿ√(P¹; P)` over `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "", rename_all = "snake_case", tag = "kind")]
pub enum RootPoint<T: Int> {
    /// `Q = P`: a single object with `μₙ(R)` automorphisms.
    Marked {
        #[serde(with = "crate::decimal::display")]
        automorphisms: u32,
    },
    /// `I(P, Q) = Jⁿ`; carries the positive generator of `J`.
    Root {
        #[serde(with = "crate::decimal")]
        generator: T,
    },
}

/// Decides whether `Q` lifts to the n-th root stack of `P¹_R` at `P`.
pub fn root_point_test<T: Int>(
    p: &ProjPoint<T>,
    q: &ProjPoint<T>,
    n: u32,
    ring: &SRing<T>,
    limits: &WorkLimits,
) -> Result<Option<RootPoint<T>>> {
    if p == q {
        return Ok(Some(RootPoint::Marked {
            automorphisms: roots_of_unity_order(n),
        }));
    }
    let ideal = intersection_ideal(p, q);
    Ok(is_nth_power_ideal(&ideal, n, ring, limits)?.map(|generator| RootPoint::Root { generator }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "", rename_all = "snake_case", tag = "kind")]
pub enum StackPointStatus<T: Int> {
    Marked {
        at: MarkedPoint,
    },
    SmoothWithRoots,
    /// The intersection ideal with `at` is not an `exponent`-th power.
    Rejected {
        at: MarkedPoint,
        #[serde(with = "crate::decimal")]
        ideal: T,
        #[serde(with = "crate::decimal::display")]
        exponent: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StackPointCertificate<T: Int> {
    pub point: ProjPoint<T>,
    pub status: StackPointStatus<T>,
    /// `(g₀, g₁, g_∞)` with `g₀^a ~ s`, `g₁^b ~ s-t`, `g_∞^c ~ t` in `R`.
    #[serde(with = "crate::decimal::option_triple")]
    pub roots: Option<[T; 3]>,
}

impl<T: Int> StackPointCertificate<T> {
    pub fn accepted(&self) -> bool {
        !matches!(self.status, StackPointStatus::Rejected { .. })
    }
}

pub fn is_stack_point<T: Int>(
    q: &ProjPoint<T>,
    sig: &Signature,
    ring: &SRing<T>,
    limits: &WorkLimits,
) -> Result<StackPointCertificate<T>> {
    if let Some(at) = MarkedPoint::of(q) {
        return Ok(StackPointCertificate {
            point: q.clone(),
            status: StackPointStatus::Marked { at },
            roots: None,
        });
    }
    let mut roots = Vec::with_capacity(3);
    for at in MarkedPoint::ALL {
        let n = at.multiplicity(sig);
        match root_point_test(&at.point(), q, n, ring, limits)? {
            Some(RootPoint::Root { generator }) => roots.push(generator),
            Some(RootPoint::Marked { .. }) => unreachable!("q is not a marked point"),
            None => {
                return Ok(StackPointCertificate {
                    point: q.clone(),
                    status: StackPointStatus::Rejected {
                        at,
                        ideal: intersection_ideal(&at.point(), q),
                        exponent: n,
                    },
                    roots: None,
                })
            }
        }
    }
    Ok(StackPointCertificate {
        point: q.clone(),
        status: StackPointStatus::SmoothWithRoots,
        roots: Some(roots.try_into().expect("three roots")),
    })
}

/// Size of the automorphism group over `R` of the unique object above `Q`.
pub fn stack_point_automorphism_order<T: Int>(
    q: &ProjPoint<T>,
    sig: &Signature,
    ring: &SRing<T>,
    limits: &WorkLimits,
) -> Result<u32> {
    let cert = is_stack_point(q, sig, ring, limits)?;
    match cert.status {
        StackPointStatus::Marked { at } => Ok(roots_of_unity_order(at.multiplicity(sig))),
        StackPointStatus::SmoothWithRoots => Ok(1),
        StackPointStatus::Rejected { .. } => Err(Error::NotAStackPoint {
            point: q.to_string(),
            signature: sig.to_string(),
            ring: ring.to_string(),
        }),
    }
}

/// `χ = 1/a + 1/b + 1/c - 1`.
pub fn euler_characteristic<T: Int>(sig: &Signature) -> Ratio<T> {
    sig.exponents()
        .into_iter()
        .map(|e| Ratio::new(T::one(), T::small(e)))
        .fold(-Ratio::<T>::one(), |acc, x| acc + x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignatureKind {
    Spherical,
    Euclidean,
    Hyperbolic,
}

/// Genus of the Galois Belyi cover; only bounded below in the hyperbolic case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Genus {
    Exact(u32),
    AtLeastTwo,
}

impl From<Genus> for String {
    fn from(g: Genus) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for Genus {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        match s.as_str() {
            ">=2" => Ok(Genus::AtLeastTwo),
            other => other
                .parse()
                .map(Genus::Exact)
                .map_err(|_| Error::InvalidInput(format!("bad genus {s:?}"))),
        }
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus::Exact(g) => write!(f, "{g}"),
            Genus::AtLeastTwo => write!(f, ">=2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SignatureClass<T: Int> {
    #[serde(with = "crate::decimal::rational")]
    pub chi: Ratio<T>,
    pub kind: SignatureKind,
    pub genus: Genus,
    /// `2/χ`, the degree of the Galois Belyi map, when `χ > 0`.
    #[serde(with = "crate::decimal::option")]
    pub degree: Option<T>,
}

/// Sorts a signature by the sign of its Euler characteristic, using
/// `2 - 2g = deg φ · χ` for the Galois cover of genus `g`.
pub fn classify_signature<T: Int>(sig: &Signature) -> SignatureClass<T> {
    let chi = euler_characteristic::<T>(sig);
    let (kind, genus, degree) = if chi.is_positive() {
        let deg = Ratio::from_integer(T::small(2)) / chi.clone();
        debug_assert!(deg.is_integer());
        (SignatureKind::Spherical, Genus::Exact(0), Some(deg.to_integer()))
    } else if chi.is_zero() {
        (SignatureKind::Euclidean, Genus::Exact(1), None)
    } else {
        (SignatureKind::Hyperbolic, Genus::AtLeastTwo, None)
    };
    SignatureClass {
        chi,
        kind,
        genus,
        degree,
    }
}

/// `χ · abc`, which always equals `bc + ac + ab - abc`.
pub fn scaled_euler_characteristic<T: Int>(sig: &Signature) -> T {
    let [a, b, c] = sig.exponents().map(T::small);
    let abc = a.clone() * b.clone() * c.clone();
    let chi = euler_characteristic::<T>(sig) * Ratio::from_integer(abc);
    debug_assert!(chi.denom().is_one());
    chi.to_integer()
}
