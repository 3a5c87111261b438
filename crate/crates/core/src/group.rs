//! Structure of the diagonal symmetry group `H = {λ₀^a = λ₁^b = λ_∞^c}` of a
//! generalized Fermat equation with signature `(a, b, c)`.
//!
//! The character module of `H` is `Z³/M` where `M` is spanned by the rows
//! of [`m_matrix`]. Its free part is generated by the weight vector and its
//! torsion is the abelianized triangle group, the cokernel of [`j_matrix`].

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Int;
use crate::smith::{invariant_factors, IntMatrix};

/// Exponent triple `(a, b, c)`, each at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Signature {
    a: u32,
    b: u32,
    c: u32,
}

impl Signature {
    pub fn new(a: u32, b: u32, c: u32) -> Result<Self> {
        if a < 2 || b < 2 || c < 2 {
            return Err(Error::InvalidSignature(format!("{a},{b},{c}")));
        }
        Ok(Signature { a, b, c })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn exponents(&self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }

    pub fn lcm(&self) -> u64 {
        (self.a as u64).lcm(&(self.b as u64)).lcm(&(self.c as u64))
    }
}

impl TryFrom<String> for Signature {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Serialized as `"a,b,c"`, the form [`FromStr`] accepts.
impl From<Signature> for String {
    fn from(s: Signature) -> Self {
        format!("{},{},{}", s.a, s.b, s.c)
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<u32> = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidSignature(s.to_string()))?;
        match parts[..] {
            [a, b, c] => Signature::new(a, b, c),
            _ => Err(Error::InvalidSignature(s.to_string())),
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn exponents_as<T: Int>(sig: &Signature) -> [T; 3] {
    sig.exponents().map(T::small)
}

/// Generators of `M`: rows `(a,-b,0), (0,b,-c), (-a,0,c)`.
pub fn m_matrix<T: Int>(sig: &Signature) -> IntMatrix<T> {
    let [a, b, c] = exponents_as::<T>(sig);
    let z = T::zero;
    IntMatrix::from_rows(vec![
        vec![a.clone(), -b.clone(), z()],
        vec![z(), b, -c.clone()],
        vec![-a, z(), c],
    ])
    .expect("3x3")
}

/// Generators of `J`: rows `(a,0,0), (0,b,0), (0,0,c), (1,1,1)`.
pub fn j_matrix<T: Int>(sig: &Signature) -> IntMatrix<T> {
    let [a, b, c] = exponents_as::<T>(sig);
    let z = T::zero;
    IntMatrix::from_rows(vec![
        vec![a, z(), z()],
        vec![z(), b, z()],
        vec![z(), z(), c],
        vec![T::one(), T::one(), T::one()],
    ])
    .expect("4x3")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct WeightData<T: Int> {
    /// `gcd(a, b, c)`
    #[serde(with = "crate::decimal")]
    pub d: T,
    /// `gcd(bc, ac, ab)`
    #[serde(with = "crate::decimal")]
    pub m: T,
    /// `(bc/m, ac/m, ab/m)`
    #[serde(with = "crate::decimal::triple")]
    pub w: [T; 3],
}

pub fn weight_vector<T: Int>(sig: &Signature) -> WeightData<T> {
    let [a, b, c] = exponents_as::<T>(sig);
    let bc = b.clone() * c.clone();
    let ac = a.clone() * c.clone();
    let ab = a.clone() * b.clone();
    let m = bc.gcd(&ac).gcd(&ab);
    let d = a.gcd(&b).gcd(&c);
    WeightData {
        w: [bc / m.clone(), ac / m.clone(), ab / m.clone()],
        d,
        m,
    }
}

/// Invariant factors of `Δ(a,b,c)^ab`, computed from the cokernel of the
/// J-matrix; trivial factors are omitted.
pub fn triangle_abelianization<T: Int>(sig: &Signature) -> Vec<T> {
    invariant_factors(&j_matrix::<T>(sig)).factors
}

/// `H ≅ G_m^torus_rank × ∏ μ_k` over the listed torsion factors `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HStructure<T: Int> {
    #[serde(with = "crate::decimal::display")]
    pub torus_rank: usize,
    #[serde(with = "crate::decimal::seq")]
    pub torsion: Vec<T>,
}

impl<T: Int> HStructure<T> {
    /// Order of the finite part; equals `gcd(bc, ac, ab)`.
    pub fn torsion_order(&self) -> T {
        self.torsion.iter().fold(T::one(), |acc, k| acc * k.clone())
    }
}

/// Reads the structure of `H` off the Smith form of the M-matrix.
pub fn h_structure<T: Int>(sig: &Signature) -> HStructure<T> {
    let inv = invariant_factors(&m_matrix::<T>(sig));
    HStructure {
        torus_rank: inv.free_rank,
        torsion: inv.factors,
    }
}

/// Whether `(λ₀, λ₁, λ_∞)` is a rational point of `H`.
pub fn h_membership<T: Int>(lambda: &[Ratio<T>; 3], sig: &Signature) -> Result<bool> {
    if lambda.iter().any(Zero::is_zero) {
        return Err(Error::ZeroCoordinate);
    }
    let [x, y, z] = [0, 1, 2].map(|i| {
        num_traits::pow(lambda[i].clone(), sig.exponents()[i] as usize)
    });
    Ok(x == y && y == z)
}

/// The coordinate locus whose geometric stabilizer in `H` is being asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Locus {
    XZero,
    YZero,
    ZZero,
    Generic,
}

impl FromStr for Locus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x=0" | "x" => Ok(Locus::XZero),
            "y=0" | "y" => Ok(Locus::YZero),
            "z=0" | "z" => Ok(Locus::ZZero),
            "generic" => Ok(Locus::Generic),
            _ => Err(Error::InvalidInput(format!("unknown locus {s:?}"))),
        }
    }
}

/// Order of the stabilizer in `H(k̄)` of a point on the given locus, for an
/// algebraically closed `k` of characteristic prime to `abc`.
pub fn stabilizer_order(locus: Locus, sig: &Signature) -> u32 {
    match locus {
        Locus::XZero => sig.a,
        Locus::YZero => sig.b,
        Locus::ZZero => sig.c,
        Locus::Generic => 1,
    }
}

/// Helper for building `(q^w₀, q^w₁, q^w_∞)`, the image of `q` in the torus.
pub fn torus_point<T: Int>(q: &Ratio<T>, weights: &WeightData<T>) -> [Ratio<T>; 3] {
    weights.w.clone().map(|w| {
        let e = w.to_usize().expect("weights are small");
        num_traits::pow(q.clone(), e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn sig(a: u32, b: u32, c: u32) -> Signature {
        Signature::new(a, b, c).unwrap()
    }

    #[test]
    fn signature_validation() {
        assert!(Signature::new(1, 3, 7).is_err());
        assert_eq!("2, 3,7".parse::<Signature>().unwrap(), sig(2, 3, 7));
        assert!("2,3".parse::<Signature>().is_err());
        assert!("2,x,3".parse::<Signature>().is_err());
    }

    #[test]
    fn weights() {
        let w = weight_vector::<i64>(&sig(2, 3, 7));
        assert_eq!((w.w, w.m, w.d), ([21, 14, 6], 1, 1));
        let w = weight_vector::<i64>(&sig(4, 4, 2));
        assert_eq!((w.w, w.m, w.d), ([1, 1, 2], 8, 2));
        let w = weight_vector::<BigInt>(&sig(5, 5, 5));
        assert_eq!(w.w, [1, 1, 1].map(BigInt::from));
        assert_eq!((w.m, w.d), (BigInt::from(25), BigInt::from(5)));
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(triangle_abelianization::<i64>(&sig(4, 4, 2)), vec![2, 4]);
        assert!(triangle_abelianization::<i64>(&sig(2, 3, 7)).is_empty());
        assert_eq!(triangle_abelianization::<i64>(&sig(7, 7, 7)), vec![7, 7]);
    }

    #[test]
    fn h_structure_examples() {
        let h = h_structure::<i64>(&sig(2, 3, 7));
        assert_eq!((h.torus_rank, h.torsion.clone()), (1, vec![]));
        let h = h_structure::<i64>(&sig(7, 7, 7));
        assert_eq!((h.torus_rank, h.torsion.clone()), (1, vec![7, 7]));
        let h = h_structure::<i64>(&sig(4, 4, 2));
        assert_eq!((h.torus_rank, h.torsion.clone()), (1, vec![2, 4]));
        assert_eq!(h.torsion_order(), 8);
    }

    #[test]
    fn membership_examples() {
        let s = sig(2, 3, 7);
        let w = weight_vector::<BigInt>(&s);
        let q = Ratio::new(BigInt::from(3), BigInt::from(2));
        assert!(h_membership(&torus_point(&q, &w), &s).unwrap());

        let one = Ratio::from_integer(1i64);
        let minus = Ratio::from_integer(-1i64);
        assert!(h_membership(&[minus, one, one], &sig(4, 4, 2)).unwrap());

        let two = Ratio::from_integer(2i64);
        assert!(!h_membership(&[two, two, two], &s).unwrap());
        assert_eq!(
            h_membership(&[Ratio::zero(), one, one], &s),
            Err(Error::ZeroCoordinate)
        );
    }

    #[test]
    fn stabilizers() {
        assert_eq!(stabilizer_order(Locus::XZero, &sig(4, 4, 2)), 4);
        assert_eq!(stabilizer_order(Locus::Generic, &sig(3, 5, 7)), 1);
        assert_eq!(stabilizer_order(Locus::ZZero, &sig(2, 3, 7)), 7);
        assert_eq!("z=0".parse::<Locus>().unwrap(), Locus::ZZero);
    }
}
