//! Descent for generalized Fermat equations `Ax^a + By^b + Cz^c = 0` through
//! the Belyi stack `P¹(a,b,c)`.
//!
//! Everything is generic over the integer type ([`Int`]); the aliases below
//! fix it to arbitrary precision.

pub mod arith;
pub mod decimal;
pub mod error;
pub mod gfe;
pub mod group;
pub mod quartic;
pub mod scalar;
pub mod smith;
pub mod stack;
pub mod sunit;

use num_bigint::BigInt;
use num_rational::Ratio;

pub use arith::{factorize, intersection_ideal, normalize_projective, ProjPoint, WorkLimits};
pub use error::{Error, Result};
pub use gfe::{
    bad_prime_set, enumerate_primitive_solutions, j_map, recover_solutions,
    verify_descent_inclusion, EnumerationOptions, Gfe, PrimitiveSolution,
};
pub use group::{h_structure, triangle_abelianization, weight_vector, Signature};
pub use quartic::{sieve_442, torsion_points, twist_curve, CurvePoint, TwistedCurve};
pub use scalar::Int;
pub use smith::{smith_normal_form, IntMatrix, SmithForm};
pub use stack::{classify_signature, euler_characteristic, is_stack_point, MarkedPoint};
pub use sunit::{is_nth_power_ideal, s_unit_reps, SRing, UnitClassGroup};

pub type Integer = BigInt;
pub type Rational = Ratio<BigInt>;

pub type ProjPointQ = ProjPoint<Integer>;
pub type IntMatrixZ = IntMatrix<Integer>;
pub type SmithFormZ = SmithForm<Integer>;
pub type SRingZ = SRing<Integer>;
pub type UnitClassGroupZ = UnitClassGroup<Integer>;
pub type GfeZ = Gfe<Integer>;
pub type PrimitiveSolutionZ = PrimitiveSolution<Integer>;
pub type TwistedCurveQ = TwistedCurve<Integer>;
pub type CurvePointQ = CurvePoint<Integer>;
