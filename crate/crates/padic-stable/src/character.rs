//! The rank-zero additive character χ(u) = e^{2πi {u}_p} on Q_p and its
//! pullbacks χ_n = χ ∘ T_1 along the tower.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::element::FieldElement;
use crate::error::Result;
use crate::tower::TowerSpec;

/// Value of an additive character, stored as the exact angle θ ∈ [0, 1)
/// with χ = e^{2πiθ}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterValue {
    pub angle: BigRational,
}

impl CharacterValue {
    pub fn trivial() -> Self {
        CharacterValue {
            angle: BigRational::zero(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.angle.is_zero()
    }

    /// (cos 2πθ, sin 2πθ).
    pub fn to_complex(&self) -> (f64, f64) {
        let t = std::f64::consts::TAU * self.angle.to_f64().unwrap();
        (t.cos(), t.sin())
    }

    pub fn real_part(&self) -> f64 {
        self.to_complex().0
    }
}

/// p-adic fractional part {x}_p ∈ [0, 1): the unique rational a/p^k with
/// 0 ≤ a < p^k and x - a/p^k ∈ Z_p.
pub fn p_fractional_part(p: u64, x: &BigRational) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let pb = BigInt::from(p);
    // Canonical form: denom > 0, gcd(numer, denom) = 1.  Split denom = p^k·b.
    let mut b = x.denom().clone();
    let mut pk = BigInt::from(1u32);
    while (&b % &pb).is_zero() {
        b /= &pb;
        pk *= &pb;
    }
    if pk.is_one() {
        return BigRational::zero();
    }
    // {x}_p = (numer · b^{-1} mod p^k) / p^k.
    let g = b.extended_gcd(&pk);
    debug_assert!(g.gcd.is_one());
    let a = (x.numer() * g.x).mod_floor(&pk);
    BigRational::new(a, pk)
}

/// χ evaluated at a rational (viewed in Q_p).
pub fn char_chi(p: u64, x: &BigRational) -> CharacterValue {
    CharacterValue {
        angle: p_fractional_part(p, x),
    }
}

impl TowerSpec {
    /// χ_n(x) = χ(T_1(x)) for x ∈ K_n; trivial exactly on π_n^{-d_n} O_n.
    pub fn char_level(&self, x: &FieldElement) -> Result<CharacterValue> {
        let t = self.t_map(x, 1)?;
        Ok(char_chi(self.p, &t.coeffs[0]))
    }
}
