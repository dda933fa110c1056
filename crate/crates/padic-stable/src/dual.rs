//! The dual side: annihilator classes Ξ_n of the subgroups S_n, the
//! pairing with G_n, and exact character-sum machinery.
//!
//! A dual class with shell j ≥ 1 is ξ = π_n^{-j}(lift(ξ_0) + … +
//! lift(ξ_{j-1})π_n^{j-1}) with ξ_0 ≠ 0; its absolute value is q_n^j and the
//! classes with shell ≤ n·e_n are exactly the characters of G_n.  The
//! pairing is Z-linear in the coset coordinates, which turns bulk character
//! sums into products of one-dimensional geometric sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::character::CharacterValue;
use crate::coset::Coset;
use crate::element::FieldElement;
use crate::error::{Error, Result};
use crate::tower::TowerSpec;

/// A character of G_n: an annihilator class of S_n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualIndex {
    pub level: usize,
    /// j ∈ 0..=n·e_n; 0 is the trivial class.
    pub shell: usize,
    /// shell·f_n residue digits, F_p coordinates over the unramified
    /// monomials; digits[i·f + u].  The leading digit block is nonzero.
    pub digits: Vec<u8>,
}

impl DualIndex {
    pub fn is_trivial(&self) -> bool {
        self.shell == 0
    }
}

impl TowerSpec {
    pub fn dual_zero(&self, n: usize) -> Result<DualIndex> {
        self.level(n)?;
        Ok(DualIndex {
            level: n,
            shell: 0,
            digits: Vec::new(),
        })
    }

    pub fn dual_from_digits(&self, n: usize, shell: usize, digits: &[u8]) -> Result<DualIndex> {
        let lv = self.level(n)?;
        let f = lv.f as usize;
        if digits.len() != shell * f {
            return Err(Error::Config(format!(
                "expected {} dual digits for shell {shell}, got {}",
                shell * f,
                digits.len()
            )));
        }
        if shell > 0 && digits[..f].iter().all(|&d| d == 0) {
            return Err(Error::Config("leading dual digit must be nonzero".into()));
        }
        Ok(DualIndex {
            level: n,
            shell,
            digits: digits.to_vec(),
        })
    }

    /// |ξ|_n = q_n^j.
    pub fn dual_abs(&self, xi: &DualIndex) -> f64 {
        self.q_f64(xi.level).powi(xi.shell as i32)
    }

    /// ‖ξ‖ = q_n^{j/m_n}.
    pub fn dual_norm(&self, xi: &DualIndex) -> f64 {
        let lv = self.level(xi.level).expect("valid level");
        self.q_f64(xi.level)
            .powf(xi.shell as f64 / lv.m as f64)
    }

    /// Representative ξ ∈ K_n of the class.
    pub fn dual_rep(&self, xi: &DualIndex) -> Result<FieldElement> {
        let lv = self.level(xi.level)?;
        let (e, f) = (lv.e as usize, lv.f as usize);
        let mut y = self.fe_zero(xi.level)?;
        for i in 0..xi.shell {
            // lift(ξ_i)·π_n^i added coefficient-wise.
            let (c, r) = (i / e, i % e);
            for u in 0..f {
                let d = xi.digits[i * f + u];
                if d == 0 {
                    continue;
                }
                let flat = lv.unram_flat[u] + lv.eis_flat[r];
                y.coeffs[flat] +=
                    BigRational::from(BigInt::from(d) * BigInt::from(self.p).pow(c as u32));
            }
        }
        self.mono_shift(&y, -(xi.shell as i64))
    }

    /// Number of classes with the given shell: 1 for j = 0, else
    /// (q_n − 1)·q_n^{j−1}.
    pub fn dual_shell_count(&self, n: usize, shell: usize) -> Result<f64> {
        let lv = self.level(n)?;
        if shell > n * lv.e as usize {
            return Err(Error::ShellOutOfRange {
                shell,
                lo: 0,
                hi: n * lv.e as usize,
            });
        }
        Ok(if shell == 0 {
            1.0
        } else {
            let q = self.q_f64(n);
            (q - 1.0) * q.powi(shell as i32 - 1)
        })
    }

    /// All M(n) characters of G_n, shell-major then digit-lexicographic.
    pub fn dual_enumerate(&self, n: usize) -> Result<Vec<DualIndex>> {
        let lv = self.level(n)?;
        let order = self.group_order_f64(n);
        if order > self.enum_cap as f64 {
            return Err(Error::EnumerationCapExceeded {
                level: n,
                order,
                cap: self.enum_cap,
            });
        }
        let (e, f) = (lv.e as usize, lv.f as usize);
        let mut out = vec![self.dual_zero(n)?];
        for shell in 1..=n * e {
            let ndig = shell * f;
            let mut digits = vec![0u8; ndig];
            loop {
                // Advance the digit odometer, most significant last.
                let mut i = 0;
                loop {
                    if i == ndig {
                        break;
                    }
                    digits[i] += 1;
                    if (digits[i] as u64) < self.p {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == ndig {
                    break;
                }
                if digits[..f].iter().any(|&d| d != 0) {
                    out.push(DualIndex {
                        level: n,
                        shell,
                        digits: digits.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// ⟨g, ξ⟩ = χ(T_1(ξ·rep(g))), computed exactly.
    pub fn pairing(&self, g: &Coset, xi: &DualIndex) -> Result<CharacterValue> {
        if g.level != xi.level {
            return Err(Error::LevelMismatch {
                expected: xi.level,
                got: g.level,
            });
        }
        let x = self.coset_rep(g)?;
        let xr = self.dual_rep(xi)?;
        let prod = self.fe_mul(&xr, &x)?;
        self.char_level(&prod)
    }

    /// Angle table of a character: pairing angles of the coordinate unit
    /// cosets over a common power-of-p denominator, so that
    /// angle(g) = (Σ_i coords_i · num_i) mod pk, as a fraction of pk.
    pub fn pairing_table(&self, xi: &DualIndex) -> Result<PairingTable> {
        let n = xi.level;
        let m = self.level(n)?.m as usize;
        let mut angles = Vec::with_capacity(m);
        let mut kmax: u32 = 0;
        for i in 0..m {
            let mut unit = self.coset_zero(n)?;
            unit.coords[i] = 1;
            let a = self.pairing(&unit, xi)?.angle;
            let k = denom_exponent(self.p, &a)?;
            kmax = kmax.max(k);
            angles.push(a);
        }
        let bits = kmax * (64 - self.p.leading_zeros());
        if bits > 62 {
            return Err(Error::Config(format!(
                "pairing denominator p^{kmax} overflows at level {n}"
            )));
        }
        let pk = self.p.pow(kmax);
        let nums = angles
            .iter()
            .map(|a| {
                let scaled = a * BigRational::from(BigInt::from(pk));
                use num_traits::ToPrimitive;
                scaled.numer().to_u64().expect("integral scaled angle")
            })
            .collect();
        Ok(PairingTable { pk, nums })
    }
}

/// Fast evaluator for the pairing with one fixed character.
#[derive(Debug, Clone)]
pub struct PairingTable {
    /// Common denominator p^k of all coordinate angles.
    pub pk: u64,
    /// Numerators over pk, one per coset coordinate.
    pub nums: Vec<u64>,
}

impl PairingTable {
    /// Angle numerator over `pk` of the pairing with the given coset.
    pub fn angle_num(&self, coords: &[u64]) -> u64 {
        let mut acc: u128 = 0;
        for (&c, &a) in coords.iter().zip(&self.nums) {
            acc += c as u128 * a as u128;
        }
        (acc % self.pk as u128) as u64
    }

    pub fn angle(&self, coords: &[u64]) -> f64 {
        self.angle_num(coords) as f64 / self.pk as f64
    }

    /// cos/sin of 2π·angle.
    pub fn value(&self, coords: &[u64]) -> (f64, f64) {
        let t = std::f64::consts::TAU * self.angle(coords);
        (t.cos(), t.sin())
    }

    pub fn is_trivial_on(&self, coords: &[u64]) -> bool {
        self.angle_num(coords) == 0
    }

    /// Exact Σ over all g ∈ G_n of e^{2πi·angle(g)}: the sum factorizes over
    /// coordinates into geometric sums of p^n-th roots of unity, each of
    /// which is q = p^n when the coordinate angle vanishes and 0 otherwise.
    pub fn full_group_sum(&self, q: u64) -> f64 {
        let mut total: f64 = 1.0;
        for &a in &self.nums {
            // Σ_{c=0}^{q-1} e^{2πi c a / pk} with pk | q·gcd stuff: the
            // angle a/pk has p-power order, so the sum is q·[a = 0].
            total *= if a % self.pk == 0 { q as f64 } else { 0.0 };
        }
        total
    }
}

/// k with denom(x) = p^k; errors if the denominator is not a power of p.
fn denom_exponent(p: u64, x: &BigRational) -> Result<u32> {
    let mut d = x.denom().abs();
    let pb = BigInt::from(p);
    let mut k = 0;
    while !d.is_one() {
        if (&d % &pb).is_zero() {
            d /= &pb;
            k += 1;
        } else {
            return Err(Error::NumericalFailure {
                identity: "pairing angle".into(),
                detail: "denominator is not a power of p".into(),
            });
        }
    }
    Ok(k)
}
