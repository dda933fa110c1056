//! Exact elements of the tower fields and their arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::tower::{raw_add, raw_is_zero, raw_mul, raw_scale, raw_sub, raw_val, TowerSpec};

/// An exact element of K_n in the flattened monomial basis of the atomic
/// extension chain; `coeffs` has length m_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub level: usize,
    pub coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        raw_is_zero(&self.coeffs)
    }
}

impl TowerSpec {
    pub fn fe_zero(&self, n: usize) -> Result<FieldElement> {
        let lv = self.level(n)?;
        Ok(FieldElement {
            level: n,
            coeffs: vec![BigRational::zero(); lv.m as usize],
        })
    }

    pub fn fe_from_rational(&self, n: usize, x: BigRational) -> Result<FieldElement> {
        let mut z = self.fe_zero(n)?;
        z.coeffs[0] = x;
        Ok(z)
    }

    pub fn fe_from_int(&self, n: usize, x: i64) -> Result<FieldElement> {
        self.fe_from_rational(n, BigRational::from(BigInt::from(x)))
    }

    pub fn fe_one(&self, n: usize) -> Result<FieldElement> {
        self.fe_from_int(n, 1)
    }

    /// The basis monomial with the given flat index.
    pub fn fe_monomial(&self, n: usize, flat: usize) -> Result<FieldElement> {
        let mut z = self.fe_zero(n)?;
        z.coeffs[flat] = BigRational::one();
        Ok(z)
    }

    /// The uniformizer π_n (equals p when e_n = 1).
    pub fn uniformizer(&self, n: usize) -> Result<FieldElement> {
        let lv = self.level(n)?;
        if lv.e == 1 {
            self.fe_from_int(n, self.p as i64)
        } else {
            self.fe_monomial(n, lv.eis_flat[1])
        }
    }

    /// π_n^j for any j ∈ Z, as p^c times a pure monomial.
    pub fn fe_pi_pow(&self, n: usize, j: i64) -> Result<FieldElement> {
        self.level(n)?;
        let (c, flat) = self.pi_pow_flat(n, j);
        let mut z = self.fe_zero(n)?;
        z.coeffs[flat] = rational_pow_p(self.p, c);
        Ok(z)
    }

    fn check_same_level(&self, x: &FieldElement, y: &FieldElement) -> Result<()> {
        if x.level != y.level {
            return Err(Error::LevelMismatch {
                expected: x.level,
                got: y.level,
            });
        }
        Ok(())
    }

    pub fn fe_add(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check_same_level(x, y)?;
        Ok(FieldElement {
            level: x.level,
            coeffs: raw_add(&x.coeffs, &y.coeffs),
        })
    }

    pub fn fe_sub(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check_same_level(x, y)?;
        Ok(FieldElement {
            level: x.level,
            coeffs: raw_sub(&x.coeffs, &y.coeffs),
        })
    }

    pub fn fe_neg(&self, x: &FieldElement) -> Result<FieldElement> {
        Ok(FieldElement {
            level: x.level,
            coeffs: x.coeffs.iter().map(|c| -c).collect(),
        })
    }

    pub fn fe_scale(&self, x: &FieldElement, s: &BigRational) -> FieldElement {
        FieldElement {
            level: x.level,
            coeffs: raw_scale(&x.coeffs, s),
        }
    }

    pub fn fe_mul(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        self.check_same_level(x, y)?;
        self.require_arith(x.level)?;
        Ok(FieldElement {
            level: x.level,
            coeffs: raw_mul(self.p, self.steps_for(x.level), &x.coeffs, &y.coeffs),
        })
    }

    /// Valuation normalized so v(π_n) = 1; None means +∞ (the zero element).
    pub fn valuation(&self, x: &FieldElement) -> Option<i64> {
        raw_val(self.p, self.steps_for(x.level), &x.coeffs)
    }

    /// |x|_n = q_n^{-v(x)}.
    pub fn abs_level(&self, x: &FieldElement) -> f64 {
        match self.valuation(x) {
            None => 0.0,
            Some(v) => self.q_f64(x.level).powi(-v as i32),
        }
    }

    /// ‖x‖ = |x|_n^{1/m_n} = p^{-v(x)/e_n}.
    pub fn abs_norm(&self, x: &FieldElement) -> f64 {
        match self.valuation(x) {
            None => 0.0,
            Some(v) => {
                let lv = self.level(x.level).expect("valid level");
                (self.p as f64).powf(-(v as f64) / lv.e as f64)
            }
        }
    }

    /// Structural embedding K_n → K_ν, ν ≥ n.
    pub fn embed(&self, x: &FieldElement, target: usize) -> Result<FieldElement> {
        if target < x.level {
            return Err(Error::LevelMismatch {
                expected: x.level,
                got: target,
            });
        }
        let lv = self.level(target)?;
        let mut coeffs = x.coeffs.clone();
        coeffs.resize(lv.m as usize, BigRational::zero());
        Ok(FieldElement {
            level: target,
            coeffs,
        })
    }

    /// Exact trace Tr_{K_ν/K_n}(x) as the matrix trace of multiplication by x
    /// in the monomial basis of K_ν over K_n.
    pub fn trace_rel(&self, x: &FieldElement, target: usize) -> Result<FieldElement> {
        let nu = x.level;
        if target > nu {
            return Err(Error::LevelMismatch {
                expected: nu,
                got: target,
            });
        }
        self.require_arith(nu)?;
        let m_nu = self.level(nu)?.m as usize;
        let m_n = self.level(target)?.m as usize;
        let rel = m_nu / m_n;
        let steps = self.steps_for(nu);
        let mut acc = vec![BigRational::zero(); m_n];
        for t in 0..rel {
            // x * (relative monomial t), then its diagonal K_n-coefficient.
            let mut mono = vec![BigRational::zero(); m_nu];
            mono[t * m_n] = BigRational::one();
            let prod = raw_mul(self.p, steps, &x.coeffs, &mono);
            acc = raw_add(&acc, &prod[t * m_n..(t + 1) * m_n]);
        }
        Ok(FieldElement {
            level: target,
            coeffs: acc,
        })
    }

    /// T_n(x) = (m_n/m_ν)·Tr_{K_ν/K_n}(x), the degree-normalized trace.
    pub fn t_map(&self, x: &FieldElement, target: usize) -> Result<FieldElement> {
        let tr = self.trace_rel(x, target)?;
        let m_nu = self.level(x.level)?.m;
        let m_n = self.level(target)?.m;
        let s = BigRational::new(BigInt::from(m_n), BigInt::from(m_nu));
        Ok(self.fe_scale(&tr, &s))
    }

    /// Definitional scan for the different exponent of K_n/Q_p: the largest d
    /// such that every x with |x|_n ≤ q_n^d has Tr_{K_n/Q_p}(x) ∈ Z_p.
    /// Must equal e_n - 1 on a tame tower.
    pub fn different_exponent_scan(&self, n: usize) -> Result<i64> {
        let lv = self.require_arith(n)?;
        let m = lv.m as usize;
        let e = lv.e as i64;
        let cond = |d: i64| -> Result<bool> {
            for flat in 0..m {
                let b = self.fe_monomial(n, flat)?;
                let x = self.fe_mul(&b, &self.fe_pi_pow(n, -d)?)?;
                let tr = self.trace_rel(&x, 1)?;
                if let Some(v) = crate::tower::rational_val(self.p, &tr.coeffs[0]) {
                    if v < 0 {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        };
        let mut d = -1i64;
        while d < 2 * e + 2 {
            if cond(d + 1)? {
                d += 1;
            } else {
                break;
            }
        }
        let expected = e - 1;
        if d != expected {
            return Err(Error::TamenessViolated {
                level: n,
                got: d,
                expected,
            });
        }
        Ok(d)
    }
}

/// p^c as an exact rational, c possibly negative.
pub fn rational_pow_p(p: u64, c: i64) -> BigRational {
    let pow = BigInt::from(p).pow(c.unsigned_abs() as u32);
    if c >= 0 {
        BigRational::from(pow)
    } else {
        BigRational::new(BigInt::one(), pow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TowerConfig;

    fn t1() -> TowerSpec {
        TowerSpec::build(&TowerConfig::new(2, 1.0, vec![(1, 1), (1, 2), (1, 4)])).unwrap()
    }

    fn t2() -> TowerSpec {
        TowerSpec::build(&TowerConfig::new(5, 1.0, vec![(1, 1), (2, 1), (4, 1)])).unwrap()
    }

    #[test]
    fn uniformizer_valuation() {
        let tw = t2();
        let pi = tw.uniformizer(2).unwrap();
        assert_eq!(tw.valuation(&pi), Some(1));
        let p5 = tw.fe_from_int(2, 5).unwrap();
        assert_eq!(tw.valuation(&p5), Some(2));
        assert!((tw.abs_norm(&p5) - 0.2).abs() < 1e-15);
        assert!((tw.abs_level(&pi) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn uniformizer_square_is_p() {
        let tw = t2();
        let pi = tw.uniformizer(2).unwrap();
        let sq = tw.fe_mul(&pi, &pi).unwrap();
        assert_eq!(sq, tw.fe_from_int(2, 5).unwrap());
    }

    #[test]
    fn embed_preserves_arithmetic() {
        let tw = t2();
        let pi2 = tw.uniformizer(2).unwrap();
        let up = tw.embed(&pi2, 3).unwrap();
        // π_2 = π_3^2 after embedding.
        let pi3 = tw.uniformizer(3).unwrap();
        let sq = tw.fe_mul(&pi3, &pi3).unwrap();
        assert_eq!(up, sq);
        assert_eq!(tw.valuation(&up), Some(2));
    }

    #[test]
    fn pi_pow_negative() {
        let tw = t2();
        let x = tw.fe_pi_pow(3, -1).unwrap();
        assert_eq!(tw.valuation(&x), Some(-1));
        let pi = tw.uniformizer(3).unwrap();
        assert_eq!(tw.fe_mul(&x, &pi).unwrap(), tw.fe_one(3).unwrap());
    }

    #[test]
    fn trace_of_one_is_relative_degree() {
        let tw = t1();
        let one = tw.fe_one(3).unwrap();
        let tr = tw.trace_rel(&one, 1).unwrap();
        assert_eq!(tr, tw.fe_from_int(1, 4).unwrap());
        // Normalized trace fixes constants.
        let t = tw.t_map(&one, 1).unwrap();
        assert_eq!(t, tw.fe_one(1).unwrap());
    }

    #[test]
    fn unramified_generator_trace_is_odd() {
        let tw = t1();
        // ω generates the quadratic unramified step; x^2+x+1 forces Tr(ω) = -1.
        let omega = tw.fe_monomial(2, 1).unwrap();
        let tr = tw.trace_rel(&omega, 1).unwrap();
        assert_eq!(tr, tw.fe_from_int(1, -1).unwrap());
    }

    #[test]
    fn eisenstein_generator_trace_vanishes() {
        let tw = t2();
        let pi = tw.uniformizer(2).unwrap();
        let tr = tw.trace_rel(&pi, 1).unwrap();
        assert!(tr.is_zero());
        // Tower property: trace through an intermediate level agrees.
        let pi3 = tw.uniformizer(3).unwrap();
        let direct = tw.trace_rel(&pi3, 1).unwrap();
        let mid = tw.trace_rel(&pi3, 2).unwrap();
        let chained = tw.trace_rel(&mid, 1).unwrap();
        assert_eq!(direct, chained);
    }

    #[test]
    fn different_exponents() {
        let tw = t1();
        assert_eq!(tw.different_exponent_scan(1).unwrap(), 0);
        assert_eq!(tw.different_exponent_scan(3).unwrap(), 0);
        let tw = t2();
        assert_eq!(tw.different_exponent_scan(2).unwrap(), 1);
        assert_eq!(tw.different_exponent_scan(3).unwrap(), 3);
    }

    #[test]
    fn level_mismatch_rejected() {
        let tw = t1();
        let a = tw.fe_one(1).unwrap();
        let b = tw.fe_one(2).unwrap();
        assert!(matches!(
            tw.fe_add(&a, &b),
            Err(Error::LevelMismatch { .. })
        ));
    }
}
