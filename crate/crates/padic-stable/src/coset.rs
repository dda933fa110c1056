//! The compact support group S and its finite quotients G_n = S/S_n.
//!
//! A coset at level n is stored by its m_n monomial coordinates mod p^n;
//! coset addition is coordinate-wise, with no digit carries to track.  The
//! equivalent digit picture (n·e_n residue-field digits per point) is used by
//! the jump sampler and the shell decomposition of the Lévy measure; the two
//! pictures are linked by the base-p digit bijection below.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::element::{rational_pow_p, FieldElement};
use crate::error::{Error, Result};
use crate::tower::TowerSpec;

/// An element of G_n = S/S_n: monomial coordinates mod p^n.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coset {
    pub level: usize,
    pub coords: Vec<u64>,
}

impl Coset {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl TowerSpec {
    /// p^n, the coordinate modulus of G_n.
    pub fn coset_modulus(&self, n: usize) -> Result<u64> {
        self.level(n)?;
        let bits = n as u32 * (64 - self.p.leading_zeros());
        if bits > 62 {
            return Err(Error::Config(format!(
                "coset coordinates overflow at level {n}"
            )));
        }
        Ok(self.p.pow(n as u32))
    }

    pub fn coset_zero(&self, n: usize) -> Result<Coset> {
        let m = self.level(n)?.m as usize;
        Ok(Coset {
            level: n,
            coords: vec![0; m],
        })
    }

    pub fn coset_add(&self, a: &Coset, b: &Coset) -> Result<Coset> {
        if a.level != b.level {
            return Err(Error::LevelMismatch {
                expected: a.level,
                got: b.level,
            });
        }
        let q = self.coset_modulus(a.level)?;
        Ok(Coset {
            level: a.level,
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| (x + y) % q)
                .collect(),
        })
    }

    pub fn coset_neg(&self, a: &Coset) -> Result<Coset> {
        let q = self.coset_modulus(a.level)?;
        Ok(Coset {
            level: a.level,
            coords: a.coords.iter().map(|&x| (q - x % q) % q).collect(),
        })
    }

    pub fn coset_sub(&self, a: &Coset, b: &Coset) -> Result<Coset> {
        self.coset_add(a, &self.coset_neg(b)?)
    }

    /// Digit array of a coset: digits[j * f_n + u] ∈ [0, p) is the
    /// coefficient of the u-th unramified monomial in the j-th π-digit,
    /// j ∈ 0..n·e_n.  coords[(u, r)] = Σ_c digits[(r + c·e_n) f + u]·p^c.
    pub fn coset_digits(&self, g: &Coset) -> Result<Vec<u8>> {
        let lv = self.level(g.level)?;
        self.coset_modulus(g.level)?;
        let (e, f) = (lv.e as usize, lv.f as usize);
        let mut digits = vec![0u8; g.level * e * f];
        for (i, &c) in g.coords.iter().enumerate() {
            let u = lv.flat_u[i];
            let r = lv.flat_r[i] as usize;
            let mut c = c;
            for cc in 0..g.level {
                digits[(r + cc * e) * f + u] = (c % self.p) as u8;
                c /= self.p;
            }
        }
        Ok(digits)
    }

    pub fn coset_from_digits(&self, n: usize, digits: &[u8]) -> Result<Coset> {
        let lv = self.level(n)?;
        self.coset_modulus(n)?;
        let (e, f, m) = (lv.e as usize, lv.f as usize, lv.m as usize);
        if digits.len() != n * e * f {
            return Err(Error::Config(format!(
                "expected {} digits at level {n}, got {}",
                n * e * f,
                digits.len()
            )));
        }
        let mut coords = vec![0u64; m];
        for (i, c) in coords.iter_mut().enumerate() {
            let u = lv.flat_u[i];
            let r = lv.flat_r[i] as usize;
            for cc in (0..n).rev() {
                *c = *c * self.p + digits[(r + cc * e) * f + u] as u64;
            }
        }
        Ok(Coset { level: n, coords })
    }

    /// Mixed-radix enumeration index, coordinate 0 fastest.  Only usable at
    /// levels whose group order fits the enumeration cap.
    pub fn coset_unrank(&self, n: usize, k: u64) -> Result<Coset> {
        let m = self.level(n)?.m as usize;
        let q = self.coset_modulus(n)?;
        let mut coords = vec![0u64; m];
        let mut k = k;
        for c in coords.iter_mut() {
            *c = k % q;
            k /= q;
        }
        if k != 0 {
            return Err(Error::EnumerationCapExceeded {
                level: n,
                order: self.group_order_f64(n),
                cap: self.enum_cap,
            });
        }
        Ok(Coset { level: n, coords })
    }

    pub fn coset_rank(&self, g: &Coset) -> Result<u64> {
        let q = self.coset_modulus(g.level)?;
        let mut k: u64 = 0;
        for &c in g.coords.iter().rev() {
            k = k
                .checked_mul(q)
                .and_then(|k| k.checked_add(c))
                .ok_or(Error::EnumerationCapExceeded {
                    level: g.level,
                    order: self.group_order_f64(g.level),
                    cap: self.enum_cap,
                })?;
        }
        Ok(k)
    }

    /// Index of the first nonzero π-digit (the shell of the jump measure);
    /// None for the identity coset.  Equals the valuation of the digit part.
    pub fn coset_shell(&self, g: &Coset) -> Result<Option<usize>> {
        let lv = self.level(g.level)?;
        let e = lv.e as usize;
        let mut best: Option<usize> = None;
        for (i, &c) in g.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = lv.flat_r[i] as usize;
            let mut c = c;
            let mut cc = 0;
            while c % self.p == 0 {
                c /= self.p;
                cc += 1;
            }
            let j = r + cc * e;
            best = Some(best.map_or(j, |b| b.min(j)));
        }
        Ok(best)
    }

    /// π_n^j · x computed structurally (monomial permutation and p-powers),
    /// valid at every level regardless of the arithmetic cap.
    pub fn mono_shift(&self, x: &FieldElement, j: i64) -> Result<FieldElement> {
        let lv = self.level(x.level)?;
        let e = lv.e as i64;
        let mut out = self.fe_zero(x.level)?;
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let total = lv.flat_r[i] as i64 + j;
            let cc = total.div_euclid(e);
            let rr = total.rem_euclid(e) as usize;
            let flat = lv.unram_flat[lv.flat_u[i]] + lv.eis_flat[rr];
            out.coeffs[flat] += c * rational_pow_p(self.p, cc);
        }
        Ok(out)
    }

    /// Canonical representative in K_n: m_n·π_n^{-d_n}·Σ_j lift(a_j)·π_n^j.
    pub fn coset_rep(&self, g: &Coset) -> Result<FieldElement> {
        let lv = self.level(g.level)?;
        let digit_part = FieldElement {
            level: g.level,
            coeffs: g
                .coords
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        };
        let shifted = self.mono_shift(&digit_part, -(lv.d as i64))?;
        Ok(self.fe_scale(&shifted, &BigRational::from(BigInt::from(lv.m))))
    }

    /// Inverse of `coset_rep`: the class of x ∈ m_n π_n^{-d_n} O_n in G_n.
    pub fn coset_of(&self, x: &FieldElement) -> Result<Coset> {
        let n = x.level;
        let lv = self.level(n)?;
        let q = self.coset_modulus(n)?;
        let y = self.mono_shift(x, lv.d as i64)?;
        let scale = BigRational::new(BigInt::one(), BigInt::from(lv.m));
        let mut coords = Vec::with_capacity(lv.m as usize);
        for c in &y.coeffs {
            let c = c * &scale;
            coords.push(residue_mod(self.p, &c, q).ok_or(Error::OutOfBall { level: n })?);
        }
        Ok(Coset { level: n, coords })
    }

    /// Natural surjection G_ν → G_n (ν ≥ n) via the normalized trace.
    pub fn coset_project(&self, g: &Coset, n: usize) -> Result<Coset> {
        if n > g.level {
            return Err(Error::InvalidLevels {
                n_small: n,
                n_big: g.level,
            });
        }
        let x = self.coset_rep(g)?;
        let t = self.t_map(&x, n)?;
        self.coset_of(&t)
    }

    /// Depth of g in the filtration S = S_0 ⊃ S_1 ⊃ …: the largest N ≤ level
    /// with rep(g) ∈ S_N, detected through the normalized trace to level N.
    pub fn delta_level(&self, g: &Coset) -> Result<usize> {
        let x = self.coset_rep(g)?;
        let mut delta = 0;
        for nn in 1..=g.level {
            if self.in_s_level(&x, nn)? {
                delta = nn;
            } else {
                break;
            }
        }
        Ok(delta)
    }

    /// rep ∈ S_N ⟺ v_N(T_N(rep)) ≥ N·e_N - d_N + v_N(m_N).
    fn in_s_level(&self, x: &FieldElement, nn: usize) -> Result<bool> {
        let lv = self.level(nn)?;
        let t = self.t_map(x, nn)?;
        let threshold = nn as i64 * lv.e as i64 - lv.d as i64
            + lv.e as i64 * int_val(self.p, lv.m) as i64;
        Ok(match self.valuation(&t) {
            None => true,
            Some(v) => v >= threshold,
        })
    }

    /// |g| on G_n: 0 for the identity, 1 outside S_1, else M(δ)^{-1} for
    /// g ∈ S_δ ∖ S_{δ+1}.
    pub fn ultrametric_value(&self, g: &Coset) -> Result<BigRational> {
        if g.is_zero() {
            return Ok(BigRational::zero());
        }
        let delta = self.delta_level(g)?;
        if delta == 0 {
            return Ok(BigRational::one());
        }
        Ok(BigRational::new(
            BigInt::one(),
            BigInt::from(self.group_order(delta)),
        ))
    }

    /// Ultrametric distance Δ(g,h) = |g-h|.  Equal cosets cannot be
    /// separated at this resolution.
    pub fn coset_dist(&self, g: &Coset, h: &Coset) -> Result<BigRational> {
        let diff = self.coset_sub(g, h)?;
        if diff.is_zero() {
            return Err(Error::Unresolvable { level: g.level });
        }
        self.ultrametric_value(&diff)
    }

    /// Exactness of the scaled trace image: T_n maps the level-ν copy of S_N
    /// onto π_n^{c} O_n with c = N·e_n - d_n + v_n(m_n).  Checks containment
    /// (p-integrality after scaling by π_n^{-c}) and fullness (mod-p rank m_n).
    pub fn trace_image_check(&self, n: usize, nu: usize, big_n: usize) -> Result<()> {
        if nu < n {
            return Err(Error::InvalidLevels {
                n_small: n,
                n_big: nu,
            });
        }
        let lvn = self.level(n)?;
        let lvv = self.require_arith(nu)?;
        let c = big_n as i64 * lvn.e as i64 - lvn.d as i64
            + lvn.e as i64 * int_val(self.p, lvn.m) as i64;
        let scale = rational_pow_p(self.p, big_n as i64)
            * BigRational::from(BigInt::from(lvv.m));
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(lvv.m as usize);
        for i in 0..lvv.m as usize {
            // Generator m_ν·π_ν^{-d_ν}·p^N·b_i of the level-ν copy of S_N.
            let b = self.fe_monomial(nu, i)?;
            let shifted = self.mono_shift(&b, -(lvv.d as i64))?;
            let gen = self.fe_scale(&shifted, &scale);
            let t = self.t_map(&gen, n)?;
            let u = self.mono_shift(&t, -c)?;
            let mut row = Vec::with_capacity(lvn.m as usize);
            for coeff in &u.coeffs {
                let r = residue_mod(self.p, coeff, self.p).ok_or_else(|| {
                    Error::NumericalFailure {
                        identity: "trace image".into(),
                        detail: format!(
                            "generator {i} maps outside the expected ball (n={n}, ν={nu}, N={big_n})"
                        ),
                    }
                })?;
                row.push(r);
            }
            rows.push(row);
        }
        let rank = mod_p_rank(self.p, rows);
        if rank != lvn.m as usize {
            return Err(Error::NumericalFailure {
                identity: "trace image".into(),
                detail: format!(
                    "mod-p rank {rank} < {} (n={n}, ν={nu}, N={big_n})",
                    lvn.m
                ),
            });
        }
        Ok(())
    }
}

/// v_p of a u64.
pub(crate) fn int_val(p: u64, mut n: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Residue of a p-integral rational mod q (q a power of p); None when the
/// denominator is divisible by p or the value is not an integer mod q.
pub(crate) fn residue_mod(p: u64, x: &BigRational, q: u64) -> Option<u64> {
    use num_traits::ToPrimitive;
    let qb = BigInt::from(q);
    let den = x.denom().abs();
    if (&den % BigInt::from(p)).is_zero() {
        return None;
    }
    let g = den.extended_gcd(&qb);
    let a = (x.numer() * g.x).mod_floor(&qb);
    a.to_u64()
}

/// Row rank of a matrix over F_p.
fn mod_p_rank(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let pivot = (rank..rows.len()).find(|&r| rows[r][col] % p != 0);
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let inv = crate::coset::mod_inv_u64(rows[rank][col] % p, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] % p != 0 {
                let factor = rows[r][col] % p * inv % p;
                for c in col..ncols {
                    rows[r][c] = (rows[r][c] + (p - factor) * rows[rank][c]) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub(crate) fn mod_inv_u64(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
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
    fn digit_coordinate_bijection() {
        let tw = t2();
        for k in [0u64, 1, 7, 24, 123, 624] {
            let g = tw.coset_unrank(2, k).unwrap();
            let digits = tw.coset_digits(&g).unwrap();
            assert_eq!(digits.len(), 2 * 2 * 1);
            let back = tw.coset_from_digits(2, &digits).unwrap();
            assert_eq!(back, g);
            assert_eq!(tw.coset_rank(&g).unwrap(), k);
        }
    }

    #[test]
    fn rep_round_trip() {
        let tw = t1();
        for k in [0u64, 1, 5, 100, 4095] {
            let g = tw.coset_unrank(3, k).unwrap();
            let x = tw.coset_rep(&g).unwrap();
            assert_eq!(tw.coset_of(&x).unwrap(), g);
        }
        let tw = t2();
        for k in [0u64, 3, 600, 624] {
            let g = tw.coset_unrank(2, k).unwrap();
            let x = tw.coset_rep(&g).unwrap();
            assert_eq!(tw.coset_of(&x).unwrap(), g);
        }
    }

    #[test]
    fn rep_of_identity_modulo_subgroup() {
        // rep differs from any other representative by an element of S_n:
        // adding p^n to a coordinate must not change the coset.
        let tw = t2();
        let g = tw.coset_unrank(2, 77).unwrap();
        let mut x = tw.coset_rep(&g).unwrap();
        let bump = tw.fe_scale(
            &tw.coset_rep(&tw.coset_unrank(2, 1).unwrap()).unwrap(),
            &BigRational::from(BigInt::from(25)),
        );
        x = tw.fe_add(&x, &bump).unwrap();
        assert_eq!(tw.coset_of(&x).unwrap(), g);
    }

    #[test]
    fn shell_matches_first_digit() {
        let tw = t2();
        // Level 2: digits j ∈ 0..4 over F_5.
        let g = tw.coset_from_digits(2, &[0, 0, 3, 1]).unwrap();
        assert_eq!(tw.coset_shell(&g).unwrap(), Some(2));
        let z = tw.coset_zero(2).unwrap();
        assert_eq!(tw.coset_shell(&z).unwrap(), None);
        let g = tw.coset_from_digits(2, &[4, 0, 0, 0]).unwrap();
        assert_eq!(tw.coset_shell(&g).unwrap(), Some(0));
    }

    #[test]
    fn membership_depends_on_digit_not_shell() {
        // Two cosets with the same shell but different depth in the S-chain.
        let tw = t1();
        // Level 2, digits (a_0, a_1) over F_4 as pairs of F_2 coordinates.
        let g1 = tw.coset_from_digits(2, &[1, 0, 0, 0]).unwrap(); // a_0 = 1
        let gw = tw.coset_from_digits(2, &[0, 1, 0, 0]).unwrap(); // a_0 = ω
        assert_eq!(tw.coset_shell(&g1).unwrap(), Some(0));
        assert_eq!(tw.coset_shell(&gw).unwrap(), Some(0));
        assert_eq!(tw.delta_level(&g1).unwrap(), 1);
        assert_eq!(tw.delta_level(&gw).unwrap(), 0);
    }

    #[test]
    fn projection_is_homomorphism() {
        let tw = t2();
        for (a, b) in [(3u64, 77u64), (100, 523), (624, 1)] {
            let ga = tw.coset_unrank(2, a).unwrap();
            let gb = tw.coset_unrank(2, b).unwrap();
            let sum = tw.coset_add(&ga, &gb).unwrap();
            let lhs = tw.coset_project(&sum, 1).unwrap();
            let rhs = tw
                .coset_add(
                    &tw.coset_project(&ga, 1).unwrap(),
                    &tw.coset_project(&gb, 1).unwrap(),
                )
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn distance_is_ultrametric() {
        let tw = t1();
        let g = tw.coset_unrank(2, 5).unwrap();
        let h = tw.coset_unrank(2, 9).unwrap();
        let k = tw.coset_unrank(2, 14).unwrap();
        let dgh = tw.coset_dist(&g, &h).unwrap();
        let dgk = tw.coset_dist(&g, &k).unwrap();
        let dkh = tw.coset_dist(&k, &h).unwrap();
        assert!(dgh <= dgk.clone().max(dkh.clone()));
        assert!(matches!(
            tw.coset_dist(&g, &g),
            Err(Error::Unresolvable { .. })
        ));
        let z = tw.coset_zero(2).unwrap();
        assert!(tw.ultrametric_value(&z).unwrap().is_zero());
        // Value set is {0, 1, M(N)^{-1}}.
        for d in [&dgh, &dgk, &dkh] {
            let one = BigRational::one();
            let m1 = BigRational::new(BigInt::one(), BigInt::from(tw.group_order(1)));
            let m2 = BigRational::new(BigInt::one(), BigInt::from(tw.group_order(2)));
            assert!(*d == one || *d == m1 || *d == m2);
        }
    }

    #[test]
    fn trace_image_full() {
        let tw = t2();
        tw.trace_image_check(1, 2, 1).unwrap();
        tw.trace_image_check(1, 3, 1).unwrap();
        tw.trace_image_check(2, 3, 2).unwrap();
        let tw = t1();
        tw.trace_image_check(1, 3, 2).unwrap();
        tw.trace_image_check(2, 3, 1).unwrap();
    }
}
