//! The extension tower Q_p = K_1 ⊂ K_2 ⊂ … and its exact arithmetic backbone.
//!
//! Each level K_n is reached from K_{n-1} by at most two atomic steps: an
//! unramified step adjoining a root of a lifted irreducible polynomial over
//! the residue field, then an Eisenstein step adjoining y with y^{e'} = π
//! (π the previous uniformizer).  Elements live in the flattened monomial
//! basis of the atomic chain with exact rational coefficients, so embeddings
//! along the tower are structural and every trace is exact linear algebra.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::config::TowerConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Unramified,
    Eisenstein,
}

/// One atomic extension in the chain.
#[derive(Debug, Clone)]
pub struct Step {
    pub kind: StepKind,
    pub deg: usize,
    /// Product of the degrees of all earlier steps.
    pub dim_before: usize,
    /// For an Eisenstein step: flat index of the previous Eisenstein
    /// generator in the sub-ring, or None when the previous uniformizer is p.
    pub prev_eis_flat: Option<usize>,
    /// Coefficients m_0..m_{deg-1} of the monic modulus g^deg + Σ m_i g^i,
    /// each a coefficient vector over the sub-ring.  Only present for
    /// unramified steps at levels within the arithmetic cap.
    pub modulus: Option<Vec<Vec<BigRational>>>,
}

/// Per-level derived data: ramification invariants and monomial layout.
#[derive(Debug, Clone)]
pub struct LevelData {
    pub e: u64,
    pub f: u64,
    pub m: u64,
    /// Different exponent of K_n/Q_p; equals e - 1 for tame towers.
    pub d: u64,
    /// Number of atomic steps up to and including this level.
    pub nsteps: usize,
    /// Flat indices of the f_n unramified monomials, ascending.
    pub unram_flat: Vec<usize>,
    /// eis_flat[r] = flat index of the monomial π_n^r, r in 0..e_n.
    pub eis_flat: Vec<usize>,
    /// flat_u[i] = position in unram_flat of the unramified part of monomial i.
    pub flat_u: Vec<usize>,
    /// flat_r[i] = π-power of the Eisenstein part of monomial i.
    pub flat_r: Vec<u64>,
}

/// Validated description of the tower, with enough layout data for every
/// configured level and exact field arithmetic built up to `n_arith`.
#[derive(Debug)]
pub struct TowerSpec {
    pub p: u64,
    pub alpha: f64,
    pub seed: u64,
    pub enum_cap: u64,
    /// Deepest level with exact field arithmetic.
    pub n_arith: usize,
    /// Deepest level whose quotient group G_n may be fully enumerated.
    pub n_enum: usize,
    levels: Vec<LevelData>,
    steps: Vec<Step>,
}

impl TowerSpec {
    pub fn build(cfg: &TowerConfig) -> Result<Self> {
        cfg.validate()?;
        let p = cfg.p;
        let l = cfg.levels.len();

        // Tower invariants.
        if cfg.levels[0] != (1, 1) {
            return Err(Error::Config("first level must be (e, f) = (1, 1)".into()));
        }
        for (i, &(e, f)) in cfg.levels.iter().enumerate() {
            let n = i + 1;
            if e % p == 0 {
                return Err(Error::WildRamification { p, level: n, e });
            }
            if i > 0 {
                let (ep, fp) = cfg.levels[i - 1];
                if e % ep != 0 || f % fp != 0 {
                    return Err(Error::NonDivisibleTower { level: n });
                }
                if e * f <= ep * fp {
                    return Err(Error::NotIncreasing { level: n });
                }
            }
        }

        // Atomic steps (layout only).
        let mut steps: Vec<Step> = Vec::new();
        let mut nsteps_at = vec![0usize; l];
        let mut last_eis: Option<usize> = None;
        for i in 1..l {
            let (e, f) = cfg.levels[i];
            let (ep, fp) = cfg.levels[i - 1];
            let dim: usize = steps.iter().map(|s| s.deg).product();
            let frel = (f / fp) as usize;
            let erel = (e / ep) as usize;
            if frel > 1 {
                steps.push(Step {
                    kind: StepKind::Unramified,
                    deg: frel,
                    dim_before: dim,
                    prev_eis_flat: None,
                    modulus: None,
                });
            }
            if erel > 1 {
                let dim: usize = steps.iter().map(|s| s.deg).product();
                steps.push(Step {
                    kind: StepKind::Eisenstein,
                    deg: erel,
                    dim_before: dim,
                    prev_eis_flat: last_eis,
                    modulus: None,
                });
                last_eis = Some(dim);
            }
            nsteps_at[i] = steps.len();
        }

        // Per-level monomial layout.
        let mut levels: Vec<LevelData> = Vec::with_capacity(l);
        for i in 0..l {
            let (e, f) = cfg.levels[i];
            let m = e * f;
            let ns = nsteps_at[i];
            let sub = &steps[..ns];
            let dim = m as usize;
            let mut unram_flat = Vec::new();
            let mut flat_u = vec![0usize; dim];
            let mut flat_r = vec![0u64; dim];
            for idx in 0..dim {
                // Decompose into step digits.
                let mut rem = idx;
                let mut digits = vec![0usize; ns];
                for (s, st) in sub.iter().enumerate().rev() {
                    digits[s] = rem / st.dim_before;
                    rem %= st.dim_before;
                }
                let eis_zero = sub
                    .iter()
                    .zip(&digits)
                    .all(|(st, &k)| st.kind != StepKind::Eisenstein || k == 0);
                if eis_zero {
                    unram_flat.push(idx);
                }
                // π-power of the Eisenstein part, chronological fold.
                let mut r: u64 = 0;
                for (s, st) in sub.iter().enumerate() {
                    if st.kind == StepKind::Eisenstein {
                        r = r * st.deg as u64 + digits[s] as u64;
                    }
                }
                flat_r[idx] = r;
                // Flat index of the unramified part.
                let uidx: usize = sub
                    .iter()
                    .zip(&digits)
                    .filter(|(st, _)| st.kind == StepKind::Unramified)
                    .map(|(st, &k)| k * st.dim_before)
                    .sum();
                flat_u[idx] = uidx; // temporarily the flat index; ranked below
            }
            debug_assert_eq!(unram_flat.len(), f as usize);
            // eis_flat[r] via mixed-radix digits, last Eisenstein step fastest.
            let eis_degs: Vec<(usize, usize)> = sub
                .iter()
                .filter(|st| st.kind == StepKind::Eisenstein)
                .map(|st| (st.deg, st.dim_before))
                .collect();
            let mut eis_flat = vec![0usize; e as usize];
            for r in 0..e as usize {
                let mut rem = r;
                let mut flat = 0usize;
                for &(deg, dimb) in eis_degs.iter().rev() {
                    flat += (rem % deg) * dimb;
                    rem /= deg;
                }
                eis_flat[r] = flat;
            }
            // Rank the unramified parts.
            for idx in 0..dim {
                let uflat = flat_u[idx];
                let rank = unram_flat.binary_search(&uflat).expect("unramified part");
                flat_u[idx] = rank;
            }
            levels.push(LevelData {
                e,
                f,
                m,
                d: e - 1,
                nsteps: ns,
                unram_flat,
                eis_flat,
                flat_u,
                flat_r,
            });
        }

        let enum_cap = cfg.enum_cap.unwrap_or(1 << 20);
        let n_enum = {
            let mut n = 1;
            for i in 1..l {
                let bits = (i + 1) as f64 * levels[i].m as f64 * (p as f64).log2();
                if bits <= (enum_cap as f64).log2() {
                    n = i + 1;
                }
            }
            n
        };
        let n_arith = match cfg.max_field_level {
            Some(n) => n.min(l),
            None => {
                let mut n = 1;
                for i in 1..l {
                    if levels[i].m <= 16 {
                        n = i + 1;
                    }
                }
                n
            }
        };

        let mut tower = TowerSpec {
            p,
            alpha: cfg.alpha,
            seed: cfg.seed.unwrap_or(0),
            enum_cap,
            n_arith,
            n_enum,
            levels,
            steps,
        };
        tower.build_moduli()?;
        Ok(tower)
    }

    /// Fill in the unramified moduli for all steps within the arithmetic cap.
    fn build_moduli(&mut self) -> Result<()> {
        let cap_steps = self.levels[self.n_arith - 1].nsteps;
        for s in 0..cap_steps {
            if self.steps[s].kind != StepKind::Unramified {
                continue;
            }
            let deg = self.steps[s].deg;
            let modulus = {
                let prefix = &self.steps[..s];
                find_unramified_modulus(self.p, prefix, deg)?
            };
            self.steps[s].modulus = Some(modulus);
        }
        Ok(())
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> Result<&LevelData> {
        if n == 0 || n > self.levels.len() {
            return Err(Error::LevelMismatch {
                expected: self.levels.len(),
                got: n,
            });
        }
        Ok(&self.levels[n - 1])
    }

    pub fn require_arith(&self, n: usize) -> Result<&LevelData> {
        let lv = self.level(n)?;
        if n > self.n_arith {
            return Err(Error::CapExceeded {
                level: n,
                cap: self.n_arith,
            });
        }
        Ok(lv)
    }

    pub(crate) fn steps_for(&self, n: usize) -> &[Step] {
        &self.steps[..self.levels[n - 1].nsteps]
    }

    pub fn q_f64(&self, n: usize) -> f64 {
        (self.p as f64).powi(self.levels[n - 1].f as i32)
    }

    pub fn q_big(&self, n: usize) -> BigUint {
        BigUint::from(self.p).pow(self.levels[n - 1].f as u32)
    }

    /// M(n) = q_1^{n m_n}, the order of G_n = S/S_n.
    pub fn group_order(&self, n: usize) -> BigUint {
        BigUint::from(self.p).pow(n as u32 * self.levels[n - 1].m as u32)
    }

    pub fn group_order_f64(&self, n: usize) -> f64 {
        (self.p as f64).powi((n as u64 * self.levels[n - 1].m) as i32)
    }

    pub fn log_group_order(&self, n: usize) -> f64 {
        n as f64 * self.levels[n - 1].m as f64 * (self.p as f64).ln()
    }

    /// μ of a union of k distinct cosets of S_n.
    pub fn haar_cylinder(&self, n: usize, k: &BigUint) -> Result<BigRational> {
        self.level(n)?;
        Ok(BigRational::new(
            BigInt::from(k.clone()),
            BigInt::from(self.group_order(n)),
        ))
    }

    /// π_n^j = p^c · (pure monomial), any j ∈ Z.  Returns (c, flat index).
    pub fn pi_pow_flat(&self, n: usize, j: i64) -> (i64, usize) {
        let lv = &self.levels[n - 1];
        let e = lv.e as i64;
        let c = j.div_euclid(e);
        let r = j.rem_euclid(e) as usize;
        (c, lv.eis_flat[r])
    }
}

// ---------------------------------------------------------------------------
// Raw arithmetic on coefficient vectors over a step prefix.
// ---------------------------------------------------------------------------

pub(crate) fn raw_is_zero(v: &[BigRational]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub(crate) fn raw_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn raw_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn raw_scale(a: &[BigRational], s: &BigRational) -> Vec<BigRational> {
    a.iter().map(|x| x * s).collect()
}

/// Exact product in the quotient ring defined by `steps`.
pub(crate) fn raw_mul(p: u64, steps: &[Step], a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if steps.is_empty() {
        return vec![&a[0] * &b[0]];
    }
    let st = steps.last().unwrap();
    let prefix = &steps[..steps.len() - 1];
    let d = st.deg;
    let w = st.dim_before;
    // Schoolbook convolution of degree-d polynomials over the sub-ring.
    let mut conv: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); w]; 2 * d - 1];
    for i in 0..d {
        let ai = &a[i * w..(i + 1) * w];
        if raw_is_zero(ai) {
            continue;
        }
        for j in 0..d {
            let bj = &b[j * w..(j + 1) * w];
            if raw_is_zero(bj) {
                continue;
            }
            let prod = raw_mul(p, prefix, ai, bj);
            conv[i + j] = raw_add(&conv[i + j], &prod);
        }
    }
    // Reduce powers g^d .. g^{2d-2}.
    for k in (d..2 * d - 1).rev() {
        let t = std::mem::replace(&mut conv[k], vec![BigRational::zero(); w]);
        if raw_is_zero(&t) {
            continue;
        }
        match st.kind {
            StepKind::Eisenstein => {
                let red = match st.prev_eis_flat {
                    Some(flat) => {
                        let mut pi = vec![BigRational::zero(); w];
                        pi[flat] = BigRational::one();
                        raw_mul(p, prefix, &t, &pi)
                    }
                    None => raw_scale(&t, &BigRational::from(BigInt::from(p))),
                };
                conv[k - d] = raw_add(&conv[k - d], &red);
            }
            StepKind::Unramified => {
                let modulus = st
                    .modulus
                    .as_ref()
                    .expect("unramified modulus within arithmetic cap");
                for (i, mi) in modulus.iter().enumerate() {
                    if raw_is_zero(mi) {
                        continue;
                    }
                    let prod = raw_mul(p, prefix, &t, mi);
                    conv[k - d + i] = raw_sub(&conv[k - d + i], &prod);
                }
            }
        }
    }
    conv.truncate(d);
    conv.concat()
}

/// p-adic valuation of a rational; None for zero.
pub(crate) fn rational_val(p: u64, x: &BigRational) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v: i64 = 0;
    let mut n = x.numer().abs();
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &pb).is_zero() {
        d /= &pb;
        v -= 1;
    }
    Some(v)
}

/// Valuation in units of the uniformizer after the given step prefix.
pub(crate) fn raw_val(p: u64, steps: &[Step], coeffs: &[BigRational]) -> Option<i64> {
    if steps.is_empty() {
        return rational_val(p, &coeffs[0]);
    }
    let st = steps.last().unwrap();
    let prefix = &steps[..steps.len() - 1];
    let d = st.deg;
    let w = st.dim_before;
    let mut best: Option<i64> = None;
    for k in 0..d {
        let chunk = &coeffs[k * w..(k + 1) * w];
        if let Some(v) = raw_val(p, prefix, chunk) {
            let v = match st.kind {
                StepKind::Unramified => v,
                StepKind::Eisenstein => (d as i64) * v + k as i64,
            };
            best = Some(best.map_or(v, |b: i64| b.min(v)));
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Residue field of a step prefix (generated by the unramified steps), used
// to pick the defining polynomial of the next unramified step.
// ---------------------------------------------------------------------------

struct ResCtx<'a> {
    p: u64,
    steps: &'a [Step],
    /// Flat indices of the unramified monomials in the prefix ring.
    unram_flat: Vec<usize>,
    dim: usize,
}

impl<'a> ResCtx<'a> {
    fn new(p: u64, steps: &'a [Step]) -> Self {
        let dim: usize = steps.iter().map(|s| s.deg).product();
        let mut unram_flat = Vec::new();
        for idx in 0..dim {
            let mut rem = idx;
            let mut ok = true;
            for st in steps.iter().rev() {
                let k = rem / st.dim_before;
                rem %= st.dim_before;
                if st.kind == StepKind::Eisenstein && k != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                unram_flat.push(idx);
            }
        }
        ResCtx {
            p,
            steps,
            unram_flat,
            dim,
        }
    }

    fn fsize(&self) -> usize {
        self.unram_flat.len()
    }

    /// Field cardinality; the arithmetic cap keeps this within u64.
    fn q(&self) -> u64 {
        self.p.pow(self.fsize() as u32)
    }

    fn zero(&self) -> Vec<u64> {
        vec![0; self.fsize()]
    }

    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn elem_of_index(&self, mut k: u64) -> Vec<u64> {
        let mut v = self.zero();
        for c in v.iter_mut() {
            *c = k % self.p;
            k /= self.p;
        }
        v
    }

    fn lift(&self, a: &[u64]) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.dim];
        for (i, &c) in a.iter().enumerate() {
            v[self.unram_flat[i]] = BigRational::from(BigInt::from(c));
        }
        v
    }

    fn residue(&self, v: &[BigRational]) -> Vec<u64> {
        let pb = BigInt::from(self.p);
        self.unram_flat
            .iter()
            .map(|&i| {
                let c = &v[i];
                debug_assert!(c.denom().is_one() || !(c.denom() % &pb).is_zero() || c.is_zero());
                let n = c.numer().mod_floor_u64(self.p);
                let d = c.denom().mod_floor_u64(self.p);
                if n == 0 {
                    0
                } else {
                    n * mod_inv(d, self.p) % self.p
                }
            })
            .collect()
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x % self.p) % self.p).collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let prod = raw_mul(self.p, self.steps, &self.lift(a), &self.lift(b));
        self.residue(&prod)
    }

    fn pow(&self, a: &[u64], e: &BigUint) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        for bit in 0..e.bits() {
            if e.bit(bit) {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
        }
        acc
    }

    fn inv(&self, a: &[u64]) -> Vec<u64> {
        self.pow(a, &(BigUint::from(self.q()) - 2u32))
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(m)).to_u64().unwrap()
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
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

// Dense polynomials over the residue field, coefficients lowest first.
fn poly_trim(ctx: &ResCtx, mut v: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    while v.len() > 0 && ctx.is_zero(v.last().unwrap()) {
        v.pop();
    }
    v
}

fn poly_mulmod(ctx: &ResCtx, a: &[Vec<u64>], b: &[Vec<u64>], m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let d = m.len() - 1; // m monic of degree d
    let mut conv = vec![ctx.zero(); a.len() + b.len()];
    for (i, ai) in a.iter().enumerate() {
        if ctx.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if ctx.is_zero(bj) {
                continue;
            }
            let prod = ctx.mul(ai, bj);
            conv[i + j] = ctx.add(&conv[i + j], &prod);
        }
    }
    for k in (d..conv.len()).rev() {
        let t = std::mem::replace(&mut conv[k], ctx.zero());
        if ctx.is_zero(&t) {
            continue;
        }
        for i in 0..d {
            let prod = ctx.mul(&t, &m[i]);
            conv[k - d + i] = ctx.add(&conv[k - d + i], &ctx.neg(&prod));
        }
    }
    conv.truncate(d);
    conv
}

fn poly_powmod(ctx: &ResCtx, base: &[Vec<u64>], e: &BigUint, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut acc = vec![ctx.one()];
    acc.resize(m.len() - 1, ctx.zero());
    let mut b = base.to_vec();
    for bit in 0..e.bits() {
        if e.bit(bit) {
            acc = poly_mulmod(ctx, &acc, &b, m);
        }
        b = poly_mulmod(ctx, &b, &b, m);
    }
    acc
}

fn poly_rem(ctx: &ResCtx, a: Vec<Vec<u64>>, b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut a = poly_trim(ctx, a);
    let lead_inv = ctx.inv(b.last().unwrap());
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let factor = ctx.mul(a.last().unwrap(), &lead_inv);
        for (i, bi) in b.iter().enumerate() {
            let prod = ctx.mul(&factor, bi);
            a[shift + i] = ctx.add(&a[shift + i], &ctx.neg(&prod));
        }
        a = poly_trim(ctx, a);
    }
    a
}

fn poly_gcd(ctx: &ResCtx, a: Vec<Vec<u64>>, b: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut a = poly_trim(ctx, a);
    let mut b = poly_trim(ctx, b);
    while !b.is_empty() {
        let r = poly_rem(ctx, a, &b);
        a = b;
        b = r;
    }
    a
}

fn is_irreducible(ctx: &ResCtx, modulus: &[Vec<u64>]) -> bool {
    let deg = modulus.len() - 1;
    debug_assert!(deg >= 2);
    let q = BigUint::from(ctx.q());
    let mut x = vec![ctx.zero(); deg];
    x[1] = ctx.one();
    // x^{q^deg} == x mod modulus
    let xq = poly_powmod(ctx, &x, &q.pow(deg as u32), modulus);
    let mut diff = xq;
    for (i, b) in x.iter().enumerate() {
        diff[i] = ctx.add(&diff[i], &ctx.neg(b));
    }
    if !poly_trim(ctx, diff).is_empty() {
        return false;
    }
    // gcd(x^{q^{deg/r}} - x, modulus) == 1 for prime r | deg
    for r in prime_factors(deg) {
        let xr = poly_powmod(ctx, &x, &q.pow((deg / r) as u32), modulus);
        let mut diff = xr;
        for (i, b) in x.iter().enumerate() {
            diff[i] = ctx.add(&diff[i], &ctx.neg(b));
        }
        let g = poly_gcd(ctx, diff, modulus.to_vec());
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Deterministic choice of the defining polynomial for an unramified step:
/// the first monic irreducible of the required degree over the residue field
/// under a fixed coefficient ordering.
fn find_unramified_modulus(p: u64, prefix: &[Step], deg: usize) -> Result<Vec<Vec<BigRational>>> {
    let ctx = ResCtx::new(p, prefix);
    if ctx.fsize() as u32 * (64 - p.leading_zeros()) > 60 {
        return Err(Error::Config(
            "residue field too large for modulus construction".into(),
        ));
    }
    let q = ctx.q();
    let total = (q as u128).checked_pow(deg as u32).ok_or_else(|| {
        Error::Config("modulus search space too large".into())
    })?;
    let mut t: u128 = 0;
    while t < total {
        let mut coeffs: Vec<Vec<u64>> = Vec::with_capacity(deg + 1);
        let mut rem = t;
        for _ in 0..deg {
            coeffs.push(ctx.elem_of_index((rem % q as u128) as u64));
            rem /= q as u128;
        }
        coeffs.push(ctx.one()); // monic
        if is_irreducible(&ctx, &coeffs) {
            let lifted = coeffs[..deg].iter().map(|c| ctx.lift(c)).collect();
            return Ok(lifted);
        }
        t += 1;
    }
    Err(Error::Config(format!(
        "no irreducible polynomial of degree {deg} found"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> TowerSpec {
        TowerSpec::build(&TowerConfig::new(2, 1.0, vec![(1, 1), (1, 2), (1, 4)])).unwrap()
    }

    fn t2() -> TowerSpec {
        TowerSpec::build(&TowerConfig::new(5, 1.0, vec![(1, 1), (2, 1), (4, 1)])).unwrap()
    }

    #[test]
    fn invariants_rejected() {
        let bad = TowerConfig::new(2, 1.0, vec![(1, 1), (2, 1)]);
        assert!(matches!(
            TowerSpec::build(&bad),
            Err(Error::WildRamification { .. })
        ));
        let bad = TowerConfig::new(5, 1.0, vec![(1, 1), (2, 1), (3, 1)]);
        assert!(matches!(
            TowerSpec::build(&bad),
            Err(Error::NonDivisibleTower { .. })
        ));
        let bad = TowerConfig::new(5, 1.0, vec![(1, 1), (1, 1)]);
        assert!(matches!(
            TowerSpec::build(&bad),
            Err(Error::NotIncreasing { .. })
        ));
        let bad = TowerConfig::new(5, 1.0, vec![(2, 1), (4, 1)]);
        assert!(matches!(TowerSpec::build(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn unramified_layout() {
        let tw = t1();
        let lv = tw.level(3).unwrap();
        assert_eq!((lv.e, lv.f, lv.m, lv.d), (1, 4, 4, 0));
        assert_eq!(lv.unram_flat, vec![0, 1, 2, 3]);
        assert_eq!(lv.eis_flat, vec![0]);
        assert_eq!(tw.q_f64(3), 16.0);
        assert_eq!(tw.group_order(3), BigUint::from(4096u32));
    }

    #[test]
    fn eisenstein_layout() {
        let tw = t2();
        let lv = tw.level(3).unwrap();
        assert_eq!((lv.e, lv.f, lv.m, lv.d), (4, 1, 4, 3));
        assert_eq!(lv.unram_flat, vec![0]);
        // Chain is y2^2 = 5, y3^2 = y2; π_3 = y3, π_3^2 = y2.
        assert_eq!(lv.eis_flat, vec![0, 2, 1, 3]);
        assert_eq!(lv.flat_r, vec![0, 2, 1, 3]);
        assert_eq!(tw.q_f64(3), 5.0);
    }

    #[test]
    fn caps() {
        let tw = t1();
        assert_eq!(tw.n_enum, 3);
        assert_eq!(tw.n_arith, 3);
        let cfg = TowerConfig::new(2, 1.0, vec![(1, 1), (1, 2), (1, 4), (1, 8)]);
        let tw = TowerSpec::build(&cfg).unwrap();
        assert_eq!(tw.n_enum, 3); // 2^32 cosets at level 4 exceeds the cap
        assert_eq!(tw.n_arith, 4);
    }

    #[test]
    fn pi_power_decomposition() {
        let tw = t2();
        // π_3^j = 5^{floor(j/4)} · monomial(eis_flat[j mod 4])
        assert_eq!(tw.pi_pow_flat(3, 0), (0, 0));
        assert_eq!(tw.pi_pow_flat(3, 1), (0, 2));
        assert_eq!(tw.pi_pow_flat(3, 4), (1, 0));
        assert_eq!(tw.pi_pow_flat(3, -1), (-1, 3));
        assert_eq!(tw.pi_pow_flat(3, -4), (-1, 0));
    }

    #[test]
    fn haar_mass() {
        let tw = t1();
        let h = tw.haar_cylinder(2, &BigUint::from(3u32)).unwrap();
        assert_eq!(h, BigRational::new(BigInt::from(3), BigInt::from(16)));
    }

    #[test]
    fn rational_valuation() {
        assert_eq!(rational_val(2, &BigRational::new(12.into(), 5.into())), Some(2));
        assert_eq!(rational_val(2, &BigRational::new(3.into(), 8.into())), Some(-3));
        assert_eq!(rational_val(2, &BigRational::zero()), None);
    }
}
