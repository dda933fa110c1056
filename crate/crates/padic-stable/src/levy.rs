//! The jump measure Π on S∖{0}: per-shell coset masses, the closed-form
//! total Λ_n = Π(S∖S_n), the characteristic-exponent identity, quotient
//! transition probabilities by Fourier inversion, and the exact exit-time
//! pipeline for Q(n,N) and the gauge sequence b_n.

use crate::coset::Coset;
use crate::dual::{DualIndex, PairingTable};
use crate::enumerate::EnumTables;
use crate::error::{Error, Result};
use crate::par::indexed_map;
use crate::stats::neumaier_sum;
use crate::tower::TowerSpec;

/// Per-shell jump data at one level.  The shell of a nonzero coset is the
/// index j0 of its lowest nonzero digit; per-coset mass depends only on j0.
#[derive(Debug, Clone)]
pub struct LevyTable {
    pub level: usize,
    /// count[j0] = (q_n − 1)·q_n^{n·e_n − 1 − j0}.
    pub counts: Vec<f64>,
    /// Lévy mass of one coset with shell j0.
    pub masses: Vec<f64>,
    /// Λ_n = Π(S∖S_n), closed form.
    pub total: f64,
}

impl TowerSpec {
    /// Λ_n in the algebraically stabilized closed form
    /// (1 − q_n^{-1})·X/(X − q_n^{-1})·(q_1^{αn} − q_1^{-n·m_n}),
    /// X = q_1^{α/e_n}.
    pub fn total_mass(&self, n: usize) -> Result<f64> {
        let lv = self.level(n)?;
        let q1 = self.p as f64;
        let qn = self.q_f64(n);
        let x = q1.powf(self.alpha / lv.e as f64);
        let lead = (1.0 - 1.0 / qn) * x / (x - 1.0 / qn);
        Ok(lead * (q1.powf(self.alpha * n as f64) - q1.powi(-((n as u64 * lv.m) as i32))))
    }

    /// Λ_n / q_1^{αn}; tends to 1 and is computable at any depth without
    /// large intermediates.
    pub fn asymptotic_ratio(&self, n: usize) -> Result<f64> {
        let lv = self.level(n)?;
        let q1 = self.p as f64;
        let qn = self.q_f64(n);
        let x = q1.powf(self.alpha / lv.e as f64);
        let lead = (1.0 - 1.0 / qn) * x / (x - 1.0 / qn);
        Ok(lead * (1.0 - q1.powf(-(n as f64) * (lv.m as f64 + self.alpha))))
    }

    pub fn levy_table(&self, n: usize) -> Result<LevyTable> {
        let lv = self.level(n)?;
        let q = self.q_f64(n);
        let am = self.alpha / lv.m as f64;
        let ne = n * lv.e as usize;
        let d = lv.d as f64;
        let a_n = q.powf(d * am) * (q.powf(am) - 1.0) / (1.0 - q.powf(-1.0 - am));
        let c_n = ((1.0 - 1.0 / q) / (q.powf(am) - 1.0)) * q.powf(-d * (1.0 + am));
        let mut counts = Vec::with_capacity(ne);
        let mut masses = Vec::with_capacity(ne);
        for j0 in 0..ne {
            counts.push((q - 1.0) * q.powi((ne - 1 - j0) as i32));
            let mass =
                a_n * q.powf(d - ne as f64) * (q.powf(-(d - j0 as f64) * (1.0 + am)) + c_n);
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(Error::NumericalFailure {
                    identity: "shell mass".into(),
                    detail: format!("mass {mass} at level {n}, shell {j0}"),
                });
            }
            masses.push(mass);
        }
        let total = self.total_mass(n)?;
        let shell_sum = neumaier_sum(counts.iter().zip(&masses).map(|(c, m)| c * m));
        if (shell_sum - total).abs() > 1e-10 * total.abs() {
            return Err(Error::NumericalFailure {
                identity: "total jump mass".into(),
                detail: format!("shell sum {shell_sum} vs closed form {total} at level {n}"),
            });
        }
        Ok(LevyTable {
            level: n,
            counts,
            masses,
            total,
        })
    }

    /// Lévy mass of a single nonzero coset.
    pub fn coset_mass(&self, levy: &LevyTable, g: &Coset) -> Result<f64> {
        if g.level != levy.level {
            return Err(Error::LevelMismatch {
                expected: levy.level,
                got: g.level,
            });
        }
        match self.coset_shell(g)? {
            None => Err(Error::ZeroCoset),
            Some(j0) => Ok(levy.masses[j0]),
        }
    }

    /// The gauge sequence: block starts n(1)=1 < n(2) < … defined by mass
    /// doubling, and b_n = log(j)/Λ_{n(j)} on the j-th block.
    pub fn bn_sequence(&self, n_max: usize) -> Result<BnSequence> {
        if n_max == 0 || n_max > self.num_levels() {
            return Err(Error::LevelMismatch {
                expected: self.num_levels(),
                got: n_max,
            });
        }
        let mut block_starts = vec![1usize];
        let mut b = Vec::with_capacity(n_max);
        let mut j = 1usize;
        let mut block_mass = self.total_mass(1)?;
        for n in 1..=n_max {
            let mass = self.total_mass(n)?;
            if mass / block_mass >= 2.0 && n > *block_starts.last().unwrap() {
                j += 1;
                block_mass = mass;
                block_starts.push(n);
            }
            b.push((j as f64).ln() / block_mass);
        }
        Ok(BnSequence { block_starts, b })
    }

    /// Simplified gauge B_n = q_1^{-αn}·log n, valid when α > log_{q_1} 2.
    pub fn big_bn(&self, n_max: usize) -> Result<Vec<f64>> {
        let threshold = 2.0f64.ln() / (self.p as f64).ln();
        if self.alpha <= threshold {
            return Err(Error::AlphaTooSmall {
                alpha: self.alpha,
                threshold,
            });
        }
        let q1 = self.p as f64;
        Ok((1..=n_max)
            .map(|n| q1.powf(-self.alpha * n as f64) * (n as f64).ln())
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct BnSequence {
    /// n(j) for j = 1, 2, …: levels where the doubling blocks begin.
    pub block_starts: Vec<usize>,
    /// b[n-1] = b_n for n = 1..=n_max.
    pub b: Vec<f64>,
}

impl BnSequence {
    /// Levels (1-based) with b_n > 0, i.e. past the first block.
    pub fn usable_levels(&self) -> Vec<usize> {
        (1..=self.b.len()).filter(|&n| self.b[n - 1] > 0.0).collect()
    }
}

/// Fully enumerated level with its jump masses and character tables; the
/// workhorse for the exact identity checks.
pub struct ExactLevel<'a> {
    pub tw: &'a TowerSpec,
    pub n: usize,
    pub tab: EnumTables,
    pub levy: LevyTable,
    pub duals: Vec<DualIndex>,
    pub tables: Vec<PairingTable>,
}

impl TowerSpec {
    pub fn exact_level(&self, n: usize) -> Result<ExactLevel<'_>> {
        let tab = self.enum_tables(n)?;
        let levy = self.levy_table(n)?;
        let duals = self.dual_enumerate(n)?;
        let tables = duals
            .iter()
            .map(|xi| self.pairing_table(xi))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactLevel {
            tw: self,
            n,
            tab,
            levy,
            duals,
            tables,
        })
    }
}

/// Both sides of the characteristic-exponent identity for one character.
#[derive(Debug, Clone, Copy)]
pub struct CharExponent {
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs: f64,
}

impl<'a> ExactLevel<'a> {
    pub fn mass_by_rank(&self, k: usize) -> f64 {
        match self.tab.shells[k] {
            None => 0.0,
            Some(j0) => self.levy.masses[j0],
        }
    }

    /// Brute-force Σ over nonzero cosets of their masses; must reproduce the
    /// closed-form Λ_n.
    pub fn mass_sum(&self) -> f64 {
        neumaier_sum((1..self.tab.len()).map(|k| self.mass_by_rank(k)))
    }

    /// lhs = Σ_{g≠0} mass(g)·(⟨g,ξ⟩ − 1) against rhs = −‖ξ‖^α (or 0 for the
    /// trivial character).
    pub fn char_exponent(&self, xi_idx: usize) -> CharExponent {
        let table = &self.tables[xi_idx];
        let trig = TrigTable::new(table.pk);
        let mut re_terms = Vec::with_capacity(self.tab.len() - 1);
        let mut im_terms = Vec::with_capacity(self.tab.len() - 1);
        for k in 1..self.tab.len() {
            let mass = self.mass_by_rank(k);
            let (c, s) = trig.value(table.angle_num(&self.tab.cosets[k].coords));
            re_terms.push(mass * (c - 1.0));
            im_terms.push(mass * s);
        }
        let xi = &self.duals[xi_idx];
        let rhs = if xi.is_trivial() {
            0.0
        } else {
            -self.tw.dual_norm(xi).powf(self.tw.alpha)
        };
        CharExponent {
            lhs_re: neumaier_sum(re_terms),
            lhs_im: neumaier_sum(im_terms),
            rhs,
        }
    }

    /// ρ_α(‖ξ‖, t) = e^{-t‖ξ‖^α} for ‖ξ‖ > 1, else 1.
    fn rho(&self, xi: &DualIndex, t: f64) -> f64 {
        if xi.is_trivial() {
            1.0
        } else {
            (-t * self.tw.dual_norm(xi).powf(self.tw.alpha)).exp()
        }
    }

    /// Quotient transition probabilities p_t on G_n by Fourier inversion.
    pub fn transition_probs(&self, t: f64) -> Result<Vec<f64>> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTime { t });
        }
        let m_n = self.tab.len() as f64;
        let rhos: Vec<f64> = self.duals.iter().map(|xi| self.rho(xi, t)).collect();
        let trigs: Vec<TrigTable> = self
            .tables
            .iter()
            .map(|tb| TrigTable::new(tb.pk))
            .collect();
        let mut probs = indexed_map(self.tab.len(), |k| {
            let coords = &self.tab.cosets[k].coords;
            let terms = self.tables.iter().zip(&trigs).zip(&rhos).map(
                |((table, trig), &rho)| {
                    // conj(⟨g,ξ⟩): cosine part only; sine parts cancel by
                    // the ξ ↔ −ξ symmetry and are dropped.
                    rho * trig.cos(table.angle_num(coords))
                },
            );
            neumaier_sum(terms) / m_n
        });
        let mut worst = 0.0f64;
        for p in probs.iter_mut() {
            if *p < worst {
                worst = *p;
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        if worst < -1e-10 {
            return Err(Error::NumericalFailure {
                identity: "transition probabilities".into(),
                detail: format!("entry {worst} below tolerance"),
            });
        }
        let sum = neumaier_sum(probs.iter().copied());
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::NumericalFailure {
                identity: "transition probabilities".into(),
                detail: format!("normalization {sum}"),
            });
        }
        for p in probs.iter_mut() {
            *p /= sum;
        }
        Ok(probs)
    }

    /// Group convolution (p ⋆ r)(g) = Σ_h p(h)·r(g − h).
    pub fn convolve(&self, p: &[f64], r: &[f64]) -> Result<Vec<f64>> {
        let out = indexed_map(p.len(), |gk| {
            let g = &self.tab.cosets[gk];
            let terms = (0..p.len()).map(|hk| {
                let h = &self.tab.cosets[hk];
                let diff = self.tw.coset_sub(g, h).expect("same level");
                let dk = self.tw.coset_rank(&diff).expect("within cap") as usize;
                p[hk] * r[dk]
            });
            neumaier_sum(terms)
        });
        Ok(out)
    }

    /// I_N(ξ): jump-measure integral of (1 − ⟨·,ξ⟩) over the nonzero part
    /// of S_N/S_n.  Imaginary part vanishes by symmetry; checked.
    pub fn deep_char_integral(&self, xi_idx: usize, big_n: usize) -> Result<f64> {
        if big_n == 0 || big_n >= self.n {
            return Err(Error::InvalidLevels {
                n_small: big_n,
                n_big: self.n,
            });
        }
        let table = &self.tables[xi_idx];
        let trig = TrigTable::new(table.pk);
        let mut re_terms = Vec::new();
        let mut im = 0.0f64;
        for k in self.tab.deep_ranks(big_n) {
            let mass = self.mass_by_rank(k);
            let (c, s) = trig.value(table.angle_num(&self.tab.cosets[k].coords));
            re_terms.push(mass * (1.0 - c));
            im += mass * s;
        }
        if im.abs() > 1e-10 {
            return Err(Error::NumericalFailure {
                identity: "deep character integral".into(),
                detail: format!("imaginary part {im}"),
            });
        }
        Ok(neumaier_sum(re_terms))
    }

    /// λ_n(ξ) = [Λ_N + I_N(ξ)]^{-1}.
    pub fn lambda_weight(&self, xi_idx: usize, big_n: usize) -> Result<f64> {
        let lam_big = self.tw.total_mass(big_n)?;
        Ok(1.0 / (lam_big + self.deep_char_integral(xi_idx, big_n)?))
    }

    /// E[τ(n,N)] = M(n)^{-1} Σ_ξ λ_n(ξ).
    pub fn expected_tau(&self, big_n: usize) -> Result<f64> {
        let weights = (0..self.duals.len())
            .map(|i| self.lambda_weight(i, big_n))
            .collect::<Result<Vec<_>>>()?;
        Ok(neumaier_sum(weights.into_iter()) / self.tw.group_order_f64(self.n))
    }

    /// Q(n,N) = [E[τ(n,N)]·Λ_n]^{-1}, exactly from the character sums.
    pub fn q_exact(&self, big_n: usize) -> Result<f64> {
        Ok(1.0 / (self.expected_tau(big_n)? * self.levy.total))
    }

    /// Lower bound on the deep integral for characters with shell in
    /// (N·e_n, n·e_n]: I_N(ξ) ≥ (1 − q_N^{-N·e_N})·|ξ|_n^{α/m_n} − Λ_N.
    pub fn deep_integral_bound_check(&self, xi_idx: usize, big_n: usize) -> Result<bool> {
        let xi = &self.duals[xi_idx];
        let lv = self.tw.level(self.n)?;
        let lo = big_n * lv.e as usize + 1;
        let hi = self.n * lv.e as usize;
        if xi.shell < lo || xi.shell > hi {
            return Err(Error::ShellOutOfRange {
                shell: xi.shell,
                lo,
                hi,
            });
        }
        let i_val = self.deep_char_integral(xi_idx, big_n)?;
        let q_big = self.tw.q_f64(big_n);
        let e_big = self.tw.level(big_n)?.e;
        let factor = 1.0 - q_big.powi(-((big_n as u64 * e_big) as i32));
        let bound = factor
            * self
                .tw
                .dual_abs(xi)
                .powf(self.tw.alpha / lv.m as f64)
            - self.tw.total_mass(big_n)?;
        Ok(i_val >= bound - 1e-9)
    }
}

/// Lookup of cos/sin(2π·r/pk) for angle numerators r.
struct TrigTable {
    pk: u64,
    table: Option<Vec<(f64, f64)>>,
}

impl TrigTable {
    fn new(pk: u64) -> Self {
        let table = if pk <= 1 << 16 {
            Some(
                (0..pk)
                    .map(|r| {
                        let t = std::f64::consts::TAU * r as f64 / pk as f64;
                        (t.cos(), t.sin())
                    })
                    .collect(),
            )
        } else {
            None
        };
        TrigTable { pk, table }
    }

    fn value(&self, num: u64) -> (f64, f64) {
        match &self.table {
            Some(t) => t[num as usize],
            None => {
                let t = std::f64::consts::TAU * num as f64 / self.pk as f64;
                (t.cos(), t.sin())
            }
        }
    }

    fn cos(&self, num: u64) -> f64 {
        self.value(num).0
    }
}
