//! Exact-identity verification suite: every check returns a pass/fail record
//! with a human-readable detail line.  All checks are deterministic except
//! the Monte Carlo exit-probability comparison, which declares its 99%
//! confidence interval.

use crate::error::Result;
use crate::stats::neumaier_sum;
use crate::tower::TowerSpec;

#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            detail,
        }
    }
}

/// Deepest level at which full enumeration checks run: min(3, caps).
fn check_depth(tw: &TowerSpec) -> usize {
    3.min(tw.n_enum).min(tw.n_arith)
}

impl TowerSpec {
    /// Run the exact suite; `mc_samples > 0` adds the Monte Carlo
    /// exit-probability comparison at (n, N) = (2, 1).
    pub fn verify_suite(&self, mc_samples: usize) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        let cap = check_depth(self);
        out.push(self.check_mass_totals(cap)?);
        out.push(self.check_char_exponent(cap)?);
        out.push(self.check_duality(cap)?);
        out.push(self.check_different_exponents()?);
        out.push(self.check_trace_images(cap)?);
        out.push(self.check_semigroup(cap)?);
        out.push(self.check_deep_bounds(cap)?);
        out.push(self.check_exit_probabilities(cap)?);
        out.push(self.check_corruption_detection(cap)?);
        if mc_samples > 0 && cap >= 2 {
            out.push(self.check_mc_exit(mc_samples)?);
        }
        Ok(out)
    }

    /// Brute-force coset-mass totals equal the closed form to relative 1e-10.
    fn check_mass_totals(&self, cap: usize) -> Result<CheckResult> {
        let name = "jump mass totals";
        let mut worst = 0.0f64;
        for n in 1..=cap {
            let lvl = self.exact_level(n)?;
            let total = self.total_mass(n)?;
            let rel = (lvl.mass_sum() - total).abs() / total.abs();
            worst = worst.max(rel);
            if rel > 1e-10 {
                return Ok(CheckResult::fail(
                    name,
                    format!("level {n}: relative error {rel:.3e} > 1e-10"),
                ));
            }
        }
        Ok(CheckResult::pass(
            name,
            format!("levels 1..={cap}, worst relative error {worst:.3e}"),
        ))
    }

    /// Fourier transform of the jump measure reproduces −‖ξ‖^α on every
    /// character, exactly 0 on the trivial one.
    fn check_char_exponent(&self, cap: usize) -> Result<CheckResult> {
        let name = "characteristic exponent";
        let mut worst = 0.0f64;
        for n in 1..=cap {
            let lvl = self.exact_level(n)?;
            for i in 0..lvl.duals.len() {
                let ce = lvl.char_exponent(i);
                let scale = 1.0f64.max(ce.rhs.abs());
                let err = ((ce.lhs_re - ce.rhs).abs() + ce.lhs_im.abs()) / scale;
                worst = worst.max(err);
                if err > 1e-8 {
                    return Ok(CheckResult::fail(
                        name,
                        format!("level {n}, character {i}: error {err:.3e} > 1e-8"),
                    ));
                }
            }
        }
        Ok(CheckResult::pass(
            name,
            format!("all characters, levels 1..={cap}, worst error {worst:.3e}"),
        ))
    }

    /// Dual cardinality M(n), exact row orthogonality, and agreement of the
    /// linear pairing tables with the exact rational pairing on a sample.
    fn check_duality(&self, cap: usize) -> Result<CheckResult> {
        let name = "duality and orthogonality";
        for n in 1..=cap {
            let lvl = self.exact_level(n)?;
            let m = self.group_order_f64(n) as usize;
            if lvl.duals.len() != m {
                return Ok(CheckResult::fail(
                    name,
                    format!("level {n}: {} characters, expected {m}", lvl.duals.len()),
                ));
            }
            let q = self.coset_modulus(n)?;
            for (i, table) in lvl.tables.iter().enumerate() {
                let row_sum = table.full_group_sum(q);
                let expect = if lvl.duals[i].is_trivial() { m as f64 } else { 0.0 };
                if (row_sum - expect).abs() > 1e-10 {
                    return Ok(CheckResult::fail(
                        name,
                        format!("level {n}, character {i}: row sum {row_sum} ≠ {expect}"),
                    ));
                }
            }
            // Linear tables against the exact rational pairing on a stride
            // sample of the group.
            let stride = (lvl.tab.len() / 16).max(1);
            for i in (0..lvl.duals.len()).step_by(stride.max(1)) {
                for k in (0..lvl.tab.len()).step_by(stride) {
                    let exact = self.pairing(&lvl.tab.cosets[k], &lvl.duals[i])?;
                    let fast = lvl.tables[i].angle(&lvl.tab.cosets[k].coords);
                    let exact_angle = num_traits::ToPrimitive::to_f64(&exact.angle).unwrap();
                    let diff = (fast - exact_angle).abs();
                    let diff = diff.min((1.0 - diff).abs());
                    if diff > 1e-12 {
                        return Ok(CheckResult::fail(
                            name,
                            format!("level {n}: table/rational pairing mismatch {diff:.3e}"),
                        ));
                    }
                }
            }
        }
        Ok(CheckResult::pass(
            name,
            format!("card Ξ_n = M(n) and exact orthogonality, levels 1..={cap}"),
        ))
    }

    /// Different exponents equal e_n − 1 at every arithmetic level.
    fn check_different_exponents(&self) -> Result<CheckResult> {
        let name = "tame different exponents";
        for n in 1..=self.n_arith {
            let lv = self.level(n)?;
            let d = self.different_exponent_scan(n)?;
            if d != lv.e as i64 - 1 {
                return Ok(CheckResult::fail(
                    name,
                    format!("level {n}: scanned {d}, expected {}", lv.e - 1),
                ));
            }
        }
        Ok(CheckResult::pass(
            name,
            format!("d_n = e_n − 1 at levels 1..={}", self.n_arith),
        ))
    }

    /// Normalized traces map the deep balls onto the full level-n lattice
    /// (mod p): the surjectivity behind the quotient-group identifications.
    fn check_trace_images(&self, cap: usize) -> Result<CheckResult> {
        let name = "trace image surjectivity";
        let nu_cap = 3.min(self.n_arith);
        let mut tried = 0usize;
        for nu in 1..=nu_cap {
            for n in 1..=nu {
                for big_n in 1..=nu {
                    if let Err(e) = self.trace_image_check(n, nu, big_n) {
                        return Ok(CheckResult::fail(
                            name,
                            format!("(n={n}, ν={nu}, N={big_n}): {e}"),
                        ));
                    }
                    tried += 1;
                }
            }
        }
        let _ = cap;
        Ok(CheckResult::pass(name, format!("{tried} (n, ν, N) triples full-rank")))
    }

    /// Transition probabilities: nonnegative, normalized, and
    /// Chapman–Kolmogorov consistent at a fixed pair of times.
    fn check_semigroup(&self, cap: usize) -> Result<CheckResult> {
        let name = "transition semigroup";
        let n = cap.min(2);
        let lvl = self.exact_level(n)?;
        let (s, t) = (0.2f64, 0.3f64);
        let ps = lvl.transition_probs(s)?;
        let pt = lvl.transition_probs(t)?;
        let pst = lvl.transition_probs(s + t)?;
        let conv = lvl.convolve(&ps, &pt)?;
        let mut worst = 0.0f64;
        for (a, b) in conv.iter().zip(&pst) {
            worst = worst.max((a - b).abs());
        }
        if worst > 1e-8 {
            return Ok(CheckResult::fail(
                name,
                format!("level {n}: Chapman–Kolmogorov error {worst:.3e} > 1e-8"),
            ));
        }
        let sum = neumaier_sum(pt.iter().copied());
        if (sum - 1.0).abs() > 1e-10 || pt.iter().any(|&x| x < 0.0) {
            return Ok(CheckResult::fail(
                name,
                format!("level {n}: normalization {sum} or negativity"),
            ));
        }
        Ok(CheckResult::pass(
            name,
            format!("level {n}: nonnegative, normalized, composition error {worst:.3e}"),
        ))
    }

    /// Deep character integrals dominate their closed-form lower bound with
    /// slack ≥ −1e-9, for every eligible character and every depth pair.
    fn check_deep_bounds(&self, cap: usize) -> Result<CheckResult> {
        let name = "deep integral bounds";
        let mut tried = 0usize;
        for n in 2..=cap {
            let lvl = self.exact_level(n)?;
            let lv = self.level(n)?;
            for big_n in 1..n {
                let (lo, hi) = (big_n * lv.e as usize + 1, n * lv.e as usize);
                for i in 0..lvl.duals.len() {
                    let shell = lvl.duals[i].shell;
                    if shell < lo || shell > hi {
                        continue;
                    }
                    tried += 1;
                    if !lvl.deep_integral_bound_check(i, big_n)? {
                        return Ok(CheckResult::fail(
                            name,
                            format!("level {n}, depth {big_n}, character {i}: bound violated"),
                        ));
                    }
                }
            }
        }
        Ok(CheckResult::pass(name, format!("{tried} eligible characters bounded")))
    }

    /// Closed-form avoidance probabilities Q(n, N) are strictly positive and
    /// bounded by 1 — the quantitative recurrence witness.
    fn check_exit_probabilities(&self, cap: usize) -> Result<CheckResult> {
        let name = "avoidance probabilities";
        let mut min_q = f64::INFINITY;
        for n in 2..=cap {
            let lvl = self.exact_level(n)?;
            for big_n in 1..n {
                let q = lvl.q_exact(big_n)?;
                min_q = min_q.min(q);
                if !(q > 0.0 && q <= 1.0) {
                    return Ok(CheckResult::fail(
                        name,
                        format!("Q({n}, {big_n}) = {q} outside (0, 1]"),
                    ));
                }
            }
        }
        if cap < 2 {
            return Ok(CheckResult::pass(name, "no level pairs within caps".into()));
        }
        Ok(CheckResult::pass(name, format!("all pairs positive, min Q = {min_q:.6}")))
    }

    /// Negative control: perturbing one per-coset mass must break the
    /// total-mass identity at the declared tolerance.
    fn check_corruption_detection(&self, cap: usize) -> Result<CheckResult> {
        let name = "mass corruption detection";
        let n = cap.min(2).max(1);
        let levy = self.levy_table(n)?;
        let mut masses = levy.masses.clone();
        masses[0] *= 1.01;
        let corrupted = neumaier_sum(levy.counts.iter().zip(&masses).map(|(c, m)| c * m));
        let rel = (corrupted - levy.total).abs() / levy.total.abs();
        if rel <= 1e-10 {
            return Ok(CheckResult::fail(
                name,
                format!("1% corruption left relative error {rel:.3e} below tolerance"),
            ));
        }
        Ok(CheckResult::pass(
            name,
            format!("1% corruption detected with relative error {rel:.3e}"),
        ))
    }

    /// Monte Carlo Q(2, 1) against the closed form, judged by the Wilson 99%
    /// interval of the Monte Carlo arm.
    fn check_mc_exit(&self, samples: usize) -> Result<CheckResult> {
        let name = "monte carlo avoidance";
        let lvl = self.exact_level(2)?;
        let q = lvl.q_exact(1)?;
        let (est, lo, hi) = self.q_mc(2, 1, samples, 1)?;
        if q < lo || q > hi {
            return Ok(CheckResult::fail(
                name,
                format!("closed form {q:.4} outside 99% interval [{lo:.4}, {hi:.4}]"),
            ));
        }
        Ok(CheckResult::pass(
            name,
            format!("estimate {est:.4}, closed form {q:.4} inside [{lo:.4}, {hi:.4}]"),
        ))
    }
}

/// True when every check passed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}
