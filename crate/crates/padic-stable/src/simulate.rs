//! Monte Carlo engine: the level-n projection of the process is a pure-jump
//! chain with holding rate Λ_n and jump law proportional to the coset masses.
//! Paths are reproducible bit-for-bit from (master seed, stream id) and
//! independent across streams, so ensembles parallelize freely.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::coset::Coset;
use crate::error::{Error, Result};
use crate::levy::LevyTable;
use crate::par::indexed_map;
use crate::stats::{mean, neumaier_sum, variance, wilson_ci, Z_99};
use crate::tower::TowerSpec;

/// Stopping rule for a simulated path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Run until the next jump would pass the horizon.
    Horizon(f64),
    /// Run until the first increment of depth < `depth` (first exit from
    /// S_depth); `cap` bounds the run time, producing a censored path.
    FirstExit { depth: usize, cap: f64 },
}

/// One simulated path of the level-n chain, started at the zero coset.
#[derive(Debug, Clone)]
pub struct PathRecord {
    pub level: usize,
    /// Strictly increasing jump times.
    pub times: Vec<f64>,
    /// Post-jump states; states[k] is the position on [times[k], times[k+1]).
    pub states: Vec<Coset>,
    pub stop: StopRule,
    /// True when the stopping rule ended the run before the sought exit.
    pub censored: bool,
    pub seed: u64,
    pub stream: u64,
    /// Hash of the generating tower parameters.
    pub spec_hash: String,
}

/// Aggregate exit-time statistics for one (n, N) ensemble.
#[derive(Debug, Clone)]
pub struct ExitStats {
    pub level: usize,
    pub depth: usize,
    /// Per-path first exit times π(N); censored paths excluded.
    pub pi: Vec<f64>,
    /// Per-path occupation times τ(n, N).
    pub tau: Vec<f64>,
    /// Per-path indicator of the avoidance event behind Q(n, N).
    pub q_events: Vec<bool>,
    pub censored: usize,
    pub pi_mean: f64,
    pub pi_var: f64,
    pub q_estimate: f64,
    /// Wilson 99% interval for the event probability.
    pub q_ci: (f64, f64),
}

/// Memoized depth lookups keyed by coordinates; depth needs exact trace
/// arithmetic, and paths revisit few distinct cosets.
#[derive(Default)]
pub struct DeltaCache {
    map: HashMap<Vec<u64>, usize>,
}

impl DeltaCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(&mut self, tw: &TowerSpec, g: &Coset) -> Result<usize> {
        if let Some(&d) = self.map.get(&g.coords) {
            return Ok(d);
        }
        let d = tw.delta_level(g)?;
        self.map.insert(g.coords.clone(), d);
        Ok(d)
    }
}

impl TowerSpec {
    /// Deterministic per-path generator: one master seed, one stream per path.
    pub fn path_rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Hash of the parameters that determine every simulated quantity.
    pub fn spec_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.p.to_le_bytes());
        h.update(self.alpha.to_le_bytes());
        h.update(self.seed.to_le_bytes());
        for n in 1..=self.num_levels() {
            let lv = self.level(n).expect("configured level");
            h.update(lv.e.to_le_bytes());
            h.update(lv.f.to_le_bytes());
        }
        let out = h.finalize();
        let mut s = String::with_capacity(16);
        for b in &out[..8] {
            write!(s, "{b:02x}").unwrap();
        }
        s
    }

    /// One jump of the level-n chain: shell j0 with probability
    /// count_{j0}·mass_{j0}/Λ_n, lowest digit uniform on F_q∖{0}, higher
    /// digits uniform on F_q.  No enumeration, so any configured level works.
    pub fn sample_jump(&self, levy: &LevyTable, rng: &mut ChaCha8Rng) -> Result<Coset> {
        let n = levy.level;
        let lv = self.level(n)?;
        let (e, f) = (lv.e as usize, lv.f as usize);
        let q = self.q_f64(n) as u64;
        let ne = n * e;
        let u: f64 = rng.gen::<f64>() * levy.total;
        let mut acc = 0.0f64;
        let mut j0 = ne - 1;
        for j in 0..ne {
            acc += levy.counts[j] * levy.masses[j];
            if u < acc {
                j0 = j;
                break;
            }
        }
        let mut digits = vec![0u8; ne * f];
        for j in j0..ne {
            let v = if j == j0 {
                rng.gen_range(1..q)
            } else {
                rng.gen_range(0..q)
            };
            let mut v = v;
            for u_idx in 0..f {
                digits[j * f + u_idx] = (v % self.p) as u8;
                v /= self.p;
            }
        }
        self.coset_from_digits(n, &digits)
    }

    /// Simulate the level-n chain from the zero coset under `stop`.  Holding
    /// times are Exp(Λ_n); increments are i.i.d. `sample_jump` draws.  Exit
    /// detection uses increment depths, so the first increment of depth < N
    /// is exactly the exit from S_N.
    pub fn simulate_path(&self, n: usize, stop: StopRule, stream: u64) -> Result<PathRecord> {
        let levy = self.levy_table(n)?;
        self.simulate_path_with(&levy, stop, stream, &mut DeltaCache::new())
    }

    /// As `simulate_path`, reusing a prebuilt table and depth cache.
    pub fn simulate_path_with(
        &self,
        levy: &LevyTable,
        stop: StopRule,
        stream: u64,
        cache: &mut DeltaCache,
    ) -> Result<PathRecord> {
        let n = levy.level;
        if let StopRule::FirstExit { depth, .. } = stop {
            if depth == 0 || depth >= n {
                return Err(Error::InvalidLevels {
                    n_small: depth,
                    n_big: n,
                });
            }
        }
        let mut rng = self.path_rng(stream);
        let mut t = 0.0f64;
        let mut state = self.coset_zero(n)?;
        let mut times = Vec::new();
        let mut states = Vec::new();
        let mut censored = false;
        loop {
            let hold = -rng.gen::<f64>().ln() / levy.total;
            let t_next = t + hold;
            match stop {
                StopRule::Horizon(h) => {
                    if t_next > h {
                        break;
                    }
                }
                StopRule::FirstExit { cap, .. } => {
                    if t_next > cap {
                        censored = true;
                        break;
                    }
                }
            }
            t = t_next;
            let g = self.sample_jump(levy, &mut rng)?;
            state = self.coset_add(&state, &g)?;
            times.push(t);
            states.push(state.clone());
            if let StopRule::FirstExit { depth, .. } = stop {
                if cache.delta(self, &g)? < depth {
                    break;
                }
            }
        }
        Ok(PathRecord {
            level: n,
            times,
            states,
            stop,
            censored,
            seed: self.seed,
            stream,
            spec_hash: self.spec_hash(),
        })
    }

    /// π(N): the first jump time whose increment leaves S_N.
    pub fn first_exit_time(
        &self,
        path: &PathRecord,
        big_n: usize,
        cache: &mut DeltaCache,
    ) -> Result<f64> {
        if big_n >= path.level {
            return Err(Error::InvalidLevels {
                n_small: big_n,
                n_big: path.level,
            });
        }
        let mut prev = self.coset_zero(path.level)?;
        for (k, s) in path.states.iter().enumerate() {
            let inc = self.coset_sub(s, &prev)?;
            if cache.delta(self, &inc)? < big_n {
                return Ok(path.times[k]);
            }
            prev = s.clone();
        }
        Err(Error::Censored)
    }

    /// τ(n, N): Lebesgue time the path spends in S_n before exiting S_N.
    pub fn occupation_tau(
        &self,
        path: &PathRecord,
        n: usize,
        big_n: usize,
        cache: &mut DeltaCache,
    ) -> Result<f64> {
        if !(big_n < n && n <= path.level) {
            return Err(Error::InvalidLevels {
                n_small: big_n,
                n_big: n,
            });
        }
        let pi = self.first_exit_time(path, big_n, cache)?;
        // The path starts at 0 ∈ S_n; accumulate interval lengths on which
        // the state depth is ≥ n, clipped to [0, π(N)).
        let mut tau = 0.0f64;
        let mut t_prev = 0.0f64;
        let mut depth_prev = path.level; // zero coset
        for (k, s) in path.states.iter().enumerate() {
            let t_k = path.times[k].min(pi);
            if depth_prev >= n {
                tau += t_k - t_prev;
            }
            if path.times[k] >= pi {
                return Ok(tau);
            }
            t_prev = t_k;
            depth_prev = cache.delta(self, s)?;
        }
        Ok(tau)
    }

    /// Simulate `samples` independent paths of the level-n chain until exit
    /// from S_N and aggregate π(N), τ(n, N) and the avoidance events of
    /// Q(n, N): the state stays outside S_n on all of [π(n), π(N)).  Streams
    /// start at `stream0`; the `cap` censors runaway paths.
    pub fn exit_ensemble(
        &self,
        n: usize,
        big_n: usize,
        samples: usize,
        stream0: u64,
        cap: f64,
    ) -> Result<ExitStats> {
        if big_n == 0 || big_n >= n {
            return Err(Error::InvalidLevels {
                n_small: big_n,
                n_big: n,
            });
        }
        if samples == 0 {
            return Err(Error::Config("sample count must be positive".into()));
        }
        let levy = self.levy_table(n)?;
        let stop = StopRule::FirstExit { depth: big_n, cap };
        let runs = indexed_map(samples, |i| -> Result<Option<(f64, f64, bool)>> {
            let mut cache = DeltaCache::new();
            let path = self.simulate_path_with(&levy, stop, stream0 + i as u64, &mut cache)?;
            if path.censored {
                return Ok(None);
            }
            let pi = self.first_exit_time(&path, big_n, &mut cache)?;
            let tau = self.occupation_tau(&path, n, big_n, &mut cache)?;
            // The avoidance event: once the first jump leaves the zero coset
            // at π(n), the state never returns to S_n before π(N).  All
            // states but the final one are pre-exit; the event fails exactly
            // when one of them is zero again.
            let event = path.states[..path.states.len() - 1]
                .iter()
                .all(|s| !s.is_zero());
            Ok(Some((pi, tau, event)))
        });
        let mut pi = Vec::new();
        let mut tau = Vec::new();
        let mut q_events = Vec::new();
        let mut censored = 0usize;
        for r in runs {
            match r? {
                Some((p, t, e)) => {
                    pi.push(p);
                    tau.push(t);
                    q_events.push(e);
                }
                None => censored += 1,
            }
        }
        let successes = q_events.iter().filter(|&&e| e).count() as u64;
        let trials = q_events.len() as u64;
        let q_estimate = if trials > 0 {
            successes as f64 / trials as f64
        } else {
            f64::NAN
        };
        Ok(ExitStats {
            level: n,
            depth: big_n,
            pi_mean: mean(&pi),
            pi_var: variance(&pi),
            q_estimate,
            q_ci: wilson_ci(successes, trials, Z_99),
            pi,
            tau,
            q_events,
            censored,
        })
    }

    /// Monte Carlo Q(n, N) with its Wilson 99% interval, as
    /// (estimate, lower, upper).
    pub fn q_mc(
        &self,
        n: usize,
        big_n: usize,
        samples: usize,
        stream0: u64,
    ) -> Result<(f64, f64, f64)> {
        let stats = self.exit_ensemble(n, big_n, samples, stream0, f64::INFINITY)?;
        Ok((stats.q_estimate, stats.q_ci.0, stats.q_ci.1))
    }

    /// Exit times π(1..=n_max) for one path, drawn jointly: increments of
    /// depth exactly D arrive as a Poisson stream of rate Λ_{D+1} − Λ_D, so
    /// π(n) = min_{D<n} (first arrival of stream D).  This uses only the
    /// closed-form totals and is exact in joint distribution, so it reaches
    /// levels far beyond the arithmetic cap.
    pub fn exit_time_profile(&self, n_max: usize, stream: u64) -> Result<Vec<f64>> {
        let mut rng = self.path_rng(stream);
        let mut totals = Vec::with_capacity(n_max + 1);
        totals.push(0.0f64);
        for n in 1..=n_max {
            totals.push(self.total_mass(n)?);
        }
        let mut pi = Vec::with_capacity(n_max);
        let mut running = f64::INFINITY;
        for d in 0..n_max {
            let rate = totals[d + 1] - totals[d];
            let arrival = -rng.gen::<f64>().ln() / rate;
            running = running.min(arrival);
            pi.push(running);
        }
        // pi[k] is the first arrival among depth classes 0..=k, i.e. π(k+1);
        // reorder to π(n) for n = 1..=n_max.
        Ok(pi)
    }

    /// Per-path maxima of π(n)/(scale·b_n) over levels n_lo..=n_hi; `scale`
    /// is 1 for the statistic itself and large for the scaling control.
    pub fn limsup_statistic(
        &self,
        n_lo: usize,
        n_hi: usize,
        paths: usize,
        stream0: u64,
        scale: f64,
    ) -> Result<Vec<f64>> {
        if n_lo == 0 || n_lo > n_hi {
            return Err(Error::InvalidLevels {
                n_small: n_lo,
                n_big: n_hi,
            });
        }
        let bn = self.bn_sequence(n_hi)?;
        for n in n_lo..=n_hi {
            if bn.b[n - 1] <= 0.0 {
                return Err(Error::ZeroBn { level: n });
            }
        }
        let out = indexed_map(paths, |i| -> Result<f64> {
            let pi = self.exit_time_profile(n_hi, stream0 + i as u64)?;
            let mut best = 0.0f64;
            for n in n_lo..=n_hi {
                best = best.max(pi[n - 1] / (scale * bn.b[n - 1]));
            }
            Ok(best)
        });
        out.into_iter().collect()
    }
}

impl PathRecord {
    /// Line-based serialization: a header line with the run parameters, then
    /// one `time digit,digit,…` line per jump.
    pub fn to_lines(&self, tw: &TowerSpec) -> Result<String> {
        let mut s = String::new();
        let censored = if self.censored { 1 } else { 0 };
        writeln!(
            s,
            "# level={} seed={} stream={} hash={} jumps={} censored={}",
            self.level,
            self.seed,
            self.stream,
            self.spec_hash,
            self.times.len(),
            censored
        )
        .unwrap();
        for (t, g) in self.times.iter().zip(&self.states) {
            let digits = tw.coset_digits(g)?;
            let joined: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
            writeln!(s, "{:.17e} {}", t, joined.join(",")).unwrap();
        }
        Ok(s)
    }

    pub fn from_lines(tw: &TowerSpec, text: &str) -> Result<PathRecord> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Config("empty path".into()))?;
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for tok in header.trim_start_matches('#').split_whitespace() {
            if let Some((k, v)) = tok.split_once('=') {
                fields.insert(k, v);
            }
        }
        let get = |k: &str| -> Result<&str> {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::Config(format!("path header missing {k}")))
        };
        let level: usize = get("level")?
            .parse()
            .map_err(|_| Error::Config("bad level in path header".into()))?;
        let seed: u64 = get("seed")?
            .parse()
            .map_err(|_| Error::Config("bad seed in path header".into()))?;
        let stream: u64 = get("stream")?
            .parse()
            .map_err(|_| Error::Config("bad stream in path header".into()))?;
        let censored = get("censored")? == "1";
        let spec_hash = get("hash")?.to_string();
        let mut times = Vec::new();
        let mut states = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (t_str, d_str) = line
                .split_once(' ')
                .ok_or_else(|| Error::Config("malformed path line".into()))?;
            let t: f64 = t_str
                .parse()
                .map_err(|_| Error::Config("bad time in path line".into()))?;
            let digits: Vec<u8> = d_str
                .split(',')
                .map(|d| d.parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Config("bad digit in path line".into()))?;
            times.push(t);
            states.push(tw.coset_from_digits(level, &digits)?);
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("path times not increasing".into()));
        }
        Ok(PathRecord {
            level,
            times,
            states,
            stop: StopRule::Horizon(f64::INFINITY),
            censored,
            seed,
            stream,
            spec_hash,
        })
    }

    /// State occupied at time t (zero coset before the first jump).
    pub fn state_at(&self, tw: &TowerSpec, t: f64) -> Result<Coset> {
        let k = self.times.partition_point(|&s| s <= t);
        if k == 0 {
            tw.coset_zero(self.level)
        } else {
            Ok(self.states[k - 1].clone())
        }
    }

    /// Number of jumps in [0, t].
    pub fn jumps_by(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t)
    }
}

/// Ensemble mean of jump counts must track t·Λ_n; used by sanity checks.
pub fn mean_jump_count(paths: &[PathRecord], t: f64) -> f64 {
    if paths.is_empty() {
        return f64::NAN;
    }
    neumaier_sum(paths.iter().map(|p| p.jumps_by(t) as f64)) / paths.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TowerConfig;
    use crate::stats::{chi_square_test, ks_pvalue, ks_statistic_exponential};

    fn t1() -> TowerSpec {
        let mut cfg = TowerConfig::new(2, 1.0, vec![(1, 1), (1, 2), (1, 4)]);
        cfg.seed = Some(7);
        TowerSpec::build(&cfg).unwrap()
    }

    #[test]
    fn level_one_jump_is_the_nonzero_coset() {
        let tw = t1();
        let levy = tw.levy_table(1).unwrap();
        let mut rng = tw.path_rng(0);
        for _ in 0..20 {
            let g = tw.sample_jump(&levy, &mut rng).unwrap();
            assert_eq!(g.coords, vec![1]);
        }
    }

    #[test]
    fn jump_law_matches_masses() {
        // Empirical per-coset frequencies at level 2 vs count·mass/Λ.
        let tw = t1();
        let levy = tw.levy_table(2).unwrap();
        let lvl = tw.exact_level(2).unwrap();
        let mut rng = tw.path_rng(1);
        let draws = 100_000usize;
        let mut obs = vec![0.0f64; lvl.tab.len()];
        for _ in 0..draws {
            let g = tw.sample_jump(&levy, &mut rng).unwrap();
            obs[tw.coset_rank(&g).unwrap() as usize] += 1.0;
        }
        assert_eq!(obs[0], 0.0);
        let exp: Vec<f64> = (0..lvl.tab.len())
            .map(|k| draws as f64 * lvl.mass_by_rank(k) / levy.total)
            .collect();
        let (_, p) = chi_square_test(&obs, &exp);
        assert!(p > 0.01, "chi-square p = {p}");
    }

    #[test]
    fn jump_count_matches_rate() {
        let tw = t1();
        let levy = tw.levy_table(2).unwrap();
        let t = 2.0;
        let paths: Vec<PathRecord> = (0..2000)
            .map(|i| {
                tw.simulate_path_with(
                    &levy,
                    StopRule::Horizon(t),
                    i,
                    &mut DeltaCache::new(),
                )
                .unwrap()
            })
            .collect();
        let expect = t * levy.total;
        let sigma = (expect / paths.len() as f64).sqrt();
        let m = mean_jump_count(&paths, t);
        assert!((m - expect).abs() < 3.0 * sigma, "mean {m} vs {expect}");
    }

    #[test]
    fn exit_law_is_exponential() {
        let tw = t1();
        let stats = tw.exit_ensemble(2, 1, 4000, 10, f64::INFINITY).unwrap();
        assert_eq!(stats.censored, 0);
        let rate = tw.total_mass(1).unwrap();
        let d = ks_statistic_exponential(&stats.pi, rate);
        assert!(ks_pvalue(d, stats.pi.len()) > 0.01);
        // Mean within 3σ of 1/Λ_1 = 1.
        let n = stats.pi.len() as f64;
        assert!((stats.pi_mean - 1.0).abs() < 3.0 / n.sqrt());
        // τ ≤ π path by path.
        for (t, p) in stats.tau.iter().zip(&stats.pi) {
            assert!(t <= p);
        }
    }

    #[test]
    fn q_mc_matches_exact() {
        let tw = t1();
        let lvl = tw.exact_level(2).unwrap();
        let q = lvl.q_exact(1).unwrap();
        let (est, lo, hi) = tw.q_mc(2, 1, 10_000, 50).unwrap();
        assert!(0.0 <= est && est <= 1.0);
        assert!(lo <= q && q <= hi, "Q_exact {q} outside [{lo}, {hi}] (est {est})");
    }

    #[test]
    fn censoring_and_bad_levels() {
        let tw = t1();
        assert!(matches!(
            tw.simulate_path(2, StopRule::FirstExit { depth: 2, cap: 1.0 }, 0),
            Err(Error::InvalidLevels { .. })
        ));
        // A tiny cap censors essentially every path.
        let stats = tw.exit_ensemble(2, 1, 50, 0, 1e-6).unwrap();
        assert!(stats.censored > 40);
        // A jump-free horizon path has no exit to report.
        let path = tw.simulate_path(2, StopRule::Horizon(1e-12), 123).unwrap();
        assert!(path.states.is_empty());
        assert!(matches!(
            tw.first_exit_time(&path, 1, &mut DeltaCache::new()),
            Err(Error::Censored)
        ));
    }

    #[test]
    fn paths_are_reproducible() {
        let tw = t1();
        let a = tw.simulate_path(2, StopRule::Horizon(3.0), 99).unwrap();
        let b = tw.simulate_path(2, StopRule::Horizon(3.0), 99).unwrap();
        assert_eq!(a.times, b.times);
        assert_eq!(a.states, b.states);
        let c = tw.simulate_path(2, StopRule::Horizon(3.0), 100).unwrap();
        assert_ne!(a.times, c.times);
    }

    #[test]
    fn serialization_round_trip() {
        let tw = t1();
        let a = tw.simulate_path(3, StopRule::Horizon(1.0), 5).unwrap();
        let text = a.to_lines(&tw).unwrap();
        let b = PathRecord::from_lines(&tw, &text).unwrap();
        assert_eq!(a.level, b.level);
        assert_eq!(a.states, b.states);
        for (x, y) in a.times.iter().zip(&b.times) {
            assert_eq!(x, y);
        }
        assert_eq!(a.spec_hash, b.spec_hash);
    }

    #[test]
    fn marginal_matches_transition_probs() {
        let tw = t1();
        let lvl = tw.exact_level(2).unwrap();
        let t = 0.3;
        let exact = lvl.transition_probs(t).unwrap();
        let levy = tw.levy_table(2).unwrap();
        let paths = 40_000usize;
        let mut obs = vec![0.0f64; exact.len()];
        for i in 0..paths {
            let path = tw
                .simulate_path_with(&levy, StopRule::Horizon(t), 300 + i as u64, &mut DeltaCache::new())
                .unwrap();
            let s = path.state_at(&tw, t).unwrap();
            obs[tw.coset_rank(&s).unwrap() as usize] += 1.0 / paths as f64;
        }
        let tv = crate::stats::total_variation(&obs, &exact);
        assert!(tv < 0.02, "total variation {tv}");
    }

    #[test]
    fn exit_profile_is_monotone_and_exponential() {
        let tw = t1();
        // π(n) nonincreasing in n within one path, Exp(Λ_1) at n = 1.
        let mut pi1 = Vec::new();
        for i in 0..3000 {
            let prof = tw.exit_time_profile(3, 700 + i).unwrap();
            assert!(prof[0] >= prof[1] && prof[1] >= prof[2]);
            pi1.push(prof[0]);
        }
        let d = ks_statistic_exponential(&pi1, tw.total_mass(1).unwrap());
        assert!(ks_pvalue(d, pi1.len()) > 0.01);
    }

    #[test]
    fn limsup_statistic_band_and_control() {
        let levels: Vec<(u64, u64)> = (0..10).map(|i| (1u64, 1u64 << i)).collect();
        let mut cfg = TowerConfig::new(2, 2.0, levels);
        cfg.seed = Some(11);
        cfg.max_field_level = Some(1);
        let tw = TowerSpec::build(&cfg).unwrap();
        let bn = tw.bn_sequence(10).unwrap();
        let usable = bn.usable_levels();
        let lo = *usable.first().unwrap();
        let stats = tw.limsup_statistic(lo, 10, 200, 0, 1.0).unwrap();
        let med = crate::stats::median(&stats);
        assert!((0.2..=5.0).contains(&med), "median {med}");
        let control = tw.limsup_statistic(lo, 10, 200, 0, 100.0).unwrap();
        assert!(control.iter().all(|&x| x < 1.0));
        assert!(stats.iter().all(|&x| x >= 0.0));
    }
}
