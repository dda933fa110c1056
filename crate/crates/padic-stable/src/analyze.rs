//! Path-image analysis: visited-coset counts, box-dimension estimates from
//! the canonical ball cover, and the gauge-weighted cover sums that estimate
//! the Hausdorff φ-measure of the image.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::levy::BnSequence;
use crate::par::indexed_map;
use crate::simulate::{PathRecord, StopRule};
use crate::stats::{median, quantile};
use crate::tower::TowerSpec;

/// Per-level cover statistics for one path ensemble.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DimensionReport {
    /// Levels analyzed, ascending.
    pub levels: Vec<usize>,
    /// Time window [0, t].
    pub horizon: f64,
    /// Per level: visited-coset counts N_n for each path.
    pub counts: Vec<Vec<u64>>,
    /// Per level: box-dimension estimates log N_n / log M(n) for each path.
    pub box_dims: Vec<Vec<f64>>,
    /// Per level: φ-sums N_n·b_n for each path; empty when b_n = 0.
    pub phi_sums: Vec<Vec<f64>>,
    /// Per level: b_n values backing the φ-sums.
    pub b: Vec<f64>,
    /// Medians and quartiles of the box-dimension estimates, per level.
    pub box_median: Vec<f64>,
    pub box_q1: Vec<f64>,
    pub box_q3: Vec<f64>,
    /// Running minimum over levels of the median φ-sum (a liminf proxy).
    pub phi_running_min: Vec<f64>,
}

impl TowerSpec {
    /// Number of distinct level-n cosets the path occupies during [0, t].
    pub fn visited_cosets(&self, path: &PathRecord, n: usize, t: f64) -> Result<u64> {
        if n > path.level {
            return Err(Error::LevelMismatch {
                expected: path.level,
                got: n,
            });
        }
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        seen.insert(self.coset_zero(n)?.coords);
        for (time, s) in path.times.iter().zip(&path.states) {
            if *time > t {
                break;
            }
            let proj = self.coset_project(s, n)?;
            seen.insert(proj.coords);
        }
        Ok(seen.len() as u64)
    }

    /// Box-dimension estimate at level n from a visited count: the covering
    /// balls have diameter M(n)^{-1}, so the estimate is log N_n / log M(n).
    pub fn box_dimension_estimate(&self, n: usize, count: u64) -> Result<f64> {
        self.level(n)?;
        Ok((count as f64).ln() / self.log_group_order(n))
    }

    /// Simulate `paths` level-`n_sim` paths to horizon t and report counts,
    /// box-dimension estimates and φ-sums at each requested level.  Streams
    /// start at `stream0`.
    pub fn dimension_report(
        &self,
        n_sim: usize,
        levels: &[usize],
        t: f64,
        paths: usize,
        stream0: u64,
    ) -> Result<DimensionReport> {
        if levels.is_empty() || paths == 0 {
            return Err(Error::Config("levels and paths must be nonempty".into()));
        }
        let mut sorted = levels.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let n_max = *sorted.last().unwrap();
        if n_max > n_sim {
            return Err(Error::InvalidLevels {
                n_small: n_max,
                n_big: n_sim,
            });
        }
        let bn = self.bn_sequence(n_max)?;
        let levy = self.levy_table(n_sim)?;
        let per_path = indexed_map(paths, |i| -> Result<Vec<u64>> {
            let mut cache = crate::simulate::DeltaCache::new();
            let path = self.simulate_path_with(
                &levy,
                StopRule::Horizon(t),
                stream0 + i as u64,
                &mut cache,
            )?;
            sorted
                .iter()
                .map(|&n| self.visited_cosets(&path, n, t))
                .collect()
        });
        let per_path: Vec<Vec<u64>> = per_path.into_iter().collect::<Result<_>>()?;
        let mut counts = vec![Vec::with_capacity(paths); sorted.len()];
        let mut box_dims = vec![Vec::with_capacity(paths); sorted.len()];
        let mut phi_sums = vec![Vec::new(); sorted.len()];
        let mut b = Vec::with_capacity(sorted.len());
        for (li, &n) in sorted.iter().enumerate() {
            let bn_val = bn.b[n - 1];
            b.push(bn_val);
            for row in &per_path {
                let c = row[li];
                counts[li].push(c);
                box_dims[li].push(self.box_dimension_estimate(n, c)?);
                if bn_val > 0.0 {
                    phi_sums[li].push(c as f64 * bn_val);
                }
            }
        }
        let box_median: Vec<f64> = box_dims.iter().map(|v| median(v)).collect();
        let box_q1: Vec<f64> = box_dims.iter().map(|v| quantile(v, 0.25)).collect();
        let box_q3: Vec<f64> = box_dims.iter().map(|v| quantile(v, 0.75)).collect();
        let mut phi_running_min = Vec::with_capacity(sorted.len());
        let mut running = f64::INFINITY;
        for v in &phi_sums {
            if !v.is_empty() {
                running = running.min(median(v));
            }
            phi_running_min.push(if running.is_finite() { running } else { f64::NAN });
        }
        Ok(DimensionReport {
            levels: sorted,
            horizon: t,
            counts,
            box_dims,
            phi_sums,
            b,
            box_median,
            box_q1,
            box_q3,
            phi_running_min,
        })
    }

    /// φ-sums N_n·b_n for one path at the requested levels; errors at levels
    /// with b_n = 0 (the first gauge block carries no information).
    pub fn hausdorff_phi_measure(
        &self,
        path: &PathRecord,
        levels: &[usize],
        t: f64,
        bn: &BnSequence,
    ) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(levels.len());
        for &n in levels {
            let b = *bn
                .b
                .get(n - 1)
                .ok_or(Error::LevelMismatch {
                    expected: bn.b.len(),
                    got: n,
                })?;
            if b <= 0.0 {
                return Err(Error::ZeroBn { level: n });
            }
            let count = self.visited_cosets(path, n, t)?;
            out.push(count as f64 * b);
        }
        Ok(out)
    }
}
