//! Cached full enumerations of G_n with precomputed shells and depths.
//! Only available at levels whose group order fits the enumeration cap.

use crate::coset::Coset;
use crate::error::{Error, Result};
use crate::tower::TowerSpec;

#[derive(Debug)]
pub struct EnumTables {
    pub level: usize,
    /// All M(n) cosets, in rank order (coordinate 0 fastest).
    pub cosets: Vec<Coset>,
    /// Shell (index of the lowest nonzero digit); None for the identity.
    pub shells: Vec<Option<usize>>,
    /// Depth δ in the subgroup chain; the identity gets δ = n.
    pub deltas: Vec<usize>,
}

impl TowerSpec {
    pub fn enum_tables(&self, n: usize) -> Result<EnumTables> {
        self.require_arith(n)?;
        let order = self.group_order_f64(n);
        if order > self.enum_cap as f64 {
            return Err(Error::EnumerationCapExceeded {
                level: n,
                order,
                cap: self.enum_cap,
            });
        }
        let order = order as u64;
        let mut cosets = Vec::with_capacity(order as usize);
        let mut shells = Vec::with_capacity(order as usize);
        let mut deltas = Vec::with_capacity(order as usize);
        for k in 0..order {
            let g = self.coset_unrank(n, k)?;
            shells.push(self.coset_shell(&g)?);
            deltas.push(self.delta_level(&g)?);
            cosets.push(g);
        }
        Ok(EnumTables {
            level: n,
            cosets,
            shells,
            deltas,
        })
    }
}

impl EnumTables {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Ranks of the nonzero cosets lying in S_N (depth ≥ N).
    pub fn deep_ranks(&self, big_n: usize) -> Vec<usize> {
        (1..self.len())
            .filter(|&k| self.deltas[k] >= big_n)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::TowerConfig;

    #[test]
    fn depth_class_sizes() {
        // |S_N / S_n| = M(n)/M(N): counts of cosets at depth ≥ N.
        let tw =
            TowerSpec::build(&TowerConfig::new(2, 1.0, vec![(1, 1), (1, 2), (1, 4)])).unwrap();
        let tab = tw.enum_tables(2).unwrap();
        assert_eq!(tab.len(), 16);
        let deep1 = tab.deep_ranks(1).len() + 1; // plus the identity
        assert_eq!(deep1 as f64, tw.group_order_f64(2) / tw.group_order_f64(1));
        assert_eq!(tab.deep_ranks(2).len(), 0);
    }
}
