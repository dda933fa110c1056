//! Randomized structural properties of the tower arithmetic, the quotient
//! groups, and the pairing.

use num_rational::BigRational;
use proptest::prelude::*;

use padic_stable::{Coset, TowerConfig, TowerSpec};

fn t1() -> TowerSpec {
    TowerSpec::build(&TowerConfig::new(2, 1.0, vec![(1, 1), (1, 2), (1, 4)])).unwrap()
}

fn t2() -> TowerSpec {
    TowerSpec::build(&TowerConfig::new(5, 1.0, vec![(1, 1), (2, 1), (4, 1)])).unwrap()
}

fn t3() -> TowerSpec {
    TowerSpec::build(&TowerConfig::new(3, 1.5, vec![(1, 1), (2, 2)])).unwrap()
}

fn towers() -> Vec<TowerSpec> {
    vec![t1(), t2(), t3()]
}

/// A random coset of G_2 for a tower with modulus p^2 and m coordinates.
fn coset_strategy(p: u64, m: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..p * p, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coset_addition_is_abelian_group(a in coset_strategy(2, 2), b in coset_strategy(2, 2), c in coset_strategy(2, 2)) {
        let tw = t1();
        let ga = Coset { level: 2, coords: a };
        let gb = Coset { level: 2, coords: b };
        let gc = Coset { level: 2, coords: c };
        let ab_c = tw.coset_add(&tw.coset_add(&ga, &gb).unwrap(), &gc).unwrap();
        let a_bc = tw.coset_add(&ga, &tw.coset_add(&gb, &gc).unwrap()).unwrap();
        prop_assert_eq!(ab_c.coords, a_bc.coords);
        let ab = tw.coset_add(&ga, &gb).unwrap();
        let ba = tw.coset_add(&gb, &ga).unwrap();
        prop_assert_eq!(ab.coords, ba.coords);
        let inv = tw.coset_add(&ga, &tw.coset_neg(&ga).unwrap()).unwrap();
        prop_assert!(inv.is_zero());
    }

    #[test]
    fn digit_bijection_round_trips(a in coset_strategy(5, 2)) {
        let tw = t2();
        let g = Coset { level: 2, coords: a };
        let digits = tw.coset_digits(&g).unwrap();
        let back = tw.coset_from_digits(2, &digits).unwrap();
        prop_assert_eq!(back.coords, g.coords);
    }

    #[test]
    fn distance_is_ultrametric(a in coset_strategy(3, 4), b in coset_strategy(3, 4), c in coset_strategy(3, 4)) {
        let tw = t3();
        let ga = Coset { level: 2, coords: a };
        let gb = Coset { level: 2, coords: b };
        let gc = Coset { level: 2, coords: c };
        if ga.coords == gb.coords || gb.coords == gc.coords || ga.coords == gc.coords {
            return Ok(());
        }
        let dab = tw.coset_dist(&ga, &gb).unwrap();
        let dbc = tw.coset_dist(&gb, &gc).unwrap();
        let dac = tw.coset_dist(&ga, &gc).unwrap();
        prop_assert!(dac <= dab.clone().max(dbc.clone()));
        // Translation invariance.
        let t = tw.coset_add(&ga, &gc).unwrap();
        let u = tw.coset_add(&gb, &gc).unwrap();
        if t.coords != u.coords {
            prop_assert_eq!(tw.coset_dist(&t, &u).unwrap(), dab);
        }
    }

    #[test]
    fn valuation_is_additive_under_multiplication(
        xa in -4i64..=4, xb in -4i64..=4, ya in -4i64..=4, yb in -4i64..=4
    ) {
        for tw in towers() {
            let n = 2;
            // x = xa + xb·π, y = ya + yb·π: sparse but valuation-generic.
            let pi = tw.uniformizer(n).unwrap();
            let x = tw.fe_add(
                &tw.fe_from_int(n, xa).unwrap(),
                &tw.fe_scale(&pi, &BigRational::from_integer(xb.into())),
            ).unwrap();
            let y = tw.fe_add(
                &tw.fe_from_int(n, ya).unwrap(),
                &tw.fe_scale(&pi, &BigRational::from_integer(yb.into())),
            ).unwrap();
            let xy = tw.fe_mul(&x, &y).unwrap();
            match (tw.valuation(&x), tw.valuation(&y), tw.valuation(&xy)) {
                (Some(vx), Some(vy), Some(vxy)) => prop_assert_eq!(vxy, vx + vy),
                (None, _, v) | (_, None, v) => prop_assert!(v.is_none()),
                (Some(_), Some(_), None) => prop_assert!(false, "product of nonzero elements vanished"),
            }
        }
    }

    #[test]
    fn embedding_preserves_norm_and_trace_tower(coeffs in prop::collection::vec(-6i64..=6, 2)) {
        let tw = t1();
        // x lives at level 2; embed to level 3.
        let x = {
            let a = tw.fe_from_int(2, coeffs[0]).unwrap();
            let w = tw.fe_scale(
                &tw.fe_monomial(2, 1).unwrap(),
                &BigRational::from_integer(coeffs[1].into()),
            );
            tw.fe_add(&a, &w).unwrap()
        };
        let up = tw.embed(&x, 3).unwrap();
        prop_assert_eq!(tw.abs_norm(&x), tw.abs_norm(&up));
        // Degree-normalized traces are tower compatible: going through the
        // intermediate level changes nothing.
        let direct = tw.t_map(&up, 1).unwrap();
        let via = tw.t_map(&tw.t_map(&up, 2).unwrap(), 1).unwrap();
        prop_assert_eq!(direct.coeffs, via.coeffs);
    }

    #[test]
    fn pairing_is_biadditive(a in coset_strategy(2, 2), b in coset_strategy(2, 2), shell in 1usize..=2, digit_seed in 1u8..=3) {
        let tw = t1();
        let ga = Coset { level: 2, coords: a };
        let gb = Coset { level: 2, coords: b };
        // Two base-p digits per residue-field digit at this level (f = 2).
        let mut digits = vec![0u8; shell * 2];
        digits[0] = 1;
        digits[1] = digit_seed % 2;
        if shell > 1 {
            digits[2] = (digit_seed >> 1) % 2;
        }
        let xi = tw.dual_from_digits(2, shell, &digits).unwrap();
        let sum = tw.coset_add(&ga, &gb).unwrap();
        let lhs = tw.pairing(&sum, &xi).unwrap().angle;
        let rhs = tw.pairing(&ga, &xi).unwrap().angle + tw.pairing(&gb, &xi).unwrap().angle;
        let diff = lhs - rhs;
        prop_assert!(diff.is_integer());
    }

    #[test]
    fn coset_addition_is_representative_independent(a in coset_strategy(5, 2), b in coset_strategy(5, 2)) {
        let tw = t2();
        let ga = Coset { level: 2, coords: a };
        let gb = Coset { level: 2, coords: b };
        let ra = tw.coset_rep(&ga).unwrap();
        let rb = tw.coset_rep(&gb).unwrap();
        let sum_reps = tw.fe_add(&ra, &rb).unwrap();
        let via_field = tw.coset_of(&sum_reps).unwrap();
        let via_group = tw.coset_add(&ga, &gb).unwrap();
        prop_assert_eq!(via_field.coords, via_group.coords);
    }

    #[test]
    fn sampled_jumps_are_valid(stream in 0u64..500) {
        let tw = t2();
        let levy = tw.levy_table(2).unwrap();
        let mut rng = tw.path_rng(stream);
        let g = tw.sample_jump(&levy, &mut rng).unwrap();
        prop_assert_eq!(g.level, 2);
        prop_assert!(!g.is_zero());
        // The coset's mass is the mass of its shell.
        let shell = tw.coset_shell(&g).unwrap().unwrap();
        prop_assert_eq!(tw.coset_mass(&levy, &g).unwrap(), levy.masses[shell]);
    }

    #[test]
    fn depth_respects_projection(a in coset_strategy(2, 4)) {
        let tw = t1();
        let g = Coset { level: 3, coords: a.iter().map(|&x| x % 8).collect() };
        let delta = tw.delta_level(&g).unwrap();
        for n in 1..=2usize {
            let proj = tw.coset_project(&g, n).unwrap();
            // g lies in S_n/S_3 exactly when its level-n projection is zero.
            prop_assert_eq!(delta >= n, proj.is_zero());
        }
    }
}
