//! Quantified properties of the predecessor operators and the solvers.

mod common;

use common::*;
use gr1_core::classic::solve_3fp;
use gr1_core::graph::Player;
use gr1_core::pre::{apre, apre_dual, pre_ctrl, pre_exists, pre_forall};
use gr1_core::vector::solve_4fp_vector;
use gr1_core::StateSet;
use proptest::prelude::*;

fn subset_of(r: &mut rand_chacha::ChaCha8Rng, p: &StateSet) -> StateSet {
    let len = p.width();
    StateSet::from_states(len, p.iter().filter(|_| rand::Rng::gen_bool(r, 0.6)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operator_dualities(seed in any::<u64>(), len in 2usize..=64) {
        let mut r = rng(seed);
        let g = random_game(&mut r, len);
        let p = random_state_set(&mut r, len);
        let p2 = random_state_set(&mut r, len);
        let (np, np2) = (p.complement(), p2.complement());
        prop_assert_eq!(pre_exists(&g, &p).unwrap().complement(), pre_forall(&g, &np).unwrap());
        prop_assert_eq!(
            pre_ctrl(&g, Player::Sys, &p).unwrap().complement(),
            pre_ctrl(&g, Player::Env, &np).unwrap()
        );
        prop_assert_eq!(apre(&g, &p, &p2).unwrap().complement(), apre_dual(&g, &np, &np2).unwrap());
    }

    #[test]
    fn operators_are_monotone(seed in any::<u64>(), len in 2usize..=48) {
        let mut r = rng(seed);
        let g = random_game(&mut r, len);
        let big = random_state_set(&mut r, len);
        let big2 = random_state_set(&mut r, len);
        let small = subset_of(&mut r, &big);
        let small2 = subset_of(&mut r, &big2);
        prop_assert!(pre_exists(&g, &small).unwrap().is_subset(&pre_exists(&g, &big).unwrap()));
        prop_assert!(pre_forall(&g, &small).unwrap().is_subset(&pre_forall(&g, &big).unwrap()));
        for l in [Player::Env, Player::Sys] {
            prop_assert!(pre_ctrl(&g, l, &small).unwrap().is_subset(&pre_ctrl(&g, l, &big).unwrap()));
        }
        prop_assert!(apre(&g, &small, &small2).unwrap().is_subset(&apre(&g, &big, &big2).unwrap()));
        prop_assert!(apre_dual(&g, &small, &small2).unwrap().is_subset(&apre_dual(&g, &big, &big2).unwrap()));
    }

    #[test]
    fn operator_identities(seed in any::<u64>(), len in 2usize..=48) {
        let mut r = rng(seed);
        let g = random_game(&mut r, len);
        let p = random_state_set(&mut r, len);
        let full = StateSet::full(len);
        prop_assert_eq!(apre(&g, &p, &full).unwrap(), pre_exists(&g, &p).unwrap());
        prop_assert_eq!(pre_exists(&g, &full).unwrap(), full.clone());
        prop_assert_eq!(pre_forall(&g, &StateSet::empty(len)).unwrap(), StateSet::empty(len));
        prop_assert!(pre_forall(&g, &p).unwrap().is_subset(&pre_exists(&g, &p).unwrap()));
    }

    /// With an assumption that every play meets, both solvers reduce to a
    /// Büchi game and agree.
    #[test]
    fn trivial_assumption_makes_solvers_agree(seed in any::<u64>(), len in 2usize..=32) {
        let mut r = rng(seed);
        let (g, mut s) = random_instance(&mut r, len, 1, 1);
        s.assumptions = vec![g.states().collect()];
        let c = s.conditions(&g);
        let four = solve_4fp_vector(&g, &c, false).unwrap().winning();
        let three = solve_3fp(&g, &c).winning;
        prop_assert_eq!(four, three);
    }
}
