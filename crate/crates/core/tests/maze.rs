//! Maze family: environment liveness and benchmark behaviour.

use gr1_core::graph::{Conditions, GameGraph, Player};
use gr1_core::maze::{maze_generate, MazeParams, Variant};
use gr1_core::pre::pre_ctrl;
use gr1_core::StateSet;

/// States from which the environment alone can visit every assumption set
/// infinitely often: `νZ. ⋀_b μY. (F_A^b ∩ Pre⁰(Z)) ∪ Pre⁰(Y)`.
fn env_buchi_region(g: &GameGraph, c: &Conditions) -> StateSet {
    let pre0 = |p: &StateSet| pre_ctrl(g, Player::Env, p).unwrap();
    let mut z = StateSet::full(g.len());
    loop {
        let pz = pre0(&z);
        let mut next = StateSet::full(g.len());
        for fa in &c.assumptions {
            let goal = fa.intersection(&pz);
            let mut y = StateSet::empty(g.len());
            loop {
                let y2 = goal.union(&pre0(&y));
                if y2 == y {
                    break;
                }
                y = y2;
            }
            next.intersect_with(&y);
        }
        if next == z {
            return z;
        }
        z = next;
    }
}

#[test]
fn obstacle_always_meets_its_goals_in_nonfalsifiable_mazes() {
    for (cols, lines) in [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3)] {
        let p = MazeParams::new(cols, lines, 2, Variant::Nonfalsifiable);
        let (g, s) = maze_generate(&p).unwrap();
        let region = env_buchi_region(&g, &s.conditions(&g));
        assert!(
            g.reachable_from(g.init()).is_subset(&region),
            "{}",
            p.label()
        );
    }
}

#[test]
fn robot_can_block_in_falsifiable_mazes() {
    let p = MazeParams::new(3, 2, 2, Variant::Falsifiable);
    let (g, s) = maze_generate(&p).unwrap();
    let region = env_buchi_region(&g, &s.conditions(&g));
    assert!(!region.contains(g.init()));
}

#[test]
fn state_space_is_quadratic_in_cells() {
    for (cols, lines) in [(3, 2), (5, 2), (3, 4)] {
        let (g, s) = maze_generate(&MazeParams::new(cols, lines, 2, Variant::Falsifiable)).unwrap();
        let cells = cols * lines;
        assert_eq!(g.len(), 2 * cells * (cells - 1));
        assert_eq!(s.assumptions.len(), 2);
        assert_eq!(s.guarantees.len(), 2);
    }
}
