mod support;

use proptest::prelude::*;
use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversing_a_loop_negates_its_deficit(l in sweep_loop()) {
        orientation_antisymmetry(l)?;
    }

    #[test]
    fn deficit_does_not_depend_on_the_start_vector(l in sweep_loop(), alpha in 0.0..std::f64::consts::TAU) {
        w0_independence((l, alpha))?;
    }

    #[test]
    fn deficits_add_over_adjacent_rectangles(r in split_rectangle()) {
        loop_additivity(r)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn defects_survive_rigid_motions(m in rigid_motion()) {
        rigid_motion_invariance(m)?;
    }

    #[test]
    fn defects_survive_uniform_scaling(s in scaling()) {
        scale_invariance(s)?;
    }

    #[test]
    fn fan_triangulation_keeps_chi_and_defects(p in prism()) {
        triangulation_invariance(p)?;
    }
}
