//! Property tests for the smoothing layer and the angle arithmetic.

use gridpick_core::fmath::wrap_angle;
use gridpick_core::robot::RobotModel;
use gridpick_core::virtual_ik::{smooth_hinge, smoothed_vsq, virtual_distance};
use gridpick_core::Vec3;
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #[test]
    fn wrapped_angles_land_in_the_half_open_interval(x in -1.0e6..1.0e6f64) {
        let w = wrap_angle(x);
        prop_assert!(w > -PI && w <= PI, "wrap({x}) = {w}");
        // Idempotent to the bit.
        prop_assert_eq!(wrap_angle(w).to_bits(), w.to_bits());
    }

    #[test]
    fn hinge_overestimates_the_positive_part_by_at_most_half_eps(
        x in -1.0e3..1.0e3f64,
        eps in 1.0e-6..10.0f64,
    ) {
        let h = smooth_hinge(x, eps);
        let plus = x.max(0.0);
        prop_assert!(h >= plus, "h({x}, {eps}) = {h} below {plus}");
        prop_assert!(h - plus <= 0.5 * eps + 1e-12, "h({x}, {eps}) = {h} too far above {plus}");
    }

    #[test]
    fn hinge_is_monotone_in_its_argument(
        x in -1.0e3..1.0e3f64,
        step in 0.0..50.0f64,
        eps in 1.0e-6..10.0f64,
    ) {
        prop_assert!(smooth_hinge(x + step, eps) >= smooth_hinge(x, eps));
    }

    #[test]
    fn smoothed_squared_slack_brackets_the_exact_one(
        x in -1.2e3..1.2e3f64,
        y in -1.2e3..1.2e3f64,
        z in -1.2e3..1.2e3f64,
        eps in 0.01..1.0f64,
    ) {
        let model = RobotModel::default();
        let wrist = Vec3::new(x, y, z);
        let exact = virtual_distance(&model, wrist).powi(2);
        let smoothed = smoothed_vsq(&model, wrist, eps);
        prop_assert!(smoothed >= exact, "smoothed {smoothed} below exact {exact}");
        prop_assert!(
            smoothed - exact <= 0.75 * eps * eps + 1e-9,
            "smoothing overhead {} above bound {}",
            smoothed - exact,
            0.75 * eps * eps
        );
    }

    #[test]
    fn slack_magnitude_is_the_hollow_sphere_distance(
        x in -1.2e3..1.2e3f64,
        y in -1.2e3..1.2e3f64,
        z in -1.2e3..1.2e3f64,
    ) {
        use gridpick_core::virtual_ik::workspace_radii;
        let model = RobotModel::default();
        let (r_in, r_out) = workspace_radii(&model);
        let wrist = Vec3::new(x, y, z);
        let r = wrist.norm();
        let v = virtual_distance(&model, wrist);
        let analytic = (r - r_out).max(r_in - r).max(0.0);
        prop_assert!((v.abs() - analytic).abs() < 1e-9, "|v| = {} vs {analytic}", v.abs());
        // Forearm stays positive whatever the slack does.
        prop_assert!(model.l35() + v > 0.0);
    }
}
