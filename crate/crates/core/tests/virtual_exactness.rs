//! The virtual-joint backward transform must reproduce any frame exactly —
//! that is its whole point — and its slack must equal the analytic distance
//! to the hollow-sphere wrist workspace.

use gridpick_core::ik::Configuration;
use gridpick_core::robot::{forward_virtual, RobotModel};
use gridpick_core::virtual_ik::{virtual_inverse, workspace_radii};
use gridpick_core::{Frame, Rotation, Vec3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SAMPLES: usize = 1000;
const SEED: u64 = 0x51c3_77be_0f24_aa09;

fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation {
    loop {
        let w: f64 = rng.random_range(-1.0..1.0);
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        let z: f64 = rng.random_range(-1.0..1.0);
        let n = (w * w + x * x + y * y + z * z).sqrt();
        if n > 0.1 {
            return Rotation::from_quaternion(w, x, y, z);
        }
    }
}

/// Positions spread from deep inside the inner hole to far beyond the outer
/// sphere, so both unreachable regimes are well represented.
fn random_position(rng: &mut ChaCha8Rng) -> Vec3 {
    let dir = loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 {
            break v * (1.0 / n);
        }
    };
    dir * rng.random_range(2.0..1400.0)
}

#[test]
fn backward_transform_is_exact_for_any_frame() {
    let model = RobotModel::default();
    let (r_in, r_out) = workspace_radii(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut unreachable = 0;
    for i in 0..SAMPLES {
        let target = Frame::new(random_rotation(&mut rng), random_position(&mut rng));
        let config = Configuration::ALL[rng.random_range(0..8usize)];
        let sol = match virtual_inverse(&model, &target, config) {
            Ok(sol) => sol,
            Err(e) => panic!("sample {i}: virtual backward transform failed: {e}"),
        };

        // The recomputed forward frame must match the request exactly.
        let f = forward_virtual(&model, &sol.joints);
        let pos_err = (f.position - target.position).max_abs();
        let rot_err = f.rotation.angle_to(&target.rotation);
        assert!(pos_err < 1e-6, "sample {i}: position error {pos_err} mm");
        assert!(rot_err < 1e-8, "sample {i}: orientation error {rot_err} rad");

        // The slack magnitude equals the hollow-sphere distance of the wrist.
        let r = target.position.norm();
        let analytic = (r - r_out).max(r_in - r).max(0.0);
        assert!(
            (sol.v.abs() - analytic).abs() < 1e-9,
            "sample {i}: |v| = {} vs analytic {analytic}",
            sol.v.abs()
        );
        assert_eq!(sol.joints.v(), sol.v);
        if analytic > 0.0 {
            unreachable += 1;
        }
    }
    assert!(
        unreachable > SAMPLES / 5,
        "sampling should cover plenty of unreachable frames, got {unreachable}"
    );
}

#[test]
fn slack_vanishes_exactly_on_the_reachable_shell() {
    let model = RobotModel::default();
    let (r_in, r_out) = workspace_radii(&model);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xfeed);
    for _ in 0..SAMPLES {
        let target = Frame::new(random_rotation(&mut rng), random_position(&mut rng));
        let sol = virtual_inverse(&model, &target, Configuration::ALL[0]).unwrap();
        let r = target.position.norm();
        let inside = (r_in..=r_out).contains(&r);
        assert_eq!(sol.v == 0.0, inside, "r = {r}, v = {}", sol.v);
    }
}

#[test]
fn tool_offset_does_not_change_the_slack_definition() {
    // With a tool, the slack is measured at the wrist, i.e. at the flange
    // position, not at the TCP.
    let model = RobotModel::default()
        .with_tool(Frame::translation(Vec3::new(150.0, 0.0, 100.0)));
    let bare = RobotModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x77);
    for _ in 0..200 {
        let target = Frame::new(random_rotation(&mut rng), random_position(&mut rng));
        let with_tool = virtual_inverse(&model, &target, Configuration::ALL[0]).unwrap();
        let flange = target * model.tool().inverse();
        let at_flange = virtual_inverse(&bare, &flange, Configuration::ALL[0]).unwrap();
        assert!(
            (with_tool.v - at_flange.v).abs() < 1e-9,
            "slack moved: {} vs {}",
            with_tool.v,
            at_flange.v
        );
    }
}
