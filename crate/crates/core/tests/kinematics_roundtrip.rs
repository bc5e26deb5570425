//! Large-sample forward/backward consistency of the analytic kinematics.

use gridpick_core::ik::{config_of, inverse_kinematics};
use gridpick_core::robot::{forward_tcp, JointVector, RobotModel};
use gridpick_core::{Frame, Vec3};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

const SAMPLES: usize = 1000;
const SEED: u64 = 0x6b5f_1a2c_9d03_47e1;

/// In-limit joint vectors kept away from the wrist, shoulder and elbow
/// boundaries so the branch bits are stable under 1e-9 perturbations.
fn sample_joint_vector(rng: &mut ChaCha8Rng, model: &RobotModel) -> JointVector {
    loop {
        let mut q = [0.0; 6];
        for (slot, (&lo, &hi)) in q.iter_mut().zip(model.q_min().iter().zip(model.q_max())) {
            *slot = rng.random_range(lo..hi);
        }
        if q[4].sin().abs() < 1e-3 {
            continue; // straight wrist
        }
        if q[2].cos().abs() < 1e-3 {
            continue; // elbow bit boundary
        }
        let radial = model.l23() * q[1].cos() - model.l35() * (q[1] + q[2]).sin();
        if radial.abs() < 1.0 {
            continue; // wrist centre too close to the joint-1 axis
        }
        return JointVector(q);
    }
}

#[test]
fn forward_then_backward_reproduces_the_joints() {
    let model = RobotModel::default()
        .with_tool(Frame::translation(Vec3::new(150.0, 0.0, 100.0)));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = std::time::Instant::now();
    for i in 0..SAMPLES {
        let q = sample_joint_vector(&mut rng, &model);
        let target = forward_tcp(&model, &q);
        let config = config_of(&model, &q)
            .unwrap_or_else(|e| panic!("sample {i} unexpectedly singular: {e}"));
        let q_back = inverse_kinematics(&model, &target, config)
            .unwrap_or_else(|e| panic!("sample {i} failed to solve: {e}"));
        let drift = q_back.max_angle_distance(&q);
        assert!(drift < 1e-9, "sample {i}: drift {drift} for q = {:?}", q.0);
        assert_eq!(
            config_of(&model, &q_back).unwrap(),
            config,
            "sample {i}: branch bits changed"
        );
    }
    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "round-trip sampling took {:?}",
        start.elapsed()
    );
}

#[test]
fn every_branch_that_solves_reproduces_the_frame() {
    use gridpick_core::ik::Configuration;
    let model = RobotModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xabcd);
    for i in 0..200 {
        let q = sample_joint_vector(&mut rng, &model);
        let target = forward_tcp(&model, &q);
        let mut solved = 0;
        for c in Configuration::ALL {
            if let Ok(qs) = inverse_kinematics(&model, &target, c) {
                let f = forward_tcp(&model, &qs);
                assert!(
                    (f.position - target.position).max_abs() < 1e-6,
                    "sample {i} branch {c}: position off"
                );
                assert!(
                    f.rotation.angle_to(&target.rotation) < 1e-8,
                    "sample {i} branch {c}: orientation off"
                );
                solved += 1;
            }
        }
        assert!(solved >= 1, "sample {i}: no branch solved a reachable frame");
    }
}

#[test]
fn limits_flag_exactly_the_out_of_range_joints() {
    use gridpick_core::ik::check_limits;
    let model = RobotModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x1357);
    for _ in 0..500 {
        let mut q = [0.0; 6];
        for slot in q.iter_mut() {
            *slot = rng.random_range(-PI..PI);
        }
        let report = check_limits(&model, &JointVector(q));
        for (j, &qj) in q.iter().enumerate() {
            let expected = (model.q_min()[j] - qj).max(qj - model.q_max()[j]).max(0.0);
            let got = report.violation()[j];
            assert!(
                (got - expected).abs() < 1e-12,
                "joint {j}: violation {got} vs {expected}"
            );
        }
        assert_eq!(report.within_limits(), report.max_violation() == 0.0);
    }
}
