//! Kinematics and orientation optimization for grid pick tasks.
//!
//! A palletizing robot picking from a grid of box positions has one degree of
//! freedom left open at every position: the rotation of the gripper about its
//! own (vertical) axis.  This crate models a 6R robot with a central wrist,
//! augments it with a virtual prismatic joint in the forearm so that every
//! target frame gets a well-defined "distance to reachability", and minimizes
//! that distance (plus a joint-limit penalty) over the free rotation at the
//! start and end of a pick motion.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! instead of `std` on targets without a float runtime.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("gridpick-core needs float math: enable the `std` feature or the `libm` feature");

extern crate alloc;

pub mod fmath;
pub mod frame;
pub mod ik;
pub mod motion;
pub mod optim;
pub mod robot;
pub mod sweep;
pub mod virtual_ik;

pub use frame::{Axis, Frame, Rotation, Vec3};
pub use ik::{check_limits, config_of, inverse_kinematics, wrist_point, Configuration, IkError, LimitReport};
pub use motion::{gradient, motion_frames, objective, Alpha, MotionTask, ObjectiveError};
pub use optim::{
    brute_force, minimize_from, multistart, start_offsets, MinimizeOutcome, SolveError,
    SolveOptions, SolveReport, Termination,
};
pub use robot::{
    forward_flange, forward_tcp, forward_virtual, DHRow, JointType, JointVector, ModelError,
    RobotModel, VirtualJointVector, DEFAULT_LIMIT,
};
pub use sweep::{
    classify_motion, classify_pose, residual_v, sweep, sweep_point, ClassCounts, ClassifyMode,
    GridReport, GridSpec, GridSpecError, PointOutcome, PoseClass, SweepOptions,
};
pub use virtual_ik::{
    smooth_hinge, smoothed_vsq, virtual_distance, virtual_inverse, virtual_inverse_lenient,
    workspace_radii, VirtualSolution,
};
