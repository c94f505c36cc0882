#pragma once

#include "coadapt/morph/catalog.hpp"

namespace coadapt::sim {

struct SimConfig {
  double dt = 1.0 / 240.0;  // physics substep
  int action_repeat = 4;    // control at 60 Hz
  int episode_len = 600;    // control steps per episode
  double gravity = 9.81;

  // Ground contact: spring-damper normal force with a Coulomb friction cap.
  double contact_stiffness = 40000.0;
  double contact_damping = 300.0;
  double contact_max_force = 5000.0;
  double friction_mu = 0.9;
  double friction_viscous = 600.0;

  // Joints: Baumgarte-stabilized anchor springs plus joint-space
  // spring-damper and motor torques (integrated implicitly).
  double anchor_stiffness = 60000.0;
  double anchor_damping = 300.0;
  double joint_stiffness = 180.0;
  double joint_damping = 4.5;
  double joint_limit = 0.6;  // radians, symmetric about the rest angle
  double joint_limit_stiffness = 1000.0;
  double joint_limit_damping = 5.0;
  double motor_torque = 65.0;

  // Bodies.
  double torso_length = 1.0;
  double torso_mass = 8.0;
  double segment_density = 5.0;  // kg per metre of limb segment

  // Episode mechanics.
  double reset_clearance = 0.005;
  double reset_joint_jitter = 0.005;  // +- radians on joint angles
  double pitch_limit = 1.25;

  // Stairs (used by multiped_stairs only).
  double stairs_start_x = 1.5;
  int stairs_count = 8;
  double stairs_depth = 0.5;
  double stairs_rise = 0.05;

  static SimConfig for_env(morph::EnvKind kind) {
    SimConfig c;
    if (kind != morph::EnvKind::HalfCheetah) c.motor_torque = 30.0;
    return c;
  }
};

}  // namespace coadapt::sim
