#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "coadapt/morph/graph.hpp"
#include "coadapt/sim/agent.hpp"
#include "coadapt/sim/terrain.hpp"

namespace coadapt::sim {

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
};

// Planar rigid body state, maximal coordinates.
struct Body {
  double x = 0, z = 0, th = 0;
  double vx = 0, vz = 0, w = 0;
  double mass = 0, inertia = 0, half_len = 0;
  double fx = 0, fz = 0, tq = 0;  // force accumulators, cleared per substep
};

// One locomotion episode: deterministic given (seed, graph, design, actions).
// Body 0 is the torso; body i+1 realises graph node i. Observations are
// [height/reset_height, vx, pitch, pitch rate, vz] plus (q, qdot) per node;
// terrain never enters the observation.
class Environment {
 public:
  Environment(const morph::MorphologyGraph& graph, const morph::Design& design,
              morph::EnvKind kind, SimConfig cfg);
  Environment(const morph::MorphologyGraph& graph, const morph::Design& design,
              morph::EnvKind kind)
      : Environment(graph, design, kind, SimConfig::for_env(kind)) {}

  std::vector<double> reset(std::uint64_t seed);
  StepResult step(std::span<const double> action);  // throws on NaN blowup

  int action_dim() const { return agent_.joint_count(); }
  int obs_dim() const { return 5 + 2 * agent_.joint_count(); }
  int steps_taken() const { return step_count_; }
  bool episode_over() const { return done_; }

  const ArticulatedAgent& agent() const { return agent_; }
  const Terrain& terrain() const { return terrain_; }
  const SimConfig& config() const { return cfg_; }

  // Diagnostics for tests and budget audits.
  std::int64_t total_control_steps() const { return total_control_steps_; }
  double mechanical_energy() const;
  double max_penetration() const { return max_penetration_; }
  double compliance_length() const;

  // Optional per-step CSV trace (step, x, z, pitch, joint angles..., reward, done).
  void set_trace(std::ostream* os);

 private:
  std::vector<double> observe() const;
  void substep(std::span<const double> action);
  double joint_angle(int j) const;
  double joint_rate(int j) const;
  void apply_force(int body, double px, double pz, double fx, double fz);
  double point_eff_mass(const Body& b, double rx, double rz, double nx, double nz) const;

  morph::MorphologyGraph graph_;
  morph::Design design_;
  morph::EnvKind kind_;
  SimConfig cfg_;
  ArticulatedAgent agent_;
  Terrain terrain_;

  std::vector<Body> bodies_;
  std::vector<double> rest_rel_;  // per joint, q measured against this
  double reset_height_ = 1.0;
  int step_count_ = 0;
  bool done_ = true;
  std::int64_t total_control_steps_ = 0;
  double max_penetration_ = 0.0;
  std::ostream* trace_ = nullptr;
};

}  // namespace coadapt::sim
