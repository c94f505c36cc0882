#include "coadapt/sim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "coadapt/num/rng.hpp"

namespace coadapt::sim {

namespace {
struct Vec2 {
  double x = 0, z = 0;
};

Vec2 body_point(const Body& b, double lx, double lz) {
  const double c = std::cos(b.th), s = std::sin(b.th);
  return {b.x + lx * c - lz * s, b.z + lx * s + lz * c};
}

Vec2 point_velocity(const Body& b, const Vec2& p) {
  const double rx = p.x - b.x, rz = p.z - b.z;
  return {b.vx - b.w * rz, b.vz + b.w * rx};
}
}  // namespace

Environment::Environment(const morph::MorphologyGraph& graph, const morph::Design& design,
                         morph::EnvKind kind, SimConfig cfg)
    : graph_(graph),
      design_(design),
      kind_(kind),
      cfg_(cfg),
      agent_(build_agent(graph, design, kind, cfg)),
      terrain_(build_terrain(kind, cfg)) {}

double Environment::joint_angle(int j) const {
  const Body& child = bodies_[j + 1];
  const Body& parent = bodies_[agent_.segments[j].parent_body];
  return (child.th - parent.th) - rest_rel_[j];
}

double Environment::joint_rate(int j) const {
  const Body& child = bodies_[j + 1];
  const Body& parent = bodies_[agent_.segments[j].parent_body];
  return child.w - parent.w;
}

void Environment::apply_force(int body, double px, double pz, double fx, double fz) {
  Body& b = bodies_[body];
  b.fx += fx;
  b.fz += fz;
  const double rx = px - b.x, rz = pz - b.z;
  b.tq += rx * fz - rz * fx;
}

double Environment::point_eff_mass(const Body& b, double rx, double rz, double nx,
                                   double nz) const {
  const double cr = rx * nz - rz * nx;
  return 1.0 / (1.0 / b.mass + cr * cr / b.inertia);
}

std::vector<double> Environment::reset(std::uint64_t seed) {
  num::Rng rng(seed);
  const int n = agent_.joint_count();

  bodies_.assign(agent_.body_count(), Body{});
  Body& torso = bodies_[0];
  torso.mass = agent_.torso_mass;
  torso.inertia = agent_.torso_inertia;
  torso.half_len = agent_.torso_length / 2.0;
  torso.x = 0.0;
  torso.z = 0.0;  // shifted below

  rest_rel_.resize(n);
  for (int j = 0; j < n; ++j) rest_rel_[j] = agent_.segments[j].rest_rel_angle;

  // Place segments at rest angles plus a small uniform joint perturbation.
  for (int j = 0; j < n; ++j) {
    const SegmentModel& seg = agent_.segments[j];
    const double jitter = rng.uniform(-cfg_.reset_joint_jitter, cfg_.reset_joint_jitter);
    const Body& parent = bodies_[seg.parent_body];
    Body& b = bodies_[j + 1];
    b.mass = seg.mass;
    b.inertia = seg.inertia;
    b.half_len = seg.length / 2.0;
    b.th = parent.th + rest_rel_[j] + jitter;
    const Vec2 anchor = body_point(parent, seg.anchor_lx, 0.0);
    b.x = anchor.x + b.half_len * std::cos(b.th);
    b.z = anchor.z + b.half_len * std::sin(b.th);
  }

  // Shift everything so the lowest contact vertex sits just above ground.
  double min_z = 1e9;
  for (const Body& b : bodies_) {
    min_z = std::min(min_z, body_point(b, -b.half_len, 0.0).z);
    min_z = std::min(min_z, body_point(b, b.half_len, 0.0).z);
  }
  const double shift = cfg_.reset_clearance - min_z;
  for (Body& b : bodies_) b.z += shift;

  reset_height_ = bodies_[0].z;
  step_count_ = 0;
  done_ = false;
  max_penetration_ = 0.0;
  return observe();
}

std::vector<double> Environment::observe() const {
  const Body& torso = bodies_[0];
  std::vector<double> obs;
  obs.reserve(obs_dim());
  obs.push_back(torso.z / reset_height_);
  obs.push_back(torso.vx);
  obs.push_back(torso.th);
  obs.push_back(torso.w);
  obs.push_back(torso.vz);
  for (int j = 0; j < agent_.joint_count(); ++j) {
    obs.push_back(joint_angle(j));
    obs.push_back(joint_rate(j));
  }
  return obs;
}

void Environment::substep(std::span<const double> action) {
  const double dt = cfg_.dt;

  // External acceleration first, then all spring-damper elements as
  // impulses, then the position update (semi-implicit Euler).
  for (Body& b : bodies_) b.vz -= cfg_.gravity * dt;

  // Every joint anchor axis, joint torque couple and active contact is a
  // scalar spring-damper element, integrated with backward Euler:
  //   P_total = dt * (f0 - k (C0 + dt v_rel+) - c v_rel+)
  // The coupled system is solved by Gauss-Seidel sweeps of incremental
  // impulses; at convergence joint statics honour the configured
  // stiffnesses instead of the single-pass effective stiffness m/dt^2.
  struct Element {
    int body_a = -1, body_b = -1;  // impulse -P on a, +P on b (b = child)
    bool angular = false;
    double nx = 0, nz = 0;        // axis (linear elements)
    double rax = 0, raz = 0, rbx = 0, rbz = 0;
    double w_sum = 0;             // inverse mass along the element direction
    double c0 = 0;                // position error at substep start
    double k = 0, c = 0, f0 = 0;
    double p_acc = 0;
    double p_min = -1e18, p_max = 1e18;
    int friction_of = -1;         // index of the paired normal element
    double mu = 0;
  };
  std::vector<Element> elems;
  elems.reserve(agent_.joint_count() * 3 + 8);

  auto inv_point_mass = [](const Body& b, double rx, double rz, double nx, double nz) {
    const double cr = rx * nz - rz * nx;
    return 1.0 / b.mass + cr * cr / b.inertia;
  };

  for (int j = 0; j < agent_.joint_count(); ++j) {
    const SegmentModel& seg = agent_.segments[j];
    const Body& child = bodies_[j + 1];
    const Body& parent = bodies_[seg.parent_body];
    const Vec2 pa = body_point(parent, seg.anchor_lx, 0.0);
    const Vec2 pc = body_point(child, -child.half_len, 0.0);

    for (int axis = 0; axis < 2; ++axis) {
      Element e;
      e.body_a = seg.parent_body;
      e.body_b = j + 1;
      e.nx = axis == 0 ? 1.0 : 0.0;
      e.nz = axis == 0 ? 0.0 : 1.0;
      e.rax = pa.x - parent.x;
      e.raz = pa.z - parent.z;
      e.rbx = pc.x - child.x;
      e.rbz = pc.z - child.z;
      e.w_sum = inv_point_mass(parent, e.rax, e.raz, e.nx, e.nz) +
                inv_point_mass(child, e.rbx, e.rbz, e.nx, e.nz);
      e.c0 = axis == 0 ? pc.x - pa.x : pc.z - pa.z;
      e.k = cfg_.anchor_stiffness;
      e.c = cfg_.anchor_damping;
      elems.push_back(e);
    }

    Element tq;
    tq.body_a = seg.parent_body;
    tq.body_b = j + 1;
    tq.angular = true;
    tq.w_sum = 1.0 / parent.inertia + 1.0 / child.inertia;
    const double q = joint_angle(j);
    tq.c0 = q;
    tq.k = cfg_.joint_stiffness;
    tq.c = cfg_.joint_damping;
    tq.f0 = action[j] * cfg_.motor_torque;
    if (q > cfg_.joint_limit) {
      tq.k += cfg_.joint_limit_stiffness;
      tq.c += cfg_.joint_limit_damping;
      tq.f0 += cfg_.joint_limit_stiffness * cfg_.joint_limit;
    } else if (q < -cfg_.joint_limit) {
      tq.k += cfg_.joint_limit_stiffness;
      tq.c += cfg_.joint_limit_damping;
      tq.f0 -= cfg_.joint_limit_stiffness * cfg_.joint_limit;
    }
    elems.push_back(tq);
  }

  for (size_t bi = 0; bi < bodies_.size(); ++bi) {
    const Body& b = bodies_[bi];
    const int npts = bi == 0 ? 3 : 2;
    for (int pi = 0; pi < npts; ++pi) {
      const double lx = pi == 0 ? -b.half_len : (pi == 1 ? b.half_len : 0.0);
      const Vec2 p = body_point(b, lx, 0.0);
      const double pen = terrain_.height(p.x) - p.z;
      if (pen <= 0.0) continue;
      max_penetration_ = std::max(max_penetration_, pen);

      Element n;  // one-sided normal spring
      n.body_b = static_cast<int>(bi);
      n.nx = 0;
      n.nz = 1;
      n.rbx = p.x - b.x;
      n.rbz = p.z - b.z;
      n.w_sum = inv_point_mass(b, n.rbx, n.rbz, 0, 1);
      n.c0 = -pen;
      n.k = cfg_.contact_stiffness;
      n.c = cfg_.contact_damping;
      n.p_min = 0.0;
      n.p_max = cfg_.contact_max_force * dt;
      elems.push_back(n);
      const int normal_idx = static_cast<int>(elems.size()) - 1;

      Element t;  // viscous friction capped by Coulomb
      t.body_b = static_cast<int>(bi);
      t.nx = 1;
      t.nz = 0;
      t.rbx = n.rbx;
      t.rbz = n.rbz;
      t.w_sum = inv_point_mass(b, t.rbx, t.rbz, 1, 0);
      t.c = cfg_.friction_viscous;
      t.friction_of = normal_idx;
      t.mu = cfg_.friction_mu;
      elems.push_back(t);
    }
  }

  auto rel_velocity = [&](const Element& e) {
    if (e.angular) return bodies_[e.body_b].w - bodies_[e.body_a].w;
    const Body& b = bodies_[e.body_b];
    double v = (b.vx - b.w * e.rbz) * e.nx + (b.vz + b.w * e.rbx) * e.nz;
    if (e.body_a >= 0) {
      const Body& a = bodies_[e.body_a];
      v -= (a.vx - a.w * e.raz) * e.nx + (a.vz + a.w * e.rax) * e.nz;
    }
    return v;
  };

  auto apply_impulse = [&](const Element& e, double p) {
    if (e.angular) {
      bodies_[e.body_b].w += p / bodies_[e.body_b].inertia;
      bodies_[e.body_a].w -= p / bodies_[e.body_a].inertia;
      return;
    }
    Body& b = bodies_[e.body_b];
    b.vx += p * e.nx / b.mass;
    b.vz += p * e.nz / b.mass;
    b.w += p * (e.rbx * e.nz - e.rbz * e.nx) / b.inertia;
    if (e.body_a >= 0) {
      Body& a = bodies_[e.body_a];
      a.vx -= p * e.nx / a.mass;
      a.vz -= p * e.nz / a.mass;
      a.w -= p * (e.rax * e.nz - e.raz * e.nx) / a.inertia;
    }
  };

  constexpr int kSweeps = 10;
  for (int sweep = 0; sweep < kSweeps; ++sweep) {
    for (Element& e : elems) {
      const double v = rel_velocity(e);
      double dp = (dt * (e.f0 - e.k * e.c0 - (e.k * dt + e.c) * v) - e.p_acc) /
                  (1.0 + dt * (e.k * dt + e.c) * e.w_sum);
      double lo = e.p_min, hi = e.p_max;
      if (e.friction_of >= 0) {
        const double cap = e.mu * elems[e.friction_of].p_acc;
        lo = -cap;
        hi = cap;
      }
      const double target = std::clamp(e.p_acc + dp, lo, hi);
      dp = target - e.p_acc;
      e.p_acc = target;
      apply_impulse(e, dp);
    }
  }

  for (Body& b : bodies_) {
    b.x += dt * b.vx;
    b.z += dt * b.vz;
    b.th += dt * b.w;
  }
}

StepResult Environment::step(std::span<const double> action) {
  if (done_) throw std::logic_error("step called on a finished episode");
  if (static_cast<int>(action.size()) != action_dim())
    throw std::invalid_argument("step: action dimension mismatch");

  std::vector<double> a(action.begin(), action.end());
  for (double& ai : a) ai = std::clamp(ai, -1.0, 1.0);

  const double x_before = bodies_[0].x;
  for (int s = 0; s < cfg_.action_repeat; ++s) substep(a);

  for (const Body& b : bodies_)
    if (!std::isfinite(b.x) || !std::isfinite(b.z) || !std::isfinite(b.th) ||
        !std::isfinite(b.vx) || !std::isfinite(b.vz) || !std::isfinite(b.w))
      throw std::runtime_error("simulation diverged: non-finite body state (integration blowup)");

  const double control_dt = cfg_.dt * cfg_.action_repeat;
  const double vx = (bodies_[0].x - x_before) / control_dt;

  StepResult r;
  r.reward = std::max(vx / 10.0, 0.0);
  step_count_ += 1;
  total_control_steps_ += 1;
  if (std::abs(bodies_[0].th) > cfg_.pitch_limit) {
    r.done = true;
    r.reward = -1.0;
  } else if (step_count_ >= cfg_.episode_len) {
    r.done = true;
  }
  done_ = r.done;
  r.observation = observe();

  if (trace_) {
    *trace_ << step_count_ << ',' << bodies_[0].x << ',' << bodies_[0].z << ','
            << bodies_[0].th;
    for (int j = 0; j < agent_.joint_count(); ++j) *trace_ << ',' << joint_angle(j);
    *trace_ << ',' << r.reward << ',' << (r.done ? 1 : 0) << '\n';
  }
  return r;
}

double Environment::mechanical_energy() const {
  double e = 0.0;
  for (const Body& b : bodies_) {
    e += 0.5 * b.mass * (b.vx * b.vx + b.vz * b.vz) + 0.5 * b.inertia * b.w * b.w;
    e += b.mass * cfg_.gravity * b.z;
  }
  return e;
}

double Environment::compliance_length() const {
  // Static compliance of the softest contact point. The implicit element
  // solve behaves like a spring of k_eff = k / (1 + (dt/m)(k dt + c)); the
  // softest case is an end point of the lightest rod (effective mass m/4).
  double weight = 0.0, m_min = 1e18;
  for (const Body& b : bodies_) {
    weight += b.mass * cfg_.gravity;
    m_min = std::min(m_min, b.mass / 4.0);
  }
  const double k = cfg_.contact_stiffness;
  const double k_eff = k / (1.0 + (cfg_.dt / m_min) * (k * cfg_.dt + cfg_.contact_damping));
  return weight / k_eff;
}

void Environment::set_trace(std::ostream* os) {
  trace_ = os;
  if (trace_) {
    *trace_ << "step,x,z,pitch";
    for (int j = 0; j < agent_.joint_count(); ++j) *trace_ << ",q" << j;
    *trace_ << ",reward,done\n";
  }
}

}  // namespace coadapt::sim
