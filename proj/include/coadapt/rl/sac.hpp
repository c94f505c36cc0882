#pragma once

#include <functional>
#include <span>

#include "coadapt/num/adam.hpp"
#include "coadapt/num/gaussian.hpp"
#include "coadapt/num/mlp.hpp"
#include "coadapt/rl/replay.hpp"

namespace coadapt::rl {

// Pre-squash Gaussian policy output on a tape, B x A each.
struct GaussianOut {
  num::Var mean;
  num::Var log_std;
};

// The loss functions are written against these callables so that both the
// feedforward specialists and the graph-network generalists run through the
// identical arithmetic (which is also what the single-node reduction oracle
// checks).
using PolicyEval = std::function<GaussianOut(num::Tape&, num::Var states)>;
using QEval = std::function<num::Var(num::Tape&, num::Var states, num::Var actions)>;

// Twin-critic soft-Bellman residual:
//   y = r + gamma * mask * (min(q1t, q2t)(s', a') - alpha log pi(a'|s')),
//   L = 1/2 mean (q1(s,a) - y)^2 + 1/2 mean (q2(s,a) - y)^2
// with a' drawn by the reparameterization trick from `next_noise` and y
// gradient-stopped.
num::Var sac_critic_loss(num::Tape& t, const Batch& b, const QEval& q1, const QEval& q2,
                         const QEval& q1_target, const QEval& q2_target,
                         const PolicyEval& policy, const num::Tensor& next_noise, double gamma,
                         double alpha);

// L = mean(alpha log pi(a|s) - min(q1, q2)(s, a)), a reparameterized.
num::Var sac_actor_loss(num::Tape& t, const Batch& b, const QEval& q1, const QEval& q2,
                        const PolicyEval& policy, const num::Tensor& noise, double alpha);

struct SacHyper {
  double gamma = 0.975;
  double alpha = 0.01;  // callers set 0.01 / N for specialists
  double tau = 0.01;
  double actor_lr = 0.001;
  double critic_lr = 0.001;
  int batch_size = 256;
};

// Specialist actor/critic set: feedforward networks on flat observations,
// twin critics with soft-updated targets.
struct MlpSacAgent {
  int obs_dim = 0;
  int act_dim = 0;
  SacHyper hyper;
  num::MlpParams actor;  // outputs (mean, log_std), 2A columns
  num::MlpParams q1, q2, q1t, q2t;
  num::AdamState actor_opt, q1_opt, q2_opt;

  static MlpSacAgent init(int obs_dim, int act_dim, const std::vector<int>& hidden,
                          const SacHyper& hyper, num::Rng& rng);
};

// Policy/Q evaluators over the agent's networks, bound per tape call.
GaussianOut mlp_policy_dist(num::Tape& t, const num::MlpParams& actor, num::Var states,
                            bool trainable);
PolicyEval policy_eval_of(const num::MlpParams& actor, bool trainable);
QEval q_eval_of(const num::MlpParams& critic, bool trainable);

// One training iteration: one critic step (both critics), one actor step,
// one soft target update; all on a single uniformly sampled batch.
void sac_train_step(MlpSacAgent& agent, const ReplayBuffer& buffer, num::Rng& rng);

void mlp_train_iterations(MlpSacAgent& agent, const ReplayBuffer& buffer, int iterations,
                          num::Rng& rng);

// tanh-squashed policy action; deterministic uses the mean.
std::vector<double> act(const num::MlpParams& actor, std::span<const double> obs,
                        bool deterministic, num::Rng* rng);

}  // namespace coadapt::rl
