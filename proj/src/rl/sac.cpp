#include "coadapt/rl/sac.hpp"

#include <cmath>

namespace coadapt::rl {

using num::Tape;
using num::Tensor;
using num::Var;

num::Var sac_critic_loss(Tape& t, const Batch& b, const QEval& q1, const QEval& q2,
                         const QEval& q1_target, const QEval& q2_target,
                         const PolicyEval& policy, const Tensor& next_noise, double gamma,
                         double alpha) {
  Var s = t.constant(b.s);
  Var a = t.constant(b.a);
  Var s2 = t.constant(b.s2);

  GaussianOut pi = policy(t, s2);
  Var u = num::sample_reparam(t, pi.mean, pi.log_std, t.constant(next_noise));
  Var a2 = t.tanh(u);
  Var logp = t.row_sum(num::tanh_gaussian_logprob_elem(t, pi.mean, pi.log_std, u));

  Var qt = t.minimum(q1_target(t, s2, a2), q2_target(t, s2, a2));
  Var bootstrap = t.mul(t.sub(qt, t.scale(logp, alpha)), t.constant(b.not_done));
  Var y = t.detach(t.add(t.constant(b.r), t.scale(bootstrap, gamma)));

  Var d1 = t.sub(q1(t, s, a), y);
  Var d2 = t.sub(q2(t, s, a), y);
  return t.add(t.scale(t.mean_all(t.mul(d1, d1)), 0.5), t.scale(t.mean_all(t.mul(d2, d2)), 0.5));
}

num::Var sac_actor_loss(Tape& t, const Batch& b, const QEval& q1, const QEval& q2,
                        const PolicyEval& policy, const Tensor& noise, double alpha) {
  Var s = t.constant(b.s);
  GaussianOut pi = policy(t, s);
  Var u = num::sample_reparam(t, pi.mean, pi.log_std, t.constant(noise));
  Var a = t.tanh(u);
  Var logp = t.row_sum(num::tanh_gaussian_logprob_elem(t, pi.mean, pi.log_std, u));
  Var q = t.minimum(q1(t, s, a), q2(t, s, a));
  return t.mean_all(t.sub(t.scale(logp, alpha), q));
}

MlpSacAgent MlpSacAgent::init(int obs_dim, int act_dim, const std::vector<int>& hidden,
                              const SacHyper& hyper, num::Rng& rng) {
  MlpSacAgent a;
  a.obs_dim = obs_dim;
  a.act_dim = act_dim;
  a.hyper = hyper;

  std::vector<int> actor_dims = {obs_dim};
  actor_dims.insert(actor_dims.end(), hidden.begin(), hidden.end());
  actor_dims.push_back(2 * act_dim);
  a.actor = num::MlpParams::init(actor_dims, num::Act::Relu, num::Act::Linear, rng);

  std::vector<int> q_dims = {obs_dim + act_dim};
  q_dims.insert(q_dims.end(), hidden.begin(), hidden.end());
  q_dims.push_back(1);
  a.q1 = num::MlpParams::init(q_dims, num::Act::Relu, num::Act::Linear, rng);
  a.q2 = num::MlpParams::init(q_dims, num::Act::Relu, num::Act::Linear, rng);
  a.q1t = a.q1;
  a.q2t = a.q2;

  a.actor_opt = num::AdamState::like(a.actor.tensors());
  a.q1_opt = num::AdamState::like(a.q1.tensors());
  a.q2_opt = num::AdamState::like(a.q2.tensors());
  return a;
}

GaussianOut mlp_policy_dist(Tape& t, const num::MlpParams& actor, Var states, bool trainable) {
  num::BoundMlp m = num::bind(t, actor, trainable);
  Var out = num::mlp_forward(t, m, states);
  const int act_dim = actor.out_dim() / 2;
  GaussianOut g;
  g.mean = t.slice_cols(out, 0, act_dim);
  g.log_std = t.clamp(t.slice_cols(out, act_dim, 2 * act_dim), num::kLogStdMin, num::kLogStdMax);
  return g;
}

PolicyEval policy_eval_of(const num::MlpParams& actor, bool trainable) {
  return [&actor, trainable](Tape& t, Var states) {
    return mlp_policy_dist(t, actor, states, trainable);
  };
}

QEval q_eval_of(const num::MlpParams& critic, bool trainable) {
  return [&critic, trainable](Tape& t, Var states, Var actions) {
    num::BoundMlp m = num::bind(t, critic, trainable);
    return num::mlp_forward(t, m, t.concat_cols({states, actions}));
  };
}

void sac_train_step(MlpSacAgent& agent, const ReplayBuffer& buffer, num::Rng& rng) {
  const std::vector<int> idx = buffer.sample_indices(agent.hyper.batch_size, rng);
  const Batch batch = make_batch(buffer, idx);
  const int B = static_cast<int>(idx.size());

  {  // critic step (both critics share the target)
    Tape t;
    num::BoundMlp m1 = num::bind(t, agent.q1, true);
    num::BoundMlp m2 = num::bind(t, agent.q2, true);
    QEval q1 = [&](Tape& tt, Var s, Var a) {
      return num::mlp_forward(tt, m1, tt.concat_cols({s, a}));
    };
    QEval q2 = [&](Tape& tt, Var s, Var a) {
      return num::mlp_forward(tt, m2, tt.concat_cols({s, a}));
    };
    const Tensor noise = Tensor::normal(B, agent.act_dim, rng);
    Var loss = sac_critic_loss(t, batch, q1, q2, q_eval_of(agent.q1t, false),
                               q_eval_of(agent.q2t, false), policy_eval_of(agent.actor, false),
                               noise, agent.hyper.gamma, agent.hyper.alpha);
    t.backward(loss);
    num::adam_step(agent.q1.tensors(), num::mlp_grads(t, m1), agent.q1_opt,
                   agent.hyper.critic_lr);
    num::adam_step(agent.q2.tensors(), num::mlp_grads(t, m2), agent.q2_opt,
                   agent.hyper.critic_lr);
  }

  {  // actor step
    Tape t;
    num::BoundMlp ma = num::bind(t, agent.actor, true);
    PolicyEval pol = [&](Tape& tt, Var s) {
      Var out = num::mlp_forward(tt, ma, s);
      GaussianOut g;
      g.mean = tt.slice_cols(out, 0, agent.act_dim);
      g.log_std = tt.clamp(tt.slice_cols(out, agent.act_dim, 2 * agent.act_dim),
                           num::kLogStdMin, num::kLogStdMax);
      return g;
    };
    const Tensor noise = Tensor::normal(B, agent.act_dim, rng);
    Var loss = sac_actor_loss(t, batch, q_eval_of(agent.q1, false), q_eval_of(agent.q2, false),
                              pol, noise, agent.hyper.alpha);
    t.backward(loss);
    num::adam_step(agent.actor.tensors(), num::mlp_grads(t, ma), agent.actor_opt,
                   agent.hyper.actor_lr);
  }

  num::soft_update(agent.q1t, agent.q1, agent.hyper.tau);
  num::soft_update(agent.q2t, agent.q2, agent.hyper.tau);
}

void mlp_train_iterations(MlpSacAgent& agent, const ReplayBuffer& buffer, int iterations,
                          num::Rng& rng) {
  for (int i = 0; i < iterations; ++i) sac_train_step(agent, buffer, rng);
}

std::vector<double> act(const num::MlpParams& actor, std::span<const double> obs,
                        bool deterministic, num::Rng* rng) {
  Tensor x(1, static_cast<int>(obs.size()));
  for (size_t i = 0; i < obs.size(); ++i) x.v[i] = obs[i];
  const Tensor out = num::mlp_eval(actor, x);
  const int act_dim = out.cols / 2;
  std::vector<double> a(act_dim);
  for (int i = 0; i < act_dim; ++i) {
    double u = out.v[i];
    if (!deterministic) {
      const double ls = std::clamp(out.v[act_dim + i], num::kLogStdMin, num::kLogStdMax);
      u += std::exp(ls) * rng->normal();
    }
    a[i] = std::tanh(u);
  }
  return a;
}

}  // namespace coadapt::rl
