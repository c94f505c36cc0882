#include "coadapt/num/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace coadapt::num {

Tensor gaussian_sample_reparam(const DiagonalGaussian& d, const Tensor& noise) {
  if (!d.mean.same_shape(noise)) throw std::invalid_argument("sample: noise shape mismatch");
  Tensor out(d.mean.rows, d.mean.cols);
  for (size_t i = 0; i < out.v.size(); ++i)
    out.v[i] = d.mean.v[i] + std::exp(d.log_std.v[i]) * noise.v[i];
  return out;
}

double gaussian_kl(const DiagonalGaussian& p, const DiagonalGaussian& q) {
  if (!p.mean.same_shape(q.mean)) throw std::invalid_argument("kl: dimensionality mismatch");
  double kl = 0.0;
  for (size_t i = 0; i < p.mean.v.size(); ++i) {
    const double lp = p.log_std.v[i], lq = q.log_std.v[i];
    const double dm = p.mean.v[i] - q.mean.v[i];
    const double ratio = std::exp(2.0 * (lp - lq));
    kl += lq - lp + 0.5 * (ratio + dm * dm * std::exp(-2.0 * lq)) - 0.5;
  }
  return kl;
}

double gaussian_logprob(const DiagonalGaussian& d, const Tensor& x) {
  if (!d.mean.same_shape(x)) throw std::invalid_argument("logprob: shape mismatch");
  double lp = 0.0;
  for (size_t i = 0; i < x.v.size(); ++i) {
    const double ls = d.log_std.v[i];
    const double z = (x.v[i] - d.mean.v[i]) * std::exp(-ls);
    lp += -0.5 * z * z - ls - 0.5 * kLogTwoPi;
  }
  return lp;
}

double tanh_gaussian_logprob(const DiagonalGaussian& d, const Tensor& pre_squash) {
  double lp = gaussian_logprob(d, pre_squash);
  for (const double u : pre_squash.v) {
    const double tu = std::tanh(u);
    lp -= std::log(1.0 - tu * tu + kSquashEps);
  }
  return lp;
}

Var sample_reparam(Tape& t, Var mean, Var log_std, Var noise) {
  return t.add(mean, t.mul(t.exp(log_std), noise));
}

Var tanh_gaussian_logprob_elem(Tape& t, Var mean, Var log_std, Var u) {
  Var z = t.mul(t.sub(u, mean), t.exp(t.scale(log_std, -1.0)));
  Var quad = t.scale(t.mul(z, z), -0.5);
  Var gauss = t.add_scalar(t.sub(quad, log_std), -0.5 * kLogTwoPi);
  Var tu = t.tanh(u);
  Var corr = t.log(t.add_scalar(t.scale(t.mul(tu, tu), -1.0), 1.0 + kSquashEps));
  return t.sub(gauss, corr);
}

Var gaussian_kl_elem(Tape& t, Var mean_p, Var log_std_p, Var mean_q, Var log_std_q) {
  Var dl = t.sub(log_std_q, log_std_p);
  Var ratio = t.exp(t.scale(t.sub(log_std_p, log_std_q), 2.0));
  Var dm = t.sub(mean_p, mean_q);
  Var dm2 = t.mul(t.mul(dm, dm), t.exp(t.scale(log_std_q, -2.0)));
  return t.add_scalar(t.add(dl, t.scale(t.add(ratio, dm2), 0.5)), -0.5);
}

}  // namespace coadapt::num
