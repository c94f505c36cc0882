#pragma once

#include "coadapt/num/tape.hpp"
#include "coadapt/num/tensor.hpp"

namespace coadapt::num {

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEps = 1e-6;
inline constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

// Diagonal Gaussian over one or more rows (each row an independent
// distribution over `cols` dimensions).
struct DiagonalGaussian {
  Tensor mean;
  Tensor log_std;
};

// sample = mean + exp(log_std) * noise, elementwise.
Tensor gaussian_sample_reparam(const DiagonalGaussian& d, const Tensor& noise);

// Closed-form KL(p || q), summed over dimensions and rows. Non-negative,
// zero iff the parameters are equal.
double gaussian_kl(const DiagonalGaussian& p, const DiagonalGaussian& q);

// Log-density of the standard (unsquashed) Gaussian, summed over dims/rows.
double gaussian_logprob(const DiagonalGaussian& d, const Tensor& x);

// Log-density of tanh(u) where u is a pre-squash sample of d; includes the
// change-of-variables correction -sum log(1 - tanh(u)^2 + eps).
double tanh_gaussian_logprob(const DiagonalGaussian& d, const Tensor& pre_squash);

// ---- Tape-side (differentiable) counterparts ------------------------------

// mean + exp(log_std) * noise.
Var sample_reparam(Tape& t, Var mean, Var log_std, Var noise);

// Per-dimension log-density of the tanh-squashed Gaussian at pre-squash u;
// returns a tensor the same shape as u (sum rows for a joint density).
Var tanh_gaussian_logprob_elem(Tape& t, Var mean, Var log_std, Var u);

// Per-dimension KL(p || q) for diagonal Gaussians; same shape as mean.
Var gaussian_kl_elem(Tape& t, Var mean_p, Var log_std_p, Var mean_q, Var log_std_q);

}  // namespace coadapt::num
