#include <cmath>

#include "coadapt/num/adam.hpp"
#include "coadapt/num/gaussian.hpp"
#include "coadapt/num/mlp.hpp"
#include "coadapt/num/pca.hpp"
#include "coadapt/num/rng.hpp"
#include "coadapt/num/tape.hpp"
#include "doctest.h"
#include "support/gradcheck.hpp"

using namespace coadapt::num;
using testsupport::check_gradients;

TEST_CASE("matmul identity case") {
  Rng rng(7);
  Tensor a = Tensor::uniform(2, 2, -1, 1, rng);
  Tensor r = matmul(Tensor::identity(2), a);
  for (int i = 0; i < 4; ++i) CHECK(r.v[i] == a.v[i]);
}

TEST_CASE("relu definition") {
  Tape t;
  Var x = t.input(Tensor::row({-1.5, 2.0}));
  const Tensor& y = t.value(t.relu(x));
  CHECK(y.v[0] == 0.0);
  CHECK(y.v[1] == 2.0);
}

TEST_CASE("scatter-add of zero rows gives zero tensor") {
  Tape t;
  Var empty = t.input(Tensor(0, 3));
  const Tensor& y = t.value(t.scatter_add_rows(empty, {}, 4));
  CHECK(y.rows == 4);
  for (const double e : y.v) CHECK(e == 0.0);
}

TEST_CASE("shape mismatch is a contract violation") {
  Tape t;
  Var a = t.input(Tensor(2, 3));
  Var b = t.input(Tensor(2, 2));
  CHECK_THROWS_AS((void)t.matmul(a, b), std::invalid_argument);
  CHECK_THROWS_AS((void)t.mul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(t.backward(a), std::invalid_argument);
}

TEST_CASE("backward of x squared at 3") {
  Tape t;
  Var x = t.input(Tensor(1, 1, {3.0}));
  Var loss = t.mul(x, x);
  t.backward(loss);
  CHECK(t.grad(x).v[0] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("backward of tanh at 0") {
  Tape t;
  Var x = t.input(Tensor(1, 1, {0.0}));
  t.backward(t.tanh(x));
  CHECK(t.grad(x).v[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gradients of unused leaves are exactly zero") {
  Tape t;
  Var x = t.input(Tensor(1, 1, {3.0}));
  Var unused = t.input(Tensor(2, 2, {1, 2, 3, 4}));
  t.backward(t.mul(x, x));
  for (const double e : t.grad(unused).v) CHECK(e == 0.0);
}

TEST_CASE("detach stops gradients") {
  Tape t;
  Var x = t.input(Tensor(1, 1, {2.0}));
  Var y = t.mul(x, t.detach(x));  // d/dx = detached value only
  t.backward(y);
  CHECK(t.grad(x).v[0] == 2.0);
}

TEST_CASE("two-layer network gradients match central finite differences") {
  Rng rng(11);
  MlpParams net = MlpParams::init({3, 8, 5}, Act::Tanh, Act::Linear, rng);
  Tensor x = Tensor::normal(4, 3, rng);

  auto eval = [&]() {
    Tape t;
    BoundMlp m = bind(t, net, true);
    Var y = mlp_forward(t, m, t.constant(x));
    return t.value(t.mean_all(t.mul(y, y))).v[0];
  };

  Tape t;
  BoundMlp m = bind(t, net, true);
  Var y = mlp_forward(t, m, t.constant(x));
  t.backward(t.mean_all(t.mul(y, y)));

  auto res = check_gradients(eval, net.tensors(), mlp_grads(t, m));
  CHECK_MESSAGE(res.ok, res.where, " rel err ", res.worst_rel);
}

TEST_CASE("gather/scatter/concat/reduction gradients match finite differences") {
  Rng rng(13);
  Tensor a = Tensor::normal(5, 3, rng);
  Tensor b = Tensor::normal(5, 2, rng);
  const std::vector<int> pick = {0, 2, 2, 4};
  const std::vector<int> dest = {1, 1, 0, 3};

  auto graph = [&](Tape& t, Var va, Var vb) {
    Var g = t.gather_rows(va, pick);
    Var s = t.scatter_add_rows(g, dest, 5);
    Var c = t.concat_cols({s, vb});
    Var rm = t.row_mean(t.tanh(c));
    Var cs = t.col_sum(t.exp(t.scale(c, 0.1)));
    Var m = t.minimum(t.slice_cols(c, 0, 2), vb);
    return t.add(t.add(t.mean_all(rm), t.sum_all(cs)), t.sum_all(m));
  };

  auto eval = [&]() {
    Tape t;
    Var va = t.input(a), vb = t.input(b);
    return t.value(graph(t, va, vb)).v[0];
  };

  Tape t;
  Var va = t.input(a), vb = t.input(b);
  t.backward(graph(t, va, vb));

  auto res = check_gradients(eval, {&a, &b}, {&t.grad(va), &t.grad(vb)});
  CHECK_MESSAGE(res.ok, res.where, " rel err ", res.worst_rel);
}

TEST_CASE("adam: zero gradient leaves params unchanged") {
  Tensor p(2, 2, {1, 2, 3, 4});
  const Tensor g(2, 2);
  AdamState st = AdamState::like({&p});
  adam_step({&p}, {&g}, st, 0.001);
  CHECK(p.v == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("adam: first step with unit gradient moves by about lr") {
  Tensor p(1, 1, {0.5});
  const Tensor g(1, 1, {1.0});
  AdamState st = AdamState::like({&p});
  adam_step({&p}, {&g}, st, 0.001);
  // bias-corrected m-hat = 1, v-hat = 1 -> step = lr / (1 + eps)
  CHECK(p.v[0] == doctest::Approx(0.5 - 0.001).epsilon(1e-6));
}

TEST_CASE("adam is deterministic") {
  auto run = []() {
    Rng rng(3);
    Tensor p = Tensor::normal(3, 3, rng);
    AdamState st = AdamState::like({&p});
    for (int i = 0; i < 10; ++i) {
      Tensor g = Tensor::normal(3, 3, rng);
      adam_step({&p}, {&g}, st, 0.01);
    }
    return p;
  };
  Tensor a = run(), b = run();
  CHECK(a.v == b.v);
}

TEST_CASE("reparameterized sample basics") {
  DiagonalGaussian d{Tensor::row({0.3, -0.2}), Tensor::row({0.1, 0.4})};
  Tensor zero(1, 2);
  Tensor s = gaussian_sample_reparam(d, zero);
  CHECK(s.v[0] == 0.3);
  CHECK(s.v[1] == -0.2);

  DiagonalGaussian unit{Tensor::row({0.0}), Tensor::row({0.0})};
  CHECK(gaussian_sample_reparam(unit, Tensor::row({1.5})).v[0] == 1.5);
}

TEST_CASE("gradient of sample w.r.t. log_std equals exp(log_std) at unit noise") {
  Tape t;
  Var mean = t.input(Tensor::row({0.2}));
  Var log_std = t.input(Tensor::row({-0.3}));
  Var noise = t.constant(Tensor::row({1.0}));
  t.backward(sample_reparam(t, mean, log_std, noise));
  CHECK(t.grad(log_std).v[0] == doctest::Approx(std::exp(-0.3)).epsilon(1e-12));
  CHECK(t.grad(mean).v[0] == 1.0);
}

TEST_CASE("kl of identical gaussians is zero") {
  DiagonalGaussian p{Tensor::row({0.4, -1.0}), Tensor::row({0.2, -0.5})};
  CHECK(gaussian_kl(p, p) == 0.0);
}

TEST_CASE("kl closed form: unit-variance mean shift") {
  DiagonalGaussian p{Tensor::row({1.0}), Tensor::row({0.0})};
  DiagonalGaussian q{Tensor::row({0.0}), Tensor::row({0.0})};
  CHECK(gaussian_kl(p, q) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kl matches monte-carlo estimate") {
  Rng rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const int dim = 3;
    DiagonalGaussian p{Tensor::uniform(1, dim, -1, 1, rng), Tensor::uniform(1, dim, -0.5, 0.5, rng)};
    DiagonalGaussian q{Tensor::uniform(1, dim, -1, 1, rng), Tensor::uniform(1, dim, -0.5, 0.5, rng)};
    const int samples = 200000;
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      Tensor nz = Tensor::normal(1, dim, rng);
      Tensor x = gaussian_sample_reparam(p, nz);
      acc += gaussian_logprob(p, x) - gaussian_logprob(q, x);
    }
    const double mc = acc / samples;
    CHECK(gaussian_kl(p, q) == doctest::Approx(mc).epsilon(0.05));
    CHECK(gaussian_kl(p, q) >= 0.0);
  }
}

TEST_CASE("tanh-squashed log-density at the origin") {
  DiagonalGaussian d{Tensor::row({0.0}), Tensor::row({0.0})};
  const double lp = tanh_gaussian_logprob(d, Tensor::row({0.0}));
  CHECK(lp == doctest::Approx(-0.9189385).epsilon(1e-4));
  // correction term at u = 0 is (numerically) zero
  const double corr = gaussian_logprob(d, Tensor::row({0.0})) - lp;
  CHECK(std::abs(corr) < 1e-5);
}

TEST_CASE("tanh-squashed log-density gradients match finite differences") {
  Rng rng(31);
  Tensor mean = Tensor::normal(2, 3, rng);
  Tensor log_std = Tensor::uniform(2, 3, -1, 0.5, rng);
  Tensor u = Tensor::normal(2, 3, rng);

  auto eval = [&]() {
    Tape t;
    Var lp = tanh_gaussian_logprob_elem(t, t.input(mean), t.input(log_std), t.input(u));
    return t.value(t.sum_all(lp)).v[0];
  };

  Tape t;
  Var vm = t.input(mean), vs = t.input(log_std), vu = t.input(u);
  t.backward(t.sum_all(tanh_gaussian_logprob_elem(t, vm, vs, vu)));
  auto res = check_gradients(eval, {&mean, &log_std, &u}, {&t.grad(vm), &t.grad(vs), &t.grad(vu)});
  CHECK_MESSAGE(res.ok, res.where, " rel err ", res.worst_rel);
}

TEST_CASE("tape kl elements agree with the closed form") {
  Rng rng(41);
  DiagonalGaussian p{Tensor::normal(1, 4, rng), Tensor::uniform(1, 4, -1, 1, rng)};
  DiagonalGaussian q{Tensor::normal(1, 4, rng), Tensor::uniform(1, 4, -1, 1, rng)};
  Tape t;
  Var kl = gaussian_kl_elem(t, t.input(p.mean), t.input(p.log_std), t.constant(q.mean),
                            t.constant(q.log_std));
  CHECK(t.value(t.sum_all(kl)).v[0] == doctest::Approx(gaussian_kl(p, q)).epsilon(1e-12));
}

TEST_CASE("pca of collinear points") {
  Tensor data(5, 2);
  for (int i = 0; i < 5; ++i) {
    const double x = -2.0 + i;
    data.at(i, 0) = x;
    data.at(i, 1) = 2.0 * x;
  }
  PcaResult r = pca_top2(data);
  const double s = r.axis1.v[0] > 0 ? 1.0 : -1.0;
  CHECK(s * r.axis1.v[0] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
  CHECK(s * r.axis1.v[1] == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-9));
  CHECK(r.var2 <= 1e-10);
  CHECK(r.degenerate);
  const double dot = r.axis1.v[0] * r.axis2.v[0] + r.axis1.v[1] * r.axis2.v[1];
  CHECK(std::abs(dot) < 1e-8);
}

TEST_CASE("pca of isotropic data has equal variances") {
  Tensor data(4, 2, {1, 0, -1, 0, 0, 1, 0, -1});
  PcaResult r = pca_top2(data);
  CHECK(r.var1 == doctest::Approx(r.var2).epsilon(1e-9));
  CHECK(!r.degenerate);
}

TEST_CASE("pca reconstructs rank-2 data exactly") {
  Rng rng(5);
  const int n = 12, d = 5;
  Tensor basis1 = Tensor::normal(1, d, rng), basis2 = Tensor::normal(1, d, rng);
  Tensor data(n, d);
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
    for (int j = 0; j < d; ++j) data.at(i, j) = a * basis1.v[j] + b * basis2.v[j];
  }
  PcaResult r = pca_top2(data);
  CHECK(!r.degenerate);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) {
      const double rec = r.mean.v[j] + r.projections.at(i, 0) * r.axis1.v[j] +
                         r.projections.at(i, 1) * r.axis2.v[j];
      CHECK(rec == doctest::Approx(data.at(i, j)).epsilon(1e-8));
    }
  // axes orthonormal
  double n1 = 0, n2 = 0, dp = 0;
  for (int j = 0; j < d; ++j) {
    n1 += r.axis1.v[j] * r.axis1.v[j];
    n2 += r.axis2.v[j] * r.axis2.v[j];
    dp += r.axis1.v[j] * r.axis2.v[j];
  }
  CHECK(n1 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(n2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(dp) < 1e-8);
  CHECK(r.var1 >= r.var2);
}

TEST_CASE("rng determinism and fork independence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c = Rng(42).fork("env", 3);
  Rng d = Rng(42).fork("env", 3);
  CHECK(c.raw() == d.raw());
  Rng e = Rng(42).fork("env", 4);
  CHECK(Rng(42).fork("env", 3).raw() != e.raw());
}

TEST_CASE("uniform sample statistics") {
  Rng rng(9);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform(0.2, 0.6);
    CHECK(x >= 0.2);
    CHECK(x <= 0.6);
    sum += x;
  }
  CHECK(sum / n == doctest::Approx(0.4).epsilon(0.025));
}
