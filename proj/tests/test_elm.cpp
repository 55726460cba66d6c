#include <cmath>

#include "doctest.h"
#include "rutcast/elm.hpp"
#include "rutcast/rng.hpp"
#include "rutcast/util.hpp"

using namespace rutcast;

namespace {

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = scale * rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST_CASE("hidden_matrix: zero weights and biases give sigmoid(0) = 0.5") {
  elm::Params p;
  p.weights = Eigen::MatrixXd::Zero(3, 2);
  p.bias = Eigen::VectorXd::Zero(3);
  Rng rng(1);
  const auto h = elm::hidden_matrix(p, random_matrix(rng, 4, 2));
  CHECK(h.rows() == 4);
  CHECK(h.cols() == 3);
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) CHECK(h(i, j) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("hidden_matrix: weights canceling the input hit the activation at zero") {
  elm::Params p;
  p.weights = Eigen::MatrixXd::Constant(1, 1, 2.0);
  p.bias = Eigen::VectorXd::Constant(1, -6.0);
  Eigen::MatrixXd x(1, 1);
  x << 3.0;  // 2*3 - 6 = 0
  CHECK(elm::hidden_matrix(p, x)(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("hidden_matrix matches an elementwise oracle") {
  Rng rng(5);
  elm::Params p;
  p.weights = random_matrix(rng, 3, 4);
  p.bias = random_matrix(rng, 3, 1).col(0);
  const auto x = random_matrix(rng, 4, 4, 2.0);
  for (auto act : {elm::Activation::Sigmoid, elm::Activation::Tanh, elm::Activation::Sine}) {
    p.activation = act;
    const auto h = elm::hidden_matrix(p, x);
    for (int j = 0; j < x.rows(); ++j)
      for (int i = 0; i < p.hidden(); ++i) {
        double z = p.bias(i);
        for (int k = 0; k < x.cols(); ++k) z += p.weights(i, k) * x(j, k);
        const double expected = act == elm::Activation::Sigmoid ? 1.0 / (1.0 + std::exp(-z))
                                : act == elm::Activation::Tanh  ? std::tanh(z)
                                                                : std::sin(z);
        CHECK(std::abs(h(j, i) - expected) <= 1e-12);
      }
  }
}

TEST_CASE("hidden_matrix rejects dimension mismatches") {
  elm::Params p;
  p.weights = Eigen::MatrixXd::Zero(2, 3);
  p.bias = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(elm::hidden_matrix(p, Eigen::MatrixXd::Zero(5, 4)), ValidationError);
}

TEST_CASE("solve_beta: identity hidden matrix with weak ridge returns the targets") {
  const int n = 6;
  Rng rng(2);
  const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd t = random_matrix(rng, n, 1, 3.0);
  const auto beta = elm::solve_beta(h, t, 1e12);
  CHECK((beta - t).norm() < 1e-6);
}

TEST_CASE("solve_beta: scalar closed form") {
  Eigen::MatrixXd h(1, 1), t(1, 1);
  h << 0.7;
  t << 2.0;
  const double c = 50.0;
  const auto beta = elm::solve_beta(h, t, c);
  CHECK(beta(0, 0) == doctest::Approx(0.7 * 2.0 / (0.7 * 0.7 + 1.0 / c)).epsilon(1e-14));
}

TEST_CASE("solve_beta: primal and dual branches agree") {
  Rng rng(3);
  for (int it = 0; it < 50; ++it) {
    const int l = 3 + int(rng.uniform_index(8));
    for (int n : {l - 2, l, l + 2}) {
      if (n < 1) continue;
      const auto h = random_matrix(rng, n, l);
      const auto t = random_matrix(rng, n, 1, 2.0);
      const double c = std::pow(10.0, rng.uniform(0.0, 4.0));
      const auto primal = elm::solve_beta(h, t, c, elm::SolveBranch::Primal);
      const auto dual = elm::solve_beta(h, t, c, elm::SolveBranch::Dual);
      CHECK((primal - dual).norm() <= 1e-8 * std::max(1.0, primal.norm()));
    }
  }
}

TEST_CASE("solve_beta satisfies the normal equations and minimizes the objective") {
  Rng rng(4);
  for (int it = 0; it < 20; ++it) {
    const int n = 2 + int(rng.uniform_index(20));
    const int l = 2 + int(rng.uniform_index(20));
    const auto h = random_matrix(rng, n, l);
    const auto t = random_matrix(rng, n, 1, 2.0);
    const double c = std::pow(10.0, rng.uniform(0.0, 3.0));
    const auto beta = elm::solve_beta(h, t, c);

    const Eigen::MatrixXd rhs = h.transpose() * t;
    const double residual = (h.transpose() * (h * beta) + beta / c - rhs).norm();
    CHECK(residual <= 1e-8 * std::max(1.0, rhs.norm()));

    const double at_solution = elm::ridge_objective(h, t, c, beta);
    for (int p = 0; p < 100; ++p) {
      Eigen::MatrixXd perturbed = beta;
      for (int i = 0; i < perturbed.rows(); ++i) perturbed(i, 0) += 1e-3 * rng.gaussian();
      CHECK(elm::ridge_objective(h, t, c, perturbed) >= at_solution);
    }
  }
}

TEST_CASE("solve_beta input validation") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Ones(2, 2);
  Eigen::MatrixXd t = Eigen::MatrixXd::Ones(2, 1);
  CHECK_THROWS_AS(elm::solve_beta(h, t, 0.0), ValidationError);
  CHECK_THROWS_AS(elm::solve_beta(h, Eigen::MatrixXd::Ones(3, 1), 1.0), ValidationError);
}

TEST_CASE("train_elm tolerates duplicate rows with equal targets") {
  Eigen::MatrixXd x(4, 2), t(4, 1);
  x << 1, 2, 1, 2, 3, 4, 3, 4;
  t << 5, 5, 6, 6;
  Rng rng(6);
  const auto params = elm::Params::random(8, 2, 100.0, elm::Activation::Sigmoid, rng);
  const auto model = elm::train_elm(params, x, t);
  CHECK(model.beta.allFinite());
}

TEST_CASE("train_relm: zero targets give an exactly-zero corrector") {
  Rng rng(7);
  Eigen::MatrixXd x = random_matrix(rng, 10, 3);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(10, 1);
  const auto o = elm::Params::random(6, 3, 100.0, elm::Activation::Sigmoid, rng);
  const auto r = elm::Params::random(6, 3, 100.0, elm::Activation::Sigmoid, rng);
  // With zero targets the original solves to beta = 0, so residual targets
  // are exactly zero and the corrector's beta is exactly zero too.
  const auto relm = elm::train_relm(o, r, x, t);
  CHECK(relm.original.beta.isZero(0.0));
  REQUIRE(relm.corrector.has_value());
  CHECK(relm.corrector->beta.isZero(0.0));
  CHECK(relm.predict(x).isZero(0.0));
}

TEST_CASE("train_relm: residual correction never hurts training MSE") {
  Rng rng(8);
  for (int it = 0; it < 100; ++it) {
    const int n = 5 + int(rng.uniform_index(40));
    const int d = 2 + int(rng.uniform_index(6));
    const auto x = random_matrix(rng, n, d, 2.0);
    Eigen::MatrixXd t(n, 1);
    for (int i = 0; i < n; ++i)
      t(i, 0) = std::sin(x.row(i).sum()) + 0.5 * rng.gaussian();
    const int l = 2 + int(rng.uniform_index(12));
    const auto o = elm::Params::random(l, d, 100.0, elm::Activation::Sigmoid, rng);
    const auto r = elm::Params::random(l, d, 100.0, elm::Activation::Sigmoid, rng);

    const auto relm = elm::train_relm(o, r, x, t);
    const double mse_elm = (relm.original.predict(x) - t).squaredNorm() / double(n);
    const double mse_relm = (relm.predict(x) - t).squaredNorm() / double(n);
    CHECK(mse_relm <= mse_elm + 1e-12);
  }
}

TEST_CASE("train_relm: disabled corrector reduces to the plain ELM") {
  Rng rng(9);
  const auto x = random_matrix(rng, 12, 3);
  Eigen::MatrixXd t(12, 1);
  for (int i = 0; i < 12; ++i) t(i, 0) = x.row(i).prod();
  const auto o = elm::Params::random(5, 3, 100.0, elm::Activation::Sigmoid, rng);
  elm::Params off;
  off.weights = Eigen::MatrixXd::Zero(0, 3);
  off.bias = Eigen::VectorXd::Zero(0);
  const auto relm = elm::train_relm(o, off, x, t);
  CHECK(!relm.corrector.has_value());
  CHECK((relm.predict(x) - relm.original.predict(x)).norm() == 0.0);
}

TEST_CASE("predict: batch equals a per-sample loop, two-stage sum") {
  Rng rng(10);
  const auto x = random_matrix(rng, 9, 4);
  Eigen::MatrixXd t(9, 1);
  for (int i = 0; i < 9; ++i) t(i, 0) = x(i, 0) - 2.0 * x(i, 3);
  const auto o = elm::Params::random(7, 4, 50.0, elm::Activation::Tanh, rng);
  const auto r = elm::Params::random(7, 4, 50.0, elm::Activation::Tanh, rng);
  const auto relm = elm::train_relm(o, r, x, t);

  const auto batch = relm.predict(x);
  for (int i = 0; i < x.rows(); ++i) {
    const auto single = relm.predict(x.row(i));
    CHECK(single(0, 0) == batch(i, 0));
  }
  const Eigen::MatrixXd sum = relm.original.predict(x) + relm.corrector->predict(x);
  CHECK((batch - sum).norm() == 0.0);
}

TEST_CASE("training is deterministic for identical params and data") {
  Rng rng1(11), rng2(11);
  Eigen::MatrixXd x = random_matrix(rng1, 15, 3);
  Eigen::MatrixXd t = x.rowwise().sum();
  random_matrix(rng2, 15, 3);  // advance to the same state
  const auto p1 = elm::Params::random(6, 3, 100.0, elm::Activation::Sigmoid, rng1);
  const auto p2 = elm::Params::random(6, 3, 100.0, elm::Activation::Sigmoid, rng2);
  const auto m1 = elm::train_elm(p1, x, t);
  const auto m2 = elm::train_elm(p2, x, t);
  CHECK((m1.beta - m2.beta).norm() == 0.0);
}

TEST_CASE("model JSON round trip preserves predictions bitwise") {
  Rng rng(12);
  const auto x = random_matrix(rng, 8, 3);
  Eigen::MatrixXd t(8, 1);
  for (int i = 0; i < 8; ++i) t(i, 0) = std::cos(x(i, 1));
  const auto o = elm::Params::random(4, 3, 100.0, elm::Activation::Sine, rng);
  const auto r = elm::Params::random(4, 3, 10.0, elm::Activation::Sigmoid, rng);
  const auto relm = elm::train_relm(o, r, x, t);

  const auto restored = elm::relm_from_json_string(elm::to_json_string(relm));
  CHECK(restored.original.params.activation == elm::Activation::Sine);
  CHECK((restored.predict(x) - relm.predict(x)).norm() == 0.0);

  CHECK_THROWS_AS(elm::relm_from_json_string("{\"format\":\"nope\"}"), ValidationError);
}
