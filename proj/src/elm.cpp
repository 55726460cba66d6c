#include "rutcast/elm.hpp"

#include <cmath>

#include "json.hpp"

#include "rutcast/util.hpp"

namespace rutcast::elm {

using nlohmann::json;

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Sine: return "sine";
  }
  throw ValidationError("unknown activation");
}

Activation activation_from_name(const std::string& name) {
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "tanh") return Activation::Tanh;
  if (name == "sine") return Activation::Sine;
  throw ValidationError("unknown activation: " + name);
}

Params Params::random(int hidden, int inputs, double regularization, Activation act, Rng& rng) {
  Params p;
  p.weights.resize(hidden, inputs);
  p.bias.resize(hidden);
  for (int i = 0; i < hidden; ++i) {
    for (int j = 0; j < inputs; ++j) p.weights(i, j) = rng.uniform(-1.0, 1.0);
    p.bias(i) = rng.uniform(-1.0, 1.0);
  }
  p.regularization = regularization;
  p.activation = act;
  p.validate();
  return p;
}

void Params::validate() const {
  if (hidden() < 0) throw ValidationError("elm: negative hidden size");
  if (bias.size() != weights.rows()) throw ValidationError("elm: bias/weights shape mismatch");
  if (!(regularization > 0.0)) throw ValidationError("elm: regularization C must be > 0");
  if (!weights.allFinite() || !bias.allFinite())
    throw ValidationError("elm: non-finite parameters");
}

Eigen::MatrixXd hidden_matrix(const Params& params, const Eigen::MatrixXd& X) {
  if (X.cols() != params.weights.cols())
    throw ValidationError("hidden_matrix: input dimension " + std::to_string(X.cols()) +
                          " does not match weights (" + std::to_string(params.weights.cols()) + ")");
  Eigen::MatrixXd z = X * params.weights.transpose();
  z.rowwise() += params.bias.transpose();
  switch (params.activation) {
    case Activation::Sigmoid:
      return ((-z.array()).exp() + 1.0).inverse().matrix();
    case Activation::Tanh:
      return z.array().tanh().matrix();
    case Activation::Sine:
      return z.array().sin().matrix();
  }
  throw ValidationError("unknown activation");
}

Eigen::MatrixXd solve_beta(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T, double C,
                           SolveBranch branch) {
  if (!(C > 0.0)) throw ValidationError("solve_beta: C must be > 0");
  if (H.rows() != T.rows()) throw ValidationError("solve_beta: H and T row counts differ");
  if (!H.allFinite() || !T.allFinite()) throw ValidationError("solve_beta: non-finite inputs");

  const auto N = H.rows();
  const auto L = H.cols();
  const bool primal = branch == SolveBranch::Primal || (branch == SolveBranch::Auto && N >= L);

  Eigen::MatrixXd beta;
  double rcond = 0.0;
  if (primal) {
    Eigen::MatrixXd gram = H.transpose() * H;
    gram.diagonal().array() += 1.0 / C;
    const auto ldlt = gram.ldlt();
    beta = ldlt.solve(H.transpose() * T);
    rcond = ldlt.rcond();
  } else {
    Eigen::MatrixXd gram = H * H.transpose();
    gram.diagonal().array() += 1.0 / C;
    const auto ldlt = gram.ldlt();
    beta = H.transpose() * ldlt.solve(T);
    rcond = ldlt.rcond();
  }

  // Both branches must satisfy the primal normal equations.
  const Eigen::MatrixXd rhs = H.transpose() * T;
  const Eigen::MatrixXd residual =
      (H.transpose() * (H * beta) + beta / C - rhs);
  const double bound = 1e-8 * std::max(1.0, rhs.norm());
  if (!beta.allFinite() || residual.norm() > bound)
    throw NumericError("solve_beta: system numerically singular despite ridge (rcond ~ " +
                       format_double(rcond) + ", residual " + format_double(residual.norm()) + ")");
  return beta;
}

double ridge_objective(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T, double C,
                       const Eigen::MatrixXd& beta) {
  return 0.5 * beta.squaredNorm() + 0.5 * C * (H * beta - T).squaredNorm();
}

Eigen::MatrixXd Model::predict(const Eigen::MatrixXd& X) const {
  return hidden_matrix(params, X) * beta;
}

Model train_elm(const Params& params, const Eigen::MatrixXd& X, const Eigen::MatrixXd& T) {
  params.validate();
  Model m;
  m.params = params;
  m.beta = solve_beta(hidden_matrix(params, X), T, params.regularization);
  return m;
}

Eigen::MatrixXd RelmModel::predict(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out = original.predict(X);
  if (corrector) out += corrector->predict(X);
  return out;
}

RelmModel train_relm(const Params& original, const Params& corrector, const Eigen::MatrixXd& X,
                     const Eigen::MatrixXd& T) {
  RelmModel relm;
  relm.original = train_elm(original, X, T);
  if (corrector.hidden() > 0) {
    const Eigen::MatrixXd residual_targets = T - relm.original.predict(X);
    relm.corrector = train_elm(corrector, X, residual_targets);
  }
  return relm;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json values = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", values}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  Eigen::MatrixXd m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  const auto& values = j.at("values");
  if (Eigen::Index(values.size()) != m.size())
    throw ValidationError("model json: matrix size mismatch");
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index jx = 0; jx < m.cols(); ++jx) m(i, jx) = values[std::size_t(k++)].get<double>();
  return m;
}

json model_to_json(const Model& m) {
  return json{{"activation", activation_name(m.params.activation)},
              {"regularization", m.params.regularization},
              {"weights", matrix_to_json(m.params.weights)},
              {"bias", matrix_to_json(m.params.bias)},
              {"beta", matrix_to_json(m.beta)}};
}

Model model_from_json(const json& j) {
  Model m;
  m.params.activation = activation_from_name(j.at("activation").get<std::string>());
  m.params.regularization = j.at("regularization").get<double>();
  m.params.weights = matrix_from_json(j.at("weights"));
  m.params.bias = matrix_from_json(j.at("bias")).col(0);
  m.beta = matrix_from_json(j.at("beta"));
  m.params.validate();
  return m;
}

}  // namespace

std::string to_json_string(const RelmModel& model) {
  json j{{"format", "rutcast-relm"}, {"version", 1}, {"original", model_to_json(model.original)}};
  if (model.corrector) j["corrector"] = model_to_json(*model.corrector);
  return j.dump(2) + "\n";
}

RelmModel relm_from_json_string(const std::string& text) {
  const json j = json::parse(text);
  if (j.value("format", "") != "rutcast-relm" || j.value("version", 0) != 1)
    throw ValidationError("model json: unrecognized format/version");
  RelmModel m;
  m.original = model_from_json(j.at("original"));
  if (j.contains("corrector")) m.corrector = model_from_json(j.at("corrector"));
  return m;
}

}  // namespace rutcast::elm
