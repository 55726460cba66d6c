#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "rutcast/rng.hpp"

namespace rutcast::elm {

enum class Activation { Sigmoid, Tanh, Sine };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Hidden-layer parameters of a single-hidden-layer ELM.
struct Params {
  Eigen::MatrixXd weights;  // L x n input-to-hidden weights
  Eigen::VectorXd bias;     // L hidden thresholds
  double regularization = 100.0;  // C in the ridge objective, > 0
  Activation activation = Activation::Sigmoid;

  int hidden() const { return int(weights.rows()); }
  int inputs() const { return int(weights.cols()); }

  // W, b uniform on [-1, 1]; used when the optimizer does not supply them.
  static Params random(int hidden, int inputs, double regularization, Activation act, Rng& rng);

  void validate() const;
};

enum class SolveBranch { Auto, Primal, Dual };

// N x L hidden-layer output matrix H with H(j, i) = act(W_i . X_j + b_i).
Eigen::MatrixXd hidden_matrix(const Params& params, const Eigen::MatrixXd& X);

// Ridge-regularized output weights. Primal form (H'H + I/C)^-1 H'T when
// N >= L, dual form H'(HH' + I/C)^-1 T otherwise; both satisfy the primal
// normal equations to 1e-8 relative or the solve reports failure.
Eigen::MatrixXd solve_beta(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T, double C,
                           SolveBranch branch = SolveBranch::Auto);

// Ridge objective 0.5*|beta|^2 + C/2*|H beta - T|^2 whose minimizer solve_beta returns.
double ridge_objective(const Eigen::MatrixXd& H, const Eigen::MatrixXd& T, double C,
                       const Eigen::MatrixXd& beta);

struct Model {
  Params params;
  Eigen::MatrixXd beta;  // L x m output weights

  Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;
};

Model train_elm(const Params& params, const Eigen::MatrixXd& X, const Eigen::MatrixXd& T);

// Residual-corrected ELM: a second ELM fits the original's training
// residuals; predictions are the sum of both stages.
struct RelmModel {
  Model original;
  std::optional<Model> corrector;  // absent when the corrector is disabled (L = 0)

  Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;
};

RelmModel train_relm(const Params& original, const Params& corrector, const Eigen::MatrixXd& X,
                     const Eigen::MatrixXd& T);

std::string to_json_string(const RelmModel& model);
RelmModel relm_from_json_string(const std::string& text);

}  // namespace rutcast::elm
