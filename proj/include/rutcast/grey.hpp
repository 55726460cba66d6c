#pragma once

#include <string>
#include <vector>

namespace rutcast::grey {

struct GreyConfig {
  double rho = 0.5;  // discriminant coefficient, in [0.1, 1.0]
};

struct SimilarityMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  // symmetric, unit diagonal

  std::size_t size() const { return labels.size(); }
  std::string to_csv() const;
};

// Min-max rescale to [0,1]; a constant series maps to all zeros.
std::vector<double> normalize(const std::vector<double>& series);

// Pointwise relation coefficients between two already-normalized sequences.
// Identical sequences (max difference 0) give all ones.
std::vector<double> relation_coefficients(const std::vector<double>& ref,
                                          const std::vector<double>& cmp, double rho);

// Grey relation degree: mean relation coefficient over independently
// normalized inputs. Always in (0, 1], 1 for identical shapes.
double relation_degree(const std::vector<double>& ref, const std::vector<double>& cmp,
                       const GreyConfig& cfg = {});

// Pairwise relation-degree matrix. Entries are independent, so rows are
// computed in parallel; results are identical to the serial reference.
SimilarityMatrix similarity_matrix(const std::vector<std::vector<double>>& series,
                                   const std::vector<std::string>& labels,
                                   const GreyConfig& cfg = {});

// Plain double loop, kept as the comparison baseline for tests and the
// kernel benchmark.
SimilarityMatrix similarity_matrix_serial(const std::vector<std::vector<double>>& series,
                                          const std::vector<std::string>& labels,
                                          const GreyConfig& cfg = {});

}  // namespace rutcast::grey
