#pragma once

#include <vector>

#include "hcrf/dataset.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

struct SourceInitConfig {
  double rho = 2.0;       // scale of the count-ratio initialization
  double smoothing = 0.0; // additive count; > 0 also resolves empty rows
};

/// Count-ratio initialization of the weak source matrices against a fixed
/// proxy labeling (typically majority vote):
///   pi[j](m,n) = rho * #(proxy=m, y_j=n) / #(proxy=m, y_j observed),
/// entries in [0, rho]. Rows whose denominator is zero become rho/K.
std::vector<Matrix> init_weak_matrices(const WeakDataset& dataset,
                                       const std::vector<TagSeq>& proxy_labels,
                                       const SourceInitConfig& cfg);

enum class ExportMode { kClamp, kSoftmax };

/// Row-stochastic view of an unconstrained weak source matrix: kClamp zeroes
/// non-positive entries then normalizes each row (all-non-positive rows
/// become uniform); kSoftmax exponentiates then normalizes.
Matrix export_matrix(const Eigen::Ref<const Matrix>& raw, ExportMode mode);

/// Pearson correlation over all K^2 elements of two same-shape matrices.
/// Throws NumericError when either input is constant.
double matrix_correlation(const Eigen::Ref<const Matrix>& estimated,
                          const Eigen::Ref<const Matrix>& reference);

}  // namespace hcrf
