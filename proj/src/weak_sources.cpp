#include "hcrf/weak_sources.hpp"

namespace hcrf {

std::vector<Matrix> init_weak_matrices(const WeakDataset& dataset,
                                       const std::vector<TagSeq>& proxy_labels,
                                       const SourceInitConfig& cfg) {
  if (cfg.rho <= 0.0 || cfg.smoothing < 0.0) {
    throw ContractViolation("init_weak_matrices: need rho > 0 and smoothing >= 0");
  }
  if (proxy_labels.size() != dataset.sentences.size()) {
    throw ContractViolation("init_weak_matrices: proxy labels misaligned with dataset");
  }
  const int k = dataset.space.size();
  const int n_sources = dataset.n_sources();

  std::vector<Matrix> counts(static_cast<std::size_t>(n_sources), Matrix::Zero(k, k));
  for (std::size_t i = 0; i < dataset.sentences.size(); ++i) {
    const auto& sentence = dataset.sentences[i];
    const auto& proxy = proxy_labels[i];
    if (static_cast<int>(proxy.size()) != sentence.length()) {
      throw ContractViolation("init_weak_matrices: proxy labels misaligned with dataset");
    }
    for (int l = 0; l < sentence.length(); ++l) {
      const int truth = proxy[static_cast<std::size_t>(l)];
      if (truth < 0 || truth >= k) throw ContractViolation("init_weak_matrices: proxy label out of range");
      for (int j = 0; j < n_sources; ++j) {
        const int y = sentence.weak(l, j);
        if (y >= 0) counts[static_cast<std::size_t>(j)](truth, y) += 1.0;
      }
    }
  }

  std::vector<Matrix> weak(static_cast<std::size_t>(n_sources), Matrix::Zero(k, k));
  for (int j = 0; j < n_sources; ++j) {
    for (int m = 0; m < k; ++m) {
      const double denom = counts[static_cast<std::size_t>(j)].row(m).sum() + k * cfg.smoothing;
      if (denom <= 0.0) {
        weak[static_cast<std::size_t>(j)].row(m).setConstant(cfg.rho / k);
      } else {
        weak[static_cast<std::size_t>(j)].row(m) =
            cfg.rho * (counts[static_cast<std::size_t>(j)].row(m).array() + cfg.smoothing) /
            denom;
      }
    }
  }
  return weak;
}

Matrix export_matrix(const Eigen::Ref<const Matrix>& raw, ExportMode mode) {
  if (!raw.allFinite()) throw ContractViolation("export_matrix: non-finite input");
  Matrix out(raw.rows(), raw.cols());
  for (Eigen::Index m = 0; m < raw.rows(); ++m) {
    if (mode == ExportMode::kClamp) {
      Vector row = raw.row(m).cwiseMax(0.0);
      const double total = row.sum();
      if (total > 0.0) {
        out.row(m) = row.transpose() / total;
      } else {
        out.row(m).setConstant(1.0 / static_cast<double>(raw.cols()));
      }
    } else {
      const double shift = raw.row(m).maxCoeff();
      Vector row = (raw.row(m).array() - shift).exp();
      out.row(m) = row.transpose() / row.sum();
    }
  }
  return out;
}

double matrix_correlation(const Eigen::Ref<const Matrix>& estimated,
                          const Eigen::Ref<const Matrix>& reference) {
  if (estimated.rows() != reference.rows() || estimated.cols() != reference.cols()) {
    throw ContractViolation("matrix_correlation: shape mismatch");
  }
  const auto n = static_cast<double>(estimated.size());
  const double mean_a = estimated.mean();
  const double mean_b = reference.mean();
  const Matrix da = estimated.array() - mean_a;
  const Matrix db = reference.array() - mean_b;
  const double var_a = da.squaredNorm() / n;
  const double var_b = db.squaredNorm() / n;
  if (var_a == 0.0 || var_b == 0.0) {
    throw NumericError("matrix_correlation: undefined for constant input");
  }
  return (da.array() * db.array()).sum() / n / std::sqrt(var_a * var_b);
}

}  // namespace hcrf
