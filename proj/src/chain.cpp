#include "hcrf/chain.hpp"

namespace hcrf {

namespace {

void check_shapes(const Eigen::Ref<const Matrix>& emission,
                  const Eigen::Ref<const Matrix>& transition) {
  const auto k = emission.cols();
  if (emission.rows() < 1) throw ContractViolation("chain: empty sentence");
  if (transition.rows() != k + 1 || transition.cols() != k) {
    throw ContractViolation("chain: transition must be (K+1) x K");
  }
}

void check_weak(const std::vector<Matrix>& weak, const Eigen::Ref<const IntMatrix>& grid,
                Eigen::Index length, Eigen::Index k) {
  if (grid.rows() != length || grid.cols() != static_cast<Eigen::Index>(weak.size())) {
    throw ContractViolation("chain: grid must be L x J");
  }
  for (const auto& pi : weak) {
    if (pi.rows() != k || pi.cols() != k) throw ContractViolation("chain: weak matrix must be K x K");
  }
  for (Eigen::Index l = 0; l < grid.rows(); ++l) {
    for (Eigen::Index j = 0; j < grid.cols(); ++j) {
      const int y = grid(l, j);
      if (y != -1 && (y < 0 || y >= k)) throw ContractViolation("chain: weak label out of range");
    }
  }
}

// alpha(0,k) = S(0,k) + T(BEGIN,k); alpha(l,k) = S(l,k) + lse_k'(alpha(l-1,k') + T(k',k)).
// Returns lse over the last row. The BEGIN boundary is handled by
// construction, so no -inf sentinel ever enters a recursion.
double forward_pass(const Matrix& node, const Eigen::Ref<const Matrix>& transition,
                    Matrix& log_alpha) {
  const auto length = node.rows();
  const auto k = node.cols();
  log_alpha.resize(length, k);
  log_alpha.row(0) = node.row(0) + transition.row(k);
  Vector terms(k);
  for (Eigen::Index l = 1; l < length; ++l) {
    for (Eigen::Index to = 0; to < k; ++to) {
      terms = log_alpha.row(l - 1).transpose() + transition.col(to).head(k);
      log_alpha(l, to) = log_sum_exp(terms) + node(l, to);
    }
  }
  return log_sum_exp(log_alpha.row(length - 1));
}

// beta(L-1,k) = 0; beta(l,k) = lse_k'(T(k,k') + S(l+1,k') + beta(l+1,k')).
void backward_pass(const Matrix& node, const Eigen::Ref<const Matrix>& transition,
                   Matrix& log_beta) {
  const auto length = node.rows();
  const auto k = node.cols();
  log_beta.resize(length, k);
  log_beta.row(length - 1).setZero();
  Vector terms(k);
  for (Eigen::Index l = length - 2; l >= 0; --l) {
    for (Eigen::Index from = 0; from < k; ++from) {
      terms = transition.row(from).transpose() + node.row(l + 1).transpose() +
              log_beta.row(l + 1).transpose();
      log_beta(l, from) = log_sum_exp(terms);
    }
  }
}

// Log-normalizer plus token marginals; when d_transition is given, the
// expected transition counts (BEGIN row included) are accumulated into it
// scaled by sign.
double forward_backward(const Matrix& node, const Eigen::Ref<const Matrix>& transition,
                        Matrix& marginals, Matrix* d_transition, double sign) {
  const auto length = node.rows();
  const auto k = node.cols();
  Matrix log_alpha, log_beta;
  const double log_total = forward_pass(node, transition, log_alpha);
  if (!std::isfinite(log_total)) throw NumericError("chain: non-finite log-normalizer");
  backward_pass(node, transition, log_beta);

  marginals = (log_alpha + log_beta).array() - log_total;
  marginals = marginals.array().exp();

  if (d_transition != nullptr) {
    for (Eigen::Index to = 0; to < k; ++to) {
      (*d_transition)(k, to) += sign * marginals(0, to);
    }
    for (Eigen::Index l = 1; l < length; ++l) {
      for (Eigen::Index from = 0; from < k; ++from) {
        for (Eigen::Index to = 0; to < k; ++to) {
          (*d_transition)(from, to) +=
              sign * std::exp(log_alpha(l - 1, from) + transition(from, to) + node(l, to) +
                              log_beta(l, to) - log_total);
        }
      }
    }
  }
  return log_total;
}

}  // namespace

ChainScores make_chain_scores(const Eigen::Ref<const Matrix>& emission,
                              const std::vector<Matrix>& weak,
                              const Eigen::Ref<const IntMatrix>& grid) {
  const auto length = emission.rows();
  const auto k = emission.cols();
  check_weak(weak, grid, length, k);

  ChainScores scores;
  scores.emission = emission;
  scores.weak_score = Matrix::Zero(length, k);
  scores.weak_free_score = Matrix::Zero(length, k);

  // Per-source row log-sum-exp, reused for every token the source labeled.
  const auto n_sources = static_cast<Eigen::Index>(weak.size());
  Matrix row_lse(n_sources, k);
  for (Eigen::Index j = 0; j < n_sources; ++j) {
    for (Eigen::Index truth = 0; truth < k; ++truth) {
      row_lse(j, truth) = log_sum_exp(weak[static_cast<std::size_t>(j)].row(truth));
    }
  }

  for (Eigen::Index l = 0; l < length; ++l) {
    for (Eigen::Index j = 0; j < n_sources; ++j) {
      const int y = grid(l, j);
      if (y < 0) continue;
      scores.weak_score.row(l) += weak[static_cast<std::size_t>(j)].col(y).transpose();
      scores.weak_free_score.row(l) += row_lse.row(j);
    }
  }
  return scores;
}

double joint_score(const Eigen::Ref<const Matrix>& emission,
                   const Eigen::Ref<const Matrix>& transition,
                   const std::vector<Matrix>& weak, const TagSeq& truth,
                   const Eigen::Ref<const IntMatrix>& grid) {
  check_shapes(emission, transition);
  const auto length = emission.rows();
  const auto k = emission.cols();
  check_weak(weak, grid, length, k);
  if (static_cast<Eigen::Index>(truth.size()) != length) {
    throw ContractViolation("joint_score: truth length mismatch");
  }
  double score = 0.0;
  Eigen::Index prev = k;  // BEGIN
  for (Eigen::Index l = 0; l < length; ++l) {
    const int t = truth[static_cast<std::size_t>(l)];
    if (t < 0 || t >= k) throw ContractViolation("joint_score: truth label out of range");
    score += emission(l, t);
    score += transition(prev, t);
    for (Eigen::Index j = 0; j < grid.cols(); ++j) {
      const int y = grid(l, j);
      if (y >= 0) score += weak[static_cast<std::size_t>(j)](t, y);
    }
    prev = t;
  }
  return score;
}

double clamped_logsum(const ChainScores& scores, const Eigen::Ref<const Matrix>& transition) {
  check_shapes(scores.emission, transition);
  Matrix log_alpha;
  const Matrix node = scores.emission + scores.weak_score;
  const double value = forward_pass(node, transition, log_alpha);
  if (!std::isfinite(value)) throw NumericError("clamped_logsum: non-finite result");
  return value;
}

double clamped_logsum(const Eigen::Ref<const Matrix>& emission,
                      const Eigen::Ref<const Matrix>& transition,
                      const std::vector<Matrix>& weak,
                      const Eigen::Ref<const IntMatrix>& grid) {
  return clamped_logsum(make_chain_scores(emission, weak, grid), transition);
}

double free_logz(const ChainScores& scores, const Eigen::Ref<const Matrix>& transition) {
  check_shapes(scores.emission, transition);
  Matrix log_alpha;
  const Matrix node = scores.emission + scores.weak_free_score;
  const double value = forward_pass(node, transition, log_alpha);
  if (!std::isfinite(value)) throw NumericError("free_logz: non-finite result");
  return value;
}

double free_logz(const Eigen::Ref<const Matrix>& emission,
                 const Eigen::Ref<const Matrix>& transition, const std::vector<Matrix>& weak,
                 const Eigen::Ref<const IntMatrix>& grid) {
  return free_logz(make_chain_scores(emission, weak, grid), transition);
}

LatentChainResult loglik_and_grad(const Eigen::Ref<const Matrix>& emission,
                                  const Eigen::Ref<const Matrix>& transition,
                                  const std::vector<Matrix>& weak,
                                  const Eigen::Ref<const IntMatrix>& grid) {
  check_shapes(emission, transition);
  const auto length = emission.rows();
  const auto k = emission.cols();
  const auto scores = make_chain_scores(emission, weak, grid);

  LatentChainResult result;
  result.d_transition = Matrix::Zero(k + 1, k);
  result.d_weak.assign(weak.size(), Matrix::Zero(k, k));

  Matrix clamped_marginals, free_marginals;
  const Matrix clamped_node = scores.emission + scores.weak_score;
  const Matrix free_node = scores.emission + scores.weak_free_score;
  result.clamped =
      forward_backward(clamped_node, transition, clamped_marginals, &result.d_transition, 1.0);
  result.free =
      forward_backward(free_node, transition, free_marginals, &result.d_transition, -1.0);
  result.loglik = result.clamped - result.free;
  result.d_emission = clamped_marginals - free_marginals;

  // Clamped term: weak_score(l,k) reads weak[j](k, grid(l,j)) directly.
  for (Eigen::Index l = 0; l < length; ++l) {
    for (Eigen::Index j = 0; j < grid.cols(); ++j) {
      const int y = grid(l, j);
      if (y < 0) continue;
      result.d_weak[static_cast<std::size_t>(j)].col(y) +=
          clamped_marginals.row(l).transpose();
    }
  }
  // Free term: d/d weak[j](t,y) of log sum_y' exp(weak[j](t,y')) is the row
  // softmax, weighted by the free marginal mass of every token j labeled.
  for (Eigen::Index j = 0; j < grid.cols(); ++j) {
    Vector mass = Vector::Zero(k);
    bool seen = false;
    for (Eigen::Index l = 0; l < length; ++l) {
      if (grid(l, j) < 0) continue;
      mass += free_marginals.row(l).transpose();
      seen = true;
    }
    if (!seen) continue;
    const auto& pi = weak[static_cast<std::size_t>(j)];
    for (Eigen::Index truth = 0; truth < k; ++truth) {
      const double row_total = log_sum_exp(pi.row(truth));
      result.d_weak[static_cast<std::size_t>(j)].row(truth) -=
          mass[truth] * (pi.row(truth).array() - row_total).exp().matrix();
    }
  }
  return result;
}

ViterbiResult viterbi(const Eigen::Ref<const Matrix>& emission,
                      const Eigen::Ref<const Matrix>& transition) {
  check_shapes(emission, transition);
  const auto length = emission.rows();
  const auto k = emission.cols();

  Matrix best(length, k);
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> back(length, k);
  best.row(0) = transition.row(k) + emission.row(0);
  back.row(0).setConstant(static_cast<int>(k));
  for (Eigen::Index l = 1; l < length; ++l) {
    for (Eigen::Index to = 0; to < k; ++to) {
      double top = best(l - 1, 0) + transition(0, to);
      int arg = 0;
      for (Eigen::Index from = 1; from < k; ++from) {
        const double candidate = best(l - 1, from) + transition(from, to);
        if (candidate > top) {
          top = candidate;
          arg = static_cast<int>(from);
        }
      }
      best(l, to) = top + emission(l, to);
      back(l, to) = arg;
    }
  }

  ViterbiResult result;
  Eigen::Index tail = 0;
  for (Eigen::Index to = 1; to < k; ++to) {
    if (best(length - 1, to) > best(length - 1, tail)) tail = to;
  }
  result.score = best(length - 1, tail);
  result.tags.assign(static_cast<std::size_t>(length), 0);
  result.tags[static_cast<std::size_t>(length - 1)] = static_cast<int>(tail);
  for (Eigen::Index l = length - 1; l > 0; --l) {
    tail = back(l, tail);
    result.tags[static_cast<std::size_t>(l - 1)] = static_cast<int>(tail);
  }
  return result;
}

double crf_path_score(const Eigen::Ref<const Matrix>& emission,
                      const Eigen::Ref<const Matrix>& transition, const TagSeq& tags) {
  check_shapes(emission, transition);
  const auto length = emission.rows();
  const auto k = emission.cols();
  if (static_cast<Eigen::Index>(tags.size()) != length) {
    throw ContractViolation("crf_path_score: tag length mismatch");
  }
  double score = 0.0;
  Eigen::Index prev = k;
  for (Eigen::Index l = 0; l < length; ++l) {
    const int t = tags[static_cast<std::size_t>(l)];
    if (t < 0 || t >= k) throw ContractViolation("crf_path_score: tag out of range");
    score = (score + transition(prev, t)) + emission(l, t);
    prev = t;
  }
  return score;
}

double crf_logz(const Eigen::Ref<const Matrix>& emission,
                const Eigen::Ref<const Matrix>& transition) {
  check_shapes(emission, transition);
  Matrix log_alpha;
  const Matrix node = emission;
  const double value = forward_pass(node, transition, log_alpha);
  if (!std::isfinite(value)) throw NumericError("crf_logz: non-finite result");
  return value;
}

SupervisedChainResult supervised_loglik_and_grad(const Eigen::Ref<const Matrix>& emission,
                                                 const Eigen::Ref<const Matrix>& transition,
                                                 const TagSeq& tags) {
  check_shapes(emission, transition);
  const auto length = emission.rows();
  const auto k = emission.cols();

  SupervisedChainResult result;
  result.d_transition = Matrix::Zero(k + 1, k);
  Matrix marginals;
  const Matrix node = emission;
  const double log_z = forward_backward(node, transition, marginals, &result.d_transition, -1.0);
  result.loglik = crf_path_score(emission, transition, tags) - log_z;
  result.d_emission = -marginals;
  Eigen::Index prev = k;
  for (Eigen::Index l = 0; l < length; ++l) {
    const int t = tags[static_cast<std::size_t>(l)];
    result.d_emission(l, t) += 1.0;
    result.d_transition(prev, t) += 1.0;
    prev = t;
  }
  return result;
}

}  // namespace hcrf
