#pragma once

#include <vector>

#include "hcrf/types.hpp"

namespace hcrf {

// Conventions used throughout this module:
//   emission    L x K       per-token label scores
//   transition  (K+1) x K   row K is the BEGIN boundary state; the chain
//                           starts with a BEGIN -> t_1 transition and ends
//                           at position L-1 with no end transition
//   weak[j]     K x K       weak[j](k, y) scores truth k against source j
//                           emitting label y
//   grid        L x J       observed weak labels, kMissingCode where a
//                           source abstained

/// Per-sentence score matrices consumed by the dynamic programs.
/// weak_score(l,k)      = sum over observed j of weak[j](k, grid(l,j))
/// weak_free_score(l,k) = sum over observed j of log sum_y exp(weak[j](k,y));
/// the sum over a token's joint weak-label assignment factorizes per source,
/// which is what keeps the free recursion at O(L K^2) after precomputation.
struct ChainScores {
  Matrix emission;
  Matrix weak_score;
  Matrix weak_free_score;
};

ChainScores make_chain_scores(const Eigen::Ref<const Matrix>& emission,
                              const std::vector<Matrix>& weak,
                              const Eigen::Ref<const IntMatrix>& grid);

/// Exact score of one (truth sequence, weak grid) configuration:
/// sum_l emission(l,t_l) + transition(t_{l-1},t_l) + sum_j weak[j](t_l,y_lj)
/// with t_0 = BEGIN and missing cells contributing nothing.
double joint_score(const Eigen::Ref<const Matrix>& emission,
                   const Eigen::Ref<const Matrix>& transition,
                   const std::vector<Matrix>& weak, const TagSeq& truth,
                   const Eigen::Ref<const IntMatrix>& grid);

/// log sum over truth sequences of exp(joint score), observed weak labels
/// held fixed. Forward recursion over emission + weak_score.
double clamped_logsum(const ChainScores& scores, const Eigen::Ref<const Matrix>& transition);
double clamped_logsum(const Eigen::Ref<const Matrix>& emission,
                      const Eigen::Ref<const Matrix>& transition,
                      const std::vector<Matrix>& weak,
                      const Eigen::Ref<const IntMatrix>& grid);

/// log sum over truth sequences AND over all completions of the observed
/// weak cells. Forward recursion over emission + weak_free_score.
double free_logz(const ChainScores& scores, const Eigen::Ref<const Matrix>& transition);
double free_logz(const Eigen::Ref<const Matrix>& emission,
                 const Eigen::Ref<const Matrix>& transition, const std::vector<Matrix>& weak,
                 const Eigen::Ref<const IntMatrix>& grid);

struct LatentChainResult {
  double clamped = 0.0;
  double free = 0.0;
  double loglik = 0.0;  // clamped - free, always <= 0
  Matrix d_emission;
  Matrix d_transition;
  std::vector<Matrix> d_weak;
};

/// Marginal log-likelihood of the observed weak grid and its gradient in
/// emission, transition (BEGIN row included), and every weak matrix.
/// d_weak[j] is exactly zero when source j annotated no token.
LatentChainResult loglik_and_grad(const Eigen::Ref<const Matrix>& emission,
                                  const Eigen::Ref<const Matrix>& transition,
                                  const std::vector<Matrix>& weak,
                                  const Eigen::Ref<const IntMatrix>& grid);

struct ViterbiResult {
  TagSeq tags;
  double score = 0.0;
};

/// Best tag sequence under emission + transition (weak matrices play no
/// role at decode time). Ties broken toward the lowest label index at each
/// backpointer decision.
ViterbiResult viterbi(const Eigen::Ref<const Matrix>& emission,
                      const Eigen::Ref<const Matrix>& transition);

/// Standard linear-chain CRF pieces, the J = 0 special case of the model.
double crf_path_score(const Eigen::Ref<const Matrix>& emission,
                      const Eigen::Ref<const Matrix>& transition, const TagSeq& tags);
double crf_logz(const Eigen::Ref<const Matrix>& emission,
                const Eigen::Ref<const Matrix>& transition);

struct SupervisedChainResult {
  double loglik = 0.0;
  Matrix d_emission;
  Matrix d_transition;
};

/// log p(tags | emission, transition) and its gradient.
SupervisedChainResult supervised_loglik_and_grad(const Eigen::Ref<const Matrix>& emission,
                                                 const Eigen::Ref<const Matrix>& transition,
                                                 const TagSeq& tags);

}  // namespace hcrf
