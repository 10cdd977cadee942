#pragma once

#include <string>
#include <vector>

#include "hcrf/dataset.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

/// Generator for weak-supervision corpora with known truth and known
/// per-source confusion matrices.
struct SynthConfig {
  int n_labels = 5;
  int n_sources = 5;
  int n_sentences = 100;
  int len_min = 5;
  int len_max = 15;
  TagScheme scheme = TagScheme::kFree;
  std::vector<std::string> labels;       // defaults to L0..L{K-1}
  Vector truth_init;                     // K, defaults to uniform
  Matrix truth_trans;                    // K x K row-stochastic
  std::vector<std::string> vocab;        // token strings
  Matrix vocab_dist;                     // K x |vocab| row-stochastic
  std::vector<Matrix> confusions;        // J of K x K row-stochastic
  std::vector<double> missing_rate;      // J entries in [0, 1)
  std::uint64_t seed = 1;

  void validate() const;
};

/// Sticky first-order transition matrix: `stay` on the diagonal, the rest
/// spread uniformly.
Matrix sticky_transition(int n_labels, double stay);

/// Confusion matrix with `accuracy` on the diagonal and uniform errors.
Matrix confusion_from_accuracy(int n_labels, double accuracy);

/// Per-label token distributions over a shared vocabulary where each label
/// concentrates `mass` on its own disjoint block of symbols.
Matrix block_vocab_dist(int n_labels, int vocab_size, int block_size, double mass);
std::vector<std::string> numbered_vocab(int vocab_size);

/// Fills every unset field of cfg with the reference defaults above.
SynthConfig with_defaults(SynthConfig cfg);

struct SynthResult {
  WeakDataset data;
  std::vector<Matrix> confusions;  // the planted matrices, echoed back
};

/// Samples truth sequences from the Markov process, tokens from the
/// per-label vocab distributions, and weak labels from the planted
/// confusions with per-cell missingness. Deterministic given cfg.seed.
SynthResult generate(const SynthConfig& cfg);

/// Row m = empirical distribution of source j's labels on tokens whose gold
/// tag is m; rows never observed are uniform.
Matrix empirical_confusion(const WeakDataset& dataset, int source);

SynthConfig synth_config_from_json(const std::string& text);
SynthConfig synth_config_from_json_file(const std::string& path);

/// Sidecar JSON with the planted confusion matrices.
void write_confusions_json(const SynthResult& result, const std::vector<std::string>& labels,
                           const std::string& path);

}  // namespace hcrf
