#pragma once

#include <map>
#include <string>
#include <vector>

#include "hcrf/dataset.hpp"
#include "hcrf/model.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

struct PrfCounts {
  long matched = 0;
  long predicted = 0;
  long golden = 0;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Ratios with the corner conventions: no gold spans and no predicted spans
/// scores 1.0 across the board; an empty side against a non-empty one
/// scores 0; F1 is 0 whenever P + R is.
Prf prf_from_counts(const PrfCounts& counts);

/// Strict span match (type and both boundaries), micro-averaged: counts are
/// pooled over the corpus before any ratio is taken.
Prf span_prf(const std::vector<TagSeq>& gold, const std::vector<TagSeq>& predicted,
             const LabelSpace& space);
Prf span_prf(const TagSeq& gold, const TagSeq& predicted, const LabelSpace& space);

/// Pooled token-level agreement over all sentences.
double token_accuracy(const std::vector<TagSeq>& gold, const std::vector<TagSeq>& predicted);
double token_accuracy(const TagSeq& gold, const TagSeq& predicted);

/// Viterbi decode of every sentence under emission + transition, with the
/// inference-time scale knobs applied.
std::vector<TagSeq> decode_dataset(const ModelParams& model, const WeakDataset& dataset,
                                   double emission_scale = 1.0, double crf_scale = 1.0);

struct InferenceMetrics {
  Prf span;
  double token_acc = 0.0;
  long n_sentences = 0;
  long n_gold_spans = 0;
  long n_pred_spans = 0;
  std::map<std::string, PrfCounts> per_type;
};

/// Decodes the dataset and scores against its gold tags.
InferenceMetrics evaluate_inference(const ModelParams& model, const WeakDataset& dataset,
                                    double emission_scale = 1.0, double crf_scale = 1.0);

/// Scores externally produced predictions against the dataset's gold tags.
InferenceMetrics score_predictions(const WeakDataset& dataset,
                                   const std::vector<TagSeq>& predicted);

}  // namespace hcrf
