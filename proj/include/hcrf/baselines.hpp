#pragma once

#include "hcrf/dataset.hpp"
#include "hcrf/trainer.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

/// Per-token mode of the observed weak labels. Ties break toward the lowest
/// label index; tokens no source annotated fall back to O under BIO, label 0
/// otherwise.
TagSeq majority_vote(const Sentence& sentence, const LabelSpace& space);
std::vector<TagSeq> majority_vote(const WeakDataset& dataset);

/// Two-stage baseline trainer: standard CRF likelihood on the given fixed
/// tags (the J = 0 special case of the full objective). cfg.epochs rounds,
/// cfg.lr_backbone / cfg.lr_crf learning rates.
TrainResult train_supervised(const WeakDataset& dataset, const std::vector<TagSeq>& tags,
                             const TrainConfig& cfg);

}  // namespace hcrf
