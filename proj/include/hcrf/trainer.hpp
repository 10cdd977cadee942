#pragma once

#include <string>
#include <vector>

#include "hcrf/dataset.hpp"
#include "hcrf/model.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

enum class OptimizerKind { kAdam, kSgd };

/// Choice of weak-matrix / pretraining initialization.
///   kCountRatio:   rho-scaled agreement counts against majority vote
///   kUniformDiag:  diagonal 1/K, off-diagonal 0
///   kShortPretrain: kCountRatio matrices, but classifier pretraining
///                   truncated to 50 optimizer steps
enum class InitVariant { kCountRatio, kUniformDiag, kShortPretrain };

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct TrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double lr_backbone = 1e-2;
  double lr_crf = 1e-2;
  double lr_weak = 1e-3;
  double rho = 2.0;
  double smoothing = 0.0;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  AdamConfig adam;
  std::uint64_t seed = 1;
  int pretrain_epochs = 1;
  int pretrain_steps = 0;  // when > 0, a step budget replaces pretrain_epochs

  BackboneKind backbone_kind = BackboneKind::kLogLinear;
  LogLinearConfig log_linear;
  MlpConfig mlp;

  // Ablation switches.
  bool no_weak_transition = false;
  bool no_crf_transition = false;
  bool freeze_source = false;
  double crf_scale_at_inference = 1.0;
  double emission_scale_at_inference = 1.0;
  InitVariant init_variant = InitVariant::kCountRatio;

  int threads = 0;  // 0 = hardware concurrency (or HCRF_THREADS)
  std::string checkpoint_path;

  // Optional dev-set early stopping on span F1.
  bool early_stop = false;
  std::string dev_path;
  int patience = 5;

  /// Throws ContractViolation on hard violations (batch_size < 2,
  /// non-positive rates); returns human-readable warnings for soft ones.
  std::vector<std::string> validate() const;
};

struct EpochStat {
  int epoch = 0;
  double mean_neg_loglik = 0.0;
  double wall_seconds = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStat> history;  // entry 0 is the pre-training loss
};

/// Full pipeline: majority-vote labels, supervised pretraining of the
/// classifier, count-ratio initialization of the weak matrices, then
/// mini-batch ascent on the marginal log-likelihood with per-group
/// learning rates. Deterministic given cfg.seed.
TrainResult train(const WeakDataset& dataset, const TrainConfig& cfg);

TrainConfig train_config_from_json(const std::string& text);
TrainConfig train_config_from_json_file(const std::string& path);

void write_loss_csv(const std::vector<EpochStat>& history, const std::string& path);

const char* to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& text);
const char* to_string(InitVariant variant);
InitVariant init_variant_from_string(const std::string& text);

}  // namespace hcrf
