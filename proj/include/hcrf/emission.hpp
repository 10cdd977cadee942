#pragma once

#include <string>
#include <vector>

#include "hcrf/types.hpp"

namespace hcrf {

enum class BackboneKind { kLogLinear, kTinyMlp };

/// Hashed feature templates: lowercased token identity, prefixes and
/// suffixes of length 1-3, digit and word-shape flags, and (optionally)
/// the previous/next lowercased tokens.
struct LogLinearConfig {
  int hash_dim = 1 << 18;
  bool context = true;
};

/// Token-hash embeddings, mean over a +-1 window, one tanh hidden layer.
struct MlpConfig {
  int vocab_hash_dim = 4096;
  int embed_dim = 32;
  int hidden_dim = 64;
};

/// Pluggable per-token scorer. Parameters live in one flat vector so the
/// optimizer, serialization, and finite-difference checks all see a single
/// dense array.
struct EmissionBackbone {
  BackboneKind kind = BackboneKind::kLogLinear;
  LogLinearConfig log_linear;
  MlpConfig mlp;
  int n_labels = 0;
  Vector weights;
};

EmissionBackbone make_log_linear(int n_labels, const LogLinearConfig& cfg = {});
EmissionBackbone make_tiny_mlp(int n_labels, const MlpConfig& cfg, Rng& rng);

/// L x K matrix of unnormalized label scores. No row normalization: the
/// chain model is globally normalized.
Matrix emit(const EmissionBackbone& backbone, const std::vector<std::string>& tokens);

/// Gradient of <d_emission, emit(backbone, tokens)> w.r.t. the weights.
Vector emit_backward(const EmissionBackbone& backbone, const std::vector<std::string>& tokens,
                     const Matrix& d_emission);

/// Same, accumulated into an existing weight-sized buffer. The log-linear
/// gradient touches only the features present in the sentence, so batching
/// through one shared buffer avoids a dense vector per sentence.
void emit_backward_into(const EmissionBackbone& backbone, const std::vector<std::string>& tokens,
                        const Matrix& d_emission, Eigen::Ref<Vector> grad);

/// Stable 64-bit FNV-1a, used for all feature and vocabulary hashing.
std::uint64_t fnv1a(const std::string& text);

const char* to_string(BackboneKind kind);
BackboneKind backbone_kind_from_string(const std::string& text);

}  // namespace hcrf
