#pragma once

#include <string>
#include <vector>

#include "hcrf/emission.hpp"
#include "hcrf/label_space.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

/// Everything the sequence labeler needs at decode time plus the learned
/// per-source weak matrices.
struct ModelParams {
  LabelSpace space;
  std::vector<std::string> source_names;
  EmissionBackbone backbone;
  Matrix transition;          // (K+1) x K, row K = BEGIN
  std::vector<Matrix> weak;   // one K x K matrix per source

  int n_labels() const { return space.size(); }
};

/// Writes the model as a single JSON document. Doubles are encoded as
/// hex-float strings so load(save(m)) reproduces every parameter bit.
void save_model(const ModelParams& params, const std::string& path);
ModelParams load_model(const std::string& path);

}  // namespace hcrf
