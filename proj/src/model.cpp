#include "hcrf/model.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "hcrf/dataset.hpp"
#include "json.hpp"

namespace hcrf {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

std::string to_hex(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", value);
  return buf;
}

double from_hex(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw FormatError("bad numeric literal '" + text + "'");
  return value;
}

json encode_matrix(const Eigen::Ref<const Matrix>& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_hex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix decode_matrix(const json& rows, Eigen::Index n_rows, Eigen::Index n_cols,
                     const char* what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n_rows) {
    throw FormatError(std::string("model file: bad shape for ") + what);
  }
  Matrix m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw FormatError(std::string("model file: bad shape for ") + what);
    }
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      m(r, c) = from_hex(row[static_cast<std::size_t>(c)].get<std::string>());
    }
  }
  return m;
}

}  // namespace

void save_model(const ModelParams& params, const std::string& path) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["labels"] = params.space.labels();
  doc["scheme"] = to_string(params.space.scheme());
  doc["sources"] = params.source_names;

  json backbone;
  backbone["kind"] = to_string(params.backbone.kind);
  if (params.backbone.kind == BackboneKind::kLogLinear) {
    backbone["feature_config"] = {{"hash_dim", params.backbone.log_linear.hash_dim},
                                  {"context", params.backbone.log_linear.context}};
  } else {
    backbone["feature_config"] = {{"vocab_hash_dim", params.backbone.mlp.vocab_hash_dim},
                                  {"embed_dim", params.backbone.mlp.embed_dim},
                                  {"hidden_dim", params.backbone.mlp.hidden_dim}};
  }
  json weights = json::array();
  for (Eigen::Index i = 0; i < params.backbone.weights.size(); ++i) {
    weights.push_back(to_hex(params.backbone.weights[i]));
  }
  backbone["weights"] = std::move(weights);
  doc["backbone"] = std::move(backbone);

  doc["crf_transition"] = encode_matrix(params.transition);
  json weak = json::array();
  for (const auto& pi : params.weak) weak.push_back(encode_matrix(pi));
  doc["weak_matrices"] = std::move(weak);

  atomic_write_file(path, doc.dump(1, '\t'));
}

ModelParams load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw FormatError("model file '" + path + "': " + e.what());
  }

  if (!doc.contains("format_version") || doc["format_version"].get<int>() != kFormatVersion) {
    throw FormatError("model file '" + path + "': unsupported format_version");
  }

  LabelSpace space(doc.at("labels").get<std::vector<std::string>>(),
                   scheme_from_string(doc.at("scheme").get<std::string>()));
  const int k = space.size();
  auto sources = doc.at("sources").get<std::vector<std::string>>();

  const auto& bj = doc.at("backbone");
  const auto kind = backbone_kind_from_string(bj.at("kind").get<std::string>());
  EmissionBackbone backbone;
  if (kind == BackboneKind::kLogLinear) {
    LogLinearConfig cfg;
    cfg.hash_dim = bj.at("feature_config").at("hash_dim").get<int>();
    cfg.context = bj.at("feature_config").at("context").get<bool>();
    backbone = make_log_linear(k, cfg);
  } else {
    MlpConfig cfg;
    cfg.vocab_hash_dim = bj.at("feature_config").at("vocab_hash_dim").get<int>();
    cfg.embed_dim = bj.at("feature_config").at("embed_dim").get<int>();
    cfg.hidden_dim = bj.at("feature_config").at("hidden_dim").get<int>();
    Rng rng(0);
    backbone = make_tiny_mlp(k, cfg, rng);
  }
  const auto& weights = bj.at("weights");
  if (static_cast<Eigen::Index>(weights.size()) != backbone.weights.size()) {
    throw FormatError("model file '" + path + "': weight count does not match feature_config");
  }
  for (Eigen::Index i = 0; i < backbone.weights.size(); ++i) {
    backbone.weights[i] = from_hex(weights[static_cast<std::size_t>(i)].get<std::string>());
  }

  ModelParams params{space, std::move(sources), std::move(backbone),
                     decode_matrix(doc.at("crf_transition"), k + 1, k, "crf_transition"),
                     {}};
  const auto& weak = doc.at("weak_matrices");
  if (!weak.is_array() || weak.size() != params.source_names.size()) {
    throw FormatError("model file '" + path + "': weak_matrices count does not match sources");
  }
  for (const auto& pi : weak) {
    params.weak.push_back(decode_matrix(pi, k, k, "weak_matrices"));
  }
  return params;
}

}  // namespace hcrf
