#include "hcrf/emission.hpp"

#include <cctype>

namespace hcrf {

namespace {

std::string lowercase(const std::string& text) {
  std::string out = text;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string word_shape(const std::string& text) {
  std::string shape;
  for (std::size_t i = 0; i < text.size() && shape.size() < 12; ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isupper(c)) {
      shape += 'X';
    } else if (std::islower(c)) {
      shape += 'x';
    } else if (std::isdigit(c)) {
      shape += '9';
    } else {
      shape += '-';
    }
  }
  return shape;
}

bool has_digit(const std::string& text) {
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
  }
  return false;
}

std::uint32_t bucket(const std::string& feature, int dim) {
  return static_cast<std::uint32_t>(fnv1a(feature) % static_cast<std::uint64_t>(dim));
}

// Per-token hashed feature ids for the log-linear backbone.
std::vector<std::vector<std::uint32_t>> feature_ids(const LogLinearConfig& cfg,
                                                    const std::vector<std::string>& tokens) {
  const int length = static_cast<int>(tokens.size());
  std::vector<std::string> lower(tokens.size());
  for (std::size_t l = 0; l < tokens.size(); ++l) lower[l] = lowercase(tokens[l]);

  std::vector<std::vector<std::uint32_t>> ids(tokens.size());
  for (int l = 0; l < length; ++l) {
    const auto& raw = tokens[static_cast<std::size_t>(l)];
    const auto& low = lower[static_cast<std::size_t>(l)];
    auto& out = ids[static_cast<std::size_t>(l)];
    out.push_back(bucket("w=" + low, cfg.hash_dim));
    for (std::size_t n = 1; n <= 3 && n <= low.size(); ++n) {
      out.push_back(bucket("p" + std::to_string(n) + "=" + low.substr(0, n), cfg.hash_dim));
      out.push_back(bucket("s" + std::to_string(n) + "=" + low.substr(low.size() - n), cfg.hash_dim));
    }
    out.push_back(bucket("shape=" + word_shape(raw), cfg.hash_dim));
    if (has_digit(raw)) out.push_back(bucket("hasdigit", cfg.hash_dim));
    if (cfg.context) {
      out.push_back(bucket("prev=" + (l > 0 ? lower[static_cast<std::size_t>(l - 1)] : "<s>"),
                           cfg.hash_dim));
      out.push_back(bucket(
          "next=" + (l + 1 < length ? lower[static_cast<std::size_t>(l + 1)] : "</s>"),
          cfg.hash_dim));
    }
  }
  return ids;
}

// Flat layout of the tiny MLP: [emb | w1 | b1 | w2 | b2].
struct MlpLayout {
  Eigen::Index emb, w1, b1, w2, b2, total;
};

MlpLayout mlp_layout(const MlpConfig& cfg, int n_labels) {
  MlpLayout off;
  off.emb = 0;
  off.w1 = off.emb + static_cast<Eigen::Index>(cfg.vocab_hash_dim) * cfg.embed_dim;
  off.b1 = off.w1 + static_cast<Eigen::Index>(cfg.hidden_dim) * cfg.embed_dim;
  off.w2 = off.b1 + cfg.hidden_dim;
  off.b2 = off.w2 + static_cast<Eigen::Index>(n_labels) * cfg.hidden_dim;
  off.total = off.b2 + n_labels;
  return off;
}

std::vector<std::uint32_t> token_buckets(const MlpConfig& cfg,
                                         const std::vector<std::string>& tokens) {
  std::vector<std::uint32_t> ids(tokens.size());
  for (std::size_t l = 0; l < tokens.size(); ++l) {
    ids[l] = bucket("tok=" + lowercase(tokens[l]), cfg.vocab_hash_dim);
  }
  return ids;
}

}  // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

EmissionBackbone make_log_linear(int n_labels, const LogLinearConfig& cfg) {
  if (n_labels < 1 || cfg.hash_dim < 1) throw ContractViolation("bad log-linear configuration");
  EmissionBackbone b;
  b.kind = BackboneKind::kLogLinear;
  b.log_linear = cfg;
  b.n_labels = n_labels;
  b.weights = Vector::Zero(static_cast<Eigen::Index>(cfg.hash_dim) * n_labels);
  return b;
}

EmissionBackbone make_tiny_mlp(int n_labels, const MlpConfig& cfg, Rng& rng) {
  if (n_labels < 1 || cfg.vocab_hash_dim < 1 || cfg.embed_dim < 1 || cfg.hidden_dim < 1) {
    throw ContractViolation("bad tiny-mlp configuration");
  }
  EmissionBackbone b;
  b.kind = BackboneKind::kTinyMlp;
  b.mlp = cfg;
  b.n_labels = n_labels;
  const auto off = mlp_layout(cfg, n_labels);
  b.weights = Vector::Zero(off.total);
  for (Eigen::Index i = off.emb; i < off.w1; ++i) b.weights[i] = rng.uniform(-0.1, 0.1);
  const double a1 = std::sqrt(6.0 / (cfg.embed_dim + cfg.hidden_dim));
  for (Eigen::Index i = off.w1; i < off.b1; ++i) b.weights[i] = rng.uniform(-a1, a1);
  const double a2 = std::sqrt(6.0 / (cfg.hidden_dim + n_labels));
  for (Eigen::Index i = off.w2; i < off.b2; ++i) b.weights[i] = rng.uniform(-a2, a2);
  return b;
}

Matrix emit(const EmissionBackbone& backbone, const std::vector<std::string>& tokens) {
  const int length = static_cast<int>(tokens.size());
  const int k = backbone.n_labels;
  if (length < 1) throw ContractViolation("emit: empty sentence");
  Matrix emission = Matrix::Zero(length, k);

  if (backbone.kind == BackboneKind::kLogLinear) {
    const auto ids = feature_ids(backbone.log_linear, tokens);
    Eigen::Map<const Matrix> w(backbone.weights.data(), backbone.log_linear.hash_dim, k);
    for (int l = 0; l < length; ++l) {
      for (const auto f : ids[static_cast<std::size_t>(l)]) {
        emission.row(l) += w.row(f);
      }
    }
    return emission;
  }

  const auto& cfg = backbone.mlp;
  const auto off = mlp_layout(cfg, k);
  Eigen::Map<const Matrix> emb(backbone.weights.data() + off.emb, cfg.vocab_hash_dim,
                               cfg.embed_dim);
  Eigen::Map<const Matrix> w1(backbone.weights.data() + off.w1, cfg.hidden_dim, cfg.embed_dim);
  Eigen::Map<const Vector> b1(backbone.weights.data() + off.b1, cfg.hidden_dim);
  Eigen::Map<const Matrix> w2(backbone.weights.data() + off.w2, k, cfg.hidden_dim);
  Eigen::Map<const Vector> b2(backbone.weights.data() + off.b2, k);
  const auto ids = token_buckets(cfg, tokens);
  for (int l = 0; l < length; ++l) {
    Vector avg = Vector::Zero(cfg.embed_dim);
    int count = 0;
    for (int d = -1; d <= 1; ++d) {
      const int pos = l + d;
      if (pos < 0 || pos >= length) continue;
      avg += emb.row(ids[static_cast<std::size_t>(pos)]).transpose();
      ++count;
    }
    avg /= count;
    const Vector hidden = (w1 * avg + b1).array().tanh();
    emission.row(l) = (w2 * hidden + b2).transpose();
  }
  return emission;
}

Vector emit_backward(const EmissionBackbone& backbone, const std::vector<std::string>& tokens,
                     const Matrix& d_emission) {
  Vector grad = Vector::Zero(backbone.weights.size());
  emit_backward_into(backbone, tokens, d_emission, grad);
  return grad;
}

void emit_backward_into(const EmissionBackbone& backbone, const std::vector<std::string>& tokens,
                        const Matrix& d_emission, Eigen::Ref<Vector> grad) {
  const int length = static_cast<int>(tokens.size());
  const int k = backbone.n_labels;
  if (d_emission.rows() != length || d_emission.cols() != k) {
    throw ContractViolation("emit_backward: d_emission shape mismatch");
  }
  if (grad.size() != backbone.weights.size()) {
    throw ContractViolation("emit_backward: gradient buffer size mismatch");
  }

  if (backbone.kind == BackboneKind::kLogLinear) {
    const auto ids = feature_ids(backbone.log_linear, tokens);
    Eigen::Map<Matrix> g(grad.data(), backbone.log_linear.hash_dim, k);
    for (int l = 0; l < length; ++l) {
      for (const auto f : ids[static_cast<std::size_t>(l)]) {
        g.row(f) += d_emission.row(l);
      }
    }
    return;
  }

  const auto& cfg = backbone.mlp;
  const auto off = mlp_layout(cfg, k);
  Eigen::Map<const Matrix> emb(backbone.weights.data() + off.emb, cfg.vocab_hash_dim,
                               cfg.embed_dim);
  Eigen::Map<const Matrix> w1(backbone.weights.data() + off.w1, cfg.hidden_dim, cfg.embed_dim);
  Eigen::Map<const Vector> b1(backbone.weights.data() + off.b1, cfg.hidden_dim);
  Eigen::Map<const Matrix> w2(backbone.weights.data() + off.w2, k, cfg.hidden_dim);
  Eigen::Map<Matrix> g_emb(grad.data() + off.emb, cfg.vocab_hash_dim, cfg.embed_dim);
  Eigen::Map<Matrix> g_w1(grad.data() + off.w1, cfg.hidden_dim, cfg.embed_dim);
  Eigen::Map<Vector> g_b1(grad.data() + off.b1, cfg.hidden_dim);
  Eigen::Map<Matrix> g_w2(grad.data() + off.w2, k, cfg.hidden_dim);
  Eigen::Map<Vector> g_b2(grad.data() + off.b2, k);
  const auto ids = token_buckets(cfg, tokens);
  for (int l = 0; l < length; ++l) {
    Vector avg = Vector::Zero(cfg.embed_dim);
    int count = 0;
    for (int d = -1; d <= 1; ++d) {
      const int pos = l + d;
      if (pos < 0 || pos >= length) continue;
      avg += emb.row(ids[static_cast<std::size_t>(pos)]).transpose();
      ++count;
    }
    avg /= count;
    const Vector hidden = (w1 * avg + b1).array().tanh();
    const Vector d_logit = d_emission.row(l).transpose();
    g_w2 += d_logit * hidden.transpose();
    g_b2 += d_logit;
    const Vector d_pre =
        (w2.transpose() * d_logit).array() * (1.0 - hidden.array().square());
    g_w1 += d_pre * avg.transpose();
    g_b1 += d_pre;
    const Vector d_avg = w1.transpose() * d_pre / count;
    for (int d = -1; d <= 1; ++d) {
      const int pos = l + d;
      if (pos < 0 || pos >= length) continue;
      g_emb.row(ids[static_cast<std::size_t>(pos)]) += d_avg.transpose();
    }
  }
}

const char* to_string(BackboneKind kind) {
  return kind == BackboneKind::kLogLinear ? "log-linear" : "tiny-mlp";
}

BackboneKind backbone_kind_from_string(const std::string& text) {
  if (text == "log-linear") return BackboneKind::kLogLinear;
  if (text == "tiny-mlp") return BackboneKind::kTinyMlp;
  throw FormatError("unknown backbone kind '" + text + "'");
}

}  // namespace hcrf
