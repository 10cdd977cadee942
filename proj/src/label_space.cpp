#include "hcrf/label_space.hpp"

#include <algorithm>

namespace hcrf {

namespace {

// Splits a BIO label name into (kind, type). kind is 'B', 'I' or 'O';
// anything that is not "B-*"/"I-*" counts as outside.
std::pair<char, std::string> bio_parts(const std::string& name) {
  if (name.size() >= 2 && name[1] == '-' && (name[0] == 'B' || name[0] == 'I')) {
    return {name[0], name.substr(2)};
  }
  return {'O', ""};
}

}  // namespace

LabelSpace::LabelSpace(std::vector<std::string> labels, TagScheme scheme)
    : labels_(std::move(labels)), scheme_(scheme) {
  if (labels_.size() < 2) throw FormatError("label alphabet needs at least 2 labels");
  for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
    if (labels_[i].empty()) throw FormatError("empty label name in alphabet");
    if (!index_.emplace(labels_[i], i).second) {
      throw FormatError("duplicate label name '" + labels_[i] + "'");
    }
  }
  auto it = index_.find("O");
  outside_ = it == index_.end() ? 0 : it->second;
}

const std::string& LabelSpace::name(int index) const {
  if (index < 0 || index >= size()) throw ContractViolation("label index out of range");
  return labels_[static_cast<std::size_t>(index)];
}

int LabelSpace::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw FormatError("unknown label '" + name + "'");
  return it->second;
}

int parse_label(const std::string& name, const LabelSpace& space) {
  if (name == "_") return LabelSpace::kMissingCode;
  return space.index_of(name);
}

std::vector<Span> extract_spans(const TagSeq& tags, const LabelSpace& space) {
  std::vector<Span> spans;
  std::string open_type;
  int open_start = -1;
  auto close = [&](int end) {
    if (open_start >= 0) spans.push_back({open_type, open_start, end});
    open_start = -1;
  };
  for (int l = 0; l < static_cast<int>(tags.size()); ++l) {
    const auto [kind, type] = bio_parts(space.name(tags[static_cast<std::size_t>(l)]));
    if (kind == 'O') {
      close(l);
    } else if (kind == 'B' || open_start < 0 || type != open_type) {
      close(l);
      open_type = type;
      open_start = l;
    }
    // else: I- continuing the open span of the same type
  }
  close(static_cast<int>(tags.size()));
  return spans;
}

const char* to_string(TagScheme scheme) {
  return scheme == TagScheme::kBio ? "BIO" : "free";
}

TagScheme scheme_from_string(const std::string& text) {
  if (text == "BIO") return TagScheme::kBio;
  if (text == "free") return TagScheme::kFree;
  throw FormatError("unknown tagging scheme '" + text + "' (expected BIO or free)");
}

}  // namespace hcrf
