#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hcrf/types.hpp"

namespace hcrf {

enum class TagScheme { kBio, kFree };

/// The K task labels plus two reserved codes: the BEGIN boundary state
/// (index K, usable only as a transition-source row) and the missing
/// sentinel (kMissingCode, "this source did not annotate this token").
class LabelSpace {
 public:
  static constexpr int kMissingCode = -1;

  LabelSpace(std::vector<std::string> labels, TagScheme scheme);

  int size() const { return static_cast<int>(labels_.size()); }
  int begin_index() const { return size(); }
  TagScheme scheme() const { return scheme_; }

  const std::string& name(int index) const;
  const std::vector<std::string>& labels() const { return labels_; }

  /// Index of the named label; throws FormatError for unknown names.
  int index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  /// Index of "O" when present, else 0. Fallback tag for unannotated tokens.
  int outside_index() const { return outside_; }

  bool operator==(const LabelSpace& other) const {
    return labels_ == other.labels_ && scheme_ == other.scheme_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  TagScheme scheme_;
  int outside_ = 0;
};

/// Label name -> index; the missing marker "_" maps to kMissingCode.
int parse_label(const std::string& name, const LabelSpace& space);

struct Span {
  std::string entity_type;
  int start = 0;  // inclusive token index
  int end = 0;    // exclusive

  bool operator==(const Span& other) const {
    return start == other.start && end == other.end && entity_type == other.entity_type;
  }
};

/// Decodes BIO tags into maximal spans. Lenient: an I- tag without a
/// matching open span of the same type starts a new span.
std::vector<Span> extract_spans(const TagSeq& tags, const LabelSpace& space);

const char* to_string(TagScheme scheme);
TagScheme scheme_from_string(const std::string& text);

}  // namespace hcrf
