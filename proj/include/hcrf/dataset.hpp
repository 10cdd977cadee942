#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcrf/label_space.hpp"
#include "hcrf/types.hpp"

namespace hcrf {

/// One tokenized sentence with optional gold tags and the L x J grid of
/// weak labels (LabelSpace::kMissingCode where a source abstained).
struct Sentence {
  std::vector<std::string> tokens;
  std::optional<TagSeq> gold;
  IntMatrix weak;
  std::vector<int> annotated_sources;  // sorted j with >=1 observed token

  int length() const { return static_cast<int>(tokens.size()); }

  bool operator==(const Sentence& other) const {
    return tokens == other.tokens && gold == other.gold && weak == other.weak;
  }
};

struct WeakDataset {
  LabelSpace space;
  std::vector<std::string> source_names;
  std::vector<Sentence> sentences;

  int n_sources() const { return static_cast<int>(source_names.size()); }
  int n_sentences() const { return static_cast<int>(sentences.size()); }
  bool has_gold() const;

  bool operator==(const WeakDataset& other) const {
    return space == other.space && source_names == other.source_names &&
           sentences == other.sentences;
  }
};

/// Recomputes annotated_sources from the weak grid.
void finalize_sentence(Sentence& sentence);

/// Parses the .wsconll multi-annotator format:
///   #labels:<TAB>L1<TAB>L2...
///   #sources:<TAB>S1<TAB>S2...
///   #scheme:<TAB>BIO|free
/// then one token per line, `token<TAB>gold-or-?<TAB>y1...<TAB>yJ`,
/// sentences separated by exactly one blank line. LF and CRLF accepted.
WeakDataset read_wsconll(const std::string& path);

void write_wsconll(const WeakDataset& dataset, const std::string& path);

/// Two-column token/tag file, blank line between sentences.
void write_predictions(const std::string& path,
                       const std::vector<std::vector<std::string>>& tokens,
                       const std::vector<TagSeq>& tags, const LabelSpace& space);

std::vector<TagSeq> read_predictions(const std::string& path, const LabelSpace& space,
                                     std::vector<std::vector<std::string>>* tokens = nullptr);

/// Writes content to path via a temp file and rename.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace hcrf
