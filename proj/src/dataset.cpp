#include "hcrf/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hcrf {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> header_fields(const std::vector<std::string>& lines,
                                       std::size_t index, const std::string& key) {
  if (index >= lines.size()) fail(index + 1, "missing header line '" + key + "'");
  auto fields = split_tabs(lines[index]);
  if (fields.empty() || fields[0] != key) fail(index + 1, "expected header '" + key + "'");
  fields.erase(fields.begin());
  if (!fields.empty() && fields.back().empty()) fields.pop_back();
  return fields;
}

}  // namespace

bool WeakDataset::has_gold() const {
  for (const auto& s : sentences) {
    if (!s.gold) return false;
  }
  return !sentences.empty();
}

void finalize_sentence(Sentence& sentence) {
  sentence.annotated_sources.clear();
  for (int j = 0; j < sentence.weak.cols(); ++j) {
    for (int l = 0; l < sentence.weak.rows(); ++l) {
      if (sentence.weak(l, j) != LabelSpace::kMissingCode) {
        sentence.annotated_sources.push_back(j);
        break;
      }
    }
  }
}

WeakDataset read_wsconll(const std::string& path) {
  auto lines = read_lines(path);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  const auto labels = header_fields(lines, 0, "#labels:");
  const auto sources = header_fields(lines, 1, "#sources:");
  const auto scheme_fields = header_fields(lines, 2, "#scheme:");
  if (scheme_fields.size() != 1) fail(3, "scheme header takes exactly one value");

  LabelSpace space(labels, scheme_from_string(scheme_fields[0]));
  const int n_sources = static_cast<int>(sources.size());

  WeakDataset dataset{space, sources, {}};

  struct Row {
    std::string token;
    int gold;  // kMissingCode encodes '?'
    std::vector<int> weak;
  };
  std::vector<Row> rows;
  std::size_t sentence_first_line = 0;

  auto flush_sentence = [&]() {
    if (rows.empty()) return;
    Sentence s;
    const int length = static_cast<int>(rows.size());
    s.weak.resize(length, n_sources);
    int n_unknown_gold = 0;
    TagSeq gold;
    for (int l = 0; l < length; ++l) {
      s.tokens.push_back(rows[static_cast<std::size_t>(l)].token);
      const int g = rows[static_cast<std::size_t>(l)].gold;
      if (g == LabelSpace::kMissingCode) {
        ++n_unknown_gold;
      } else {
        gold.push_back(g);
      }
      for (int j = 0; j < n_sources; ++j) {
        s.weak(l, j) = rows[static_cast<std::size_t>(l)].weak[static_cast<std::size_t>(j)];
      }
    }
    if (n_unknown_gold != 0 && n_unknown_gold != length) {
      fail(sentence_first_line, "sentence mixes '?' and gold labels");
    }
    if (n_unknown_gold == 0) s.gold = std::move(gold);
    finalize_sentence(s);
    dataset.sentences.push_back(std::move(s));
    rows.clear();
  };

  for (std::size_t i = 3; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) {
      if (rows.empty()) fail(line_no, "consecutive blank lines");
      flush_sentence();
      continue;
    }
    const auto fields = split_tabs(lines[i]);
    if (static_cast<int>(fields.size()) != 2 + n_sources) {
      fail(line_no, "expected " + std::to_string(2 + n_sources) + " tab-separated columns, got " +
                        std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail(line_no, "empty token");
    Row row;
    row.token = fields[0];
    try {
      if (fields[1] == "?") {
        row.gold = LabelSpace::kMissingCode;
      } else {
        row.gold = space.index_of(fields[1]);
      }
      for (int j = 0; j < n_sources; ++j) {
        row.weak.push_back(parse_label(fields[static_cast<std::size_t>(2 + j)], space));
      }
    } catch (const FormatError& e) {
      fail(line_no, e.what());
    }
    if (rows.empty()) sentence_first_line = line_no;
    rows.push_back(std::move(row));
  }
  flush_sentence();
  return dataset;
}

void write_wsconll(const WeakDataset& dataset, const std::string& path) {
  std::ostringstream out;
  out << "#labels:";
  for (const auto& l : dataset.space.labels()) out << '\t' << l;
  out << "\n#sources:";
  for (const auto& s : dataset.source_names) out << '\t' << s;
  out << "\n#scheme:\t" << to_string(dataset.space.scheme()) << '\n';
  for (std::size_t i = 0; i < dataset.sentences.size(); ++i) {
    if (i > 0) out << '\n';
    const auto& s = dataset.sentences[i];
    for (int l = 0; l < s.length(); ++l) {
      out << s.tokens[static_cast<std::size_t>(l)] << '\t';
      if (s.gold) {
        out << dataset.space.name((*s.gold)[static_cast<std::size_t>(l)]);
      } else {
        out << '?';
      }
      for (int j = 0; j < s.weak.cols(); ++j) {
        const int y = s.weak(l, j);
        out << '\t' << (y == LabelSpace::kMissingCode ? "_" : dataset.space.name(y));
      }
      out << '\n';
    }
  }
  atomic_write_file(path, out.str());
}

void write_predictions(const std::string& path,
                       const std::vector<std::vector<std::string>>& tokens,
                       const std::vector<TagSeq>& tags, const LabelSpace& space) {
  if (tokens.size() != tags.size()) {
    throw ContractViolation("write_predictions: sentence count mismatch");
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].size() != tags[i].size()) {
      throw ContractViolation("write_predictions: token/tag length mismatch");
    }
    if (i > 0) out << '\n';
    for (std::size_t l = 0; l < tokens[i].size(); ++l) {
      out << tokens[i][l] << '\t' << space.name(tags[i][l]) << '\n';
    }
  }
  atomic_write_file(path, out.str());
}

std::vector<TagSeq> read_predictions(const std::string& path, const LabelSpace& space,
                                     std::vector<std::vector<std::string>>* tokens) {
  auto lines = read_lines(path);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::vector<TagSeq> tags;
  TagSeq current;
  std::vector<std::string> current_tokens;
  auto flush = [&]() {
    if (current.empty()) return;
    tags.push_back(std::move(current));
    if (tokens) tokens->push_back(std::move(current_tokens));
    current.clear();
    current_tokens.clear();
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      if (current.empty()) fail(i + 1, "consecutive blank lines");
      flush();
      continue;
    }
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 2) fail(i + 1, "expected 2 tab-separated columns");
    try {
      current.push_back(space.index_of(fields[1]));
    } catch (const FormatError& e) {
      fail(i + 1, e.what());
    }
    current_tokens.push_back(fields[0]);
  }
  flush();
  return tags;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp + "' for writing");
    out << content;
    if (!out) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to '" + path + "' failed: " + ec.message());
}

}  // namespace hcrf
