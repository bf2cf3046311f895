#include "sentsim/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sentsim/error.hpp"

namespace sentsim {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cells;
}

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::string locus(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

// Strips a trailing '\r' so CRLF files load like LF files.
bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::kGenerated: return "generated";
    case Provenance::kRandomNegative: return "random-negative";
    case Provenance::kNliPositive: return "nli-positive";
    case Provenance::kNliHardNegative: return "nli-hard-negative";
  }
  throw Error("unknown provenance value");
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "generated") return Provenance::kGenerated;
  if (s == "random-negative") return Provenance::kRandomNegative;
  if (s == "nli-positive") return Provenance::kNliPositive;
  if (s == "nli-hard-negative") return Provenance::kNliHardNegative;
  throw FormatError("unknown provenance: '" + s + "'");
}

void ScoredPair::validate(const std::string& where) const {
  const std::string at = where.empty() ? "" : " at " + where;
  if (!std::isfinite(score) || score < 0.0 || score > 1.0) {
    throw FormatError("score outside [0,1]" + at + ": " +
                      std::to_string(score));
  }
  if (provenance == Provenance::kRandomNegative && score != 0.0) {
    throw FormatError("random-negative pair with nonzero score" + at);
  }
  if (provenance == Provenance::kGenerated && !mask_rate.has_value()) {
    throw FormatError("generated pair without mask_rate" + at);
  }
  if (mask_rate && (*mask_rate < 0.0 || *mask_rate > 1.0)) {
    throw FormatError("mask_rate outside [0,1]" + at);
  }
}

std::vector<Sentence> load_sentences(const std::string& path,
                                     SentenceFileFormat format,
                                     std::size_t column) {
  auto in = open_for_read(path);
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    std::string text;
    if (format == SentenceFileFormat::kPlainLines) {
      text = line;
    } else {
      if (trim(line).empty()) continue;
      const auto cells = split_tabs(line);
      if (column >= cells.size()) {
        throw FormatError("malformed TSV row at " + locus(path, line_no) +
                          ": wanted column " + std::to_string(column) +
                          " but row has " + std::to_string(cells.size()) +
                          " cells");
      }
      text = cells[column];
    }
    if (trim(text).empty()) continue;
    out.push_back({static_cast<std::int64_t>(out.size()), text});
  }
  return out;
}

void write_scored_pairs(const std::string& path,
                        const std::vector<ScoredPair>& pairs) {
  auto out = open_for_write(path);
  for (const auto& p : pairs) {
    p.validate();
    json rec;
    rec["a"] = p.a;
    rec["b"] = p.b;
    rec["score"] = p.score;
    rec["provenance"] = to_string(p.provenance);
    if (p.mask_rate) rec["mask_rate"] = *p.mask_rate;
    out << rec.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<ScoredPair> read_scored_pairs(const std::string& path) {
  auto in = open_for_read(path);
  std::vector<ScoredPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& ex) {
      throw FormatError("malformed record at " + locus(path, line_no) + ": " +
                        ex.what());
    }
    ScoredPair p;
    try {
      p.a = rec.at("a").get<std::string>();
      p.b = rec.at("b").get<std::string>();
      p.score = rec.at("score").get<double>();
      p.provenance =
          provenance_from_string(rec.at("provenance").get<std::string>());
      if (rec.contains("mask_rate")) {
        p.mask_rate = rec.at("mask_rate").get<double>();
      }
    } catch (const json::exception& ex) {
      throw FormatError("missing or mistyped field at " +
                        locus(path, line_no) + ": " + ex.what());
    }
    p.validate(locus(path, line_no));
    out.push_back(std::move(p));
  }
  return out;
}

void write_pair_drafts(const std::string& path,
                       const std::vector<PairDraft>& drafts) {
  auto out = open_for_write(path);
  for (const auto& d : drafts) {
    json rec;
    rec["a"] = d.a;
    rec["b"] = d.b;
    rec["mask_rate"] = d.mask_rate;
    out << rec.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<PairDraft> read_pair_drafts(const std::string& path) {
  auto in = open_for_read(path);
  std::vector<PairDraft> out;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json rec = json::parse(line);
      out.push_back({rec.at("a").get<std::string>(),
                     rec.at("b").get<std::string>(),
                     rec.at("mask_rate").get<double>()});
    } catch (const json::exception& ex) {
      throw FormatError("malformed pair record at " + locus(path, line_no) +
                        ": " + ex.what());
    }
  }
  return out;
}

std::vector<NliTriplet> load_nli_triplets(const std::string& path) {
  auto in = open_for_read(path);
  std::vector<NliTriplet> out;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != 3) {
      throw FormatError("malformed triplet row at " + locus(path, line_no) +
                        ": expected 3 tab-separated columns, got " +
                        std::to_string(cells.size()));
    }
    if (trim(cells[0]).empty() || trim(cells[1]).empty() ||
        trim(cells[2]).empty()) {
      throw FormatError("empty field in triplet at " + locus(path, line_no));
    }
    out.push_back({cells[0], cells[1], cells[2]});
  }
  return out;
}

std::vector<StsExample> load_sts_examples(const std::string& path) {
  auto in = open_for_read(path);
  std::vector<StsExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_tabs(line);
    if (cells.size() != 3) {
      throw FormatError("malformed STS row at " + locus(path, line_no) +
                        ": expected gold<TAB>a<TAB>b");
    }
    double gold = 0.0;
    try {
      std::size_t pos = 0;
      gold = std::stod(cells[0], &pos);
      if (pos != cells[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw FormatError("unparseable gold score at " + locus(path, line_no) +
                        ": '" + cells[0] + "'");
    }
    if (!std::isfinite(gold)) {
      throw FormatError("non-finite gold score at " + locus(path, line_no));
    }
    out.push_back({cells[1], cells[2], gold});
  }
  return out;
}

ScoreHistogram score_histogram(const std::vector<ScoredPair>& pairs,
                               std::size_t bins) {
  if (bins == 0) throw Error("score_histogram: bins must be >= 1");
  ScoreHistogram h;
  h.bin_edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    h.bin_edges[k] = static_cast<double>(k) / static_cast<double>(bins);
  }
  h.bin_edges.front() = 0.0;
  h.bin_edges.back() = 1.0;
  h.counts.assign(bins, 0);
  for (const auto& p : pairs) {
    p.validate();
    auto it = std::upper_bound(h.bin_edges.begin(), h.bin_edges.end(), p.score);
    std::size_t idx = static_cast<std::size_t>(it - h.bin_edges.begin());
    idx = idx == 0 ? 0 : idx - 1;           // score == 0.0 lands in bin 0
    if (idx >= bins) idx = bins - 1;        // last bin closed on the right
    ++h.counts[idx];
  }
  h.total = pairs.size();
  return h;
}

}  // namespace sentsim
