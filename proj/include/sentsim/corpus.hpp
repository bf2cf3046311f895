#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sentsim {

struct Sentence {
  std::int64_t id = 0;
  std::string text;
};

enum class Provenance {
  kGenerated,
  kRandomNegative,
  kNliPositive,
  kNliHardNegative,
};

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

// One unit of training data: a sentence pair with its similarity score.
struct ScoredPair {
  std::string a;
  std::string b;
  double score = 0.0;
  Provenance provenance = Provenance::kGenerated;
  std::optional<double> mask_rate;

  bool operator==(const ScoredPair&) const = default;

  // Throws FormatError when an invariant is violated. `where` names the
  // offending record in the message.
  void validate(const std::string& where = "") const;
};

// Generated-but-not-yet-scored pair, the hand-off between the generation
// and labeling steps.
struct PairDraft {
  std::string a;
  std::string b;
  double mask_rate = 0.0;

  bool operator==(const PairDraft&) const = default;
};

struct NliTriplet {
  std::string premise;
  std::string entailment;
  std::string contradiction;
};

struct StsExample {
  std::string a;
  std::string b;
  double gold = 0.0;  // native scale of the source data, e.g. 0-5
};

struct ScoreHistogram {
  std::vector<double> bin_edges;  // ascending, first 0.0, last 1.0
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

enum class SentenceFileFormat { kPlainLines, kTsvColumn };

// Reads one Sentence per nonempty line (or per cell of `column` in TSV mode).
// Ids are assigned 0..n-1 in file order; blank lines are skipped.
std::vector<Sentence> load_sentences(const std::string& path,
                                     SentenceFileFormat format,
                                     std::size_t column = 0);

// Line-delimited records with fields a, b, score, provenance, mask_rate.
void write_scored_pairs(const std::string& path,
                        const std::vector<ScoredPair>& pairs);
std::vector<ScoredPair> read_scored_pairs(const std::string& path);

// Line-delimited records with fields a, b, mask_rate.
void write_pair_drafts(const std::string& path,
                       const std::vector<PairDraft>& drafts);
std::vector<PairDraft> read_pair_drafts(const std::string& path);

// Tab-separated: premise, entailment, contradiction.
std::vector<NliTriplet> load_nli_triplets(const std::string& path);

// Tab-separated: gold, a, b.
std::vector<StsExample> load_sts_examples(const std::string& path);

// counts[k] = number of scores in [edge_k, edge_{k+1}), last bin closed.
ScoreHistogram score_histogram(const std::vector<ScoredPair>& pairs,
                               std::size_t bins);

}  // namespace sentsim
