#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sentsim/corpus.hpp"
#include "sentsim/gateway.hpp"
#include "sentsim/rng.hpp"

namespace sentsim {

inline constexpr const char* kMaskToken = "<mask>";

struct MaskedSentence {
  std::int64_t source_id = 0;
  std::vector<std::string> tokens;  // masked positions hold kMaskToken
  double mask_rate = 0.0;
  bool merged = false;
};

struct PipelineConfig {
  std::vector<double> mask_rates = {0.0, 0.1, 0.2, 0.3, 0.4,
                                    0.5, 0.6, 0.7, 0.8};
  double merge_probability = 0.5;
  std::size_t negatives_per_sentence = 2;
  std::uint64_t rng_seed = 42;
};

// Decoding defaults: diverse sampling for sentence generation, greedy short
// output for scoring.
inline constexpr double kGenerationTemperature = 0.7;
inline constexpr int kGenerationMaxTokens = 64;
inline constexpr double kScoringTemperature = 0.0;
inline constexpr int kScoringMaxTokens = 8;

// Whitespace-tokenizes and replaces round(rate * token_count) distinct
// positions (round half up) with the mask token.
MaskedSentence mask_sentence(const Sentence& s, double rate, Rng& rng);

// Collapses every run of adjacent mask tokens to a single one.
MaskedSentence merge_adjacent_masks(MaskedSentence m);

// Tokens joined by single spaces.
std::string masked_text(const MaskedSentence& m);

// Mask-fill template for rate > 0, paraphrase template for rate 0.
std::string render_generation_prompt(const MaskedSentence& m,
                                     const Sentence& original);
std::string render_scoring_prompt(const std::string& a, const std::string& b);

// Trims whitespace and one pair of matching surrounding quotes.
std::string clean_completion(const std::string& text);

// Step one of the pipeline: mask (with per-sentence merge coin), prompt the
// model, pair each completion with its original. All randomness is drawn in
// a pre-pass before the first completion call. Empty completions are dropped
// with a warning.
std::vector<PairDraft> generate_pairs(const std::vector<Sentence>& sentences,
                                      const PipelineConfig& config,
                                      CompletionClient& client, Rng& rng);

// Step two: score each pair via the model. Unparseable scores drop the pair
// with a warning. Provenance is recorded as generated.
std::vector<ScoredPair> label_scores(const std::vector<PairDraft>& drafts,
                                     CompletionClient& client);

// k distinct random partners per sentence, score pinned to 0.
std::vector<ScoredPair> sample_zero_negatives(
    const std::vector<Sentence>& sentences, std::size_t k, Rng& rng);

struct NliPairs {
  std::vector<std::pair<std::string, std::string>> positives;
  std::vector<std::pair<std::string, std::string>> hard_negatives;
};

// positives[i] = (premise, entailment), hard_negatives[i] = (premise,
// contradiction); index-aligned with the input.
NliPairs build_nli_pairs(const std::vector<NliTriplet>& triplets);

// Scores premise-entailment pairs, provenance nli-positive.
std::vector<ScoredPair> label_nli_positives(
    const std::vector<std::pair<std::string, std::string>>& positives,
    CompletionClient& client);

}  // namespace sentsim
