#include "sentsim/generation.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "sentsim/error.hpp"
#include "sentsim/prompts.hpp"

namespace sentsim {
namespace {

std::vector<std::string> whitespace_split(const std::string& s) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

bool is_mask(const std::string& tok) { return tok == kMaskToken; }

}  // namespace

MaskedSentence mask_sentence(const Sentence& s, double rate, Rng& rng) {
  if (rate < 0.0 || rate > 1.0) {
    throw Error("mask_sentence: rate outside [0,1]");
  }
  MaskedSentence m;
  m.source_id = s.id;
  m.tokens = whitespace_split(s.text);
  m.mask_rate = rate;
  if (m.tokens.empty()) {
    throw Error("mask_sentence: empty sentence (id " + std::to_string(s.id) +
                ")");
  }
  const auto count = static_cast<std::size_t>(
      std::floor(rate * static_cast<double>(m.tokens.size()) + 0.5));
  for (std::size_t pos : rng.sample_indices(m.tokens.size(), count)) {
    m.tokens[pos] = kMaskToken;
  }
  return m;
}

MaskedSentence merge_adjacent_masks(MaskedSentence m) {
  std::vector<std::string> out;
  out.reserve(m.tokens.size());
  for (auto& tok : m.tokens) {
    if (is_mask(tok) && !out.empty() && is_mask(out.back())) continue;
    out.push_back(std::move(tok));
  }
  m.tokens = std::move(out);
  m.merged = true;
  return m;
}

std::string masked_text(const MaskedSentence& m) {
  std::string out;
  for (std::size_t i = 0; i < m.tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += m.tokens[i];
  }
  return out;
}

std::string render_generation_prompt(const MaskedSentence& m,
                                     const Sentence& original) {
  if (m.source_id != original.id) {
    throw Error("render_generation_prompt: masked sentence does not belong to "
                "the given original");
  }
  if (m.mask_rate > 0.0) {
    return fill_slot(prompts::kMaskFill, "<masked-sentence>", masked_text(m));
  }
  return fill_slot(prompts::kParaphrase, "<sentence1>", original.text);
}

std::string render_scoring_prompt(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) {
    throw Error("render_scoring_prompt: empty sentence");
  }
  std::string out = fill_slot(prompts::kScore, "<sentence1>", a);
  return fill_slot(out, "<sentence2>", b);
}

std::string clean_completion(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  auto strip_space = [&] {
    while (begin < end &&
           std::isspace(static_cast<unsigned char>(text[begin]))) {
      ++begin;
    }
    while (end > begin &&
           std::isspace(static_cast<unsigned char>(text[end - 1]))) {
      --end;
    }
  };
  strip_space();
  if (end - begin >= 2 && (text[begin] == '\'' || text[begin] == '"') &&
      text[end - 1] == text[begin]) {
    ++begin;
    --end;
    strip_space();
  }
  return text.substr(begin, end - begin);
}

std::vector<PairDraft> generate_pairs(const std::vector<Sentence>& sentences,
                                      const PipelineConfig& config,
                                      CompletionClient& client, Rng& rng) {
  struct Slot {
    const Sentence* sentence;
    MaskedSentence masked;
  };

  // Deterministic pre-pass: all mask positions and merge coins are drawn
  // before any completion call, in (sentence, rate) order.
  std::vector<Slot> slots;
  slots.reserve(sentences.size() * config.mask_rates.size());
  for (const auto& sentence : sentences) {
    for (double rate : config.mask_rates) {
      MaskedSentence masked = mask_sentence(sentence, rate, rng);
      if (rng.bernoulli(config.merge_probability)) {
        masked = merge_adjacent_masks(std::move(masked));
      }
      slots.push_back({&sentence, std::move(masked)});
    }
  }

  std::vector<PairDraft> drafts;
  drafts.reserve(slots.size());
  for (const auto& slot : slots) {
    CompletionRequest request;
    request.prompt = render_generation_prompt(slot.masked, *slot.sentence);
    request.max_tokens = kGenerationMaxTokens;
    request.temperature = kGenerationTemperature;
    request.stop = {"\n"};
    CompletionResponse response;
    try {
      response = client.complete(request);
    } catch (const Error& ex) {
      throw GatewayError(
          "generation failed for sentence " +
          std::to_string(slot.sentence->id) + " at mask rate " +
          std::to_string(slot.masked.mask_rate) + ": " + ex.what());
    }
    const std::string generated = clean_completion(response.text);
    if (generated.empty()) {
      std::fprintf(stderr,
                   "warning: empty completion for sentence %lld at mask rate "
                   "%.2f, pair dropped\n",
                   static_cast<long long>(slot.sentence->id),
                   slot.masked.mask_rate);
      continue;
    }
    drafts.push_back({slot.sentence->text, generated, slot.masked.mask_rate});
  }
  return drafts;
}

namespace {

std::vector<ScoredPair> score_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    CompletionClient& client, Provenance provenance,
    const std::vector<double>* mask_rates) {
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CompletionRequest request;
    request.prompt = render_scoring_prompt(pairs[i].first, pairs[i].second);
    request.max_tokens = kScoringMaxTokens;
    request.temperature = kScoringTemperature;
    CompletionResponse response;
    try {
      response = client.complete(request);
    } catch (const Error& ex) {
      throw GatewayError("scoring failed for pair " + std::to_string(i) +
                         ": " + ex.what());
    }
    double score = 0.0;
    try {
      score = parse_similarity_score(response.text);
    } catch (const ScoreParseError& ex) {
      std::fprintf(stderr, "warning: pair %zu dropped: %s\n", i, ex.what());
      continue;
    }
    ScoredPair pair;
    pair.a = pairs[i].first;
    pair.b = pairs[i].second;
    pair.score = score;
    pair.provenance = provenance;
    if (mask_rates != nullptr) pair.mask_rate = (*mask_rates)[i];
    pair.validate("pair " + std::to_string(i));
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace

std::vector<ScoredPair> label_scores(const std::vector<PairDraft>& drafts,
                                     CompletionClient& client) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<double> rates;
  pairs.reserve(drafts.size());
  rates.reserve(drafts.size());
  for (const auto& d : drafts) {
    pairs.emplace_back(d.a, d.b);
    rates.push_back(d.mask_rate);
  }
  return score_pairs(pairs, client, Provenance::kGenerated, &rates);
}

std::vector<ScoredPair> sample_zero_negatives(
    const std::vector<Sentence>& sentences, std::size_t k, Rng& rng) {
  if (sentences.size() < k + 1) {
    throw Error("sample_zero_negatives: corpus of " +
                std::to_string(sentences.size()) +
                " sentences is too small for " + std::to_string(k) +
                " negatives per sentence");
  }
  std::vector<ScoredPair> out;
  out.reserve(sentences.size() * k);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (std::size_t pick : rng.sample_indices(sentences.size() - 1, k)) {
      const std::size_t partner = pick < i ? pick : pick + 1;  // skip self
      ScoredPair pair;
      pair.a = sentences[i].text;
      pair.b = sentences[partner].text;
      pair.score = 0.0;
      pair.provenance = Provenance::kRandomNegative;
      out.push_back(std::move(pair));
    }
  }
  return out;
}

NliPairs build_nli_pairs(const std::vector<NliTriplet>& triplets) {
  NliPairs out;
  out.positives.reserve(triplets.size());
  out.hard_negatives.reserve(triplets.size());
  for (const auto& t : triplets) {
    out.positives.emplace_back(t.premise, t.entailment);
    out.hard_negatives.emplace_back(t.premise, t.contradiction);
  }
  return out;
}

std::vector<ScoredPair> label_nli_positives(
    const std::vector<std::pair<std::string, std::string>>& positives,
    CompletionClient& client) {
  return score_pairs(positives, client, Provenance::kNliPositive, nullptr);
}

}  // namespace sentsim
