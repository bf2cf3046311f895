#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sentsim/corpus.hpp"
#include "sentsim/encoder.hpp"

namespace sentsim {

struct EvalReport {
  struct Entry {
    std::string name;
    double spearman = 0.0;
    std::size_t examples = 0;
  };
  std::vector<Entry> datasets;  // in evaluation order
  double average = 0.0;         // unweighted mean over datasets
};

// Ranks with average-tie handling, then Pearson correlation of the ranks.
// Throws on length mismatch, length < 2, or a constant input list.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Midrank vector of v (ties share the mean of their positions, 1-based).
std::vector<double> average_ranks(const std::vector<double>& v);

// Spearman between cosine similarities of the encoded pairs and gold scores.
double evaluate_sts(const EncoderParams& params, const Vocab& vocab,
                    const std::vector<StsExample>& dataset);

// One STS file per named dataset; any failure aborts naming the dataset.
EvalReport evaluate_suite(
    const EncoderParams& params, const Vocab& vocab,
    const std::vector<std::pair<std::string, std::string>>& name_to_path);

// Aligned plain-text table, byte-stable for fixed inputs.
std::string render_report(const EvalReport& report);

}  // namespace sentsim
