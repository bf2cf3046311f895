#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sentsim/corpus.hpp"
#include "sentsim/encoder.hpp"
#include "sentsim/rng.hpp"

namespace sentsim {

enum class LossKind { kMse, kInfonce, kSoftInfonce, kBce };

const char* to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& s);

struct TrainConfig {
  std::size_t epochs = 3;
  std::size_t batch_size = 32;
  // Default suits the randomly initialized desk-scale encoder; 2e-5 is the
  // conventional fine-tuning preset and remains a valid setting.
  double learning_rate = 1e-2;
  std::size_t eval_interval = 125;
  LossKind loss_kind = LossKind::kMse;
  double tau = 0.05;
  std::uint64_t rng_seed = 42;
};

struct AdamState {
  GradientBundle m;
  GradientBundle v;
  std::size_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_params(const EncoderParams& params);
};

struct TrainCheckpoint {
  EncoderParams params;
  double dev_spearman = 0.0;
  std::size_t step = 0;
};

// One x / x+ / x- row with the soft label of the positive pair.
struct TripletExample {
  std::string x;
  std::string pos;
  std::string neg;
  double y = 1.0;
};

// Zips the dataset's nli-positive and nli-hard-negative blocks (in file
// order) into aligned triplets; both blocks must have equal length and
// matching premises.
std::vector<TripletExample> pair_dataset_to_triplets(
    const std::vector<ScoredPair>& dataset);

// Bias-corrected Adam update, applied elementwise; increments the step
// counter. Throws on shape mismatch or non-finite gradients.
void adam_step(EncoderParams& params, const GradientBundle& grads,
               AdamState& state, double learning_rate);

// Batch loss for mse (bi-encoder cosine) or bce (cross-encoder logits).
// When grads is non-null, parameter gradients are accumulated into it.
double pair_batch_step(LossKind kind, const std::vector<const ScoredPair*>& batch,
                       const EncoderParams& params, const Vocab& vocab,
                       GradientBundle* grads);

// Batch loss for infonce / soft-infonce over aligned triplets.
double triplet_batch_step(LossKind kind, double tau,
                          const std::vector<const TripletExample*>& batch,
                          const EncoderParams& params, const Vocab& vocab,
                          GradientBundle* grads);

// Full training loop: per-epoch seeded shuffle, fixed-size batches (last
// partial batch kept), Adam updates, dev-set Spearman every eval_interval
// steps and at the end. Returns the best-metric snapshot. The optional log
// stream receives one line per step and per evaluation.
TrainCheckpoint train(const TrainConfig& config,
                      const std::vector<ScoredPair>& dataset,
                      const std::vector<StsExample>& dev_set,
                      const Vocab& vocab, EncoderParams params,
                      std::ostream* log = nullptr);

// Builds a random small instance for the given loss and compares analytic
// parameter gradients against central finite differences (step 1e-5) over
// every parameter. Returns the maximum relative error.
double grad_check(LossKind kind, Rng& rng);

}  // namespace sentsim
