#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sentsim/corpus.hpp"

namespace sentsim {

// Dense row-major matrix, just enough linear algebra for this encoder.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool operator==(const Matrix&) const = default;
};

struct Vocab {
  std::vector<std::string> id_to_token;
  std::unordered_map<std::string, int> token_to_id;

  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kSep = 2;

  std::size_t size() const { return id_to_token.size(); }
};

struct EncoderParams {
  Matrix embedding;               // vocab size x d
  Matrix proj;                    // d x d
  std::vector<double> proj_bias;  // d
  std::vector<double> head_w;     // d, cross-encoder scalar head
  double head_c = 0.0;
  std::size_t dim = 0;

  bool operator==(const EncoderParams&) const = default;
};

struct Embedding {
  std::vector<double> v;
};

// Per-parameter gradient accumulator, shape-congruent with EncoderParams.
struct GradientBundle {
  Matrix embedding;
  Matrix proj;
  std::vector<double> proj_bias;
  std::vector<double> head_w;
  double head_c = 0.0;

  static GradientBundle zeros_like(const EncoderParams& p);
  void scale(double factor);
  bool all_finite() const;
};

// Cached activations of one forward pass, consumed by the backward pass.
struct EncodeCache {
  std::vector<int> token_ids;
  std::vector<double> mean;  // mean token embedding, length d
  std::vector<double> h;     // projected embedding, length d
};

// Lowercased whitespace tokens with frequency >= min_freq, ids assigned in
// descending-frequency order (ties lexicographic) after the special ids.
Vocab build_vocab(const std::vector<Sentence>& corpus, std::size_t min_freq);

std::vector<int> tokenize(const std::string& text, const Vocab& vocab);

// Seeded init: embedding and projection uniform(-0.1, 0.1), rest zero.
EncoderParams init_params(const Vocab& vocab, std::size_t dim,
                          std::uint64_t seed);

// h = proj * mean(embedding rows of tokens) + proj_bias
Embedding encode(const std::string& text, const EncoderParams& params,
                 const Vocab& vocab);
EncodeCache encode_with_cache(const std::string& text,
                              const EncoderParams& params, const Vocab& vocab);
// Accumulates d(loss)/d(params) given d(loss)/dh into `grads`.
void accumulate_encode_grad(const EncodeCache& cache,
                            const std::vector<double>& dh,
                            const EncoderParams& params, GradientBundle& grads);

double cosine_similarity(const Embedding& u, const Embedding& v);
// Adds g * d(cos(u,v))/du into du and likewise for dv.
void cosine_backward(const std::vector<double>& u, const std::vector<double>& v,
                     double g, std::vector<double>& du,
                     std::vector<double>& dv);

// Mean-pools tokens(a) ++ [SEP] ++ tokens(b), then logit = head_w . h + head_c.
double cross_encode(const std::string& a, const std::string& b,
                    const EncoderParams& params, const Vocab& vocab);
EncodeCache cross_encode_with_cache(const std::string& a, const std::string& b,
                                    const EncoderParams& params,
                                    const Vocab& vocab, double& logit_out);
void accumulate_cross_grad(const EncodeCache& cache, double dlogit,
                           const EncoderParams& params, GradientBundle& grads);

// Versioned structured-text checkpoint; load(save(p)) is bit-exact.
void save_checkpoint(const std::string& path, const Vocab& vocab,
                     const EncoderParams& params);
struct CheckpointData {
  Vocab vocab;
  EncoderParams params;
};
CheckpointData load_checkpoint(const std::string& path);

}  // namespace sentsim
