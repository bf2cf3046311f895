#include "sentsim/encoder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include "json.hpp"
#include "sentsim/error.hpp"
#include "sentsim/rng.hpp"

namespace sentsim {
namespace {

using nlohmann::json;

constexpr const char* kCheckpointFormat = "sentsim-checkpoint";
constexpr int kCheckpointVersion = 1;

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

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

std::vector<double> mean_embedding(const std::vector<int>& ids,
                                   const EncoderParams& params) {
  if (ids.empty()) throw Error("encode: empty token list");
  const std::size_t d = params.dim;
  std::vector<double> mean(d, 0.0);
  for (int id : ids) {
    for (std::size_t c = 0; c < d; ++c) {
      mean[c] += params.embedding.at(static_cast<std::size_t>(id), c);
    }
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (double& x : mean) x *= inv;
  return mean;
}

std::vector<double> project(const std::vector<double>& mean,
                            const EncoderParams& params) {
  const std::size_t d = params.dim;
  std::vector<double> h(d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    double acc = params.proj_bias[r];
    for (std::size_t c = 0; c < d; ++c) acc += params.proj.at(r, c) * mean[c];
    h[r] = acc;
  }
  return h;
}

EncodeCache make_cache(std::vector<int> ids, const EncoderParams& params) {
  EncodeCache cache;
  cache.token_ids = std::move(ids);
  cache.mean = mean_embedding(cache.token_ids, params);
  cache.h = project(cache.mean, params);
  return cache;
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw FormatError("checkpoint matrix size mismatch");
  }
  return m;
}

}  // namespace

GradientBundle GradientBundle::zeros_like(const EncoderParams& p) {
  GradientBundle g;
  g.embedding = Matrix(p.embedding.rows, p.embedding.cols);
  g.proj = Matrix(p.proj.rows, p.proj.cols);
  g.proj_bias.assign(p.proj_bias.size(), 0.0);
  g.head_w.assign(p.head_w.size(), 0.0);
  g.head_c = 0.0;
  return g;
}

void GradientBundle::scale(double factor) {
  for (double& x : embedding.data) x *= factor;
  for (double& x : proj.data) x *= factor;
  for (double& x : proj_bias) x *= factor;
  for (double& x : head_w) x *= factor;
  head_c *= factor;
}

bool GradientBundle::all_finite() const {
  auto ok = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
  };
  return ok(embedding.data) && ok(proj.data) && ok(proj_bias) && ok(head_w) &&
         std::isfinite(head_c);
}

Vocab build_vocab(const std::vector<Sentence>& corpus, std::size_t min_freq) {
  if (corpus.empty()) throw Error("build_vocab: empty corpus");
  std::map<std::string, std::size_t> freq;
  for (const auto& s : corpus) {
    for (const auto& tok : whitespace_split(lowercase(s.text))) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [tok, n] : freq) {
    if (n >= min_freq) kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });

  Vocab v;
  v.id_to_token = {"<pad>", "<unk>", "<sep>"};
  for (const auto& [tok, n] : kept) v.id_to_token.push_back(tok);
  for (std::size_t i = 0; i < v.id_to_token.size(); ++i) {
    v.token_to_id[v.id_to_token[i]] = static_cast<int>(i);
  }
  return v;
}

std::vector<int> tokenize(const std::string& text, const Vocab& vocab) {
  std::vector<int> ids;
  for (const auto& tok : whitespace_split(lowercase(text))) {
    auto it = vocab.token_to_id.find(tok);
    ids.push_back(it != vocab.token_to_id.end() ? it->second : Vocab::kUnk);
  }
  if (ids.empty() && !text.empty()) ids.push_back(Vocab::kUnk);
  return ids;
}

EncoderParams init_params(const Vocab& vocab, std::size_t dim,
                          std::uint64_t seed) {
  if (dim < 2) throw Error("init_params: dim must be >= 2");
  Rng rng(seed);
  EncoderParams p;
  p.dim = dim;
  p.embedding = Matrix(vocab.size(), dim);
  for (double& x : p.embedding.data) x = rng.uniform(-0.1, 0.1);
  p.proj = Matrix(dim, dim);
  for (double& x : p.proj.data) x = rng.uniform(-0.1, 0.1);
  p.proj_bias.assign(dim, 0.0);
  p.head_w.assign(dim, 0.0);
  p.head_c = 0.0;
  return p;
}

Embedding encode(const std::string& text, const EncoderParams& params,
                 const Vocab& vocab) {
  return Embedding{make_cache(tokenize(text, vocab), params).h};
}

EncodeCache encode_with_cache(const std::string& text,
                              const EncoderParams& params,
                              const Vocab& vocab) {
  return make_cache(tokenize(text, vocab), params);
}

void accumulate_encode_grad(const EncodeCache& cache,
                            const std::vector<double>& dh,
                            const EncoderParams& params,
                            GradientBundle& grads) {
  const std::size_t d = params.dim;
  if (dh.size() != d) throw Error("accumulate_encode_grad: shape mismatch");
  for (std::size_t r = 0; r < d; ++r) {
    grads.proj_bias[r] += dh[r];
    for (std::size_t c = 0; c < d; ++c) {
      grads.proj.at(r, c) += dh[r] * cache.mean[c];
    }
  }
  std::vector<double> dmean(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < d; ++r) acc += params.proj.at(r, c) * dh[r];
    dmean[c] = acc;
  }
  const double inv = 1.0 / static_cast<double>(cache.token_ids.size());
  for (int id : cache.token_ids) {
    for (std::size_t c = 0; c < d; ++c) {
      grads.embedding.at(static_cast<std::size_t>(id), c) += dmean[c] * inv;
    }
  }
}

double cosine_similarity(const Embedding& u, const Embedding& v) {
  if (u.v.size() != v.v.size()) {
    throw Error("cosine_similarity: dimension mismatch");
  }
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    dot += u.v[i] * v.v[i];
    nu += u.v[i] * u.v[i];
    nv += v.v[i] * v.v[i];
  }
  if (nu == 0.0 || nv == 0.0) {
    throw Error("cosine_similarity: zero-norm embedding");
  }
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

void cosine_backward(const std::vector<double>& u,
                     const std::vector<double>& v, double g,
                     std::vector<double>& du, std::vector<double>& dv) {
  double dot = 0.0, nu2 = 0.0, nv2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu2 += u[i] * u[i];
    nv2 += v[i] * v[i];
  }
  if (nu2 == 0.0 || nv2 == 0.0) {
    throw Error("cosine_backward: zero-norm embedding");
  }
  const double nu = std::sqrt(nu2);
  const double nv = std::sqrt(nv2);
  const double inv = 1.0 / (nu * nv);
  const double c = dot * inv;
  for (std::size_t i = 0; i < u.size(); ++i) {
    du[i] += g * (v[i] * inv - c * u[i] / nu2);
    dv[i] += g * (u[i] * inv - c * v[i] / nv2);
  }
}

double cross_encode(const std::string& a, const std::string& b,
                    const EncoderParams& params, const Vocab& vocab) {
  double logit = 0.0;
  cross_encode_with_cache(a, b, params, vocab, logit);
  return logit;
}

EncodeCache cross_encode_with_cache(const std::string& a, const std::string& b,
                                    const EncoderParams& params,
                                    const Vocab& vocab, double& logit_out) {
  std::vector<int> ids = tokenize(a, vocab);
  ids.push_back(Vocab::kSep);
  const auto ids_b = tokenize(b, vocab);
  ids.insert(ids.end(), ids_b.begin(), ids_b.end());
  EncodeCache cache = make_cache(std::move(ids), params);
  double logit = params.head_c;
  for (std::size_t i = 0; i < params.dim; ++i) {
    logit += params.head_w[i] * cache.h[i];
  }
  logit_out = logit;
  return cache;
}

void accumulate_cross_grad(const EncodeCache& cache, double dlogit,
                           const EncoderParams& params,
                           GradientBundle& grads) {
  const std::size_t d = params.dim;
  grads.head_c += dlogit;
  std::vector<double> dh(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    grads.head_w[i] += dlogit * cache.h[i];
    dh[i] = dlogit * params.head_w[i];
  }
  accumulate_encode_grad(cache, dh, params, grads);
}

void save_checkpoint(const std::string& path, const Vocab& vocab,
                     const EncoderParams& params) {
  json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["vocab"] = json{{"tokens", vocab.id_to_token}};
  j["params"] = json{{"dim", params.dim},
                     {"embedding", matrix_to_json(params.embedding)},
                     {"proj", matrix_to_json(params.proj)},
                     {"proj_bias", params.proj_bias},
                     {"head_w", params.head_w},
                     {"head_c", params.head_c}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

CheckpointData load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw FormatError("unparseable checkpoint " + path + ": " + ex.what());
  }
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat) {
      throw FormatError("not a checkpoint file: " + path);
    }
    if (j.at("version").get<int>() != kCheckpointVersion) {
      throw FormatError("unsupported checkpoint version in " + path);
    }
    CheckpointData data;
    data.vocab.id_to_token =
        j.at("vocab").at("tokens").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < data.vocab.id_to_token.size(); ++i) {
      data.vocab.token_to_id[data.vocab.id_to_token[i]] = static_cast<int>(i);
    }
    const auto& p = j.at("params");
    data.params.dim = p.at("dim").get<std::size_t>();
    data.params.embedding = matrix_from_json(p.at("embedding"));
    data.params.proj = matrix_from_json(p.at("proj"));
    data.params.proj_bias = p.at("proj_bias").get<std::vector<double>>();
    data.params.head_w = p.at("head_w").get<std::vector<double>>();
    data.params.head_c = p.at("head_c").get<double>();
    return data;
  } catch (const json::exception& ex) {
    throw FormatError("malformed checkpoint " + path + ": " + ex.what());
  }
}

}  // namespace sentsim
