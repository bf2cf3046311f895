#include "sentsim/sts_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "sentsim/error.hpp"

namespace sentsim {
namespace {

bool is_constant(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [&](double x) { return x == v.front(); });
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const double mean_a =
      std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  const double mean_b =
      std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // positions i..j (0-based) share the mean 1-based rank
    const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("spearman: length mismatch");
  if (x.size() < 2) throw Error("spearman: need at least 2 observations");
  if (is_constant(x)) throw Error("spearman: first input list is constant");
  if (is_constant(y)) throw Error("spearman: second input list is constant");

  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const std::size_t n = rx.size();

  // Identical or exactly reversed rankings correlate to exactly +/-1.
  bool same = true, reversed = true;
  for (std::size_t i = 0; i < n; ++i) {
    same = same && rx[i] == ry[i];
    reversed = reversed && rx[i] + ry[i] == static_cast<double>(n) + 1.0;
  }
  if (same) return 1.0;
  if (reversed) return -1.0;

  return std::clamp(pearson(rx, ry), -1.0, 1.0);
}

double evaluate_sts(const EncoderParams& params, const Vocab& vocab,
                    const std::vector<StsExample>& dataset) {
  if (dataset.size() < 2) throw Error("evaluate_sts: need at least 2 examples");
  std::vector<double> predictions;
  std::vector<double> gold;
  predictions.reserve(dataset.size());
  gold.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    try {
      const Embedding ea = encode(dataset[i].a, params, vocab);
      const Embedding eb = encode(dataset[i].b, params, vocab);
      predictions.push_back(cosine_similarity(ea, eb));
    } catch (const Error& ex) {
      throw Error("evaluate_sts: example " + std::to_string(i) + ": " +
                  ex.what());
    }
    gold.push_back(dataset[i].gold);
  }
  return spearman(predictions, gold);
}

EvalReport evaluate_suite(
    const EncoderParams& params, const Vocab& vocab,
    const std::vector<std::pair<std::string, std::string>>& name_to_path) {
  if (name_to_path.empty()) throw Error("evaluate_suite: no datasets given");
  EvalReport report;
  double sum = 0.0;
  for (const auto& [name, path] : name_to_path) {
    try {
      const auto examples = load_sts_examples(path);
      const double rho = evaluate_sts(params, vocab, examples);
      report.datasets.push_back({name, rho, examples.size()});
      sum += rho;
    } catch (const Error& ex) {
      throw Error("dataset '" + name + "': " + ex.what());
    }
  }
  report.average = sum / static_cast<double>(report.datasets.size());
  return report;
}

std::string render_report(const EvalReport& report) {
  std::size_t name_width = 7;  // "dataset"
  for (const auto& e : report.datasets) {
    name_width = std::max(name_width, e.name.size());
  }
  std::ostringstream out;
  auto row = [&](const std::string& name, const std::string& rho,
                 const std::string& n) {
    out << name;
    out << std::string(name_width - name.size() + 2, ' ');
    out << std::string(rho.size() < 8 ? 8 - rho.size() : 0, ' ') << rho;
    out << std::string(n.size() < 10 ? 10 - n.size() : 0, ' ') << n << '\n';
  };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  row("dataset", "spearman", "examples");
  for (const auto& e : report.datasets) {
    row(e.name, fmt(e.spearman), std::to_string(e.examples));
  }
  row("average", fmt(report.average), "");
  return out.str();
}

}  // namespace sentsim
