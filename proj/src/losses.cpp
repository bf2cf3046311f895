#include "sentsim/losses.hpp"

#include <algorithm>
#include <cmath>

#include "sentsim/encoder.hpp"
#include "sentsim/error.hpp"

namespace sentsim {
namespace {

void check_aligned(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw Error(std::string("loss batch misaligned: ") + what);
}

double cosine(const Vec& u, const Vec& v) {
  return cosine_similarity(Embedding{u}, Embedding{v});
}

std::vector<Vec> zeros_like(const std::vector<Vec>& rows) {
  std::vector<Vec> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i].assign(rows[i].size(), 0.0);
  return out;
}

TripletLossResult soft_infonce_impl(const TripletBatch& batch,
                                    const std::vector<double>& y) {
  const std::size_t n = batch.h.size();
  check_aligned(n, batch.h_pos.size(), "h vs h_pos");
  check_aligned(n, batch.h_neg.size(), "h vs h_neg");
  check_aligned(n, y.size(), "h vs y");
  if (n == 0) throw Error("soft_infonce: empty batch");
  if (!(batch.tau > 0.0)) throw Error("soft_infonce: tau must be positive");
  const double inv_tau = 1.0 / batch.tau;
  const double inv_n = 1.0 / static_cast<double>(n);

  // Similarity rows: s_pos[i][j] = cos(h_i, h_j+), s_neg[i][j] = cos(h_i, h_j-).
  std::vector<std::vector<double>> s_pos(n, std::vector<double>(n));
  std::vector<std::vector<double>> s_neg(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s_pos[i][j] = cosine(batch.h[i], batch.h_pos[j]);
      s_neg[i][j] = cosine(batch.h[i], batch.h_neg[j]);
    }
  }

  TripletLossResult res;
  res.dh = zeros_like(batch.h);
  res.dh_pos = zeros_like(batch.h_pos);
  res.dh_neg = zeros_like(batch.h_neg);

  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_max = s_pos[i][0] * inv_tau;
    for (std::size_t j = 0; j < n; ++j) {
      row_max = std::max(row_max, s_pos[i][j] * inv_tau);
      row_max = std::max(row_max, s_neg[i][j] * inv_tau);
    }
    double sum_exp = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum_exp += std::exp(s_pos[i][j] * inv_tau - row_max);
      sum_exp += std::exp(s_neg[i][j] * inv_tau - row_max);
    }
    const double log_z = row_max + std::log(sum_exp);
    loss += -y[i] * (s_pos[i][i] * inv_tau - log_z) * inv_n;

    for (std::size_t j = 0; j < n; ++j) {
      const double p_pos = std::exp(s_pos[i][j] * inv_tau - row_max) / sum_exp;
      const double p_neg = std::exp(s_neg[i][j] * inv_tau - row_max) / sum_exp;
      const double kron = (i == j) ? 1.0 : 0.0;
      const double g_pos = -inv_n * y[i] * (kron - p_pos) * inv_tau;
      const double g_neg = inv_n * y[i] * p_neg * inv_tau;
      cosine_backward(batch.h[i], batch.h_pos[j], g_pos, res.dh[i],
                      res.dh_pos[j]);
      cosine_backward(batch.h[i], batch.h_neg[j], g_neg, res.dh[i],
                      res.dh_neg[j]);
    }
  }
  res.loss = loss;
  return res;
}

}  // namespace

PairLossResult mse_loss(const PairBatch& batch) {
  const std::size_t n = batch.h.size();
  check_aligned(n, batch.h_prime.size(), "h vs h_prime");
  check_aligned(n, batch.y.size(), "h vs y");
  if (n == 0) throw Error("mse_loss: empty batch");
  const double inv_n = 1.0 / static_cast<double>(n);

  PairLossResult res;
  res.dh = zeros_like(batch.h);
  res.dh_prime = zeros_like(batch.h_prime);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cosine(batch.h[i], batch.h_prime[i]);
    const double diff = c - batch.y[i];
    loss += diff * diff * inv_n;
    cosine_backward(batch.h[i], batch.h_prime[i], 2.0 * diff * inv_n,
                    res.dh[i], res.dh_prime[i]);
  }
  res.loss = loss;
  return res;
}

TripletLossResult soft_infonce(const TripletBatch& batch) {
  return soft_infonce_impl(batch, batch.y);
}

TripletLossResult infonce(const TripletBatch& batch) {
  return soft_infonce_impl(batch, std::vector<double>(batch.h.size(), 1.0));
}

LogitLossResult bce_loss(const LogitBatch& batch) {
  const std::size_t n = batch.logits.size();
  check_aligned(n, batch.y.size(), "logits vs y");
  if (n == 0) throw Error("bce_loss: empty batch");
  const double inv_n = 1.0 / static_cast<double>(n);

  LogitLossResult res;
  res.dlogits.assign(n, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = batch.y[i];
    if (!(y >= 0.0 && y <= 1.0)) {
      throw Error("bce_loss: target outside [0,1]");
    }
    const double x = batch.logits[i];
    // -(y log sigma(x) + (1-y) log(1-sigma(x))) = max(x,0) - x*y + log1p(e^-|x|)
    loss += (std::max(x, 0.0) - x * y + std::log1p(std::exp(-std::abs(x)))) *
            inv_n;
    const double sig = 1.0 / (1.0 + std::exp(-x));
    res.dlogits[i] = (sig - y) * inv_n;
  }
  res.loss = loss;
  return res;
}

}  // namespace sentsim
