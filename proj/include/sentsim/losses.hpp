#pragma once

#include <vector>

namespace sentsim {

using Vec = std::vector<double>;

// N aligned (h_i, h_i', y_i) rows for regression-style objectives.
struct PairBatch {
  std::vector<Vec> h;
  std::vector<Vec> h_prime;
  std::vector<double> y;  // targets in [0,1]
};

// N aligned (h_i, h_i+, h_i-, y_i) rows plus a softmax temperature.
struct TripletBatch {
  std::vector<Vec> h;
  std::vector<Vec> h_pos;
  std::vector<Vec> h_neg;
  std::vector<double> y;  // soft labels in [0,1]
  double tau = 0.05;
};

struct LogitBatch {
  std::vector<double> logits;
  std::vector<double> y;  // targets in [0,1]
};

struct PairLossResult {
  double loss = 0.0;
  std::vector<Vec> dh;
  std::vector<Vec> dh_prime;
};

struct TripletLossResult {
  double loss = 0.0;
  std::vector<Vec> dh;
  std::vector<Vec> dh_pos;
  std::vector<Vec> dh_neg;
};

struct LogitLossResult {
  double loss = 0.0;
  std::vector<double> dlogits;
};

// (1/N) sum_i (cos(h_i, h_i') - y_i)^2
PairLossResult mse_loss(const PairBatch& batch);

// -(1/N) sum_i y_i * log[ exp(cos(h_i,h_i+)/tau) /
//     sum_j (exp(cos(h_i,h_j+)/tau) + exp(cos(h_i,h_j-)/tau)) ]
// The denominator runs over all j including j = i, for both columns.
// Log-sum-exp is computed with per-row max subtraction.
TripletLossResult soft_infonce(const TripletBatch& batch);

// soft_infonce with every y_i forced to 1 (same code path).
TripletLossResult infonce(const TripletBatch& batch);

// -(1/N) sum_i [ y_i log sigmoid(l_i) + (1-y_i) log(1-sigmoid(l_i)) ]
// Gradient w.r.t. each logit is (sigmoid(l_i) - y_i)/N.
LogitLossResult bce_loss(const LogitBatch& batch);

}  // namespace sentsim
