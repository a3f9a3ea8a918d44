// Copyright 2026 The Unlearnlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unlearnlab/lm/bigram.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "unlearnlab/error.h"

namespace unlearnlab::lm {

namespace {

void CheckBigram(const ModelParams& model, const BigramCounts& counts) {
  if (model.arch != Arch::kBigram) {
    throw InvalidArgument("operation requires the bigram architecture");
  }
  if (counts.vocab_size != model.vocab_size) {
    throw InvalidArgument("count table and model disagree on vocab size");
  }
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& z) {
  Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

double LogSumExp(const Eigen::VectorXd& z) {
  const double mx = z.maxCoeff();
  return mx + std::log((z.array() - mx).exp().sum());
}

// n_a * lse(w) - sum_b n(a, b) w_b
double RowObjective(const Eigen::VectorXd& w, const Eigen::VectorXd& n_row,
                    double n_a) {
  return n_a * LogSumExp(w) - n_row.dot(w);
}

}  // namespace

double BigramCounts::RowTotal(int a) const {
  double s = 0.0;
  for (int b = 0; b < vocab_size; ++b) s += at(a, b);
  return s;
}

double BigramCounts::Total() const {
  double s = 0.0;
  for (double c : counts) s += c;
  return s;
}

BigramCounts CountBigrams(std::span<const TokenSequence> data,
                          int vocab_size) {
  BigramCounts c;
  c.vocab_size = vocab_size;
  const auto v = static_cast<std::size_t>(vocab_size);
  c.counts.assign(v * v, 0.0);
  for (const auto& seq : data) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const int a = seq[i], b = seq[i + 1];
      if (a < 0 || a >= vocab_size || b < 0 || b >= vocab_size) {
        throw InvalidArgument("token outside vocabulary in bigram counts");
      }
      c.counts[static_cast<std::size_t>(a) * v + static_cast<std::size_t>(b)] +=
          1.0;
    }
  }
  return c;
}

double BigramTotalNll(const ModelParams& model, const BigramCounts& counts) {
  CheckBigram(model, counts);
  const Tensor& w = model.Get("logits");
  const int v = model.vocab_size;
  double total = 0.0;
  for (int a = 0; a < v; ++a) {
    Eigen::VectorXd row(v), n_row(v);
    for (int b = 0; b < v; ++b) {
      row[b] = w(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
      n_row[b] = counts.at(a, b);
    }
    total += RowObjective(row, n_row, n_row.sum());
  }
  return total;
}

Tensor BigramNllGradient(const ModelParams& model, const BigramCounts& counts) {
  CheckBigram(model, counts);
  const Tensor& w = model.Get("logits");
  const int v = model.vocab_size;
  Tensor g(w.shape(), 0.0);
  for (int a = 0; a < v; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    Eigen::VectorXd row(v);
    for (int b = 0; b < v; ++b) row[b] = w(ua, static_cast<std::size_t>(b));
    const Eigen::VectorXd p = Softmax(row);
    const double n_a = counts.RowTotal(a);
    for (int b = 0; b < v; ++b)
      g(ua, static_cast<std::size_t>(b)) = n_a * p[b] - counts.at(a, b);
  }
  return g;
}

ModelParams FitBigram(const ModelParams& init, const BigramCounts& counts,
                      double grad_tol, int max_iterations) {
  CheckBigram(init, counts);
  ModelParams model = init;
  Tensor& w = model.Get("logits");
  const int v = model.vocab_size;
  for (int a = 0; a < v; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    Eigen::VectorXd n_row(v), row(v);
    for (int b = 0; b < v; ++b) {
      n_row[b] = counts.at(a, b);
      row[b] = w(ua, static_cast<std::size_t>(b));
    }
    const double n_a = n_row.sum();
    if (n_a == 0.0) continue;
    for (int iter = 0; iter < max_iterations; ++iter) {
      const Eigen::VectorXd p = Softmax(row);
      const Eigen::VectorXd g = n_a * p - n_row;
      if (g.cwiseAbs().maxCoeff() < grad_tol) break;
      Eigen::MatrixXd h = n_a * (Eigen::MatrixXd(p.asDiagonal()) - p * p.transpose());
      // The row objective is flat along the all-ones direction; a tiny ridge
      // makes the system solvable without moving along it (g sums to zero).
      h.diagonal().array() += 1e-12 * n_a;
      const Eigen::VectorXd step = h.ldlt().solve(g);
      const double f0 = RowObjective(row, n_row, n_a);
      double t = 1.0;
      Eigen::VectorXd candidate = row - step;
      while (RowObjective(candidate, n_row, n_a) > f0 && t > 1e-10) {
        t *= 0.5;
        candidate = row - t * step;
      }
      row = candidate.array() - candidate.mean();
    }
    for (int b = 0; b < v; ++b) w(ua, static_cast<std::size_t>(b)) = row[b];
  }
  return model;
}

}  // namespace unlearnlab::lm
