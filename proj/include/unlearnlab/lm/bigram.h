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

#ifndef UNLEARNLAB_LM_BIGRAM_H_
#define UNLEARNLAB_LM_BIGRAM_H_

#include <cstddef>
#include <span>
#include <vector>

#include "unlearnlab/lm/model.h"

namespace unlearnlab::lm {

// Adjacent-pair counts n(a, b) over a dataset. The bigram's total NLL on that
// dataset depends on the data only through these counts.
struct BigramCounts {
  int vocab_size = 0;
  std::vector<double> counts;  // row-major V x V

  double at(int a, int b) const {
    return counts[static_cast<std::size_t>(a) *
                      static_cast<std::size_t>(vocab_size) +
                  static_cast<std::size_t>(b)];
  }
  double RowTotal(int a) const;
  double Total() const;
};

BigramCounts CountBigrams(std::span<const TokenSequence> data, int vocab_size);

// Total (summed) NLL of a bigram model under the counts.
double BigramTotalNll(const ModelParams& model, const BigramCounts& counts);

// Gradient of BigramTotalNll with respect to the logit table:
// row a is n_a * softmax(W_a) - n(a, .).
Tensor BigramNllGradient(const ModelParams& model, const BigramCounts& counts);

// Minimizes BigramTotalNll by damped Newton iterations on each context row
// until the gradient's max-abs entry is below `grad_tol`. Row logits are
// kept mean-zero. Rows with unseen successors have no finite optimum; they
// stop after `max_iterations`.
ModelParams FitBigram(const ModelParams& init, const BigramCounts& counts,
                      double grad_tol = 1e-10, int max_iterations = 200);

}  // namespace unlearnlab::lm

#endif  // UNLEARNLAB_LM_BIGRAM_H_
