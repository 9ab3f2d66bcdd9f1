#pragma once

#include <string>
#include <vector>

#include "hredsum/model.hpp"

namespace hredsum {

// exp(total NLL / total valid target tokens), teacher-forced. Token-weighted
// pooling makes the value invariant to how the dataset is partitioned.
double perplexity(const SummModel& model, const std::vector<Example>& dataset);

// Beam search over the extended vocabulary with length-normalized
// log-probability. A hypothesis emitting END retires; the best retired
// hypothesis wins (best live one at the token cap otherwise). Ties break
// toward the lexicographically smaller token-id sequence. Returned ids
// exclude START/END.
std::vector<int> beam_search(const SummModel& model, const Example& ex, std::size_t beam = 4,
                             std::size_t max_tokens = 120);

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct RougeScore {
    PRF rouge1, rouge2, rougeL;
};

// Clipped n-gram overlap precision/recall/F1. Empty n-gram sides give 0.
PRF rouge_n(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis,
            std::size_t n);

// LCS-based precision/recall/F1 (dynamic programming).
PRF rouge_l(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

RougeScore rouge_all(const std::vector<std::string>& reference,
                     const std::vector<std::string>& hypothesis);

// Mean of example-level scores (summary-level F1 averaged over examples,
// whitespace tokens, lowercased upstream).
RougeScore rouge_mean(const std::vector<RougeScore>& per_example);

struct BootstrapCI {
    double lo = 0.0, hi = 0.0;
};

// Seeded bootstrap 95% interval over example-level values.
BootstrapCI bootstrap_ci(const std::vector<double>& values, std::size_t resamples = 1000,
                         std::uint64_t seed = 0);

}  // namespace hredsum
