#pragma once

#include <map>
#include <string>
#include <vector>

#include "hredsum/checkpoint.hpp"

namespace hredsum {

// Mean absolute per-coordinate fractional change between two snapshots of
// the same parameter group, (1/N) * sum |(w'_j - w_j) / w_j|. Coordinates
// with |w_j| < eps are excluded; all-excluded input is a degenerate-input
// error.
double relative_weight_change(const std::vector<double>& snapshot_before,
                              const std::vector<double>& snapshot_after, double eps = 1e-12);

struct Histogram {
    double lo = 0.0, hi = 0.0;  // observed range
    double min = 0.0, max = 0.0, mean = 0.0, stddev = 0.0;
    std::vector<std::size_t> counts;  // fixed-width bins over [lo, hi]

    double bin_low(std::size_t i) const;
    double bin_high(std::size_t i) const;
};

Histogram weight_histogram(const std::vector<double>& values, std::size_t bins = 101);

// 100 * (candidate - baseline) / baseline; nonpositive baseline is a
// contract error.
double relative_gap(double candidate, double baseline);

// Concatenated parameter values per diagnostic group (embedding, enc_sent,
// enc_doc, attention, decoder), in checkpoint tensor order. grads=true
// concatenates the captured gradient sections instead.
std::map<std::string, std::vector<double>> group_values(const Checkpoint& ck, bool grads = false);

}  // namespace hredsum
