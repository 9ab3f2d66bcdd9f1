#include "hredsum/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "hredsum/errors.hpp"
#include "hredsum/train.hpp"

namespace hredsum {

double relative_weight_change(const std::vector<double>& snapshot_before,
                              const std::vector<double>& snapshot_after, double eps) {
    if (snapshot_before.size() != snapshot_after.size())
        throw DimensionError("relative_weight_change: snapshot sizes differ");
    double total = 0.0;
    std::size_t included = 0;
    for (std::size_t j = 0; j < snapshot_before.size(); ++j) {
        double w = snapshot_before[j];
        if (std::abs(w) < eps) continue;
        total += std::abs((snapshot_after[j] - w) / w);
        ++included;
    }
    if (included == 0)
        throw DegenerateInputError("relative_weight_change: all coordinates near zero");
    return total / static_cast<double>(included);
}

double Histogram::bin_low(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
}

double Histogram::bin_high(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(counts.size());
}

Histogram weight_histogram(const std::vector<double>& values, std::size_t bins) {
    if (values.empty()) throw ContractError("weight_histogram: empty group");
    if (bins == 0) throw ContractError("weight_histogram: need at least one bin");
    Histogram h;
    h.min = *std::min_element(values.begin(), values.end());
    h.max = *std::max_element(values.begin(), values.end());
    h.lo = h.min;
    h.hi = h.max;
    double s = 0.0;
    for (double v : values) s += v;
    h.mean = s / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - h.mean) * (v - h.mean);
    h.stddev = std::sqrt(sq / static_cast<double>(values.size()));

    h.counts.assign(bins, 0);
    double width = h.hi - h.lo;
    for (double v : values) {
        std::size_t b = width > 0.0
                            ? std::min<std::size_t>(
                                  static_cast<std::size_t>((v - h.lo) / width * bins), bins - 1)
                            : 0;
        ++h.counts[b];
    }
    return h;
}

double relative_gap(double candidate, double baseline) {
    if (baseline <= 0.0) throw ContractError("relative_gap: baseline must be positive");
    return 100.0 * (candidate - baseline) / baseline;
}

std::map<std::string, std::vector<double>> group_values(const Checkpoint& ck, bool grads) {
    std::map<std::string, std::vector<double>> out;
    for (const auto& t : ck.tensors) {
        const auto& src = grads ? t.grad : t.values;
        if (src.empty()) continue;
        auto& dst = out[param_group(t.name)];
        dst.insert(dst.end(), src.begin(), src.end());
    }
    return out;
}

}  // namespace hredsum
