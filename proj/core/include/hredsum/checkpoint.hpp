#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hredsum/config.hpp"
#include "hredsum/nn.hpp"

namespace hredsum {

// Versioned binary container: named tensors (shape, trainable flag, 64-bit
// little-endian values, optional gradient section), Adagrad accumulators,
// config echo, update counter, seed. Save -> load is bit-exact.
struct Checkpoint {
    static constexpr std::uint32_t kVersion = 1;

    struct NamedTensor {
        std::string name;
        std::vector<std::size_t> shape;
        bool trainable = false;
        std::vector<double> values;
        std::vector<double> grad;  // empty unless captured
    };

    std::string config_text;  // FlatConfig serialization
    std::uint64_t update_counter = 0;
    std::uint64_t seed = 0;
    std::vector<NamedTensor> tensors;
    std::map<std::string, std::vector<double>> accumulators;

    static Checkpoint capture(const ParameterRegistry& reg, const RunConfig& cfg,
                              std::uint64_t update_counter,
                              const std::map<std::string, std::vector<double>>& accumulators,
                              bool include_grads = false);

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);  // throws CheckpointError

    // Overwrite matching registry tensors; missing or shape-mismatched
    // entries are checkpoint errors.
    void restore(ParameterRegistry& reg) const;

    const NamedTensor& tensor(const std::string& name) const;
};

}  // namespace hredsum
