#include "hredsum/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "hredsum/errors.hpp"

namespace hredsum {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'C', 'K'};

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw CheckpointError("checkpoint: truncated file");
    return v;
}

void write_string(std::ostream& os, const std::string& s) {
    write_pod<std::uint64_t>(os, s.size());
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
    auto n = read_pod<std::uint64_t>(is);
    std::string s(n, '\0');
    is.read(s.data(), static_cast<std::streamsize>(n));
    if (!is) throw CheckpointError("checkpoint: truncated string");
    return s;
}

void write_doubles(std::ostream& os, const std::vector<double>& v) {
    write_pod<std::uint64_t>(os, v.size());
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_doubles(std::istream& is) {
    auto n = read_pod<std::uint64_t>(is);
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw CheckpointError("checkpoint: truncated tensor data");
    return v;
}

}  // namespace

Checkpoint Checkpoint::capture(const ParameterRegistry& reg, const RunConfig& cfg,
                               std::uint64_t update_counter,
                               const std::map<std::string, std::vector<double>>& accumulators,
                               bool include_grads) {
    Checkpoint ck;
    ck.config_text = cfg.to_flat().serialize();
    ck.update_counter = update_counter;
    ck.seed = cfg.seed;
    for (const auto& e : reg.entries()) {
        NamedTensor nt;
        nt.name = e.name;
        nt.shape = e.tensor->shape;
        nt.trainable = e.trainable;
        nt.values = e.tensor->values;
        if (include_grads && !e.tensor->grad.empty()) nt.grad = e.tensor->grad;
        ck.tensors.push_back(std::move(nt));
    }
    ck.accumulators = accumulators;
    return ck;
}

void Checkpoint::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write checkpoint " + path);
    os.write(kMagic, 4);
    write_pod<std::uint32_t>(os, kVersion);
    write_string(os, config_text);
    write_pod<std::uint64_t>(os, update_counter);
    write_pod<std::uint64_t>(os, seed);
    write_pod<std::uint64_t>(os, tensors.size());
    for (const auto& t : tensors) {
        write_string(os, t.name);
        write_pod<std::uint8_t>(os, t.trainable ? 1 : 0);
        write_pod<std::uint8_t>(os, t.grad.empty() ? 0 : 1);
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(t.shape.size()));
        for (auto d : t.shape) write_pod<std::uint64_t>(os, d);
        write_doubles(os, t.values);
        if (!t.grad.empty()) write_doubles(os, t.grad);
    }
    write_pod<std::uint64_t>(os, accumulators.size());
    for (const auto& [name, acc] : accumulators) {
        write_string(os, name);
        write_doubles(os, acc);
    }
    if (!os) throw IoError("write failure on checkpoint " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot read checkpoint " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError("not a checkpoint file: " + path);
    auto version = read_pod<std::uint32_t>(is);
    if (version != kVersion)
        throw CheckpointError("checkpoint version " + std::to_string(version) +
                              " unsupported (want " + std::to_string(kVersion) + ")");
    Checkpoint ck;
    ck.config_text = read_string(is);
    ck.update_counter = read_pod<std::uint64_t>(is);
    ck.seed = read_pod<std::uint64_t>(is);
    auto n_tensors = read_pod<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < n_tensors; ++i) {
        NamedTensor t;
        t.name = read_string(is);
        t.trainable = read_pod<std::uint8_t>(is) != 0;
        bool has_grad = read_pod<std::uint8_t>(is) != 0;
        auto ndim = read_pod<std::uint32_t>(is);
        for (std::uint32_t d = 0; d < ndim; ++d)
            t.shape.push_back(static_cast<std::size_t>(read_pod<std::uint64_t>(is)));
        t.values = read_doubles(is);
        if (has_grad) t.grad = read_doubles(is);
        ck.tensors.push_back(std::move(t));
    }
    auto n_acc = read_pod<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < n_acc; ++i) {
        std::string name = read_string(is);
        ck.accumulators[name] = read_doubles(is);
    }
    return ck;
}

void Checkpoint::restore(ParameterRegistry& reg) const {
    for (const auto& t : tensors) {
        if (!reg.has(t.name))
            throw CheckpointError("checkpoint tensor " + t.name + " missing in model");
        TensorPtr dst = reg.get(t.name);
        if (dst->shape != t.shape)
            throw CheckpointError("checkpoint tensor " + t.name + " shape mismatch");
        dst->values = t.values;
    }
}

const Checkpoint::NamedTensor& Checkpoint::tensor(const std::string& name) const {
    for (const auto& t : tensors)
        if (t.name == name) return t;
    throw CheckpointError("checkpoint has no tensor " + name);
}

}  // namespace hredsum
