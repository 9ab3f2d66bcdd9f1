#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hredsum/encoder.hpp"

namespace hredsum {

// Flat "key = value" configuration; '#' starts a comment. Keys use a dotted
// namespace (encoder.variant, train.lr, ...). Unknown keys are rejected so
// typos fail loudly.
class FlatConfig {
  public:
    static FlatConfig parse_file(const std::string& path);
    static FlatConfig parse_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& items() const { return kv_; }
    std::string serialize() const;  // sorted, reproducible

  private:
    std::map<std::string, std::string> kv_;
};

// Fully resolved run configuration; serialized into every checkpoint and
// output-file header.
struct RunConfig {
    // model
    EncoderVariant variant = EncoderVariant::Trained;
    std::size_t enc_hidden = 256;
    std::size_t dec_hidden = 256;
    std::size_t attn_dim = 0;  // 0 -> dec_hidden
    std::size_t emb_dim = 128;
    double esn_spectral_radius = 0.0;
    bool force_pgen_one = false;
    // training
    std::size_t batch_size = 8;
    double lr = 0.15;
    double adagrad_init_acc = 0.1;
    double max_grad_norm = 2.0;
    std::size_t epochs = 12;
    std::size_t max_doc_tokens = 400;
    std::size_t max_summary_tokens = 100;
    std::size_t vocab_size = 50000;
    bool coverage_enabled = true;
    double coverage_lambda = 1.0;
    std::size_t snapshot_interval = 100;
    // evaluation
    std::size_t beam_size = 4;
    std::size_t max_decode_tokens = 120;
    // run
    std::uint64_t seed = 1;
    std::string train_path, val_path, test_path, run_dir;

    std::size_t attention_dim() const { return attn_dim ? attn_dim : dec_hidden; }

    static RunConfig from_flat(const FlatConfig& cfg);
    FlatConfig to_flat() const;
};

// The "desk" preset: vocab 500, enc/dec hidden 32, embedding 32, 2 epochs.
void apply_desk_preset(FlatConfig& cfg);

}  // namespace hredsum
