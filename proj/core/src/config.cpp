#include "hredsum/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hredsum/errors.hpp"

namespace hredsum {

namespace {

const std::set<std::string> kKnownKeys = {
    "preset",
    "encoder.variant", "encoder.hidden", "encoder.esn_spectral_radius",
    "decoder.hidden", "decoder.force_pgen_one",
    "attention.dim", "attention.score",
    "embedding.dim",
    "train.batch_size", "train.lr", "train.adagrad_init_acc", "train.max_grad_norm",
    "train.epochs", "train.max_doc_tokens", "train.max_summary_tokens", "train.vocab_size",
    "train.coverage", "train.coverage_lambda", "train.snapshot_interval",
    "eval.beam", "eval.max_tokens",
    "seed", "data.train", "data.val", "data.test", "run.dir",
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

FlatConfig FlatConfig::parse_string(const std::string& text) {
    FlatConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!kKnownKeys.count(key))
            throw ContractError("config line " + std::to_string(lineno) + ": unknown key '" +
                                key + "'");
        cfg.kv_[key] = value;
    }
    return cfg;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str());
}

std::string FlatConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw ContractError("config key " + key + ": not a number: " + it->second);
    }
}

std::int64_t FlatConfig::get_int(const std::string& key, std::int64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        return std::stoll(it->second);
    } catch (...) {
        throw ContractError("config key " + key + ": not an integer: " + it->second);
    }
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ContractError("config key " + key + ": not a boolean: " + it->second);
}

std::string FlatConfig::serialize() const {
    std::ostringstream os;
    for (const auto& [k, v] : kv_) os << k << " = " << v << "\n";
    return os.str();
}

void apply_desk_preset(FlatConfig& cfg) {
    auto set_default = [&](const std::string& k, const std::string& v) {
        if (!cfg.has(k)) cfg.set(k, v);
    };
    set_default("train.vocab_size", "500");
    set_default("encoder.hidden", "32");
    set_default("decoder.hidden", "32");
    set_default("embedding.dim", "32");
    set_default("train.epochs", "2");
}

RunConfig RunConfig::from_flat(const FlatConfig& in) {
    FlatConfig cfg = in;
    if (cfg.get("preset", "") == "desk") apply_desk_preset(cfg);
    else if (!cfg.get("preset", "").empty() && cfg.get("preset", "") != "full")
        throw ContractError("unknown preset: " + cfg.get("preset", ""));

    RunConfig rc;
    rc.variant = encoder_variant_from_string(cfg.get("encoder.variant", "trained"));
    rc.enc_hidden = static_cast<std::size_t>(cfg.get_int("encoder.hidden", 256));
    rc.dec_hidden = static_cast<std::size_t>(cfg.get_int("decoder.hidden", 256));
    rc.attn_dim = static_cast<std::size_t>(cfg.get_int("attention.dim", 0));
    rc.emb_dim = static_cast<std::size_t>(cfg.get_int("embedding.dim", 128));
    rc.esn_spectral_radius = cfg.get_double("encoder.esn_spectral_radius", 0.0);
    rc.force_pgen_one = cfg.get_bool("decoder.force_pgen_one", false);
    rc.batch_size = static_cast<std::size_t>(cfg.get_int("train.batch_size", 8));
    rc.lr = cfg.get_double("train.lr", 0.15);
    rc.adagrad_init_acc = cfg.get_double("train.adagrad_init_acc", 0.1);
    rc.max_grad_norm = cfg.get_double("train.max_grad_norm", 2.0);
    rc.epochs = static_cast<std::size_t>(cfg.get_int("train.epochs", 12));
    rc.max_doc_tokens = static_cast<std::size_t>(cfg.get_int("train.max_doc_tokens", 400));
    rc.max_summary_tokens =
        static_cast<std::size_t>(cfg.get_int("train.max_summary_tokens", 100));
    rc.vocab_size = static_cast<std::size_t>(cfg.get_int("train.vocab_size", 50000));
    rc.coverage_enabled = cfg.get_bool("train.coverage", true);
    rc.coverage_lambda = cfg.get_double("train.coverage_lambda", 1.0);
    rc.snapshot_interval = static_cast<std::size_t>(cfg.get_int("train.snapshot_interval", 100));
    rc.beam_size = static_cast<std::size_t>(cfg.get_int("eval.beam", 4));
    rc.max_decode_tokens = static_cast<std::size_t>(cfg.get_int("eval.max_tokens", 120));
    rc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    rc.train_path = cfg.get("data.train", "");
    rc.val_path = cfg.get("data.val", "");
    rc.test_path = cfg.get("data.test", "");
    rc.run_dir = cfg.get("run.dir", "");

    if (rc.batch_size == 0 || rc.lr <= 0 || rc.adagrad_init_acc <= 0 || rc.max_grad_norm <= 0 ||
        rc.epochs == 0 || rc.max_doc_tokens == 0 || rc.max_summary_tokens == 0 ||
        rc.vocab_size < 5 || rc.enc_hidden == 0 || rc.dec_hidden == 0 || rc.emb_dim == 0)
        throw ContractError("config: all sizes and rates must be positive");
    return rc;
}

FlatConfig RunConfig::to_flat() const {
    FlatConfig cfg;
    cfg.set("encoder.variant", to_string(variant));
    cfg.set("encoder.hidden", std::to_string(enc_hidden));
    cfg.set("encoder.esn_spectral_radius", std::to_string(esn_spectral_radius));
    cfg.set("decoder.hidden", std::to_string(dec_hidden));
    cfg.set("decoder.force_pgen_one", force_pgen_one ? "true" : "false");
    cfg.set("attention.dim", std::to_string(attention_dim()));
    cfg.set("attention.score", "additive");
    cfg.set("embedding.dim", std::to_string(emb_dim));
    cfg.set("train.batch_size", std::to_string(batch_size));
    cfg.set("train.lr", std::to_string(lr));
    cfg.set("train.adagrad_init_acc", std::to_string(adagrad_init_acc));
    cfg.set("train.max_grad_norm", std::to_string(max_grad_norm));
    cfg.set("train.epochs", std::to_string(epochs));
    cfg.set("train.max_doc_tokens", std::to_string(max_doc_tokens));
    cfg.set("train.max_summary_tokens", std::to_string(max_summary_tokens));
    cfg.set("train.vocab_size", std::to_string(vocab_size));
    cfg.set("train.coverage", coverage_enabled ? "true" : "false");
    cfg.set("train.coverage_lambda", std::to_string(coverage_lambda));
    cfg.set("train.snapshot_interval", std::to_string(snapshot_interval));
    cfg.set("eval.beam", std::to_string(beam_size));
    cfg.set("eval.max_tokens", std::to_string(max_decode_tokens));
    cfg.set("seed", std::to_string(seed));
    if (!train_path.empty()) cfg.set("data.train", train_path);
    if (!val_path.empty()) cfg.set("data.val", val_path);
    if (!test_path.empty()) cfg.set("data.test", test_path);
    if (!run_dir.empty()) cfg.set("run.dir", run_dir);
    return cfg;
}

}  // namespace hredsum
