#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hredsum/checkpoint.hpp"
#include "hredsum/data.hpp"
#include "hredsum/model.hpp"

namespace hredsum {

// If the global L2 norm of all trainable gradients exceeds max_norm, scale
// every gradient by max_norm/norm. Returns the applied scale.
double clip_gradients(ParameterRegistry& reg, double max_norm);

// Adagrad with a configurable initial accumulator. Frozen parameters are
// skipped entirely: no update, no accumulator growth.
class Adagrad {
  public:
    Adagrad(double lr, double init_acc) : lr_(lr), init_acc_(init_acc) {}

    void step(ParameterRegistry& reg);

    std::map<std::string, std::vector<double>>& accumulators() { return acc_; }
    const std::map<std::string, std::vector<double>>& accumulators() const { return acc_; }
    double lr() const { return lr_; }
    double init_acc() const { return init_acc_; }

  private:
    double lr_;
    double init_acc_;
    std::map<std::string, std::vector<double>> acc_;
};

// forward -> backward -> clip -> step; returns the pre-step batch loss
// (mean of per-example losses).
double train_batch(SummModel& model, Adagrad& opt, const Batch& batch);

struct MetricsRecord {
    std::size_t update = 0;
    double train_ppl = 0.0;
    double val_ppl = 0.0;
    // per-group relative weight change vs the previous snapshot
    std::map<std::string, double> rel_weight_change;
};

struct TrainResult {
    std::vector<MetricsRecord> metrics;
    std::size_t updates = 0;
    double final_val_ppl = 0.0;
};

// Epoch loop with perplexity logging and parameter snapshots every
// cfg.snapshot_interval updates. When run_dir is non-empty, snapshots are
// written to <run_dir>/snapshots/snap_NNNNNNNN.ckpt (update 0 included) and
// checkpoint_final.ckpt at the end.
TrainResult train_loop(SummModel& model, Adagrad& opt, const std::vector<Example>& train_set,
                       const std::vector<Example>& val_set, const std::string& run_dir,
                       const std::function<void(const MetricsRecord&)>& on_metrics = nullptr);

// Parameter-group key for diagnostics: embedding, enc_sent, enc_doc,
// attention, decoder.
std::string param_group(const std::string& param_name);

}  // namespace hredsum
