#include "hredsum/train.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "hredsum/diagnostics.hpp"
#include "hredsum/eval.hpp"

namespace hredsum {

double clip_gradients(ParameterRegistry& reg, double max_norm) {
    double sq = 0.0;
    for (const auto& e : reg.entries()) {
        if (!e.trainable) continue;
        for (double g : e.tensor->grad) sq += g * g;
    }
    double norm = std::sqrt(sq);
    if (norm <= max_norm || norm == 0.0) return 1.0;
    double scale = max_norm / norm;
    for (auto& e : reg.entries()) {
        if (!e.trainable) continue;
        for (double& g : e.tensor->grad) g *= scale;
    }
    return scale;
}

void Adagrad::step(ParameterRegistry& reg) {
    for (const auto& e : reg.entries()) {
        if (!e.trainable) continue;  // frozen fence: no update, no accumulator
        TensorPtr t = e.tensor;
        if (t->grad.empty()) continue;
        auto& acc = acc_[e.name];
        if (acc.size() != t->values.size()) acc.assign(t->values.size(), init_acc_);
        for (std::size_t i = 0; i < t->values.size(); ++i) {
            double g = t->grad[i];
            if (g == 0.0) continue;
            acc[i] += g * g;
            t->values[i] -= lr_ * g / std::sqrt(acc[i]);
        }
    }
}

double train_batch(SummModel& model, Adagrad& opt, const Batch& batch) {
    if (batch.examples.empty()) throw ContractError("train_batch: empty batch");
    model.registry().zero_grads();
    TensorPtr total;
    for (const auto& ex : batch.examples) {
        TensorPtr l = model.example_loss(ex);
        total = total ? add(total, l) : l;
    }
    TensorPtr loss = scale(total, 1.0 / static_cast<double>(batch.examples.size()));
    double value = loss->scalar();
    if (!std::isfinite(value)) throw ContractError("train_batch: non-finite loss");
    backward(loss);
    clip_gradients(model.registry(), model.config().max_grad_norm);
    opt.step(model.registry());
    return value;
}

std::string param_group(const std::string& param_name) {
    auto slash = param_name.find('/');
    std::string head = slash == std::string::npos ? param_name : param_name.substr(0, slash);
    if (head == "enc_sent" || head == "enc_doc" || head == "attention" || head == "decoder" ||
        head == "embedding")
        return head;
    return "other";
}

namespace {

std::string snapshot_path(const std::string& run_dir, std::size_t update) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%08zu.ckpt", update);
    return run_dir + "/snapshots/" + buf;
}

}  // namespace

TrainResult train_loop(SummModel& model, Adagrad& opt, const std::vector<Example>& train_set,
                       const std::vector<Example>& val_set, const std::string& run_dir,
                       const std::function<void(const MetricsRecord&)>& on_metrics) {
    const RunConfig& cfg = model.config();
    TrainResult result;
    const bool persist = !run_dir.empty();
    if (persist) std::filesystem::create_directories(run_dir + "/snapshots");

    std::map<std::string, std::vector<double>> prev_group;
    auto snapshot = [&](std::size_t update) {
        Checkpoint ck = Checkpoint::capture(model.registry(), cfg, update, opt.accumulators(),
                                            /*include_grads=*/true);
        if (persist) ck.save(snapshot_path(run_dir, update));
        auto groups = group_values(ck);
        std::map<std::string, double> rel;
        if (!prev_group.empty())
            for (const auto& [g, vals] : groups)
                rel[g] = relative_weight_change(prev_group[g], vals);
        prev_group = std::move(groups);
        return rel;
    };

    auto log_point = [&](std::size_t update, double train_ppl) {
        MetricsRecord rec;
        rec.update = update;
        rec.train_ppl = train_ppl;
        rec.val_ppl = val_set.empty() ? 0.0 : perplexity(model, val_set);
        rec.rel_weight_change = snapshot(update);
        result.metrics.push_back(rec);
        if (on_metrics) on_metrics(rec);
    };

    // update 0: untrained baseline + initial snapshot; train ppl sampled on a
    // small prefix to keep startup cheap
    std::vector<Example> train_probe(train_set.begin(),
                                     train_set.begin() + std::min<std::size_t>(train_set.size(), 32));
    log_point(0, train_probe.empty() ? 0.0 : perplexity(model, train_probe));

    std::size_t update = 0;
    double nll_window = 0.0;
    std::size_t window_batches = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto batches = make_batches(train_set, cfg.batch_size, cfg.seed + epoch);
        for (const auto& batch : batches) {
            double loss = train_batch(model, opt, batch);
            nll_window += loss;
            ++window_batches;
            ++update;
            if (update % cfg.snapshot_interval == 0) {
                // window loss includes the coverage term; report exp() of it
                // as the training perplexity proxy over the last interval
                double train_ppl = std::exp(nll_window / static_cast<double>(window_batches));
                nll_window = 0.0;
                window_batches = 0;
                log_point(update, train_ppl);
            }
        }
    }
    if (update % cfg.snapshot_interval != 0) {
        double train_ppl = window_batches
                               ? std::exp(nll_window / static_cast<double>(window_batches))
                               : 0.0;
        log_point(update, train_ppl);
    }

    result.updates = update;
    result.final_val_ppl = val_set.empty() ? 0.0 : perplexity(model, val_set);
    if (persist) {
        Checkpoint ck = Checkpoint::capture(model.registry(), cfg, update, opt.accumulators());
        ck.save(run_dir + "/checkpoint_final.ckpt");
    }
    return result;
}

}  // namespace hredsum
