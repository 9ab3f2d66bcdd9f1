// Command-line front end: train | evaluate | decode | diagnose | synth-data.
//
// Exit codes: 0 success, 2 bad config/arguments, 3 I/O failure,
// 4 checkpoint failure, 5 missing snapshots.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hredsum/checkpoint.hpp"
#include "hredsum/diagnostics.hpp"
#include "hredsum/eval.hpp"
#include "hredsum/train.hpp"

namespace fs = std::filesystem;
using namespace hredsum;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitCheckpoint = 4;
constexpr int kExitSnapshots = 5;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Every output file starts with the full resolved config, enough to
// reproduce the run.
void write_config_header(std::ostream& os, const RunConfig& cfg) {
    std::istringstream is(cfg.to_flat().serialize());
    std::string line;
    while (std::getline(is, line)) os << "# " << line << "\n";
}

std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

std::vector<std::string> lowercased(std::vector<std::string> toks) {
    for (auto& t : toks)
        std::transform(t.begin(), t.end(), t.begin(),
                       [](unsigned char c) { return std::tolower(c); });
    return toks;
}

RunConfig resolve_config(const std::string& config_path,
                         const std::vector<std::string>& overrides) {
    FlatConfig cfg =
        config_path.empty() ? FlatConfig{} : FlatConfig::parse_file(config_path);
    for (const auto& kv : overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ContractError("--set expects key=value, got: " + kv);
        // route through the parser so unknown keys are rejected
        FlatConfig one = FlatConfig::parse_string(kv.substr(0, eq) + " = " + kv.substr(eq + 1));
        for (const auto& [k, v] : one.items()) cfg.set(k, v);
    }
    if (cfg.get("preset", "") == "desk") apply_desk_preset(cfg);
    return RunConfig::from_flat(cfg);
}

std::vector<Example> encode_corpus(const std::vector<RawExample>& raw, const Vocabulary& vocab,
                                   const RunConfig& cfg) {
    std::vector<Example> out;
    out.reserve(raw.size());
    for (const auto& r : raw)
        out.push_back(encode_example(r, vocab, cfg.max_doc_tokens, cfg.max_summary_tokens));
    return out;
}

struct LoadedModel {
    RunConfig cfg;
    std::unique_ptr<SummModel> model;
    Vocabulary vocab;
    std::uint64_t update_counter = 0;
};

LoadedModel load_model(const std::string& ckpt_path, std::string vocab_path) {
    Checkpoint ck = Checkpoint::load(ckpt_path);
    LoadedModel lm;
    lm.cfg = RunConfig::from_flat(FlatConfig::parse_string(ck.config_text));
    lm.model = std::make_unique<SummModel>(lm.cfg);
    ck.restore(lm.model->registry());
    lm.update_counter = ck.update_counter;
    if (vocab_path.empty())
        vocab_path = (fs::path(ckpt_path).parent_path() / "vocab.tsv").string();
    lm.vocab = Vocabulary::load(vocab_path);
    return lm;
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides) {
    RunConfig cfg = resolve_config(config_path, overrides);
    if (cfg.train_path.empty() || cfg.run_dir.empty())
        throw ContractError("train needs data.train and run.dir");

    auto raw_train = load_corpus(cfg.train_path);
    std::vector<RawExample> raw_val;
    if (!cfg.val_path.empty()) raw_val = load_corpus(cfg.val_path);

    std::vector<std::vector<std::string>> streams;
    for (const auto& ex : raw_train) {
        for (const auto& s : ex.article_sentences) streams.push_back(tokens_of(s));
        streams.push_back(tokens_of(ex.abstract));
    }
    Vocabulary vocab = Vocabulary::build(streams, cfg.vocab_size);
    cfg.vocab_size = vocab.size();  // corpus may not fill the configured cap

    fs::create_directories(cfg.run_dir);
    vocab.save(cfg.run_dir + "/vocab.tsv");

    auto train_set = encode_corpus(raw_train, vocab, cfg);
    auto val_set = encode_corpus(raw_val, vocab, cfg);

    SummModel model(cfg);
    Adagrad opt(cfg.lr, cfg.adagrad_init_acc);

    std::ofstream metrics(cfg.run_dir + "/metrics.csv");
    std::ofstream wchange(cfg.run_dir + "/weight_change.csv");
    if (!metrics || !wchange) throw IoError("cannot write outputs under " + cfg.run_dir);
    write_config_header(metrics, cfg);
    write_config_header(wchange, cfg);
    metrics << "update,train_ppl,val_ppl\n";
    wchange << "group,update,rel_change\n";

    train_loop(model, opt, train_set, val_set, cfg.run_dir, [&](const MetricsRecord& rec) {
        metrics << rec.update << ',' << fmt_double(rec.train_ppl) << ','
                << fmt_double(rec.val_ppl) << '\n';
        for (const auto& [group, rel] : rec.rel_weight_change)
            wchange << group << ',' << rec.update << ',' << fmt_double(rel) << '\n';
        std::cout << "update " << rec.update << " train_ppl " << rec.train_ppl << " val_ppl "
                  << rec.val_ppl << std::endl;
    });
    return kExitOk;
}

int cmd_evaluate(const std::string& ckpt_path, const std::string& corpus_path,
                 const std::string& vocab_path, const std::string& out_path, bool with_ci) {
    LoadedModel lm = load_model(ckpt_path, vocab_path);
    auto raw = load_corpus(corpus_path);
    auto dataset = encode_corpus(raw, lm.vocab, lm.cfg);
    if (dataset.empty()) throw ContractError("evaluate: empty corpus");

    double ppl = perplexity(*lm.model, dataset);
    std::vector<RougeScore> scores;
    std::vector<double> r1s;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        auto ids = beam_search(*lm.model, dataset[i], lm.cfg.beam_size, lm.cfg.max_decode_tokens);
        auto hyp = lowercased(decode_ids(ids, lm.vocab, dataset[i].ext));
        auto ref = lowercased(tokens_of(raw[i].abstract));
        scores.push_back(rouge_all(ref, hyp));
        r1s.push_back(scores.back().rouge1.f1);
    }
    RougeScore mean = rouge_mean(scores);

    std::ostringstream csv;
    write_config_header(csv, lm.cfg);
    csv << "metric,value\n";
    csv << "perplexity," << fmt_double(ppl) << '\n';
    csv << "rouge1_f1," << fmt_double(mean.rouge1.f1) << '\n';
    csv << "rouge2_f1," << fmt_double(mean.rouge2.f1) << '\n';
    csv << "rougeL_f1," << fmt_double(mean.rougeL.f1) << '\n';
    if (with_ci) {
        BootstrapCI ci = bootstrap_ci(r1s, 1000, lm.cfg.seed);
        csv << "rouge1_f1_ci_lo," << fmt_double(ci.lo) << '\n';
        csv << "rouge1_f1_ci_hi," << fmt_double(ci.hi) << '\n';
    }
    std::cout << csv.str();
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw IoError("cannot write " + out_path);
        os << csv.str();
    }
    return kExitOk;
}

int cmd_decode(const std::string& ckpt_path, const std::string& input_path,
               const std::string& output_path, const std::string& vocab_path, std::size_t beam,
               std::size_t max_tokens) {
    LoadedModel lm = load_model(ckpt_path, vocab_path);
    auto raw = load_corpus(input_path);
    std::ofstream os(output_path);
    if (!os) throw IoError("cannot write " + output_path);
    for (const auto& r : raw) {
        Example ex = encode_example(r, lm.vocab, lm.cfg.max_doc_tokens, lm.cfg.max_summary_tokens);
        auto ids = beam_search(*lm.model, ex, beam, max_tokens);
        auto toks = decode_ids(ids, lm.vocab, ex.ext);
        for (std::size_t i = 0; i < toks.size(); ++i) os << (i ? " " : "") << toks[i];
        os << '\n';
    }
    return kExitOk;
}

int cmd_diagnose(const std::string& run_dir, std::string out_dir, std::size_t bins) {
    fs::path snaps = fs::path(run_dir) / "snapshots";
    std::vector<fs::path> files;
    if (fs::is_directory(snaps))
        for (const auto& e : fs::directory_iterator(snaps))
            if (e.path().extension() == ".ckpt") files.push_back(e.path());
    if (files.size() < 2) {
        std::cerr << "diagnose: need at least two snapshots under " << snaps << "\n";
        return kExitSnapshots;
    }
    std::sort(files.begin(), files.end());
    if (out_dir.empty()) out_dir = run_dir;
    fs::create_directories(out_dir);

    Checkpoint first = Checkpoint::load(files.front().string());
    RunConfig cfg = RunConfig::from_flat(FlatConfig::parse_string(first.config_text));

    std::ofstream wc(out_dir + "/weight_change.csv");
    std::ofstream hist(out_dir + "/histograms.csv");
    if (!wc || !hist) throw IoError("cannot write outputs under " + out_dir);
    write_config_header(wc, cfg);
    write_config_header(hist, cfg);
    wc << "group,update,rel_change\n";
    hist << "group,kind,bin_low,bin_high,count\n";

    auto prev = group_values(first);
    for (std::size_t i = 1; i < files.size(); ++i) {
        Checkpoint ck = Checkpoint::load(files[i].string());
        auto curr = group_values(ck);
        for (const auto& [group, vals] : curr)
            wc << group << ',' << ck.update_counter << ','
               << fmt_double(relative_weight_change(prev.at(group), vals)) << '\n';
        prev = std::move(curr);
    }

    Checkpoint last = Checkpoint::load(files.back().string());
    for (bool grads : {false, true}) {
        for (const auto& [group, vals] : group_values(last, grads)) {
            if (vals.empty()) continue;
            Histogram h = weight_histogram(vals, bins);
            for (std::size_t b = 0; b < h.counts.size(); ++b)
                hist << group << ',' << (grads ? "grad" : "weight") << ','
                     << fmt_double(h.bin_low(b)) << ',' << fmt_double(h.bin_high(b)) << ','
                     << h.counts[b] << '\n';
        }
    }
    return kExitOk;
}

int cmd_synth(const std::string& task, std::size_t n, std::size_t vocab_size, std::uint64_t seed,
              const std::string& out_dir) {
    auto corpus = synth_corpus(task, n, vocab_size, seed);
    fs::create_directories(out_dir);
    // 80/10/10 split
    std::size_t n_train = n * 8 / 10, n_val = n / 10;
    std::vector<RawExample> train(corpus.begin(), corpus.begin() + n_train);
    std::vector<RawExample> val(corpus.begin() + n_train, corpus.begin() + n_train + n_val);
    std::vector<RawExample> test(corpus.begin() + n_train + n_val, corpus.end());
    save_corpus(train, out_dir + "/train.jsonl");
    save_corpus(val, out_dir + "/val.jsonl");
    save_corpus(test, out_dir + "/test.jsonl");
    std::cout << "wrote " << train.size() << "/" << val.size() << "/" << test.size()
              << " examples to " << out_dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical encoder-decoder summarization lab"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Train a model from a config file");
    std::string config_path;
    std::vector<std::string> overrides;
    train->add_option("--config", config_path, "Flat key=value config file");
    train->add_option("--set", overrides, "Override config key, key=value (repeatable)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Perplexity + ROUGE on a corpus split");
    std::string ckpt, corpus, vocab_path, out_path;
    bool with_ci = false;
    evaluate->add_option("--checkpoint", ckpt)->required();
    evaluate->add_option("--corpus", corpus)->required();
    evaluate->add_option("--vocab", vocab_path, "Defaults to vocab.tsv next to the checkpoint");
    evaluate->add_option("--out", out_path, "CSV output path");
    evaluate->add_flag("--bootstrap-ci", with_ci, "Report seeded bootstrap 95% CI for ROUGE-1");

    // decode
    auto* decode = app.add_subcommand("decode", "Beam-search summaries, one per input line");
    std::string dec_ckpt, dec_in, dec_out, dec_vocab;
    std::size_t beam = 4, max_tokens = 120;
    decode->add_option("--checkpoint", dec_ckpt)->required();
    decode->add_option("--input", dec_in)->required();
    decode->add_option("--output", dec_out)->required();
    decode->add_option("--vocab", dec_vocab);
    decode->add_option("--beam", beam, "Beam size (default 4)");
    decode->add_option("--max-tokens", max_tokens, "Generation cap (default 120)");

    // diagnose
    auto* diagnose = app.add_subcommand("diagnose", "Weight-change series and histograms");
    std::string run_dir, diag_out;
    std::size_t bins = 101;
    diagnose->add_option("--run-dir", run_dir)->required();
    diagnose->add_option("--out", diag_out, "Defaults to the run directory");
    diagnose->add_option("--bins", bins, "Histogram bins (default 101)");

    // synth-data
    auto* synth = app.add_subcommand("synth-data", "Generate a synthetic corpus");
    std::string task = "lead1", synth_out;
    std::size_t n_examples = 1000, synth_vocab = 500;
    std::uint64_t synth_seed = 1;
    synth->add_option("--task", task, "lead1 | keyword-copy");
    synth->add_option("--n", n_examples);
    synth->add_option("--vocab", synth_vocab, "Filler vocabulary scale");
    synth->add_option("--seed", synth_seed);
    synth->add_option("--out", synth_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) return cmd_train(config_path, overrides);
        if (*evaluate) return cmd_evaluate(ckpt, corpus, vocab_path, out_path, with_ci);
        if (*decode) return cmd_decode(dec_ckpt, dec_in, dec_out, dec_vocab, beam, max_tokens);
        if (*diagnose) return cmd_diagnose(run_dir, diag_out, bins);
        if (*synth) return cmd_synth(task, n_examples, synth_vocab, synth_seed, synth_out);
    } catch (const CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return kExitCheckpoint;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ContractError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}
