#include "hredsum/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hredsum/rng.hpp"

namespace hredsum {

double perplexity(const SummModel& model, const std::vector<Example>& dataset) {
    if (dataset.empty()) throw ContractError("perplexity: empty dataset");
    double total = 0.0;
    std::size_t tokens = 0;
    for (const auto& ex : dataset) {
        auto [nll, count] = model.example_nll(ex);
        total += nll;
        tokens += count;
    }
    if (tokens == 0) throw ContractError("perplexity: no target tokens");
    return std::exp(total / static_cast<double>(tokens));
}

namespace {

struct Hypothesis {
    std::vector<int> tokens;  // emitted ids, no START
    double logp = 0.0;
    LstmState state;
    TensorPtr coverage;
    bool done = false;

    double score() const {
        return tokens.empty() ? logp : logp / static_cast<double>(tokens.size());
    }
};

bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.score() != b.score()) return a.score() > b.score();
    return a.tokens < b.tokens;  // deterministic tie break
}

}  // namespace

std::vector<int> beam_search(const SummModel& model, const Example& ex, std::size_t beam,
                             std::size_t max_tokens) {
    if (ex.sentences.empty()) throw ContractError("beam_search: empty document");
    if (beam == 0) throw ContractError("beam_search: beam must be positive");
    NoGradGuard ng;

    SummModel::EncodedDoc doc = model.encode(ex);
    Hypothesis init;
    init.state = model.initial_state(doc);
    init.coverage = model.initial_coverage(ex);

    std::vector<Hypothesis> live{init};
    std::vector<Hypothesis> retired;

    for (std::size_t t = 0; t < max_tokens && !live.empty(); ++t) {
        std::vector<Hypothesis> candidates;
        for (const auto& hyp : live) {
            int prev = hyp.tokens.empty() ? kStart : hyp.tokens.back();
            DecoderStepOut out = model.step(doc, ex, prev, hyp.state, hyp.coverage);
            // top (beam+1) next tokens; +1 covers the case where END is among them
            std::vector<int> order(out.dist->size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
            std::size_t k = std::min<std::size_t>(beam + 1, order.size());
            std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
                double pa = out.dist->values[a], pb = out.dist->values[b];
                if (pa != pb) return pa > pb;
                return a < b;
            });
            for (std::size_t i = 0; i < k; ++i) {
                int tok = order[i];
                if (tok == kPad || tok == kStart) continue;
                Hypothesis next = hyp;
                next.logp += std::log(std::max(out.dist->values[tok], kLogFloor));
                next.state = out.state;
                next.coverage = out.coverage;
                if (tok == kEnd) {
                    next.done = true;
                    retired.push_back(std::move(next));
                } else {
                    next.tokens.push_back(tok);
                    candidates.push_back(std::move(next));
                }
            }
        }
        std::sort(candidates.begin(), candidates.end(), better);
        if (candidates.size() > beam) candidates.resize(beam);
        live = std::move(candidates);
        // a full set of retirements alone is not enough to stop: low-probability
        // ENDs retire junk early, and the live front-runner must get the chance
        // to finish
        if (retired.size() >= beam) {
            const Hypothesis* br = &retired.front();
            for (const auto& h : retired)
                if (better(h, *br)) br = &h;
            if (live.empty() || !better(live.front(), *br)) break;
        }
    }

    const Hypothesis* best = nullptr;
    for (const auto& h : retired)
        if (!best || better(h, *best)) best = &h;
    if (!best)
        for (const auto& h : live)
            if (!best || better(h, *best)) best = &h;
    if (!best) return {};
    return best->tokens;
}

namespace {

std::map<std::vector<std::string>, std::size_t> ngram_counts(
    const std::vector<std::string>& toks, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> counts;
    if (toks.size() < n) return counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i)
        ++counts[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)];
    return counts;
}

PRF prf_from_counts(double overlap, double hyp_total, double ref_total) {
    PRF s;
    s.precision = hyp_total > 0 ? overlap / hyp_total : 0.0;
    s.recall = ref_total > 0 ? overlap / ref_total : 0.0;
    s.f1 = (s.precision + s.recall) > 0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

}  // namespace

PRF rouge_n(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis,
            std::size_t n) {
    if (n == 0) throw ContractError("rouge_n: n must be >= 1");
    auto ref = ngram_counts(reference, n);
    auto hyp = ngram_counts(hypothesis, n);
    std::size_t overlap = 0, ref_total = 0, hyp_total = 0;
    for (const auto& [g, c] : ref) ref_total += c;
    for (const auto& [g, c] : hyp) {
        hyp_total += c;
        auto it = ref.find(g);
        if (it != ref.end()) overlap += std::min(c, it->second);  // clipped
    }
    return prf_from_counts(static_cast<double>(overlap), static_cast<double>(hyp_total),
                           static_cast<double>(ref_total));
}

PRF rouge_l(const std::vector<std::string>& reference,
            const std::vector<std::string>& hypothesis) {
    const std::size_t nr = reference.size(), nh = hypothesis.size();
    if (nr == 0 || nh == 0) return {};
    std::vector<std::size_t> prev(nh + 1, 0), curr(nh + 1, 0);
    for (std::size_t i = 1; i <= nr; ++i) {
        for (std::size_t j = 1; j <= nh; ++j)
            curr[j] = reference[i - 1] == hypothesis[j - 1]
                          ? prev[j - 1] + 1
                          : std::max(prev[j], curr[j - 1]);
        std::swap(prev, curr);
    }
    double lcs = static_cast<double>(prev[nh]);
    return prf_from_counts(lcs, static_cast<double>(nh), static_cast<double>(nr));
}

RougeScore rouge_all(const std::vector<std::string>& reference,
                     const std::vector<std::string>& hypothesis) {
    return {rouge_n(reference, hypothesis, 1), rouge_n(reference, hypothesis, 2),
            rouge_l(reference, hypothesis)};
}

RougeScore rouge_mean(const std::vector<RougeScore>& per_example) {
    RougeScore m;
    if (per_example.empty()) return m;
    auto acc = [&](PRF RougeScore::* field) {
        PRF s;
        for (const auto& r : per_example) {
            s.precision += (r.*field).precision;
            s.recall += (r.*field).recall;
            s.f1 += (r.*field).f1;
        }
        double n = static_cast<double>(per_example.size());
        return PRF{s.precision / n, s.recall / n, s.f1 / n};
    };
    m.rouge1 = acc(&RougeScore::rouge1);
    m.rouge2 = acc(&RougeScore::rouge2);
    m.rougeL = acc(&RougeScore::rougeL);
    return m;
}

BootstrapCI bootstrap_ci(const std::vector<double>& values, std::size_t resamples,
                         std::uint64_t seed) {
    if (values.empty()) throw ContractError("bootstrap_ci: empty sample");
    Rng rng = Rng::for_name(seed, "bootstrap");
    std::vector<double> means(resamples);
    for (std::size_t r = 0; r < resamples; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) s += values[rng.below(values.size())];
        means[r] = s / static_cast<double>(values.size());
    }
    std::sort(means.begin(), means.end());
    auto idx = [&](double q) {
        return std::min<std::size_t>(static_cast<std::size_t>(q * resamples), resamples - 1);
    };
    return {means[idx(0.025)], means[idx(0.975)]};
}

}  // namespace hredsum
