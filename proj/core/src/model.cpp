#include "hredsum/model.hpp"

#include <cmath>

namespace hredsum {

namespace {

HierEncoder make_encoder(ParameterRegistry& reg, const RunConfig& cfg) {
    EncoderConfig ec;
    ec.kind = cfg.variant;
    ec.input_dim = cfg.emb_dim;
    ec.hidden_dim = cfg.enc_hidden;
    ec.seed = cfg.seed;
    ec.esn_spectral_radius = cfg.esn_spectral_radius;
    return HierEncoder::create(reg, ec);
}

}  // namespace

SummModel::SummModel(const RunConfig& cfg)
    : cfg_(cfg),
      embedding_(EmbeddingTable::create(registry_, "embedding", cfg.vocab_size, cfg.emb_dim,
                                        cfg.seed)),
      encoder_(make_encoder(registry_, cfg)),
      attention_(AttentionParams::create(registry_, 2 * cfg.enc_hidden, cfg.dec_hidden,
                                         cfg.attention_dim(), cfg.seed)),
      decoder_(DecoderParams::create(registry_, cfg.emb_dim, cfg.dec_hidden, 2 * cfg.enc_hidden,
                                     cfg.vocab_size, cfg.seed)) {}

TensorPtr SummModel::embed_extended(int id) const {
    if (id < 0) throw ContractError("embed_extended: negative id");
    if (static_cast<std::size_t>(id) >= cfg_.vocab_size) id = kUnk;
    return embedding_.embed_one(id);
}

SummModel::EncodedDoc SummModel::encode(const Example& ex) const {
    if (ex.sentences.empty()) throw ContractError("encode: example without sentences");
    std::vector<std::vector<TensorPtr>> embedded;
    embedded.reserve(ex.sentences.size());
    for (const auto& sent : ex.sentences) {
        if (sent.empty()) throw ContractError("encode: empty sentence");
        std::vector<TensorPtr> rows;
        rows.reserve(sent.size());
        TensorPtr mat = embedding_.embed(sent);
        for (std::size_t i = 0; i < sent.size(); ++i) rows.push_back(row(mat, i));
        embedded.push_back(std::move(rows));
    }
    EncodedDoc doc;
    doc.enc = encoder_.encode(embedded);
    doc.cache = attention_cache(attention_, doc.enc.word_states, doc.enc.sentence_states);
    return doc;
}

LstmState SummModel::initial_state(const EncodedDoc& doc) const {
    return {tanh_t(decoder_.bridge_h.apply(doc.enc.final_state)),
            tanh_t(decoder_.bridge_c.apply(doc.enc.final_state))};
}

TensorPtr SummModel::initial_coverage(const Example& ex) const {
    return Tensor::zeros({ex.source_len()});
}

DecoderStepOut SummModel::step(const EncodedDoc& doc, const Example& ex, int prev_id,
                               const LstmState& state, const TensorPtr& coverage) const {
    return decoder_step(decoder_, attention_, doc.cache, embed_extended(prev_id), state, doc.enc,
                        coverage, ex.src_extended, ex.ext.size(), cfg_.force_pgen_one);
}

TensorPtr SummModel::example_loss(const Example& ex) const {
    EncodedDoc doc = encode(ex);
    LstmState state = initial_state(doc);
    TensorPtr coverage = initial_coverage(ex);

    const std::size_t steps = ex.target.size() - 1;  // predict target[1..]
    std::vector<TensorPtr> dists;
    dists.reserve(steps);
    std::vector<int> targets(ex.target.begin() + 1, ex.target.end());
    std::vector<std::uint8_t> mask(steps, 1);

    TensorPtr cov_total;
    for (std::size_t t = 0; t < steps; ++t) {
        DecoderStepOut out = step(doc, ex, ex.target[t], state, coverage);  // teacher forcing
        dists.push_back(out.dist);
        if (cfg_.coverage_enabled) {
            TensorPtr cl = coverage_loss(out.alpha, coverage);
            cov_total = cov_total ? add(cov_total, cl) : cl;
        }
        state = out.state;
        coverage = out.coverage;
    }
    TensorPtr loss = nll_loss(dists, targets, mask);
    if (cfg_.coverage_enabled && cov_total)
        loss = add(loss, scale(cov_total, cfg_.coverage_lambda / static_cast<double>(steps)));
    return loss;
}

std::pair<double, std::size_t> SummModel::example_nll(const Example& ex) const {
    NoGradGuard ng;
    EncodedDoc doc = encode(ex);
    LstmState state = initial_state(doc);
    TensorPtr coverage = initial_coverage(ex);
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t + 1 < ex.target.size(); ++t) {
        DecoderStepOut out = step(doc, ex, ex.target[t], state, coverage);
        int y = ex.target[t + 1];
        if (y < 0 || static_cast<std::size_t>(y) >= out.dist->size())
            throw ContractError("example_nll: target id outside extended vocab");
        total -= std::log(std::max(out.dist->values[y], kLogFloor));
        ++count;
        state = out.state;
        coverage = out.coverage;
    }
    return {total, count};
}

}  // namespace hredsum
