#include "hredsum/encoder.hpp"

#include <cmath>

namespace hredsum {

EncoderVariant encoder_variant_from_string(const std::string& s) {
    if (s == "trained") return EncoderVariant::Trained;
    if (s == "random") return EncoderVariant::RandomUniform;
    if (s == "identity") return EncoderVariant::Identity;
    if (s == "esn") return EncoderVariant::EchoState;
    throw ContractError("unknown encoder variant: " + s);
}

std::string to_string(EncoderVariant v) {
    switch (v) {
        case EncoderVariant::Trained: return "trained";
        case EncoderVariant::RandomUniform: return "random";
        case EncoderVariant::Identity: return "identity";
        case EncoderVariant::EchoState: return "esn";
    }
    return "?";
}

namespace {

// largest |eigenvalue| by power iteration; deterministic start vector
double spectral_radius(const std::vector<double>& m, std::size_t d) {
    std::vector<double> v(d, 1.0), w(d);
    double lambda = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += m[i * d + j] * v[j];
            w[i] = s;
        }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / norm;
        lambda = norm;
    }
    return lambda;
}

TensorPtr make_reservoir(ParameterRegistry& reg, const std::string& name, std::size_t rows,
                         std::size_t cols, std::uint64_t seed, double spectral_target) {
    Rng rng = Rng::for_name(seed, name);
    std::vector<double> v(rows * cols);
    for (double& x : v) x = rng.normal();
    if (spectral_target > 0.0 && rows == cols) {
        double rho = spectral_radius(v, rows);
        if (rho > 0.0)
            for (double& x : v) x *= spectral_target / rho;
    }
    return reg.add(name, {rows, cols}, std::move(v), /*trainable=*/false);
}

}  // namespace

HierEncoder HierEncoder::create(ParameterRegistry& reg, const EncoderConfig& cfg) {
    HierEncoder e;
    e.cfg_ = cfg;
    const bool trainable = cfg.kind == EncoderVariant::Trained;
    LstmInit init;
    switch (cfg.kind) {
        case EncoderVariant::Trained: init = LstmInit::Uniform; break;
        case EncoderVariant::RandomUniform: init = LstmInit::RandomAll; break;
        case EncoderVariant::Identity: init = LstmInit::Identity; break;
        case EncoderVariant::EchoState: init = LstmInit::RandomAll; break;
    }

    const std::size_t d = cfg.hidden_dim;
    e.sent_fwd_ = LstmParams::create(reg, "enc_sent/fwd", cfg.input_dim, d, trainable, init,
                                     cfg.seed);
    e.sent_bwd_ = LstmParams::create(reg, "enc_sent/bwd", cfg.input_dim, d, trainable, init,
                                     cfg.seed);

    if (cfg.kind == EncoderVariant::EchoState) {
        e.use_esn_ = true;
        e.esn_.Win_fwd = make_reservoir(reg, "enc_doc/esn_fwd/W_in", d, 2 * d, cfg.seed, 0.0);
        e.esn_.Wrec_fwd = make_reservoir(reg, "enc_doc/esn_fwd/W_rec", d, d, cfg.seed,
                                         cfg.esn_spectral_radius);
        e.esn_.Win_bwd = make_reservoir(reg, "enc_doc/esn_bwd/W_in", d, 2 * d, cfg.seed, 0.0);
        e.esn_.Wrec_bwd = make_reservoir(reg, "enc_doc/esn_bwd/W_rec", d, d, cfg.seed,
                                         cfg.esn_spectral_radius);
    } else {
        e.doc_fwd_ = LstmParams::create(reg, "enc_doc/fwd", 2 * d, d, trainable, init, cfg.seed);
        e.doc_bwd_ = LstmParams::create(reg, "enc_doc/bwd", 2 * d, d, trainable, init, cfg.seed);
    }
    return e;
}

std::pair<std::vector<TensorPtr>, TensorPtr> HierEncoder::encode_sentence(
    const std::vector<TensorPtr>& xs) const {
    if (xs.empty()) throw ContractError("encode_sentence: empty sentence");
    BiLstmOut out = bilstm(sent_fwd_, sent_bwd_, xs);
    return {out.states, out.final};
}

std::pair<std::vector<TensorPtr>, TensorPtr> HierEncoder::encode_document(
    const std::vector<TensorPtr>& sentence_encodings) const {
    if (sentence_encodings.empty()) throw ContractError("encode_document: empty document");
    if (use_esn_) return esn_run(esn_, sentence_encodings);
    BiLstmOut out = bilstm(doc_fwd_, doc_bwd_, sentence_encodings);
    return {out.states, out.final};
}

DocumentEncoding HierEncoder::encode(const std::vector<std::vector<TensorPtr>>& sentences) const {
    if (sentences.empty()) throw ContractError("encode: empty document");
    DocumentEncoding enc;
    std::vector<TensorPtr> word_rows;
    std::vector<TensorPtr> sent_encodings;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        auto [states, h_s] = encode_sentence(sentences[s]);
        for (auto& st : states) {
            word_rows.push_back(st);
            enc.sentence_of_token.push_back(s);
        }
        sent_encodings.push_back(h_s);
    }
    auto [doc_states, final_state] = encode_document(sent_encodings);
    enc.word_states = stack_rows(word_rows);
    enc.sentence_states = stack_rows(doc_states);
    enc.final_state = final_state;
    return enc;
}

std::pair<std::vector<TensorPtr>, TensorPtr> esn_run(const EsnReservoir& r,
                                                     const std::vector<TensorPtr>& inputs) {
    if (inputs.empty()) throw ContractError("esn_run: empty input");
    const std::size_t T = inputs.size();
    const std::size_t d = r.Win_fwd->rows();

    std::vector<TensorPtr> hf(T), hb(T);
    TensorPtr h = Tensor::zeros({d});
    for (std::size_t t = 0; t < T; ++t) {
        h = tanh_t(add(matvec(r.Win_fwd, inputs[t]), matvec(r.Wrec_fwd, h)));
        hf[t] = h;
    }
    TensorPtr fwd_final = h;
    h = Tensor::zeros({d});
    for (std::size_t t = T; t-- > 0;) {
        h = tanh_t(add(matvec(r.Win_bwd, inputs[t]), matvec(r.Wrec_bwd, h)));
        hb[t] = h;
    }
    TensorPtr bwd_final = h;

    std::vector<TensorPtr> states(T);
    for (std::size_t t = 0; t < T; ++t) states[t] = concat(hf[t], hb[t]);
    return {states, concat(fwd_final, bwd_final)};
}

std::vector<std::string> encoder_recurrence_param_names(const ParameterRegistry& reg) {
    std::vector<std::string> names;
    for (const auto& e : reg.entries())
        if (e.name.rfind("enc_sent/", 0) == 0 || e.name.rfind("enc_doc/", 0) == 0)
            names.push_back(e.name);
    return names;
}

}  // namespace hredsum
