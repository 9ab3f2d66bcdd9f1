#include "hredsum/attention.hpp"

#include <cmath>

namespace hredsum {

AttentionParams AttentionParams::create(ParameterRegistry& reg, std::size_t enc_state_dim,
                                        std::size_t dec_dim, std::size_t attn_dim,
                                        std::uint64_t seed) {
    AttentionParams p;
    p.attn_dim = attn_dim;
    auto mk = [&](const std::string& name, std::vector<std::size_t> shape) {
        std::size_t n = 1;
        for (auto e : shape) n *= e;
        Rng rng = Rng::for_name(seed, "attention/" + name);
        double bound = 1.0 / std::sqrt(static_cast<double>(attn_dim));
        return reg.add("attention/" + name, std::move(shape), uniform_init(n, bound, rng), true);
    };
    p.Wh_word = mk("word/W_h", {attn_dim, enc_state_dim});
    p.Ws_word = mk("word/W_s", {attn_dim, dec_dim});
    p.w_cov = mk("word/w_cov", {attn_dim});
    p.b_word = reg.add("attention/word/b", {attn_dim}, std::vector<double>(attn_dim, 0.0), true);
    p.v_word = mk("word/v", {attn_dim});
    p.Wh_sent = mk("sent/W_h", {attn_dim, enc_state_dim});
    p.Ws_sent = mk("sent/W_s", {attn_dim, dec_dim});
    p.b_sent = reg.add("attention/sent/b", {attn_dim}, std::vector<double>(attn_dim, 0.0), true);
    p.v_sent = mk("sent/v", {attn_dim});
    return p;
}

namespace {

// transpose for matmul(states [N×2d], W^T [2d×a]); W itself is [a×2d]
TensorPtr proj_states(const TensorPtr& states, const TensorPtr& W) {
    // compute states · W^T without materializing the transpose:
    // (W · states^T)^T == states · W^T ; done row by row via vecmat
    std::vector<TensorPtr> rows_out;
    rows_out.reserve(states->rows());
    for (std::size_t i = 0; i < states->rows(); ++i)
        rows_out.push_back(matvec(W, row(states, i)));
    return stack_rows(rows_out);
}

}  // namespace

AttentionCache attention_cache(const AttentionParams& p, const TensorPtr& word_states,
                               const TensorPtr& sentence_states) {
    return {proj_states(word_states, p.Wh_word), proj_states(sentence_states, p.Wh_sent)};
}

TensorPtr word_attention(const AttentionParams& p, const AttentionCache& cache,
                         const TensorPtr& dec_state, const TensorPtr& coverage,
                         const std::vector<std::uint8_t>* token_mask) {
    TensorPtr dec_feat = add(matvec(p.Ws_word, dec_state), p.b_word);  // [a]
    TensorPtr pre = add_rowvec(cache.word_proj, dec_feat);             // [N × a]
    pre = add_scaled_rows(pre, coverage, p.w_cov);
    TensorPtr scores = matvec(tanh_t(pre), p.v_word);
    return softmax_stable(scores, token_mask);
}

TensorPtr sentence_attention(const AttentionParams& p, const AttentionCache& cache,
                             const TensorPtr& dec_state) {
    TensorPtr dec_feat = add(matvec(p.Ws_sent, dec_state), p.b_sent);
    TensorPtr pre = add_rowvec(cache.sent_proj, dec_feat);
    TensorPtr scores = matvec(tanh_t(pre), p.v_sent);
    return softmax_stable(scores);
}

TensorPtr combine_attention(const TensorPtr& beta, const TensorPtr& gamma,
                            const std::vector<std::size_t>& sentence_of_token,
                            const std::vector<std::uint8_t>* token_mask) {
    if (beta->size() != sentence_of_token.size())
        throw ContractError("combine_attention: beta length " + std::to_string(beta->size()) +
                            " vs sentence map " + std::to_string(sentence_of_token.size()));
    for (std::size_t s : sentence_of_token)
        if (s >= gamma->size()) throw ContractError("combine_attention: sentence index out of range");

    TensorPtr gamma_tok = gather_elems(gamma, sentence_of_token);
    TensorPtr numer = mul(beta, gamma_tok);
    if (token_mask) {
        if (token_mask->size() != beta->size())
            throw ContractError("combine_attention: mask length mismatch");
        // zero masked entries so they drop out of numerator and denominator
        std::vector<double> m(beta->size());
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = (*token_mask)[i] ? 1.0 : 0.0;
        numer = mul(numer, Tensor::create({beta->size()}, std::move(m)));
    }
    TensorPtr denom = sum(numer);
    if (denom->scalar() <= 0.0)
        throw DegenerateInputError("combine_attention: zero attention denominator");
    return div_scalar(numer, denom);
}

TensorPtr context_vector(const TensorPtr& alpha, const TensorPtr& word_states) {
    if (word_states->shape.size() != 2 || alpha->size() != word_states->rows())
        throw DimensionError("context_vector: " + shape_str(alpha->shape) + " vs " +
                             shape_str(word_states->shape));
    return vecmat(alpha, word_states);
}

TensorPtr update_coverage(const TensorPtr& coverage, const TensorPtr& alpha) {
    return add(coverage, alpha);
}

}  // namespace hredsum
