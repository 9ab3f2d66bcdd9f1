#include "hredsum/decoder.hpp"

#include <cmath>

namespace hredsum {

DecoderParams DecoderParams::create(ParameterRegistry& reg, std::size_t emb_dim,
                                    std::size_t dec_dim, std::size_t enc_state_dim,
                                    std::size_t vocab_size, std::uint64_t seed) {
    DecoderParams p;
    p.cell = LstmParams::create(reg, "decoder/cell", emb_dim, dec_dim, /*trainable=*/true,
                                LstmInit::Uniform, seed);
    p.bridge_h = Linear::create(reg, "decoder/bridge_h", enc_state_dim, dec_dim, seed);
    p.bridge_c = Linear::create(reg, "decoder/bridge_c", enc_state_dim, dec_dim, seed);
    auto mk_vec = [&](const std::string& name, std::size_t n) {
        Rng rng = Rng::for_name(seed, "decoder/" + name);
        double bound = 1.0 / std::sqrt(static_cast<double>(n));
        return reg.add("decoder/" + name, {n}, uniform_init(n, bound, rng), true);
    };
    p.pgen_w_ctx = mk_vec("pgen/w_ctx", enc_state_dim);
    p.pgen_w_state = mk_vec("pgen/w_state", dec_dim);
    p.pgen_w_inp = mk_vec("pgen/w_inp", emb_dim);
    p.pgen_b = reg.add("decoder/pgen/b", {1}, {0.0}, true);
    p.out = Linear::create(reg, "decoder/out", dec_dim + enc_state_dim, vocab_size, seed);
    return p;
}

TensorPtr compute_pgen(const DecoderParams& p, const TensorPtr& context, const TensorPtr& state_h,
                       const TensorPtr& input_emb) {
    TensorPtr z = add(add(dot(p.pgen_w_ctx, context), dot(p.pgen_w_state, state_h)),
                      add(dot(p.pgen_w_inp, input_emb), p.pgen_b));
    return sigmoid(z);
}

TensorPtr final_distribution(const TensorPtr& p_gen, const TensorPtr& vocab_dist,
                             const TensorPtr& alpha, const std::vector<int>& src_extended_ids,
                             std::size_t extended_size) {
    if (alpha->size() != src_extended_ids.size())
        throw ContractError("final_distribution: alpha length " + std::to_string(alpha->size()) +
                            " vs " + std::to_string(src_extended_ids.size()) + " source ids");
    if (extended_size < vocab_dist->size())
        throw ContractError("final_distribution: extended size smaller than base vocab");
    TensorPtr gen_part = mul_scalar(pad_tail(vocab_dist, extended_size), p_gen);
    TensorPtr one_minus = sub(Tensor::scalar_of(1.0), p_gen);
    TensorPtr copy_dist = scatter_add(alpha, src_extended_ids, extended_size);
    TensorPtr copy_part = mul_scalar(copy_dist, one_minus);
    return add(gen_part, copy_part);
}

DecoderStepOut decoder_step(const DecoderParams& dec, const AttentionParams& attn,
                            const AttentionCache& cache, const TensorPtr& y_prev_emb,
                            const LstmState& state, const DocumentEncoding& enc,
                            const TensorPtr& coverage,
                            const std::vector<int>& src_extended_ids,
                            std::size_t extended_size, bool force_pgen_one) {
    DecoderStepOut out;
    out.state = lstm_cell(dec.cell, y_prev_emb, state);

    TensorPtr beta = word_attention(attn, cache, out.state.h, coverage);
    TensorPtr gamma = sentence_attention(attn, cache, out.state.h);
    out.alpha = combine_attention(beta, gamma, enc.sentence_of_token);
    out.context = context_vector(out.alpha, enc.word_states);
    out.coverage = update_coverage(coverage, out.alpha);

    TensorPtr vocab_logits = dec.out.apply(concat(out.state.h, out.context));
    TensorPtr vocab_dist = softmax_stable(vocab_logits);

    out.p_gen = force_pgen_one ? Tensor::scalar_of(1.0)
                               : compute_pgen(dec, out.context, out.state.h, y_prev_emb);
    out.dist = final_distribution(out.p_gen, vocab_dist, out.alpha, src_extended_ids,
                                  extended_size);
    return out;
}

TensorPtr nll_loss(const std::vector<TensorPtr>& step_dists, const std::vector<int>& target_ids,
                   const std::vector<std::uint8_t>& step_mask) {
    if (step_dists.size() != target_ids.size() || step_mask.size() != target_ids.size())
        throw ContractError("nll_loss: length mismatch");
    std::size_t valid = 0;
    TensorPtr total = Tensor::scalar_of(0.0);
    for (std::size_t t = 0; t < step_dists.size(); ++t) {
        if (!step_mask[t]) continue;
        if (target_ids[t] < 0 || static_cast<std::size_t>(target_ids[t]) >= step_dists[t]->size())
            throw ContractError("nll_loss: target id " + std::to_string(target_ids[t]) +
                                " outside extended vocab");
        total = add(total, log_floored(pick(step_dists[t], target_ids[t]), kLogFloor));
        ++valid;
    }
    if (valid == 0) throw ContractError("nll_loss: no unmasked steps");
    return scale(total, -1.0 / static_cast<double>(valid));
}

TensorPtr coverage_loss(const TensorPtr& alpha, const TensorPtr& coverage) {
    if (alpha->size() != coverage->size())
        throw ContractError("coverage_loss: length mismatch");
    return sum(min_elem(alpha, coverage));
}

}  // namespace hredsum
