#pragma once

#include <cstdint>
#include <vector>

#include "hredsum/attention.hpp"
#include "hredsum/encoder.hpp"
#include "hredsum/nn.hpp"

namespace hredsum {

// Per-example extended vocabulary: base ids [0, V) plus one fresh id per
// distinct source OOV, assigned V, V+1, ... in first-occurrence order.
struct ExtendedVocab {
    std::size_t base_size = 0;
    std::vector<std::string> oovs;  // oovs[i] has extended id base_size + i

    std::size_t size() const { return base_size + oovs.size(); }
};

struct DecoderParams {
    LstmParams cell;       // input: prev token embedding, hidden: dec_d
    Linear bridge_h;       // [dec_d × 2d] encoder final -> initial h
    Linear bridge_c;
    // p_gen = sigmoid(w_ctx·c_t + w_state·s_t + w_inp·x_t + b)
    TensorPtr pgen_w_ctx;    // [2d]
    TensorPtr pgen_w_state;  // [dec_d]
    TensorPtr pgen_w_inp;    // [emb]
    TensorPtr pgen_b;        // [1]
    Linear out;              // [V × (dec_d + 2d)] generation logits

    static DecoderParams create(ParameterRegistry& reg, std::size_t emb_dim, std::size_t dec_dim,
                                std::size_t enc_state_dim, std::size_t vocab_size,
                                std::uint64_t seed);
};

struct DecoderStepOut {
    LstmState state;
    TensorPtr context;     // [2d]
    TensorPtr p_gen;       // scalar in (0,1)
    TensorPtr dist;        // final distribution over the extended vocab
    TensorPtr alpha;       // combined attention, for coverage loss
    TensorPtr coverage;    // updated coverage (input coverage + alpha)
};

// One teacher-forced (or search) step: LSTM cell, hierarchical attention,
// context, p_gen, final extended-vocab distribution.
// force_pgen_one disables the copy path (diagnostic knob).
DecoderStepOut decoder_step(const DecoderParams& dec, const AttentionParams& attn,
                            const AttentionCache& cache, const TensorPtr& y_prev_emb,
                            const LstmState& state, const DocumentEncoding& enc,
                            const TensorPtr& coverage,
                            const std::vector<int>& src_extended_ids,
                            std::size_t extended_size, bool force_pgen_one = false);

TensorPtr compute_pgen(const DecoderParams& p, const TensorPtr& context, const TensorPtr& state_h,
                       const TensorPtr& input_emb);

// P(w) = p_gen * P_vocab(w) + (1 - p_gen) * sum_{k: src_k = w} alpha_k
TensorPtr final_distribution(const TensorPtr& p_gen, const TensorPtr& vocab_dist,
                             const TensorPtr& alpha, const std::vector<int>& src_extended_ids,
                             std::size_t extended_size);

// -(1/T) sum_t log P_t(y_t) over unmasked steps; log floored at ln(1e-12).
TensorPtr nll_loss(const std::vector<TensorPtr>& step_dists, const std::vector<int>& target_ids,
                   const std::vector<std::uint8_t>& step_mask);

// sum_k min(alpha_k, coverage_k); coverage here is the pre-update value.
TensorPtr coverage_loss(const TensorPtr& alpha, const TensorPtr& coverage);

inline constexpr double kLogFloor = 1e-12;

}  // namespace hredsum
