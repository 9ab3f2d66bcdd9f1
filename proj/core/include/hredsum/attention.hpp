#pragma once

#include <cstdint>
#include <vector>

#include "hredsum/nn.hpp"

namespace hredsum {

// Additive scoring parameters for word-level (beta) and sentence-level
// (gamma) attention. Trainable in every encoder variant.
struct AttentionParams {
    std::size_t attn_dim = 0;
    // word level: e_k = v^T tanh(Wh*word_state_k + Ws*dec_state + w_cov*coverage_k + b)
    TensorPtr Wh_word;   // [a × 2d]
    TensorPtr Ws_word;   // [a × dec_d]
    TensorPtr w_cov;     // [a]
    TensorPtr b_word;    // [a]
    TensorPtr v_word;    // [a]
    // sentence level: same form, no coverage feature
    TensorPtr Wh_sent;   // [a × 2d]
    TensorPtr Ws_sent;   // [a × dec_d]
    TensorPtr b_sent;    // [a]
    TensorPtr v_sent;    // [a]

    static AttentionParams create(ParameterRegistry& reg, std::size_t enc_state_dim,
                                  std::size_t dec_dim, std::size_t attn_dim, std::uint64_t seed);
};

// Step-invariant projections, computed once per document and reused across
// decode steps (the tape treats reuse as an ordinary DAG fan-out).
struct AttentionCache {
    TensorPtr word_proj;  // [N_d × a] = word_states · Wh_word^T
    TensorPtr sent_proj;  // [M × a]
};

AttentionCache attention_cache(const AttentionParams& p, const TensorPtr& word_states,
                               const TensorPtr& sentence_states);

// beta over document tokens; mask marks real (unmasked) tokens.
TensorPtr word_attention(const AttentionParams& p, const AttentionCache& cache,
                         const TensorPtr& dec_state, const TensorPtr& coverage,
                         const std::vector<std::uint8_t>* token_mask = nullptr);

// gamma over sentences.
TensorPtr sentence_attention(const AttentionParams& p, const AttentionCache& cache,
                             const TensorPtr& dec_state);

// alpha_k = beta_k * gamma_{s(k)} / sum_l beta_l * gamma_{s(l)}
// Masked tokens contribute nothing to numerator or denominator.
TensorPtr combine_attention(const TensorPtr& beta, const TensorPtr& gamma,
                            const std::vector<std::size_t>& sentence_of_token,
                            const std::vector<std::uint8_t>* token_mask = nullptr);

// c = sum_k alpha_k * word_state_k
TensorPtr context_vector(const TensorPtr& alpha, const TensorPtr& word_states);

// coverage' = coverage + alpha
TensorPtr update_coverage(const TensorPtr& coverage, const TensorPtr& alpha);

}  // namespace hredsum
