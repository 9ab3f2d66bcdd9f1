#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hredsum/nn.hpp"

namespace hredsum {

enum class EncoderVariant { Trained, RandomUniform, Identity, EchoState };

EncoderVariant encoder_variant_from_string(const std::string& s);  // trained|random|identity|esn
std::string to_string(EncoderVariant v);

struct EncoderConfig {
    EncoderVariant kind = EncoderVariant::Trained;
    std::size_t input_dim = 128;  // embedding dim
    std::size_t hidden_dim = 256;
    std::uint64_t seed = 0;
    // Optional ESN knob: rescale W_rec to this spectral radius. <= 0 disables
    // (default; reservoirs keep their raw N(0,1) draw).
    double esn_spectral_radius = 0.0;
};

struct DocumentEncoding {
    TensorPtr word_states;                     // [N_d × 2d], per-token sentence-encoder states
    TensorPtr sentence_states;                 // [M × 2d], document-encoder states
    std::vector<std::size_t> sentence_of_token;  // token position -> sentence index
    TensorPtr final_state;                     // [2d]
};

// Fixed random reservoir pair for the EchoState document encoder.
struct EsnReservoir {
    TensorPtr Win_fwd, Wrec_fwd;  // [d × 2d], [d × d]
    TensorPtr Win_bwd, Wrec_bwd;
};

// Hierarchical encoder: a shared bidirectional sentence LSTM feeding a
// document-level bidirectional LSTM (or ESN reservoir pair). Non-Trained
// variants register every recurrence parameter frozen; embeddings live
// elsewhere and stay trainable in all variants.
class HierEncoder {
  public:
    static HierEncoder create(ParameterRegistry& reg, const EncoderConfig& cfg);

    // xs: embedded tokens of one sentence, each [input_dim]
    // returns per-token states and the sentence encoding h^(s) = bilstm final
    std::pair<std::vector<TensorPtr>, TensorPtr> encode_sentence(
        const std::vector<TensorPtr>& xs) const;

    // sentence encodings, each [2d] -> document states + final state
    std::pair<std::vector<TensorPtr>, TensorPtr> encode_document(
        const std::vector<TensorPtr>& sentence_encodings) const;

    // full document: embedded sentences -> DocumentEncoding
    DocumentEncoding encode(const std::vector<std::vector<TensorPtr>>& sentences) const;

    const EncoderConfig& config() const { return cfg_; }

  private:
    EncoderConfig cfg_;
    LstmParams sent_fwd_, sent_bwd_;
    LstmParams doc_fwd_, doc_bwd_;  // unused for EchoState
    EsnReservoir esn_;              // only for EchoState
    bool use_esn_ = false;
};

// h_t = tanh(W_in u_t + W_rec h_{t-1}), h_0 = 0, run in both directions;
// per-step state = concat of the two direction states.
std::pair<std::vector<TensorPtr>, TensorPtr> esn_run(const EsnReservoir& r,
                                                     const std::vector<TensorPtr>& inputs);

// Names of every encoder recurrence parameter (the frozen set under
// non-Trained variants); used by diagnostics and the fence tests.
std::vector<std::string> encoder_recurrence_param_names(const ParameterRegistry& reg);

}  // namespace hredsum
