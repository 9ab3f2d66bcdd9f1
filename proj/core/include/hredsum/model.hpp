#pragma once

#include <memory>

#include "hredsum/config.hpp"
#include "hredsum/data.hpp"
#include "hredsum/decoder.hpp"

namespace hredsum {

// The complete summarization model: tied embeddings, hierarchical encoder
// (any variant), hierarchical attention, pointer-generator decoder.
class SummModel {
  public:
    explicit SummModel(const RunConfig& cfg);

    ParameterRegistry& registry() { return registry_; }
    const ParameterRegistry& registry() const { return registry_; }
    const RunConfig& config() const { return cfg_; }

    struct EncodedDoc {
        DocumentEncoding enc;
        AttentionCache cache;
    };
    EncodedDoc encode(const Example& ex) const;

    // One decode step from a previous extended-vocab token id. Extended ids
    // map to UNK for the embedding lookup.
    DecoderStepOut step(const EncodedDoc& doc, const Example& ex, int prev_id,
                        const LstmState& state, const TensorPtr& coverage) const;

    LstmState initial_state(const EncodedDoc& doc) const;
    TensorPtr initial_coverage(const Example& ex) const;

    // Teacher-forced loss: NLL + lambda * coverage (when enabled), averaged
    // per valid target token.
    TensorPtr example_loss(const Example& ex) const;

    // Teacher-forced total NLL (floored log) and valid-token count.
    std::pair<double, std::size_t> example_nll(const Example& ex) const;

    std::size_t vocab_size() const { return cfg_.vocab_size; }

  private:
    RunConfig cfg_;
    ParameterRegistry registry_;
    EmbeddingTable embedding_;
    HierEncoder encoder_;
    AttentionParams attention_;
    DecoderParams decoder_;

    TensorPtr embed_extended(int id) const;  // ids >= V lose identity -> UNK
};

}  // namespace hredsum
