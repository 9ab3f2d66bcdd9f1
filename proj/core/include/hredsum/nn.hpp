#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hredsum/rng.hpp"
#include "hredsum/tensor.hpp"

namespace hredsum {

// Named parameter tensors, each trainable or frozen. Frozen parameters are
// created with requires_grad=false, so no tape is recorded behind them and
// they never receive a gradient buffer (the gradient fence starts here).
class ParameterRegistry {
  public:
    struct Entry {
        std::string name;
        TensorPtr tensor;
        bool trainable;
    };

    TensorPtr add(const std::string& name, std::vector<std::size_t> shape,
                  std::vector<double> values, bool trainable);
    TensorPtr get(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }
    bool is_trainable(const std::string& name) const;

    const std::vector<Entry>& entries() const { return entries_; }
    void zero_grads();

  private:
    std::vector<Entry> entries_;  // insertion order, deterministic
    std::unordered_map<std::string, std::size_t> index_;
};

// Token embeddings; always trainable, shared between encoder input and
// decoder input (tied embeddings).
struct EmbeddingTable {
    std::size_t vocab_size = 0;
    std::size_t dim = 0;
    TensorPtr weights;  // [vocab_size × dim]

    static EmbeddingTable create(ParameterRegistry& reg, const std::string& name,
                                 std::size_t vocab_size, std::size_t dim, std::uint64_t seed);

    // Row-stacked embedding vectors, [len × dim]. Gradient of a lookup
    // accumulates only into the looked-up rows. Out-of-range id is a
    // contract error (OOV must already be mapped to UNK).
    TensorPtr embed(const std::vector<int>& ids) const;
    TensorPtr embed_one(int id) const;
};

enum class LstmInit {
    Uniform,     // all weights ~ U(-1/sqrt(d), 1/sqrt(d)), biases 0 except forget bias 1
    RandomAll,   // weights AND biases ~ U(-1/sqrt(d), 1/sqrt(d))
    Identity,    // ones on the main diagonal, zeros elsewhere, biases 0
};

// One LSTM cell's parameters. Gate order i, f, g, o.
// Parameter count = 4*(input_dim*d + d*d + d).
struct LstmParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    TensorPtr Wi, Wf, Wg, Wo;  // [d × input_dim]
    TensorPtr Ui, Uf, Ug, Uo;  // [d × d]
    TensorPtr bi, bf, bg, bo;  // [d]

    static LstmParams create(ParameterRegistry& reg, const std::string& prefix,
                             std::size_t input_dim, std::size_t hidden_dim, bool trainable,
                             LstmInit init, std::uint64_t seed);
    std::size_t param_count() const {
        return 4 * (input_dim * hidden_dim + hidden_dim * hidden_dim + hidden_dim);
    }
};

struct LstmState {
    TensorPtr h;
    TensorPtr c;
};

// i=sigma(Wi x + Ui h + bi), f=sigma(...), g=tanh(...), o=sigma(...);
// c' = f*c + i*g ; h' = o * tanh(c')
LstmState lstm_cell(const LstmParams& p, const TensorPtr& x, const LstmState& s);

LstmState lstm_zero_state(std::size_t d);

struct BiLstmOut {
    std::vector<TensorPtr> states;  // per step, concat(h_fwd[t], h_bwd[t]), each [2d]
    TensorPtr final;                // concat(h_fwd[T], h_bwd[1]) over the unpadded length
};

// xs holds the unpadded steps only; empty input is a contract error.
BiLstmOut bilstm(const LstmParams& fwd, const LstmParams& bwd, const std::vector<TensorPtr>& xs);

// Linear layer y = W x + b.
struct Linear {
    TensorPtr W;  // [out × in]
    TensorPtr b;  // [out]

    static Linear create(ParameterRegistry& reg, const std::string& prefix, std::size_t in,
                         std::size_t out, std::uint64_t seed);
    TensorPtr apply(const TensorPtr& x) const { return add(matvec(W, x), b); }
};

// Default trainable init: U(-1/sqrt(fan), 1/sqrt(fan)).
std::vector<double> uniform_init(std::size_t n, double bound, Rng& rng);

}  // namespace hredsum
