#include "hredsum/nn.hpp"

#include <cmath>

namespace hredsum {

TensorPtr ParameterRegistry::add(const std::string& name, std::vector<std::size_t> shape,
                                 std::vector<double> values, bool trainable) {
    if (index_.count(name)) throw ContractError("registry: duplicate parameter " + name);
    auto t = Tensor::create(std::move(shape), std::move(values), trainable);
    index_[name] = entries_.size();
    entries_.push_back({name, t, trainable});
    return t;
}

TensorPtr ParameterRegistry::get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ContractError("registry: unknown parameter " + name);
    return entries_[it->second].tensor;
}

bool ParameterRegistry::is_trainable(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ContractError("registry: unknown parameter " + name);
    return entries_[it->second].trainable;
}

void ParameterRegistry::zero_grads() {
    for (auto& e : entries_) e.tensor->zero_grad();
}

std::vector<double> uniform_init(std::size_t n, double bound, Rng& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-bound, bound);
    return v;
}

EmbeddingTable EmbeddingTable::create(ParameterRegistry& reg, const std::string& name,
                                      std::size_t vocab_size, std::size_t dim,
                                      std::uint64_t seed) {
    EmbeddingTable t;
    t.vocab_size = vocab_size;
    t.dim = dim;
    Rng rng = Rng::for_name(seed, name);
    double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    t.weights = reg.add(name, {vocab_size, dim}, uniform_init(vocab_size * dim, bound, rng),
                        /*trainable=*/true);
    return t;
}

TensorPtr EmbeddingTable::embed(const std::vector<int>& ids) const {
    for (int id : ids)
        if (id < 0 || static_cast<std::size_t>(id) >= vocab_size)
            throw ContractError("embed: id " + std::to_string(id) + " out of vocab " +
                                std::to_string(vocab_size));
    return gather_rows(weights, ids);
}

TensorPtr EmbeddingTable::embed_one(int id) const { return row(embed({id}), 0); }

namespace {

std::vector<double> identity_matrix(std::size_t rows, std::size_t cols) {
    std::vector<double> v(rows * cols, 0.0);
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) v[i * cols + i] = 1.0;
    return v;
}

}  // namespace

LstmParams LstmParams::create(ParameterRegistry& reg, const std::string& prefix,
                              std::size_t input_dim, std::size_t hidden_dim, bool trainable,
                              LstmInit init, std::uint64_t seed) {
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));

    auto mk_mat = [&](const std::string& name, std::size_t r, std::size_t c) {
        Rng rng = Rng::for_name(seed, prefix + "/" + name);
        std::vector<double> v;
        switch (init) {
            case LstmInit::Uniform:
            case LstmInit::RandomAll:
                v = uniform_init(r * c, bound, rng);
                break;
            case LstmInit::Identity:
                v = identity_matrix(r, c);
                break;
        }
        return reg.add(prefix + "/" + name, {r, c}, std::move(v), trainable);
    };
    auto mk_bias = [&](const std::string& name, double trained_fill) {
        Rng rng = Rng::for_name(seed, prefix + "/" + name);
        std::vector<double> v;
        switch (init) {
            case LstmInit::Uniform:
                v.assign(hidden_dim, trained_fill);
                break;
            case LstmInit::RandomAll:
                v = uniform_init(hidden_dim, bound, rng);
                break;
            case LstmInit::Identity:
                v.assign(hidden_dim, 0.0);
                break;
        }
        return reg.add(prefix + "/" + name, {hidden_dim}, std::move(v), trainable);
    };

    p.Wi = mk_mat("W_i", hidden_dim, input_dim);
    p.Wf = mk_mat("W_f", hidden_dim, input_dim);
    p.Wg = mk_mat("W_g", hidden_dim, input_dim);
    p.Wo = mk_mat("W_o", hidden_dim, input_dim);
    p.Ui = mk_mat("U_i", hidden_dim, hidden_dim);
    p.Uf = mk_mat("U_f", hidden_dim, hidden_dim);
    p.Ug = mk_mat("U_g", hidden_dim, hidden_dim);
    p.Uo = mk_mat("U_o", hidden_dim, hidden_dim);
    p.bi = mk_bias("b_i", 0.0);
    p.bf = mk_bias("b_f", 1.0);  // forget gate bias 1 for the trained init
    p.bg = mk_bias("b_g", 0.0);
    p.bo = mk_bias("b_o", 0.0);
    return p;
}

LstmState lstm_zero_state(std::size_t d) {
    return {Tensor::zeros({d}), Tensor::zeros({d})};
}

LstmState lstm_cell(const LstmParams& p, const TensorPtr& x, const LstmState& s) {
    if (x->size() != p.input_dim || s.h->size() != p.hidden_dim || s.c->size() != p.hidden_dim)
        throw DimensionError("lstm_cell: x " + shape_str(x->shape) + ", h " +
                             shape_str(s.h->shape) + " vs dims " + std::to_string(p.input_dim) +
                             "/" + std::to_string(p.hidden_dim));
    auto gate = [&](const TensorPtr& W, const TensorPtr& U, const TensorPtr& b) {
        return add(add(matvec(W, x), matvec(U, s.h)), b);
    };
    TensorPtr i = sigmoid(gate(p.Wi, p.Ui, p.bi));
    TensorPtr f = sigmoid(gate(p.Wf, p.Uf, p.bf));
    TensorPtr g = tanh_t(gate(p.Wg, p.Ug, p.bg));
    TensorPtr o = sigmoid(gate(p.Wo, p.Uo, p.bo));
    TensorPtr c = add(mul(f, s.c), mul(i, g));
    TensorPtr h = mul(o, tanh_t(c));
    return {h, c};
}

BiLstmOut bilstm(const LstmParams& fwd, const LstmParams& bwd, const std::vector<TensorPtr>& xs) {
    if (xs.empty()) throw ContractError("bilstm: empty sequence");
    const std::size_t T = xs.size();

    std::vector<TensorPtr> hf(T), hb(T);
    LstmState s = lstm_zero_state(fwd.hidden_dim);
    for (std::size_t t = 0; t < T; ++t) {
        s = lstm_cell(fwd, xs[t], s);
        hf[t] = s.h;
    }
    TensorPtr fwd_final = s.h;

    s = lstm_zero_state(bwd.hidden_dim);
    for (std::size_t t = T; t-- > 0;) {
        s = lstm_cell(bwd, xs[t], s);
        hb[t] = s.h;
    }
    TensorPtr bwd_final = s.h;  // state after consuming xs[0]

    BiLstmOut out;
    out.states.resize(T);
    for (std::size_t t = 0; t < T; ++t) out.states[t] = concat(hf[t], hb[t]);
    out.final = concat(fwd_final, bwd_final);
    return out;
}

Linear Linear::create(ParameterRegistry& reg, const std::string& prefix, std::size_t in,
                      std::size_t out, std::uint64_t seed) {
    Linear l;
    Rng rng = Rng::for_name(seed, prefix + "/W");
    double bound = 1.0 / std::sqrt(static_cast<double>(in));
    l.W = reg.add(prefix + "/W", {out, in}, uniform_init(out * in, bound, rng), true);
    l.b = reg.add(prefix + "/b", {out}, std::vector<double>(out, 0.0), true);
    return l;
}

}  // namespace hredsum
