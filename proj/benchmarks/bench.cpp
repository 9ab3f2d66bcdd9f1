#include <benchmark/benchmark.h>

#include "hredsum/attention.hpp"
#include "hredsum/nn.hpp"
#include "hredsum/rng.hpp"

using namespace hredsum;

namespace {

TensorPtr random_tensor(std::vector<std::size_t> shape, Rng& rng) {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return Tensor::create(std::move(shape), std::move(v));
}

void BM_matmul(benchmark::State& state) {
    std::size_t n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    auto a = random_tensor({n, n}, rng);
    auto b = random_tensor({n, n}, rng);
    NoGradGuard ng;
    for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}
BENCHMARK(BM_matmul)->Arg(32)->Arg(128)->Arg(256);

void BM_lstm_cell(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    ParameterRegistry reg;
    auto p = LstmParams::create(reg, "b", d, d, true, LstmInit::Uniform, 1);
    Rng rng(2);
    auto x = random_tensor({d}, rng);
    LstmState s{random_tensor({d}, rng), random_tensor({d}, rng)};
    NoGradGuard ng;
    for (auto _ : state) benchmark::DoNotOptimize(lstm_cell(p, x, s));
}
BENCHMARK(BM_lstm_cell)->Arg(32)->Arg(128)->Arg(256);

// one full attention step: word + sentence scores, combination, context
void BM_attention_step(benchmark::State& state) {
    std::size_t tokens = static_cast<std::size_t>(state.range(0));
    std::size_t sents = 8, two_d = 64, dec_d = 32, a_dim = 32;
    ParameterRegistry reg;
    auto p = AttentionParams::create(reg, two_d, dec_d, a_dim, 3);
    Rng rng(4);
    auto words = random_tensor({tokens, two_d}, rng);
    auto sent_states = random_tensor({sents, two_d}, rng);
    auto dec_state = random_tensor({dec_d}, rng);
    auto coverage = Tensor::zeros({tokens});
    std::vector<std::size_t> s_of(tokens);
    for (std::size_t k = 0; k < tokens; ++k) s_of[k] = k % sents;
    NoGradGuard ng;
    auto cache = attention_cache(p, words, sent_states);
    for (auto _ : state) {
        auto beta = word_attention(p, cache, dec_state, coverage);
        auto gamma = sentence_attention(p, cache, dec_state);
        auto alpha = combine_attention(beta, gamma, s_of);
        benchmark::DoNotOptimize(context_vector(alpha, words));
    }
}
BENCHMARK(BM_attention_step)->Arg(50)->Arg(200)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
