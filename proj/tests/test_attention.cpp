#include <cmath>

#include "doctest.h"
#include "hredsum/attention.hpp"
#include "hredsum/rng.hpp"

using namespace hredsum;

namespace {

// straight transcription of the combination rule, no shared code with the
// library implementation
std::vector<double> combine_oracle(const std::vector<double>& beta,
                                   const std::vector<double>& gamma,
                                   const std::vector<std::size_t>& s_of) {
    std::vector<double> num(beta.size());
    double denom = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) {
        num[k] = beta[k] * gamma[s_of[k]];
        denom += num[k];
    }
    for (double& x : num) x /= denom;
    return num;
}

}  // namespace

TEST_CASE("combine hand case: beta uniform, gamma [0.8, 0.2] -> alpha [0.8, 0.2]") {
    auto beta = Tensor::create({2}, {0.5, 0.5});
    auto gamma = Tensor::create({2}, {0.8, 0.2});
    auto alpha = combine_attention(beta, gamma, {0, 1});
    CHECK(alpha->values[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(alpha->values[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("combine matches the brute-force oracle to 1e-12") {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t M = 1 + rng.below(5);
        std::size_t N = M + rng.below(12);
        std::vector<double> b(N), g(M);
        std::vector<std::size_t> s_of(N);
        for (std::size_t k = 0; k < N; ++k) {
            b[k] = rng.uniform(0.01, 1.0);
            s_of[k] = k < M ? k : rng.below(M);  // every sentence non-empty
        }
        double bs = 0, gs = 0;
        for (double x : b) bs += x;
        for (auto& x : g) {
            x = rng.uniform(0.01, 1.0);
            gs += x;
        }
        for (auto& x : b) x /= bs;
        for (auto& x : g) x /= gs;

        auto alpha = combine_attention(Tensor::create({N}, b), Tensor::create({M}, g), s_of);
        auto want = combine_oracle(b, g, s_of);
        double total = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            CHECK(alpha->values[k] == doctest::Approx(want[k]).epsilon(1e-12));
            total += alpha->values[k];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("combine is invariant to rescaling gamma") {
    auto beta = Tensor::create({3}, {0.2, 0.5, 0.3});
    auto g1 = Tensor::create({2}, {0.3, 0.7});
    auto g2 = Tensor::create({2}, {3.0, 7.0});
    std::vector<std::size_t> s_of{0, 0, 1};
    auto a1 = combine_attention(beta, g1, s_of);
    auto a2 = combine_attention(beta, g2, s_of);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(a1->values[k] == doctest::Approx(a2->values[k]).epsilon(1e-12));
}

TEST_CASE("combine with mask drops masked tokens from both sums") {
    auto beta = Tensor::create({3}, {0.4, 0.4, 0.2});
    auto gamma = Tensor::create({1}, {1.0});
    std::vector<std::size_t> s_of{0, 0, 0};
    std::vector<std::uint8_t> mask{1, 0, 1};
    auto alpha = combine_attention(beta, gamma, s_of, &mask);
    CHECK(alpha->values[0] == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
    CHECK(alpha->values[1] == 0.0);
    CHECK(alpha->values[2] == doctest::Approx(2.0 / 6.0).epsilon(1e-12));

    auto zero_beta = Tensor::create({2}, {0.0, 0.0});
    CHECK_THROWS_AS(combine_attention(zero_beta, gamma, {0, 0}), DegenerateInputError);
}

TEST_CASE("word/sentence attention are proper distributions; coverage shifts scores") {
    ParameterRegistry reg;
    auto p = AttentionParams::create(reg, 6, 4, 5, 17);
    Rng rng(9);
    std::vector<TensorPtr> rows;
    for (int i = 0; i < 7; ++i) {
        std::vector<double> v(6);
        for (double& x : v) x = rng.uniform(-1, 1);
        rows.push_back(Tensor::create({6}, std::move(v)));
    }
    auto words = stack_rows(rows);
    auto sents = stack_rows({rows[0], rows[3]});
    auto cache = attention_cache(p, words, sents);
    std::vector<double> sv(4);
    for (double& x : sv) x = rng.uniform(-1, 1);
    auto dec_state = Tensor::create({4}, sv);

    auto cov0 = Tensor::zeros({7});
    auto beta = word_attention(p, cache, dec_state, cov0);
    double sum_b = 0;
    for (double v : beta->values) {
        CHECK(v > 0.0);
        sum_b += v;
    }
    CHECK(sum_b == doctest::Approx(1.0).epsilon(1e-12));

    auto gamma = sentence_attention(p, cache, dec_state);
    CHECK(gamma->size() == 2);
    double sum_g = gamma->values[0] + gamma->values[1];
    CHECK(sum_g == doctest::Approx(1.0).epsilon(1e-12));

    auto cov1 = Tensor::full({7}, 2.0);
    auto beta_cov = word_attention(p, cache, dec_state, cov1);
    CHECK(beta->values != beta_cov->values);  // w_cov feature is live
}

TEST_CASE("attention cache equals direct projection and keeps gradients intact") {
    ParameterRegistry reg;
    auto p = AttentionParams::create(reg, 4, 3, 3, 21);
    auto words = Tensor::create({2, 4}, {0.1, -0.2, 0.3, 0.4, -0.5, 0.6, 0.7, -0.8}, true);
    auto sents = Tensor::create({1, 4}, {0.2, 0.1, -0.1, 0.3}, true);
    auto cache = attention_cache(p, words, sents);
    for (std::size_t i = 0; i < 2; ++i) {
        auto direct = matvec(p.Wh_word, row(words, i));
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(cache.word_proj->values[i * 3 + j] ==
                  doctest::Approx(direct->values[j]).epsilon(1e-12));
    }

    auto dec_state = Tensor::create({3}, {0.4, -0.1, 0.2}, true);
    auto f = [&] {
        auto c = attention_cache(p, words, sents);
        auto beta = word_attention(p, c, dec_state, Tensor::full({2}, 0.1));
        auto gamma = sentence_attention(p, c, dec_state);
        auto alpha = combine_attention(beta, gamma, {0, 0});
        return sum(mul(context_vector(alpha, words), context_vector(alpha, words)));
    };
    CHECK(grad_check(f, words).pass);
    CHECK(grad_check(f, dec_state).pass);
    CHECK(grad_check(f, p.Wh_word).pass);
    CHECK(grad_check(f, p.v_sent).pass);
    CHECK(grad_check(f, p.w_cov).pass);
}

TEST_CASE("context vector is the alpha-weighted sum of word states") {
    auto alpha = Tensor::create({2}, {0.25, 0.75});
    auto words = Tensor::create({2, 3}, {1, 2, 3, 5, 6, 7});
    auto c = context_vector(alpha, words);
    CHECK(c->values[0] == doctest::Approx(4.0));
    CHECK(c->values[1] == doctest::Approx(5.0));
    CHECK(c->values[2] == doctest::Approx(6.0));

    auto cov = update_coverage(Tensor::create({2}, {0.1, 0.2}), alpha);
    CHECK(cov->values[0] == doctest::Approx(0.35));
    CHECK(cov->values[1] == doctest::Approx(0.95));
}
