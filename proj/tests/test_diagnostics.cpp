#include <cmath>

#include "doctest.h"
#include "hredsum/diagnostics.hpp"
#include "hredsum/rng.hpp"

using namespace hredsum;

TEST_CASE("relative weight change hand value: mean of {0.1, 0.1} = 0.1") {
    std::vector<double> before{1.0, 2.0};
    std::vector<double> after{1.1, 2.2};
    CHECK(relative_weight_change(before, after) == doctest::Approx(0.1).epsilon(1e-12));

    // signs enter as magnitudes
    CHECK(relative_weight_change({-2.0}, {-1.0}) == doctest::Approx(0.5).epsilon(1e-12));
    // no change -> 0
    CHECK(relative_weight_change(before, before) == doctest::Approx(0.0));
}

TEST_CASE("relative weight change matches a direct loop to 1e-12") {
    Rng rng(31);
    std::vector<double> before(257), after(257);
    for (std::size_t i = 0; i < before.size(); ++i) {
        before[i] = rng.uniform(-2.0, 2.0);
        if (std::abs(before[i]) < 1e-6) before[i] = 0.5;
        after[i] = before[i] + rng.uniform(-0.1, 0.1);
    }
    double want = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i)
        want += std::abs((after[i] - before[i]) / before[i]);
    want /= before.size();
    CHECK(relative_weight_change(before, after) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("relative weight change excludes near-zero coordinates") {
    // the 0-valued coordinate must not divide
    std::vector<double> before{0.0, 4.0};
    std::vector<double> after{1.0, 5.0};
    CHECK(relative_weight_change(before, after) == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(relative_weight_change({0.0, 0.0}, {1.0, 1.0}), DegenerateInputError);
    CHECK_THROWS_AS(relative_weight_change({1.0}, {1.0, 2.0}), DimensionError);
}

TEST_CASE("relative gap reproduces the consistent published perplexity ratios") {
    // degradation of the frozen-random encoder vs its trained twin
    CHECK(std::round(relative_gap(22.17, 17.07)) == doctest::Approx(30.0));
    CHECK(std::round(relative_gap(18.03, 14.81)) == doctest::Approx(22.0));
    CHECK(std::round(relative_gap(22.75, 15.66)) == doctest::Approx(45.0));
    CHECK(std::round(relative_gap(21.84, 17.07)) == doctest::Approx(28.0));
    CHECK(relative_gap(110.0, 100.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(relative_gap(90.0, 100.0) == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK_THROWS_AS(relative_gap(1.0, 0.0), ContractError);
    CHECK_THROWS_AS(relative_gap(1.0, -2.0), ContractError);
}

TEST_CASE("weight histogram: bins cover the range and count everything") {
    std::vector<double> vals;
    Rng rng(8);
    for (int i = 0; i < 5000; ++i) vals.push_back(rng.normal());
    auto h = weight_histogram(vals, 101);
    REQUIRE(h.counts.size() == 101);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == vals.size());
    CHECK(h.lo == h.min);
    CHECK(h.hi == h.max);
    CHECK(h.bin_low(0) == doctest::Approx(h.lo));
    CHECK(h.bin_high(100) == doctest::Approx(h.hi));

    double mean = 0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    CHECK(h.mean == doctest::Approx(mean).epsilon(1e-12));
    double var = 0;
    for (double v : vals) var += (v - mean) * (v - mean);
    CHECK(h.stddev == doctest::Approx(std::sqrt(var / vals.size())).epsilon(1e-9));

    // all-equal input degenerates to a single hot bin
    auto flat = weight_histogram(std::vector<double>(10, 3.0), 5);
    std::size_t hot = 0;
    for (auto c : flat.counts) hot += c;
    CHECK(hot == 10);
    CHECK(flat.stddev == 0.0);
}

TEST_CASE("group_values splits a checkpoint by diagnostic group") {
    Checkpoint ck;
    ck.tensors.push_back({"embedding", {2, 2}, true, {1, 2, 3, 4}, {}});
    ck.tensors.push_back({"enc_sent/fwd/W_i", {2}, true, {5, 6}, {0.1, 0.2}});
    ck.tensors.push_back({"enc_sent/bwd/W_i", {1}, true, {7}, {0.3}});
    ck.tensors.push_back({"decoder/out/W", {1}, true, {8}, {}});
    auto groups = group_values(ck);
    CHECK(groups["embedding"] == std::vector<double>{1, 2, 3, 4});
    CHECK(groups["enc_sent"] == std::vector<double>{5, 6, 7});
    CHECK(groups["decoder"] == std::vector<double>{8});
    auto grads = group_values(ck, true);
    CHECK(grads["enc_sent"] == std::vector<double>{0.1, 0.2, 0.3});
}
