#include <catch2/catch_amalgamated.hpp>

#include <sumsetkit/interval.hpp>

#include <cmath>
#include <random>

using namespace sumsetkit;

namespace {

SparseSet random_set(std::mt19937_64& rng, int max_size, Int max_val) {
    std::uniform_int_distribution<int> sz(1, max_size);
    std::uniform_int_distribution<Int> val(0, max_val);
    std::vector<Int> xs;
    int k = sz(rng);
    for (int i = 0; i < k; ++i) xs.push_back(val(rng));
    return SparseSet::from_unsorted(xs);
}

}  // namespace

TEST_CASE("find_interval_covering validity and cost") {
    SECTION("q=1 whole grid") {
        SparseSet A({1, 2, 3}), B({4, 5});
        Covering cov = find_interval_covering(A, B, 0, 100, 1000);
        REQUIRE(cov.rects.size() == 1);
        CHECK(cov.rects[0] == IndexRect{1, 3, 1, 2});
    }
    SECTION("uniform 16x16") {
        std::vector<Int> xs;
        for (Int i = 1; i <= 16; ++i) xs.push_back(i);
        SparseSet A(xs), B(xs);
        Instance inst{A, B, 0, 16, {}};
        Instance norm = normalize(inst);
        Int oe = approx_out(norm.A, norm.B, 0, 16);
        Covering cov = find_interval_covering(norm.A, norm.B, 0, 16, oe);
        auto rep = validate_covering({norm.A, norm.B, 0, 16, {}}, cov);
        CHECK(rep.covers);
        CHECK(rep.unique);
    }
    SECTION("200 random instances: valid, unique, cost <= 20*sqrt(nm*oe)") {
        std::mt19937_64 rng(23);
        for (int it = 0; it < 200; ++it) {
            SparseSet A = random_set(rng, 128, 2000);
            SparseSet B = random_set(rng, 128, 2000);
            Int lo = std::uniform_int_distribution<Int>(0, 1000)(rng);
            Int hi = lo + std::uniform_int_distribution<Int>(0, 2000)(rng);
            Instance norm = normalize({A, B, lo, hi, {}});
            if (norm.A.empty() || norm.B.empty()) continue;
            Int oe = approx_out(norm.A, norm.B, lo, hi);
            Covering cov = find_interval_covering(norm.A, norm.B, lo, hi, oe);
            auto rep = validate_covering(norm, cov);
            REQUIRE(rep.covers);
            REQUIRE(rep.unique);
            double nm = static_cast<double>(norm.A.size()) * static_cast<double>(norm.B.size());
            double bound = 20.0 * std::sqrt(nm * static_cast<double>(oe));
            INFO("it=" << it << " cost=" << rep.cost << " bound=" << bound);
            REQUIRE(static_cast<double>(rep.cost) <= bound);
        }
    }
}

TEST_CASE("solve_interval") {
    SECTION("empty after normalization") {
        CHECK(solve_interval(SparseSet({9}), SparseSet({9}), 0, 5).empty());
    }
    SECTION("pinned") {
        CHECK(solve_interval(SparseSet({1, 2}), SparseSet({1, 2, 3}), 3, 4) == SparseSet({3, 4}));
    }
    SECTION("signed inputs") {
        SparseSet A({-5, 0, 3}, true), B({-2, 7}, true);
        CHECK(solve_interval(A, B, -7, 3) == brute_sumset(A, B, -7, 3));
    }
    SECTION("500 random instances equal brute") {
        std::mt19937_64 rng(31);
        for (int it = 0; it < 500; ++it) {
            SparseSet A = random_set(rng, 64, 1500);
            SparseSet B = random_set(rng, 64, 1500);
            Int lo = std::uniform_int_distribution<Int>(0, 1000)(rng);
            Int hi = lo + std::uniform_int_distribution<Int>(0, 1500)(rng);
            REQUIRE(solve_interval(A, B, lo, hi) == brute_sumset(A, B, lo, hi));
        }
    }
}

TEST_CASE("convolve_interval") {
    SECTION("pinned") {
        SparseVec f({{0, 1}, {1, 2}});
        SparseVec g({{0, 3}, {1, 4}});
        CHECK(convolve_interval(f, g, 1, 1) == SparseVec({{1, 10}}));
    }
    SECTION("200 random instances equal brute") {
        std::mt19937_64 rng(37);
        for (int it = 0; it < 200; ++it) {
            std::map<Int, Int> mf, mg;
            std::uniform_int_distribution<Int> idx(0, 800), val(1, 50);
            for (int i = 0; i < 40; ++i) mf[idx(rng)] = val(rng), mg[idx(rng)] = val(rng);
            std::vector<SparseVec::Entry> ef, eg;
            for (auto [i, v] : mf) ef.push_back({i, v});
            for (auto [i, v] : mg) eg.push_back({i, v});
            SparseVec f(ef), g(eg);
            Int lo = std::uniform_int_distribution<Int>(0, 600)(rng);
            Int hi = lo + std::uniform_int_distribution<Int>(0, 800)(rng);
            REQUIRE(convolve_interval(f, g, lo, hi) == brute_convolve(f, g, lo, hi));
        }
    }
}
