#include <catch2/catch_amalgamated.hpp>

#include <sumsetkit/interval.hpp>

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

SparseSet brute_oracle(const PromiseInstance& inst) {
    return brute_sumset(inst.A, inst.B, inst.lo, inst.hi);
}

}  // namespace

TEST_CASE("solve_via_promise with the brute oracle") {
    SECTION("lo == hi") {
        CHECK(solve_via_promise(SparseSet({1, 2}), SparseSet({2}), 4, 4, brute_oracle) ==
              SparseSet({4}));
        CHECK(solve_via_promise(SparseSet({1, 2}), SparseSet({2}), 5, 5, brute_oracle).empty());
    }
    SECTION("pinned example") {
        CHECK(solve_via_promise(SparseSet({1, 2}), SparseSet({1, 2, 3}), 0, 4, brute_oracle) ==
              SparseSet({2, 3, 4}));
    }
    SECTION("200 random instances match brute and keep the promise invariants") {
        std::mt19937_64 rng(5);
        for (int it = 0; it < 200; ++it) {
            SparseSet A = random_set(rng, 40, 500);
            SparseSet B = random_set(rng, 40, 500);
            Int lo = std::uniform_int_distribution<Int>(0, 400)(rng);
            Int hi = lo + std::uniform_int_distribution<Int>(0, 500)(rng);
            Instance norm = normalize({A, B, lo, hi, {}});
            if (norm.A.empty() || norm.B.empty()) continue;
            // run_chain asserts S ⊆ T and |T| ≤ 6|S|+9 at every level
            REQUIRE(solve_via_promise(norm.A, norm.B, lo, hi, brute_oracle) ==
                    brute_sumset(A, B, lo, hi));
        }
    }
}

TEST_CASE("misbehaving oracle is rejected") {
    auto liar = [](const PromiseInstance& inst) {
        // answer with something outside the promise set
        return SparseSet({inst.T.max() + 1000});
    };
    CHECK_THROWS_AS(solve_via_promise(SparseSet({1, 2}), SparseSet({1, 2}), 0, 4, liar),
                    std::logic_error);
}

TEST_CASE("approx_out bracket") {
    SECTION("empty after normalization") {
        CHECK(approx_out(SparseSet({5}), SparseSet({6}), 0, 3) <= 9);
    }
    SECTION("pinned: out=4") {
        Int oe = approx_out(SparseSet({1, 2}), SparseSet({1, 2, 3}), 0, 10);
        CHECK(oe >= 4);
        CHECK(oe <= 33);
    }
    SECTION("200 random instances") {
        std::mt19937_64 rng(17);
        for (int it = 0; it < 200; ++it) {
            SparseSet A = random_set(rng, 32, 300);
            SparseSet B = random_set(rng, 32, 300);
            Int lo = std::uniform_int_distribution<Int>(0, 200)(rng);
            Int hi = lo + std::uniform_int_distribution<Int>(0, 300)(rng);
            Int out = static_cast<Int>(brute_sumset(A, B, lo, hi).size());
            Int oe = approx_out(A, B, lo, hi);
            INFO("it=" << it << " out=" << out << " oe=" << oe);
            REQUIRE(oe >= out);
            REQUIRE(oe <= 6 * out + 9);
        }
    }
}
