#include <catch2/catch_amalgamated.hpp>

#include <sumsetkit/core.hpp>

#include <random>
#include <sstream>

using namespace sumsetkit;

TEST_CASE("SparseSet validation") {
    CHECK_NOTHROW(SparseSet({1, 2, 5}));
    CHECK_THROWS_AS(SparseSet({2, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SparseSet({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(SparseSet({-1, 2}), std::invalid_argument);
    CHECK_NOTHROW(SparseSet({-1, 2}, true));
    CHECK(SparseSet::from_unsorted({3, 1, 3, 2}) == SparseSet({1, 2, 3}));
}

TEST_CASE("SparseVec validation") {
    CHECK_NOTHROW(SparseVec({{0, 1}, {3, 2}}));
    CHECK_THROWS_AS(SparseVec({{3, 1}, {0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(SparseVec({{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(SparseVec({{-1, 1}}), std::invalid_argument);
}

TEST_CASE("brute_sumset basics") {
    // {1,2} + {1,2,3} = {2,3,4,5}
    CHECK(brute_sumset(SparseSet({1, 2}), SparseSet({1, 2, 3}), 0, 100) ==
          SparseSet({2, 3, 4, 5}));
    // restriction window
    CHECK(brute_sumset(SparseSet({1, 2}), SparseSet({1, 2, 3}), 3, 4) == SparseSet({3, 4}));
    // additive identity
    SparseSet B({0, 7, 9});
    CHECK(brute_sumset(SparseSet({0}), B, 0, 100) == B);
}

TEST_CASE("brute_convolve basics") {
    SparseVec f({{0, 1}, {1, 2}});
    SparseVec g({{0, 3}, {1, 4}});
    CHECK(brute_convolve(f, g, 0, 100) == SparseVec({{0, 3}, {1, 10}, {2, 8}}));
    CHECK(brute_convolve(SparseVec({{0, 1}}), g, 0, 100) == g);
}

TEST_CASE("brute_subset_sums") {
    CHECK(brute_subset_sums(SparseSet({1, 2, 3}), 4) == SparseSet({0, 1, 2, 3, 4}));
    CHECK(brute_subset_sums(SparseSet({5, 7}), 4) == SparseSet({0}));
    CHECK(brute_subset_sums(SparseSet({2, 4}), 7) == SparseSet({0, 2, 4, 6}));
}

TEST_CASE("normalize drops unusable elements and is idempotent") {
    Instance inst{SparseSet({1, 5, 90}), SparseSet({2, 40, 95}), 0, 50, {}};
    Instance norm = normalize(inst);
    CHECK(norm.A == SparseSet({1, 5}));
    CHECK(norm.B == SparseSet({2, 40}));
    CHECK(brute_sumset(norm.A, norm.B, 0, 50) == brute_sumset(inst.A, inst.B, 0, 50));
    Instance again = normalize(norm);
    CHECK(again.A == norm.A);
    CHECK(again.B == norm.B);

    std::mt19937_64 rng(1);
    for (int it = 0; it < 50; ++it) {
        std::vector<Int> a, b;
        std::uniform_int_distribution<Int> d(0, 200);
        for (int i = 0; i < 30; ++i) a.push_back(d(rng)), b.push_back(d(rng));
        Instance r{SparseSet::from_unsorted(a), SparseSet::from_unsorted(b), 10, 150, {}};
        Instance nr = normalize(r);
        CHECK(brute_sumset(nr.A, nr.B, r.lo, r.hi) == brute_sumset(r.A, r.B, r.lo, r.hi));
        Instance nnr = normalize(nr);
        CHECK(nnr.A == nr.A);
        CHECK(nnr.B == nr.B);
    }
}

TEST_CASE("validate_covering flags") {
    Instance inst{SparseSet({0, 1, 2}), SparseSet({0, 3}), 0, 5, {}};
    SECTION("full single rectangle") {
        Covering cov{{{1, 3, 1, 2}}, false, true, -1};
        auto rep = validate_covering(inst, cov);
        CHECK(rep.covers);
        CHECK(rep.unique);
        CHECK(rep.cost == 6);  // sums {0,1,2,3,4,5} all distinct
    }
    SECTION("hole detected") {
        Covering cov{{{1, 2, 1, 2}}, false, true, -1};
        auto rep = validate_covering(inst, cov);
        CHECK_FALSE(rep.covers);
        CHECK(rep.uncovered_pairs == 2);
    }
    SECTION("overlap detected") {
        Covering cov{{{1, 3, 1, 2}, {1, 1, 1, 1}}, false, true, -1};
        auto rep = validate_covering(inst, cov);
        CHECK(rep.covers);
        CHECK_FALSE(rep.unique);
        CHECK(rep.multi_covered_pairs == 1);
    }
    SECTION("pairs outside the range need no cover") {
        Instance narrow{inst.A, inst.B, 0, 2, {}};
        Covering cov{{{1, 3, 1, 1}}, false, true, -1};
        auto rep = validate_covering(narrow, cov);
        CHECK(rep.covers);
        CHECK(rep.unique);
    }
}

TEST_CASE("ruzsa corollary on arithmetic progressions") {
    SparseSet X({0, 1, 2, 3}), Y({0, 2, 4}), Z({0, 5}), W({0, 1});
    CHECK(ruzsa_check(X, Y, Z, W));
}

TEST_CASE("set round-trip through the text format") {
    SparseSet s({0, 4, 17, 123456789});
    std::stringstream ss;
    write_set(ss, s);
    CHECK(ss.str().rfind("# sparse-set v1\n", 0) == 0);
    CHECK(read_set(ss) == s);

    std::stringstream bad("no header\n1\n");
    CHECK_THROWS_AS(read_set(bad), std::invalid_argument);
}

TEST_CASE("vec round-trip through the text format") {
    SparseVec v({{0, 3}, {9, 1}, {15, 42}});
    std::stringstream ss;
    write_vec(ss, v);
    CHECK(ss.str().rfind("# sparse-vec v1\n", 0) == 0);
    CHECK(read_vec(ss) == v);
}

TEST_CASE("subset-sum instance round-trip") {
    SubsetSumInstance inst{SparseSet({1, 4, 9}), 12};
    std::stringstream ss;
    write_subset_sum(ss, inst);
    auto back = read_subset_sum(ss);
    CHECK(back.X == inst.X);
    CHECK(back.t == inst.t);
}
