#include <catch2/catch_amalgamated.hpp>

#include <sumsetkit/prefix.hpp>

#include "calibration.hpp"

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

double cost_bound(Int oe, std::size_t n, std::size_t m) {
    double logs = 1.0 + std::log2(static_cast<double>(std::max<std::size_t>(2, n))) *
                            std::log2(static_cast<double>(std::max<std::size_t>(2, m)));
    return kPrefixCostK * std::pow(static_cast<double>(oe), 4.0 / 3.0) * logs * logs;
}

}  // namespace

TEST_CASE("split_subproblem cells") {
    SparseSet A({3, 9}), B({4, 8});
    SECTION("single cell below u") {
        auto sp = split_subproblem({{1, 1, 1, 1}}, A, B, 10);
        REQUIRE(sp.output_rect.has_value());
        CHECK(*sp.output_rect == IndexRect{1, 1, 1, 1});
        CHECK(sp.children.empty());
    }
    SECTION("single cell above u") {
        auto sp = split_subproblem({{2, 2, 2, 2}}, A, B, 10);
        CHECK_FALSE(sp.output_rect.has_value());
        CHECK(sp.children.empty());
    }
}

TEST_CASE("split partitions the rectangle; dropped quadrant is above u") {
    std::mt19937_64 rng(51);
    for (int it = 0; it < 200; ++it) {
        SparseSet A = random_set(rng, 24, 400);
        SparseSet B = random_set(rng, 24, 400);
        if (A.size() < 8 || B.size() < 8) continue;
        Int i1 = std::uniform_int_distribution<Int>(1, static_cast<Int>(A.size()) - 7)(rng);
        Int j1 = std::uniform_int_distribution<Int>(1, static_cast<Int>(B.size()) - 7)(rng);
        Subproblem sub{{i1, i1 + 7, j1, j1 + 7}};
        Int u = std::uniform_int_distribution<Int>(0, 800)(rng);
        auto sp = split_subproblem(sub, A, B, u);

        // mark every cell claimed by output + children; the rest must be
        // the dropped all-above-u region
        std::set<std::pair<Int, Int>> claimed;
        auto mark = [&](const IndexRect& r) {
            for (Int i = r.i_lo; i <= r.i_hi; ++i)
                for (Int j = r.j_lo; j <= r.j_hi; ++j) {
                    auto [_, fresh] = claimed.insert({i, j});
                    REQUIRE(fresh);  // no double-claim
                }
        };
        if (sp.output_rect) {
            mark(*sp.output_rect);
            for (Int i = sp.output_rect->i_lo; i <= sp.output_rect->i_hi; ++i)
                for (Int j = sp.output_rect->j_lo; j <= sp.output_rect->j_hi; ++j)
                    REQUIRE(A.at1(i) + B.at1(j) <= u);
        }
        for (const auto& c : sp.children) {
            // strictly smaller or equal-size-reduced subproblem, never self
            REQUIRE_FALSE(c.rect == sub.rect);
            mark(c.rect);
        }
        for (Int i = sub.rect.i_lo; i <= sub.rect.i_hi; ++i)
            for (Int j = sub.rect.j_lo; j <= sub.rect.j_hi; ++j)
                if (!claimed.count({i, j})) REQUIRE(A.at1(i) + B.at1(j) > u);
    }
}

TEST_CASE("covering_construction validity") {
    SECTION("small floor: whole grid") {
        SparseSet A({1, 2, 3}), B({4, 5});
        Covering cov = covering_construction(A, B, 100, 1000);
        REQUIRE(cov.rects.size() == 1);
        CHECK(cov.rects[0] == IndexRect{1, 3, 1, 2});
    }
    SECTION("uniform 64") {
        std::vector<Int> xs;
        for (Int i = 1; i <= 64; ++i) xs.push_back(i);
        SparseSet A(xs), B(xs);
        Instance norm = normalize({A, B, 0, 64, {}});
        Int oe = approx_out(norm.A, norm.B, 0, 64);
        Covering cov = covering_construction(norm.A, norm.B, 64, oe);
        auto rep = validate_covering({norm.A, norm.B, 0, 64, {}}, cov);
        CHECK(rep.covers);
        CHECK(rep.unique);
    }
    SECTION("output rectangles are pairwise disjoint index sets") {
        std::mt19937_64 rng(53);
        for (int it = 0; it < 30; ++it) {
            SparseSet A = random_set(rng, 48, 600);
            SparseSet B = random_set(rng, 48, 600);
            Int u = std::uniform_int_distribution<Int>(0, 900)(rng);
            Instance norm = normalize({A, B, 0, u, {}});
            if (norm.A.empty() || norm.B.empty()) continue;
            Covering cov =
                covering_construction(norm.A, norm.B, u, approx_out(norm.A, norm.B, 0, u));
            std::set<std::pair<Int, Int>> seen;
            for (const auto& r : cov.rects)
                for (Int i = r.i_lo; i <= r.i_hi; ++i)
                    for (Int j = r.j_lo; j <= r.j_hi; ++j)
                        REQUIRE(seen.insert({i, j}).second);
        }
    }
    SECTION("300 random instances: valid, unique, cost within the frozen bound") {
        std::mt19937_64 rng(59);
        for (int it = 0; it < 300; ++it) {
            SparseSet A = random_set(rng, 128, 4000);
            SparseSet B = random_set(rng, 128, 4000);
            Int u = std::uniform_int_distribution<Int>(0, 6000)(rng);
            Instance norm = normalize({A, B, 0, u, {}});
            if (norm.A.empty() || norm.B.empty()) continue;
            Int oe = approx_out(norm.A, norm.B, 0, u);
            Covering cov = covering_construction(norm.A, norm.B, u, oe);
            auto rep = validate_covering(norm, cov);
            REQUIRE(rep.covers);
            REQUIRE(rep.unique);
            double bound = cost_bound(oe, norm.A.size(), norm.B.size());
            INFO("it=" << it << " cost=" << rep.cost << " bound=" << bound);
            REQUIRE(static_cast<double>(rep.cost) <= bound);
        }
    }
}

TEST_CASE("solve_prefix") {
    SECTION("hard-for-naive pin") {
        SparseSet A({0, 50, 51, 52}), B({0, 50, 52, 54});
        CHECK(solve_prefix(A, B, 100) == brute_sumset(A, B, 0, 100));
    }
    SECTION("pinned small") {
        CHECK(solve_prefix(SparseSet({1, 2}), SparseSet({1, 2, 3}), 4) == SparseSet({2, 3, 4}));
    }
    SECTION("500 random instances equal brute") {
        std::mt19937_64 rng(61);
        for (int it = 0; it < 500; ++it) {
            SparseSet A = random_set(rng, 64, 1500);
            SparseSet B = random_set(rng, 64, 1500);
            Int u = std::uniform_int_distribution<Int>(0, 2000)(rng);
            REQUIRE(solve_prefix(A, B, u) == brute_sumset(A, B, 0, u));
        }
    }
}

TEST_CASE("convolve_prefix") {
    SECTION("pinned") {
        SparseVec f({{0, 1}, {1, 2}});
        SparseVec g({{0, 3}, {1, 4}});
        CHECK(convolve_prefix(f, g, 1) == SparseVec({{0, 3}, {1, 10}}));
    }
    SECTION("200 random instances equal brute") {
        std::mt19937_64 rng(67);
        for (int it = 0; it < 200; ++it) {
            std::map<Int, Int> mf, mg;
            std::uniform_int_distribution<Int> idx(0, 800), val(1, 50);
            for (int i = 0; i < 40; ++i) mf[idx(rng)] = val(rng), mg[idx(rng)] = val(rng);
            std::vector<SparseVec::Entry> ef, eg;
            for (auto [i, v] : mf) ef.push_back({i, v});
            for (auto [i, v] : mg) eg.push_back({i, v});
            SparseVec f(ef), g(eg);
            Int u = std::uniform_int_distribution<Int>(0, 1200)(rng);
            REQUIRE(convolve_prefix(f, g, u) == brute_convolve(f, g, 0, u));
        }
    }
}
