#pragma once

// Output-sensitive SubsetSum: S(X, t) in output-sensitive time via the
// prefix-restricted sumset solvers.
//
// Heavy elements (above u / (beta * polylog t)) are handled by color coding:
// R random colorings into B classes, folding O <- (O + (class ∪ {0})) ∩ [u]
// per class — sound in every round, complete once some round colors a
// witness injectively. Light elements are split uniformly at random and
// recursed on target floor((1+eps)u/2); a random witness lands each half
// under the child target with high probability (the splitting lemma).
// Errors are one-sided throughout: the result is always a subset of S(X, t).

#include "prefix.hpp"
#include "relaxed.hpp"

namespace sumsetkit {

enum class SSProfile { PaperFaithful, Practical };

struct SSParams {
    Int beta = 2;
    SSProfile profile = SSProfile::Practical;
    double fail_prob = 0.01;  // delta
    std::uint64_t rng_seed = 1;
    std::optional<double> zeta;  // set => relaxed prefix solver
    Int base_cutoff = 8;
    EngineConfig engine{};
};

namespace detail {

inline Int clog2_int(Int t) {
    Int x = 1;
    while ((Int{1} << x) < t) ++x;
    return std::max<Int>(1, t <= 2 ? 1 : x);
}

struct SSDerived {
    Int log_t;
    double eps;
    Int repeats;  // R

    static SSDerived from(Int t, const SSParams& p) {
        SSDerived d;
        d.log_t = clog2_int(std::max<Int>(2, t));
        d.eps = 1.0 / static_cast<double>(d.log_t);
        d.repeats = static_cast<Int>(
            std::ceil(3.0 * std::log2(static_cast<double>(std::max<Int>(2, t)) / p.fail_prob)));
        return d;
    }

    Int heavy_threshold(Int u, const SSParams& p) const {
        Int div = p.profile == SSProfile::PaperFaithful ? p.beta * log_t * log_t * log_t
                                                        : p.beta * log_t;
        return std::max<Int>(1, u / div);
    }

    Int color_count(Int u, const SSParams& p) const {
        if (p.profile == SSProfile::PaperFaithful) {
            Int l6 = log_t * log_t * log_t;
            return 2 * p.beta * p.beta * l6 * l6;
        }
        Int thr = heavy_threshold(u, p);
        Int kappa = (u + thr - 1) / thr;  // max heavy elements per witness
        return 2 * kappa * kappa;
    }
};

inline SparseSet ss_prefix(const SparseSet& P, const SparseSet& Q, Int u, const SSParams& p) {
    if (p.zeta) return solve_prefix_relaxed(P, Q, u, *p.zeta, p.engine);
    return solve_prefix(P, Q, u, p.engine);
}

}  // namespace detail

/// Color-coding stage for heavy-only inputs: a subset of S(X, u) that is all
/// of it with probability >= 1 - fail_prob.
inline SparseSet subset_sums_large(const SparseSet& X, Int u, Int t, const SSParams& params = {},
                                   std::mt19937_64* ext_rng = nullptr) {
    if (u < 0) return SparseSet{};
    if (X.empty()) return SparseSet({0});
    auto d = detail::SSDerived::from(t, params);
    const Int thr = d.heavy_threshold(u, params);
    for (Int x : X.elems())
        if (x < thr || x > u)
            throw std::invalid_argument("subset_sums_large: element outside [threshold, u]");
    const Int B = d.color_count(u, params);

    std::mt19937_64 own(params.rng_seed);
    std::mt19937_64& rng = ext_rng ? *ext_rng : own;
    std::uniform_int_distribution<Int> color(0, B - 1);

    std::vector<Int> acc{0};
    for (Int r = 0; r < d.repeats; ++r) {
        std::map<Int, std::vector<Int>> classes;
        for (Int x : X.elems()) classes[color(rng)].push_back(x);
        SparseSet O({0});
        for (auto& [b, xs] : classes) {
            xs.push_back(0);
            O = detail::ss_prefix(O, SparseSet::from_unsorted(std::move(xs)), u, params);
        }
        for (Int s : O.elems()) acc.push_back(s);
    }
    return SparseSet::from_unsorted(std::move(acc));
}

namespace detail {

inline SparseSet ss_recurse(std::vector<Int> xs, Int u, Int t, const SSParams& params,
                            const SSDerived& d, std::mt19937_64& rng, Int depth) {
    if (depth > d.log_t + 8)
        throw std::logic_error("subset_sums: recursion depth exceeded log t + O(1)");
    std::vector<Int> usable;
    for (Int x : xs)
        if (x <= u) usable.push_back(x);
    if (u <= 0 || usable.empty()) return SparseSet({0});

    const Int thr = d.heavy_threshold(u, params);
    std::vector<Int> heavy, light;
    for (Int x : usable) (x >= thr ? heavy : light).push_back(x);

    SparseSet o_light;
    if (static_cast<Int>(light.size()) <= params.base_cutoff) {
        o_light = light.empty() ? SparseSet({0})
                                : brute_subset_sums(SparseSet::from_unsorted(light),
                                                    std::min<Int>(u, [&] {
                                                        Int s = 0;
                                                        for (Int x : light) s += x;
                                                        return s;
                                                    }()));
    } else {
        std::vector<Int> z1, z2;
        for (Int x : light) (rng() & 1 ? z1 : z2).push_back(x);
        const Int uc = static_cast<Int>(
            std::floor((1.0 + d.eps) * static_cast<double>(u) / 2.0));
        SparseSet o1 = ss_recurse(std::move(z1), uc, t, params, d, rng, depth + 1);
        SparseSet o2 = ss_recurse(std::move(z2), uc, t, params, d, rng, depth + 1);
        o_light = ss_prefix(o1, o2, u, params);
    }

    if (heavy.empty()) return o_light;
    SparseSet o_heavy =
        subset_sums_large(SparseSet::from_unsorted(heavy), u, t, params, &rng);
    return ss_prefix(o_light, o_heavy, u, params);
}

}  // namespace detail

/// S(X, t) with probability >= 1 - 1/poly(t); always a subset of S(X, t).
inline SparseSet subset_sums(const SparseSet& X, Int t, const SSParams& params = {}) {
    if (t < 0) throw std::invalid_argument("subset_sums: t must be >= 0");
    for (Int x : X.elems())
        if (x <= 0) throw std::invalid_argument("subset_sums: elements must be positive");
    if (X.empty() || t == 0) return SparseSet({0});
    auto d = detail::SSDerived::from(t, params);
    std::mt19937_64 rng(params.rng_seed);
    return detail::ss_recurse(X.elems(), t, t, params, d, rng, 0);
}

inline SparseSet subset_sums_relaxed(const SparseSet& X, Int t, double zeta,
                                     const SSParams& params = {}) {
    SSParams p = params;
    p.zeta = zeta;
    return subset_sums(X, t, p);
}

// ---------------------------------------------------------------------------
// Empirical harness for the splitting lemma: for Z with mu = max(Z)/u <=
// 1/16 and eps <= 1/4, any partition Z = Z1 ∪ Z2 satisfies
//   |S(Z1, uc)| + |S(Z2, uc)|  <=  (|S(Z, u)| + 1) / (1 - 2 eps - 4 mu),
// with uc = floor((1+eps)u/2), and a random half-split keeps random
// witnesses under the child target.

struct SplitStats {
    long long trials = 0;
    double witness_survival_rate = 0.0;
    double max_ratio = 0.0;
    double ratio_bound = 0.0;
};

inline SplitStats split_survival_check(const SparseSet& Z, Int u, Int t, long long trials,
                                       std::optional<double> eps_override = {},
                                       std::uint64_t seed = 1) {
    if (Z.empty()) throw std::invalid_argument("split_survival_check: empty Z");
    const double mu = static_cast<double>(Z.max()) / static_cast<double>(u);
    if (mu > 1.0 / 16.0)
        throw std::invalid_argument("split_survival_check: max(Z)/u must be <= 1/16");
    const double eps =
        eps_override ? *eps_override : detail::SSDerived::from(t, SSParams{}).eps;
    if (eps > 0.25) throw std::invalid_argument("split_survival_check: eps must be <= 1/4");
    const Int uc = static_cast<Int>(std::floor((1.0 + eps) * static_cast<double>(u) / 2.0));

    const auto& zs = Z.elems();
    const std::size_t n = zs.size();
    auto dp_count = [&](const std::vector<Int>& part, Int cap) {
        if (part.empty()) return static_cast<long long>(1);
        return static_cast<long long>(
            brute_subset_sums(SparseSet::from_unsorted(part), cap).size());
    };
    const long long base = dp_count(std::vector<Int>(zs.begin(), zs.end()), u);

    std::mt19937_64 rng(seed);
    SplitStats st;
    st.ratio_bound = 1.0 / (1.0 - 2.0 * eps - 4.0 * mu);
    long long survived = 0;

    const bool exhaustive = n <= 20 && (1LL << n) <= trials;
    const long long total = exhaustive ? (1LL << n) : trials;
    for (long long it = 0; it < total; ++it) {
        std::vector<Int> z1, z2;
        const std::uint64_t mask = exhaustive ? static_cast<std::uint64_t>(it) : rng();
        for (std::size_t i = 0; i < n; ++i)
            ((mask >> (i % 64)) & 1 ? z1 : z2).push_back(zs[i]);
        double ratio = static_cast<double>(dp_count(z1, uc) + dp_count(z2, uc)) /
                       static_cast<double>(base + 1);
        st.max_ratio = std::max(st.max_ratio, ratio);

        // random witness: shuffle, then greedily pack below u
        std::vector<Int> perm(zs.begin(), zs.end());
        std::shuffle(perm.begin(), perm.end(), rng);
        Int sum = 0, sum1 = 0;
        std::set<Int> in1(z1.begin(), z1.end());
        for (Int x : perm)
            if (sum + x <= u) {
                sum += x;
                if (in1.count(x)) sum1 += x;
            }
        if (sum1 <= uc) ++survived;
    }
    st.trials = total;
    st.witness_survival_rate = static_cast<double>(survived) / static_cast<double>(total);
    return st;
}

}  // namespace sumsetkit
