#pragma once

// Top-k convolution / sumset through the prefix-restricted solver: binary
// search for the smallest u whose prefix-restricted product has at least k
// non-zeros, where every probe runs under a work budget of
// budget_constant * k^{4/3} * log^budget_log_exp(2d+2) engine units and an
// over-budget probe is treated as "u too large". Aborted probes can only
// misdirect the search, never corrupt a result; if the search collapses to
// a u that turns out too small, the budget doubles and the search restarts.

#include "prefix.hpp"

namespace sumsetkit {

struct TopKParams {
    double budget_constant = 64.0;
    int budget_log_exp = 3;
    EngineConfig engine{};
};

inline std::vector<SparseVec::Entry> top_k_convolution(const SparseVec& f, const SparseVec& g,
                                                       Int k, const TopKParams& params = {}) {
    if (k < 1) throw std::invalid_argument("top_k_convolution: k must be >= 1");
    if (f.empty() || g.empty()) return {};
    const Int d = f.entries().back().index + g.entries().back().index;
    const double logf =
        std::pow(std::log2(2.0 * static_cast<double>(d) + 2.0), params.budget_log_exp);
    std::uint64_t budget =
        static_cast<std::uint64_t>(params.budget_constant *
                                   std::pow(static_cast<double>(k), 4.0 / 3.0) * logf) +
        1;

    for (;; budget *= 2) {
        auto probe = [&](Int u) -> std::optional<SparseVec> {
            WorkMeter meter;
            meter.cap = budget;
            EngineConfig cfg = params.engine;
            cfg.meter = &meter;
            try {
                return convolve_prefix(f, g, u, cfg);
            } catch (const WorkBudgetExceeded&) {
                return std::nullopt;
            }
        };

        Int lo = 0, hi = 2 * d;
        while (lo < hi) {
            const Int mid = lo + (hi - lo) / 2;
            auto r = probe(mid);
            if (!r || static_cast<Int>(r->size()) >= k)
                hi = mid;  // enough output (or too expensive to tell): shrink
            else
                lo = mid + 1;
        }
        if (auto fin = probe(lo)) {
            auto es = fin->entries();
            if (static_cast<Int>(es.size()) >= k) {
                es.resize(static_cast<std::size_t>(k));
                return es;
            }
            if (lo >= d) return es;  // the entire product has fewer than k entries
        }
        // the budget starved the search into an inconsistent corner: retry bigger
    }
}

inline SparseSet top_k_sumset(const SparseSet& A, const SparseSet& B, Int k,
                              const TopKParams& params = {}) {
    if (A.empty() || B.empty()) return SparseSet{};
    auto es = top_k_convolution(SparseVec::indicator(A), SparseVec::indicator(B), k, params);
    std::vector<Int> xs;
    xs.reserve(es.size());
    for (const auto& e : es) xs.push_back(e.index);
    return SparseSet(std::move(xs));
}

/// The reverse reduction: prefix-restricted convolution by doubling k until
/// the k-th smallest non-zero index passes u.
inline SparseVec prefix_via_topk(const SparseVec& f, const SparseVec& g, Int u,
                                 const TopKParams& params = {}) {
    if (f.empty() || g.empty() || u < 0) return SparseVec{};
    for (Int k = 2;; k *= 2) {
        auto es = top_k_convolution(f, g, k, params);
        if (static_cast<Int>(es.size()) < k || es.back().index > u) {
            std::vector<SparseVec::Entry> kept;
            for (const auto& e : es)
                if (e.index <= u) kept.push_back(e);
            return SparseVec(std::move(kept), f.value_bound());
        }
    }
}

}  // namespace sumsetkit
