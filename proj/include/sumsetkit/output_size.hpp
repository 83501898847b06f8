#pragma once

// Learning the output size: reduce interval-restricted sumset computation to
// its promise version, where a small superset T of the answer is known in
// advance. Working down from the coarsest scale, each level's answer S^(i)
// for the halved instance (A>>i, B>>i, [lo>>i, hi>>i]) yields the promise
// set of the next finer level:
//
//   T^(i) = (2*S^(i+1) + {0,1,2})  U  {lo>>i, (lo>>i)+1, hi>>i}
//
// |T^(0)| is then a 6x+9 over-estimate of the true output size, which is all
// the covering constructions need.

#include "engine.hpp"

#include <functional>

namespace sumsetkit {

struct PromiseInstance {
    SparseSet A, B;
    Int lo = 0, hi = 0;
    SparseSet T;  // promised superset of (A+B) ∩ [lo, hi]
};

// Defined in interval.hpp; the level solver below feeds each halved instance
// through the interval covering, which is why these two headers come as a
// pair (include interval.hpp to get the full wiring).
Covering find_interval_covering(const SparseSet& A, const SparseSet& B, Int lo, Int hi,
                                Int out_estimate);

namespace detail {

inline SparseSet halve(const SparseSet& s, int shift) {
    if (shift == 0) return s;
    std::vector<Int> xs;
    xs.reserve(s.size());
    for (Int x : s.elems()) xs.push_back(x >> shift);
    return SparseSet::from_unsorted(std::move(xs), s.allow_negative());
}

struct ChainResult {
    SparseSet s0;       // (A+B) ∩ [lo, hi]
    Int t0_size = 0;    // õut
};

/// Runs the level chain top-down, checking the promise invariants at every
/// level. `level_solver` must return (A+B) ∩ [lo, hi] exactly for the given
/// level instance; `T` is passed along for contract checking and so callers
/// can exploit its cardinality.
inline ChainResult run_chain(
    const SparseSet& A, const SparseSet& B, Int lo, Int hi,
    const std::function<SparseSet(const PromiseInstance&)>& level_solver) {
    if (hi < lo) throw std::invalid_argument("run_chain: hi < lo");
    int r = 0;
    while ((Int{1} << r) < hi - lo) ++r;

    // coarsest promise: the whole (tiny) value range
    std::vector<Int> top;
    for (Int t = (lo >> r); t <= (hi >> r); ++t) top.push_back(t);
    SparseSet T(std::move(top), true);

    SparseSet S;
    std::vector<std::size_t> level_sizes;
    for (int i = r;; --i) {
        PromiseInstance inst{halve(A, i), halve(B, i), lo >> i, hi >> i, T};
        S = level_solver(inst);
        for (Int s : S.elems())
            if (!T.contains(s))
                throw std::logic_error("run_chain: level answer escapes the promise set");
        if (static_cast<Int>(T.size()) > 6 * static_cast<Int>(S.size()) + 9)
            throw std::logic_error("run_chain: promise set too large");
        level_sizes.push_back(S.size());
        if (i == 0) break;
        // next finer promise
        std::vector<Int> nxt;
        nxt.reserve(3 * S.size() + 3);
        for (Int s : S.elems())
            for (Int d : {0, 1, 2}) nxt.push_back(2 * s + d);
        nxt.push_back(lo >> (i - 1));
        nxt.push_back((lo >> (i - 1)) + 1);
        nxt.push_back(hi >> (i - 1));
        T = SparseSet::from_unsorted(std::move(nxt), true);
    }
    // every level stays within a factor ~2 of the final output size
    for (std::size_t sz : level_sizes)
        if (static_cast<Int>(sz) > 2 * static_cast<Int>(S.size()) + 2)
            throw std::logic_error("run_chain: level set larger than 2*out + 2");
    ChainResult res;
    res.t0_size = static_cast<Int>(T.size());
    res.s0 = std::move(S);
    return res;
}

/// Materializes (A+B) ∩ [lo,hi] from a covering via per-rectangle sumsets.
inline SparseSet sumset_from_covering(const SparseSet& A, const SparseSet& B, Int lo, Int hi,
                                      const Covering& cov, const EngineConfig& cfg) {
    std::vector<Int> acc;
    for (const auto& r : cov.rects) {
        std::vector<Int> ai(A.elems().begin() + (r.i_lo - 1), A.elems().begin() + r.i_hi);
        std::vector<Int> bj(B.elems().begin() + (r.j_lo - 1), B.elems().begin() + r.j_hi);
        SparseSet s = sumset(SparseSet(std::move(ai), true), SparseSet(std::move(bj), true), cfg);
        for (Int x : s.elems())
            if (x >= lo && x <= hi) acc.push_back(x);
    }
    return SparseSet::from_unsorted(std::move(acc), true);
}

/// The concrete level solver: normalize, build the interval covering sized
/// by |T|, evaluate it with the engine.
inline SparseSet solve_level_via_covering(const PromiseInstance& inst, const EngineConfig& cfg) {
    Instance norm = normalize({inst.A, inst.B, inst.lo, inst.hi, {}});
    if (norm.A.empty() || norm.B.empty()) return SparseSet{};
    Covering cov = find_interval_covering(norm.A, norm.B, norm.lo, norm.hi,
                                          static_cast<Int>(inst.T.size()));
    return sumset_from_covering(norm.A, norm.B, norm.lo, norm.hi, cov, cfg);
}

}  // namespace detail

/// Generic driver over a user-supplied promise-problem oracle.
inline SparseSet solve_via_promise(
    const SparseSet& A, const SparseSet& B, Int lo, Int hi,
    const std::function<SparseSet(const PromiseInstance&)>& oracle) {
    return detail::run_chain(A, B, lo, hi, oracle).s0;
}

/// õut with out <= õut <= 6*out + 9.
inline Int approx_out(const SparseSet& A, const SparseSet& B, Int lo, Int hi,
                      const EngineConfig& cfg = {}) {
    Instance norm = normalize({A, B, lo, hi, {}});
    if (norm.A.empty() || norm.B.empty()) return 9;
    return detail::run_chain(norm.A, norm.B, lo, hi,
                             [&](const PromiseInstance& inst) {
                                 return detail::solve_level_via_covering(inst, cfg);
                             })
        .t0_size;
}

}  // namespace sumsetkit
