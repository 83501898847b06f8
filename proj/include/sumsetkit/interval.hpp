#pragma once

// Interval-restricted sumsets via the sqrt(nm*out)-cost unique rectangle
// covering: chop the sorted orders of A and B into q ~ sqrt(nm/õut) nearly
// equal blocks and keep exactly the block pairs whose sum range intersects
// [lo, hi]. Interior diagonals cost at most `out` each; boundary rectangles
// are small; total cost O(sqrt(nm*õut)).

#include "output_size.hpp"

namespace sumsetkit {

inline Covering find_interval_covering(const SparseSet& A, const SparseSet& B, Int lo, Int hi,
                                       Int out_estimate) {
    const Int n = static_cast<Int>(A.size());
    const Int m = static_cast<Int>(B.size());
    if (n == 0 || m == 0) return Covering{};
    Int oe = std::max<Int>(1, out_estimate);
    Int q = static_cast<Int>(std::ceil(std::sqrt(static_cast<double>(n) *
                                                 static_cast<double>(m) / static_cast<double>(oe))));
    q = std::clamp<Int>(q, 1, std::min(n, m));

    // block b of n items: indices (floor((b-1)n/q), floor(bn/q)], 1-based;
    // sizes differ by at most one, which is all the cost analysis needs
    auto block = [q](Int total, Int b) {
        return std::pair<Int, Int>{(b - 1) * total / q + 1, b * total / q};
    };

    Covering cov;
    cov.is_unique = true;
    cov.is_rectangle = true;
    for (Int ba = 1; ba <= q; ++ba) {
        auto [ilo, ihi] = block(n, ba);
        if (ilo > ihi) continue;
        for (Int bb = 1; bb <= q; ++bb) {
            auto [jlo, jhi] = block(m, bb);
            if (jlo > jhi) continue;
            const Int min_sum = A.at1(ilo) + B.at1(jlo);
            const Int max_sum = A.at1(ihi) + B.at1(jhi);
            if (min_sum <= hi && max_sum >= lo) cov.rects.push_back({ilo, ihi, jlo, jhi});
        }
    }
    return cov;
}

namespace detail {

/// Shifts signed instances into the non-negative domain the engine handles.
struct ShiftedInstance {
    SparseSet A, B;
    Int lo, hi;
    Int shift;  // subtract from every output sum
};

inline ShiftedInstance shift_nonneg(const SparseSet& A, const SparseSet& B, Int lo, Int hi) {
    Int sa = A.empty() || A.min() >= 0 ? 0 : -A.min();
    Int sb = B.empty() || B.min() >= 0 ? 0 : -B.min();
    if (sa == 0 && sb == 0) return {A, B, lo, hi, 0};
    std::vector<Int> a2, b2;
    for (Int a : A.elems()) a2.push_back(a + sa);
    for (Int b : B.elems()) b2.push_back(b + sb);
    return {SparseSet(std::move(a2)), SparseSet(std::move(b2)), lo + sa + sb, hi + sa + sb,
            sa + sb};
}

inline ChainResult interval_chain(const SparseSet& A, const SparseSet& B, Int lo, Int hi,
                                  const EngineConfig& cfg) {
    return run_chain(A, B, lo, hi, [&](const PromiseInstance& inst) {
        return solve_level_via_covering(inst, cfg);
    });
}

}  // namespace detail

/// Exact (A+B) ∩ [lo, hi]. Accepts signed inputs (shifted internally).
inline SparseSet solve_interval(const SparseSet& A, const SparseSet& B, Int lo, Int hi,
                                const EngineConfig& cfg = {}) {
    if (A.empty() || B.empty() || hi < lo) return SparseSet{};
    auto sh = detail::shift_nonneg(A, B, lo, hi);
    Instance norm = normalize({sh.A, sh.B, std::max<Int>(sh.lo, 0), sh.hi, {}});
    if (norm.A.empty() || norm.B.empty()) return SparseSet{};
    SparseSet s = static_cast<Int>(norm.A.size() * norm.B.size()) <= 1024
                      ? brute_sumset(norm.A, norm.B, norm.lo, norm.hi)
                      : detail::interval_chain(norm.A, norm.B, norm.lo, norm.hi, cfg).s0;
    if (sh.shift == 0) return s;
    std::vector<Int> out;
    out.reserve(s.size());
    for (Int x : s.elems()) out.push_back(x - sh.shift);
    return SparseSet(std::move(out), true);
}

/// Exact (f*g) restricted to [lo, hi], multiplicities preserved. Built from
/// the unique covering, so each index pair contributes exactly once.
inline SparseVec convolve_interval(const SparseVec& f, const SparseVec& g, Int lo, Int hi,
                                   const EngineConfig& cfg = {}) {
    if (f.empty() || g.empty() || hi < lo) return SparseVec{};
    SparseSet A = f.support(), B = g.support();
    Instance norm = normalize({A, B, std::max<Int>(lo, 0), hi, {}});
    if (norm.A.empty() || norm.B.empty()) return SparseVec{};
    Int oe = detail::interval_chain(norm.A, norm.B, norm.lo, norm.hi, cfg).t0_size;
    Covering cov = find_interval_covering(norm.A, norm.B, norm.lo, norm.hi, oe);

    // map surviving support back to vector entries
    auto pick = [](const SparseVec& v, const SparseSet& keep) {
        std::vector<SparseVec::Entry> es;
        for (const auto& e : v.entries())
            if (keep.contains(e.index)) es.push_back(e);
        return SparseVec(std::move(es), v.value_bound());
    };
    SparseVec fn = pick(f, norm.A), gn = pick(g, norm.B);

    std::map<Int, unsigned __int128> acc;
    for (const auto& r : cov.rects) {
        std::vector<SparseVec::Entry> fi(fn.entries().begin() + (r.i_lo - 1),
                                         fn.entries().begin() + r.i_hi);
        std::vector<SparseVec::Entry> gj(gn.entries().begin() + (r.j_lo - 1),
                                         gn.entries().begin() + r.j_hi);
        SparseVec part = convolve(SparseVec(std::move(fi), f.value_bound()),
                                  SparseVec(std::move(gj), g.value_bound()), cfg);
        for (const auto& e : part.entries())
            if (e.index >= lo && e.index <= hi) acc[e.index] += static_cast<unsigned __int128>(e.value);
    }
    std::vector<SparseVec::Entry> out;
    out.reserve(acc.size());
    for (auto& [idx, val] : acc) {
        if (val > static_cast<unsigned __int128>(f.value_bound()))
            throw OverflowError("convolve_interval: value exceeds value_bound");
        out.push_back({idx, static_cast<Int>(val)});
    }
    return SparseVec(std::move(out), f.value_bound());
}

}  // namespace sumsetkit
