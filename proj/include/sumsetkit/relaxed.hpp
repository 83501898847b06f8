#pragma once

// Relaxed prefix coverings: allow kept rectangles to produce sums slightly
// above u — never beyond (1+zeta)u — in exchange for a covering of cost
// O(zeta^-1 * |(A+B) ∩ [(1+zeta)u]|) built without any output-size learning.
//
// zeta is rounded down to a power of two and u padded up to one by shifting
// A; values are then cut into blocks of power-of-two length ~zeta*u/2 and a
// block pair is kept iff its minimum sum is at most u.

#include "output_size.hpp"

namespace sumsetkit {

inline Covering find_relaxed_covering(const SparseSet& A, const SparseSet& B, Int u, double zeta) {
    if (zeta <= 0.0 || zeta > 1.0)
        throw std::invalid_argument("find_relaxed_covering: zeta must be in (0, 1]");
    if (u < 1) throw std::invalid_argument("find_relaxed_covering: u must be >= 1");
    if (A.empty() || B.empty()) return Covering{};

    int ell = 0;  // zeta rounded down to 2^-ell
    while (std::ldexp(1.0, -ell) > zeta + 1e-12) ++ell;
    const Int shift = static_cast<Int>(std::bit_ceil(static_cast<std::uint64_t>(u))) - u;
    const Int u_pad = u + shift;
    // block length: power of two, <= zeta*u/2 + 1 so kept sums stay within
    // (1+zeta)u after unshifting
    const Int L = static_cast<Int>(
        std::bit_floor(static_cast<std::uint64_t>(std::max<Int>(1, (u >> (ell + 1)) + 1))));

    // value blocks -> index intervals (1-based, block r holds values
    // [(r-1)L, rL-1] of the shifted set)
    auto blocks = [&](const SparseSet& s, Int off) {
        std::vector<std::pair<Int, Int>> iv;  // (index lo, index hi) per block, 1-based
        const auto& xs = s.elems();
        std::size_t pos = 0;
        while (pos < xs.size()) {
            const Int blk = (xs[pos] + off) / L;
            std::size_t end = pos;
            while (end < xs.size() && (xs[end] + off) / L == blk) ++end;
            iv.emplace_back(static_cast<Int>(pos) + 1, static_cast<Int>(end));
            pos = end;
        }
        return iv;
    };
    auto ia = blocks(A, shift);
    auto ib = blocks(B, 0);

    Covering cov;
    cov.is_unique = true;
    for (auto [ilo, ihi] : ia) {
        const Int amin = A.at1(ilo) + shift;
        for (auto [jlo, jhi] : ib) {
            if (amin + B.at1(jlo) > u_pad) break;  // blocks sorted by min value
            cov.rects.push_back({ilo, ihi, jlo, jhi});
            // the relaxation guarantee, checked outright
            if (A.at1(ihi) + B.at1(jhi) > u + static_cast<Int>(zeta * static_cast<double>(u)) + 1)
                throw std::logic_error("find_relaxed_covering: kept sum beyond (1+zeta)u");
        }
    }
    return cov;
}

/// Exact (A+B) ∩ [0, u] through the relaxed covering.
inline SparseSet solve_prefix_relaxed(const SparseSet& A, const SparseSet& B, Int u, double zeta,
                                      const EngineConfig& cfg = {}) {
    if (A.empty() || B.empty() || u < 0) return SparseSet{};
    Instance norm = normalize({A, B, 0, u, {}});
    if (norm.A.empty() || norm.B.empty()) return SparseSet{};
    if (u == 0 || static_cast<Int>(norm.A.size() * norm.B.size()) <= 1024)
        return brute_sumset(norm.A, norm.B, 0, u);
    Covering cov = find_relaxed_covering(norm.A, norm.B, u, zeta);
    return detail::sumset_from_covering(norm.A, norm.B, 0, u, cov, cfg);
}

}  // namespace sumsetkit
