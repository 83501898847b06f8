#pragma once

// The out^{4/3} unique rectangle covering for prefix-restricted sumsets.
//
// Subproblems (index rectangles) are processed in batches of equal type
// (x, y) = (ceil(log|I|), ceil(log|J|)), largest type first. Cheap types
// (2^{x+y} <= õut) go straight to the output. For an expensive type the
// batch's sumsets are computed "in parallel" under a cooperative scheduler
// with doubling round budgets; once at most q = ceil(õut^{1/3}) calls remain
// unfinished, the stragglers are cancelled and split at the midpoint row,
// with the all-below-u quadrant emitted, the all-above-u quadrant dropped,
// and the two mixed quadrants re-queued as strictly smaller types.

#include "interval.hpp"

namespace sumsetkit {

struct Subproblem {
    IndexRect rect;

    static int clog2(Int v) {
        int x = 0;
        while ((Int{1} << x) < v) ++x;
        return x;  // ceil(log2 v), with clog2(1) = 0
    }
    std::pair<int, int> type_key() const { return {clog2(rect.rows()), clog2(rect.cols())}; }
};

struct SplitResult {
    std::optional<IndexRect> output_rect;  // the all-below-u quadrant
    std::vector<Subproblem> children;      // 0-2 strictly smaller subproblems
};

/// One midpoint split. The output rectangle satisfies max-sum <= u; the
/// dropped quadrant contains no sum <= u; children have strictly smaller
/// type.
inline SplitResult split_subproblem(const Subproblem& sub, const SparseSet& A, const SparseSet& B,
                                    Int u) {
    const auto [i1, i2, j1, j2] = sub.rect;
    const Int i = (i1 + i2) / 2;

    // max j in J with A_i + B_j <= u
    const auto& bs = B.elems();
    auto it = std::upper_bound(bs.begin() + (j1 - 1), bs.begin() + j2, u - A.at1(i));
    const Int j = static_cast<Int>(it - bs.begin());  // 0 entries of J qualify when j < j1

    SplitResult res;
    if (j >= j1) res.output_rect = IndexRect{i1, i, j1, j};
    if (j < j2 && i > i1)  // (I1, J2); when |I|=1 and J1 is empty this child
        res.children.push_back({{i1, i, j + 1, j2}});  // would equal sub itself
    else if (j < j2 && j >= j1)
        res.children.push_back({{i1, i, j + 1, j2}});
    if (i < i2 && j >= j1) res.children.push_back({{i + 1, i2, j1, j}});
    return res;
}

namespace detail {

inline void check_staircase(const std::vector<Subproblem>& batch) {
    std::vector<IndexRect> rs;
    rs.reserve(batch.size());
    for (const auto& s : batch) rs.push_back(s.rect);
    std::sort(rs.begin(), rs.end(),
              [](const IndexRect& a, const IndexRect& b) { return a.i_lo < b.i_lo; });
    for (std::size_t k = 1; k < rs.size(); ++k) {
        if (rs[k].i_lo <= rs[k - 1].i_hi || rs[k].j_hi >= rs[k - 1].j_lo)
            throw std::logic_error("covering_construction: same-type batch is not a staircase");
    }
}

}  // namespace detail

inline Covering covering_construction(const SparseSet& A, const SparseSet& B, Int u,
                                      Int out_estimate, const EngineConfig& cfg = {}) {
    const Int n = static_cast<Int>(A.size());
    const Int m = static_cast<Int>(B.size());
    Covering cov;
    cov.is_unique = true;
    if (n == 0 || m == 0) return cov;
    const Int oe = std::max<Int>(1, out_estimate);
    if (n * m <= std::max<Int>(64, oe)) {  // small-instance floor: whole grid
        cov.rects.push_back({1, n, 1, m});
        return cov;
    }
    const Int q = static_cast<Int>(std::ceil(std::cbrt(static_cast<double>(oe))));
    const Int batch_cap = 2 * q * std::max<Int>(1, Subproblem::clog2(n)) *
                          std::max<Int>(1, Subproblem::clog2(m));

    std::map<std::pair<int, int>, std::vector<Subproblem>,
             decltype([](const std::pair<int, int>& a, const std::pair<int, int>& b) {
                 // the total order: by x+y, then by x
                 return std::pair{a.first + a.second, a.first} <
                        std::pair{b.first + b.second, b.first};
             })>
        queue;
    queue[{Subproblem::clog2(n), Subproblem::clog2(m)}].push_back({{1, n, 1, m}});

    while (!queue.empty()) {
        auto node = queue.extract(std::prev(queue.end()));
        const auto [x, y] = node.key();
        std::vector<Subproblem> batch = std::move(node.mapped());
        detail::check_staircase(batch);
        if (static_cast<Int>(batch.size()) > batch_cap)
            throw std::logic_error("covering_construction: per-type subproblem count exceeded");

        if ((Int{1} << (x + y)) <= oe) {
            for (const auto& s : batch) cov.rects.push_back(s.rect);
            continue;
        }

        std::vector<Subproblem> to_split;
        if (static_cast<Int>(batch.size()) > q) {
            // cooperative rounds with doubling budgets
            std::vector<SteppableCall> calls;
            calls.reserve(batch.size());
            for (const auto& s : batch) {
                const auto& r = s.rect;
                std::vector<Int> ai(A.elems().begin() + (r.i_lo - 1), A.elems().begin() + r.i_hi);
                std::vector<Int> bj(B.elems().begin() + (r.j_lo - 1), B.elems().begin() + r.j_hi);
                calls.push_back(start_sumset(SparseSet(std::move(ai), true),
                                             SparseSet(std::move(bj), true), cfg));
            }
            Int unfinished = static_cast<Int>(calls.size());
            for (std::uint64_t budget = 1; unfinished > q; budget *= 2) {
                for (std::size_t c = 0; c < calls.size() && unfinished > q; ++c) {
                    if (calls[c].state() != SteppableCall::State::InProgress) continue;
                    if (step(calls[c], budget) == SteppableCall::State::Finished) --unfinished;
                }
            }
            for (std::size_t c = 0; c < calls.size(); ++c) {
                if (calls[c].state() == SteppableCall::State::Finished)
                    cov.rects.push_back(batch[c].rect);
                else {
                    cancel(calls[c]);
                    to_split.push_back(batch[c]);
                }
            }
        } else {
            to_split = std::move(batch);
        }

        for (const auto& s : to_split) {
            SplitResult sp = split_subproblem(s, A, B, u);
            if (sp.output_rect) cov.rects.push_back(*sp.output_rect);
            for (const auto& child : sp.children) {
                if (child.type_key() >= s.type_key() &&
                    child.type_key().first + child.type_key().second >=
                        s.type_key().first + s.type_key().second &&
                    child.rect == s.rect)
                    throw std::logic_error("covering_construction: degenerate split");
                queue[child.type_key()].push_back(child);
            }
        }
    }
    return cov;
}

/// Exact (A+B) ∩ [0, u].
inline SparseSet solve_prefix(const SparseSet& A, const SparseSet& B, Int u,
                              const EngineConfig& cfg = {}) {
    if (A.empty() || B.empty() || u < 0) return SparseSet{};
    Instance norm = normalize({A, B, 0, u, {}});
    if (norm.A.empty() || norm.B.empty()) return SparseSet{};
    if (static_cast<Int>(norm.A.size() * norm.B.size()) <= 1024)
        return brute_sumset(norm.A, norm.B, 0, u);
    Int oe = approx_out(norm.A, norm.B, 0, u, cfg);
    Covering cov = covering_construction(norm.A, norm.B, u, oe, cfg);
    return detail::sumset_from_covering(norm.A, norm.B, 0, u, cov, cfg);
}

/// Exact (f*g) restricted to [0, u], multiplicities preserved.
inline SparseVec convolve_prefix(const SparseVec& f, const SparseVec& g, Int u,
                                 const EngineConfig& cfg = {}) {
    if (f.empty() || g.empty() || u < 0) return SparseVec{};
    SparseSet A = f.support(), B = g.support();
    Instance norm = normalize({A, B, 0, u, {}});
    if (norm.A.empty() || norm.B.empty()) return SparseVec{};
    Int oe = approx_out(norm.A, norm.B, 0, u, cfg);
    Covering cov = covering_construction(norm.A, norm.B, u, oe, cfg);

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
            if (e.index <= u) acc[e.index] += static_cast<unsigned __int128>(e.value);
    }
    std::vector<SparseVec::Entry> out;
    out.reserve(acc.size());
    for (auto& [idx, val] : acc) {
        if (val > static_cast<unsigned __int128>(f.value_bound()))
            throw OverflowError("convolve_prefix: value exceeds value_bound");
        out.push_back({idx, static_cast<Int>(val)});
    }
    return SparseVec(std::move(out), f.value_bound());
}

}  // namespace sumsetkit
