#pragma once

// Lower-bound machinery and reduction encoders.
//
// The hard instances interleave g sumset pairs (X_i, Y_i) built from a
// constant-weight code over base-m digits: same-index pairs have full-size
// sumsets (sigma), cross pairs collapse to at most alpha, and shifts place
// the even-index diagonals just above u. Any rectangle covering of such an
// instance pays Omega(g*sigma). The encoders realize the Boolean matrix
// multiplication and sliding-window Hamming distance reductions as runnable
// instance generators.

#include "interval.hpp"

#include <bit>

namespace sumsetkit {

struct CodeFamily {
    Int code_len = 0;          // t, even
    double code_delta = 0.0;   // required pairwise distance, as fraction of t
    std::vector<std::uint32_t> codewords;  // bit i = position i
};

/// Greedy constant-weight code: walk all weight-(t/2) vectors in ascending
/// bitmask order, keep those at Hamming distance >= delta*t from everything
/// kept so far.
inline CodeFamily greedy_code(Int code_len, double code_delta) {
    if (code_len <= 0 || code_len % 2 != 0 || code_len > 24)
        throw std::invalid_argument("greedy_code: code_len must be even and small");
    if (code_delta < 0.0 || code_delta >= 0.5)
        throw std::invalid_argument("greedy_code: code_delta must be in [0, 1/2)");
    CodeFamily fam{code_len, code_delta, {}};
    const double min_dist = code_delta * static_cast<double>(code_len) - 1e-9;
    for (std::uint32_t v = 0; v < (1u << code_len); ++v) {
        if (std::popcount(v) != code_len / 2) continue;
        bool ok = true;
        for (std::uint32_t w : fam.codewords)
            if (static_cast<double>(std::popcount(v ^ w)) < min_dist) {
                ok = false;
                break;
            }
        if (ok) fam.codewords.push_back(v);
    }
    return fam;
}

struct XYFamily {
    Int base = 0;
    CodeFamily code;
    Int sigma = 0;  // base^code_len
    Int alpha = 0;  // ceil(2^(delta t / 2) * base^((1 - delta/2) t))
    Int g = 0;
    std::vector<SparseSet> X_sets, Y_sets;
};

namespace detail {

/// All numbers whose base-m digits are free exactly on the positions in
/// `mask` (zero elsewhere).
inline SparseSet digit_set(Int base, Int code_len, std::uint32_t mask) {
    std::vector<Int> vals{0};
    Int pw = 1;
    for (Int i = 0; i < code_len; ++i) {
        if (mask & (1u << i)) {
            std::vector<Int> next;
            next.reserve(vals.size() * static_cast<std::size_t>(base));
            for (Int c = 0; c < base; ++c)
                for (Int v : vals) next.push_back(v + c * pw);
            vals = std::move(next);
        }
        pw *= base;
    }
    return SparseSet::from_unsorted(std::move(vals));
}

}  // namespace detail

inline XYFamily build_xy_family(Int base, const CodeFamily& code) {
    if (base < 2) throw std::invalid_argument("build_xy_family: base must be >= 2");
    XYFamily fam;
    fam.base = base;
    fam.code = code;
    fam.g = static_cast<Int>(code.codewords.size());
    fam.sigma = 1;
    for (Int i = 0; i < code.code_len; ++i) {
        if (fam.sigma > (Int{1} << 50) / base)
            throw OverflowError("build_xy_family: base^code_len too large");
        fam.sigma *= base;
    }
    const double t = static_cast<double>(code.code_len);
    fam.alpha = static_cast<Int>(std::ceil(
                    std::exp2(code.code_delta * t / 2.0) *
                    std::pow(static_cast<double>(base), (1.0 - code.code_delta / 2.0) * t))) +
                1;
    const std::uint32_t all = (1u << code.code_len) - 1;
    for (std::uint32_t w : code.codewords) {
        // X free where the codeword is 0, Y free where it is 1
        fam.X_sets.push_back(detail::digit_set(base, code.code_len, all & ~w));
        fam.Y_sets.push_back(detail::digit_set(base, code.code_len, w));
    }
    if (fam.sigma <= 1'000'000) {
        const std::size_t half =
            static_cast<std::size_t>(std::llround(std::pow(
                static_cast<double>(base), static_cast<double>(code.code_len) / 2.0)));
        for (Int i = 0; i < fam.g; ++i) {
            if (fam.X_sets[static_cast<std::size_t>(i)].size() != half ||
                fam.Y_sets[static_cast<std::size_t>(i)].size() != half)
                throw std::logic_error("build_xy_family: wrong block size");
            if (static_cast<Int>(brute_sumset(fam.X_sets[static_cast<std::size_t>(i)],
                                              fam.Y_sets[static_cast<std::size_t>(i)], 0,
                                              fam.sigma * 2)
                                     .size()) != fam.sigma)
                throw std::logic_error("build_xy_family: |X_i + Y_i| != sigma");
            for (Int j = 0; j < fam.g; ++j) {
                if (i == j) continue;
                if (static_cast<Int>(brute_sumset(fam.X_sets[static_cast<std::size_t>(i)],
                                                  fam.Y_sets[static_cast<std::size_t>(j)], 0,
                                                  fam.sigma * 2)
                                         .size()) > fam.alpha)
                    throw std::logic_error("build_xy_family: cross sumset exceeds alpha");
            }
        }
    }
    return fam;
}

struct HardInstance {
    Instance inst;
    Int g = 0, sigma = 0, alpha = 0, M = 0;
};

inline HardInstance build_hard_instance(const XYFamily& fam) {
    if (fam.g < 2) throw std::invalid_argument("build_hard_instance: need g >= 2");
    HardInstance h;
    h.g = fam.g;
    h.sigma = fam.sigma;
    h.alpha = fam.alpha;
    h.M = 100 * (fam.sigma + fam.g);
    const Int M = h.M;
    if (M > Int{3'000'000} || fam.g * M > (Int{1} << 62) / M)
        throw OverflowError("build_hard_instance: parameters too large");
    std::vector<Int> a, b;
    for (Int i = 1; i <= fam.g; ++i) {
        const Int shift = i * M * M + (i % 2 == 0 ? i * M : 0);
        for (Int x : fam.X_sets[static_cast<std::size_t>(i - 1)].elems()) a.push_back(x + shift);
        const Int bshift = (fam.g - i) * M * M;
        for (Int y : fam.Y_sets[static_cast<std::size_t>(i - 1)].elems()) b.push_back(y + bshift);
    }
    SparseSet A = SparseSet::from_unsorted(std::move(a));
    SparseSet B = SparseSet::from_unsorted(std::move(b));
    const std::size_t half = fam.X_sets.front().size();
    if (A.size() != static_cast<std::size_t>(fam.g) * half ||
        B.size() != static_cast<std::size_t>(fam.g) * half)
        throw std::logic_error("build_hard_instance: block collision");
    h.inst = {std::move(A), std::move(B), 0, fam.g * M * M + 2 * fam.sigma, {}};
    return h;
}

/// Binary entropy, base-2 logs; h(0) = h(1) = 0.
inline double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// The covering-cost lower-bound exponent c(delta, m).
inline double lower_bound_exponent(double code_delta, Int base) {
    if (code_delta <= 0.0 || code_delta >= 0.5 || base < 2)
        throw std::invalid_argument("lower_bound_exponent: bad parameters");
    const double h = binary_entropy(code_delta);
    const double lm = std::log2(static_cast<double>(base));
    const double num = (1.0 - h) + lm;
    const double den =
        std::max((2.0 - 2.0 * h + code_delta / 2.0) + (1.0 - code_delta / 2.0) * lm, lm);
    return num / den;
}

// ---------------------------------------------------------------------------
// Reduction encoders (signed instances).

using BoolMatrix = std::vector<std::vector<int>>;

struct BmmEncoding {
    Instance inst;  // signed B
    Int n = 0, M = 0;

    /// Reads the product off a solve_interval result on `inst`.
    BoolMatrix decode(const SparseSet& sums) const {
        BoolMatrix C(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
        for (Int i = 1; i <= n; ++i)
            for (Int j = 1; j <= n; ++j)
                if (sums.contains(2 * M + i + n * j))
                    C[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = 1;
        return C;
    }
};

inline BmmEncoding encode_bmm(const BoolMatrix& Abar, const BoolMatrix& Bbar) {
    const Int n = static_cast<Int>(Abar.size());
    if (n < 1 || Bbar.size() != Abar.size())
        throw std::invalid_argument("encode_bmm: need square matrices of equal size");
    BmmEncoding enc;
    enc.n = n;
    enc.M = 10 * (n * n + n) + 1;
    const Int M = enc.M;
    std::vector<Int> a, b;
    for (Int i = 1; i <= n; ++i)
        for (Int r = 1; r <= n; ++r)
            a.push_back(r * M * M +
                        Abar[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(r - 1)] * M +
                        i);
    for (Int r = 1; r <= n; ++r)
        for (Int j = 1; j <= n; ++j)
            b.push_back(-r * M * M +
                        Bbar[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(j - 1)] * M +
                        n * j);
    enc.inst = {SparseSet::from_unsorted(std::move(a)),
                SparseSet::from_unsorted(std::move(b), true), 2 * M + n + 1, 2 * M + n * n + n,
                {}};
    return enc;
}

struct SwhdEncoding {
    Instance inst;       // signed B, per the construction
    SparseVec fa, fb;    // shifted non-negative indicator vectors
    Int lo = 0, hi = 0;  // window for convolve_interval on (fa, fb)
    Int n = 0, M = 0;

    /// Distances for windows i = 1..n from a convolve_interval(fa, fb, lo, hi)
    /// result; distance_i = n - multiplicity(i).
    std::vector<Int> decode(const SparseVec& conv) const {
        std::vector<Int> dist(static_cast<std::size_t>(n), n);
        const Int shift = lo - 1;  // conv index (i + shift) corresponds to window i
        for (const auto& e : conv.entries()) {
            const Int i = e.index - shift;
            if (i >= 1 && i <= n) dist[static_cast<std::size_t>(i - 1)] = n - e.value;
        }
        return dist;
    }
};

inline SwhdEncoding encode_swhd(const std::vector<Int>& text, const std::vector<Int>& pattern) {
    const Int n = static_cast<Int>(pattern.size());
    if (n < 1 || text.size() != 2 * pattern.size())
        throw std::invalid_argument("encode_swhd: text must be twice the pattern length");
    SwhdEncoding enc;
    enc.n = n;
    enc.M = 100 * n;
    const Int M = enc.M;
    std::vector<Int> a, b;
    for (Int i = 1; i <= 2 * n; ++i) a.push_back(M * text[static_cast<std::size_t>(i - 1)] + i);
    for (Int j = 1; j <= n; ++j) b.push_back(-M * pattern[static_cast<std::size_t>(j - 1)] - j);
    SparseSet A = SparseSet::from_unsorted(a);
    SparseSet B = SparseSet::from_unsorted(b, true);
    enc.inst = {A, B, 1, n, {}};

    // shift B to the non-negative domain for the convolution solver
    const Int s = -B.min();
    std::vector<SparseVec::Entry> ea, eb;
    for (Int x : A.elems()) ea.push_back({x, 1});
    for (Int x : B.elems()) eb.push_back({x + s, 1});
    enc.fa = SparseVec(std::move(ea));
    enc.fb = SparseVec(std::move(eb));
    enc.lo = 1 + s;
    enc.hi = n + s;
    return enc;
}

}  // namespace sumsetkit
