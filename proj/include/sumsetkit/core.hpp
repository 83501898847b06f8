#pragma once

// Core domain types for restricted sumset / sparse convolution computations:
// sorted integer sets, sparse non-negative vectors, index rectangles and
// rectangle coverings, plus the brute-force oracles and the covering
// validator used throughout the test suites.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sumsetkit {

using Int = std::int64_t;

struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A strictly increasing sequence of integers. Elements are non-negative
/// unless the set was explicitly created with `allow_negative` (signed sets
/// only arise inside the hardness-reduction encoders).
class SparseSet {
public:
    SparseSet() = default;

    explicit SparseSet(std::vector<Int> elems, bool allow_negative = false)
        : elems_(std::move(elems)), allow_negative_(allow_negative) {
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            if (i > 0 && elems_[i] <= elems_[i - 1])
                throw std::invalid_argument("SparseSet: elements must be strictly increasing");
            if (!allow_negative_ && elems_[i] < 0)
                throw std::invalid_argument("SparseSet: negative element in unsigned set");
        }
    }

    /// Builds a set from arbitrary input, sorting and deduplicating.
    static SparseSet from_unsorted(std::vector<Int> elems, bool allow_negative = false) {
        std::sort(elems.begin(), elems.end());
        elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
        return SparseSet(std::move(elems), allow_negative);
    }

    const std::vector<Int>& elems() const { return elems_; }
    bool allow_negative() const { return allow_negative_; }
    bool empty() const { return elems_.empty(); }
    std::size_t size() const { return elems_.size(); }

    /// 1-based access, matching the sorted-order indexing A_1 < ... < A_n.
    Int at1(Int i) const { return elems_.at(static_cast<std::size_t>(i - 1)); }

    Int min() const { return elems_.front(); }
    Int max() const { return elems_.back(); }

    bool contains(Int x) const {
        return std::binary_search(elems_.begin(), elems_.end(), x);
    }

    bool operator==(const SparseSet& o) const { return elems_ == o.elems_; }

private:
    std::vector<Int> elems_;
    bool allow_negative_ = false;
};

/// Sparse vector with strictly increasing indices and strictly positive
/// integer values. Convolution results are checked against `value_bound`.
class SparseVec {
public:
    struct Entry {
        Int index;
        Int value;
        bool operator==(const Entry&) const = default;
    };

    static constexpr Int kDefaultValueBound = (Int{1} << 62) - 1;

    SparseVec() = default;

    explicit SparseVec(std::vector<Entry> entries, Int value_bound = kDefaultValueBound)
        : entries_(std::move(entries)), value_bound_(value_bound) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i].index < 0)
                throw std::invalid_argument("SparseVec: negative index");
            if (entries_[i].value <= 0)
                throw std::invalid_argument("SparseVec: values must be positive");
            if (i > 0 && entries_[i].index <= entries_[i - 1].index)
                throw std::invalid_argument("SparseVec: indices must be strictly increasing");
        }
    }

    /// Indicator vector of a set: value 1 at every element.
    static SparseVec indicator(const SparseSet& s) {
        std::vector<Entry> es;
        es.reserve(s.size());
        for (Int x : s.elems()) es.push_back({x, 1});
        return SparseVec(std::move(es));
    }

    const std::vector<Entry>& entries() const { return entries_; }
    Int value_bound() const { return value_bound_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    SparseSet support() const {
        std::vector<Int> xs;
        xs.reserve(entries_.size());
        for (const auto& e : entries_) xs.push_back(e.index);
        return SparseSet(std::move(xs));
    }

    bool operator==(const SparseVec& o) const { return entries_ == o.entries_; }

private:
    std::vector<Entry> entries_;
    Int value_bound_ = kDefaultValueBound;
};

/// A pair of 1-based inclusive index intervals into the sorted orders of A
/// and B. Empty rectangles are never stored.
struct IndexRect {
    Int i_lo, i_hi, j_lo, j_hi;

    Int rows() const { return i_hi - i_lo + 1; }
    Int cols() const { return j_hi - j_lo + 1; }
    bool operator==(const IndexRect&) const = default;
};

struct Covering {
    std::vector<IndexRect> rects;
    bool is_unique = false;
    bool is_rectangle = true;
    // Filled in lazily by validate_covering / covering_cost.
    long long cached_cost = -1;
};

/// An interval-restricted sumset instance (A + B) ∩ [lo, hi].
/// lo == 0 is the prefix-restricted case.
struct Instance {
    SparseSet A, B;
    Int lo = 0;
    Int hi = 0;
    std::optional<Int> out_estimate;
};

// ---------------------------------------------------------------------------
// Brute-force oracles (test reference implementations; quadratic time).

inline SparseSet brute_sumset(const SparseSet& A, const SparseSet& B, Int lo, Int hi) {
    std::vector<Int> sums;
    sums.reserve(A.size() * B.size());
    for (Int a : A.elems())
        for (Int b : B.elems()) {
            Int s = a + b;
            if (s >= lo && s <= hi) sums.push_back(s);
        }
    return SparseSet::from_unsorted(std::move(sums), true);
}

inline SparseVec brute_convolve(const SparseVec& f, const SparseVec& g, Int lo, Int hi) {
    std::map<Int, Int> acc;
    for (const auto& ef : f.entries())
        for (const auto& eg : g.entries()) {
            Int s = ef.index + eg.index;
            if (s < lo || s > hi) continue;
            __int128 prod = static_cast<__int128>(ef.value) * eg.value;
            __int128 next = static_cast<__int128>(acc[s]) + prod;
            if (next > f.value_bound())
                throw OverflowError("brute_convolve: value exceeds value_bound");
            acc[s] = static_cast<Int>(next);
        }
    std::vector<SparseVec::Entry> es;
    es.reserve(acc.size());
    for (auto [idx, val] : acc)
        if (val != 0) es.push_back({idx, val});
    return SparseVec(std::move(es), f.value_bound());
}

/// Bellman-style dynamic program over [0, t]; the SubsetSum oracle.
inline SparseSet brute_subset_sums(const SparseSet& X, Int t) {
    std::vector<char> reachable(static_cast<std::size_t>(t) + 1, 0);
    reachable[0] = 1;
    for (Int x : X.elems()) {
        if (x <= 0) throw std::invalid_argument("brute_subset_sums: elements must be positive");
        if (x > t) continue;
        for (Int s = t; s >= x; --s)
            if (reachable[static_cast<std::size_t>(s - x)]) reachable[static_cast<std::size_t>(s)] = 1;
    }
    std::vector<Int> out;
    for (Int s = 0; s <= t; ++s)
        if (reachable[static_cast<std::size_t>(s)]) out.push_back(s);
    return SparseSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Covering validation (test-only; O(sum |I||J|)).

struct ValidationReport {
    bool covers = false;
    bool unique = false;
    bool rectangular = true;  // rects are index intervals by construction
    long long cost = 0;
    long long uncovered_pairs = 0;
    long long multi_covered_pairs = 0;
};

inline ValidationReport validate_covering(const Instance& inst, const Covering& cov) {
    const auto& A = inst.A.elems();
    const auto& B = inst.B.elems();
    const Int n = static_cast<Int>(A.size());
    const Int m = static_cast<Int>(B.size());

    ValidationReport rep;
    std::vector<std::uint32_t> count(static_cast<std::size_t>(n * m), 0);
    for (const auto& r : cov.rects) {
        if (r.i_lo < 1 || r.i_hi > n || r.j_lo < 1 || r.j_hi > m || r.i_lo > r.i_hi ||
            r.j_lo > r.j_hi)
            throw std::invalid_argument("validate_covering: rectangle out of range");
        std::set<Int> sums;
        for (Int i = r.i_lo; i <= r.i_hi; ++i)
            for (Int j = r.j_lo; j <= r.j_hi; ++j) {
                sums.insert(A[static_cast<std::size_t>(i - 1)] + B[static_cast<std::size_t>(j - 1)]);
                ++count[static_cast<std::size_t>((i - 1) * m + (j - 1))];
            }
        rep.cost += static_cast<long long>(sums.size());
    }

    rep.covers = true;
    rep.unique = true;
    for (Int i = 0; i < n; ++i)
        for (Int j = 0; j < m; ++j) {
            Int s = A[static_cast<std::size_t>(i)] + B[static_cast<std::size_t>(j)];
            if (s < inst.lo || s > inst.hi) continue;
            auto c = count[static_cast<std::size_t>(i * m + j)];
            if (c == 0) {
                rep.covers = false;
                ++rep.uncovered_pairs;
            } else if (c > 1) {
                rep.unique = false;
                ++rep.multi_covered_pairs;
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Normalization: drop elements that cannot contribute a sum <= hi.
// Idempotent; does not change (A+B) ∩ [lo, hi].

inline Instance normalize(const Instance& inst) {
    if (inst.A.empty() || inst.B.empty()) return {SparseSet{}, SparseSet{}, inst.lo, inst.hi, inst.out_estimate};
    const Int minA = inst.A.min();
    const Int minB = inst.B.min();
    std::vector<Int> a2, b2;
    for (Int a : inst.A.elems())
        if (a <= inst.hi - minB) a2.push_back(a);
    for (Int b : inst.B.elems())
        if (b <= inst.hi - minA) b2.push_back(b);
    bool neg = inst.A.allow_negative() || inst.B.allow_negative();
    return {SparseSet(std::move(a2), neg), SparseSet(std::move(b2), neg), inst.lo, inst.hi,
            inst.out_estimate};
}

// ---------------------------------------------------------------------------
// Ruzsa triangle inequality corollary:
//   |X+Y| * |Z| * |W| <= |X+Z| * |Z+W| * |W+Y|
// checked on concrete sets with exact integer arithmetic.

inline bool ruzsa_check(const SparseSet& X, const SparseSet& Y, const SparseSet& Z,
                        const SparseSet& W) {
    constexpr Int kInf = std::numeric_limits<Int>::max() / 4;
    auto card = [&](const SparseSet& P, const SparseSet& Q) {
        return static_cast<__int128>(brute_sumset(P, Q, -kInf, kInf).size());
    };
    __int128 lhs = card(X, Y) * static_cast<__int128>(Z.size()) * static_cast<__int128>(W.size());
    __int128 rhs = card(X, Z) * card(Z, W) * card(W, Y);
    return lhs <= rhs;
}

// ---------------------------------------------------------------------------
// Canonical text format: "# sparse-set v1" / "# sparse-vec v1" headers,
// one element (or "index value" pair) per line.

inline void write_set(std::ostream& os, const SparseSet& s) {
    os << "# sparse-set v1\n";
    for (Int x : s.elems()) os << x << '\n';
}

inline SparseSet read_set(std::istream& is, bool allow_negative = false) {
    std::string line;
    if (!std::getline(is, line) || line != "# sparse-set v1")
        throw std::invalid_argument("read_set: missing '# sparse-set v1' header");
    std::vector<Int> xs;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        xs.push_back(std::stoll(line));
    }
    return SparseSet(std::move(xs), allow_negative);
}

inline void write_vec(std::ostream& os, const SparseVec& v) {
    os << "# sparse-vec v1\n";
    for (const auto& e : v.entries()) os << e.index << ' ' << e.value << '\n';
}

inline SparseVec read_vec(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "# sparse-vec v1")
        throw std::invalid_argument("read_vec: missing '# sparse-vec v1' header");
    std::vector<SparseVec::Entry> es;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        SparseVec::Entry e{};
        ls >> e.index >> e.value;
        es.push_back(e);
    }
    return SparseVec(std::move(es));
}

/// One rectangle per line: "I_lo I_hi J_lo J_hi".
inline void dump_covering(std::ostream& os, const Covering& cov) {
    for (const auto& r : cov.rects)
        os << r.i_lo << ' ' << r.i_hi << ' ' << r.j_lo << ' ' << r.j_hi << '\n';
}

struct SubsetSumInstance {
    SparseSet X;
    Int t = 0;
};

inline void write_subset_sum(std::ostream& os, const SubsetSumInstance& inst) {
    os << "# subset-sum v1\n";
    os << "t=" << inst.t << '\n';
    for (Int x : inst.X.elems()) os << x << '\n';
}

inline SubsetSumInstance read_subset_sum(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "# subset-sum v1")
        throw std::invalid_argument("read_subset_sum: missing '# subset-sum v1' header");
    if (!std::getline(is, line) || line.rfind("t=", 0) != 0)
        throw std::invalid_argument("read_subset_sum: missing 't=<int>' header line");
    SubsetSumInstance inst;
    inst.t = std::stoll(line.substr(2));
    std::vector<Int> xs;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        xs.push_back(std::stoll(line));
    }
    inst.X = SparseSet::from_unsorted(std::move(xs));
    return inst;
}

}  // namespace sumsetkit
