#pragma once

// Output-sensitive sumset / sparse convolution engine.
//
// Backends:
//   brute           - pairwise accumulation, good up to a few thousand pairs.
//   dense_transform - full-length NTT product over two 62-bit primes + CRT.
//   sparse_recovery - Las Vegas bucket hashing: doubling estimate k, random
//                     prime p ~ C*k*log(u), cyclic length-p convolutions of
//                     the index-wrapped and position-weighted vectors; a
//                     bucket with integral weighted/unweighted ratio yields
//                     a candidate (index, value); peel and repeat until the
//                     recovered mass equals (sum f)*(sum g), then verify
//                     against one fresh prime.
//   auto            - picks the cheapest of the three by estimated work.
//
// Every call runs inside a coroutine that suspends when its step budget is
// exhausted; this is what lets the out^{4/3} covering construction run many
// sumset computations "in parallel" on one thread and cancel the stragglers.

#include "core.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <coroutine>
#include <cstdint>
#include <memory>
#include <random>
#include <utility>

namespace sumsetkit {

struct WorkBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Global work accounting shared across calls. When `cap` is set, the next
/// charge that exceeds it throws WorkBudgetExceeded out of the offending
/// call; the top-k driver uses this to abort over-budget probes.
struct WorkMeter {
    std::uint64_t used = 0;
    std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();

    void charge(std::uint64_t units) {
        used += units;
        if (used > cap) throw WorkBudgetExceeded("engine work cap exceeded");
    }
};

enum class Backend { Auto, Brute, DenseTransform, SparseRecovery };

struct EngineConfig {
    Backend backend = Backend::Auto;
    std::uint64_t rng_seed = 0x5eedULL;
    int recovery_rounds_cap = 3;    // fresh primes per estimate k before doubling
    double bucket_constant = 2.0;   // C in the prime range [C k log u, 2C k log u]
    WorkMeter* meter = nullptr;     // optional shared accounting, non-owning
};

namespace detail {

// One work unit = 1024 scalar operations (butterflies, bucket updates, ...)
// or one emitted output element.
inline constexpr std::uint64_t kOpsPerUnit = 1024;
inline constexpr std::uint64_t kChunkOps = 8 * kOpsPerUnit;

// NTT-friendly primes with power-of-two roots of unity up to 2^56.
inline constexpr std::uint64_t kP1 = 4179340454199820289ULL;  // 29 * 2^57 + 1
inline constexpr std::uint64_t kG1 = 3;
inline constexpr std::uint64_t kP2 = 1945555039024054273ULL;  // 27 * 2^56 + 1
inline constexpr std::uint64_t kG2 = 5;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + p - b;
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) d >>= 1, ++r;
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/// In-place radix-2 NTT broken into resumable chunks so a call can suspend
/// between batches of butterflies. advance() returns true once finished.
class ChunkedNtt {
public:
    ChunkedNtt(std::vector<std::uint64_t>* data, std::uint64_t p, std::uint64_t g, bool inverse)
        : a_(data), p_(p), inverse_(inverse) {
        n_ = a_->size();
        // n must be a power of two dividing the prime's 2-adic capacity.
        std::uint64_t root = powmod(g, (p_ - 1) / n_, p_);
        if (inverse_) root = powmod(root, p_ - 2, p_);
        stage_root_.resize(std::countr_zero(n_) + 1);
        // stage_root_[k] is the primitive (2^k)-th root used at stage len = 2^k
        stage_root_[std::countr_zero(n_)] = root;
        for (int k = static_cast<int>(std::countr_zero(n_)) - 1; k >= 1; --k)
            stage_root_[static_cast<std::size_t>(k)] =
                mulmod(stage_root_[static_cast<std::size_t>(k) + 1],
                       stage_root_[static_cast<std::size_t>(k) + 1], p_);
        if (n_ == 1) phase_ = inverse_ ? Phase::Scale : Phase::Done;
    }

    bool advance(std::uint64_t max_ops) {
        auto& a = *a_;
        while (max_ops > 0) {
            switch (phase_) {
                case Phase::BitRev: {
                    while (i_ < n_ && max_ops > 0) {
                        std::size_t bit = n_ >> 1;
                        for (; j_ & bit; bit >>= 1) j_ ^= bit;
                        j_ ^= bit;
                        if (i_ < j_) std::swap(a[i_], a[j_]);
                        ++i_;
                        --max_ops;
                    }
                    if (i_ == n_) {
                        phase_ = Phase::Stage;
                        begin_stage(2);
                    }
                    break;
                }
                case Phase::Stage: {
                    const std::size_t half = len_ >> 1;
                    while (max_ops > 0) {
                        std::uint64_t u = a[blk_ + off_];
                        std::uint64_t v = mulmod(a[blk_ + off_ + half], w_, p_);
                        a[blk_ + off_] = addmod(u, v, p_);
                        a[blk_ + off_ + half] = submod(u, v, p_);
                        w_ = mulmod(w_, wlen_, p_);
                        --max_ops;
                        if (++off_ == half) {
                            off_ = 0;
                            w_ = 1;
                            blk_ += len_;
                            if (blk_ == n_) {
                                if (len_ == n_) {
                                    phase_ = inverse_ ? Phase::Scale : Phase::Done;
                                    i_ = 0;
                                } else {
                                    begin_stage(len_ << 1);
                                }
                                break;
                            }
                        }
                    }
                    break;
                }
                case Phase::Scale: {
                    if (ninv_ == 0) ninv_ = powmod(n_ % p_, p_ - 2, p_);
                    while (i_ < n_ && max_ops > 0) {
                        a[i_] = mulmod(a[i_], ninv_, p_);
                        ++i_;
                        --max_ops;
                    }
                    if (i_ == n_) phase_ = Phase::Done;
                    break;
                }
                case Phase::Done:
                    return true;
            }
        }
        return phase_ == Phase::Done;
    }

    bool finished() const { return phase_ == Phase::Done; }

private:
    enum class Phase { BitRev, Stage, Scale, Done };

    void begin_stage(std::size_t len) {
        len_ = len;
        blk_ = 0;
        off_ = 0;
        w_ = 1;
        wlen_ = stage_root_[static_cast<std::size_t>(std::countr_zero(len_))];
    }

    std::vector<std::uint64_t>* a_;
    std::uint64_t p_;
    bool inverse_;
    std::size_t n_ = 0;
    std::vector<std::uint64_t> stage_root_;
    Phase phase_ = Phase::BitRev;
    std::size_t i_ = 1, j_ = 0;            // bit-reversal / scale cursor
    std::size_t len_ = 2, blk_ = 0, off_ = 0;
    std::uint64_t w_ = 1, wlen_ = 1, ninv_ = 0;
};

inline unsigned __int128 crt_combine(std::uint64_t r1, std::uint64_t r2) {
    // x = r1 (mod p1), x = r2 (mod p2), 0 <= x < p1*p2
    static const std::uint64_t inv_p1 = powmod(kP1 % kP2, kP2 - 2, kP2);
    std::uint64_t diff = submod(r2 % kP2, r1 % kP2, kP2);
    std::uint64_t t = mulmod(diff, inv_p1, kP2);
    return static_cast<unsigned __int128>(kP1) * t + r1;
}

struct StepCtx {
    std::uint64_t budget_left = 0;
    std::uint64_t work_done = 0;
    WorkMeter* meter = nullptr;

    // Deduct `units` from the current step budget. A positive budget always
    // admits one chunk (bounded overdraft), so budget=1 still makes progress.
    bool try_take(std::uint64_t units) {
        if (budget_left == 0) return false;
        budget_left = units >= budget_left ? 0 : budget_left - units;
        work_done += units;
        if (meter) meter->charge(units);
        return true;
    }
};

struct StepPromise;

struct StepRoutine {
    using promise_type = StepPromise;
    std::coroutine_handle<StepPromise> h;

    StepRoutine() = default;
    explicit StepRoutine(std::coroutine_handle<StepPromise> hh) : h(hh) {}
    StepRoutine(const StepRoutine&) = delete;
    StepRoutine& operator=(const StepRoutine&) = delete;
    StepRoutine(StepRoutine&& o) noexcept : h(std::exchange(o.h, {})) {}
    StepRoutine& operator=(StepRoutine&& o) noexcept {
        if (h) h.destroy();
        h = std::exchange(o.h, {});
        return *this;
    }
    ~StepRoutine() {
        if (h) h.destroy();
    }
};

struct StepPromise {
    std::exception_ptr exc;

    StepRoutine get_return_object() {
        return StepRoutine{std::coroutine_handle<StepPromise>::from_promise(*this)};
    }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    void return_void() {}
    void unhandled_exception() { exc = std::current_exception(); }
};

struct CallState {
    SparseVec f, g;
    EngineConfig cfg;
    StepCtx ctx;
    std::mt19937_64 rng;
    SparseVec result;
};

// Suspend until the step budget admits `units` more work.
#define SUMSETKIT_TAKE(ctx, units)            \
    while (!(ctx).try_take(units)) {          \
        co_await std::suspend_always{};       \
    }
#define SUMSETKIT_CHARGE_OPS(ctx, ops) \
    SUMSETKIT_TAKE(ctx, ((ops) + ::sumsetkit::detail::kOpsPerUnit - 1) / ::sumsetkit::detail::kOpsPerUnit)

inline Backend pick_backend(const CallState& st) {
    if (st.cfg.backend != Backend::Auto) return st.cfg.backend;
    const auto n = static_cast<std::uint64_t>(st.f.size());
    const auto m = static_cast<std::uint64_t>(st.g.size());
    const unsigned __int128 nm = static_cast<unsigned __int128>(n) * m;
    if (nm <= 1024) return Backend::Brute;
    const std::uint64_t deg = static_cast<std::uint64_t>(st.f.entries().back().index) +
                              static_cast<std::uint64_t>(st.g.entries().back().index);
    const double brute_est = static_cast<double>(nm);
    const double nd = static_cast<double>(std::bit_ceil(deg + 1));
    const double dense_est = 6.0 * nd * std::max(1.0, std::log2(nd));
    const double khat = std::min<double>(static_cast<double>(nm), static_cast<double>(deg) + 1.0);
    const double ns = static_cast<double>(
        std::bit_ceil(static_cast<std::uint64_t>(4.0 * 2.0 * khat * std::log2(static_cast<double>(deg) + 2.0)) + 2));
    const double sparse_est = 24.0 * ns * std::max(1.0, std::log2(ns));
    if (brute_est <= dense_est && brute_est <= sparse_est) return Backend::Brute;
    if (dense_est <= sparse_est) return Backend::DenseTransform;
    return Backend::SparseRecovery;
}

inline StepRoutine run_convolve(CallState& st) {
    if (st.f.empty() || st.g.empty()) {
        st.result = SparseVec{};
        co_return;
    }
    const Int value_bound = st.f.value_bound();
    const auto& fe = st.f.entries();
    const auto& ge = st.g.entries();
    const std::uint64_t deg = static_cast<std::uint64_t>(fe.back().index) +
                              static_cast<std::uint64_t>(ge.back().index);

    unsigned __int128 mass_f = 0, mass_g = 0;
    for (const auto& e : fe) mass_f += static_cast<unsigned __int128>(e.value);
    for (const auto& e : ge) mass_g += static_cast<unsigned __int128>(e.value);
    constexpr unsigned __int128 kModProduct =
        static_cast<unsigned __int128>(kP1) * kP2;
    if (mass_f != 0 && mass_g != 0) {
        if (mass_f > kModProduct / mass_g / (deg + 1))
            throw OverflowError("convolve: mass * degree exceeds CRT range");
    }
    const unsigned __int128 total_mass = mass_f * mass_g;

    const Backend backend = pick_backend(st);
    SUMSETKIT_TAKE(st.ctx, 1);

    if (backend == Backend::Brute) {
        std::vector<std::pair<Int, unsigned __int128>> acc;
        acc.reserve(fe.size() * ge.size());
        std::uint64_t pending = 0;
        for (const auto& ef : fe) {
            for (const auto& eg : ge) {
                if (++pending == kChunkOps) {
                    SUMSETKIT_CHARGE_OPS(st.ctx, pending);
                    pending = 0;
                }
                acc.emplace_back(ef.index + eg.index,
                                 static_cast<unsigned __int128>(ef.value) * eg.value);
            }
        }
        if (pending) SUMSETKIT_CHARGE_OPS(st.ctx, pending);
        std::sort(acc.begin(), acc.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t done = 0; done < acc.size(); done += kChunkOps)  // sort pass
            SUMSETKIT_CHARGE_OPS(st.ctx, std::min<std::size_t>(kChunkOps, acc.size() - done));
        std::vector<SparseVec::Entry> out;
        for (std::size_t i = 0; i < acc.size();) {
            SUMSETKIT_TAKE(st.ctx, 1);
            unsigned __int128 val = 0;
            const Int idx = acc[i].first;
            for (; i < acc.size() && acc[i].first == idx; ++i) val += acc[i].second;
            if (val > static_cast<unsigned __int128>(value_bound))
                throw OverflowError("convolve: value exceeds value_bound");
            out.push_back({idx, static_cast<Int>(val)});
        }
        st.result = SparseVec(std::move(out), value_bound);
        co_return;
    }

    if (backend == Backend::DenseTransform) {
        const std::size_t N = std::bit_ceil(static_cast<std::size_t>(deg) + 1);
        std::array<std::vector<std::uint64_t>, 2> res;
        for (int w = 0; w < 2; ++w) {
            const std::uint64_t pr = w == 0 ? kP1 : kP2;
            const std::uint64_t gen = w == 0 ? kG1 : kG2;
            std::vector<std::uint64_t> af(N, 0), ag(N, 0);
            for (std::size_t i0 = 0; i0 < fe.size(); i0 += kChunkOps) {
                const std::size_t i1 = std::min(fe.size(), i0 + kChunkOps);
                SUMSETKIT_CHARGE_OPS(st.ctx, i1 - i0);
                for (std::size_t i = i0; i < i1; ++i)
                    af[static_cast<std::size_t>(fe[i].index)] =
                        static_cast<std::uint64_t>(fe[i].value) % pr;
            }
            for (std::size_t i0 = 0; i0 < ge.size(); i0 += kChunkOps) {
                const std::size_t i1 = std::min(ge.size(), i0 + kChunkOps);
                SUMSETKIT_CHARGE_OPS(st.ctx, i1 - i0);
                for (std::size_t i = i0; i < i1; ++i)
                    ag[static_cast<std::size_t>(ge[i].index)] =
                        static_cast<std::uint64_t>(ge[i].value) % pr;
            }
            {
                ChunkedNtt tf(&af, pr, gen, false), tg(&ag, pr, gen, false);
                for (ChunkedNtt* t : {&tf, &tg}) {
                    while (!t->finished()) {
                        SUMSETKIT_CHARGE_OPS(st.ctx, kChunkOps);
                        t->advance(kChunkOps);
                    }
                }
            }
            for (std::size_t i0 = 0; i0 < N; i0 += kChunkOps) {
                const std::size_t i1 = std::min(N, i0 + kChunkOps);
                SUMSETKIT_CHARGE_OPS(st.ctx, i1 - i0);
                for (std::size_t i = i0; i < i1; ++i) af[i] = mulmod(af[i], ag[i], pr);
            }
            {
                ChunkedNtt ti(&af, pr, gen, true);
                while (!ti.finished()) {
                    SUMSETKIT_CHARGE_OPS(st.ctx, kChunkOps);
                    ti.advance(kChunkOps);
                }
            }
            res[static_cast<std::size_t>(w)] = std::move(af);
        }
        std::vector<SparseVec::Entry> out;
        for (std::size_t i0 = 0; i0 <= deg; i0 += kChunkOps) {
            const std::size_t i1 = std::min<std::size_t>(deg + 1, i0 + kChunkOps);
            SUMSETKIT_CHARGE_OPS(st.ctx, i1 - i0);
            for (std::size_t i = i0; i < i1; ++i) {
                if (res[0][i] == 0 && res[1][i] == 0) continue;
                unsigned __int128 v = crt_combine(res[0][i], res[1][i]);
                if (v > static_cast<unsigned __int128>(value_bound))
                    throw OverflowError("convolve: value exceeds value_bound");
                out.push_back({static_cast<Int>(i), static_cast<Int>(v)});
            }
        }
        // one emitted-element unit per output entry
        for (std::size_t i0 = 0; i0 < out.size(); i0 += kChunkOps) {
            SUMSETKIT_TAKE(st.ctx, std::min(out.size() - i0, kChunkOps));
        }
        st.result = SparseVec(std::move(out), value_bound);
        co_return;
    }

    // sparse_recovery
    const double L = std::log2(static_cast<double>(deg) + 2.0);
    std::uint64_t k = 2;
    std::map<Int, unsigned __int128> recovered;
    unsigned __int128 recovered_mass = 0;
    const unsigned __int128 wmax =
        static_cast<unsigned __int128>(deg) * total_mass;
    bool done = false;

    // Buckets for one random prime: count and position-weighted sums of the
    // residual (true minus recovered) coefficients.
    std::vector<unsigned __int128> E, W;

    while (!done) {
        for (int round = 0; round < st.cfg.recovery_rounds_cap + 1 && !done; ++round) {
            const bool verify_only =
                recovered_mass == total_mass && !recovered.empty();
            // sample a prime in [C k L, 2 C k L]
            std::uint64_t plo = std::max<std::uint64_t>(
                3, static_cast<std::uint64_t>(std::ceil(st.cfg.bucket_constant * static_cast<double>(k) * L)));
            std::uint64_t phi = std::max(plo + 2, static_cast<std::uint64_t>(
                                                      2.0 * st.cfg.bucket_constant * static_cast<double>(k) * L));
            std::uint64_t p = 0;
            {
                int misses = 0;
                while (p == 0) {
                    SUMSETKIT_TAKE(st.ctx, 1);
                    std::uint64_t cand =
                        std::uniform_int_distribution<std::uint64_t>(plo, phi)(st.rng);
                    if (is_prime_u64(cand))
                        p = cand;
                    else if (++misses == 64) {
                        phi += phi / 2;
                        misses = 0;
                    }
                }
            }

            const std::size_t Np = std::bit_ceil(2 * static_cast<std::size_t>(p) - 1);
            std::array<std::vector<std::uint64_t>, 2> Er, Wr;
            for (int w = 0; w < 2; ++w) {
                const std::uint64_t pr = w == 0 ? kP1 : kP2;
                const std::uint64_t gen = w == 0 ? kG1 : kG2;
                std::vector<std::uint64_t> vf(Np, 0), vfw(Np, 0), vg(Np, 0), vgw(Np, 0);
                for (std::size_t i0 = 0; i0 < fe.size(); i0 += kChunkOps) {
                    const std::size_t i1 = std::min(fe.size(), i0 + kChunkOps);
                    SUMSETKIT_CHARGE_OPS(st.ctx, 2 * (i1 - i0));
                    for (std::size_t i = i0; i < i1; ++i) {
                        const std::size_t b =
                            static_cast<std::size_t>(static_cast<std::uint64_t>(fe[i].index) % p);
                        const std::uint64_t v = static_cast<std::uint64_t>(fe[i].value) % pr;
                        vf[b] = addmod(vf[b], v, pr);
                        vfw[b] = addmod(
                            vfw[b],
                            mulmod(static_cast<std::uint64_t>(fe[i].index) % pr, v, pr), pr);
                    }
                }
                for (std::size_t i0 = 0; i0 < ge.size(); i0 += kChunkOps) {
                    const std::size_t i1 = std::min(ge.size(), i0 + kChunkOps);
                    SUMSETKIT_CHARGE_OPS(st.ctx, 2 * (i1 - i0));
                    for (std::size_t i = i0; i < i1; ++i) {
                        const std::size_t b =
                            static_cast<std::size_t>(static_cast<std::uint64_t>(ge[i].index) % p);
                        const std::uint64_t v = static_cast<std::uint64_t>(ge[i].value) % pr;
                        vg[b] = addmod(vg[b], v, pr);
                        vgw[b] = addmod(
                            vgw[b],
                            mulmod(static_cast<std::uint64_t>(ge[i].index) % pr, v, pr), pr);
                    }
                }
                {
                    ChunkedNtt t1(&vf, pr, gen, false), t2(&vg, pr, gen, false);
                    ChunkedNtt t3(&vfw, pr, gen, false), t4(&vgw, pr, gen, false);
                    std::vector<ChunkedNtt*> ts{&t1, &t2};
                    if (!verify_only) {
                        ts.push_back(&t3);
                        ts.push_back(&t4);
                    }
                    for (ChunkedNtt* t : ts) {
                        while (!t->finished()) {
                            SUMSETKIT_CHARGE_OPS(st.ctx, kChunkOps);
                            t->advance(kChunkOps);
                        }
                    }
                }
                std::vector<std::uint64_t> ehat(Np), what;
                if (!verify_only) what.assign(Np, 0);
                for (std::size_t i0 = 0; i0 < Np; i0 += kChunkOps) {
                    const std::size_t i1 = std::min(Np, i0 + kChunkOps);
                    SUMSETKIT_CHARGE_OPS(st.ctx, 2 * (i1 - i0));
                    for (std::size_t i = i0; i < i1; ++i) {
                        ehat[i] = mulmod(vf[i], vg[i], pr);
                        if (!verify_only)
                            what[i] = addmod(mulmod(vfw[i], vg[i], pr),
                                             mulmod(vf[i], vgw[i], pr), pr);
                    }
                }
                {
                    ChunkedNtt ti1(&ehat, pr, gen, true);
                    while (!ti1.finished()) {
                        SUMSETKIT_CHARGE_OPS(st.ctx, kChunkOps);
                        ti1.advance(kChunkOps);
                    }
                    if (!verify_only) {
                        ChunkedNtt ti2(&what, pr, gen, true);
                        while (!ti2.finished()) {
                            SUMSETKIT_CHARGE_OPS(st.ctx, kChunkOps);
                            ti2.advance(kChunkOps);
                        }
                    }
                }
                // fold the linear convolution (support [0, 2p-2]) mod p
                Er[static_cast<std::size_t>(w)].assign(p, 0);
                if (!verify_only) Wr[static_cast<std::size_t>(w)].assign(p, 0);
                for (std::size_t b0 = 0; b0 < p; b0 += kChunkOps) {
                    const std::size_t b1 = std::min<std::size_t>(p, b0 + kChunkOps);
                    SUMSETKIT_CHARGE_OPS(st.ctx, b1 - b0);
                    for (std::size_t b = b0; b < b1; ++b) {
                        std::uint64_t e = ehat[b];
                        if (b + p <= 2 * p - 2) e = addmod(e, ehat[b + p], pr);
                        Er[static_cast<std::size_t>(w)][b] = e;
                        if (!verify_only) {
                            std::uint64_t ww = what[b];
                            if (b + p <= 2 * p - 2) ww = addmod(ww, what[b + p], pr);
                            Wr[static_cast<std::size_t>(w)][b] = ww;
                        }
                    }
                }
            }

            // CRT lift, then subtract the already-recovered part
            E.assign(p, 0);
            if (!verify_only) W.assign(p, 0);
            for (std::size_t b0 = 0; b0 < p; b0 += kChunkOps) {
                const std::size_t b1 = std::min<std::size_t>(p, b0 + kChunkOps);
                SUMSETKIT_CHARGE_OPS(st.ctx, b1 - b0);
                for (std::size_t b = b0; b < b1; ++b) {
                    E[b] = crt_combine(Er[0][b], Er[1][b]);
                    if (!verify_only) W[b] = crt_combine(Wr[0][b], Wr[1][b]);
                }
            }
            bool corrupted = false;
            {
                std::uint64_t pending = 0;
                for (const auto& [s, v] : recovered) {
                    if (++pending == kChunkOps) {
                        SUMSETKIT_CHARGE_OPS(st.ctx, pending);
                        pending = 0;
                    }
                    const std::size_t b =
                        static_cast<std::size_t>(static_cast<std::uint64_t>(s) % p);
                    if (E[b] < v) {
                        corrupted = true;
                        break;
                    }
                    E[b] -= v;
                    if (!verify_only) {
                        const unsigned __int128 wv =
                            static_cast<unsigned __int128>(static_cast<std::uint64_t>(s)) * v;
                        if (W[b] < wv) {
                            corrupted = true;
                            break;
                        }
                        W[b] -= wv;
                    }
                }
                if (pending) SUMSETKIT_CHARGE_OPS(st.ctx, pending);
            }

            if (verify_only) {
                bool clean = !corrupted;
                for (std::size_t b = 0; clean && b < p; ++b)
                    if (E[b] != 0) clean = false;
                SUMSETKIT_CHARGE_OPS(st.ctx, p);
                if (clean) {
                    done = true;
                } else {
                    recovered.clear();
                    recovered_mass = 0;
                }
                continue;
            }

            if (!corrupted) {
                for (std::size_t b0 = 0; b0 < p && !corrupted; b0 += kChunkOps) {
                    const std::size_t b1 = std::min<std::size_t>(p, b0 + kChunkOps);
                    SUMSETKIT_CHARGE_OPS(st.ctx, b1 - b0);
                    for (std::size_t b = b0; b < b1; ++b) {
                        if (E[b] == 0) {
                            if (W[b] != 0) {
                                corrupted = true;
                                break;
                            }
                            continue;
                        }
                        if (E[b] > total_mass || W[b] > wmax) {
                            corrupted = true;
                            break;
                        }
                        if (W[b] % E[b] != 0) continue;  // collision; wait for a fresh prime
                        const unsigned __int128 s128 = W[b] / E[b];
                        if (s128 > deg) continue;
                        const std::uint64_t s = static_cast<std::uint64_t>(s128);
                        if (s % p != b) continue;
                        SUMSETKIT_TAKE(st.ctx, 1);  // one peeled element
                        recovered[static_cast<Int>(s)] += E[b];
                        recovered_mass += E[b];
                    }
                }
            }
            if (corrupted || recovered_mass > total_mass) {
                recovered.clear();
                recovered_mass = 0;
            }
        }
        if (!done && k < deg + 2) k = std::min(2 * k, deg + 2);
    }

    std::vector<SparseVec::Entry> out;
    out.reserve(recovered.size());
    for (const auto& [s, v] : recovered) {
        if (v > static_cast<unsigned __int128>(value_bound))
            throw OverflowError("convolve: value exceeds value_bound");
        out.push_back({s, static_cast<Int>(v)});
    }
    st.result = SparseVec(std::move(out), value_bound);
    co_return;
}

#undef SUMSETKIT_CHARGE_OPS
#undef SUMSETKIT_TAKE

}  // namespace detail

class SteppableCall {
public:
    enum class State { InProgress, Finished, Cancelled };

    SteppableCall() = default;

    State state() const { return state_; }
    std::uint64_t work_done() const { return st_ ? st_->ctx.work_done : 0; }

    const SparseVec& result() const {
        if (state_ != State::Finished)
            throw std::logic_error("SteppableCall: result of an unfinished call");
        return st_->result;
    }
    SparseSet result_set() const { return result().support(); }

private:
    friend SteppableCall start_convolve(const SparseVec&, const SparseVec&, const EngineConfig&);
    friend State step(SteppableCall&, std::uint64_t);
    friend void cancel(SteppableCall&);

    std::unique_ptr<detail::CallState> st_;
    detail::StepRoutine co_;
    State state_ = State::InProgress;
};

inline SteppableCall start_convolve(const SparseVec& f, const SparseVec& g,
                                    const EngineConfig& cfg) {
    SteppableCall call;
    call.st_ = std::make_unique<detail::CallState>();
    call.st_->f = f;
    call.st_->g = g;
    call.st_->cfg = cfg;
    call.st_->ctx.meter = cfg.meter;
    call.st_->rng.seed(cfg.rng_seed);
    call.co_ = detail::run_convolve(*call.st_);
    return call;
}

inline SteppableCall start_sumset(const SparseSet& A, const SparseSet& B,
                                  const EngineConfig& cfg) {
    return start_convolve(SparseVec::indicator(A), SparseVec::indicator(B), cfg);
}

/// Runs the call for at most `budget` work units (plus one bounded chunk of
/// overdraft). Returns the resulting state.
inline SteppableCall::State step(SteppableCall& call, std::uint64_t budget) {
    if (call.state_ != SteppableCall::State::InProgress)
        throw std::logic_error("SteppableCall: step on a finished or cancelled call");
    if (budget < 1) throw std::invalid_argument("SteppableCall: budget must be >= 1");
    call.st_->ctx.budget_left = budget;
    call.co_.h.resume();
    if (call.co_.h.done()) {
        if (call.co_.h.promise().exc) {
            call.state_ = SteppableCall::State::Cancelled;
            std::rethrow_exception(call.co_.h.promise().exc);
        }
        call.state_ = SteppableCall::State::Finished;
    }
    return call.state_;
}

inline void cancel(SteppableCall& call) {
    call.co_ = detail::StepRoutine{};
    call.state_ = SteppableCall::State::Cancelled;
}

inline SparseVec convolve(const SparseVec& f, const SparseVec& g,
                          const EngineConfig& cfg = {}) {
    SteppableCall call = start_convolve(f, g, cfg);
    while (step(call, std::numeric_limits<std::uint64_t>::max() / 2) ==
           SteppableCall::State::InProgress) {
    }
    return call.result();
}

inline SparseSet sumset(const SparseSet& A, const SparseSet& B, const EngineConfig& cfg = {}) {
    if (A.empty() || B.empty()) return SparseSet{};
    return convolve(SparseVec::indicator(A), SparseVec::indicator(B), cfg).support();
}

}  // namespace sumsetkit
