// sumset-bench: instance generation, algorithm runs, cost and output-size
// measurement, exponent fitting. All flags are key=value pairs.

#include <sumsetkit/adversarial.hpp>
#include <sumsetkit/prefix.hpp>
#include <sumsetkit/relaxed.hpp>
#include <sumsetkit/report.hpp>
#include <sumsetkit/subset_sum.hpp>
#include <sumsetkit/topk.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

using namespace sumsetkit;

namespace {

void usage() {
    std::cerr
        << "usage: sumset-bench [key=value ...]\n"
        << "  gen      uniform | clustered | progression | hard | twoshift   (default uniform)\n"
        << "  algo     prefix43 | interval | relaxed | topk | subsetsum |\n"
        << "           subsetsum_relaxed | exponent                          (default prefix43)\n"
        << "  n, m     set sizes (m defaults to n)                           (default n=64)\n"
        << "  u        prefix bound / value range                            (default 4096)\n"
        << "  lo       interval lower end, algo=interval only                (default 0)\n"
        << "  k        algo=topk: number of smallest sums                    (default 16)\n"
        << "  t        algo=subsetsum*: target                               (default 1000)\n"
        << "  zeta     relaxation parameter                                  (default 0.5)\n"
        << "  base     gen=hard digit base / algo=exponent m                 (default 2)\n"
        << "  codelen  gen=hard code length (even)                           (default 4)\n"
        << "  delta    gen=hard / algo=exponent code distance                (default 0.3)\n"
        << "  trials   number of seeded instances                            (default 1)\n"
        << "  seed     base RNG seed; SUMSETKIT_SEED overrides when absent   (default 1)\n"
        << "  oracle   on | off: brute-force result check                    (default off)\n"
        << "  format   csv | jsonl                                           (default csv)\n"
        << "  out_file write reports here instead of stdout\n";
}

struct Options {
    std::string gen = "uniform", algo = "prefix43", format = "csv", out_file;
    Int n = 64, m = -1, u = 4096, lo = 0, k = 16, t = 1000, base = 2, codelen = 4;
    double zeta = 0.5, delta = 0.3;
    Int trials = 1;
    std::uint64_t seed = 1;
    bool oracle = false;
};

bool parse_int(const std::string& s, Int& out) {
    try {
        std::size_t pos = 0;
        out = std::stoll(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_options(int argc, char** argv, Options& opt) {
    bool seed_given = false;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const auto eq = arg.find('=');
        if (eq == std::string::npos) return false;
        const std::string key = arg.substr(0, eq), val = arg.substr(eq + 1);
        Int iv = 0;
        if (key == "gen") {
            if (val != "uniform" && val != "clustered" && val != "progression" && val != "hard" &&
                val != "twoshift")
                return false;
            opt.gen = val;
        } else if (key == "algo") {
            if (val != "prefix43" && val != "interval" && val != "relaxed" && val != "topk" &&
                val != "subsetsum" && val != "subsetsum_relaxed" && val != "exponent")
                return false;
            opt.algo = val;
        } else if (key == "n" && parse_int(val, iv) && iv >= 1) {
            opt.n = iv;
        } else if (key == "m" && parse_int(val, iv) && iv >= 1) {
            opt.m = iv;
        } else if (key == "u" && parse_int(val, iv) && iv >= 0) {
            opt.u = iv;
        } else if (key == "lo" && parse_int(val, iv) && iv >= 0) {
            opt.lo = iv;
        } else if (key == "k" && parse_int(val, iv) && iv >= 1) {
            opt.k = iv;
        } else if (key == "t" && parse_int(val, iv) && iv >= 0) {
            opt.t = iv;
        } else if (key == "base" && parse_int(val, iv) && iv >= 2) {
            opt.base = iv;
        } else if (key == "codelen" && parse_int(val, iv) && iv >= 2) {
            opt.codelen = iv;
        } else if (key == "trials" && parse_int(val, iv) && iv >= 1) {
            opt.trials = iv;
        } else if (key == "seed" && parse_int(val, iv) && iv >= 0) {
            opt.seed = static_cast<std::uint64_t>(iv);
            seed_given = true;
        } else if (key == "zeta") {
            try {
                opt.zeta = std::stod(val);
            } catch (...) {
                return false;
            }
            if (opt.zeta <= 0.0 || opt.zeta > 1.0) return false;
        } else if (key == "delta") {
            try {
                opt.delta = std::stod(val);
            } catch (...) {
                return false;
            }
            if (opt.delta < 0.0 || opt.delta >= 0.5) return false;
        } else if (key == "oracle") {
            if (val != "on" && val != "off") return false;
            opt.oracle = val == "on";
        } else if (key == "format") {
            if (val != "csv" && val != "jsonl") return false;
            opt.format = val;
        } else if (key == "out_file") {
            opt.out_file = val;
        } else {
            return false;
        }
    }
    if (!seed_given) {
        if (const char* env = std::getenv("SUMSETKIT_SEED")) {
            Int iv = 0;
            if (!parse_int(env, iv) || iv < 0) return false;
            opt.seed = static_cast<std::uint64_t>(iv);
        }
    }
    if (opt.m < 0) opt.m = opt.n;
    return true;
}

SparseSet random_set(Int count, Int max_val, std::mt19937_64& rng) {
    std::uniform_int_distribution<Int> dist(1, std::max<Int>(1, max_val));
    std::vector<Int> xs(static_cast<std::size_t>(count));
    for (auto& x : xs) x = dist(rng);
    return SparseSet::from_unsorted(std::move(xs));
}

SparseSet clustered_set(Int count, Int max_val, std::mt19937_64& rng) {
    const Int blocks = std::max<Int>(1, count / 32);
    std::uniform_int_distribution<Int> start(1, std::max<Int>(1, max_val - count / blocks));
    std::vector<Int> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (Int b = 0; b < blocks; ++b) {
        const Int s = start(rng);
        const Int len = count / blocks + (b < count % blocks ? 1 : 0);
        for (Int i = 0; i < len; ++i) xs.push_back(std::min(max_val, s + i));
    }
    return SparseSet::from_unsorted(std::move(xs));
}

SparseSet progression_set(Int count, Int max_val, std::mt19937_64& rng) {
    const Int dmax = std::max<Int>(1, max_val / (2 * count));
    std::uniform_int_distribution<Int> dd(1, dmax);
    const Int d = dd(rng);
    std::uniform_int_distribution<Int> aa(1, std::max<Int>(1, max_val - (count - 1) * d));
    const Int a0 = aa(rng);
    std::vector<Int> xs;
    for (Int i = 0; i < count; ++i) xs.push_back(a0 + i * d);
    return SparseSet(std::move(xs));
}

struct GenResult {
    Instance inst;
    std::string params;
};

GenResult generate(const Options& opt, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::ostringstream ps;
    GenResult g;
    if (opt.gen == "uniform") {
        g.inst = {random_set(opt.n, opt.u, rng), random_set(opt.m, opt.u, rng), opt.lo, opt.u, {}};
        ps << "n=" << opt.n << ";m=" << opt.m << ";u=" << opt.u;
    } else if (opt.gen == "clustered") {
        g.inst = {clustered_set(opt.n, opt.u, rng), clustered_set(opt.m, opt.u, rng), opt.lo,
                  opt.u, {}};
        ps << "n=" << opt.n << ";m=" << opt.m << ";u=" << opt.u;
    } else if (opt.gen == "progression") {
        g.inst = {progression_set(opt.n, opt.u, rng), progression_set(opt.m, opt.u, rng), opt.lo,
                  opt.u, {}};
        ps << "n=" << opt.n << ";m=" << opt.m << ";u=" << opt.u;
    } else if (opt.gen == "hard") {
        auto fam = build_xy_family(opt.base, greedy_code(opt.codelen, opt.delta));
        auto h = build_hard_instance(fam);
        g.inst = std::move(h.inst);
        ps << "base=" << opt.base << ";codelen=" << opt.codelen << ";delta=" << opt.delta
           << ";g=" << h.g << ";sigma=" << h.sigma;
    } else {  // twoshift
        std::vector<Int> a{0}, b{0};
        for (Int i = 1; i <= opt.n; ++i) a.push_back(opt.u / 2 + i);
        for (Int j = 1; j <= opt.n; ++j) b.push_back(opt.u / 2 + opt.n * j);
        g.inst = {SparseSet(std::move(a)), SparseSet(std::move(b)), 0, opt.u, {}};
        ps << "n=" << opt.n << ";u=" << opt.u;
    }
    g.params = ps.str();
    return g;
}

/// Exact covering cost: sum of unrestricted per-rectangle sumset sizes.
Int covering_cost(const SparseSet& A, const SparseSet& B, const Covering& cov) {
    Int cost = 0;
    for (const auto& r : cov.rects) {
        std::vector<Int> ai(A.elems().begin() + (r.i_lo - 1), A.elems().begin() + r.i_hi);
        std::vector<Int> bj(B.elems().begin() + (r.j_lo - 1), B.elems().begin() + r.j_hi);
        cost += static_cast<Int>(brute_sumset(SparseSet(std::move(ai), true),
                                              SparseSet(std::move(bj), true),
                                              std::numeric_limits<Int>::min() / 4,
                                              std::numeric_limits<Int>::max() / 4)
                                     .size());
    }
    return cost;
}

int run(const Options& opt) {
    if (opt.algo == "exponent") {
        const double c = lower_bound_exponent(opt.delta, opt.base);
        std::cout << "c = " << c << "\n";
        return 0;
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!opt.out_file.empty()) {
        file.open(opt.out_file);
        if (!file) {
            std::cerr << "sumset-bench: cannot open " << opt.out_file << "\n";
            return 2;
        }
        os = &file;
    }
    if (opt.format == "csv") *os << report_csv_header() << "\n";

    bool all_correct = true;
    for (Int trial = 0; trial < opt.trials; ++trial) {
        const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(trial);
        RunReport rep;
        rep.algo = opt.algo;
        rep.seed = seed;
        rep.oracle_checked = opt.oracle;

        WorkMeter meter;
        EngineConfig cfg;
        cfg.meter = &meter;
        cfg.rng_seed = seed;

        const auto t0 = std::chrono::steady_clock::now();
        if (opt.algo == "subsetsum" || opt.algo == "subsetsum_relaxed") {
            std::mt19937_64 rng(seed);
            SparseSet X = random_set(opt.n, std::max<Int>(1, opt.t), rng);
            rep.generator = opt.gen;
            std::ostringstream ps;
            ps << "n=" << opt.n << ";t=" << opt.t;
            rep.gen_params = ps.str();
            rep.n = static_cast<Int>(X.size());
            rep.m = 0;
            SSParams sp;
            sp.rng_seed = seed;
            sp.engine = cfg;
            SparseSet got = opt.algo == "subsetsum" ? subset_sums(X, opt.t, sp)
                                                    : subset_sums_relaxed(X, opt.t, opt.zeta, sp);
            rep.out = static_cast<Int>(got.size());
            if (opt.oracle) rep.correct = got == brute_subset_sums(X, opt.t);
        } else {
            GenResult g = generate(opt, seed);
            rep.generator = opt.gen;
            rep.gen_params = g.params;
            rep.n = static_cast<Int>(g.inst.A.size());
            rep.m = static_cast<Int>(g.inst.B.size());
            const Int lo = opt.algo == "interval" ? g.inst.lo : 0;
            const Int hi = g.inst.hi;
            if (opt.algo == "prefix43" || opt.algo == "interval" || opt.algo == "relaxed") {
                Instance norm = normalize({g.inst.A, g.inst.B, lo, hi, {}});
                SparseSet got;
                if (norm.A.empty() || norm.B.empty()) {
                    got = SparseSet{};
                } else if (opt.algo == "prefix43") {
                    rep.out_estimate = approx_out(norm.A, norm.B, 0, hi, cfg);
                    Covering cov =
                        covering_construction(norm.A, norm.B, hi, rep.out_estimate, cfg);
                    rep.cost = covering_cost(norm.A, norm.B, cov);
                    got = detail::sumset_from_covering(norm.A, norm.B, 0, hi, cov, cfg);
                } else if (opt.algo == "interval") {
                    rep.out_estimate =
                        detail::interval_chain(norm.A, norm.B, norm.lo, hi, cfg).t0_size;
                    Covering cov =
                        find_interval_covering(norm.A, norm.B, norm.lo, hi, rep.out_estimate);
                    rep.cost = covering_cost(norm.A, norm.B, cov);
                    got = detail::sumset_from_covering(norm.A, norm.B, norm.lo, hi, cov, cfg);
                } else {
                    Covering cov = find_relaxed_covering(norm.A, norm.B, std::max<Int>(1, hi),
                                                         opt.zeta);
                    rep.cost = covering_cost(norm.A, norm.B, cov);
                    got = detail::sumset_from_covering(norm.A, norm.B, 0, hi, cov, cfg);
                }
                rep.out = static_cast<Int>(got.size());
                if (opt.oracle) rep.correct = got == brute_sumset(g.inst.A, g.inst.B, lo, hi);
            } else {  // topk
                TopKParams tp;
                tp.engine = cfg;
                SparseSet got = top_k_sumset(g.inst.A, g.inst.B, opt.k, tp);
                rep.out = static_cast<Int>(got.size());
                if (opt.oracle) {
                    SparseSet full =
                        brute_sumset(g.inst.A, g.inst.B, 0, std::numeric_limits<Int>::max() / 4);
                    std::vector<Int> want(
                        full.elems().begin(),
                        full.elems().begin() +
                            std::min<std::size_t>(full.size(),
                                                  static_cast<std::size_t>(opt.k)));
                    rep.correct = got.elems() == want;
                }
            }
        }
        const auto t1 = std::chrono::steady_clock::now();
        rep.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rep.work_units = meter.used;
        if (opt.oracle && !rep.correct) all_correct = false;
        *os << (opt.format == "csv" ? to_csv_row(rep) : to_jsonl(rep)) << "\n";
    }
    return all_correct ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    if (!parse_options(argc, argv, opt)) {
        usage();
        return 2;
    }
    try {
        return run(opt);
    } catch (const std::exception& e) {
        std::cerr << "sumset-bench: " << e.what() << "\n";
        return 2;
    }
}
