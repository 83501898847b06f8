#pragma once

// Machine-readable run reports for the bench harness, plus the least-squares
// exponent fit over (log out, log cost) pairs.

#include "core.hpp"

#include <cmath>
#include <sstream>

namespace sumsetkit {

struct RunReport {
    std::string generator;   // e.g. "uniform"
    std::string gen_params;  // key=value;... descriptor, no spaces
    std::uint64_t seed = 0;
    std::string algo;
    Int n = 0, m = 0;
    Int out = 0;           // |result|
    Int out_estimate = 0;  // õut, when the algorithm learned one (else 0)
    Int cost = 0;          // covering cost, when a covering was built (else 0)
    std::uint64_t work_units = 0;
    double wall_ms = 0.0;
    bool oracle_checked = false;
    bool correct = false;  // meaningful only when oracle_checked
};

inline const char* report_csv_header() {
    return "# sumset-kit report v1\n"
           "generator,gen_params,seed,algo,n,m,out,out_estimate,cost,work_units,wall_ms,"
           "oracle_checked,correct";
}

inline std::string to_csv_row(const RunReport& r) {
    std::ostringstream os;
    os << r.generator << ',' << r.gen_params << ',' << r.seed << ',' << r.algo << ',' << r.n << ','
       << r.m << ',' << r.out << ',' << r.out_estimate << ',' << r.cost << ',' << r.work_units
       << ',' << r.wall_ms << ',' << (r.oracle_checked ? 1 : 0) << ',' << (r.correct ? 1 : 0);
    return os.str();
}

inline std::string to_jsonl(const RunReport& r) {
    std::ostringstream os;
    os << "{\"generator\":\"" << r.generator << "\",\"gen_params\":\"" << r.gen_params
       << "\",\"seed\":" << r.seed << ",\"algo\":\"" << r.algo << "\",\"n\":" << r.n
       << ",\"m\":" << r.m << ",\"out\":" << r.out << ",\"out_estimate\":" << r.out_estimate
       << ",\"cost\":" << r.cost << ",\"work_units\":" << r.work_units
       << ",\"wall_ms\":" << r.wall_ms
       << ",\"oracle_checked\":" << (r.oracle_checked ? "true" : "false")
       << ",\"correct\":" << (r.correct ? "true" : "false") << "}";
    return os.str();
}

struct ExponentFit {
    double slope = 0.0;
    double stderr_ = 0.0;  // standard error of the slope
    std::size_t points = 0;
};

/// Least-squares slope of log(cost) against log(out). Refuses (throws
/// std::invalid_argument) unless there are >= 5 usable reports whose out
/// values span at least two decades.
inline ExponentFit fit_exponent(const std::vector<RunReport>& reports) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : reports)
        if (r.out >= 1 && r.cost >= 1)
            pts.emplace_back(std::log(static_cast<double>(r.out)),
                             std::log(static_cast<double>(r.cost)));
    if (pts.size() < 5) throw std::invalid_argument("fit_exponent: need >= 5 reports");
    double xmin = pts.front().first, xmax = xmin;
    for (auto& [x, y] : pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    if (xmax - xmin < 2.0 * std::log(10.0))
        throw std::invalid_argument("fit_exponent: out must span >= 2 decades");

    const double inv_n = 1.0 / static_cast<double>(pts.size());
    double mx = 0, my = 0;
    for (auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx *= inv_n;
    my *= inv_n;
    double sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    ExponentFit fit;
    fit.points = pts.size();
    fit.slope = sxy / sxx;
    double sse = 0;
    for (auto& [x, y] : pts) {
        const double e = y - my - fit.slope * (x - mx);
        sse += e * e;
    }
    if (pts.size() > 2)
        fit.stderr_ = std::sqrt(sse / (static_cast<double>(pts.size()) - 2.0) / sxx);
    return fit;
}

}  // namespace sumsetkit
