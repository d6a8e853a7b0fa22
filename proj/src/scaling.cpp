#include "tfiq/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tfiq/entropy.hpp"

namespace tfiq {

double q_special_ising() { return std::sqrt(37.0) - 6.0; }
double q_special_xy() { return std::sqrt(10.0) - 3.0; }

double qlog_abscissa(int n, double q, double a_q) {
    if (n < 2) throw Error(ErrorCode::invalid_input, "qlog_abscissa requires N >= 2");
    const double lnq = q_log(static_cast<double>(n), q);
    if (!(lnq > 0.0)) throw Error(ErrorCode::domain_error, "ln_q(N) must be positive");
    return std::pow(1.0 / lnq, a_q);
}

namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
    double r_squared = 1.0;
};

Line ols(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double n = static_cast<double>(x.size());
    const double mx = x.mean(), my = y.mean();
    const double sxx = (x.array() - mx).square().sum();
    const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
    Line l;
    l.slope = (sxx > 0.0) ? sxy / sxx : 0.0;
    l.intercept = my - l.slope * mx;
    const Eigen::ArrayXd resid = y.array() - (l.intercept + l.slope * x.array());
    l.sse = resid.square().sum();
    const double sst = (y.array() - my).square().sum();
    l.r_squared = (sst > 0.0) ? std::max(0.0, 1.0 - l.sse / sst) : 1.0;
    (void)n;
    return l;
}

} // namespace

ExtrapolationFit fit_gamma_extrapolation(const std::vector<std::pair<int, double>>& points,
                                         double q) {
    if (points.size() < 4)
        throw Error(ErrorCode::underdetermined, "extrapolation needs at least 4 (N, gamma) points");
    {
        std::vector<int> ns;
        for (const auto& [n, g] : points) {
            if (!(g > 0.0))
                throw Error(ErrorCode::invalid_gamma, "gamma must be positive for extrapolation");
            if (n < 2) throw Error(ErrorCode::invalid_input, "N must be >= 2");
            ns.push_back(n);
        }
        std::sort(ns.begin(), ns.end());
        if (std::adjacent_find(ns.begin(), ns.end()) != ns.end())
            throw Error(ErrorCode::invalid_input, "N values must be distinct");
    }

    const Eigen::Index m = static_cast<Eigen::Index>(points.size());
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y[i] = 1.0 / points[static_cast<std::size_t>(i)].second;

    ExtrapolationFit best;
    best.q = q;
    double best_sse = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x(m);
    const int steps = static_cast<int>(std::lround((kAqSearchHi - kAqSearchLo) / kAqSearchStep));
    for (int s = 0; s <= steps; ++s) {
        const double a_q = kAqSearchLo + s * kAqSearchStep;
        for (Eigen::Index i = 0; i < m; ++i)
            x[i] = qlog_abscissa(points[static_cast<std::size_t>(i)].first, q, a_q);
        const Line l = ols(x, y);
        if (l.sse < best_sse) { // strict: ties keep the smaller a_q
            best_sse = l.sse;
            best.a_q = a_q;
            best.slope = l.slope;
            best.intercept = l.intercept;
            best.r_squared = l.r_squared;
            best.residuals = y.array() - (l.intercept + l.slope * x.array());
        }
    }
    best.gamma_infinity =
        best.intercept > 0.0 ? std::optional<double>(1.0 / best.intercept) : std::nullopt;
    return best;
}

std::optional<double> gamma_infinite(const ExtrapolationFit& fit) {
    if (fit.intercept > 0.0) return 1.0 / fit.intercept;
    return std::nullopt;
}

PowerLawFit fit_spin_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw Error(ErrorCode::invalid_input, "spin power law needs at least 3 points");
    const Eigen::Index m = static_cast<Eigen::Index>(points.size());
    Eigen::VectorXd x(m), y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& [s, gamma] = points[static_cast<std::size_t>(i)];
        if (!(s > 0.0) || !(gamma > 0.0) || !std::isfinite(gamma))
            throw Error(ErrorCode::invalid_input, "spin power law needs positive finite inputs");
        x[i] = std::log(s * (s + 1.0));
        y[i] = std::log(gamma);
    }
    const Line l = ols(x, y);
    PowerLawFit fit;
    fit.c = std::exp(l.intercept);
    fit.beta = l.slope;
    fit.r_squared = l.r_squared;
    return fit;
}

ExtensivityReport extensivity_report(const std::vector<std::pair<double, Eigen::VectorXd>>& curves,
                                     int n_sites) {
    if (n_sites < 6)
        throw Error(ErrorCode::range_too_short, "extensivity report needs N >= 6");
    const int l_max = n_sites / 2;
    ExtensivityReport report;
    report.n_sites = n_sites;
    report.l_max = l_max;

    for (const auto& [q, values] : curves) {
        if (static_cast<int>(values.size()) < n_sites - 1)
            throw Error(ErrorCode::invalid_input,
                        "curve must cover L = 1..N-1 (" + std::to_string(values.size()) + " given)");
        Eigen::VectorXd l(l_max), s(l_max);
        for (int i = 0; i < l_max; ++i) {
            l[i] = static_cast<double>(i + 1);
            s[i] = values[i];
        }
        const Line line = ols(l, s);
        ExtensivityRecord rec;
        rec.q = q;
        rec.slope = line.slope;
        rec.intercept = line.intercept;
        rec.r_squared = line.r_squared;
        double acc = 0.0;
        for (int i = 1; i + 1 < l_max; ++i) acc += s[i + 1] - 2.0 * s[i] + s[i - 1];
        rec.mean_second_difference = acc / std::max(1, l_max - 2);
        report.records.push_back(rec);
    }
    std::stable_sort(report.records.begin(), report.records.end(),
                     [](const ExtensivityRecord& a, const ExtensivityRecord& b) {
                         return a.r_squared > b.r_squared;
                     });
    return report;
}

} // namespace tfiq
