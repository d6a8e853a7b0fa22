#include "tfiq/entropy.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>

#include "tfiq/entanglement.hpp"

namespace tfiq {

double q_log(double x, double q) {
    if (!(x > 0.0)) throw Error(ErrorCode::domain_error, "q_log requires x > 0");
    if (std::abs(q - 1.0) < kQOneTolerance) return std::log(x);
    return (std::pow(x, 1.0 - q) - 1.0) / (1.0 - q);
}

double tsallis_entropy(const Eigen::VectorXd& probabilities, double q) {
    if (!(q > 0.0)) throw Error(ErrorCode::unsupported_q, "q must be > 0");
    if (std::abs(q - 1.0) < kQOneTolerance) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
            const double p = probabilities[i];
            if (p > 0.0) s -= p * std::log(p);
        }
        return std::max(s, 0.0);
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
        const double p = probabilities[i];
        if (p > 0.0) sum += std::pow(p, q);
    }
    return std::max((1.0 - sum) / (q - 1.0), 0.0);
}

std::uint64_t spec_fingerprint(const ChainSpec& spec, const LanczosConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d|%d|%s|%.17g|%s|%s|%d|%.17g|%d", spec.two_s, spec.n_sites,
                  to_string(spec.model), spec.ratio, to_string(spec.boundary),
                  to_string(spec.convention), cfg.max_krylov, cfg.tol,
                  static_cast<int>(cfg.reorthogonalization));
    // FNV-1a
    std::uint64_t h = 14695981039346656037ull;
    for (const char* p = buf; *p != '\0'; ++p) {
        h ^= static_cast<std::uint64_t>(*p);
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

void check_grid(const Eigen::VectorXd& grid) {
    if (grid.size() < 1) throw Error(ErrorCode::invalid_input, "empty lambda grid");
    for (Eigen::Index i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw Error(ErrorCode::invalid_input, "lambda grid must be strictly ascending");
    if (grid.size() >= 3) {
        const double h = grid[1] - grid[0];
        for (Eigen::Index i = 1; i + 1 < grid.size(); ++i)
            if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-12 * std::max(1.0, std::abs(h)))
                throw Error(ErrorCode::invalid_input, "lambda grid must be uniform");
    }
}

Eigen::VectorXd target_probabilities(const Eigen::VectorXd& state, const ChainSpec& spec,
                                     const EntanglementTarget& target) {
    if (target.kind == EntanglementTarget::Kind::single_site) {
        const int site = target.index < 0 ? default_site(spec) : target.index;
        return rdm_probabilities(single_site_rdm(state, spec, site));
    }
    return block_probabilities(state, spec, target.index);
}

} // namespace

SweepTable entropy_sweep_table(const ChainSpec& spec, const Eigen::VectorXd& lambda_grid,
                               const std::vector<double>& q_list, const EntanglementTarget& target,
                               const LanczosConfig& cfg, int workers) {
    validate(spec);
    check_grid(lambda_grid);
    if (q_list.empty()) throw Error(ErrorCode::invalid_input, "q_list must not be empty");
    for (double q : q_list)
        if (!(q > 0.0)) throw Error(ErrorCode::unsupported_q, "q must be > 0");

    const Eigen::Index n_points = lambda_grid.size();
    const std::size_t n_q = q_list.size();
    SweepTable table;
    table.values.setZero(n_points, static_cast<Eigen::Index>(n_q));
    table.degenerate.assign(static_cast<std::size_t>(n_points), 0);
    table.solved.assign(static_cast<std::size_t>(n_points), 0);
    std::atomic<bool> failed{false};

    auto solve_point = [&](Eigen::Index i) {
        if (failed.load()) return;
        try {
            const GroundState gs = ground_state(spec, lambda_grid[i], cfg);
            table.degenerate[static_cast<std::size_t>(i)] = gs.degenerate ? 1 : 0;
            const Eigen::VectorXd p = target_probabilities(gs.vector, spec, target);
            for (std::size_t iq = 0; iq < n_q; ++iq)
                table.values(i, static_cast<Eigen::Index>(iq)) = tsallis_entropy(p, q_list[iq]);
            table.solved[static_cast<std::size_t>(i)] = 1;
        } catch (const std::exception& e) {
            bool expected = false;
            if (failed.compare_exchange_strong(expected, true))
                table.failure = "lambda = " + std::to_string(lambda_grid[i]) + ": " + e.what();
        }
    };

    if (workers > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (Eigen::Index i = 0; i < n_points; ++i) solve_point(i);
    } else {
        for (Eigen::Index i = 0; i < n_points; ++i) solve_point(i);
    }
    table.failed = failed.load();
    return table;
}

SweepResult entropy_sweep(const ChainSpec& spec, const Eigen::VectorXd& lambda_grid,
                          const std::vector<double>& q_list, const EntanglementTarget& target,
                          const LanczosConfig& cfg, int workers) {
    SweepTable table = entropy_sweep_table(spec, lambda_grid, q_list, target, cfg, workers);
    if (table.failed) throw Error(ErrorCode::sweep_aborted, table.failure);

    SweepResult out;
    out.degenerate = std::move(table.degenerate);
    const std::uint64_t fp = spec_fingerprint(spec, cfg);
    for (std::size_t iq = 0; iq < q_list.size(); ++iq) {
        EntropyCurve c;
        c.q = q_list[iq];
        c.target = target;
        c.lambda_grid = lambda_grid;
        c.values = table.values.col(static_cast<Eigen::Index>(iq));
        c.spec_fingerprint = fp;
        out.curves.push_back(std::move(c));
    }
    return out;
}

GammaCurve gamma_from_curve(const EntropyCurve& curve) {
    const Eigen::Index n = curve.lambda_grid.size();
    if (n < 3) throw Error(ErrorCode::insufficient_grid, "gamma needs at least 3 grid points");
    check_grid(curve.lambda_grid);
    if (curve.values.size() != n)
        throw Error(ErrorCode::shape_error, "curve values/grid length mismatch");

    const double h = curve.lambda_grid[1] - curve.lambda_grid[0];
    GammaCurve out;
    out.lambda_grid = curve.lambda_grid;
    out.gamma.resize(n);
    const Eigen::VectorXd& s = curve.values;
    out.gamma[0] = (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h);
    for (Eigen::Index i = 1; i + 1 < n; ++i) out.gamma[i] = (s[i + 1] - s[i - 1]) / (2.0 * h);
    out.gamma[n - 1] = (3.0 * s[n - 1] - 4.0 * s[n - 2] + s[n - 3]) / (2.0 * h);
    return out;
}

Peak locate_peak(const GammaCurve& curve) {
    const Eigen::Index n = curve.lambda_grid.size();
    if (n < 3) throw Error(ErrorCode::insufficient_grid, "peak location needs at least 3 points");

    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n; ++i)
        if (curve.gamma[i] > curve.gamma[best]) best = i; // ties keep the smaller lambda

    Peak peak;
    peak.lambda_star = curve.lambda_grid[best];
    peak.gamma_star = curve.gamma[best];
    if (best == 0 || best == n - 1) {
        peak.boundary = true;
        return peak;
    }
    const double gm = curve.gamma[best - 1], g0 = curve.gamma[best], gp = curve.gamma[best + 1];
    const double denom = gm - 2.0 * g0 + gp;
    if (denom < 0.0) {
        const double h = curve.lambda_grid[1] - curve.lambda_grid[0];
        const double shift = 0.5 * (gm - gp) / denom;
        peak.lambda_star = curve.lambda_grid[best] + shift * h;
        peak.gamma_star = g0 - 0.25 * (gm - gp) * shift;
    }
    return peak;
}

Eigen::VectorXd make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi >= lo))
        throw Error(ErrorCode::invalid_input, "grid requires hi >= lo and step > 0");
    const auto count = static_cast<Eigen::Index>(std::floor((hi - lo) / step + 1e-9)) + 1;
    Eigen::VectorXd grid(count);
    for (Eigen::Index i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
    return grid;
}

} // namespace tfiq
