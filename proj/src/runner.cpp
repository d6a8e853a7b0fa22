#include "tfiq/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tfiq/entanglement.hpp"
#include "tfiq/io.hpp"
#include "tfiq/scaling.hpp"
#include "tfiq/svg.hpp"

namespace tfiq {

namespace {

using nlohmann::json;

struct RunContext {
    std::filesystem::path out;
    std::chrono::steady_clock::time_point t0;
    json manifest;
    std::vector<std::string> warnings;

    void warn(const std::string& msg) { warnings.push_back(msg); }
};

RunContext begin_run(const RunConfig& cfg, const std::string& command) {
    RunContext ctx;
    ctx.out = cfg.out_dir;
    std::filesystem::create_directories(ctx.out);
    ctx.t0 = std::chrono::steady_clock::now();
    ctx.manifest["command"] = command;
    ctx.manifest["version"] = TFIQ_VERSION;
    ctx.manifest["config_text"] = canonical_config_text(cfg);
    ctx.manifest["workers"] = cfg.workers;
    ctx.manifest["solver"] = {{"tol", cfg.tol},
                              {"max_krylov", cfg.max_krylov},
                              {"reorthogonalization", "full, streamed selective beyond the memory budget"},
                              {"start_rule", "normalized all-ones"}};
    return ctx;
}

void add_chain(RunContext& ctx, const ChainSpec& spec) {
    ctx.manifest["chain"] = {{"spin", spin_to_string(spec.two_s)},
                             {"two_s", spec.two_s},
                             {"n", spec.n_sites},
                             {"model", to_string(spec.model)},
                             {"ratio", spec.ratio},
                             {"boundary", to_string(spec.boundary)},
                             {"convention", to_string(spec.convention)},
                             {"hilbert_dimension", hilbert_dimension(spec)}};
}

void finish_run(RunContext& ctx, const std::string* csv, const std::string* svg) {
    if (csv != nullptr) write_file_atomic(ctx.out / "data.csv", *csv);
    if (svg != nullptr) write_file_atomic(ctx.out / "plot.svg", *svg);
    ctx.manifest["warnings"] = ctx.warnings;
    ctx.manifest["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.t0).count();
    write_file_atomic(ctx.out / "manifest.json", ctx.manifest.dump(2) + "\n");
}

CsvTable table_from_text(const std::string& csv) {
    CsvTable table;
    std::stringstream ss(csv);
    std::string line;
    bool have_header = false;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream cs(line);
        std::string cell;
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

EntanglementTarget resolved_target(const RunConfig& cfg, const ChainSpec& spec) {
    EntanglementTarget t = target_from(cfg);
    if (t.kind == EntanglementTarget::Kind::single_site) {
        const int site = t.index < 0 ? default_site(spec) : t.index;
        if (site < 0 || site >= spec.n_sites)
            throw Error(ErrorCode::config_error, "target: site " + std::to_string(site) +
                                                     " outside [0, " + std::to_string(spec.n_sites) +
                                                     ")");
        return EntanglementTarget::site(site);
    }
    if (t.index < 1 || t.index > spec.n_sites - 1)
        throw Error(ErrorCode::config_error,
                    "target: block size " + std::to_string(t.index) + " outside [1, N-1]");
    return t;
}

std::string target_label(const EntanglementTarget& t) {
    if (t.kind == EntanglementTarget::Kind::single_site)
        return "site:" + std::to_string(t.index);
    return "block:" + std::to_string(t.index);
}

// Gamma at a fixed lambda by linear interpolation on the sweep grid.
double gamma_at_fixed(const GammaCurve& curve, double lambda) {
    const Eigen::Index n = curve.lambda_grid.size();
    if (lambda < curve.lambda_grid[0] - 1e-12 || lambda > curve.lambda_grid[n - 1] + 1e-12)
        throw Error(ErrorCode::config_error,
                    "mode: fixed lambda " + std::to_string(lambda) + " outside the sweep grid");
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double a = curve.lambda_grid[i], b = curve.lambda_grid[i + 1];
        if (lambda <= b + 1e-12) {
            const double t = (lambda - a) / (b - a);
            return (1.0 - t) * curve.gamma[i] + t * curve.gamma[i + 1];
        }
    }
    return curve.gamma[n - 1];
}

struct GammaPoint {
    int n = 0;
    double gamma = 0.0;
    double lambda_at = 0.0;
    bool boundary = false;
};

// One Gamma value per chain size: sweep the von Neumann (q=1) entropy,
// differentiate, take the peak (or the fixed-lambda value). The finite-N
// Gamma data set is q-independent; the extrapolation's q only shapes the
// ln_q abscissa.
GammaPoint gamma_for_size(const RunConfig& cfg, int n, RunContext& ctx) {
    RunConfig sub = cfg;
    sub.n_sites = n;
    const ChainSpec spec = chain_spec_from(sub);
    const EntanglementTarget target = resolved_target(sub, spec);
    const Eigen::VectorXd grid = make_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_step);
    if (grid.size() < 3)
        throw Error(ErrorCode::config_error, "lambda_step: grid needs at least 3 points");
    const SweepResult sweep =
        entropy_sweep(spec, grid, {1.0}, target, lanczos_config_from(cfg), cfg.workers);
    const GammaCurve gamma = gamma_from_curve(sweep.curves[0]);

    GammaPoint point;
    point.n = n;
    if (cfg.mode == RunConfig::GammaMode::fixed) {
        point.lambda_at = cfg.fixed_lambda;
        point.gamma = gamma_at_fixed(gamma, cfg.fixed_lambda);
    } else {
        const Peak peak = locate_peak(gamma);
        point.lambda_at = peak.lambda_star;
        point.gamma = peak.gamma_star;
        point.boundary = peak.boundary;
        if (peak.boundary)
            ctx.warn("N=" + std::to_string(n) + ": gamma peak at the grid boundary (grid too narrow)");
    }
    if (std::count(sweep.degenerate.begin(), sweep.degenerate.end(), 1) > 0)
        ctx.warn("N=" + std::to_string(n) + ": degenerate ground state on part of the grid");
    return point;
}

} // namespace

RunArtifacts run_sweep(const RunConfig& cfg) {
    RunContext ctx = begin_run(cfg, "sweep");
    const ChainSpec spec = chain_spec_from(cfg);
    add_chain(ctx, spec);
    if (cfg.target_kind == RunConfig::TargetKind::scan)
        throw Error(ErrorCode::config_error, "target: scan is only valid for blockscan");
    const EntanglementTarget target = resolved_target(cfg, spec);
    ctx.manifest["target"] = target_label(target);
    if (!(cfg.lambda_max >= cfg.lambda_min))
        throw Error(ErrorCode::config_error, "lambda_max: must be >= lambda_min");
    const Eigen::VectorXd grid = make_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_step);
    if (grid.size() < 3)
        throw Error(ErrorCode::config_error, "lambda_step: grid needs at least 3 points");
    ctx.manifest["grid"] = {{"lambda_min", cfg.lambda_min},
                            {"lambda_max", cfg.lambda_max},
                            {"lambda_step", cfg.lambda_step},
                            {"points", grid.size()}};

    const SweepTable table =
        entropy_sweep_table(spec, grid, cfg.q_list, target, lanczos_config_from(cfg), cfg.workers);

    // gamma per q needs the whole curve; on a failed sweep the column is nan
    const std::size_t n_q = cfg.q_list.size();
    std::vector<Eigen::VectorXd> gammas(n_q);
    if (!table.failed) {
        for (std::size_t iq = 0; iq < n_q; ++iq) {
            EntropyCurve curve;
            curve.q = cfg.q_list[iq];
            curve.target = target;
            curve.lambda_grid = grid;
            curve.values = table.values.col(static_cast<Eigen::Index>(iq));
            gammas[iq] = gamma_from_curve(curve).gamma;
        }
    }

    std::ostringstream csv;
    csv << "lambda,q,s_q,gamma,degenerate\n";
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (!table.solved[static_cast<std::size_t>(i)]) continue;
        for (std::size_t iq = 0; iq < n_q; ++iq) {
            const double g = table.failed ? std::nan("") : gammas[iq][i];
            csv << format_number(grid[i]) << ',' << format_number(cfg.q_list[iq]) << ','
                << format_number(table.values(i, static_cast<Eigen::Index>(iq))) << ','
                << format_number(g) << ',' << (table.degenerate[static_cast<std::size_t>(i)] ? 1 : 0)
                << "\n";
        }
    }

    if (table.failed) {
        ctx.warn("sweep aborted: " + table.failure + " (partial rows preserved)");
        ctx.manifest["aborted"] = true;
        const std::string text = csv.str();
        finish_run(ctx, &text, nullptr);
        throw Error(ErrorCode::sweep_aborted, table.failure);
    }

    json peaks = json::array();
    for (std::size_t iq = 0; iq < n_q; ++iq) {
        GammaCurve curve{grid, gammas[iq]};
        const Peak peak = locate_peak(curve);
        if (peak.boundary)
            ctx.warn("q=" + format_number(cfg.q_list[iq]) + ": gamma peak at the grid boundary");
        peaks.push_back({{"q", cfg.q_list[iq]},
                         {"lambda_star", peak.lambda_star},
                         {"gamma_star", peak.gamma_star},
                         {"boundary", peak.boundary}});
    }
    ctx.manifest["peaks"] = peaks;
    int degenerate_points = 0;
    for (char d : table.degenerate) degenerate_points += d;
    ctx.manifest["degenerate_points"] = degenerate_points;

    const std::string text = csv.str();
    const std::string svg =
        render_svg_plot(table_from_text(text), PlotSpec{"lambda", "gamma", "q", "gamma versus lambda"});
    finish_run(ctx, &text, &svg);
    return {ctx.out, 0};
}

RunArtifacts run_blockscan(const RunConfig& cfg) {
    RunContext ctx = begin_run(cfg, "blockscan");
    const ChainSpec spec = chain_spec_from(cfg);
    add_chain(ctx, spec);
    if (!cfg.lambda)
        throw Error(ErrorCode::config_error, "lambda: required for blockscan (the fixed point)");
    ctx.manifest["lambda"] = *cfg.lambda;

    const GroundState gs = ground_state(spec, *cfg.lambda, lanczos_config_from(cfg));
    if (gs.degenerate) ctx.warn("degenerate ground state at the scan point");
    ctx.manifest["ground_state"] = {{"energy", gs.energy},
                                    {"residual", gs.residual},
                                    {"iterations", gs.iterations},
                                    {"gap_estimate", gs.gap_estimate},
                                    {"degenerate", gs.degenerate}};

    const int n = spec.n_sites;
    const std::size_t n_q = cfg.q_list.size();
    std::vector<Eigen::VectorXd> sq(n_q, Eigen::VectorXd(n - 1));
    for (int l = 1; l < n; ++l) {
        const Eigen::VectorXd p = block_probabilities(gs.vector, spec, l);
        for (std::size_t iq = 0; iq < n_q; ++iq)
            sq[iq][l - 1] = tsallis_entropy(p, cfg.q_list[iq]);
    }

    std::ostringstream csv;
    csv << "l,q,s_q\n";
    for (int l = 1; l < n; ++l)
        for (std::size_t iq = 0; iq < n_q; ++iq)
            csv << l << ',' << format_number(cfg.q_list[iq]) << ',' << format_number(sq[iq][l - 1])
                << "\n";

    if (n >= 6) {
        std::vector<std::pair<double, Eigen::VectorXd>> curves;
        for (std::size_t iq = 0; iq < n_q; ++iq) curves.push_back({cfg.q_list[iq], sq[iq]});
        const ExtensivityReport report = extensivity_report(curves, n);
        csv << "# extensivity l_max=" << report.l_max << "\n";
        json recs = json::array();
        for (const ExtensivityRecord& rec : report.records) {
            csv << "# extensivity q=" << format_number(rec.q) << " slope=" << format_number(rec.slope)
                << " intercept=" << format_number(rec.intercept)
                << " r_squared=" << format_number(rec.r_squared)
                << " mean_second_difference=" << format_number(rec.mean_second_difference) << "\n";
            recs.push_back({{"q", rec.q},
                            {"slope", rec.slope},
                            {"intercept", rec.intercept},
                            {"r_squared", rec.r_squared},
                            {"mean_second_difference", rec.mean_second_difference}});
        }
        ctx.manifest["extensivity"] = {{"l_max", report.l_max}, {"records", recs}};
    } else {
        ctx.warn("extensivity report skipped: range-too-short (N < 6)");
    }

    const std::string text = csv.str();
    const std::string svg =
        render_svg_plot(table_from_text(text), PlotSpec{"l", "s_q", "q", "block entropy versus L"});
    finish_run(ctx, &text, &svg);
    return {ctx.out, 0};
}

RunArtifacts run_extrapolate(const RunConfig& cfg) {
    RunContext ctx = begin_run(cfg, "extrapolate");
    if (cfg.q_list.size() != 1)
        throw Error(ErrorCode::config_error, "q_list: extrapolate uses exactly one q");
    const double q = cfg.q_list[0];
    if (cfg.n_list.empty()) throw Error(ErrorCode::config_error, "n_list: required for extrapolate");

    std::vector<GammaPoint> entries;
    if (!cfg.gamma_list.empty()) {
        if (cfg.gamma_list.size() != cfg.n_list.size())
            throw Error(ErrorCode::config_error, "gamma_list: length must match n_list");
        for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
            entries.push_back({cfg.n_list[i], cfg.gamma_list[i], 0.0, false});
        ctx.manifest["injected"] = true;
    } else {
        for (int n : cfg.n_list) entries.push_back(gamma_for_size(cfg, n, ctx));
        ctx.manifest["mode"] = cfg.mode == RunConfig::GammaMode::peak
                                   ? std::string("peak")
                                   : "fixed:" + format_number(cfg.fixed_lambda);
        ctx.manifest["gamma_source"] = "q=1 entropy curve";
    }

    std::vector<std::pair<int, double>> points;
    for (const GammaPoint& e : entries) points.push_back({e.n, e.gamma});
    const ExtrapolationFit fit = fit_gamma_extrapolation(points, q);

    std::ostringstream csv;
    csv << "n,gamma,abscissa\n";
    json per_n = json::array();
    for (const GammaPoint& e : entries) {
        csv << e.n << ',' << format_number(e.gamma) << ','
            << format_number(qlog_abscissa(e.n, q, fit.a_q)) << "\n";
        per_n.push_back({{"n", e.n},
                         {"gamma", e.gamma},
                         {"lambda_at", e.lambda_at},
                         {"boundary_peak", e.boundary}});
    }
    csv << "# fit q=" << format_number(q) << " a_q=" << format_number(fit.a_q)
        << " slope=" << format_number(fit.slope) << " intercept=" << format_number(fit.intercept)
        << " r_squared=" << format_number(fit.r_squared) << " gamma_infinity="
        << (fit.gamma_infinity ? format_number(*fit.gamma_infinity) : std::string("divergent"))
        << "\n";

    ctx.manifest["points"] = per_n;
    ctx.manifest["fit"] = {{"q", q},
                           {"a_q", fit.a_q},
                           {"slope", fit.slope},
                           {"intercept", fit.intercept},
                           {"r_squared", fit.r_squared},
                           {"gamma_infinity", fit.gamma_infinity ? json(*fit.gamma_infinity)
                                                                 : json("divergent")}};

    const std::string text = csv.str();
    const std::string svg = render_svg_plot(
        table_from_text(text), PlotSpec{"abscissa", "gamma", "", "finite-size extrapolation"});
    finish_run(ctx, &text, &svg);
    return {ctx.out, 0};
}

RunArtifacts run_spin_power(const RunConfig& cfg) {
    RunContext ctx = begin_run(cfg, "spin-power");
    if (cfg.spin_list.empty())
        throw Error(ErrorCode::config_error, "spin_list: required for spin-power");
    if (cfg.q_list.size() != 1)
        throw Error(ErrorCode::config_error, "q_list: spin-power uses exactly one q");
    const double q = cfg.q_list[0];

    std::vector<std::pair<double, double>> points; // (S, gamma_infinity)
    json per_spin = json::array();
    if (!cfg.gamma_infinity_list.empty()) {
        if (cfg.gamma_infinity_list.size() != cfg.spin_list.size())
            throw Error(ErrorCode::config_error, "gamma_infinity_list: length must match spin_list");
        for (std::size_t i = 0; i < cfg.spin_list.size(); ++i) {
            points.push_back({0.5 * cfg.spin_list[i], cfg.gamma_infinity_list[i]});
            per_spin.push_back({{"spin", spin_to_string(cfg.spin_list[i])},
                                {"gamma_infinity", cfg.gamma_infinity_list[i]}});
        }
        ctx.manifest["injected"] = true;
    } else {
        if (cfg.n_list.empty())
            throw Error(ErrorCode::config_error, "n_list: required to compute gamma_infinity");
        for (int two_s : cfg.spin_list) {
            RunConfig sub = cfg;
            sub.two_s = two_s;
            if (!cfg.convention) sub.convention.reset(); // re-resolve the default per spin
            std::vector<std::pair<int, double>> per_n;
            for (int n : sub.n_list) per_n.push_back({n, gamma_for_size(sub, n, ctx).gamma});
            const ExtrapolationFit fit = fit_gamma_extrapolation(per_n, q);
            if (!fit.gamma_infinity)
                throw Error(ErrorCode::invalid_input,
                            "spin " + spin_to_string(two_s) + ": divergent gamma_infinity");
            points.push_back({0.5 * two_s, *fit.gamma_infinity});
            per_spin.push_back({{"spin", spin_to_string(two_s)},
                                {"gamma_infinity", *fit.gamma_infinity},
                                {"a_q", fit.a_q},
                                {"intercept", fit.intercept},
                                {"r_squared", fit.r_squared}});
        }
    }

    const PowerLawFit fit = fit_spin_power_law(points);
    std::ostringstream csv;
    csv << "s,gamma_infinity\n";
    for (const auto& [s, g] : points) csv << format_number(s) << ',' << format_number(g) << "\n";
    csv << "# fit c=" << format_number(fit.c) << " beta=" << format_number(fit.beta)
        << " r_squared=" << format_number(fit.r_squared) << "\n";

    ctx.manifest["points"] = per_spin;
    ctx.manifest["fit"] = {{"c", fit.c}, {"beta", fit.beta}, {"r_squared", fit.r_squared}};

    const std::string text = csv.str();
    const std::string svg = render_svg_plot(table_from_text(text),
                                            PlotSpec{"s", "gamma_infinity", "", "gamma versus spin"});
    finish_run(ctx, &text, &svg);
    return {ctx.out, 0};
}

RunArtifacts run_plot(const RunConfig& cfg) {
    RunContext ctx = begin_run(cfg, "plot");
    if (cfg.csv.empty()) throw Error(ErrorCode::config_error, "csv: required for plot");
    const CsvTable table = read_csv(cfg.csv);
    const std::string svg = render_svg_plot(table, PlotSpec{cfg.x, cfg.y, cfg.series, cfg.title});
    finish_run(ctx, nullptr, &svg);
    return {ctx.out, 0};
}

RunConfig config_from_manifest(const std::filesystem::path& manifest_path) {
    const std::string text = read_file(manifest_path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::config_error, "manifest parse failure: " + std::string(e.what()));
    }
    if (!j.contains("config_text"))
        throw Error(ErrorCode::config_error, "manifest has no config_text");
    return parse_config(j["config_text"].get<std::string>());
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

namespace {

struct CheckRow {
    ChainSpec spec;
    double lambda;
    std::string check;
    double observed;
    double bound;
    bool pass;
};

void add_check(std::vector<CheckRow>& rows, const ChainSpec& spec, double lambda,
               const std::string& name, double observed, double bound) {
    rows.push_back({spec, lambda, name, observed, bound, observed <= bound});
}

} // namespace

RunArtifacts run_oracle_check(const RunConfig& cfg, double tolerance_scale) {
    RunContext ctx = begin_run(cfg, "oracle-check");
    const std::int64_t dim_cap = 1024;

    std::vector<ChainSpec> variants;
    for (int two_s = 1; two_s <= 7; ++two_s) {
        for (int n = 2;; ++n) {
            ChainSpec probe = ChainSpec::with_defaults(two_s, n);
            std::int64_t dim = 0;
            try {
                dim = hilbert_dimension(probe);
            } catch (const Error&) {
                break;
            }
            if (dim > dim_cap) break;
            for (Model model : {Model::nn, Model::nnn}) {
                if (model == Model::nnn && n < 3) continue;
                for (Boundary bound : {Boundary::open, Boundary::periodic}) {
                    for (Convention conv : {Convention::pauli, Convention::raw}) {
                        ChainSpec spec = ChainSpec::with_defaults(two_s, n, model);
                        spec.boundary = bound;
                        spec.convention = conv;
                        variants.push_back(spec);
                    }
                }
            }
        }
    }

    const LanczosConfig lz = lanczos_config_from(cfg);
    std::vector<CheckRow> rows;
    const double s5 = std::sqrt(5.0);

    for (const ChainSpec& spec : variants) {
        const std::int64_t dim = hilbert_dimension(spec);

        for (double lambda : {0.0, 0.6, 1.0}) {
            const Eigen::MatrixXd h = dense_hamiltonian(spec, lambda);
            double worst = 0.0;
            for (std::int64_t j = 0; j < dim; ++j) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
                e[j] = 1.0;
                const Eigen::VectorXd diff = apply_hamiltonian(spec, lambda, e) - h.col(j);
                worst = std::max(worst, diff.cwiseAbs().maxCoeff());
            }
            add_check(rows, spec, lambda, "matvec_vs_dense", worst, 1e-12 * tolerance_scale);

            if (lambda == 0.0) continue; // solver checks on the interacting points
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
            const double e_dense = es.eigenvalues()(0);
            const Eigen::VectorXd v_dense = es.eigenvectors().col(0);
            const double gap_dense =
                (dim > 1) ? es.eigenvalues()(1) - es.eigenvalues()(0) : 0.0;

            const GroundState gs = ground_state(spec, lambda, lz);
            add_check(rows, spec, lambda, "lanczos_energy_vs_dense",
                      std::abs(gs.energy - e_dense), 1e-10 * (1.0 + std::abs(e_dense)) * tolerance_scale);
            if (gap_dense > 1e-8)
                add_check(rows, spec, lambda, "lanczos_overlap_vs_dense",
                          1.0 - std::abs(gs.vector.dot(v_dense)), 1e-8 * tolerance_scale);

            if (spec.two_s == 1 && spec.n_sites == 2 && spec.model == Model::nn &&
                spec.boundary == Boundary::open && spec.convention == Convention::pauli &&
                lambda == 1.0)
                add_check(rows, spec, lambda, "closed_form_energy", std::abs(gs.energy + s5),
                          1e-10 * tolerance_scale);

            for (int l = 1; l < spec.n_sites; ++l) {
                const Eigen::VectorXd p = block_probabilities(gs.vector, spec, l);
                const SchmidtSpectrum schmidt = schmidt_spectrum(gs.vector, spec, l);
                std::vector<int> kept;
                for (int s = 0; s < l; ++s) kept.push_back(s);
                const Eigen::MatrixXd rho = partial_trace_dense(gs.vector, spec, kept);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> res(rho, Eigen::EigenvaluesOnly);
                const Eigen::VectorXd oracle = clip_probabilities(res.eigenvalues());
                double diff = 0.0;
                const Eigen::Index m = std::min(p.size(), oracle.size());
                for (Eigen::Index i = 0; i < m; ++i) diff = std::max(diff, std::abs(p[i] - oracle[i]));
                for (Eigen::Index i = m; i < p.size(); ++i) diff = std::max(diff, p[i]);
                for (Eigen::Index i = m; i < oracle.size(); ++i) diff = std::max(diff, oracle[i]);
                double sdiff = 0.0;
                for (Eigen::Index i = 0; i < p.size(); ++i)
                    sdiff = std::max(sdiff,
                                     std::abs(schmidt.coefficients[i] * schmidt.coefficients[i] - p[i]));
                add_check(rows, spec, lambda, "block_rdm_vs_dense_L" + std::to_string(l), diff,
                          1e-12 * tolerance_scale);
                add_check(rows, spec, lambda, "schmidt_sq_vs_block_L" + std::to_string(l), sdiff,
                          1e-12 * tolerance_scale);
            }

            std::set<int> sites{0, spec.n_sites / 2, spec.n_sites - 1};
            for (int site : sites) {
                const Eigen::VectorXd p = rdm_probabilities(single_site_rdm(gs.vector, spec, site));
                const Eigen::MatrixXd rho = partial_trace_dense(gs.vector, spec, {site});
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> res(rho, Eigen::EigenvaluesOnly);
                const Eigen::VectorXd oracle = clip_probabilities(res.eigenvalues());
                double diff = 0.0;
                for (Eigen::Index i = 0; i < p.size(); ++i)
                    diff = std::max(diff, std::abs(p[i] - oracle[i]));
                add_check(rows, spec, lambda, "site_rdm_vs_dense_i" + std::to_string(site), diff,
                          1e-12 * tolerance_scale);
            }
        }
    }

    std::ostringstream csv;
    csv << "spin,n,model,boundary,convention,lambda,check,observed,bound,pass\n";
    int failures = 0;
    for (const CheckRow& row : rows) {
        if (!row.pass) ++failures;
        csv << spin_to_string(row.spec.two_s) << ',' << row.spec.n_sites << ','
            << to_string(row.spec.model) << ',' << to_string(row.spec.boundary) << ','
            << to_string(row.spec.convention) << ',' << format_number(row.lambda) << ',' << row.check
            << ',' << format_number(row.observed) << ',' << format_number(row.bound) << ','
            << (row.pass ? 1 : 0) << "\n";
    }

    ctx.manifest["checks_total"] = rows.size();
    ctx.manifest["failures"] = failures;
    ctx.manifest["specs_checked"] = variants.size();
    if (failures > 0) ctx.warn(std::to_string(failures) + " oracle checks failed");

    const std::string text = csv.str();
    finish_run(ctx, &text, nullptr);
    return {ctx.out, failures == 0 ? 0 : 4};
}

} // namespace tfiq
