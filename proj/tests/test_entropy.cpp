#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tfiq/entanglement.hpp"
#include "tfiq/entropy.hpp"
#include "tfiq/scaling.hpp"

using namespace tfiq;

namespace {

Eigen::VectorXd random_probabilities(std::mt19937& rng, int len) {
    std::uniform_real_distribution<double> uni(0.01, 1.0);
    Eigen::VectorXd p(len);
    for (int i = 0; i < len; ++i) p[i] = uni(rng);
    p /= p.sum();
    std::sort(p.data(), p.data() + p.size(), std::greater<double>());
    return p;
}

} // namespace

TEST_CASE("q_log basics") {
    for (double q : {0.01, q_special_ising(), 0.7, 1.0, 2.0}) CHECK(q_log(1.0, q) == 0.0);
    CHECK(q_log(10.0, 1.0) == doctest::Approx(std::log(10.0)));
    CHECK(q_log(10.0, 1.0 + 1e-9) == doctest::Approx(std::log(10.0)).epsilon(1e-8));
    CHECK(std::abs(q_log(8.0, q_special_ising()) - 6.2528) <= 1e-3);
    CHECK_THROWS_WITH_AS((void)q_log(0.0, 0.5), doctest::Contains("domain-error"), Error);
    CHECK_THROWS_WITH_AS((void)q_log(-1.0, 0.5), doctest::Contains("domain-error"), Error);
}

TEST_CASE("tsallis entropy frozen values") {
    Eigen::VectorXd pure(1);
    pure[0] = 1.0;
    for (double q : {0.01, q_special_ising(), 0.7, 1.0, 2.0}) CHECK(tsallis_entropy(pure, q) == 0.0);

    Eigen::VectorXd half(2);
    half << 0.5, 0.5;
    CHECK(tsallis_entropy(half, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(tsallis_entropy(half, q_special_ising()) - 0.9687) <= 1e-3);

    // uniform over d equals ln_q(d)
    for (int d : {2, 3, 8, 32}) {
        Eigen::VectorXd u = Eigen::VectorXd::Constant(d, 1.0 / d);
        for (double q : {0.01, q_special_ising(), 0.7, 1.0, 1.9})
            CHECK(tsallis_entropy(u, q) ==
                  doctest::Approx(q_log(static_cast<double>(d), q)).epsilon(1e-12));
    }
    CHECK_THROWS_WITH_AS((void)tsallis_entropy(half, 0.0), doctest::Contains("unsupported-q"),
                         Error);
    CHECK_THROWS_WITH_AS((void)tsallis_entropy(half, -1.0), doctest::Contains("unsupported-q"),
                         Error);
}

TEST_CASE("entropy properties on random vectors") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> length(2, 64);
    for (int rep = 0; rep < 300; ++rep) {
        const int d = length(rng);
        const Eigen::VectorXd p = random_probabilities(rng, d);
        const double s1 = tsallis_entropy(p, 1.0);
        double prev = std::numeric_limits<double>::infinity();
        for (double q : {0.01, q_special_ising(), 0.3, 0.7, 1.0, 1.5, 2.5}) {
            const double s = tsallis_entropy(p, q);
            CHECK(s >= 0.0);
            CHECK(s <= q_log(static_cast<double>(d), q) + 1e-10);
            CHECK(s <= prev + 1e-12); // nonincreasing in q
            prev = s;
        }
        // q -> 1 continuity
        CHECK(std::abs(tsallis_entropy(p, 1.0 + 1e-6) - s1) <= 1e-4 * (1.0 + s1));
        CHECK(std::abs(tsallis_entropy(p, 1.0 - 1e-6) - s1) <= 1e-4 * (1.0 + s1));
    }
    // equality at uniform
    Eigen::VectorXd u = Eigen::VectorXd::Constant(16, 1.0 / 16.0);
    for (double q : {0.01, 0.7, 1.0})
        CHECK(std::abs(tsallis_entropy(u, q) - q_log(16.0, q)) <= 1e-10);
}

TEST_CASE("finite differences exact on low-degree polynomials") {
    EntropyCurve curve;
    curve.lambda_grid = make_grid(0.0, 1.0, 0.1);
    const Eigen::Index n = curve.lambda_grid.size();

    curve.values = Eigen::VectorXd::Constant(n, 3.5);
    GammaCurve g = gamma_from_curve(curve);
    CHECK(g.gamma.cwiseAbs().maxCoeff() <= 1e-12);

    curve.values = 2.0 * curve.lambda_grid;
    g = gamma_from_curve(curve);
    for (Eigen::Index i = 0; i < n; ++i) CHECK(g.gamma[i] == doctest::Approx(2.0).epsilon(1e-12));

    curve.values = curve.lambda_grid.array().square();
    g = gamma_from_curve(curve);
    for (Eigen::Index i = 0; i < n; ++i)
        CHECK(g.gamma[i] == doctest::Approx(2.0 * curve.lambda_grid[i]).epsilon(1e-10));

    EntropyCurve tiny;
    tiny.lambda_grid = make_grid(0.0, 0.1, 0.1);
    tiny.values = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_WITH_AS((void)gamma_from_curve(tiny), doctest::Contains("insufficient-grid"),
                         Error);
}

TEST_CASE("peak location with parabolic refinement") {
    GammaCurve g;
    g.lambda_grid = make_grid(0.13, 2.13, 0.05);
    g.gamma.resize(g.lambda_grid.size());
    for (Eigen::Index i = 0; i < g.lambda_grid.size(); ++i) {
        const double x = g.lambda_grid[i] - 1.0;
        g.gamma[i] = 5.0 - 3.0 * x * x;
    }
    const Peak p = locate_peak(g);
    CHECK_FALSE(p.boundary);
    CHECK(std::abs(p.lambda_star - 1.0) <= 1e-12);
    CHECK(std::abs(p.gamma_star - 5.0) <= 1e-12);

    GammaCurve mono;
    mono.lambda_grid = make_grid(0.0, 1.0, 0.1);
    mono.gamma = mono.lambda_grid;
    CHECK(locate_peak(mono).boundary);
}

TEST_CASE("sweep shares one solve per point and hits the oracle") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 2);
    const Eigen::VectorXd grid = make_grid(0.0, 1.0, 0.5);
    const std::vector<double> qs{1.0, q_special_ising()};
    const SweepResult sweep =
        entropy_sweep(spec, grid, qs, EntanglementTarget::site(default_site(spec)));
    REQUIRE(sweep.curves.size() == 2);
    CHECK(sweep.curves[0].values[0] == 0.0); // product state at lambda = 0
    CHECK(sweep.curves[1].values[0] == 0.0);

    // end-to-end against the dense oracle at lambda = 1
    const GroundState dense = ground_state_dense(spec, 1.0);
    const Eigen::MatrixXd rho = partial_trace_dense(dense.vector, spec, {default_site(spec)});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
    const double expected = tsallis_entropy(clip_probabilities(es.eigenvalues()), 1.0);
    CHECK(sweep.curves[0].values[2] == doctest::Approx(expected).epsilon(1e-10));

    const SweepResult again =
        entropy_sweep(spec, grid, qs, EntanglementTarget::site(default_site(spec)));
    CHECK((again.curves[0].values - sweep.curves[0].values).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(again.curves[0].spec_fingerprint == sweep.curves[0].spec_fingerprint);
}

TEST_CASE("sweep propagates solver failures") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 6);
    LanczosConfig cfg;
    cfg.max_krylov = 2;
    cfg.gap_probe = false;
    CHECK_THROWS_WITH_AS((void)entropy_sweep(spec, make_grid(0.5, 1.0, 0.25), {1.0},
                                             EntanglementTarget::site(3), cfg),
                         doctest::Contains("sweep-aborted"), Error);
}

TEST_CASE("block target in sweeps") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 4);
    const SweepResult sweep =
        entropy_sweep(spec, make_grid(0.5, 1.5, 0.5), {1.0}, EntanglementTarget::block(2));
    const GroundState gs = ground_state(spec, 1.0);
    const double expected = tsallis_entropy(block_probabilities(gs.vector, spec, 2), 1.0);
    CHECK(sweep.curves[0].values[1] == doctest::Approx(expected).epsilon(1e-12));
}
