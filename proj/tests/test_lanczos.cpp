#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tfiq/lanczos.hpp"

using namespace tfiq;

TEST_CASE("closed form: N=2 at lambda=1 gives -sqrt(5)") {
    const GroundState gs = ground_state(ChainSpec::with_defaults(1, 2), 1.0);
    CHECK(std::abs(gs.energy - (-std::sqrt(5.0))) <= 1e-10);
    CHECK(gs.residual <= 1e-12);
    CHECK(std::abs(gs.vector.norm() - 1.0) <= 1e-12);
    CHECK_FALSE(gs.degenerate);
}

TEST_CASE("lambda = 0 is the non-interacting product state") {
    for (int n : {3, 5, 6}) {
        const GroundState gs = ground_state(ChainSpec::with_defaults(1, n), 0.0);
        CHECK(std::abs(gs.energy - (-static_cast<double>(n))) <= 1e-10); // pauli sx has max eig 1
    }
    const GroundState raw = ground_state(
        [] {
            ChainSpec s = ChainSpec::with_defaults(1, 4);
            s.convention = Convention::raw;
            return s;
        }(),
        0.0);
    CHECK(std::abs(raw.energy - (-2.0)) <= 1e-10); // raw sx has max eig 1/2
}

TEST_CASE("classical B=0 chain is degenerate") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 4);
    const GroundState gs = ground_state(spec, Couplings{1.0, 0.0, 0.0});
    CHECK(std::abs(gs.energy - (-3.0)) <= 1e-10); // three bonds
    CHECK(gs.degenerate);
    CHECK(gs.gap_estimate <= 1e-8 * 3.0);
}

TEST_CASE("agrees with the dense solver over small specs") {
    std::vector<ChainSpec> specs;
    for (Model model : {Model::nn, Model::nnn})
        for (Boundary bound : {Boundary::open, Boundary::periodic}) {
            ChainSpec a = ChainSpec::with_defaults(1, 8, model);
            a.boundary = bound;
            specs.push_back(a);
            ChainSpec b = ChainSpec::with_defaults(3, 4, model);
            b.boundary = bound;
            specs.push_back(b);
        }
    for (const ChainSpec& spec : specs) {
        for (double lambda : {0.5, 1.0}) {
            const GroundState lz = ground_state(spec, lambda);
            const GroundState dn = ground_state_dense(spec, lambda);
            CHECK(std::abs(lz.energy - dn.energy) <= 1e-10 * (1.0 + std::abs(dn.energy)));
            if (dn.gap_estimate > 1e-8)
                CHECK(std::abs(lz.vector.dot(dn.vector)) >= 1.0 - 1e-8);
        }
    }
}

TEST_CASE("variational bound") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 6);
    const GroundState gs = ground_state(spec, 1.0);
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    const std::int64_t dim = hilbert_dimension(spec);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd v(dim);
        for (std::int64_t i = 0; i < dim; ++i) v[i] = gauss(rng);
        v.normalize();
        const double rayleigh = v.dot(apply_hamiltonian(spec, 1.0, v));
        CHECK(rayleigh >= gs.energy - 1e-10);
    }
}

TEST_CASE("deterministic run-to-run") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 9);
    const GroundState a = ground_state(spec, 0.9);
    const GroundState b = ground_state(spec, 0.9);
    CHECK(a.energy == b.energy);
    CHECK(a.iterations == b.iterations);
    CHECK((a.vector - b.vector).norm() == 0.0);
}

TEST_CASE("no convergence raises with the best residual") {
    LanczosConfig cfg;
    cfg.max_krylov = 3;
    cfg.gap_probe = false;
    CHECK_THROWS_WITH_AS((void)ground_state(ChainSpec::with_defaults(1, 8), 1.0, cfg),
                         doctest::Contains("no-convergence"), Error);
}

TEST_CASE("synthetic diagonal operator") {
    SymmetricOperator op;
    op.dim = 64;
    op.apply = [](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = static_cast<double>(i) * x[i];
    };
    const GroundState gs = lanczos_ground_state(op);
    CHECK(std::abs(gs.energy) <= 1e-10);
    CHECK(std::abs(gs.gap_estimate - 1.0) <= 1e-6);
    CHECK_FALSE(gs.degenerate);
}

TEST_CASE("streamed selective mode matches the in-memory solver") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 8);
    LanczosConfig tiny;
    tiny.memory_budget_bytes = 1024; // forces the disk-backed selective path
    const GroundState streamed = ground_state(spec, 1.0, tiny);
    const GroundState ram = ground_state(spec, 1.0);
    CHECK(std::abs(streamed.energy - ram.energy) <= 1e-10 * (1.0 + std::abs(ram.energy)));
    CHECK(streamed.residual <= 1e-10);
}

TEST_CASE("gap estimate matches the dense spectrum away from degeneracy") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 6);
    for (double lambda : {0.4, 1.0}) {
        const GroundState lz = ground_state(spec, lambda);
        const GroundState dn = ground_state_dense(spec, lambda);
        CHECK(lz.gap_estimate == doctest::Approx(dn.gap_estimate).epsilon(1e-6));
    }
}
