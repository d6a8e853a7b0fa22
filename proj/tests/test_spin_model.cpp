#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tfiq/spin_model.hpp"

using namespace tfiq;

TEST_CASE("pauli matrices for S = 1/2") {
    const SpinOperators ops = spin_operators(1, Convention::pauli);
    CHECK(ops.sz(0, 0) == doctest::Approx(1.0));
    CHECK(ops.sz(1, 1) == doctest::Approx(-1.0));
    CHECK(ops.sz(0, 1) == 0.0);
    CHECK(ops.sx(0, 1) == doctest::Approx(1.0));
    CHECK(ops.sx(1, 0) == doctest::Approx(1.0));
    CHECK(ops.sx(0, 0) == 0.0);
}

TEST_CASE("raw spin-1 matrices") {
    const SpinOperators ops = spin_operators(2, Convention::raw);
    CHECK(ops.sz(0, 0) == doctest::Approx(1.0));
    CHECK(ops.sz(1, 1) == doctest::Approx(0.0));
    CHECK(ops.sz(2, 2) == doctest::Approx(-1.0));
    const double isq2 = 1.0 / std::sqrt(2.0);
    CHECK(ops.sx(0, 1) == doctest::Approx(isq2));
    CHECK(ops.sx(1, 2) == doctest::Approx(isq2));
    CHECK(ops.sx(0, 2) == 0.0);
}

TEST_CASE("raw spin-3/2 ladder amplitudes") {
    const SpinOperators ops = spin_operators(3, Convention::raw);
    CHECK(ops.sx(0, 1) == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(ops.sx(1, 2) == doctest::Approx(1.0));
    CHECK(ops.sx(2, 3) == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK((ops.sx - ops.sx.transpose()).norm() == doctest::Approx(0.0));
}

TEST_CASE("invalid spin rejected") {
    CHECK_THROWS_WITH_AS(spin_operators(0, Convention::raw), doctest::Contains("invalid-spin"),
                         Error);
}

TEST_CASE("hilbert dimensions") {
    CHECK(hilbert_dimension(ChainSpec::with_defaults(1, 3)) == 8);
    CHECK(hilbert_dimension(ChainSpec::with_defaults(3, 11)) == 4194304);
    CHECK(hilbert_dimension(ChainSpec::with_defaults(7, 8)) == 16777216);
    CHECK_THROWS_AS((void)hilbert_dimension(ChainSpec::with_defaults(7, 25)), Error);
}

TEST_CASE("defaults follow model and spin") {
    const ChainSpec nn = ChainSpec::with_defaults(1, 4);
    CHECK(nn.boundary == Boundary::open);
    CHECK(nn.convention == Convention::pauli);
    const ChainSpec nnn = ChainSpec::with_defaults(3, 5, Model::nnn);
    CHECK(nnn.boundary == Boundary::periodic);
    CHECK(nnn.convention == Convention::raw);
    CHECK(nnn.ratio == doctest::Approx(-0.32));
    CHECK_THROWS_AS(validate(ChainSpec::with_defaults(1, 2, Model::nnn)), Error);
}

TEST_CASE("classical diagonal limit: J=1, B=0, all-up is an eigenstate") {
    ChainSpec spec = ChainSpec::with_defaults(1, 3);
    spec.boundary = Boundary::periodic;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
    v[0] = 1.0; // |up up up>
    Eigen::VectorXd out(8);
    apply_hamiltonian(spec, Couplings{1.0, 0.0, 0.0}, {v.data(), 8}, {out.data(), 8});
    CHECK(out[0] == doctest::Approx(-3.0));
    CHECK((out - (-3.0) * v).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("N=2 open chain action on |up up>") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 2);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
    v[0] = 1.0;
    const Eigen::VectorXd out = apply_hamiltonian(spec, 1.0, v);
    CHECK(out[0] == doctest::Approx(-1.0)); // -J |up up>
    CHECK(out[1] == doctest::Approx(-1.0)); // -B |up dn>
    CHECK(out[2] == doctest::Approx(-1.0)); // -B |dn up>
    CHECK(out[3] == doctest::Approx(0.0));
}

TEST_CASE("matvec is symmetric") {
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    for (const ChainSpec& spec :
         {ChainSpec::with_defaults(1, 6), ChainSpec::with_defaults(2, 4, Model::nnn),
          ChainSpec::with_defaults(3, 3)}) {
        const std::int64_t dim = hilbert_dimension(spec);
        for (int rep = 0; rep < 20; ++rep) {
            Eigen::VectorXd u(dim), v(dim);
            for (std::int64_t i = 0; i < dim; ++i) {
                u[i] = gauss(rng);
                v[i] = gauss(rng);
            }
            const Eigen::VectorXd hu = apply_hamiltonian(spec, 0.7, u);
            const Eigen::VectorXd hv = apply_hamiltonian(spec, 0.7, v);
            const double scale = u.norm() * v.norm() * (hu.norm() / std::max(u.norm(), 1e-300));
            CHECK(std::abs(u.dot(hv) - hu.dot(v)) <= 1e-10 * std::max(scale, 1.0));
        }
    }
}

TEST_CASE("shape mismatch rejected") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 3);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(7);
    CHECK_THROWS_WITH_AS((void)apply_hamiltonian(spec, 1.0, v), doctest::Contains("shape-error"),
                         Error);
}

TEST_CASE("dense oracle: N=2 eigenvalues at lambda = 1") {
    const Eigen::MatrixXd h = dense_hamiltonian(ChainSpec::with_defaults(1, 2), 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const double s5 = std::sqrt(5.0);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-s5).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(3) == doctest::Approx(s5).epsilon(1e-12));
}

TEST_CASE("dense oracle: zero diagonal at lambda = 0 in pauli convention") {
    const Eigen::MatrixXd h = dense_hamiltonian(ChainSpec::with_defaults(1, 4), 0.0);
    CHECK(h.diagonal().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((h - h.transpose()).norm() == doctest::Approx(0.0));
}

TEST_CASE("matvec agrees with the dense oracle over the full basis") {
    std::vector<ChainSpec> specs;
    for (Convention conv : {Convention::pauli, Convention::raw})
        for (Boundary bound : {Boundary::open, Boundary::periodic})
            for (Model model : {Model::nn, Model::nnn}) {
                ChainSpec s = ChainSpec::with_defaults(1, 5, model);
                s.convention = conv;
                s.boundary = bound;
                specs.push_back(s);
                ChainSpec t = ChainSpec::with_defaults(2, 4, model);
                t.convention = conv;
                t.boundary = bound;
                specs.push_back(t);
            }
    for (const ChainSpec& spec : specs) {
        for (double lambda : {0.0, 0.6, 1.7}) {
            const Eigen::MatrixXd h = dense_hamiltonian(spec, lambda);
            const std::int64_t dim = hilbert_dimension(spec);
            double worst = 0.0;
            for (std::int64_t j = 0; j < dim; ++j) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
                e[j] = 1.0;
                const Eigen::VectorXd diff = apply_hamiltonian(spec, lambda, e) - h.col(j);
                worst = std::max(worst, diff.cwiseAbs().maxCoeff());
            }
            CHECK(worst <= 1e-12);
        }
    }
}

TEST_CASE("pauli and raw conventions are the same model after rescaling") {
    // raw H(J=4 Jp, B=2 Bp) == pauli H(Jp, Bp) as matrices
    for (int n : {2, 3, 4}) {
        ChainSpec pauli = ChainSpec::with_defaults(1, n);
        ChainSpec raw = pauli;
        raw.convention = Convention::raw;
        const double jp = 0.8, bp = 1.0;
        const Eigen::MatrixXd hp = dense_hamiltonian(pauli, Couplings{jp, 0.0, bp});
        const Eigen::MatrixXd hr = dense_hamiltonian(raw, Couplings{4.0 * jp, 0.0, 2.0 * bp});
        CHECK((hp - hr).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("dense oracle refuses large dimensions") {
    CHECK_THROWS_WITH_AS((void)dense_hamiltonian(ChainSpec::with_defaults(1, 13), 1.0),
                         doctest::Contains("oracle-limit-exceeded"), Error);
}
