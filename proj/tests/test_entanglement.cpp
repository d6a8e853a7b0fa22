#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tfiq/entanglement.hpp"
#include "tfiq/lanczos.hpp"

using namespace tfiq;

namespace {

Eigen::VectorXd bell_state() {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    return v;
}

Eigen::VectorXd random_product_state(const ChainSpec& spec, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    const int d = spec.two_s + 1;
    Eigen::VectorXd state = Eigen::VectorXd::Ones(1);
    for (int site = 0; site < spec.n_sites; ++site) {
        Eigen::VectorXd local(d);
        for (int a = 0; a < d; ++a) local[a] = gauss(rng);
        local.normalize();
        Eigen::VectorXd next(state.size() * d);
        for (Eigen::Index i = 0; i < state.size(); ++i)
            for (int a = 0; a < d; ++a) next[i * d + a] = state[i] * local[a];
        state = next;
    }
    return state;
}

} // namespace

TEST_CASE("bell state bipartition") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 2);
    const SchmidtSpectrum s = schmidt_spectrum(bell_state(), spec, 1);
    REQUIRE(s.coefficients.size() == 2);
    CHECK(s.coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.coefficients[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

    const Eigen::VectorXd p = block_probabilities(bell_state(), spec, 1);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));

    const Rdm rdm = single_site_rdm(bell_state(), spec, 0);
    CHECK(rdm.entries(0, 0) == doctest::Approx(0.5));
    CHECK(rdm.entries(1, 1) == doctest::Approx(0.5));
    CHECK(rdm.entries(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("product states are rank one for every cut") {
    const ChainSpec spec = ChainSpec::with_defaults(2, 4);
    const Eigen::VectorXd state = random_product_state(spec, 42);
    for (int l = 1; l < spec.n_sites; ++l) {
        const SchmidtSpectrum s = schmidt_spectrum(state, spec, l);
        CHECK(s.coefficients[0] == doctest::Approx(1.0));
        CHECK(s.coefficients.tail(s.coefficients.size() - 1).cwiseAbs().maxCoeff() <= 1e-12);
    }
    for (int site = 0; site < spec.n_sites; ++site) {
        const Rdm rdm = single_site_rdm(state, spec, site);
        CHECK((rdm.entries * rdm.entries).trace() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("GHZ state has a two-term spectrum") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 3);
    Eigen::VectorXd ghz = Eigen::VectorXd::Zero(8);
    ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
    const SchmidtSpectrum s = schmidt_spectrum(ghz, spec, 1);
    CHECK(s.coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.coefficients[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("ground-state spectra match the dense partial trace") {
    for (Model model : {Model::nn, Model::nnn}) {
        const ChainSpec spec = ChainSpec::with_defaults(1, model == Model::nn ? 8 : 7, model);
        const GroundState gs = ground_state(spec, 1.0);
        for (int l = 1; l < spec.n_sites; ++l) {
            const Eigen::VectorXd p = block_probabilities(gs.vector, spec, l);
            std::vector<int> kept;
            for (int s = 0; s < l; ++s) kept.push_back(s);
            const Eigen::MatrixXd rho = partial_trace_dense(gs.vector, spec, kept);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
            const Eigen::VectorXd oracle = clip_probabilities(es.eigenvalues());
            const Eigen::Index m = std::min(p.size(), oracle.size());
            for (Eigen::Index i = 0; i < m; ++i) CHECK(std::abs(p[i] - oracle[i]) <= 1e-12);
            for (Eigen::Index i = m; i < p.size(); ++i) CHECK(p[i] <= 1e-12);
            for (Eigen::Index i = m; i < oracle.size(); ++i) CHECK(oracle[i] <= 1e-12);
        }
        for (int site = 0; site < spec.n_sites; ++site) {
            const Eigen::VectorXd p = rdm_probabilities(single_site_rdm(gs.vector, spec, site));
            const Eigen::MatrixXd rho = partial_trace_dense(gs.vector, spec, {site});
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
            const Eigen::VectorXd oracle = clip_probabilities(es.eigenvalues());
            for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - oracle[i]) <= 1e-12);
        }
    }
}

TEST_CASE("bipartition symmetry") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 6);
    const GroundState gs = ground_state(spec, 1.0);
    CHECK(std::abs(gs.vector.squaredNorm() - 1.0) <= 1e-12);
    for (int l = 1; l < spec.n_sites; ++l) {
        const Eigen::VectorXd a = block_probabilities(gs.vector, spec, l);
        const Eigen::VectorXd b = block_probabilities(gs.vector, spec, spec.n_sites - l);
        const Eigen::Index m = std::min(a.size(), b.size());
        for (Eigen::Index i = 0; i < m; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
    }
}

TEST_CASE("lambda = 0 ground state is pure everywhere") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 6);
    const GroundState gs = ground_state(spec, 0.0);
    for (int site = 0; site < spec.n_sites; ++site) {
        const Rdm rdm = single_site_rdm(gs.vector, spec, site);
        CHECK((rdm.entries * rdm.entries).trace() == doctest::Approx(1.0).epsilon(1e-10));
        const Eigen::VectorXd p = rdm_probabilities(rdm);
        CHECK(p[0] == doctest::Approx(1.0));
        CHECK(p.size() == 2);
        CHECK(p[1] == 0.0);
    }
    const Eigen::VectorXd p = block_probabilities(gs.vector, spec, 3);
    CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clipping policy") {
    Rdm half;
    half.entries = Eigen::MatrixXd::Zero(2, 2);
    half.entries(0, 0) = half.entries(1, 1) = 0.5;
    const Eigen::VectorXd p = rdm_probabilities(half);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));

    Rdm noisy;
    noisy.entries = Eigen::MatrixXd::Zero(2, 2);
    noisy.entries(0, 0) = 1.0;
    noisy.entries(1, 1) = -3e-12;
    const Eigen::VectorXd q = rdm_probabilities(noisy);
    CHECK(q[0] == 1.0);
    CHECK(q[1] == 0.0);

    Rdm bad;
    bad.entries = Eigen::MatrixXd::Zero(2, 2);
    bad.entries(0, 0) = 1.01;
    bad.entries(1, 1) = -1e-2;
    CHECK_THROWS_WITH_AS((void)rdm_probabilities(bad), doctest::Contains("non-physical-rdm"),
                         Error);
}

TEST_CASE("range errors") {
    const ChainSpec spec = ChainSpec::with_defaults(1, 4);
    const Eigen::VectorXd state = random_product_state(spec, 3);
    CHECK_THROWS_WITH_AS((void)schmidt_spectrum(state, spec, 0), doctest::Contains("invalid-block"),
                         Error);
    CHECK_THROWS_WITH_AS((void)schmidt_spectrum(state, spec, 4), doctest::Contains("invalid-block"),
                         Error);
    CHECK_THROWS_WITH_AS((void)single_site_rdm(state, spec, 4), doctest::Contains("invalid-site"),
                         Error);
    CHECK_THROWS_WITH_AS((void)single_site_rdm(state, spec, -1), doctest::Contains("invalid-site"),
                         Error);
}
