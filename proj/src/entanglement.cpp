#include "tfiq/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tfiq {

Eigen::VectorXd clip_probabilities(Eigen::VectorXd eigenvalues) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        double& p = eigenvalues[i];
        if (p <= kNegativeEigenvalueError)
            throw Error(ErrorCode::non_physical_rdm,
                        "eigenvalue " + std::to_string(p) + " below " +
                            std::to_string(kNegativeEigenvalueError));
        if (p < kSpectrumNoiseFloor) p = 0.0;
        sum += p;
    }
    if (sum <= 0.0) throw Error(ErrorCode::non_physical_rdm, "all eigenvalues clipped to zero");
    eigenvalues /= sum;
    std::sort(eigenvalues.data(), eigenvalues.data() + eigenvalues.size(), std::greater<double>());
    return eigenvalues;
}

namespace {

void check_state(const Eigen::VectorXd& state, const ChainSpec& spec) {
    const std::int64_t dim = hilbert_dimension(spec);
    if (state.size() != dim)
        throw Error(ErrorCode::shape_error, "state length " + std::to_string(state.size()) +
                                                " != hilbert dimension " + std::to_string(dim));
}

// Gram matrix of the smaller side of the L x (N-L) reshape. Site 0 is the most
// significant digit, so the reshape is a contiguous row-major view.
Eigen::MatrixXd block_gram(const Eigen::VectorXd& state, const ChainSpec& spec, int block_size) {
    check_state(state, spec);
    const int n = spec.n_sites;
    if (block_size < 1 || block_size > n - 1)
        throw Error(ErrorCode::invalid_block,
                    "block size " + std::to_string(block_size) + " outside [1, N-1]");
    std::int64_t rows = 1, cols = 1;
    const std::int64_t d = spec.two_s + 1;
    for (int i = 0; i < block_size; ++i) rows *= d;
    for (int i = block_size; i < n; ++i) cols *= d;

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> m(state.data(), rows, cols);
    if (rows <= cols) return m * m.transpose();
    return m.transpose() * m;
}

Eigen::VectorXd gram_probabilities(const Eigen::VectorXd& state, const ChainSpec& spec,
                                   int block_size) {
    const Eigen::MatrixXd gram = block_gram(state, spec, block_size);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    return clip_probabilities(es.eigenvalues());
}

} // namespace

SchmidtSpectrum schmidt_spectrum(const Eigen::VectorXd& state, const ChainSpec& spec,
                                 int block_size) {
    SchmidtSpectrum out;
    out.block_size = block_size;
    out.chain_size = spec.n_sites;
    const Eigen::VectorXd p = gram_probabilities(state, spec, block_size);
    out.coefficients = p.array().sqrt();
    return out;
}

Eigen::VectorXd block_probabilities(const Eigen::VectorXd& state, const ChainSpec& spec,
                                    int block_size) {
    return gram_probabilities(state, spec, block_size);
}

int default_site(const ChainSpec& spec) { return spec.n_sites / 2; }

Rdm single_site_rdm(const Eigen::VectorXd& state, const ChainSpec& spec, int site) {
    check_state(state, spec);
    if (site < 0 || site >= spec.n_sites)
        throw Error(ErrorCode::invalid_site, "site " + std::to_string(site) + " outside [0, N)");
    const int d = spec.two_s + 1;
    std::int64_t stride = 1;
    for (int s = spec.n_sites - 1; s > site; --s) stride *= d;
    const std::int64_t dim = state.size();
    const std::int64_t outer = dim / (stride * d);

    Rdm rdm;
    rdm.entries = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) {
            double acc = 0.0;
            for (std::int64_t hi = 0; hi < outer; ++hi) {
                const double* pa = state.data() + hi * d * stride + a * stride;
                const double* pb = state.data() + hi * d * stride + b * stride;
                for (std::int64_t lo = 0; lo < stride; ++lo) acc += pa[lo] * pb[lo];
            }
            rdm.entries(a, b) = acc;
            rdm.entries(b, a) = acc;
        }
    }
    return rdm;
}

Eigen::VectorXd rdm_probabilities(const Rdm& rdm) {
    if (rdm.entries.rows() != rdm.entries.cols() || rdm.entries.rows() < 1)
        throw Error(ErrorCode::invalid_input, "rdm must be square and non-empty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rdm.entries, Eigen::EigenvaluesOnly);
    return clip_probabilities(es.eigenvalues());
}

Eigen::MatrixXd partial_trace_dense(const Eigen::VectorXd& state, const ChainSpec& spec,
                                    const std::vector<int>& kept_sites) {
    check_state(state, spec);
    const std::int64_t dim = state.size();
    if (dim > kOracleDimensionLimit)
        throw Error(ErrorCode::oracle_limit_exceeded,
                    "dense partial trace limited to dimension " +
                        std::to_string(kOracleDimensionLimit));
    const int n = spec.n_sites;
    const int d = spec.two_s + 1;
    for (int s : kept_sites)
        if (s < 0 || s >= n) throw Error(ErrorCode::invalid_site, "kept site out of range");

    std::int64_t kept_dim = 1;
    for (std::size_t i = 0; i < kept_sites.size(); ++i) kept_dim *= d;

    // index of each basis state inside the kept subsystem / its complement
    std::vector<std::int64_t> kept_of(static_cast<std::size_t>(dim));
    std::vector<std::int64_t> rest_of(static_cast<std::size_t>(dim));
    std::vector<int> dig(static_cast<std::size_t>(n));
    for (std::int64_t idx = 0; idx < dim; ++idx) {
        std::int64_t rem = idx;
        for (int s = n - 1; s >= 0; --s) {
            dig[static_cast<std::size_t>(s)] = static_cast<int>(rem % d);
            rem /= d;
        }
        std::int64_t kept = 0, rest = 0;
        for (int s = 0; s < n; ++s) {
            const bool is_kept =
                std::find(kept_sites.begin(), kept_sites.end(), s) != kept_sites.end();
            if (is_kept)
                kept = kept * d + dig[static_cast<std::size_t>(s)];
            else
                rest = rest * d + dig[static_cast<std::size_t>(s)];
        }
        kept_of[static_cast<std::size_t>(idx)] = kept;
        rest_of[static_cast<std::size_t>(idx)] = rest;
    }

    const Eigen::MatrixXd projector = state * state.transpose();
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(kept_dim, kept_dim);
    for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j < dim; ++j)
            if (rest_of[static_cast<std::size_t>(i)] == rest_of[static_cast<std::size_t>(j)])
                rho(kept_of[static_cast<std::size_t>(i)], kept_of[static_cast<std::size_t>(j)]) +=
                    projector(i, j);
    return rho;
}

} // namespace tfiq
