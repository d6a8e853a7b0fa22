#pragma once

#include <Eigen/Dense>
#include <vector>

#include "tfiq/spin_model.hpp"

namespace tfiq {

/// Eigenvalues below this are numerically indistinguishable from zero on the
/// Gram route and are clipped (they would otherwise dominate small-q entropies).
inline constexpr double kSpectrumNoiseFloor = 1e-13;

/// Negative eigenvalues at or below this signal a genuine bug.
inline constexpr double kNegativeEigenvalueError = -1e-8;

struct SchmidtSpectrum {
    Eigen::VectorXd coefficients; // descending, sum of squares = 1
    int block_size = 0;
    int chain_size = 0;
};

/// Real symmetric reduced density matrix, trace 1.
struct Rdm {
    Eigen::MatrixXd entries;
};

/// Clipping policy shared by every spectrum producer: error below
/// kNegativeEigenvalueError, zero out the rest of the negatives and anything
/// under the noise floor, sort descending, renormalize.
Eigen::VectorXd clip_probabilities(Eigen::VectorXd eigenvalues);

/// Singular values of the (2S+1)^L x (2S+1)^(N-L) reshape of the amplitudes
/// (block = leftmost L sites), via the Gram matrix of the smaller side.
SchmidtSpectrum schmidt_spectrum(const Eigen::VectorXd& state, const ChainSpec& spec, int block_size);

/// p_i = sigma_i^2, clipped and renormalized, descending.
Eigen::VectorXd block_probabilities(const Eigen::VectorXd& state, const ChainSpec& spec,
                                    int block_size);

Rdm single_site_rdm(const Eigen::VectorXd& state, const ChainSpec& spec, int site);

/// Eigenvalues of an Rdm, clipped per policy, descending.
Eigen::VectorXd rdm_probabilities(const Rdm& rdm);

/// Default single-site target: the central site floor(N/2).
int default_site(const ChainSpec& spec);

/// Brute-force oracle: partial trace of the full projector |psi><psi| over the
/// complement of `kept_sites` (independent of the reshape/Gram route).
/// Dimension <= kOracleDimensionLimit.
Eigen::MatrixXd partial_trace_dense(const Eigen::VectorXd& state, const ChainSpec& spec,
                                    const std::vector<int>& kept_sites);

} // namespace tfiq
