#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>

#include "tfiq/spin_model.hpp"

namespace tfiq {

struct LanczosConfig {
    int max_krylov = 300;
    double tol = 1e-12; // residual threshold on ||Hv - Ev||
    enum class Reorthogonalization { full, selective } reorthogonalization =
        Reorthogonalization::full;
    /// Above this basis-storage budget the solver switches to selective
    /// reorthogonalization with the basis streamed to a temp file.
    std::size_t memory_budget_bytes = std::size_t{3} << 30;
    /// Run the deflated second-pass gap probe after convergence.
    bool gap_probe = true;
};

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXd vector;
    double residual = 0.0;
    int iterations = 0;
    double gap_estimate = 0.0;
    bool degenerate = false;
};

/// Any real symmetric operator given by its action.
struct SymmetricOperator {
    std::int64_t dim = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
};

/// Lowest eigenpair by Lanczos with deterministic all-ones start.
GroundState lanczos_ground_state(const SymmetricOperator& op, const LanczosConfig& cfg = {});

GroundState ground_state(const ChainSpec& spec, double lambda, const LanczosConfig& cfg = {});
GroundState ground_state(const ChainSpec& spec, const Couplings& c, const LanczosConfig& cfg = {});

/// Dense oracle: full symmetric diagonalization, dimension <= 4096.
GroundState ground_state_dense(const ChainSpec& spec, double lambda);
GroundState ground_state_dense(const ChainSpec& spec, const Couplings& c);

} // namespace tfiq
