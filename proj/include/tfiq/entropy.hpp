#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "tfiq/lanczos.hpp"
#include "tfiq/spin_model.hpp"

namespace tfiq {

/// Below this distance from q = 1 the q->1 limit branch is taken.
inline constexpr double kQOneTolerance = 1e-8;

/// ln_q(x) = (x^(1-q) - 1)/(1 - q); plain ln at q -> 1.
double q_log(double x, double q);

/// S_q(p) = (1 - sum p_i^q)/(q - 1) with k = 1; von Neumann branch at q -> 1.
/// Conventions: 0^q := 0 and 0 ln 0 := 0.
double tsallis_entropy(const Eigen::VectorXd& probabilities, double q);

/// What the entropy is taken of: one site's RDM or a leftmost block of L sites.
struct EntanglementTarget {
    enum class Kind { single_site, block } kind = Kind::single_site;
    int index = -1; // site (negative = central site) or block size L

    static EntanglementTarget site(int i) { return {Kind::single_site, i}; }
    static EntanglementTarget block(int l) { return {Kind::block, l}; }
};

struct EntropyCurve {
    double q = 1.0;
    EntanglementTarget target;
    Eigen::VectorXd lambda_grid; // strictly ascending, uniform
    Eigen::VectorXd values;
    std::uint64_t spec_fingerprint = 0;
};

struct GammaCurve {
    Eigen::VectorXd lambda_grid;
    Eigen::VectorXd gamma;
};

struct SweepResult {
    std::vector<EntropyCurve> curves; // one per q, q_list order
    std::vector<char> degenerate;     // per grid point
};

/// Raw sweep outcome that survives a failing point (for partial artifacts).
struct SweepTable {
    Eigen::MatrixXd values; // n_points x n_q
    std::vector<char> degenerate;
    std::vector<char> solved;
    bool failed = false;
    std::string failure;
};

std::uint64_t spec_fingerprint(const ChainSpec& spec, const LanczosConfig& cfg);

SweepTable entropy_sweep_table(const ChainSpec& spec, const Eigen::VectorXd& lambda_grid,
                               const std::vector<double>& q_list, const EntanglementTarget& target,
                               const LanczosConfig& cfg = {}, int workers = 1);

/// Solves each grid point once (optionally in parallel) and evaluates S_q for
/// every q in q_list against the same ground state. Throws sweep-aborted with
/// the failing lambda on any solver failure.
SweepResult entropy_sweep(const ChainSpec& spec, const Eigen::VectorXd& lambda_grid,
                          const std::vector<double>& q_list, const EntanglementTarget& target,
                          const LanczosConfig& cfg = {}, int workers = 1);

/// Gamma = dS_q/dlambda: central differences inside, second-order one-sided
/// stencils at the ends.
GammaCurve gamma_from_curve(const EntropyCurve& curve);

struct Peak {
    double lambda_star = 0.0;
    double gamma_star = 0.0;
    bool boundary = false; // peak sits on the grid edge: grid too narrow
};

/// Argmax with three-point parabolic refinement; ties toward smaller lambda.
Peak locate_peak(const GammaCurve& curve);

/// Uniform ascending grid [lo, hi] with the given step.
Eigen::VectorXd make_grid(double lo, double hi, double step);

} // namespace tfiq
