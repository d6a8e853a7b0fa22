#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>

#include "tfiq/error.hpp"

namespace tfiq {

enum class Model { nn, nnn };
enum class Boundary { open, periodic };
enum class Convention { pauli, raw };

const char* to_string(Model m);
const char* to_string(Boundary b);
const char* to_string(Convention c);

/// Default J2/J1 ratio for the NNN chain.
inline constexpr double kDefaultNnnRatio = -0.32;

/// Largest Hilbert dimension solvable with the default settings (one state
/// vector is dim doubles; 2^25 keeps a vector at 256 MiB).
inline constexpr std::int64_t kDefaultMaxDimension = std::int64_t{1} << 25;

/// Dense oracles refuse above this dimension.
inline constexpr std::int64_t kOracleDimensionLimit = 4096;

/// Transverse-field Ising chain: spin magnitude 2S, N sites, coupling scheme,
/// boundary and operator convention. The transverse field B = 1 is the energy
/// unit; couplings are set per solve point via couplings_at(spec, lambda).
struct ChainSpec {
    int two_s = 1;
    int n_sites = 2;
    Model model = Model::nn;
    double ratio = kDefaultNnnRatio; // J2/J1, NNN only
    Boundary boundary = Boundary::open;
    Convention convention = Convention::pauli;

    /// Spec with the default boundary (NN open, NNN periodic) and convention
    /// (pauli for S=1/2, raw above).
    static ChainSpec with_defaults(int two_s, int n_sites, Model model = Model::nn,
                                   double ratio = kDefaultNnnRatio);
};

bool operator==(const ChainSpec& a, const ChainSpec& b);

/// Throws invalid_spin / invalid_input / dimension_overflow if the spec is
/// unusable; max_dimension is the memory budget in basis states.
void validate(const ChainSpec& spec, std::int64_t max_dimension = kDefaultMaxDimension);

/// (2S+1)^N, checked against int64 overflow.
std::int64_t hilbert_dimension(const ChainSpec& spec);

/// Single-site operators in the convention's scaling: sz diagonal, sx the
/// ladder matrix (Sx)_{m,m'} = 1/2 sqrt(S(S+1) - m m') for |m-m'| = 1.
struct SpinOperators {
    Eigen::MatrixXd sz;
    Eigen::MatrixXd sx;
};

SpinOperators spin_operators(int two_s, Convention convention);

/// Couplings of one solve point: H = -j1 sum Sz_i Sz_{i+1} - j2 sum Sz_i Sz_{i+2}
/// - field sum Sx_i. j2 is zero for the NN model.
struct Couplings {
    double j1 = 0.0;
    double j2 = 0.0;
    double field = 1.0;
};

/// The lambda parameterization: B = 1, J = lambda (NN) or J1 = lambda,
/// J2 = ratio * lambda (NNN).
Couplings couplings_at(const ChainSpec& spec, double lambda);

/// y = H v without materializing H. Deterministic for any thread count.
void apply_hamiltonian(const ChainSpec& spec, const Couplings& c, std::span<const double> v,
                       std::span<double> out);

Eigen::VectorXd apply_hamiltonian(const ChainSpec& spec, double lambda, const Eigen::VectorXd& v);

/// Dense oracle, assembled by Kronecker products (independent of the
/// matrix-free path). Refuses dimensions above kOracleDimensionLimit.
Eigen::MatrixXd dense_hamiltonian(const ChainSpec& spec, const Couplings& c);
Eigen::MatrixXd dense_hamiltonian(const ChainSpec& spec, double lambda);

} // namespace tfiq
