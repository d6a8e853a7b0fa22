#include "tfiq/spin_model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tfiq {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_spin: return "invalid-spin";
        case ErrorCode::dimension_overflow: return "dimension-overflow";
        case ErrorCode::shape_error: return "shape-error";
        case ErrorCode::oracle_limit_exceeded: return "oracle-limit-exceeded";
        case ErrorCode::no_convergence: return "no-convergence";
        case ErrorCode::invalid_block: return "invalid-block";
        case ErrorCode::invalid_site: return "invalid-site";
        case ErrorCode::non_physical_rdm: return "non-physical-rdm";
        case ErrorCode::domain_error: return "domain-error";
        case ErrorCode::unsupported_q: return "unsupported-q";
        case ErrorCode::insufficient_grid: return "insufficient-grid";
        case ErrorCode::sweep_aborted: return "sweep-aborted";
        case ErrorCode::underdetermined: return "underdetermined";
        case ErrorCode::invalid_gamma: return "invalid-gamma";
        case ErrorCode::invalid_input: return "invalid-input";
        case ErrorCode::range_too_short: return "range-too-short";
        case ErrorCode::config_error: return "config-error";
        case ErrorCode::plot_error: return "plot-error";
        case ErrorCode::io_error: return "io-error";
    }
    return "unknown-error";
}

const char* to_string(Model m) { return m == Model::nn ? "nn" : "nnn"; }
const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }
const char* to_string(Convention c) { return c == Convention::pauli ? "pauli" : "raw"; }

ChainSpec ChainSpec::with_defaults(int two_s, int n_sites, Model model, double ratio) {
    ChainSpec spec;
    spec.two_s = two_s;
    spec.n_sites = n_sites;
    spec.model = model;
    spec.ratio = ratio;
    spec.boundary = (model == Model::nn) ? Boundary::open : Boundary::periodic;
    spec.convention = (two_s == 1) ? Convention::pauli : Convention::raw;
    return spec;
}

bool operator==(const ChainSpec& a, const ChainSpec& b) {
    return a.two_s == b.two_s && a.n_sites == b.n_sites && a.model == b.model &&
           a.ratio == b.ratio && a.boundary == b.boundary && a.convention == b.convention;
}

void validate(const ChainSpec& spec, std::int64_t max_dimension) {
    if (spec.two_s < 1) throw Error(ErrorCode::invalid_spin, "two_s must be >= 1");
    if (spec.n_sites < 2) throw Error(ErrorCode::invalid_input, "n_sites must be >= 2");
    if (spec.model == Model::nnn && spec.n_sites < 3)
        throw Error(ErrorCode::invalid_input, "NNN coupling requires n_sites >= 3");
    std::int64_t dim = hilbert_dimension(spec);
    if (dim > max_dimension)
        throw Error(ErrorCode::dimension_overflow,
                    "hilbert dimension " + std::to_string(dim) + " exceeds budget " +
                        std::to_string(max_dimension));
}

std::int64_t hilbert_dimension(const ChainSpec& spec) {
    if (spec.two_s < 1) throw Error(ErrorCode::invalid_spin, "two_s must be >= 1");
    const std::int64_t base = spec.two_s + 1;
    std::int64_t dim = 1;
    for (int i = 0; i < spec.n_sites; ++i) {
        if (dim > std::numeric_limits<std::int64_t>::max() / base)
            throw Error(ErrorCode::dimension_overflow, "(2S+1)^N overflows int64");
        dim *= base;
    }
    return dim;
}

SpinOperators spin_operators(int two_s, Convention convention) {
    if (two_s < 1) throw Error(ErrorCode::invalid_spin, "two_s must be >= 1");
    const int d = two_s + 1;
    const double s = 0.5 * two_s;
    const double scale = (convention == Convention::pauli) ? 2.0 : 1.0;
    SpinOperators ops;
    ops.sz = Eigen::MatrixXd::Zero(d, d);
    ops.sx = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        const double m = s - a; // digit a encodes m = S - a
        ops.sz(a, a) = scale * m;
        if (a + 1 < d) {
            const double amp = 0.5 * std::sqrt(s * (s + 1.0) - m * (m - 1.0));
            ops.sx(a, a + 1) = scale * amp;
            ops.sx(a + 1, a) = scale * amp;
        }
    }
    return ops;
}

Couplings couplings_at(const ChainSpec& spec, double lambda) {
    Couplings c;
    c.field = 1.0;
    c.j1 = lambda;
    c.j2 = (spec.model == Model::nnn) ? spec.ratio * lambda : 0.0;
    return c;
}

namespace {

// Bond (a, b, range) lists per the model's sums: NN bonds i..i+1, NNN adds
// i..i+2; open chains drop the wrap-around bonds.
struct BondTable {
    std::vector<std::array<int, 2>> nn;
    std::vector<std::array<int, 2>> nnn;
};

BondTable bond_table(const ChainSpec& spec) {
    BondTable t;
    const int n = spec.n_sites;
    const bool wrap = spec.boundary == Boundary::periodic;
    for (int i = 0; i < (wrap ? n : n - 1); ++i) t.nn.push_back({i, (i + 1) % n});
    if (spec.model == Model::nnn)
        for (int i = 0; i < (wrap ? n : n - 2); ++i) t.nnn.push_back({i, (i + 2) % n});
    return t;
}

// Integer sz in units of the convention step: tz = 2m, so sz = tz * zfac with
// zfac = 1 (pauli) or 1/2 (raw). Bond sums are kept as exact integers.
struct MatvecTables {
    int d = 0;
    int n = 0;
    double zfac2 = 1.0; // (zfac)^2, multiplies integer bond sums
    std::vector<std::int64_t> strides;
    std::vector<int> tz;           // tz[digit] = two_s - 2*digit
    std::vector<double> ladder;    // convention-scaled <d|Sx|d+1>
    BondTable bonds;
    std::vector<std::vector<std::pair<int, int>>> nn_of;  // site -> (other, which) for nn
    std::vector<std::vector<std::pair<int, int>>> nnn_of; // site -> (other, which) for nnn
};

MatvecTables make_tables(const ChainSpec& spec) {
    MatvecTables t;
    t.d = spec.two_s + 1;
    t.n = spec.n_sites;
    const double zfac = (spec.convention == Convention::pauli) ? 1.0 : 0.5;
    t.zfac2 = zfac * zfac;
    t.strides.resize(t.n);
    std::int64_t stride = 1;
    for (int site = t.n - 1; site >= 0; --site) {
        t.strides[site] = stride;
        stride *= t.d;
    }
    t.tz.resize(t.d);
    for (int a = 0; a < t.d; ++a) t.tz[a] = spec.two_s - 2 * a;
    const SpinOperators ops = spin_operators(spec.two_s, spec.convention);
    t.ladder.resize(t.d - 1);
    for (int a = 0; a + 1 < t.d; ++a) t.ladder[a] = ops.sx(a, a + 1);
    t.bonds = bond_table(spec);
    t.nn_of.resize(t.n);
    t.nnn_of.resize(t.n);
    for (const auto& b : t.bonds.nn) {
        t.nn_of[b[0]].push_back({b[1], 0});
        t.nn_of[b[1]].push_back({b[0], 0});
    }
    for (const auto& b : t.bonds.nnn) {
        t.nnn_of[b[0]].push_back({b[1], 0});
        t.nnn_of[b[1]].push_back({b[0], 0});
    }
    return t;
}

inline void decode_digits(std::int64_t index, int d, int n, int* dig) {
    for (int site = n - 1; site >= 0; --site) {
        dig[site] = static_cast<int>(index % d);
        index /= d;
    }
}

// Exact integer bond sums sum tz_a tz_b for the current digit string.
inline void bond_sums(const MatvecTables& t, const int* dig, std::int64_t& p1, std::int64_t& p2) {
    p1 = 0;
    for (const auto& b : t.bonds.nn)
        p1 += std::int64_t{t.tz[dig[b[0]]]} * t.tz[dig[b[1]]];
    p2 = 0;
    for (const auto& b : t.bonds.nnn)
        p2 += std::int64_t{t.tz[dig[b[0]]]} * t.tz[dig[b[1]]];
}

} // namespace

void apply_hamiltonian(const ChainSpec& spec, const Couplings& c, std::span<const double> v,
                       std::span<double> out) {
    validate(spec);
    const std::int64_t dim = hilbert_dimension(spec);
    if (static_cast<std::int64_t>(v.size()) != dim || static_cast<std::int64_t>(out.size()) != dim)
        throw Error(ErrorCode::shape_error, "vector length " + std::to_string(v.size()) +
                                                " != hilbert dimension " + std::to_string(dim));
    if (!std::isfinite(c.j1) || !std::isfinite(c.j2) || !std::isfinite(c.field))
        throw Error(ErrorCode::invalid_input, "couplings must be finite");

    const MatvecTables t = make_tables(spec);
    const int d = t.d;
    const int n = t.n;
    const double* x = v.data();
    double* y = out.data();

    // Fixed-size chunks keep the digit walk incremental and make the output
    // independent of the thread count (each chunk is computed serially).
    const std::int64_t chunk = 4096;
    const std::int64_t n_chunks = (dim + chunk - 1) / chunk;

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ci = 0; ci < n_chunks; ++ci) {
        const std::int64_t begin = ci * chunk;
        const std::int64_t end = std::min(begin + chunk, dim);
        int dig[64];
        decode_digits(begin, d, n, dig);
        std::int64_t p1 = 0, p2 = 0;
        bond_sums(t, dig, p1, p2);
        for (std::int64_t i = begin; i < end; ++i) {
            double acc = -(c.j1 * static_cast<double>(p1) + c.j2 * static_cast<double>(p2)) *
                         t.zfac2 * x[i];
            if (c.field != 0.0) {
                for (int site = 0; site < n; ++site) {
                    const int dd = dig[site];
                    const std::int64_t stride = t.strides[site];
                    if (dd > 0) acc -= c.field * t.ladder[dd - 1] * x[i - stride];
                    if (dd < d - 1) acc -= c.field * t.ladder[dd] * x[i + stride];
                }
            }
            y[i] = acc;
            // Increment the digit string (site n-1 is the least significant),
            // updating the integer bond sums exactly as digits change.
            for (int site = n - 1; site >= 0; --site) {
                const int old = dig[site];
                const int next = (old + 1 < d) ? old + 1 : 0;
                dig[site] = next;
                const std::int64_t dz = t.tz[next] - t.tz[old];
                for (const auto& [other, which] : t.nn_of[site]) {
                    (void)which;
                    p1 += dz * t.tz[dig[other]];
                }
                for (const auto& [other, which] : t.nnn_of[site]) {
                    (void)which;
                    p2 += dz * t.tz[dig[other]];
                }
                if (next != 0) break; // no carry
            }
        }
    }
}

Eigen::VectorXd apply_hamiltonian(const ChainSpec& spec, double lambda, const Eigen::VectorXd& v) {
    if (!std::isfinite(lambda)) throw Error(ErrorCode::invalid_input, "lambda must be finite");
    Eigen::VectorXd out(v.size());
    apply_hamiltonian(spec, couplings_at(spec, lambda),
                      std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
                      std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
    return out;
}

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// I x ... x op_a x ... x op_b x ... x I with op_a at site a, op_b at site b.
Eigen::MatrixXd two_site_term(int n, int d, int a, int b, const Eigen::MatrixXd& op_a,
                              const Eigen::MatrixXd& op_b) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
    for (int site = 0; site < n; ++site) {
        if (site == a)
            acc = kron(acc, op_a);
        else if (site == b)
            acc = kron(acc, op_b);
        else
            acc = kron(acc, Eigen::MatrixXd::Identity(d, d));
    }
    return acc;
}

Eigen::MatrixXd one_site_term(int n, int d, int a, const Eigen::MatrixXd& op) {
    return two_site_term(n, d, a, -1, op, op);
}

} // namespace

Eigen::MatrixXd dense_hamiltonian(const ChainSpec& spec, const Couplings& c) {
    validate(spec);
    const std::int64_t dim = hilbert_dimension(spec);
    if (dim > kOracleDimensionLimit)
        throw Error(ErrorCode::oracle_limit_exceeded,
                    "dense oracle limited to dimension " + std::to_string(kOracleDimensionLimit));
    const int n = spec.n_sites;
    const int d = spec.two_s + 1;
    const SpinOperators ops = spin_operators(spec.two_s, spec.convention);
    const BondTable bonds = bond_table(spec);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& b : bonds.nn) h -= c.j1 * two_site_term(n, d, b[0], b[1], ops.sz, ops.sz);
    for (const auto& b : bonds.nnn) h -= c.j2 * two_site_term(n, d, b[0], b[1], ops.sz, ops.sz);
    for (int site = 0; site < n; ++site) h -= c.field * one_site_term(n, d, site, ops.sx);
    return h;
}

Eigen::MatrixXd dense_hamiltonian(const ChainSpec& spec, double lambda) {
    if (!std::isfinite(lambda)) throw Error(ErrorCode::invalid_input, "lambda must be finite");
    return dense_hamiltonian(spec, couplings_at(spec, lambda));
}

} // namespace tfiq
