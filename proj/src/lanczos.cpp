#include "tfiq/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <unistd.h>
#include <vector>

namespace tfiq {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Krylov basis storage. RAM when the projected footprint fits the budget,
// otherwise a sequentially-read temp file.
class BasisStore {
  public:
    virtual ~BasisStore() = default;
    virtual void push(const Eigen::VectorXd& v) = 0;
    virtual int size() const = 0;
    // f(j, vector) for j = 0..size-1 in order.
    virtual void for_each(const std::function<void(int, const double*)>& f) = 0;
};

class RamBasisStore final : public BasisStore {
  public:
    void push(const Eigen::VectorXd& v) override { vecs_.push_back(v); }
    int size() const override { return static_cast<int>(vecs_.size()); }
    void for_each(const std::function<void(int, const double*)>& f) override {
        for (int j = 0; j < size(); ++j) f(j, vecs_[j].data());
    }
    const Eigen::VectorXd& at(int j) const { return vecs_[j]; }

  private:
    std::vector<Eigen::VectorXd> vecs_;
};

class DiskBasisStore final : public BasisStore {
  public:
    explicit DiskBasisStore(std::int64_t dim)
        : dim_(dim),
          path_(std::filesystem::temp_directory_path() /
                ("tfiq-lanczos-" + std::to_string(::getpid()) + "-" +
                 std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".bin")) {
        file_.open(path_, std::ios::binary | std::ios::in | std::ios::out | std::ios::trunc);
        if (!file_) throw Error(ErrorCode::io_error, "cannot open basis spill file " + path_.string());
        scratch_.resize(dim_);
    }
    ~DiskBasisStore() override {
        file_.close();
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    void push(const Eigen::VectorXd& v) override {
        file_.seekp(0, std::ios::end);
        file_.write(reinterpret_cast<const char*>(v.data()),
                    static_cast<std::streamsize>(dim_ * sizeof(double)));
        if (!file_) throw Error(ErrorCode::io_error, "basis spill write failed");
        ++count_;
    }
    int size() const override { return count_; }
    void for_each(const std::function<void(int, const double*)>& f) override {
        file_.flush();
        file_.seekg(0, std::ios::beg);
        for (int j = 0; j < count_; ++j) {
            file_.read(reinterpret_cast<char*>(scratch_.data()),
                       static_cast<std::streamsize>(dim_ * sizeof(double)));
            if (!file_) throw Error(ErrorCode::io_error, "basis spill read failed");
            f(j, scratch_.data());
        }
    }

  private:
    std::int64_t dim_;
    std::filesystem::path path_;
    std::fstream file_;
    std::vector<double> scratch_;
    int count_ = 0;
};

double dot(std::int64_t dim, const double* a, const double* b) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < dim; ++i) acc += a[i] * b[i];
    return acc;
}

// w -= sum_j coeff[j] basis_j, blocked over the index range so the update is
// deterministic for any thread count.
void subtract_projections(BasisStore& basis, const std::vector<double>& coeff, Eigen::VectorXd& w) {
    const std::int64_t dim = w.size();
    auto* ram = dynamic_cast<RamBasisStore*>(&basis);
    if (ram != nullptr) {
        const std::int64_t chunk = 8192;
        const std::int64_t n_chunks = (dim + chunk - 1) / chunk;
        const int k = ram->size();
#pragma omp parallel for schedule(static)
        for (std::int64_t ci = 0; ci < n_chunks; ++ci) {
            const std::int64_t begin = ci * chunk;
            const std::int64_t end = std::min(begin + chunk, dim);
            for (int j = 0; j < k; ++j) {
                const double c = coeff[static_cast<std::size_t>(j)];
                if (c == 0.0) continue;
                const double* vj = ram->at(j).data();
                for (std::int64_t i = begin; i < end; ++i) w[i] -= c * vj[i];
            }
        }
    } else {
        basis.for_each([&](int j, const double* vj) {
            const double c = coeff[static_cast<std::size_t>(j)];
            if (c == 0.0) return;
            for (std::int64_t i = 0; i < dim; ++i) w[i] -= c * vj[i];
        });
    }
}

std::vector<double> all_dots(BasisStore& basis, const Eigen::VectorXd& w) {
    std::vector<double> dots(static_cast<std::size_t>(basis.size()), 0.0);
    auto* ram = dynamic_cast<RamBasisStore*>(&basis);
    if (ram != nullptr) {
        const int k = ram->size();
#pragma omp parallel for schedule(static)
        for (int j = 0; j < k; ++j)
            dots[static_cast<std::size_t>(j)] = dot(w.size(), ram->at(j).data(), w.data());
    } else {
        basis.for_each([&](int j, const double* vj) {
            dots[static_cast<std::size_t>(j)] = dot(w.size(), vj, w.data());
        });
    }
    return dots;
}

// Two-pass classical Gram-Schmidt against everything stored.
void reorthogonalize(BasisStore& basis, Eigen::VectorXd& w) {
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> dots = all_dots(basis, w);
        subtract_projections(basis, dots, w);
    }
}

struct TridiagonalEig {
    double theta0 = 0.0;
    double theta1 = 0.0;
    Eigen::VectorXd y0; // ground Ritz vector in the Krylov basis
};

TridiagonalEig solve_tridiagonal(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int k = static_cast<int>(alpha.size());
    Eigen::VectorXd diag(k), sub(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < k; ++i) sub[i] = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    TridiagonalEig out;
    out.theta0 = es.eigenvalues()(0);
    out.theta1 = (k > 1) ? es.eigenvalues()(1) : es.eigenvalues()(0);
    out.y0 = es.eigenvectors().col(0);
    return out;
}

struct LanczosRun {
    double energy = 0.0;
    Eigen::VectorXd vector;
    double residual_estimate = 0.0;
    int iterations = 0;
    double tri_gap = 0.0;
    bool converged = false;
};

// Core recurrence. `project_out`, when non-null, keeps the whole Krylov space
// orthogonal to that vector (used by the deflated gap probe).
LanczosRun lanczos_run(const SymmetricOperator& op, const LanczosConfig& cfg,
                       const Eigen::VectorXd& start, const Eigen::VectorXd* project_out) {
    const std::int64_t dim = op.dim;
    const int max_k = std::max<int>(2, static_cast<int>(std::min<std::int64_t>(cfg.max_krylov, dim)));

    const std::size_t projected_bytes =
        static_cast<std::size_t>(max_k) * static_cast<std::size_t>(dim) * sizeof(double);
    const bool stream = cfg.reorthogonalization == LanczosConfig::Reorthogonalization::selective ||
                        projected_bytes > cfg.memory_budget_bytes;
    std::unique_ptr<BasisStore> basis;
    if (stream)
        basis = std::make_unique<DiskBasisStore>(dim);
    else
        basis = std::make_unique<RamBasisStore>();

    Eigen::VectorXd v = start;
    if (project_out != nullptr) {
        v -= (project_out->dot(v)) * (*project_out);
        v -= (project_out->dot(v)) * (*project_out);
    }
    const double nrm = v.norm();
    if (nrm < 1e-14) throw Error(ErrorCode::invalid_input, "lanczos start vector vanishes");
    v /= nrm;

    Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd w(dim);
    std::vector<double> alpha, beta;
    alpha.reserve(static_cast<std::size_t>(max_k));
    beta.reserve(static_cast<std::size_t>(max_k));

    // Simon's omega recurrence tracks orthogonality loss in streamed mode;
    // omega_cur[j] estimates <v_k, v_{j+1}> with the self entry fixed at 1.
    std::vector<double> omega_prev;
    std::vector<double> omega_cur{1.0};
    bool reorth_next = false;
    double beta_prev = 0.0;
    double norm_estimate = 0.0;

    TridiagonalEig tri;
    double resid_est = std::numeric_limits<double>::infinity();
    int k = 0;
    bool breakdown = false;

    while (k < max_k) {
        basis->push(v);
        op.apply(std::span<const double>(v.data(), static_cast<std::size_t>(dim)),
                 std::span<double>(w.data(), static_cast<std::size_t>(dim)));
        if (k > 0) w -= beta_prev * v_prev;
        const double a = dot(dim, v.data(), w.data());
        alpha.push_back(a);
        w -= a * v;
        if (project_out != nullptr) w -= (project_out->dot(w)) * (*project_out);

        norm_estimate = std::max(norm_estimate, std::abs(a) + 2.0 * beta_prev);

        if (!stream) {
            reorthogonalize(*basis, w);
        } else {
            double worst = 0.0;
            for (std::size_t j = 0; j + 1 < omega_cur.size(); ++j)
                worst = std::max(worst, std::abs(omega_cur[j]));
            const bool tripped = worst > std::sqrt(kEps) || reorth_next || (k + 1) % 8 == 0;
            if (tripped) {
                reorthogonalize(*basis, w);
                // reorthogonalize on two successive steps, then reset estimates
                reorth_next = !reorth_next && worst > std::sqrt(kEps);
                std::fill(omega_cur.begin(), omega_cur.end(), kEps);
                omega_cur.back() = 1.0;
                std::fill(omega_prev.begin(), omega_prev.end(), kEps);
                if (!omega_prev.empty()) omega_prev.back() = 1.0;
            }
        }

        double b = w.norm();
        ++k;

        tri = solve_tridiagonal(alpha, beta);
        resid_est = b * std::abs(tri.y0(k - 1));
        const double breakdown_tol = 10.0 * kEps * std::max(1.0, norm_estimate);
        if (resid_est <= cfg.tol || k >= max_k || b <= breakdown_tol) {
            breakdown = b <= breakdown_tol;
            if (breakdown) resid_est = std::min(resid_est, b);
            break;
        }

        beta.push_back(b); // beta[j] couples v_{j+1} and v_{j+2}

        if (stream) {
            // omega for the upcoming v_{k+1} (1-based), entries jj = 1..k+1
            std::vector<double> next(static_cast<std::size_t>(k) + 1, kEps);
            const double a_k = alpha.back();
            for (int j = 0; j + 1 < k; ++j) { // 1-based jj = j+1 <= k-1
                const double om = omega_cur[static_cast<std::size_t>(j)];
                const double om_up = omega_cur[static_cast<std::size_t>(j) + 1];
                const double om_dn = (j > 0) ? omega_cur[static_cast<std::size_t>(j) - 1] : 0.0;
                const double beta_jj = beta[static_cast<std::size_t>(j)];
                const double beta_jjm = (j > 0) ? beta[static_cast<std::size_t>(j) - 1] : 0.0;
                const double om_old =
                    (static_cast<std::size_t>(j) < omega_prev.size()) ? omega_prev[static_cast<std::size_t>(j)] : 0.0;
                const double val = (alpha[static_cast<std::size_t>(j)] - a_k) * om + beta_jj * om_up +
                                   beta_jjm * om_dn - beta_prev * om_old;
                next[static_cast<std::size_t>(j)] =
                    val / b + kEps * norm_estimate / std::max(b, kEps);
            }
            next[static_cast<std::size_t>(k) - 1] = kEps; // local orthogonality
            next.back() = 1.0;                            // self
            omega_prev = std::move(omega_cur);
            omega_cur = std::move(next);
        }

        v_prev = v;
        v = w / b;
        beta_prev = b;
    }

    // Assemble the ground Ritz vector from the stored basis.
    Eigen::VectorXd ground = Eigen::VectorXd::Zero(dim);
    basis->for_each([&](int j, const double* vj) {
        if (j >= tri.y0.size()) return;
        const double c = tri.y0(j);
        for (std::int64_t i = 0; i < dim; ++i) ground[i] += c * vj[i];
    });
    ground /= ground.norm();

    LanczosRun out;
    out.energy = tri.theta0;
    out.vector = std::move(ground);
    out.residual_estimate = resid_est;
    out.iterations = k;
    out.tri_gap = tri.theta1 - tri.theta0;
    out.converged = resid_est <= cfg.tol || breakdown;
    return out;
}

// Deterministic probe of E1: Lanczos on the complement of the ground vector,
// started from the dominant-amplitude basis state. Cheap tolerance — only the
// degeneracy scale matters.
double deflated_gap_probe(const SymmetricOperator& op, const LanczosConfig& cfg,
                          const GroundState& gs) {
    const std::int64_t dim = op.dim;
    std::int64_t hot = 0;
    double best = -1.0;
    for (std::int64_t i = 0; i < dim; ++i) {
        const double a = std::abs(gs.vector[i]);
        if (a > best) {
            best = a;
            hot = i;
        }
    }
    Eigen::VectorXd start = Eigen::VectorXd::Zero(dim);
    start[hot] = 1.0;
    start -= (gs.vector.dot(start)) * gs.vector;
    if (start.norm() < 1e-8) {
        // ground state concentrated on a single basis state; probe its neighbor
        start.setZero();
        start[(hot + 1) % dim] = 1.0;
        start -= (gs.vector.dot(start)) * gs.vector;
    }

    LanczosConfig probe_cfg = cfg;
    probe_cfg.max_krylov = std::min<int>(60, static_cast<int>(std::min<std::int64_t>(dim, 60)));
    probe_cfg.tol = std::max(1e-10, 1e-10 * std::abs(gs.energy));
    probe_cfg.gap_probe = false;
    LanczosRun probe = lanczos_run(op, probe_cfg, start, &gs.vector);
    return probe.energy - gs.energy;
}

} // namespace

GroundState lanczos_ground_state(const SymmetricOperator& op, const LanczosConfig& cfg) {
    if (op.dim < 1) throw Error(ErrorCode::invalid_input, "operator dimension must be >= 1");
    if (cfg.max_krylov < 2) throw Error(ErrorCode::invalid_input, "max_krylov must be >= 2");
    if (!(cfg.tol > 0.0)) throw Error(ErrorCode::invalid_input, "tol must be > 0");

    const Eigen::VectorXd start = Eigen::VectorXd::Ones(op.dim);
    LanczosRun run = lanczos_run(op, cfg, start, nullptr);

    // True residual from one extra application.
    Eigen::VectorXd hv(op.dim);
    op.apply(std::span<const double>(run.vector.data(), static_cast<std::size_t>(op.dim)),
             std::span<double>(hv.data(), static_cast<std::size_t>(op.dim)));
    const double energy = run.vector.dot(hv);
    const double residual = (hv - energy * run.vector).norm();

    if (!run.converged && residual > cfg.tol)
        throw Error(ErrorCode::no_convergence,
                    "no convergence within " + std::to_string(cfg.max_krylov) +
                        " Krylov steps; best residual " + std::to_string(residual));

    GroundState gs;
    gs.energy = energy;
    gs.vector = std::move(run.vector);
    gs.residual = residual;
    gs.iterations = run.iterations;
    gs.gap_estimate = run.tri_gap;

    if (cfg.gap_probe && op.dim > 1) {
        const double probe_gap = deflated_gap_probe(op, cfg, gs);
        gs.gap_estimate = std::min(gs.gap_estimate, std::max(probe_gap, 0.0));
    }
    gs.degenerate = gs.gap_estimate < 1e-8 * std::max(1.0, std::abs(gs.energy));
    return gs;
}

namespace {

SymmetricOperator chain_operator(const ChainSpec& spec, const Couplings& c) {
    validate(spec);
    SymmetricOperator op;
    op.dim = hilbert_dimension(spec);
    op.apply = [spec, c](std::span<const double> x, std::span<double> y) {
        apply_hamiltonian(spec, c, x, y);
    };
    return op;
}

} // namespace

GroundState ground_state(const ChainSpec& spec, const Couplings& c, const LanczosConfig& cfg) {
    return lanczos_ground_state(chain_operator(spec, c), cfg);
}

GroundState ground_state(const ChainSpec& spec, double lambda, const LanczosConfig& cfg) {
    if (!(lambda >= 0.0)) throw Error(ErrorCode::invalid_input, "lambda must be >= 0");
    return ground_state(spec, couplings_at(spec, lambda), cfg);
}

GroundState ground_state_dense(const ChainSpec& spec, const Couplings& c) {
    const Eigen::MatrixXd h = dense_hamiltonian(spec, c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    GroundState gs;
    gs.energy = es.eigenvalues()(0);
    gs.vector = es.eigenvectors().col(0);
    gs.residual = (h * gs.vector - gs.energy * gs.vector).norm();
    gs.iterations = 0;
    gs.gap_estimate = (h.rows() > 1) ? es.eigenvalues()(1) - es.eigenvalues()(0) : 0.0;
    gs.degenerate = gs.gap_estimate < 1e-8 * std::max(1.0, std::abs(gs.energy));
    return gs;
}

GroundState ground_state_dense(const ChainSpec& spec, double lambda) {
    return ground_state_dense(spec, couplings_at(spec, lambda));
}

} // namespace tfiq
