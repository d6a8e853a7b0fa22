#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tfiq/entanglement.hpp"
#include "tfiq/entropy.hpp"
#include "tfiq/lanczos.hpp"
#include "tfiq/scaling.hpp"
#include "tfiq/spin_model.hpp"

namespace py = pybind11;
using namespace tfiq;

namespace {

ChainSpec make_spec(const std::string& spin, int n, const std::string& model, double ratio,
                    const std::string& boundary, const std::string& convention) {
    int two_s = 0;
    const std::size_t slash = spin.find('/');
    if (slash != std::string::npos)
        two_s = std::stoi(spin.substr(0, slash));
    else
        two_s = 2 * std::stoi(spin);
    ChainSpec spec = ChainSpec::with_defaults(two_s, n, model == "nnn" ? Model::nnn : Model::nn,
                                              ratio);
    if (boundary == "open")
        spec.boundary = Boundary::open;
    else if (boundary == "periodic")
        spec.boundary = Boundary::periodic;
    if (convention == "pauli")
        spec.convention = Convention::pauli;
    else if (convention == "raw")
        spec.convention = Convention::raw;
    validate(spec);
    return spec;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Transverse-field Ising chains: ground states, Tsallis entropies, Grueneisen scans";

    py::register_exception<Error>(m, "TfiqError");

    py::class_<ChainSpec>(m, "ChainSpec")
        .def(py::init(&make_spec), py::arg("spin"), py::arg("n"), py::arg("model") = "nn",
             py::arg("ratio") = kDefaultNnnRatio, py::arg("boundary") = "",
             py::arg("convention") = "")
        .def_readonly("two_s", &ChainSpec::two_s)
        .def_readonly("n_sites", &ChainSpec::n_sites)
        .def_property_readonly("model", [](const ChainSpec& s) { return to_string(s.model); })
        .def_readonly("ratio", &ChainSpec::ratio)
        .def_property_readonly("boundary", [](const ChainSpec& s) { return to_string(s.boundary); })
        .def_property_readonly("convention",
                               [](const ChainSpec& s) { return to_string(s.convention); })
        .def("__repr__", [](const ChainSpec& s) {
            return "ChainSpec(spin=" + std::to_string(s.two_s) + "/2, n=" +
                   std::to_string(s.n_sites) + ", model=" + to_string(s.model) + ")";
        });

    py::class_<Couplings>(m, "Couplings")
        .def(py::init([](double j1, double j2, double field) {
                 return Couplings{j1, j2, field};
             }),
             py::arg("j1"), py::arg("j2") = 0.0, py::arg("field") = 1.0)
        .def_readwrite("j1", &Couplings::j1)
        .def_readwrite("j2", &Couplings::j2)
        .def_readwrite("field", &Couplings::field);

    py::class_<GroundState>(m, "GroundState")
        .def_readonly("energy", &GroundState::energy)
        .def_readonly("vector", &GroundState::vector)
        .def_readonly("residual", &GroundState::residual)
        .def_readonly("iterations", &GroundState::iterations)
        .def_readonly("gap_estimate", &GroundState::gap_estimate)
        .def_readonly("degenerate", &GroundState::degenerate);

    py::class_<SchmidtSpectrum>(m, "SchmidtSpectrum")
        .def_readonly("coefficients", &SchmidtSpectrum::coefficients)
        .def_readonly("block_size", &SchmidtSpectrum::block_size)
        .def_readonly("chain_size", &SchmidtSpectrum::chain_size);

    m.def("hilbert_dimension", &hilbert_dimension, py::arg("spec"));
    m.def(
        "spin_operators",
        [](int two_s, const std::string& convention) {
            const SpinOperators ops =
                spin_operators(two_s, convention == "pauli" ? Convention::pauli : Convention::raw);
            return py::make_tuple(ops.sz, ops.sx);
        },
        py::arg("two_s"), py::arg("convention") = "raw", "returns (sz, sx)");
    m.def("couplings_at", &couplings_at, py::arg("spec"), py::arg("lambda_"));
    m.def(
        "apply_hamiltonian",
        [](const ChainSpec& spec, double lambda, const Eigen::VectorXd& v) {
            return apply_hamiltonian(spec, lambda, v);
        },
        py::arg("spec"), py::arg("lambda_"), py::arg("v"));
    m.def(
        "apply_hamiltonian_explicit",
        [](const ChainSpec& spec, const Couplings& c, const Eigen::VectorXd& v) {
            Eigen::VectorXd out(v.size());
            apply_hamiltonian(spec, c, {v.data(), static_cast<std::size_t>(v.size())},
                              {out.data(), static_cast<std::size_t>(out.size())});
            return out;
        },
        py::arg("spec"), py::arg("couplings"), py::arg("v"));
    m.def("dense_hamiltonian",
          py::overload_cast<const ChainSpec&, double>(&dense_hamiltonian), py::arg("spec"),
          py::arg("lambda_"));

    m.def(
        "ground_state",
        [](const ChainSpec& spec, double lambda, double tol, int max_krylov) {
            LanczosConfig cfg;
            cfg.tol = tol;
            cfg.max_krylov = max_krylov;
            return ground_state(spec, lambda, cfg);
        },
        py::arg("spec"), py::arg("lambda_"), py::arg("tol") = 1e-12, py::arg("max_krylov") = 300);
    m.def("ground_state_dense",
          py::overload_cast<const ChainSpec&, double>(&ground_state_dense), py::arg("spec"),
          py::arg("lambda_"));

    m.def("schmidt_spectrum", &schmidt_spectrum, py::arg("state"), py::arg("spec"),
          py::arg("block_size"));
    m.def("block_probabilities", &block_probabilities, py::arg("state"), py::arg("spec"),
          py::arg("block_size"));
    m.def(
        "single_site_rdm",
        [](const Eigen::VectorXd& state, const ChainSpec& spec, int site) {
            return single_site_rdm(state, spec, site < 0 ? default_site(spec) : site).entries;
        },
        py::arg("state"), py::arg("spec"), py::arg("site") = -1);
    m.def(
        "rdm_probabilities",
        [](const Eigen::MatrixXd& entries) { return rdm_probabilities(Rdm{entries}); },
        py::arg("rdm"));

    m.def("q_log", &q_log, py::arg("x"), py::arg("q"));
    m.def("tsallis_entropy", &tsallis_entropy, py::arg("probabilities"), py::arg("q"));
    m.def(
        "gamma_from_curve",
        [](const Eigen::VectorXd& grid, const Eigen::VectorXd& values) {
            EntropyCurve curve;
            curve.lambda_grid = grid;
            curve.values = values;
            const GammaCurve g = gamma_from_curve(curve);
            return py::make_tuple(g.lambda_grid, g.gamma);
        },
        py::arg("lambda_grid"), py::arg("values"));
    m.def(
        "locate_peak",
        [](const Eigen::VectorXd& grid, const Eigen::VectorXd& gamma) {
            const Peak p = locate_peak(GammaCurve{grid, gamma});
            return py::make_tuple(p.lambda_star, p.gamma_star, p.boundary);
        },
        py::arg("lambda_grid"), py::arg("gamma"), "returns (lambda_star, gamma_star, boundary)");
    m.def(
        "entropy_sweep",
        [](const ChainSpec& spec, const Eigen::VectorXd& grid, const std::vector<double>& q_list,
           int site, int block, int workers) {
            const EntanglementTarget target =
                block > 0 ? EntanglementTarget::block(block) : EntanglementTarget::site(site);
            const SweepResult sweep = entropy_sweep(spec, grid, q_list, target, {}, workers);
            py::dict out;
            py::list curves;
            for (const EntropyCurve& c : sweep.curves) {
                py::dict entry;
                entry["q"] = c.q;
                entry["values"] = c.values;
                curves.append(entry);
            }
            out["lambda_grid"] = grid;
            out["curves"] = curves;
            out["degenerate"] =
                std::vector<int>(sweep.degenerate.begin(), sweep.degenerate.end());
            return out;
        },
        py::arg("spec"), py::arg("lambda_grid"), py::arg("q_list"), py::arg("site") = -1,
        py::arg("block") = 0, py::arg("workers") = 1);

    m.def("q_special_ising", &q_special_ising);
    m.def("q_special_xy", &q_special_xy);
    m.def("qlog_abscissa", &qlog_abscissa, py::arg("n"), py::arg("q"), py::arg("a_q"));
    m.def(
        "fit_gamma_extrapolation",
        [](const std::vector<std::pair<int, double>>& points, double q) {
            const ExtrapolationFit fit = fit_gamma_extrapolation(points, q);
            py::dict out;
            out["q"] = fit.q;
            out["a_q"] = fit.a_q;
            out["slope"] = fit.slope;
            out["intercept"] = fit.intercept;
            out["r_squared"] = fit.r_squared;
            out["residuals"] = fit.residuals;
            if (fit.gamma_infinity)
                out["gamma_infinity"] = *fit.gamma_infinity;
            else
                out["gamma_infinity"] = py::none();
            return out;
        },
        py::arg("points"), py::arg("q"));
    m.def(
        "fit_spin_power_law",
        [](const std::vector<std::pair<double, double>>& points) {
            const PowerLawFit fit = fit_spin_power_law(points);
            py::dict out;
            out["c"] = fit.c;
            out["beta"] = fit.beta;
            out["r_squared"] = fit.r_squared;
            return out;
        },
        py::arg("points"));
    m.def(
        "extensivity_report",
        [](const std::vector<std::pair<double, Eigen::VectorXd>>& curves, int n_sites) {
            const ExtensivityReport report = extensivity_report(curves, n_sites);
            py::list records;
            for (const ExtensivityRecord& rec : report.records) {
                py::dict entry;
                entry["q"] = rec.q;
                entry["slope"] = rec.slope;
                entry["intercept"] = rec.intercept;
                entry["r_squared"] = rec.r_squared;
                entry["mean_second_difference"] = rec.mean_second_difference;
                records.append(entry);
            }
            py::dict out;
            out["n_sites"] = report.n_sites;
            out["l_max"] = report.l_max;
            out["records"] = records;
            return out;
        },
        py::arg("curves"), py::arg("n_sites"));

    m.attr("__version__") = TFIQ_VERSION;
}
