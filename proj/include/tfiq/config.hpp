#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tfiq/entropy.hpp"
#include "tfiq/spin_model.hpp"

namespace tfiq {

/// Parsed key=value run configuration. Keys not set keep their defaults;
/// required keys are checked per command by the runner.
struct RunConfig {
    // chain
    int two_s = 1;
    std::optional<int> n_sites;
    Model model = Model::nn;
    double ratio = kDefaultNnnRatio;
    std::optional<Boundary> boundary;     // default depends on model
    std::optional<Convention> convention; // default depends on spin

    // grids and entropy targets
    std::optional<double> lambda; // blockscan's fixed point
    double lambda_min = 0.2;
    double lambda_max = 2.0;
    double lambda_step = 0.02;
    std::vector<double> q_list{1.0};
    enum class TargetKind { site_default, site, block, scan } target_kind = TargetKind::site_default;
    int target_index = -1;
    std::vector<int> n_list;

    // gamma evaluation mode for extrapolations
    enum class GammaMode { peak, fixed } mode = GammaMode::peak;
    double fixed_lambda = 1.0;

    // solver and orchestration
    double tol = 1e-12;
    int max_krylov = 300;
    int workers = 1;
    std::string out_dir = "out";

    // synthetic injection (extrapolate / spin-power)
    std::vector<double> gamma_list;
    std::vector<int> spin_list; // in units of 2S
    std::vector<double> gamma_infinity_list;

    // plot command
    std::string csv;
    std::string x = "lambda";
    std::string y = "s_q";
    std::string series;
    std::string title;
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses the plain-text key=value format (# comments, one pair per line).
/// Unknown keys, type mismatches and invariant violations raise config-error
/// naming the key.
RunConfig parse_config(const std::string& text);

/// Canonical key=value serialization; parse_config(canonical_config_text(c))
/// reproduces c exactly.
std::string canonical_config_text(const RunConfig& cfg);

/// "1/2" -> 1, "3/2" -> 3, "1" -> 2 ... (two_s units)
int parse_spin(const std::string& token);
std::string spin_to_string(int two_s);

ChainSpec chain_spec_from(const RunConfig& cfg);
LanczosConfig lanczos_config_from(const RunConfig& cfg);
EntanglementTarget target_from(const RunConfig& cfg);

} // namespace tfiq
