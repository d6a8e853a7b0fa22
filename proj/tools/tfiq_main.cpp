// tfiq: exact ground states, Tsallis q-entropies and Grueneisen sweeps for
// transverse-field Ising chains.
//
// usage: tfiq <command> [config-file] [key=value ...]
// commands: sweep | blockscan | extrapolate | spin-power | oracle-check | plot

#include <iostream>
#include <string>

#include "tfiq/io.hpp"
#include "tfiq/runner.hpp"

namespace {

constexpr const char* kUsage =
    "usage: tfiq <command> [config-file] [key=value ...]\n"
    "commands:\n"
    "  sweep         S_q and Gamma_q over a lambda grid\n"
    "  blockscan     S_q versus block size L at fixed lambda\n"
    "  extrapolate   Gamma versus N with the q-logarithmic finite-size fit\n"
    "  spin-power    Gamma_infinity versus spin with the power-law fit\n"
    "  oracle-check  dual-route verification over all small chains\n"
    "  plot          render an SVG line plot from a CSV\n"
    "config: key=value lines, '#' comments; later pairs override earlier ones.\n";

int exit_code_for(const tfiq::Error& e) {
    switch (e.code()) {
        case tfiq::ErrorCode::config_error: return 2;
        case tfiq::ErrorCode::no_convergence:
        case tfiq::ErrorCode::sweep_aborted: return 3;
        case tfiq::ErrorCode::plot_error: return 5;
        case tfiq::ErrorCode::invalid_spin:
        case tfiq::ErrorCode::invalid_input:
        case tfiq::ErrorCode::invalid_block:
        case tfiq::ErrorCode::invalid_site:
        case tfiq::ErrorCode::invalid_gamma:
        case tfiq::ErrorCode::underdetermined:
        case tfiq::ErrorCode::unsupported_q:
        case tfiq::ErrorCode::domain_error:
        case tfiq::ErrorCode::range_too_short:
        case tfiq::ErrorCode::dimension_overflow:
        case tfiq::ErrorCode::insufficient_grid: return 2;
        default: return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << kUsage;
        return 2;
    }
    const std::string command = argv[1];

    std::string text;
    bool have_file = false;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.find('=') != std::string::npos) {
            text += arg + "\n";
        } else if (!have_file) {
            try {
                text = tfiq::read_file(arg) + "\n" + text;
            } catch (const tfiq::Error& e) {
                std::cerr << "tfiq: " << e.what() << "\n";
                return 2;
            }
            have_file = true;
        } else {
            std::cerr << "tfiq: unexpected argument '" << arg << "'\n" << kUsage;
            return 2;
        }
    }

    try {
        const tfiq::RunConfig cfg = tfiq::parse_config(text);
        tfiq::RunArtifacts artifacts;
        if (command == "sweep")
            artifacts = tfiq::run_sweep(cfg);
        else if (command == "blockscan")
            artifacts = tfiq::run_blockscan(cfg);
        else if (command == "extrapolate")
            artifacts = tfiq::run_extrapolate(cfg);
        else if (command == "spin-power")
            artifacts = tfiq::run_spin_power(cfg);
        else if (command == "oracle-check")
            artifacts = tfiq::run_oracle_check(cfg);
        else if (command == "plot")
            artifacts = tfiq::run_plot(cfg);
        else {
            std::cerr << "tfiq: unknown command '" << command << "'\n" << kUsage;
            return 2;
        }
        std::cout << "wrote " << artifacts.out_dir.string() << "\n";
        if (artifacts.exit_code != 0)
            std::cerr << "tfiq: " << command << " reported failures (see "
                      << (artifacts.out_dir / "data.csv").string() << ")\n";
        return artifacts.exit_code;
    } catch (const tfiq::Error& e) {
        std::cerr << "tfiq: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "tfiq: " << e.what() << "\n";
        return 1;
    }
}
