#pragma once

#include <filesystem>

#include "tfiq/config.hpp"

namespace tfiq {

struct RunArtifacts {
    std::filesystem::path out_dir;
    int exit_code = 0;
};

/// Lambda sweep: rows (lambda,q,s_q,gamma,degenerate), peak summary per q in
/// the manifest, partial CSV preserved on solver failure (then throws
/// sweep-aborted).
RunArtifacts run_sweep(const RunConfig& cfg);

/// Block scan at fixed lambda: rows (l,q,s_q) for L = 1..N-1 plus the
/// extensivity summary.
RunArtifacts run_blockscan(const RunConfig& cfg);

/// Finite-size extrapolation: rows (n,gamma,abscissa) plus the fit footer.
/// gamma_list in the config bypasses the solver (synthetic injection).
RunArtifacts run_extrapolate(const RunConfig& cfg);

/// Gamma_infinity versus spin: rows (s,gamma_infinity) plus the power-law fit
/// footer. gamma_infinity_list bypasses the solver.
RunArtifacts run_spin_power(const RunConfig& cfg);

/// Exhaustive dual-route verification over every spec with dimension <= 1024:
/// matvec vs dense, Lanczos vs dense, spectra vs dense partial trace. Exit
/// code 0 iff all checks pass (4 otherwise). tolerance_scale != 1 is for
/// testing the harness itself.
RunArtifacts run_oracle_check(const RunConfig& cfg, double tolerance_scale = 1.0);

/// Renders plot.svg from an existing CSV per the config's x/y/series/title.
RunArtifacts run_plot(const RunConfig& cfg);

/// Reads manifest.json back into the configuration that produced it.
RunConfig config_from_manifest(const std::filesystem::path& manifest_path);

} // namespace tfiq
