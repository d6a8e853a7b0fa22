#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "tfiq/error.hpp"

namespace tfiq {

/// Entropic index that makes block entropy extensive at the critical point.
/// Ising universality class; the XY-class value is recorded alongside but no
/// XY model is implemented.
double q_special_ising(); // sqrt(37) - 6
double q_special_xy();    // sqrt(10) - 3

/// Abscissa of the finite-size extrapolation: (1/ln_q(N))^a_q.
double qlog_abscissa(int n, double q, double a_q);

inline constexpr double kAqSearchLo = 0.05;
inline constexpr double kAqSearchHi = 3.00;
inline constexpr double kAqSearchStep = 0.01;

struct ExtrapolationFit {
    double q = 0.0;
    double a_q = 0.0;
    double slope = 0.0;
    double intercept = 0.0; // limit of 1/Gamma as N -> infinity
    double r_squared = 0.0;
    Eigen::VectorXd residuals;
    std::optional<double> gamma_infinity; // empty = divergent
};

/// Grid search over a_q with an OLS line of 1/Gamma vs qlog_abscissa per
/// candidate; smallest SSE wins, ties toward smaller a_q.
ExtrapolationFit fit_gamma_extrapolation(const std::vector<std::pair<int, double>>& points,
                                         double q);

/// 1/intercept when the intercept is positive; empty (divergent) otherwise.
std::optional<double> gamma_infinite(const ExtrapolationFit& fit);

struct PowerLawFit {
    double c = 0.0;
    double beta = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log Gamma vs log[S(S+1)] over (S, Gamma_infinity) points.
PowerLawFit fit_spin_power_law(const std::vector<std::pair<double, double>>& points);

struct ExtensivityRecord {
    double q = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double mean_second_difference = 0.0;
};

struct ExtensivityReport {
    int n_sites = 0;
    int l_max = 0;                          // floor(N/2)
    std::vector<ExtensivityRecord> records; // ordered by r_squared, best first
};

/// Linearity diagnostics of S_q(L) on L = 1..floor(N/2) per q; input curves
/// cover L = 1..N-1 (values index L-1).
ExtensivityReport extensivity_report(const std::vector<std::pair<double, Eigen::VectorXd>>& curves,
                                     int n_sites);

} // namespace tfiq
