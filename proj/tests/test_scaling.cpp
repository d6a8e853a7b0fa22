#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tfiq/entropy.hpp"
#include "tfiq/scaling.hpp"

using namespace tfiq;

TEST_CASE("named entropic indices") {
    CHECK(q_special_ising() == doctest::Approx(0.0827625302982196).epsilon(1e-12));
    CHECK(q_special_xy() == doctest::Approx(0.16227766016838).epsilon(1e-10));
}

TEST_CASE("qlog abscissa") {
    for (int n : {2, 5, 17}) CHECK(qlog_abscissa(n, 1.0, 1.0) == doctest::Approx(1.0 / std::log(n)));
    CHECK(qlog_abscissa(2, 1.0, 2.0) == doctest::Approx(2.0814).epsilon(1e-4));
    CHECK(qlog_abscissa(9, 0.3, 0.0) == 1.0);
    CHECK_THROWS_AS((void)qlog_abscissa(1, 1.0, 0.5), Error);
}

TEST_CASE("abscissa strictly decreases in N") {
    for (double q : {0.01, q_special_ising(), 0.7, 1.0}) {
        double prev = qlog_abscissa(2, q, 0.5);
        for (int n = 3; n <= 40; ++n) {
            const double x = qlog_abscissa(n, q, 0.5);
            CHECK(x < prev);
            prev = x;
        }
    }
}

TEST_CASE("extrapolation round-trip on model data") {
    const double q = q_special_ising();
    for (double a_true : {0.31, 0.5, 1.32, 2.0}) {
        std::vector<std::pair<int, double>> points;
        for (int n : {4, 6, 8, 10, 12, 14}) {
            const double x = qlog_abscissa(n, q, a_true);
            points.push_back({n, 1.0 / (0.5 + 2.0 * x)});
        }
        const ExtrapolationFit fit = fit_gamma_extrapolation(points, q);
        CHECK(std::abs(fit.a_q - a_true) <= 0.01 + 1e-9); // grid resolution
        CHECK(fit.intercept == doctest::Approx(0.5).epsilon(1e-3));
        CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-2));
        CHECK(fit.r_squared > 0.999999);
        REQUIRE(fit.gamma_infinity.has_value());
        CHECK(*fit.gamma_infinity == doctest::Approx(2.0).epsilon(1e-3));
    }
}

TEST_CASE("extrapolation exact when a_q sits on the search grid") {
    const double q = q_special_ising();
    std::vector<std::pair<int, double>> points;
    for (int n : {4, 6, 8, 10, 12, 14}) {
        const double x = qlog_abscissa(n, q, 0.5);
        points.push_back({n, 1.0 / (0.5 + 2.0 * x)});
    }
    const ExtrapolationFit fit = fit_gamma_extrapolation(points, q);
    CHECK(std::abs(fit.a_q - 0.5) <= 1e-9);
    CHECK(std::abs(fit.intercept - 0.5) <= 1e-6);
    CHECK(std::abs(fit.slope - 2.0) <= 1e-6);
    CHECK(fit.residuals.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("extrapolation input validation") {
    const double q = q_special_ising();
    std::vector<std::pair<int, double>> three{{4, 1.0}, {6, 0.9}, {8, 0.8}};
    CHECK_THROWS_WITH_AS((void)fit_gamma_extrapolation(three, q),
                         doctest::Contains("underdetermined"), Error);
    std::vector<std::pair<int, double>> bad{{4, 1.0}, {6, 0.9}, {8, -0.8}, {10, 0.7}};
    CHECK_THROWS_WITH_AS((void)fit_gamma_extrapolation(bad, q), doctest::Contains("invalid-gamma"),
                         Error);
    std::vector<std::pair<int, double>> dup{{4, 1.0}, {4, 0.9}, {8, 0.8}, {10, 0.7}};
    CHECK_THROWS_AS((void)fit_gamma_extrapolation(dup, q), Error);
}

TEST_CASE("gamma_infinite maps intercepts") {
    ExtrapolationFit fit;
    fit.intercept = 0.5;
    CHECK(*gamma_infinite(fit) == doctest::Approx(2.0));
    fit.intercept = 0.0;
    CHECK_FALSE(gamma_infinite(fit).has_value());
    fit.intercept = -0.3;
    CHECK_FALSE(gamma_infinite(fit).has_value());
}

TEST_CASE("spin power law roundtrip") {
    std::vector<std::pair<double, double>> points;
    for (double s : {0.5, 1.5, 2.5, 3.5}) {
        const double g = 0.43 * std::pow(s * (s + 1.0), 2.0);
        points.push_back({s, g});
    }
    const PowerLawFit fit = fit_spin_power_law(points);
    CHECK(std::abs(fit.c - 0.43) <= 1e-10);
    CHECK(std::abs(fit.beta - 2.0) <= 1e-10);
    CHECK(fit.r_squared == doctest::Approx(1.0));

    std::vector<std::pair<double, double>> two{{0.5, 1.0}, {1.5, 2.0}};
    CHECK_THROWS_WITH_AS((void)fit_spin_power_law(two), doctest::Contains("invalid-input"), Error);

    std::vector<std::pair<double, double>> rising{{0.5, 1.0}, {1.5, 3.0}, {2.5, 9.0}};
    CHECK(fit_spin_power_law(rising).beta > 0.0);
}

TEST_CASE("extensivity report diagnostics") {
    const int n = 18;
    Eigen::VectorXd linear(n - 1), sqrtlike(n - 1), uplike(n - 1);
    for (int l = 1; l < n; ++l) {
        linear[l - 1] = 0.3 * l;
        sqrtlike[l - 1] = std::sqrt(static_cast<double>(l));
        uplike[l - 1] = std::pow(1.45, l);
    }
    const ExtensivityReport report = extensivity_report(
        {{0.7, sqrtlike}, {q_special_ising(), linear}, {0.01, uplike}}, n);
    CHECK(report.l_max == 9);
    REQUIRE(report.records.size() == 3);
    CHECK(report.records[0].q == doctest::Approx(q_special_ising()));
    CHECK(report.records[0].r_squared == doctest::Approx(1.0));
    CHECK(std::abs(report.records[0].mean_second_difference) <= 1e-12);
    for (const auto& rec : report.records) {
        if (rec.q == 0.7) CHECK(rec.mean_second_difference < 0.0);
        if (rec.q == 0.01) CHECK(rec.mean_second_difference > 0.0);
    }
    CHECK(report.records[0].r_squared >= report.records[1].r_squared);
    CHECK(report.records[1].r_squared >= report.records[2].r_squared);

    CHECK_THROWS_WITH_AS((void)extensivity_report({{1.0, linear}}, 5),
                         doctest::Contains("range-too-short"), Error);
}
