#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "latlab/early_latency.hpp"
#include "latlab/fbl_bounds.hpp"
#include "latlab/qfunc.hpp"
#include "latlab/quadrature.hpp"

using namespace latlab;

namespace {

// Power that makes the full-window error equal eps at (rate, n), T = 1.
double solved_power(double rate, double n, double eps) {
  return solve_snr_for_error(rate, n, eps);
}

}  // namespace

TEST_CASE("gamma_of_tau zero crossing and cross-module identity") {
  const double n = 500.0;
  const double rho0 = 1.3;
  const double r_eff = capacity(rho0) + std::log2(n) / (2.0 * n);
  // at P*tau = rho0 the numerator vanishes
  CHECK(gamma_of_tau(0.5, rho0 / 0.5, r_eff, n) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // Q(gamma(tau)) equals the block error rate at the partial SNR
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> ut(0.05, 1.0);
  for (int i = 0; i < 25; ++i) {
    const double tau = ut(gen);
    const double g = gamma_of_tau(tau, 2.0, 0.5, n);
    const double e = block_error_rate(2.0 * tau, 0.5, n);
    CHECK(qfunc(g) == doctest::Approx(e).epsilon(1e-11));
  }
  // strictly increasing in tau
  double prev = gamma_of_tau(0.01, 2.0, 0.5, n);
  for (double tau = 0.02; tau <= 1.0; tau += 0.01) {
    const double cur = gamma_of_tau(tau, 2.0, 0.5, n);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(gamma_of_tau(0.0, 2.0, 0.5, n), std::domain_error);
  CHECK_THROWS_AS(gamma_of_tau(-1.0, 2.0, 0.5, n), std::domain_error);
}

TEST_CASE("gamma_derivative matches finite differences") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> ut(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const double tau = ut(gen);
    const double h = 1e-6;
    const double fd = (gamma_of_tau(tau + h, 1.8, 0.5, 500) -
                       gamma_of_tau(tau - h, 1.8, 0.5, 500)) /
                      (2.0 * h);
    CHECK(gamma_derivative(tau, 1.8, 0.5, 500) ==
          doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("stopping density mass accounting") {
  const double n = 500.0;
  const double rate = 0.5;
  const double P = solved_power(rate, n, 1e-9);
  const auto model = make_model(P, rate, n, 1.0);
  const auto d = stopping_density(model);

  REQUIRE(d.tau.size() == model.tau_grid.size());
  for (double v : d.pdf) CHECK(v >= 0.0);

  // integral of the analytic density over (tau_min, T] plus the point mass
  // and the (tiny) mass below tau_min accounts for all probability
  const auto pdf = [&](double tau) {
    return normal_pdf(gamma_of_tau(tau, P, rate, n)) *
           gamma_derivative(tau, P, rate, n);
  };
  const double body = integrate(pdf, d.tau.front(), 1.0, 1e-10);
  CHECK(body + d.point_mass_at_T + d.mass_below_first ==
        doctest::Approx(1.0).epsilon(1e-6));

  // CDF from the density equals 1 - error rate at the partial SNR
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> ut(0.05, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double tau = ut(gen);
    const double cdf = integrate(pdf, d.tau.front(), tau, 1e-11) +
                       d.mass_below_first;
    CHECK(cdf == doctest::Approx(stopping_cdf(tau, P, rate, n)).epsilon(1e-8));
  }
}

TEST_CASE("stopping mass vanishes well below the capacity bound") {
  // At finite n the gaussian model spreads around the capacity point
  // (2^{2R}-1)/P rather than cutting off at it, so "no mass below the
  // bound" only holds with margin: far below it the tail is numerically
  // zero, and the spread tightens as n grows.
  const double rate = 0.5;
  {
    const double n = 500.0;
    const double P = solved_power(rate, n, 1e-9);
    const double bound = min_tau_bound(rate, P);
    CHECK(bound > 0.0);
    CHECK(bound < 1.0);
    const double tau = 0.35 * bound;
    const double pdf = normal_pdf(gamma_of_tau(tau, P, rate, n)) *
                       gamma_derivative(tau, P, rate, n);
    CHECK(pdf < 1e-12);
    CHECK(stopping_cdf(tau, P, rate, n) < 1e-12);
  }
  // concentration: mass below 0.8*bound shrinks monotonically with n
  double prev = 1.0;
  for (double n : {500.0, 2000.0, 8000.0}) {
    const double P = solved_power(rate, n, 1e-9);
    const double cdf = stopping_cdf(0.8 * min_tau_bound(rate, P), P, rate, n);
    CHECK(cdf < prev);
    prev = cdf;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("min_tau_bound arithmetic") {
  CHECK(min_tau_bound(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(min_tau_bound(1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(min_tau_bound(0.5, 0.0), std::domain_error);
}

TEST_CASE("average latency reference value") {
  // (n=500, R=0.5, full-window error 1e-9): power solved by bisection
  const double P = solved_power(0.5, 500, 1e-9);
  CHECK(P == doctest::Approx(1.8160335655653972).epsilon(1e-10));
  const double e = average_latency(P, 0.5, 500, 1.0);
  CHECK(e == doctest::Approx(0.5397793952951438).epsilon(1e-7));
}

TEST_CASE("latency table at error 1e-9") {
  // reference grid computed with an independent quadrature
  struct Row {
    double rate;
    double n;
    double want;
  };
  const std::vector<Row> rows = {
      {0.5, 150, 0.342975},  {0.5, 300, 0.457685},  {0.5, 500, 0.539779},
      {0.5, 1000, 0.641315}, {0.5, 2000, 0.727372}, {0.5, 5000, 0.815713},
      {0.95, 150, 0.427417}, {0.95, 300, 0.542164}, {0.95, 500, 0.619220},
      {0.95, 1000, 0.709813}, {0.95, 2000, 0.783189}, {0.95, 5000, 0.855785},
  };
  for (const auto& row : rows) {
    const double P = solved_power(row.rate, row.n, 1e-9);
    const double e = average_latency(P, row.rate, row.n, 1.0);
    CHECK(e == doctest::Approx(row.want).epsilon(2e-5));
  }
}

TEST_CASE("both expectation forms agree") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> un(100.0, 5000.0);
  std::uniform_real_distribution<double> ur(0.3, 1.2);
  std::uniform_real_distribution<double> ue(-9.0, -3.0);
  for (int i = 0; i < 20; ++i) {
    const double n = std::floor(un(gen));
    const double rate = ur(gen);
    const double eps = std::pow(10.0, ue(gen));
    const double P = solved_power(rate, n, eps);
    const double a = average_latency(P, rate, n, 1.0);
    const double b = average_latency_density_form(P, rate, n, 1.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
    // E[tau] concentrates at the capacity point and can sit a hair on
    // either side of it at finite n; well below the bound there is nothing
    CHECK(a > 0.9 * min_tau_bound(rate, P));
    CHECK(a <= 1.0);
  }
}

TEST_CASE("unattainable rate collapses to the full window") {
  // R above capacity at the final SNR: nothing can stop early
  const double P = 1.0;
  const double n = 500.0;
  const double rate = capacity(P) * 1.2;
  CHECK(average_latency(P, rate, n, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("latency falls as the error target is relaxed upward") {
  // tightening eps (power re-solved to meet it) never lengthens the wait
  const double n = 500.0;
  const double rate = 0.5;
  double prev = 2.0;
  for (double eps : {1e-3, 1e-6, 1e-9}) {
    const double P = solved_power(rate, n, eps);
    const double e = average_latency(P, rate, n, 1.0);
    CHECK(e <= prev);
    prev = e;
  }
}

TEST_CASE("latency grows with blocklength at fixed rate") {
  const double rate = 0.5;
  double prev = 0.0;
  for (double n : {150.0, 300.0, 500.0, 1000.0, 2000.0, 5000.0}) {
    const double P = solved_power(rate, n, 1e-9);
    const double e = average_latency(P, rate, n, 1.0);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("checkpoint receiver with explicit error inputs") {
  // single checkpoint at T: synchronous detection
  CHECK(checkpoint_latency({1.0}, 2.0, 0.5, 500) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // two checkpoints with supplied residual errors
  const double v =
      checkpoint_latency_with_eps({0.5, 1.0}, {0.086, 1e-6});
  CHECK(v == doctest::Approx(0.543).epsilon(1e-9));
  CHECK_THROWS_AS(checkpoint_latency_with_eps({1.0, 0.5}, {0.1, 0.01}),
                  std::domain_error);
  CHECK_THROWS_AS(checkpoint_latency_with_eps({0.5, 1.0}, {0.01, 0.1}),
                  std::domain_error);
}

TEST_CASE("checkpoint receiver from the error-rate model") {
  const double n = 150.0;
  const double rate = 0.5;
  const double P = solved_power(rate, n, 1e-6);
  // with decisions only at T/2 and T, the model's own half-time error applies
  const double half_eps = block_error_rate(P * 0.5, rate, n);
  CHECK(half_eps == doctest::Approx(0.171395).epsilon(1e-4));
  const double two = checkpoint_latency({0.5, 1.0}, P, rate, n);
  CHECK(two == doctest::Approx(0.5856975).epsilon(1e-4));

  // a fine grid converges to the continuous expectation from above
  std::vector<double> grid(10000);
  for (size_t i = 0; i < grid.size(); ++i) {
    grid[i] = static_cast<double>(i + 1) / static_cast<double>(grid.size());
  }
  const double fine = checkpoint_latency(grid, P, rate, n);
  const double cont = average_latency(P, rate, n, 1.0);
  CHECK(fine == doctest::Approx(cont).epsilon(1e-3));
  CHECK(fine >= cont - 1e-12);
  CHECK(two >= fine);
}

TEST_CASE("solve_power_for_final_error round trip") {
  const double P = solve_power_for_final_error(0.5, 500, 1e-9, 2.0);
  CHECK(block_error_rate(P * 2.0, 0.5, 500) ==
        doctest::Approx(1e-9).epsilon(1e-8));
}
