#include "latlab/early_latency.hpp"

#include <cmath>
#include <stdexcept>

#include "latlab/qfunc.hpp"
#include "latlab/quadrature.hpp"

namespace latlab {

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double gamma_of_tau(double tau, double power, double rate, double n) {
  check_positive(tau, "tau");
  check_positive(power, "power");
  check_positive(n, "n");
  const double rho = power * tau;
  const double c = capacity(rho);
  const double v = dispersion(rho);
  const double r_eff = rate - std::log2(n) / (2.0 * n);
  return std::sqrt(n) * (c - r_eff) / std::sqrt(v);
}

double gamma_derivative(double tau, double power, double rate, double n) {
  check_positive(tau, "tau");
  check_positive(power, "power");
  check_positive(n, "n");
  const double rho = power * tau;
  const double c = capacity(rho);
  const double v = dispersion(rho);
  const double r_eff = rate - std::log2(n) / (2.0 * n);
  // dC/drho and dV/drho for C = (1/2)log2(1+rho), V = (rho/2)(rho+2)/(rho+1)^2
  // in bits^2.
  const double one_p = 1.0 + rho;
  const double dc = kLog2E / (2.0 * one_p);
  const double dv = kLog2E * kLog2E / (one_p * one_p * one_p);
  const double sv = std::sqrt(v);
  return std::sqrt(n) * power * (dc / sv - (c - r_eff) * dv / (2.0 * v * sv));
}

double stopping_cdf(double tau, double power, double rate, double n) {
  check_positive(tau, "tau");
  return 1.0 - block_error_rate(power * tau, rate, n);
}

EarlyDetectModel make_model(double power, double rate, double n, double T,
                            int grid_points) {
  check_positive(power, "power");
  check_positive(n, "n");
  check_positive(T, "T");
  if (grid_points < 2) {
    throw std::domain_error("grid_points must be >= 2");
  }
  EarlyDetectModel m;
  m.power = power;
  m.rate = rate;
  m.n = n;
  m.T = T;
  m.tau_grid.resize(static_cast<size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    m.tau_grid[static_cast<size_t>(i)] =
        T * static_cast<double>(i + 1) / static_cast<double>(grid_points);
  }
  m.tail_mass = block_error_rate(power * T, rate, n);
  return m;
}

StoppingDensity stopping_density(const EarlyDetectModel& model) {
  StoppingDensity d;
  d.tau = model.tau_grid;
  d.pdf.resize(d.tau.size());
  for (size_t i = 0; i < d.tau.size(); ++i) {
    const double g = gamma_of_tau(d.tau[i], model.power, model.rate, model.n);
    const double gp =
        gamma_derivative(d.tau[i], model.power, model.rate, model.n);
    d.pdf[i] = normal_pdf(g) * gp;
  }
  d.point_mass_at_T =
      block_error_rate(model.power * model.T, model.rate, model.n);
  d.mass_below_first =
      stopping_cdf(d.tau.front(), model.power, model.rate, model.n);
  return d;
}

double average_latency(double power, double rate, double n, double T) {
  check_positive(power, "power");
  check_positive(n, "n");
  check_positive(T, "T");
  // E[tau]/T = int_0^1 eps*(P T x, R, n) dx; the integrand is a smooth
  // sigmoid falling from ~1 to the tail mass.
  const auto f = [&](double x) {
    return block_error_rate(power * T * x, rate, n);
  };
  return integrate(f, 0.0, 1.0, 1e-10);
}

double average_latency_density_form(double power, double rate, double n,
                                    double T) {
  check_positive(power, "power");
  check_positive(n, "n");
  check_positive(T, "T");
  const double tau_lo = T * 1e-9;
  const auto f = [&](double tau) {
    const double g = gamma_of_tau(tau, power, rate, n);
    const double gp = gamma_derivative(tau, power, rate, n);
    return tau * normal_pdf(g) * gp;
  };
  const double body = integrate(f, tau_lo, T, 1e-12 * T);
  // Mass below tau_lo contributes at most tau_lo * CDF(tau_lo) which is far
  // below any tolerance in use; fold in the upper bound for completeness.
  const double below = tau_lo * stopping_cdf(tau_lo, power, rate, n);
  const double tail = T * block_error_rate(power * T, rate, n);
  return (body + below + tail) / T;
}

double min_tau_bound(double rate, double power) {
  check_positive(power, "power");
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::domain_error("rate must be nonnegative and finite");
  }
  return (std::exp2(2.0 * rate) - 1.0) / power;
}

double checkpoint_latency(const std::vector<double>& checkpoints, double power,
                          double rate, double n) {
  if (checkpoints.empty()) {
    throw std::domain_error("checkpoints must be nonempty");
  }
  std::vector<double> eps(checkpoints.size());
  double prev = 0.0;
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > prev)) {
      throw std::domain_error("checkpoints must be strictly increasing and positive");
    }
    prev = checkpoints[i];
    eps[i] = block_error_rate(power * checkpoints[i], rate, n);
  }
  return checkpoint_latency_with_eps(checkpoints, eps);
}

double checkpoint_latency_with_eps(const std::vector<double>& checkpoints,
                                   const std::vector<double>& eps_values) {
  if (checkpoints.empty() || checkpoints.size() != eps_values.size()) {
    throw std::domain_error("checkpoint and eps lists must match and be nonempty");
  }
  const double T = checkpoints.back();
  double prev_tau = 0.0;
  double prev_eps = 1.0;
  double acc = 0.0;
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > prev_tau)) {
      throw std::domain_error("checkpoints must be strictly increasing and positive");
    }
    if (!(eps_values[i] >= 0.0) || !(eps_values[i] <= prev_eps)) {
      throw std::domain_error("eps values must be nonincreasing within [0,1]");
    }
    acc += checkpoints[i] * (prev_eps - eps_values[i]);
    prev_tau = checkpoints[i];
    prev_eps = eps_values[i];
  }
  return acc / T + eps_values.back();
}

double solve_power_for_final_error(double rate, double n, double eps,
                                   double T) {
  check_positive(n, "n");
  check_positive(T, "T");
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::domain_error("eps must lie in (0,1)");
  }
  const double snr = solve_snr_for_error(rate, n, eps);
  return snr / T;
}

}  // namespace latlab
