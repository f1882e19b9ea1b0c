#ifndef CHROMSIM_REFERENCE_HPP
#define CHROMSIM_REFERENCE_HPP

#include <string>
#include <vector>

#include "chromsim/mmocaa.hpp"
#include "chromsim/scenario.hpp"

namespace chromsim {

/// Constant-coefficient reduction of the linear-isotherm system:
/// R u_t + v u_x = D u_xx with R = 1 + F a.
struct RetardedTransportParams {
  double retardation = 1.0;  // R
  double velocity = 0.0;     // v
  double diffusion = 0.0;    // D
  double length = 0.0;       // outlet position
  double feed = 0.0;         // u_f
  double injection_time = 0.0;
};

RetardedTransportParams retarded_params(const ScenarioConfig& scenario);

/// Scaled complementary error function exp(z^2) erfc(z) for z >= 0.
double erfcx_positive(double z);

/// Unit-step breakthrough of the retarded advection-diffusion equation on a
/// semi-infinite domain (two-term complementary-error-function form).
double linear_step_response(const RetardedTransportParams& p, double x, double t);

/// Closed-form outlet concentration for the rectangular pulse: the step
/// response minus its copy shifted by the injection time.
double linear_analytic_value(const RetardedTransportParams& p, double x, double t);
double linear_analytic_outlet(const RetardedTransportParams& p, double t);

/// Outlet concentration time series per component.
struct ChromatogramRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> series;

  int components() const { return static_cast<int>(series.size()); }
};

ChromatogramRecord to_record(const Trajectory& trajectory);

ChromatogramRecord analytic_record(const ScenarioConfig& scenario,
                                   const std::vector<double>& times);

/// MMOCAA run of the same physics on a fine grid, cached on disk keyed by
/// the scenario fingerprint. Default fine grid is 3000 cells / 20000 steps.
ChromatogramRecord fine_grid_reference(const ScenarioConfig& scenario, int fine_cells,
                                       int fine_steps, const std::string& cache_dir);

/// Time-integrated outlet error dt * sum_k |num - ref| per component, with
/// the reference resampled linearly onto the numeric time grid.
std::vector<double> l1_error(const ChromatogramRecord& numeric,
                             const ChromatogramRecord& reference);

std::vector<double> resample_linear(const std::vector<double>& src_times,
                                    const std::vector<double>& src_values,
                                    const std::vector<double>& dst_times);

}  // namespace chromsim

#endif
