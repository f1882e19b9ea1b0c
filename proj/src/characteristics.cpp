#include "chromsim/characteristics.hpp"

#include <cmath>

#include "chromsim/errors.hpp"

namespace chromsim {

std::pair<double, double> perturbed_feet(double x, double velocity, double dt, double dx,
                                         double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta must lie in (0, 1)");
  const double foot = foot_of_characteristic(x, velocity, dt);
  const double shift = eta * dt * dx;
  return {foot + shift, foot - shift};
}

double quadratic_interpolate(std::span<const double> nodal, double dx, double xq) {
  const int n = static_cast<int>(nodal.size()) - 1;
  if (n < 2) throw ValidationError("quadratic interpolation needs at least 3 grid nodes");
  int center = static_cast<int>(std::lround(xq / dx));
  if (center < 1) center = 1;
  if (center > n - 1) center = n - 1;
  const double t = xq / dx - center;  // offset in cell units from the stencil center
  const double w_left = 0.5 * t * (t - 1.0);
  const double w_mid = 1.0 - t * t;
  const double w_right = 0.5 * t * (t + 1.0);
  return w_left * nodal[center - 1] + w_mid * nodal[center] + w_right * nodal[center + 1];
}

std::vector<double> inflow_trace(double x_node, double t_next, double velocity,
                                 const InjectionProfile& profile) {
  return injection_value(profile, t_next - x_node / velocity);
}

TracedField trace_field(const ConcentrationField& state, const GridSpec& grid, double length,
                        double velocity, double t_next, const InjectionProfile& profile,
                        double foot_offset) {
  const int m = state.components;
  const int nodes = state.nodes;
  TracedField out;
  out.components = m;
  out.nodes = nodes;
  out.values.resize(static_cast<size_t>(m) * nodes);
  out.feet.resize(nodes);
  out.stencil_center.assign(nodes, -1);

  const int n = nodes - 1;
  for (int i = 0; i < nodes; ++i) {
    const double x = i * grid.dx;
    double foot = foot_of_characteristic(x, velocity, grid.dt) + foot_offset;
    out.feet[i] = foot;
    if (foot < 0.0) {
      // Crossing time of the backward characteristic with the inlet.
      const double t_cross = t_next - x / velocity;
      const bool feeding = t_cross > 0.0 && t_cross <= profile.duration;
      for (int k = 0; k < m; ++k) out.at(k, i) = feeding ? profile.feed[k] : 0.0;
      continue;
    }
    if (foot > length) foot = length;
    int center = static_cast<int>(std::lround(foot / grid.dx));
    if (center < 1) center = 1;
    if (center > n - 1) center = n - 1;
    out.stencil_center[i] = center;
    const double t = foot / grid.dx - center;
    const double w_left = 0.5 * t * (t - 1.0);
    const double w_mid = 1.0 - t * t;
    const double w_right = 0.5 * t * (t + 1.0);
    for (int k = 0; k < m; ++k) {
      const double* uk = state.values.data() + static_cast<size_t>(k) * nodes;
      out.at(k, i) = w_left * uk[center - 1] + w_mid * uk[center] + w_right * uk[center + 1];
    }
  }
  return out;
}

}  // namespace chromsim
