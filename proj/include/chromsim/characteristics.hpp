#ifndef CHROMSIM_CHARACTERISTICS_HPP
#define CHROMSIM_CHARACTERISTICS_HPP

#include <span>
#include <utility>
#include <vector>

#include "chromsim/field.hpp"
#include "chromsim/scenario.hpp"

namespace chromsim {

/// Field values carried back along characteristics to the new time level:
/// values[k*nodes+i] is the interpolated (or inflow) value for component k
/// at node i. stencil_center[i] < 0 marks nodes fed from the inlet boundary.
struct TracedField {
  int components = 0;
  int nodes = 0;
  std::vector<double> values;
  std::vector<double> feet;
  std::vector<int> stencil_center;

  double& at(int k, int i) { return values[static_cast<size_t>(k) * nodes + i]; }
  double at(int k, int i) const { return values[static_cast<size_t>(k) * nodes + i]; }
};

inline double foot_of_characteristic(double x, double velocity, double dt) {
  return x - velocity * dt;
}

/// The two perturbed feet x_f +- eta*dt*dx. Unclamped; tracing handles
/// boundary crossings.
std::pair<double, double> perturbed_feet(double x, double velocity, double dt, double dx,
                                         double eta);

/// Lagrange quadratic through the three nodes nearest xq (stencil shifted
/// inward at the ends), evaluated at xq.
double quadratic_interpolate(std::span<const double> nodal, double dx, double xq);

/// Inlet value seen by the backward characteristic through (x_node, t_next):
/// the profile sampled at the crossing time t_next - x_node / velocity.
std::vector<double> inflow_trace(double x_node, double t_next, double velocity,
                                 const InjectionProfile& profile);

/// Traces every node back by velocity*dt + foot_offset and interpolates all
/// components. Feet left of the inlet take the boundary crossing value; feet
/// beyond the outlet clamp to it.
TracedField trace_field(const ConcentrationField& state, const GridSpec& grid, double length,
                        double velocity, double t_next, const InjectionProfile& profile,
                        double foot_offset = 0.0);

}  // namespace chromsim

#endif
