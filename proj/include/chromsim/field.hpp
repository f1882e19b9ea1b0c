#ifndef CHROMSIM_FIELD_HPP
#define CHROMSIM_FIELD_HPP

#include <span>
#include <vector>

namespace chromsim {

/// Mobile-phase concentrations of all components on the spatial grid at
/// one time level. Component k occupies the contiguous slice
/// values[k*nodes .. (k+1)*nodes).
struct ConcentrationField {
  int components = 0;
  int nodes = 0;
  std::vector<double> values;
  int level = 0;
  double time = 0.0;

  ConcentrationField() = default;
  ConcentrationField(int m, int n)
      : components(m), nodes(n), values(static_cast<size_t>(m) * n, 0.0) {}

  double& at(int k, int i) { return values[static_cast<size_t>(k) * nodes + i]; }
  double at(int k, int i) const { return values[static_cast<size_t>(k) * nodes + i]; }

  std::span<double> component(int k) {
    return {values.data() + static_cast<size_t>(k) * nodes, static_cast<size_t>(nodes)};
  }
  std::span<const double> component(int k) const {
    return {values.data() + static_cast<size_t>(k) * nodes, static_cast<size_t>(nodes)};
  }
};

}  // namespace chromsim

#endif
