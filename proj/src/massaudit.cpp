#include "chromsim/massaudit.hpp"

#include <algorithm>
#include <cmath>

#include "chromsim/isotherm.hpp"

namespace chromsim {

std::vector<double> injected_mass(const InjectionProfile& profile, double t, double velocity) {
  const double window = std::min(std::max(t, 0.0), profile.duration);
  std::vector<double> out(profile.feed.size());
  for (size_t k = 0; k < out.size(); ++k) out[k] = velocity * profile.feed[k] * window;
  return out;
}

std::vector<double> column_holdup(const ConcentrationField& state, const IsothermParams& p,
                                  double dx) {
  const int m = state.components;
  const int nodes = state.nodes;
  std::vector<double> total(m, 0.0);
  std::vector<double> u(m), q(m);
  for (int i = 0; i < nodes; ++i) {
    for (int k = 0; k < m; ++k) u[k] = state.at(k, i);
    langmuir_q_into(u, p, q);
    const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    for (int k = 0; k < m; ++k) total[k] += w * (u[k] + p.phase_ratio * q[k]) * dx;
  }
  return total;
}

std::vector<double> outflow_mass(const std::vector<std::vector<double>>& outlet_series,
                                 double velocity, double dt) {
  std::vector<double> out(outlet_series.size(), 0.0);
  for (size_t k = 0; k < outlet_series.size(); ++k) {
    double acc = 0.0;
    for (size_t n = 1; n < outlet_series[k].size(); ++n)
      acc += 0.5 * (outlet_series[k][n] + outlet_series[k][n - 1]);
    out[k] = velocity * dt * acc;
  }
  return out;
}

std::vector<double> deficit(const MassLedger& ledger) { return ledger.deficit; }

namespace {

void push_history(MassLedger& ledger, double t) {
  ledger.times.push_back(t);
  ledger.hist_injected.insert(ledger.hist_injected.end(), ledger.injected.begin(),
                              ledger.injected.end());
  ledger.hist_holdup.insert(ledger.hist_holdup.end(), ledger.holdup.begin(),
                            ledger.holdup.end());
  ledger.hist_outflow.insert(ledger.hist_outflow.end(), ledger.outflow.begin(),
                             ledger.outflow.end());
  ledger.hist_deficit.insert(ledger.hist_deficit.end(), ledger.deficit.begin(),
                             ledger.deficit.end());
}

}  // namespace

MassLedger make_ledger(const ConcentrationField& initial_state, const IsothermParams& p,
                       double dx) {
  MassLedger ledger;
  ledger.components = initial_state.components;
  ledger.initial_mass = column_holdup(initial_state, p, dx);
  ledger.injected = ledger.initial_mass;
  ledger.holdup = ledger.initial_mass;
  ledger.outflow.assign(ledger.components, 0.0);
  ledger.deficit.assign(ledger.components, 0.0);
  ledger.last_outlet.resize(ledger.components);
  for (int k = 0; k < ledger.components; ++k)
    ledger.last_outlet[k] = initial_state.at(k, initial_state.nodes - 1);
  push_history(ledger, initial_state.time);
  return ledger;
}

void advance_ledger(MassLedger& ledger, const ConcentrationField& state,
                    const InjectionProfile& profile, double velocity, double dx, double dt,
                    const IsothermParams& p) {
  const int m = ledger.components;
  const int outlet = state.nodes - 1;
  const std::vector<double> flowed = injected_mass(profile, state.time, velocity);
  ledger.holdup = column_holdup(state, p, dx);
  for (int k = 0; k < m; ++k) {
    const double now = state.at(k, outlet);
    ledger.outflow[k] += velocity * dt * 0.5 * (now + ledger.last_outlet[k]);
    ledger.last_outlet[k] = now;
    ledger.injected[k] = flowed[k] + ledger.initial_mass[k];
    ledger.deficit[k] = ledger.injected[k] - ledger.holdup[k] - ledger.outflow[k];
  }
  push_history(ledger, state.time);
}

}  // namespace chromsim
