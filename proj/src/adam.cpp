#include "elball/adam.hpp"

#include <cmath>

#include "elball/error.hpp"

namespace elball {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg) {
  if (params.size() != grads.size() || params.size() != state.m.size() ||
      params.size() != state.v.size()) {
    throw DimensionMismatch("adam_step: parameter, gradient and moment sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double m_corr = 1.0 - std::pow(cfg.beta1, t);
  const double v_corr = 1.0 - std::pow(cfg.beta2, t);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(params.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double g = grads[i];
    double& m = state.m[i];
    double& v = state.v[i];
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
    params[i] -= cfg.learning_rate * (m / m_corr) / (std::sqrt(v / v_corr) + cfg.epsilon);
  }
}

}  // namespace elball
