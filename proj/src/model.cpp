#include "hapto/model.hpp"

#include <algorithm>
#include <cmath>

namespace hapto {

std::string to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::Degenerate: return "degenerate";
    case ModelVariant::Nondegenerate: return "nondegenerate";
    case ModelVariant::Regularized: return "regularized";
  }
  return "?";
}

ModelVariant variant_from_string(const std::string& s) {
  if (s == "degenerate") return ModelVariant::Degenerate;
  if (s == "nondegenerate") return ModelVariant::Nondegenerate;
  if (s == "regularized") return ModelVariant::Regularized;
  throw Error("unknown model variant '" + s +
              "' (expected degenerate, nondegenerate or regularized)");
}

void ModelParams::validate() const {
  auto nonneg = [](double x, const char* name) {
    if (!(x >= 0.0)) throw Error(std::string(name) + " must be >= 0");
  };
  nonneg(kappa_c, "kappa_c");
  nonneg(kappa_v, "kappa_v");
  nonneg(mu_c, "mu_c");
  nonneg(mu_v, "mu_v");
  nonneg(lambda, "lambda");
  nonneg(eta, "eta");
  if (variant == ModelVariant::Regularized) {
    if (!(eps1 > 0.0 && eps1 < 1.0) || !(eps2 > 0.0 && eps2 < 1.0))
      throw Error("eps1 and eps2 must lie in (0,1) for the regularized variant");
    if (!(theta > 4.0))
      throw Error("theta must exceed 4 for the regularized variant");
  }
}

namespace {

double checked_v(double v) {
  if (v < 0.0 || v > 1.0) {
    if (v >= -kRangeTol && v <= 1.0 + kRangeTol)
      return std::clamp(v, 0.0, 1.0);
    throw Error("tissue density " + std::to_string(v) + " outside [0,1]");
  }
  return v;
}

double checked_c(double c) {
  if (!(c >= 0.0)) throw Error("cell density " + std::to_string(c) + " < 0");
  return c;
}

}  // namespace

double diffusion_coefficient(double v, double c, const ModelParams& p) {
  v = checked_v(v);
  c = checked_c(c);
  const double vc = v * c;
  switch (p.variant) {
    case ModelVariant::Degenerate: return p.kappa_c * vc / (1.0 + vc);
    case ModelVariant::Nondegenerate: return p.kappa_c / (1.0 + vc);
    case ModelVariant::Regularized:
      return p.eps2 + p.kappa_c * vc / (1.0 + vc);
  }
  return 0.0;
}

double haptotactic_sensitivity(double v, const ModelParams& p) {
  v = checked_v(v);
  const double w = 1.0 + v;
  return p.kappa_v / (w * w);
}

double reaction_c(double c, double v, const ModelParams& p) {
  v = checked_v(v);
  c = checked_c(c);
  double r = p.mu_c * c * (1.0 - c - p.eta * v);
  if (p.variant == ModelVariant::Regularized)
    r -= p.eps1 * std::pow(c, p.theta);
  return r;
}

double reaction_v(double c, double v, const ModelParams& p) {
  v = checked_v(v);
  c = checked_c(c);
  return p.mu_v * v * (1.0 - v) - p.lambda * v * c;
}

double psi(double v) {
  v = checked_v(v);
  return std::atan(std::sqrt(v));
}

double psi_inverse(double w) {
  if (w <= 0.0) return 0.0;
  const double t = std::tan(w);
  return std::min(t * t, 1.0);
}

}  // namespace hapto
