#pragma once

#include <string>

#include "hapto/core.hpp"

namespace hapto {

enum class ModelVariant { Degenerate, Nondegenerate, Regularized };

std::string to_string(ModelVariant v);
ModelVariant variant_from_string(const std::string& s);

/// Model rates and variant switches. Rates are per day; space is the unit
/// square, so kappa_c and kappa_v carry dimensionless length^2/day.
struct ModelParams {
  double kappa_c = 1e-3;  // cell diffusion scale
  double kappa_v = 1.0;   // haptotaxis scale
  double mu_c = 0.5;      // tumor proliferation rate
  double mu_v = 0.02;     // tissue remodeling rate
  double lambda = 0.1;    // tissue degradation rate
  double eta = 1.0;       // crowding coupling in the tumor logistic source
  ModelVariant variant = ModelVariant::Degenerate;
  // Used only when variant == Regularized.
  double eps1 = 0.0;
  double eps2 = 0.0;
  double theta = 5.0;  // superlinear sink exponent, must exceed 4 in 2-D

  void validate() const;  // throws Error on violation
};

/// Nonlinear cell diffusion coefficient.
///   Degenerate:    kappa_c v c / (1 + v c)      (vanishes at v=0 and c=0)
///   Nondegenerate: kappa_c / (1 + v c)
///   Regularized:   eps2 + kappa_c v c / (1 + v c)
double diffusion_coefficient(double v, double c, const ModelParams& p);

/// Haptotactic sensitivity kappa_v / (1 + v)^2, decreasing in v.
double haptotactic_sensitivity(double v, const ModelParams& p);

/// Tumor source mu_c c (1 - c - eta v); the Regularized variant subtracts
/// the sink eps1 c^theta. Exactly zero at c = 0.
double reaction_c(double c, double v, const ModelParams& p);

/// Tissue rate mu_v v (1 - v) - lambda v c. Exactly zero at v = 0.
double reaction_v(double c, double v, const ModelParams& p);

/// Monotone change of variables arctan(sqrt(v)) mapping [0,1] to [0,pi/4].
double psi(double v);

/// Inverse tan(w)^2, clamped into [0,1].
double psi_inverse(double w);

}  // namespace hapto
