#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "influence/controller.hpp"

namespace influence {

/// Constants feeding the convergence diagnostics. eps_bar (the assumed
/// reconstruction-error bound) has no principled default; 1.0 is used and
/// clearly labeled an assumption in the report.
struct AnalysisParams {
  double g_bound = 0.1;
  double h_bound = 0.058;
  double xd_bound = 0.0;
  double xd_dot_bound = 0.0;
  double eps_bar = 1.0;
  double theta_bar = 10.0;
  int node_count = 0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double eps1 = 0.1;
  double lambda4 = 0.01;
  Eigen::MatrixXd Gamma;  // SPD adaptation gain

  static AnalysisParams from_gains(const Gains& gains, int node_count,
                                   double g_bound, double h_bound,
                                   double xd_bound, double xd_dot_bound,
                                   double eps_bar);
};

/// Rayleigh-quotient coefficients of the quadratic certificate:
/// lambda1 = 0.5*min{1, lambda_min(Gamma^-1)},
/// lambda2 = 0.5*max{1, lambda_max(Gamma^-1)}.
std::pair<double, double> rayleigh_bounds(const Eigen::MatrixXd& Gamma);

struct GainCondition {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;  // strict lower bound on value
  bool pass = false;
  double margin = 0.0;  // value - threshold
};

struct GainReport {
  std::vector<GainCondition> conditions;
  double lambda3 = 0.0;
  bool lambda3_positive = false;
  bool all_pass = false;

  std::string format() const;
};

/// Evaluates the sufficient gain inequalities and the decay coefficient
/// lambda3. Failures are report content, never exceptions.
GainReport check_gain_conditions(const AnalysisParams& params);

struct UltimateBound {
  double upsilon = 0.0;
  double radius = 0.0;
  bool vacuous = false;  // lambda4 >= lambda3: the certificate says nothing
};

UltimateBound ultimate_bound(const AnalysisParams& params, double lambda1,
                             double lambda2, double lambda3);

/// Exponential decay envelope on the concatenated error norm.
double theorem_envelope(double lambda1, double lambda2, double lambda4,
                        double upsilon, double z0_norm, double elapsed);

}  // namespace influence
