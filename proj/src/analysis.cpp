#include "influence/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace influence {

AnalysisParams AnalysisParams::from_gains(const Gains& gains, int node_count,
                                          double g_bound, double h_bound,
                                          double xd_bound, double xd_dot_bound,
                                          double eps_bar) {
  AnalysisParams p;
  p.g_bound = g_bound;
  p.h_bound = h_bound;
  p.xd_bound = xd_bound;
  p.xd_dot_bound = xd_dot_bound;
  p.eps_bar = eps_bar;
  p.theta_bar = gains.theta_bar;
  p.node_count = node_count;
  p.k1 = gains.k1;
  p.k2 = gains.k2;
  p.k3 = gains.k3;
  p.eps1 = gains.eps1;
  p.lambda4 = gains.lambda4;
  p.Gamma = gains.gamma * Eigen::MatrixXd::Identity(1, 1);
  return p;
}

std::pair<double, double> rayleigh_bounds(const Eigen::MatrixXd& Gamma) {
  if (Gamma.rows() != Gamma.cols() || Gamma.rows() == 0) {
    throw std::invalid_argument("analysis: Gamma must be square");
  }
  if (!Gamma.isApprox(Gamma.transpose(), 1e-12)) {
    throw std::invalid_argument("analysis: Gamma must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Gamma);
  const double min_eig = solver.eigenvalues().minCoeff();
  const double max_eig = solver.eigenvalues().maxCoeff();
  if (min_eig <= 0.0) {
    throw std::invalid_argument("analysis: Gamma must be positive definite");
  }
  // eigenvalues of Gamma^-1 are reciprocals
  const double lambda1 = 0.5 * std::min(1.0, 1.0 / max_eig);
  const double lambda2 = 0.5 * std::max(1.0, 1.0 / min_eig);
  return {lambda1, lambda2};
}

GainReport check_gain_conditions(const AnalysisParams& params) {
  const double gN = params.g_bound * params.node_count;
  const double N = params.node_count;
  const double k1 = params.k1;
  const double k2 = params.k2;
  const double g = params.g_bound;

  GainReport report;
  report.conditions.push_back(
      {"eps1 > 0", params.eps1, 0.0, params.eps1 > 0.0, params.eps1});

  const double k1_threshold =
      2.0 + (1.0 / gN) * (N * N * N + N + params.eps1);
  report.conditions.push_back({"k1 > 2 + (N^3 + N + eps1)/(g_bar*N)", k1,
                               k1_threshold, k1 > k1_threshold,
                               k1 - k1_threshold});

  const double k2_threshold =
      4.0 * k1 * g + 2.0 * g * g * (std::pow(k1, 4) + k1 * k1 + 1.0);
  report.conditions.push_back({"k2 > 4*k1*g_bar + 2*g_bar^2*(k1^4+k1^2+1)", k2,
                               k2_threshold, k2 > k2_threshold,
                               k2 - k2_threshold});

  report.conditions.push_back(
      {"k3 > 0", params.k3, 0.0, params.k3 > 0.0, params.k3});

  const double term_e =
      0.5 * k1 * gN - gN - 0.5 * N * N * N - 0.5 * N - 0.5 * params.eps1;
  const double term_eta = 0.25 * k2 - k1 * g - 0.5 * k1 * k1 * g * g -
                          0.5 * g * g - 0.5 * std::pow(k1, 4) * g * g;
  const double term_theta = 0.5 * params.k3;
  report.lambda3 = std::min({term_e, term_eta, term_theta});
  report.lambda3_positive = report.lambda3 > 0.0;

  report.all_pass = report.lambda3_positive;
  for (const auto& c : report.conditions) {
    if (!c.pass) report.all_pass = false;
  }
  return report;
}

std::string GainReport::format() const {
  std::ostringstream out;
  out << "gain condition                                value       required >  "
         "margin      verdict\n";
  for (const auto& c : conditions) {
    out.setf(std::ios::left);
    out.width(45);
    out << c.name;
    out.unsetf(std::ios::left);
    char buf[96];
    std::snprintf(buf, sizeof(buf), " %-11.6g %-11.6g %-11.6g %s\n", c.value,
                  c.threshold, c.margin, c.pass ? "PASS" : "FAIL");
    out << buf;
  }
  out << "lambda3 = " << lambda3 << (lambda3_positive ? " (> 0)" : " (<= 0)")
      << "\n";
  out << "overall: " << (all_pass ? "PASS" : "FAIL") << "\n";
  out << "note: the initial-condition and operating sets of the certificate "
         "depend on an inverse of an existential comparison function and are "
         "not computable from these constants.\n";
  return out.str();
}

UltimateBound ultimate_bound(const AnalysisParams& params, double lambda1,
                             double lambda2, double lambda3) {
  const double N = params.node_count;
  UltimateBound ub;
  ub.upsilon = params.eps_bar * params.eps_bar / params.k2 +
               params.xd_dot_bound * params.xd_dot_bound /
                   (2.0 * params.g_bound * N) +
               params.h_bound * params.h_bound / (2.0 * params.eps1) +
               0.5 * (2.0 * N + 1.0) * (2.0 * N + 1.0) * params.k3 *
                   params.theta_bar * params.theta_bar * N;
  ub.radius = std::sqrt(lambda2 * ub.upsilon / (lambda1 * params.lambda4));
  ub.vacuous = params.lambda4 >= lambda3;
  return ub;
}

double theorem_envelope(double lambda1, double lambda2, double lambda4,
                        double upsilon, double z0_norm, double elapsed) {
  if (lambda1 <= 0.0 || lambda2 <= 0.0 || lambda4 <= 0.0) {
    throw std::invalid_argument("analysis: envelope constants must be positive");
  }
  const double floor_sq = upsilon / lambda4;
  const double decay = std::exp(-(lambda4 / lambda2) * elapsed);
  return std::sqrt((lambda2 / lambda1) *
                   (floor_sq + decay * (z0_norm * z0_norm - floor_sq)));
}

}  // namespace influence
