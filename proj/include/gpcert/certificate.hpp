#pragma once

#include "gpcert/bounds.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gpcert {

enum class CertificateMode {
  Phi1,  // one output drops by more than delta
  Phi2,  // L1 change over all outputs exceeds delta
};

std::string_view mode_name(CertificateMode mode);
CertificateMode mode_from_name(std::string_view name);

struct CertificateRequest {
  Vector x_star;
  Box region;
  double delta = 0.0;
  CertificateMode mode = CertificateMode::Phi1;
  Index component = 0;  // Phi1 only
  double quad_tol = 1e-8;
};

/// Everything that depends on the region but not on delta.
struct CertificateConstants {
  double sup_mean = 0.0;  // sup mu_o (Phi1) or sup |mu_o|_1 (Phi2)
  double xi_hat = 0.0;
  double K = 0.0;
  double sup_d = 0.0;
  double dudley = 0.0;
  double D = 0.0;
  int m_eff = 0;
  bool converged = true;
};

struct Certificate {
  double phi_hat = 1.0;
  /// ln(phi_hat), kept finite where phi_hat underflows; -inf when xi_hat is zero.
  double log_phi_hat = 0.0;
  double eta = 0.0;  // eta (Phi1) or the per-component eta_bar (Phi2)
  double delta = 0.0;
  CertificateConstants constants;
  /// exp(-eta_i^2 / (2 xi_i)) per component; Phi1 has a single entry.
  std::vector<double> component_terms;
  bool vacuous = true;
  bool failed = false;
  std::string error;
};

CertificateConstants certificate_constants(const TrainedGP& gp, const Vector& x_star, const Box& region,
                                           CertificateMode mode, Index component, const BnBConfig& cfg,
                                           double quad_tol = 1e-8);
/// Tail bound for one delta given the region constants.
Certificate certificate_from_constants(const CertificateConstants& c, double delta, CertificateMode mode,
                                       Index n_outputs);

Certificate phi1_certificate(const TrainedGP& gp, const CertificateRequest& req, const BnBConfig& cfg = {});
Certificate phi2_certificate(const TrainedGP& gp, const CertificateRequest& req, const BnBConfig& cfg = {});
Certificate certify(const TrainedGP& gp, const CertificateRequest& req, const BnBConfig& cfg = {});

struct SweepCell {
  double gamma;
  double delta;
  Certificate certificate;
};

/// Certificates for every (gamma, delta) pair, row-major in the given order.
/// `box_for_gamma` must return nested boxes for increasing gamma; region
/// constants are computed once per gamma in ascending order and carried
/// forward as a running maximum so they never decrease with gamma.
std::vector<SweepCell> certificate_sweep(const TrainedGP& gp, const Vector& x_star,
                                         const std::function<Box(double)>& box_for_gamma,
                                         const std::vector<double>& gammas, const std::vector<double>& deltas,
                                         CertificateMode mode, Index component, const BnBConfig& cfg = {},
                                         double quad_tol = 1e-8);

}  // namespace gpcert
