#include "gpcert/certificate.hpp"

#include "gpcert/dudley.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gpcert {

std::string_view mode_name(CertificateMode mode) { return mode == CertificateMode::Phi1 ? "phi1" : "phi2"; }

CertificateMode mode_from_name(std::string_view name) {
  if (name == "phi1") return CertificateMode::Phi1;
  if (name == "phi2") return CertificateMode::Phi2;
  throw InputError("unknown certificate mode '" + std::string(name) + "' (expected phi1 or phi2)");
}

CertificateConstants certificate_constants(const TrainedGP& gp, const Vector& x_star, const Box& region,
                                           CertificateMode mode, Index component, const BnBConfig& cfg,
                                           double quad_tol) {
  require(x_star.size() == gp.input_dim(), "x_star dimension differs from the GP input dimension");
  if (mode == CertificateMode::Phi1) {
    require(component >= 0 && component < gp.output_dim(), "output component out of range");
  }
  CertificateConstants c;
  c.D = region.max_side();
  c.m_eff = region.effective_dim();
  if (region.is_point() && region.contains(x_star)) return c;

  if (mode == CertificateMode::Phi1) {
    const BoundResult inf = mean_inf_bounds(gp, region, component, cfg);
    c.sup_mean = posterior_mean(gp, x_star, component) - inf.lower;
    c.converged = c.converged && inf.converged;
  } else {
    for (Index i = 0; i < gp.output_dim(); ++i) {
      const double at_star = posterior_mean(gp, x_star, i);
      const BoundResult inf = mean_inf_bounds(gp, region, i, cfg);
      const BoundResult sup = mean_sup_bounds(gp, region, i, cfg);
      c.sup_mean += std::max({at_star - inf.lower, sup.upper - at_star, 0.0});
      c.converged = c.converged && inf.converged && sup.converged;
    }
  }
  const BoundResult xi = variance_sup_bounds(gp, x_star, region, cfg);
  c.converged = c.converged && xi.converged;
  c.xi_hat = std::max(0.0, xi.upper);
  c.K = lipschitz_bound(gp.spec(), region);
  c.sup_d = sup_d_bound(c.xi_hat);
  c.dudley = dudley_bound(c.K, c.D, c.m_eff, c.sup_d, quad_tol);
  return c;
}

Certificate certificate_from_constants(const CertificateConstants& c, double delta, CertificateMode mode,
                                       Index n_outputs) {
  require(delta > 0.0, "delta must be positive");
  Certificate cert;
  cert.delta = delta;
  cert.constants = c;
  const Index terms = mode == CertificateMode::Phi1 ? 1 : n_outputs;
  if (mode == CertificateMode::Phi1) cert.eta = delta - (c.sup_mean + c.dudley);
  else cert.eta = (delta - c.sup_mean) / static_cast<double>(n_outputs) - c.dudley;

  if (!(cert.eta > 0.0)) {
    cert.vacuous = true;
    cert.phi_hat = 1.0;
    return cert;
  }
  // every output shares the kernel, so the per-component constants coincide
  const double term = c.xi_hat > 0.0 ? std::exp(-cert.eta * cert.eta / (2.0 * c.xi_hat)) : 0.0;
  cert.component_terms.assign(static_cast<std::size_t>(terms), term);
  double raw = std::accumulate(cert.component_terms.begin(), cert.component_terms.end(), 0.0);
  if (mode == CertificateMode::Phi2) raw *= 2.0;
  cert.vacuous = raw >= 1.0;
  cert.phi_hat = cert.vacuous ? 1.0 : raw;
  if (!cert.vacuous) {
    const double prefactor = mode == CertificateMode::Phi2 ? 2.0 * static_cast<double>(terms) : 1.0;
    cert.log_phi_hat = c.xi_hat > 0.0 ? std::log(prefactor) - cert.eta * cert.eta / (2.0 * c.xi_hat)
                                      : -std::numeric_limits<double>::infinity();
  }
  return cert;
}

Certificate certify(const TrainedGP& gp, const CertificateRequest& req, const BnBConfig& cfg) {
  try {
    require(req.region.contains(req.x_star), "x_star must lie inside the certified region");
    const auto c = certificate_constants(gp, req.x_star, req.region, req.mode, req.component, cfg, req.quad_tol);
    return certificate_from_constants(c, req.delta, req.mode, gp.output_dim());
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    Certificate cert;
    cert.delta = req.delta;
    cert.failed = true;
    cert.error = e.what();
    return cert;
  }
}

Certificate phi1_certificate(const TrainedGP& gp, const CertificateRequest& req, const BnBConfig& cfg) {
  require(req.mode == CertificateMode::Phi1, "phi1_certificate needs a phi1 request");
  return certify(gp, req, cfg);
}

Certificate phi2_certificate(const TrainedGP& gp, const CertificateRequest& req, const BnBConfig& cfg) {
  require(req.mode == CertificateMode::Phi2, "phi2_certificate needs a phi2 request");
  return certify(gp, req, cfg);
}

std::vector<SweepCell> certificate_sweep(const TrainedGP& gp, const Vector& x_star,
                                         const std::function<Box(double)>& box_for_gamma,
                                         const std::vector<double>& gammas, const std::vector<double>& deltas,
                                         CertificateMode mode, Index component, const BnBConfig& cfg,
                                         double quad_tol) {
  require(!gammas.empty() && !deltas.empty(), "certificate sweep needs at least one gamma and one delta");
  for (double d : deltas) require(d > 0.0, "delta must be positive");
  std::vector<std::size_t> order(gammas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gammas[a] < gammas[b]; });

  std::vector<CertificateConstants> consts(gammas.size());
  std::vector<std::string> errors(gammas.size());
  bool have_prev = false;
  CertificateConstants prev;
  for (std::size_t g : order) {
    try {
      const Box region = box_for_gamma(gammas[g]);
      require(region.contains(x_star), "x_star must lie inside the certified region");
      CertificateConstants c = certificate_constants(gp, x_star, region, mode, component, cfg, quad_tol);
      if (have_prev) {
        c.sup_mean = std::max(c.sup_mean, prev.sup_mean);
        c.xi_hat = std::max(c.xi_hat, prev.xi_hat);
        c.K = std::max(c.K, prev.K);
        c.sup_d = std::max(c.sup_d, prev.sup_d);
        c.dudley = std::max(c.dudley, prev.dudley);
        c.D = std::max(c.D, prev.D);
        c.m_eff = std::max(c.m_eff, prev.m_eff);
      }
      consts[g] = c;
      prev = c;
      have_prev = true;
    } catch (const std::exception& e) {
      errors[g] = e.what();
    }
  }

  std::vector<SweepCell> cells;
  cells.reserve(gammas.size() * deltas.size());
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    for (double d : deltas) {
      Certificate cert;
      if (errors[g].empty()) {
        cert = certificate_from_constants(consts[g], d, mode, gp.output_dim());
      } else {
        cert.delta = d;
        cert.failed = true;
        cert.error = errors[g];
      }
      cells.push_back({gammas[g], d, std::move(cert)});
    }
  }
  return cells;
}

}  // namespace gpcert
