#include "parex/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "parex/parallel.hpp"
#include "parex/quadrature.hpp"

namespace parex {

namespace {

class ResidualEllipticEstimator final : public EllipticEstimator {
 public:
  ResidualEllipticEstimator(SpatialFn d, SpatialFn r) : d_(std::move(d)), r_(std::move(r)) {}

  double estimate(const GridFunction& y_h, const SpatialFn& g) const override {
    const SpaceMesh& mesh = *y_h.mesh;
    const int ne = mesh.n_elements();
    constexpr int kSamples = 8;

    double d_min = std::numeric_limits<double>::infinity();
    for (int e = 1; e <= ne; ++e) {
      for (int s = 0; s < kSamples; ++s) {
        const double x = mesh.nodes[e - 1] + mesh.h(e) * s / (kSamples - 1);
        d_min = std::min(d_min, d_(x));
      }
    }
    if (!(d_min > 0.0)) {
      throw std::invalid_argument("non-positive-diffusion: d(x) must be strictly positive");
    }

    const double worst = par::max_reduce(ne, [&](std::int64_t idx) {
      const int e = static_cast<int>(idx) + 1;
      const double h = mesh.h(e);
      double res = 0.0;
      for (int s = 0; s < kSamples; ++s) {
        const double x = mesh.nodes[e - 1] + h * s / (kSamples - 1);
        res = std::max(res, std::abs(g(x) - r_(x) * y_h(x)));
      }
      return h * h / 8.0 * res;
    });
    return worst / d_min;
  }

 private:
  SpatialFn d_, r_;
};

class ZeroEstimatorImpl final : public EllipticEstimator {
 public:
  double estimate(const GridFunction&, const SpatialFn&) const override { return 0.0; }
};

}  // namespace

std::unique_ptr<EllipticEstimator> default_elliptic_estimator(const ProblemSpec& problem) {
  constexpr int kProbe = 512;
  for (int k = 0; k <= kProbe; ++k) {
    const double x = problem.x_a + (problem.x_b - problem.x_a) * k / kProbe;
    if (!(problem.d(x) > 0.0)) {
      throw std::invalid_argument("non-positive-diffusion: d(x) must be strictly positive");
    }
    if (problem.r(x) < -1e-12) {
      throw std::invalid_argument("default_elliptic_estimator: reaction must be non-negative");
    }
  }
  return std::make_unique<ResidualEllipticEstimator>(problem.d, problem.r);
}

std::unique_ptr<EllipticEstimator> zero_elliptic_estimator() {
  return std::make_unique<ZeroEstimatorImpl>();
}

double sigma(int j, const TimeMesh& tmesh, double gamma) {
  return std::exp(-gamma * (tmesh.final_time() - tmesh.t(j)));
}

double weight_integral(int j, const TimeMesh& tmesh) {
  const int M = tmesh.intervals();
  const double tau = tmesh.tau(j);
  if (j == M) return 0.5 * tau * tau;

  const double A = tmesh.final_time() - tmesh.t(j);  // T - t_j > 0
  const double z = tau / A;
  if (z > 0.5) {
    const double B = A + tau;  // T - t_{j-1}
    return 0.5 * tau * tau + A * (tau - B * std::log1p(z));
  }
  // series tau^2 sum_{m>=1} (-1)^{m+1} z^m / ((m+1)(m+2)); the direct form
  // cancels catastrophically for tau << T - t_j
  double sum = 0.0;
  double zp = z;
  for (int m = 1; m <= 64; ++m) {
    const double term = zp / ((m + 1.0) * (m + 2.0));
    sum += (m % 2 == 1) ? term : -term;
    zp *= z;
    if (term < 1e-18 * std::abs(sum)) break;
  }
  return tau * tau * sum;
}

double weight_integral_quadrature(int j, const TimeMesh& tmesh, double rel_tol) {
  const int M = tmesh.intervals();
  const double tl = tmesh.t(j - 1);
  const double tr = tmesh.t(j);
  const double T = tmesh.final_time();
  if (j == M) {
    // integrand reduces exactly to (t - t_{M-1}); avoids 0/0 at t = T
    return adaptive_simpson([&](double t) { return t - tl; }, tl, tr, rel_tol);
  }
  return adaptive_simpson([&](double t) { return (tr - t) * (t - tl) / (T - t); }, tl, tr, rel_tol);
}

double mu(int j, int i, const TimeMesh& tmesh, const GreenFunctionBounds& bounds) {
  if (i < 0) throw std::invalid_argument("mu: i must be >= 0");
  const double tau = tmesh.tau(j);
  if (i == 0) return bounds.kappa0 * tau;
  const double first = 0.5 * bounds.kappa0 * tau * legendre_l1_norm(i);
  const double second =
      bounds.kappa1 / tau * weight_integral(j, tmesh) + bounds.kappa1_prime * tau * tau / 24.0;
  return std::min(first, second);
}

double eta_init(const ProblemSpec& problem, const GridFunction& u_h0, const TimeMesh& tmesh) {
  const double s0 = sigma(0, tmesh, problem.green.gamma);
  const double err = sup_norm_sampled(*u_h0.mesh, 8,
                                      [&](double x) { return problem.u0(x) - u_h0(x); });
  return problem.green.kappa0 * s0 * err;
}

EtaF eta_f(const ProblemSpec& problem, const FhatSet& fhat, const SpaceMesh& mesh) {
  const TimeMesh& tmesh = fhat.tmesh();
  const int M = tmesh.intervals();
  const int L = fhat.order();
  const GaussRule& rule = gauss_legendre(2 * L + 2);
  const double kappa0 = problem.green.kappa0;
  const double gamma = problem.green.gamma;

  EtaF out;
  out.per_interval.assign(M, 0.0);
  par::for_index(M, [&](std::int64_t idx) {
    const int j = static_cast<int>(idx) + 1;
    const double integral = gauss_integrate(rule, tmesh.t(j - 1), tmesh.t(j), [&](double s) {
      return sup_norm_sampled(mesh, 8, [&](double x) {
        return problem.f(x, s) - fhat.eval_on(j, x, s);
      });
    });
    out.per_interval[idx] = kappa0 * sigma(j, tmesh, gamma) * integral;
  });
  double total = 0.0;
  for (double c : out.per_interval) total += c;
  out.total = total;
  return out;
}

EtaT eta_t(const ReconstructionSet& recon, const GreenFunctionBounds& bounds) {
  const TimeMesh& tmesh = recon.fhat.tmesh();
  const int M = tmesh.intervals();
  const int L = recon.fhat.order();

  EtaT out;
  out.per_interval.assign(M, 0.0);
  out.mu_used.assign(M, {0.0, 0.0});
  par::for_index(M, [&](std::int64_t idx) {
    const int j = static_cast<int>(idx) + 1;
    const auto [a, b] = psi_plus_dudt_coeffs(recon, j);
    const double mu_a = mu(j, L - 2, tmesh, bounds);
    const double mu_b = mu(j, L - 1, tmesh, bounds);
    out.mu_used[idx] = {mu_a, mu_b};
    out.per_interval[idx] =
        sigma(j, tmesh, bounds.gamma) * (mu_a * a.inf_norm() + mu_b * b.inf_norm());
  });
  double total = 0.0;
  for (double c : out.per_interval) total += c;
  out.total = total;
  return out;
}

EtaEll eta_ell_component(const EllipticEstimator& estimator, const ReconstructionSet& recon,
                         const Trajectory& traj, const GreenFunctionBounds& bounds) {
  const TimeMesh& tmesh = recon.fhat.tmesh();
  const int M = tmesh.intervals();
  const int L = recon.fhat.order();
  const double kappa0 = bounds.kappa0;

  std::vector<double> l1(L);  // ||P_{i-1}||_1 for i = 1..L-1 at index i
  for (int i = 1; i <= L - 1; ++i) l1[i] = legendre_l1_norm(i - 1);

  EtaEll out;
  out.per_interval.assign(M, 0.0);
  par::for_index(M, [&](std::int64_t idx) {
    const int j = static_cast<int>(idx) + 1;
    double inner = 0.0;
    for (int i = 1; i <= L - 1; ++i) {
      const GridFunction& dpsi = recon.psi[idx].delta[i];
      const SpatialFn g = [&](double x) { return recon.fhat.delta_eval(j, i, x) + dpsi(x); };
      inner += estimator.estimate(recon.u[idx].delta[i], g) * l1[i];
    }
    out.per_interval[idx] = kappa0 * sigma(j, tmesh, bounds.gamma) * inner;
  });

  const double eta0 = estimator.estimate(
      traj.u0, [&](double x) { return recon.fhat.eval_on(1, x, tmesh.t(0)) + traj.psi0(x); });
  const double etaM = estimator.estimate(traj.u_at(M), [&](double x) {
    return recon.fhat.eval_on(M, x, tmesh.final_time()) + traj.psi_at(M)(x);
  });
  out.endpoints = kappa0 * (sigma(0, tmesh, bounds.gamma) * eta0 + etaM);

  double total = out.endpoints;
  for (double c : out.per_interval) total += c;
  out.total = total;
  return out;
}

EstimatorReport assemble_report(double init, const EtaF& f, const EtaT& t, const EtaEll& ell,
                                const TimeMesh& tmesh, double gamma) {
  EstimatorReport rep;
  rep.eta_init = init;
  rep.eta_f = f.total;
  rep.eta_t = t.total;
  rep.eta_ell = ell.total;
  rep.total = ((rep.eta_init + rep.eta_f) + rep.eta_t) + rep.eta_ell;
  rep.eta_f_per_interval = f.per_interval;
  rep.eta_t_per_interval = t.per_interval;
  rep.eta_ell_per_interval = ell.per_interval;
  rep.eta_ell_endpoints = ell.endpoints;
  rep.mu_used = t.mu_used;
  rep.sigma_used.resize(tmesh.intervals() + 1);
  for (int j = 0; j <= tmesh.intervals(); ++j) rep.sigma_used[j] = sigma(j, tmesh, gamma);
  return rep;
}

EstimatorReport estimate_error(const ProblemSpec& problem, const Trajectory& traj,
                               const ReconstructionSet& recon,
                               const EllipticEstimator& estimator) {
  const TimeMesh& tmesh = recon.fhat.tmesh();
  const double init = eta_init(problem, traj.u0, tmesh);
  const EtaF f = eta_f(problem, recon.fhat, *traj.mesh);
  const EtaT t = eta_t(recon, problem.green);
  const EtaEll ell = eta_ell_component(estimator, recon, traj, problem.green);
  return assemble_report(init, f, t, ell, tmesh, problem.green.gamma);
}

}  // namespace parex
