#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "dmv/relenergy.hpp"

namespace dmv {
namespace {

struct Candidate {
  double ratio = std::numeric_limits<double>::infinity();
  double rho_t = 0, theta_t = 0, rho = 0, theta = 0;
  const char* set = "";
};

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  return v;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (lo == hi) return {lo};
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
  return v;
}

void sorted_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct Ref {
  double rho, theta, S, P, dr, ds;
};

// Reference temperatures need not respect the c_star floor.
double reference_entropy(double rho, double theta, const FluidParams& p) {
  return rho / (p.gamma - 1.0) * (std::log(p.a) + p.gamma * std::log(theta));
}

Ref make_ref(double rho, double theta, const FluidParams& p) {
  Ref r{rho, theta, reference_entropy(rho, theta, p), 0, 0, 0};
  r.P = thermo::pressure_potential_rho_s(rho, r.S, p);
  r.dr = thermo::dP_drho(rho, r.S, p);
  r.ds = thermo::dP_dS(rho, r.S, p);
  return r;
}

// Ratios of F to the demanded bound at one sample; the S formula is also
// applied on the outer boundary of R, where it is the limit from outside.
void consider(const CoercivitySets& sets, const Ref& r, double rho_t, double theta_t, double S_t, double P_t,
              bool on_outer_edge, double radius, const FluidParams& p, Candidate& best) {
  const double drho = rho_t - r.rho, dS = S_t - r.S;
  const double F = P_t - r.dr * drho - r.ds * dS - r.P;
  auto take = [&](double ratio, const char* set) {
    if (ratio < best.ratio) best = {ratio, rho_t, theta_t, r.rho, r.theta, set};
  };
  const double growth = 1.0 + std::pow(rho_t * theta_t, p.gamma);
  if (sets.in_R(rho_t, theta_t)) {
    const double q = drho * drho + dS * dS;
    if (std::sqrt(q) > radius * (1.0 + std::abs(r.rho) + std::abs(r.S))) take(F / q, "R");
    if (on_outer_edge) take(F / growth, "S");
  } else {
    take(F / growth, "S");
  }
}

Candidate level_minimum(const FluidParams& p, const ReferenceBox& box, const CoercivitySampling& s,
                        const CoercivitySets& sets, long& samples) {
  const double rho_top = 10.0 * sets.c2() * box.rho_hi, theta_top = 10.0 * sets.c3() * box.theta_hi;
  std::vector<double> rho_t = logspace(1e-4 * box.rho_lo, rho_top, s.n_rho);
  std::vector<double> theta_t = logspace(p.c_star, theta_top, s.n_theta);
  const std::vector<double> ref_rho = linspace(box.rho_lo, box.rho_hi, s.n_ref);
  const std::vector<double> ref_theta = linspace(box.theta_lo, box.theta_hi, s.n_ref);
  rho_t.push_back(0.0);
  rho_t.push_back(sets.c1() * box.rho_lo);
  rho_t.push_back(sets.c2() * box.rho_hi);
  rho_t.insert(rho_t.end(), ref_rho.begin(), ref_rho.end());
  theta_t.push_back(sets.c3() * box.theta_hi);
  for (double th : ref_theta)
    if (th >= p.c_star) theta_t.push_back(th);
  sorted_unique(rho_t);
  sorted_unique(theta_t);

  const std::size_t nr = rho_t.size(), nt = theta_t.size();
  std::vector<double> S_t(nr * nt), P_t(nr * nt);
  for (std::size_t a = 0; a < nr; ++a) {
    for (std::size_t b = 0; b < nt; ++b) {
      S_t[a * nt + b] = thermo::entropy(rho_t[a], theta_t[b], p);
      P_t[a * nt + b] = thermo::pressure_potential_rho_s(rho_t[a], S_t[a * nt + b], p);
    }
  }

  std::vector<Ref> refs;
  for (double rt : ref_theta)
    for (double rr : ref_rho) refs.push_back(make_ref(rr, rt, p));

  std::vector<Candidate> per_ref(refs.size());
  const std::ptrdiff_t nref = static_cast<std::ptrdiff_t>(refs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < nref; ++k) {
    const Ref& r = refs[k];
    Candidate best;
    // Limit of F / (|d rho|^2 + |d S|^2) at coincidence.
    const double h = 0.5 * thermo::potential_hessian(r.rho, r.S, p).min_eigenvalue();
    if (h < best.ratio) best = {h, r.rho, r.theta, r.rho, r.theta, "hessian"};
    for (std::size_t a = 0; a < nr; ++a) {
      const bool rho_edge = rho_t[a] == sets.c1() * box.rho_lo || rho_t[a] == sets.c2() * box.rho_hi;
      for (std::size_t b = 0; b < nt; ++b) {
        const bool edge = rho_edge || theta_t[b] == sets.c3() * box.theta_hi;
        consider(sets, r, rho_t[a], theta_t[b], S_t[a * nt + b], P_t[a * nt + b], edge, s.coincidence_radius, p,
                 best);
      }
    }
    per_ref[k] = best;
  }
  samples += static_cast<long>(nr * nt * refs.size());
  Candidate best;
  for (const Candidate& c : per_ref)
    if (c.ratio < best.ratio) best = c;
  return best;
}

}  // namespace

CoercivityCertificate verify_coercivity(const FluidParams& p, const ReferenceBox& box, const CoercivitySampling& s) {
  p.validate();
  if (!(box.rho_lo > 0.0) || !(box.rho_lo <= box.rho_hi))
    throw std::invalid_argument("density bounds need 0 < rho_lo <= rho_hi");
  if (!(box.theta_lo > 0.0) || !(box.theta_lo <= box.theta_hi))
    throw std::invalid_argument("theta bounds need 0 < theta_lo <= theta_hi");
  if (!(box.theta_hi >= p.c_star)) throw std::invalid_argument("c_star exceeds theta_hi: the near set would be empty");
  if (s.n_rho < 2 || s.n_theta < 2 || s.n_ref < 1 || s.max_level < 1)
    throw std::invalid_argument("sampling grid too small");

  CoercivityCertificate cert;
  cert.params = p;
  cert.box = box;
  Candidate best;
  best.ratio = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= s.max_level; ++k) {
    const double c1 = std::ldexp(1.0, -k), c2 = std::ldexp(1.0, k);
    const double c3 = std::max(c2, p.c_star / box.theta_hi);
    const CoercivitySets sets(p, box, c1, c2, c3);
    const Candidate c = level_minimum(p, box, s, sets, cert.samples);
    if (c.ratio > best.ratio) {
      best = c;
      cert.level = k;
      cert.c1 = c1;
      cert.c2 = c2;
      cert.c3 = c3;
    }
  }
  cert.c4 = best.ratio;
  cert.min_rho_t = best.rho_t;
  cert.min_theta_t = best.theta_t;
  cert.min_rho = best.rho;
  cert.min_theta = best.theta;
  cert.min_set = best.set;

  if (!(cert.c4 > 0.0)) {
    cert.message = "no level produced a positive lower bound";
    return cert;
  }

  // Independent random check of the certified constants.
  const CoercivitySets sets(p, box, cert.c1, cert.c2, cert.c3);
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lr_lo = std::log(1e-4 * box.rho_lo), lr_hi = std::log(10.0 * cert.c2 * box.rho_hi);
  const double lt_lo = std::log(p.c_star), lt_hi = std::log(10.0 * cert.c3 * box.theta_hi);
  for (long n = 0; n < s.fresh; ++n) {
    const double rho_t = std::exp(lr_lo + (lr_hi - lr_lo) * unit(rng));
    const double theta_t = std::exp(lt_lo + (lt_hi - lt_lo) * unit(rng));
    const double rho = box.rho_lo + (box.rho_hi - box.rho_lo) * unit(rng);
    const double theta = box.theta_lo + (box.theta_hi - box.theta_lo) * unit(rng);
    const double F = relative_pressure_potential(rho_t, thermo::entropy(rho_t, theta_t, p), rho,
                                                 reference_entropy(rho, theta, p), p);
    const double bound = coercivity_bound(sets, rho_t, theta_t, rho, theta, p);
    ++cert.fresh_checked;
    if (bound > 0.0 && F < cert.c4 * bound) {
      if (cert.fresh_violations == 0) {
        cert.viol_rho_t = rho_t;
        cert.viol_theta_t = theta_t;
        cert.viol_rho = rho;
        cert.viol_theta = theta;
        cert.viol_ratio = F / bound;
      }
      ++cert.fresh_violations;
    }
  }
  cert.passed = cert.fresh_violations == 0;
  if (!cert.passed) cert.message = "fresh samples violate the sampled bound";
  return cert;
}

}  // namespace dmv
