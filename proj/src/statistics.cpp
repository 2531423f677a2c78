#include "qbgk/statistics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "qbgk/errors.hpp"

namespace qbgk {

std::string_view to_string(Statistics s) {
  switch (s) {
    case Statistics::Fermion:
      return "fermion";
    case Statistics::Classical:
      return "classical";
    case Statistics::Boson:
      return "boson";
  }
  return "unknown";
}

Statistics statistics_from_string(std::string_view name) {
  if (name == "fermion" || name == "f" || name == "+1" || name == "1") return Statistics::Fermion;
  if (name == "boson" || name == "b" || name == "-1") return Statistics::Boson;
  if (name == "classical" || name == "c" || name == "0") return Statistics::Classical;
  throw ConfigError("unknown statistics '" + std::string(name) + "'");
}

namespace kernels {

double equilibrium(double x, Statistics s) {
  switch (s) {
    case Statistics::Classical:
      return std::exp(x);
    case Statistics::Fermion:
      // logistic function, evaluated without overflow for large |x|
      return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    case Statistics::Boson:
      if (!(x < 0.0)) throw FeasibilityError("boson equilibrium requires alpha.p < 0");
      return 1.0 / std::expm1(-x);
  }
  return 0.0;
}

double potential_from_exponent(double x, Statistics s) {
  switch (s) {
    case Statistics::Classical:
      return -std::exp(x);
    case Statistics::Fermion:
      // log(1 - K) = -softplus(x)
      return -(std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))));
    case Statistics::Boson:
      if (!(x < 0.0)) throw FeasibilityError("boson equilibrium requires alpha.p < 0");
      // -log(1 + K) = log(1 - e^x)
      return std::log1p(-std::exp(x));
  }
  return 0.0;
}

double hessian_weight_from_exponent(double x, Statistics s) {
  const double K = equilibrium(x, s);
  switch (s) {
    case Statistics::Classical:
      return K;
    case Statistics::Fermion:
      return K * (1.0 - K);
    case Statistics::Boson:
      return K * (1.0 + K);
  }
  return 0.0;
}

}  // namespace kernels

double eval_equilibrium(const std::array<double, 5>& alpha, const Vec3& p, double mass,
                        Statistics s) {
  const auto mv = MomentVector::at(p, mass);
  double x = 0.0;
  for (int i = 0; i < 5; ++i) x += alpha[static_cast<std::size_t>(i)] * mv[i];
  return kernels::equilibrium(x, s);
}

double entropy_integrand(double z, Statistics s) {
  const int t = tau(s);
  if (!(z >= 0.0) || (t == 1 && !(z < 1.0)))
    throw DomainError("entropy integrand evaluated outside its domain (z = " +
                      std::to_string(z) + ", tau = " + std::to_string(t) + ")");
  const double zlogz = z > 0.0 ? z * std::log(z) : 0.0;
  if (t == 0) return zlogz;
  const double one_minus = 1.0 - t * z;
  return zlogz + one_minus * std::log(one_minus) / t;
}

double entropy_derivative(double z, Statistics s) {
  const int t = tau(s);
  if (!(z > 0.0) || (t == 1 && !(z < 1.0)))
    throw DomainError("entropy derivative evaluated outside its domain");
  if (t == 0) return std::log(z) + 1.0;
  return std::log(z / (1.0 - t * z));
}

double potential_integrand(double K, Statistics s) {
  switch (s) {
    case Statistics::Classical:
      return -K;
    case Statistics::Fermion:
      if (!(K < 1.0) || K < 0.0) throw DomainError("fermion potential needs 0 <= K < 1");
      return std::log1p(-K);
    case Statistics::Boson:
      if (K < 0.0) throw DomainError("boson potential needs K >= 0");
      return -std::log1p(K);
  }
  return 0.0;
}

double hessian_weight(double K, double exponent, Statistics s) {
  if (s == Statistics::Classical) return K;
  return K * K * std::exp(-exponent);
}

std::pair<double, double> eta_integrals(double c, Statistics s) {
  const int t = tau(s);
  if (t == -1 && !(c > 0.0)) throw DomainError("eta integrals for bosons need c > 0");
  if (!std::isfinite(c)) throw DomainError("eta integrals need a finite c");

  using boost::math::quadrature::gauss_kronrod;
  auto occupation = [c, t](double r) {
    const double x = r * r + c;
    if (t == 0) return std::exp(-x);
    if (t == 1) return x > 0.0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (std::exp(x) + 1.0);
    return 1.0 / std::expm1(x);
  };
  auto density = [&](double r) { return r * r * occupation(r); };
  auto energy = [&](double r) { return r * r * r * r * occupation(r); };

  // The integrand is negligible (< e^-40 relative) beyond r^2 = max(-c, 0) + 40.
  const double fermi = std::sqrt(std::max(-c, 0.0));
  const double cutoff = std::sqrt(fermi * fermi + 40.0);
  auto integrate = [&](auto&& f) {
    double sum = 0.0;
    double lo = 0.0;
    // Split at the Fermi edge so the sharp step of a degenerate fermion sits on
    // a panel boundary.
    for (double hi : {std::max(fermi - 2.0, 0.0), fermi + 2.0, cutoff}) {
      if (hi <= lo) continue;
      sum += gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-15);
      lo = hi;
    }
    return sum;
  };
  constexpr double four_pi = 4.0 * std::numbers::pi;
  return {four_pi * integrate(density), four_pi * integrate(energy)};
}

}  // namespace qbgk
