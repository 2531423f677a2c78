#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>

namespace qbgk {

using Vec3 = std::array<double, 3>;

/// Quantum statistics of a species; the underlying value is tau.
enum class Statistics : int { Fermion = 1, Classical = 0, Boson = -1 };

constexpr int tau(Statistics s) { return static_cast<int>(s); }

std::string_view to_string(Statistics s);
/// Accepts "fermion", "boson", "classical" (and the one-letter forms f/b/c).
Statistics statistics_from_string(std::string_view name);

/// Collision-invariant vector (1, p, |p|^2/(2m)).
struct MomentVector {
  std::array<double, 5> v;

  static MomentVector at(const Vec3& p, double mass) {
    return {{1.0, p[0], p[1], p[2],
             (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (2.0 * mass)}};
  }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
};

/// Pointwise kernels of the quantum equilibrium written in terms of the
/// exponent x = alpha . p_k(p), i.e. K = 1 / (exp(-x) + tau).
namespace kernels {

/// K(x). Throws FeasibilityError for bosons with x >= 0.
double equilibrium(double exponent, Statistics s);

/// w(K(x)) expressed directly in x (numerically stable in the tails).
double potential_from_exponent(double exponent, Statistics s);

/// dK/dx, which equals K for classical particles and K^2 exp(-x) otherwise.
double hessian_weight_from_exponent(double exponent, Statistics s);

}  // namespace kernels

/// 1 / (exp(-alpha . p_k(p)) + tau).
double eval_equilibrium(const std::array<double, 5>& alpha, const Vec3& p,
                        double mass, Statistics s);

/// h_tau(z) = z ln z + tau^{-1} (1 - tau z) ln(1 - tau z); z ln z for tau = 0.
/// z = 0 is accepted as the continuous limit.
double entropy_integrand(double z, Statistics s);

/// h_tau'(z): ln(z / (1 - tau z)), or ln z + 1 for classical particles.
double entropy_derivative(double z, Statistics s);

/// w(K): -K (classical), log(1 - K) (fermion), -log(1 + K) (boson).
double potential_integrand(double K, Statistics s);

/// zeta(K, tau): K for tau = 0, K^2 exp(-exponent) for tau = +-1.
double hessian_weight(double K, double exponent, Statistics s);

/// (eta_tau(c), eta^E_tau(c)): integrals of 1/(e^{|p|^2+c}+tau) and
/// |p|^2/(e^{|p|^2+c}+tau) over R^3.
std::pair<double, double> eta_integrals(double c, Statistics s);

}  // namespace qbgk
