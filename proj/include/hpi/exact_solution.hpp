#pragma once

// Closed-form interface quantities of the planar Ising model with
// anisotropic couplings: Onsager dispersion, the saddle point of the
// tilted interface, surface tension and stiffness, and the limiting
// magnetization profile across a Dobrushin interface.
//
// Couplings are dimensionless (beta absorbed). k1 acts on horizontal bonds,
// k2 on vertical bonds; an interface at angle 0 runs horizontally.

#include <cstdint>

namespace hpi {

struct Couplings {
  double k1 = 0.0;
  double k2 = 0.0;

  /// Validated construction; throws DomainError unless k1, k2 > 0.
  static Couplings make(double k1, double k2);
  static Couplings isotropic(double k) { return make(k, k); }

  /// sinh(2k1) sinh(2k2) > 1, equivalently k2 > k1*.
  bool subcritical() const;
};

/// Kramers-Wannier dual: exp(2 k*) = coth k.
double dual_coupling(double k);

/// gamma(omega) >= 0 on the real axis.
double onsager_gamma(double omega, const Couplings& c);

/// gamma(i nu). Throws DomainError (bound = nu_max) for |nu| > nu_max.
double onsager_gamma_imag(double nu, const Couplings& c);

/// Root of cosh gamma(i nu) = 1 on nu >= 0, located by bisection.
double nu_max(const Couplings& c);

struct SaddleSolution {
  double theta = 0.0;
  double nu = 0.0;                ///< sign follows theta
  double gamma_at_saddle = 0.0;   ///< gamma(i nu)
  double gamma2_at_saddle = 0.0;  ///< second omega-derivative at i nu, > 0
};

/// Solves B sinh(nu) / sinh(gamma(i nu)) = tan(theta) for |theta| < pi/2.
SaddleSolution solve_saddle(double theta, const Couplings& c);

/// Residual B sinh(nu) - tan(theta) sinh(gamma(i nu)) of a saddle solution.
double saddle_residual(const SaddleSolution& s, const Couplings& c);

double surface_tension(double theta, const Couplings& c);

struct StiffnessRoutes {
  double identity = 0.0;           ///< sec^3(theta) / gamma2(i nu)
  double finite_difference = 0.0;  ///< tau + tau'' with Richardson-extrapolated tau''
};

inline constexpr double kStiffnessRelTol = 1e-6;
/// Stiffness is only evaluated for |theta| < pi/2 - kThetaMargin.
inline constexpr double kThetaMargin = 0.05;

StiffnessRoutes stiffness_routes(double theta, const Couplings& c);

/// tau + tau''. Both routes are evaluated; NumericalError if they disagree
/// beyond rel_tol. Returns the identity route.
double stiffness(double theta, const Couplings& c,
                 double rel_tol = kStiffnessRelTol);

struct ZScale {
  double stiffness_form = 0.0;  ///< z / alpha = [sec(theta) (tau + tau'')]^(1/2)
  double saddle_form = 0.0;     ///< z / alpha = sec(theta)^(3/2) / (2 gamma2)
};

/// z per unit alpha in both printed forms.
ZScale z_scale(double theta, const Couplings& c);

/// Canonical scaled variable z = alpha * z_scale(theta).stiffness_form.
double z_scaling(double alpha, double theta, const Couplings& c);

/// F(z) = (2/sqrt(pi)) int_z^inf exp(-u^2) du for z > 0, odd, F(0) = 0.
double profile_F(double z);

/// G(z) = (2/sqrt(pi)) int_0^z exp(-u^2) du, z >= 0.
double profile_G(double z);

/// (1 - (sinh 2k1 sinh 2k2)^-2)^(1/8), zero at and above criticality.
double spontaneous_magnetization(const Couplings& c);

/// Which phase sits on the positive side of the normal coordinate.
/// MinusOnPositiveSide reproduces -m* sgn(z) G(|z|) literally; the
/// simulated strip (plus above the interface) matches PlusOnPositiveSide.
enum class Orientation : int { MinusOnPositiveSide = -1, PlusOnPositiveSide = 1 };

double limiting_profile(double alpha, double theta, const Couplings& c,
                        Orientation orientation = Orientation::MinusOnPositiveSide);

/// -tau N / cos(theta) - 1/2 ln(N / cos(theta)); additive O(1) constant is 0.
double log_partition_asymptotic(std::int64_t n, double theta, const Couplings& c);

}  // namespace hpi
