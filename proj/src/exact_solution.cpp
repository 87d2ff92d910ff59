#include "hpi/exact_solution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hpi/errors.hpp"

namespace hpi {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void require_valid(const Couplings& c) {
  if (!(c.k1 > 0.0) || !std::isfinite(c.k1)) throw DomainError("k1", "must be finite and positive");
  if (!(c.k2 > 0.0) || !std::isfinite(c.k2)) throw DomainError("k2", "must be finite and positive");
}

void require_subcritical(const Couplings& c) {
  require_valid(c);
  if (!c.subcritical()) {
    throw DomainError("couplings", "couplings are not subcritical (k2 <= k1*)");
  }
}

// cosh(gamma) - 1 written without cancellation:
//   D(nu)    - 1 = 2 sinh^2((b-a)/2) - 2B sinh^2(nu/2)      (omega = i nu)
//   D(omega) - 1 = 2 sinh^2((b-a)/2) + 2B sin^2(omega/2)    (real omega)
// with a = 2 k1*, b = 2 k2, B = sinh a sinh b.
struct Dispersion {
  double a;
  double b;
  double big_b;
  double s0;

  explicit Dispersion(const Couplings& c)
      : a(2.0 * dual_coupling(c.k1)),
        b(2.0 * c.k2),
        big_b(std::sinh(a) * std::sinh(b)),
        s0(std::sinh(0.5 * (b - a))) {}

  double delta_imag(double nu) const {
    const double sh = std::sinh(0.5 * nu);
    return 2.0 * s0 * s0 - 2.0 * big_b * sh * sh;
  }

  double delta_real(double omega) const {
    const double sn = std::sin(0.5 * omega);
    return 2.0 * s0 * s0 + 2.0 * big_b * sn * sn;
  }

  // Slack allowed for rounding when delta should be exactly zero.
  double delta_slack() const { return 16.0 * std::numeric_limits<double>::epsilon() * (2.0 * s0 * s0 + 1e-300); }
};

// arccosh(1 + delta) and sinh of it, accurate for small delta.
double acosh1p(double delta) { return std::log1p(delta + std::sqrt(delta * (delta + 2.0))); }
double sinh_of_acosh1p(double delta) { return std::sqrt(delta * (delta + 2.0)); }

double gamma_imag_unchecked(const Dispersion& d, double nu) {
  return acosh1p(std::max(0.0, d.delta_imag(nu)));
}

double nu_max_impl(const Dispersion& d) {
  double lo = 0.0;
  double hi = 1.0;
  while (d.delta_imag(hi) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e3) throw NumericalError("nu_max: no sign change of cosh(gamma(i nu)) - 1 below nu = 1e3");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (d.delta_imag(mid) >= 0.0 ? lo : hi) = mid;
  }
  return lo;
}

// Second omega-derivative of gamma at omega = i nu, from the closed form
// d^2/dnu^2 arccosh(D(nu)) with the sign flip of omega = i nu.
double gamma2_closed_form(const Dispersion& d, double nu) {
  const double delta = std::max(0.0, d.delta_imag(nu));
  const double sg = sinh_of_acosh1p(delta);
  const double sh = std::sinh(nu);
  return d.big_b * std::cosh(nu) / sg + d.big_b * d.big_b * sh * sh * (1.0 + delta) / (sg * sg * sg);
}

double tau_of_saddle(const SaddleSolution& s) {
  return std::cos(s.theta) * s.gamma_at_saddle + std::sin(s.theta) * s.nu;
}

}  // namespace

Couplings Couplings::make(double k1, double k2) {
  Couplings c{k1, k2};
  require_valid(c);
  return c;
}

bool Couplings::subcritical() const {
  return std::sinh(2.0 * k1) * std::sinh(2.0 * k2) > 1.0;
}

double dual_coupling(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("k", "coupling must be finite and positive");
  // log(tanh k) loses digits once tanh k is close to 1.
  if (k < 0.5) return -0.5 * std::log(std::tanh(k));
  return -0.5 * std::log1p(-2.0 / (std::exp(2.0 * k) + 1.0));
}

double onsager_gamma(double omega, const Couplings& c) {
  require_valid(c);
  const Dispersion d(c);
  return acosh1p(d.delta_real(omega));
}

double onsager_gamma_imag(double nu, const Couplings& c) {
  require_valid(c);
  const Dispersion d(c);
  const double delta = d.delta_imag(nu);
  if (delta < -d.delta_slack()) {
    const double bound = nu_max_impl(d);
    std::ostringstream msg;
    msg << "|nu| = " << std::abs(nu) << " exceeds nu_max = " << bound;
    throw DomainError("nu", msg.str(), bound);
  }
  return acosh1p(std::max(0.0, delta));
}

double nu_max(const Couplings& c) {
  require_valid(c);
  return nu_max_impl(Dispersion(c));
}

SaddleSolution solve_saddle(double theta, const Couplings& c) {
  if (!std::isfinite(theta) || std::abs(theta) >= kHalfPi) {
    throw DomainError("theta", "saddle point requires |theta| < pi/2");
  }
  require_subcritical(c);
  const Dispersion d(c);

  SaddleSolution s;
  s.theta = theta;
  if (theta == 0.0) {
    s.gamma_at_saddle = gamma_imag_unchecked(d, 0.0);
    s.gamma2_at_saddle = gamma2_closed_form(d, 0.0);
    return s;
  }

  const double t = std::tan(std::abs(theta));
  auto g = [&](double nu) {
    const double delta = std::max(0.0, d.delta_imag(nu));
    return d.big_b * std::sinh(nu) - t * sinh_of_acosh1p(delta);
  };

  const double numax = nu_max_impl(d);
  double lo = 0.0;
  double hi = numax;
  double glo = g(lo);
  double ghi = g(hi);
  if (!(glo < 0.0 && ghi > 0.0)) {
    std::ostringstream msg;
    msg << "solve_saddle: root not bracketed on [0, " << numax << "] for theta = " << theta
        << " (g(0) = " << glo << ", g(nu_max) = " << ghi << ")";
    throw NumericalError(msg.str());
  }

  // One false-position step, then plain bisection down to adjacent doubles.
  const double x = lo - glo * (hi - lo) / (ghi - glo);
  if (x > lo && x < hi) {
    const double gx = g(x);
    if (gx < 0.0) { lo = x; glo = gx; } else { hi = x; ghi = gx; }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm < 0.0) { lo = mid; glo = gm; } else { hi = mid; ghi = gm; }
  }
  const double nu = (std::abs(glo) <= std::abs(ghi)) ? lo : hi;

  s.nu = std::copysign(nu, theta);
  s.gamma_at_saddle = gamma_imag_unchecked(d, nu);
  s.gamma2_at_saddle = gamma2_closed_form(d, nu);

  // gamma2 blows up at nu_max, so the step shrinks with the distance to it.
  const double h = std::min(1e-5, 1e-3 * (numax - nu));
  if (h > 1e-9) {
    const double fd = -(gamma_imag_unchecked(d, nu + h) - 2.0 * s.gamma_at_saddle +
                        gamma_imag_unchecked(d, nu - h)) / (h * h);
    if (std::abs(fd - s.gamma2_at_saddle) > 1e-4 * std::abs(s.gamma2_at_saddle) + 1e-5) {
      std::ostringstream msg;
      msg << "solve_saddle: gamma2 closed form " << s.gamma2_at_saddle
          << " disagrees with central difference " << fd << " at nu = " << nu;
      throw NumericalError(msg.str());
    }
  }
  return s;
}

double saddle_residual(const SaddleSolution& s, const Couplings& c) {
  const Dispersion d(c);
  const double delta = std::max(0.0, d.delta_imag(s.nu));
  return d.big_b * std::sinh(s.nu) - std::tan(s.theta) * sinh_of_acosh1p(delta);
}

double surface_tension(double theta, const Couplings& c) {
  return tau_of_saddle(solve_saddle(theta, c));
}

StiffnessRoutes stiffness_routes(double theta, const Couplings& c) {
  if (!std::isfinite(theta) || std::abs(theta) >= kHalfPi - kThetaMargin) {
    throw DomainError("theta", "stiffness requires |theta| < pi/2 - margin", kHalfPi - kThetaMargin);
  }
  const SaddleSolution s = solve_saddle(theta, c);
  const double sec = 1.0 / std::cos(theta);

  StiffnessRoutes r;
  r.identity = sec * sec * sec / s.gamma2_at_saddle;

  const double tau0 = tau_of_saddle(s);
  auto second_difference = [&](double h) {
    return (surface_tension(theta + h, c) - 2.0 * tau0 + surface_tension(theta - h, c)) / (h * h);
  };
  constexpr double h = 2e-3;
  const double coarse = second_difference(h);
  const double fine = second_difference(0.5 * h);
  r.finite_difference = tau0 + (4.0 * fine - coarse) / 3.0;
  return r;
}

double stiffness(double theta, const Couplings& c, double rel_tol) {
  const StiffnessRoutes r = stiffness_routes(theta, c);
  if (std::abs(r.finite_difference - r.identity) > rel_tol * std::abs(r.identity)) {
    std::ostringstream msg;
    msg << "stiffness: identity route " << r.identity << " and finite-difference route "
        << r.finite_difference << " disagree at theta = " << theta;
    throw NumericalError(msg.str());
  }
  return r.identity;
}

ZScale z_scale(double theta, const Couplings& c) {
  const SaddleSolution s = solve_saddle(theta, c);
  const double sec = 1.0 / std::cos(theta);
  const double stiff = sec * sec * sec / s.gamma2_at_saddle;
  return {std::sqrt(sec * stiff), std::pow(sec, 1.5) / (2.0 * s.gamma2_at_saddle)};
}

double z_scaling(double alpha, double theta, const Couplings& c) {
  return alpha * z_scale(theta, c).stiffness_form;
}

namespace {

constexpr double kQuadTol = 1e-14;

double gaussian_integral(double from, double to) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [](double u) { return std::exp(-u * u); };
  return gauss_kronrod<double, 15>::integrate(f, from, to, 20, kQuadTol);
}

// exp(-u^2) is below 1e-60 of its value at z once u > z + 12.
constexpr double kTailSpan = 12.0;
constexpr double kTwoOverSqrtPi = 2.0 / 1.7724538509055160273;

}  // namespace

double profile_F(double z) {
  if (z == 0.0) return 0.0;
  const double a = std::abs(z);
  const double value = kTwoOverSqrtPi * gaussian_integral(a, a + kTailSpan);
  return z > 0.0 ? value : -value;
}

double profile_G(double z) {
  if (!(z >= 0.0)) throw DomainError("z", "G is defined for z >= 0; apply sgn(z) at the call site");
  if (z == 0.0) return 0.0;
  if (z > 6.0) return 1.0 - profile_F(z);
  return kTwoOverSqrtPi * gaussian_integral(0.0, z);
}

double spontaneous_magnetization(const Couplings& c) {
  require_valid(c);
  const double p = std::sinh(2.0 * c.k1) * std::sinh(2.0 * c.k2);
  if (!(p > 1.0)) return 0.0;
  return std::pow(1.0 - 1.0 / (p * p), 0.125);
}

double limiting_profile(double alpha, double theta, const Couplings& c, Orientation orientation) {
  const double z = z_scaling(alpha, theta, c);
  if (z == 0.0) return 0.0;
  const double sign = static_cast<double>(static_cast<int>(orientation));
  return sign * spontaneous_magnetization(c) * std::copysign(profile_G(std::abs(z)), z);
}

double log_partition_asymptotic(std::int64_t n, double theta, const Couplings& c) {
  if (n < 1) throw DomainError("N", "interface length must be at least 1");
  const double length = static_cast<double>(n) / std::cos(theta);
  return -surface_tension(theta, c) * length - 0.5 * std::log(length);
}

}  // namespace hpi
