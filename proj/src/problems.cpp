#include "wgporo/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wgporo {

LameParameters lame_from_E_lambda(double E, double lambda) {
  if (!(E > 0.0) || !(lambda > 0.0))
    throw std::invalid_argument("lame_from_E_lambda: E and lambda must be positive");
  // Positive root of 2*lambda*nu^2 + (E + lambda)*nu - lambda = 0, written
  // without cancellation.
  const double b = E + lambda;
  const double nu = 2.0 * lambda / (b + std::sqrt(b * b + 8.0 * lambda * lambda));
  const double mu = E / (2.0 * (1.0 + nu));
  return {mu, nu, mu / (lambda + mu)};
}

ProblemParams ProblemParams::make(int dim, double E, double lambda, double alpha, double c0,
                                  double kappa, double dt) {
  const LameParameters lame = lame_from_E_lambda(E, lambda);
  ProblemParams p;
  p.dim = dim;
  p.E = E;
  p.lambda = lambda;
  p.mu = lame.mu;
  p.nu = lame.nu;
  p.eps = lame.eps;
  p.alpha = alpha;
  p.c0 = c0;
  p.kappa = kappa;
  p.dt = dt;
  p.validate();
  return p;
}

void ProblemParams::validate() const {
  if (dim != 2 && dim != 3) throw std::invalid_argument("params: dim must be 2 or 3");
  if (!(mu > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("params: mu, lambda > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("params: eps must lie in (0,1)");
  if (!(alpha > 0.0)) throw std::invalid_argument("params: alpha must be positive");
  if (c0 < 0.0) throw std::invalid_argument("params: c0 must be nonnegative");
  if (!(kappa > 0.0)) throw std::invalid_argument("params: kappa must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("params: dt must be positive");
  // nu = lambda / (2 (lambda + mu)) is equivalent to the lambda(E, nu)
  // relation and stays well conditioned as nu -> 1/2.
  const double nu_lm = lambda / (2.0 * (lambda + mu));
  const double mu_nu = E / (2.0 * (1.0 + nu));
  if (std::abs(nu_lm - nu) > 1e-10 * nu || std::abs(mu_nu - mu) > 1e-10 * mu)
    throw std::invalid_argument("params: Lame constants inconsistent with (E, nu)");
  if (std::abs(eps - mu / (lambda + mu)) > 1e-12 * eps)
    throw std::invalid_argument("params: eps inconsistent with (lambda, mu)");
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::elasticity2d: return "elasticity2d";
    case ProblemKind::poro2d: return "poro2d";
    case ProblemKind::poro3d: return "poro3d";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(std::string_view name) {
  if (name == "elasticity2d" || name == "elasticity") return ProblemKind::elasticity2d;
  if (name == "poro2d" || name == "poro2") return ProblemKind::poro2d;
  if (name == "poro3d" || name == "poro3") return ProblemKind::poro3d;
  throw std::invalid_argument("unknown problem kind: " + std::string(name));
}

namespace {

using std::cos;
using std::sin;
constexpr double pi = std::numbers::pi;

ProblemInstance elasticity2d(const ProblemParams& p) {
  const double mu = p.mu, lam = p.lambda;
  ProblemInstance inst{ProblemKind::elasticity2d, p, {}, {}, {}, {}, {}, {}};
  inst.exact_displacement = [lam](const Point& x, double) -> Point {
    return {sin(x[0]) * sin(x[1]) + x[0] / lam, cos(x[0]) * cos(x[1]) + x[1] / lam, 0.0};
  };
  inst.forcing = [mu](const Point& x, double) -> Point {
    return {2.0 * mu * sin(x[0]) * sin(x[1]), 2.0 * mu * cos(x[0]) * cos(x[1]), 0.0};
  };
  inst.displacement_bc = inst.exact_displacement;
  return inst;
}

ProblemInstance poro2d(const ProblemParams& p) {
  const double mu = p.mu, lam = p.lambda, al = p.alpha, c0 = p.c0;
  const double lm = lam + mu;
  ProblemInstance inst{ProblemKind::poro2d, p, {}, {}, {}, {}, {}, {}};
  inst.exact_displacement = [lm](const Point& x, double t) -> Point {
    const double sxy = sin(pi * x[0]) * sin(pi * x[1]) / lm;
    return {t * ((-1.0 + cos(2 * pi * x[0])) * sin(2 * pi * x[1]) + sxy),
            t * (sin(2 * pi * x[0]) * (1.0 - cos(2 * pi * x[1])) + sxy), 0.0};
  };
  inst.exact_pressure = [](const Point& x, double t) {
    return -t * sin(pi * x[0]) * sin(pi * x[1]);
  };
  inst.forcing = [mu, lm, al](const Point& x, double t) -> Point {
    const double X = x[0], Y = x[1];
    const double pi2 = pi * pi;
    const double f1 = -8 * pi2 * mu * cos(2 * pi * X) * sin(2 * pi * Y) -
                      2 * pi2 * mu / lm * sin(pi * X) * sin(pi * Y) +
                      4 * pi2 * mu * sin(2 * pi * Y) + pi2 * cos(pi * X + pi * Y) +
                      al * pi * cos(pi * X) * sin(pi * Y);
    const double f2 = 8 * pi2 * mu * sin(2 * pi * X) * cos(2 * pi * Y) -
                      2 * pi2 * mu / lm * sin(pi * X) * sin(pi * Y) -
                      4 * pi2 * mu * sin(2 * pi * X) + pi2 * cos(pi * X + pi * Y) +
                      al * pi * sin(pi * X) * cos(pi * Y);
    return {-t * f1, -t * f2, 0.0};
  };
  // Transcribed as published; its diffusion term has the opposite sign
  // of what the exact pair above produces (see tests/unit/test_problems).
  inst.source = [c0, lm, al](const Point& x, double t) {
    const double X = x[0], Y = x[1];
    return -c0 * sin(pi * X) * sin(pi * Y) + pi * al / lm * sin(pi * X + pi * Y) +
           t * (2 * pi * pi * sin(pi * X) * sin(pi * Y));
  };
  inst.displacement_bc = inst.exact_displacement;
  inst.pressure_bc = inst.exact_pressure;
  return inst;
}

ProblemInstance poro3d(const ProblemParams& p) {
  const double mu = p.mu, lam = p.lambda, al = p.alpha, c0 = p.c0;
  const double lm = lam + mu;
  ProblemInstance inst{ProblemKind::poro3d, p, {}, {}, {}, {}, {}, {}};
  inst.forcing = [mu, lam, lm, al](const Point& x, double t) -> Point {
    const double pi2 = pi * pi;
    const double sx = sin(pi * x[0]), sy = sin(pi * x[1]), sz = sin(pi * x[2]);
    const double cx = cos(pi * x[0]), cy = cos(pi * x[1]), cz = cos(pi * x[2]);
    const double s2x = sin(2 * pi * x[0]), s2y = sin(2 * pi * x[1]), s2z = sin(2 * pi * x[2]);
    const double c2x = cos(2 * pi * x[0]), c2y = cos(2 * pi * x[1]), c2z = cos(2 * pi * x[2]);
    const double g = (4 * mu + lam) / lm * sx * sy * sz * pi2;
    const double f1 = 4 * mu * c2x * s2y * s2z * pi2 + g - cx * cy * sz * pi2 - cx * sy * cz * pi2 +
                      8 * pi2 * mu * (-1 + c2x) * s2y * s2z + al * pi * cx * sy * sz;
    const double f2 = -pi2 * cx * cy * sz + g - sx * cy * cz * pi2 +
                      16 * pi2 * mu * s2x * (1 - c2y) * s2z - 8 * pi2 * mu * s2x * c2y * s2z +
                      al * pi * sx * cy * sz;
    const double f3 = g + 4 * pi2 * mu * s2x * s2y * c2z - cx * sy * cz * pi2 - sx * cy * cz * pi2 +
                      8 * pi2 * mu * (-1 + c2z) * s2x * s2y + al * pi * sx * sy * cz;
    return {t * f1, t * f2, t * f3};
  };
  inst.source = [c0, lm, al](const Point& x, double t) {
    const double sx = sin(pi * x[0]), sy = sin(pi * x[1]), sz = sin(pi * x[2]);
    const double cx = cos(pi * x[0]), cy = cos(pi * x[1]), cz = cos(pi * x[2]);
    return al * pi / lm * (cx * sy * sz + sx * cy * sz + sx * sy * cz) +
           (3 * pi * pi * t + c0) * sx * sy * sz;
  };
  inst.displacement_bc = [](const Point&, double) -> Point { return {0.0, 0.0, 0.0}; };
  inst.pressure_bc = [](const Point&, double) { return 0.0; };
  return inst;
}

}  // namespace

ProblemInstance make_problem(ProblemKind kind, const ProblemParams& params) {
  params.validate();
  switch (kind) {
    case ProblemKind::elasticity2d:
      if (params.dim != 2) throw std::invalid_argument("elasticity2d requires dim = 2");
      return elasticity2d(params);
    case ProblemKind::poro2d:
      if (params.dim != 2) throw std::invalid_argument("poro2d requires dim = 2");
      return poro2d(params);
    case ProblemKind::poro3d:
      if (params.dim != 3) throw std::invalid_argument("poro3d requires dim = 3");
      return poro3d(params);
  }
  throw std::invalid_argument("unknown problem kind");
}

}  // namespace wgporo
