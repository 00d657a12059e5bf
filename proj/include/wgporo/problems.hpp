#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "wgporo/mesh.hpp"

namespace wgporo {

struct LameParameters {
  double mu;
  double nu;
  double eps;  ///< mu / (lambda + mu)
};

/// Shear modulus, Poisson ratio and locking parameter from (E, lambda).
LameParameters lame_from_E_lambda(double E, double lambda);

/// Physical and discretization scalars. Build with `make`, which derives
/// mu, nu and eps from (E, lambda).
struct ProblemParams {
  int dim = 2;
  double E = 1.0;
  double lambda = 1.0;
  double mu = 0.0;
  double nu = 0.0;
  double eps = 0.0;
  double alpha = 1.0;  ///< Biot-Willis constant
  double c0 = 0.0;     ///< storage capacity
  double kappa = 1.0;  ///< scalar permeability
  double dt = 1e-3;

  static ProblemParams make(int dim, double E, double lambda, double alpha, double c0,
                            double kappa, double dt);
  void validate() const;
};

enum class ProblemKind { elasticity2d, poro2d, poro3d };

std::string_view to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(std::string_view name);

using VectorField = std::function<Point(const Point&, double)>;
using ScalarField = std::function<double(const Point&, double)>;

/// Manufactured problem: exact fields (where known), forcing, source and
/// Dirichlet data, all as functions of (x, t).
struct ProblemInstance {
  ProblemKind kind;
  ProblemParams params;
  VectorField exact_displacement;  ///< empty when no closed form is used
  ScalarField exact_pressure;      ///< empty for pure elasticity and poro3d
  VectorField forcing;
  ScalarField source;              ///< empty for pure elasticity
  VectorField displacement_bc;
  ScalarField pressure_bc;         ///< empty for pure elasticity

  bool has_pressure() const { return kind != ProblemKind::elasticity2d; }
};

ProblemInstance make_problem(ProblemKind kind, const ProblemParams& params);

}  // namespace wgporo
