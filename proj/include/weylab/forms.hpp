#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "weylab/geometry.hpp"

namespace weylab {

enum class BoundaryCondition { Neumann, Dirichlet };

// Potential samples at included cell centers, in mask ordinal order.  Values
// are nonpositive by construction: positive samples are clipped to zero and
// counted, non-finite samples are a hard error.
struct PotentialField {
  std::vector<double> values;
  std::int64_t clipped = 0;
  std::string provenance;
};

// Declarative potential families used by configs and tests.
struct ZeroPotential {};
struct ConstantPotential {
  double value = -1.0;  // <= 0
};
// -amplitude * dist(x, boundary)^(-alpha); dist taken from the mask's
// distance field, so samples are finite for every included cell.
struct DistancePowerPotential {
  double alpha = 0.5;
  double amplitude = 1.0;
};
// -value on {x < split_x}, 0 elsewhere.
struct HalfPlanePotential {
  double split_x = 0.5;
  double depth = 1.0;
};
// Smooth compactly supported well: -depth * max(0, 1 - r^2/radius^2)^2.
struct BumpPotential {
  double cx = 0.5, cy = 0.5;
  double radius = 0.25;
  double depth = 1.0;
};

using PotentialSpec = std::variant<ZeroPotential, ConstantPotential, DistancePowerPotential,
                                   HalfPlanePotential, BumpPotential>;

PotentialField sample_potential(const GridMask& m, const PotentialSpec& spec);
// Formula escape hatch: f(cx, cy) evaluated at every included cell center.
PotentialField sample_potential(const GridMask& m,
                                const std::function<double(double, double)>& f,
                                const std::string& provenance);

// Finite-difference quadratic form on the mask.  Symmetric, identity mass
// matrix, so its eigenvalues approximate the continuum operator's directly.
struct DiscreteForm {
  Eigen::SparseMatrix<double> A;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  double h = 1.0;
};

// Neumann: sum over interior edges of (u_i - u_j)^2 / h^2, plus diag(V).
// Row sums of the V=0 part vanish identically (constants in the kernel).
DiscreteForm assemble_neumann(const GridMask& m, const PotentialField& V);

// Dirichlet: 5-point stencil with zero extension across every excluded or
// out-of-grid neighbor, i.e. diagonal 4/h^2 + V_i throughout.
DiscreteForm assemble_dirichlet(const GridMask& m, const PotentialField& V);

// Matrix Market coordinate format, symmetric, lower triangle.
void write_matrix_market(const Eigen::SparseMatrix<double>& A, std::ostream& os);

}  // namespace weylab
