#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "harmap/families.hpp"
#include "harmap/field.hpp"

namespace harmap {

/// Dirichlet values at the boundary nodes of a tensor grid, listed in the
/// order returned by boundary_nodes(). Periodic axes carry no boundary.
struct BoundaryData {
  int ambient_dim = 3;
  std::vector<Eigen::VectorXd> values;

  /// Samples `trace` at every boundary node of `domain` at `resolution`.
  static BoundaryData from_trace(const DomainSpec& domain, int resolution,
                                 const std::function<Eigen::VectorXd(double, double)>& trace);
  static BoundaryData constant(const DomainSpec& domain, int resolution, const Eigen::VectorXd& c);
};

/// Grid-sampled map from a rectangular domain into R^n. Immutable once built.
class DiscreteMap {
 public:
  DiscreteMap() = default;
  DiscreteMap(DomainSpec domain, GridAxis axis_u, GridAxis axis_v, int ambient_dim);

  const DomainSpec& domain() const { return domain_; }
  const GridAxis& axis_u() const { return axis_u_; }
  const GridAxis& axis_v() const { return axis_v_; }
  int ambient_dim() const { return ambient_dim_; }
  int nodes_u() const { return axis_u_.nodes(); }
  int nodes_v() const { return axis_v_.nodes(); }

  double& at(int i, int j, int c) { return values_[index(i, j) + c]; }
  double at(int i, int j, int c) const { return values_[index(i, j) + c]; }
  Eigen::VectorXd value(int i, int j) const;
  bool is_boundary(int i, int j) const;
  const std::vector<double>& raw() const { return values_; }

  double solver_residual = 0.0;
  bool converged = false;
  int iterations = 0;

 private:
  std::size_t index(int i, int j) const {
    return (static_cast<std::size_t>(i) * nodes_v() + j) * ambient_dim_;
  }

  DomainSpec domain_;
  GridAxis axis_u_;
  GridAxis axis_v_;
  int ambient_dim_ = 3;
  std::vector<double> values_;
};

/// Boundary nodes (i, j) of the grid in row-major order.
std::vector<std::pair<int, int>> boundary_nodes(const GridAxis& axis_u, const GridAxis& axis_v);

/// Solves the 5-point discrete Laplace equation for every ambient component by
/// conjugate gradients. Each component is converged to a max-norm residual of
/// tol * (its boundary value range). Throws InvalidBoundary for annular or fully
/// periodic domains and malformed data; NotConverged after max_iter.
DiscreteMap solve(const DomainSpec& domain, int resolution, const BoundaryData& boundary, double tol,
                  int max_iter = 200000);

/// Max over interior nodes and components of |5-point Laplacian| (including 1/h^2).
double residual(const DiscreteMap& map);

/// Exact samples of an analytic family on the solver grid.
DiscreteMap sample_map(const AnalyticFamily& family, int resolution);

/// Central-difference jet at node (i, j). Throws BoundaryNode on the outer ring
/// of a non-periodic axis.
Jet2 jets_from_grid(const DiscreteMap& map, int i, int j);

/// Jets on the interior sub-grid with trapezoid weights over that sub-grid.
/// Nodes one cell from a non-periodic boundary are flagged near_boundary.
JetField jet_field(const DiscreteMap& map);

/// CSV grid dump, 17 significant digits.
void write_csv(std::ostream& os, const DiscreteMap& map);
DiscreteMap read_csv(std::istream& is);

}  // namespace harmap
