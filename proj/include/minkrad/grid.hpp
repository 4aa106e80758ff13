#pragma once

#include <span>
#include <vector>

#include "minkrad/problem.hpp"

namespace minkrad {

/// Nodes 0 = r_0 < r_1 < ... < r_M = R.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<double> nodes);  // validates

  /// Uniform grid with M cells.
  static Grid uniform(double radius, int cells);

  /// Uniform grid with M cells whose nearest nodes are moved onto the weight
  /// breakpoints, so that jumps of a(r) always fall on cell boundaries.
  static Grid for_problem(const RadialProblem& problem, int cells);

  std::span<const double> nodes() const { return nodes_; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  int cells() const { return static_cast<int>(nodes_.size()) - 1; }
  double radius() const { return nodes_.back(); }
  /// Largest cell width.
  double max_step() const;

 private:
  std::vector<double> nodes_;
};

/// Samples of u and u' on a grid.
struct GridProfile {
  Grid grid;
  std::vector<double> u;
  std::vector<double> du;

  GridProfile() = default;
  GridProfile(Grid g, std::vector<double> values, std::vector<double> slopes);
  static GridProfile constant(const Grid& g, double level);

  double sup_norm() const;
  double min_value() const;
  double max_abs_slope() const;
};

/// max_i |a_i - b_i|; both profiles must share their node count.
double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace minkrad
