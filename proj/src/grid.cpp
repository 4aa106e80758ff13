#include "minkrad/grid.hpp"

#include <algorithm>
#include <cmath>

#include "minkrad/error.hpp"

namespace minkrad {

Grid::Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw Error(ErrorKind::InvalidInput, "grid needs at least one cell");
  if (nodes_.front() != 0.0) throw Error(ErrorKind::InvalidInput, "grid must start at r = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw Error(ErrorKind::InvalidInput, "grid nodes must be strictly increasing");
}

Grid Grid::uniform(double radius, int cells) {
  if (cells < 1) throw Error(ErrorKind::InvalidInput, "grid needs at least one cell");
  std::vector<double> nodes(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) nodes[static_cast<std::size_t>(i)] = radius * i / cells;
  nodes.back() = radius;
  return Grid(std::move(nodes));
}

Grid Grid::for_problem(const RadialProblem& problem, int cells) {
  Grid g = uniform(problem.radius, cells);
  auto& nodes = g.nodes_;
  const double h = problem.radius / cells;
  std::vector<bool> snapped(nodes.size(), false);
  std::vector<double> inserted;
  for (double b : problem.weight.breakpoints(0.0, problem.radius)) {
    const auto i = static_cast<std::size_t>(std::lround(b / h));
    // Too close to an end, or the node already carries a breakpoint: add a node instead.
    if (i == 0 || i >= nodes.size() - 1 || snapped[i]) {
      inserted.push_back(b);
      continue;
    }
    nodes[i] = b;
    snapped[i] = true;
  }
  nodes.insert(nodes.end(), inserted.begin(), inserted.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return Grid(std::move(nodes));
}

double Grid::max_step() const {
  double h = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) h = std::max(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

GridProfile::GridProfile(Grid g, std::vector<double> values, std::vector<double> slopes)
    : grid(std::move(g)), u(std::move(values)), du(std::move(slopes)) {
  if (u.size() != grid.size()) throw Error(ErrorKind::InvalidInput, "profile values do not match the grid");
  if (du.empty()) du.assign(u.size(), 0.0);
  if (du.size() != grid.size()) throw Error(ErrorKind::InvalidInput, "profile slopes do not match the grid");
}

GridProfile GridProfile::constant(const Grid& g, double level) {
  return GridProfile(g, std::vector<double>(g.size(), level), std::vector<double>(g.size(), 0.0));
}

double GridProfile::sup_norm() const {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

double GridProfile::min_value() const { return *std::min_element(u.begin(), u.end()); }

double GridProfile::max_abs_slope() const {
  double m = 0.0;
  for (double v : du) m = std::max(m, std::abs(v));
  return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "sup_distance: size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace minkrad
