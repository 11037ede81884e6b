#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace epim {

// Evenly spaced finite grid; all suprema/infima in the library are grid
// maxima/minima over such nodes.
struct Grid1D {
  double lo = -4.0;
  double hi = 4.0;
  int nodes = 4001;

  void validate() const {
    if (nodes < 2) throw std::invalid_argument("Grid1D: nodes must be >= 2");
    if (!(lo < hi)) throw std::invalid_argument("Grid1D: lo must be < hi");
  }
  double spacing() const { return (hi - lo) / (nodes - 1); }
  double point(int i) const { return lo + (hi - lo) * (static_cast<double>(i) / (nodes - 1)); }
  std::vector<double> points() const {
    std::vector<double> p(nodes);
    for (int i = 0; i < nodes; ++i) p[i] = point(i);
    return p;
  }
};

struct Grid2D {
  Grid1D a;  // first coordinate
  Grid1D b;  // second coordinate

  void validate() const {
    a.validate();
    b.validate();
  }
  std::size_t size() const {
    return static_cast<std::size_t>(a.nodes) * static_cast<std::size_t>(b.nodes);
  }
  // Row-major: index = ia * b.nodes + ib.
  std::size_t index(int ia, int ib) const {
    return static_cast<std::size_t>(ia) * b.nodes + ib;
  }
};

}  // namespace epim
