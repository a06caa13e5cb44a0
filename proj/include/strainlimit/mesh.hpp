#pragma once

#include <array>
#include <vector>

#include "strainlimit/symtensor.hpp"

namespace strainlimit {

/// Simplicial mesh of an interval (d = 1) or a rectangle (d = 2). Immutable
/// after construction.
class Mesh {
 public:
  /// Uniform mesh of [a, b].
  static Mesh interval(double a, double b, int cells);
  /// Mesh of [x_0, x_n] with the given strictly increasing nodes.
  static Mesh interval(std::vector<double> nodes);
  /// Structured triangulation of [a, b] x [c, d]: nx x ny cells, each split
  /// along its (i, j) -> (i+1, j+1) diagonal into two counter-clockwise triangles.
  static Mesh rectangle(double a, double b, double c, double d, int nx, int ny);

  int dim() const { return dim_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  int n_elements() const { return static_cast<int>(elements_.size()); }
  int nodes_per_element() const { return dim_ + 1; }

  const SmallVector& node(int i) const { return nodes_[i]; }
  const std::array<int, 3>& element(int e) const { return elements_[e]; }
  bool on_boundary(int node) const { return boundary_[node] != 0; }
  /// Length (d = 1) or area (d = 2) of an element.
  double element_measure(int e) const;
  /// Bounding box extent per direction.
  const SmallVector& extent() const { return extent_; }

 private:
  Mesh() = default;

  int dim_ = 1;
  std::vector<SmallVector> nodes_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<char> boundary_;
  SmallVector extent_;
};

}  // namespace strainlimit
