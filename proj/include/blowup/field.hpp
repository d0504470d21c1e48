#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace blowup {

/// Uniform 1-D grid, symmetric about the origin with a node at y = 0.
struct Grid {
  double y_max = 0.0;
  int n_points = 0;

  Grid() = default;
  Grid(double ymax, int n) : y_max(ymax), n_points(n) {
    if (!(ymax > 0.0)) throw std::invalid_argument("Grid: y_max must be positive");
    if (n < 3) throw std::invalid_argument("Grid: need at least 3 points");
    if (n % 2 == 0) throw std::invalid_argument("Grid: n_points must be odd (node at origin)");
  }

  double spacing() const { return 2.0 * y_max / (n_points - 1); }
  double node(int i) const { return -y_max + i * spacing(); }

  bool operator==(const Grid& o) const {
    return y_max == o.y_max && n_points == o.n_points;
  }
};

enum class Frame { physical, similarity };

/// Sampled real-valued function on a uniform grid, tagged with its frame
/// (physical x or similarity y) and time coordinate.
struct Field {
  Grid grid;
  Frame frame = Frame::similarity;
  double time = 0.0;
  std::vector<double> values;

  Field() = default;
  Field(Grid g, Frame f, double t)
      : grid(g), frame(f), time(t), values(static_cast<size_t>(g.n_points), 0.0) {}

  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  int size() const { return grid.n_points; }

  template <class F>
  static Field sample(Grid g, Frame fr, double t, F&& f) {
    Field out(g, fr, t);
    for (int i = 0; i < g.n_points; ++i) out[i] = f(g.node(i));
    return out;
  }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  bool finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }

  /// Linear interpolation; clamps to the boundary values outside the grid.
  double interp(double x) const {
    const double h = grid.spacing();
    double u = (x + grid.y_max) / h;
    if (u <= 0.0) return values.front();
    if (u >= grid.n_points - 1) return values.back();
    int i = static_cast<int>(u);
    double a = u - i;
    return (1.0 - a) * values[i] + a * values[i + 1];
  }
};

}  // namespace blowup
