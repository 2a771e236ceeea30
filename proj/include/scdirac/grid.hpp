#pragma once

#include "scdirac/calculus.hpp"
#include "scdirac/linalg.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace scdirac {

/// Periodic grid in one or two dimensions. Grid axis 0 is q_x, axis 1 is q_y.
/// Nodes are stored with x fastest: node = iy * n[0] + ix.
struct GridSpec {
  int dim = 1;
  std::array<int, 2> n{256, 1};
  std::array<double, 2> length{1.0, 1.0};
  std::array<double, 2> center{0.0, 0.0};
  double eps = 0.1;

  void validate() const;
  std::size_t nodes() const { return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(dim == 2 ? n[1] : 1); }
  double spacing(int axis) const { return length[axis] / n[axis]; }
  double origin(int axis) const { return center[axis] - 0.5 * length[axis]; }
  double coordinate(int axis, int i) const { return origin(axis) + i * spacing(axis); }
  /// Angular wavenumber of FFT index k (FFT ordering: 0..n/2-1, then -n/2..-1).
  double wavenumber(int axis, int k) const;
  double cell_volume() const { return dim == 2 ? spacing(0) * spacing(1) : spacing(0); }
  /// Phase-space position of a node (q_z = 0).
  Vec3 position(std::size_t node) const;
  /// eps * xi of a Fourier mode, with p_z = 0.
  Vec3 momentum(std::size_t mode) const;
};

/// A four-component spinor field on a grid, node-major with interleaved components.
struct GridSpinor {
  GridSpec grid;
  std::vector<Complex> data;

  GridSpinor() = default;
  explicit GridSpinor(const GridSpec& g) : grid(g), data(4 * g.nodes(), Complex(0.0, 0.0)) {}

  Complex* node(std::size_t i) { return data.data() + 4 * i; }
  const Complex* node(std::size_t i) const { return data.data() + 4 * i; }
  /// sqrt(cell volume * sum |psi|^2)
  double norm() const;
  void normalize();
};

/// In-place FFTs of the four interleaved components. Forward is e^{-i k x},
/// both directions unnormalized. Plans use FFTW_ESTIMATE so results do not depend
/// on timing measurements.
class SpinorFft {
 public:
  explicit SpinorFft(const GridSpec& grid);
  ~SpinorFft();
  SpinorFft(const SpinorFft&) = delete;
  SpinorFft& operator=(const SpinorFft&) = delete;

  void forward(Complex* data) const;
  void backward(Complex* data) const;
  /// Transform along one axis only (2D grids).
  void forward_axis(int axis, Complex* data) const;
  void backward_axis(int axis, Complex* data) const;

 private:
  struct Plans;
  void release();
  Plans* plans_;
};

/// Batched in-place FFTs of `count` interleaved channels of length n.
class LineFft {
 public:
  LineFft(int n, int count, int sign);
  ~LineFft();
  LineFft(const LineFft&) = delete;
  LineFft& operator=(const LineFft&) = delete;
  void execute(Complex* data) const;

 private:
  void* plan_;
};

}  // namespace scdirac
