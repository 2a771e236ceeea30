#include "scdirac/weyl.hpp"

#include "scdirac/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace scdirac {

namespace {

// Relative weights below which nodes of a line, and whole Fourier lines of a 2D
// grid, are skipped. FFT roundoff sits near 1e-32. Fourier lines are decoupled
// by the symbol, so a skipped line moves an expectation by at most its weight.
constexpr double kNegligible = 1e-24;
constexpr double kLineCut = 1e-16;

// One line of a grid along `axis`, with the other phase-space coordinates fixed.
struct LineGeometry {
  int n = 0;
  double dx = 0.0;
  double origin = 0.0;
  double eps = 0.0;
  int axis = 0;
  const GridSpec* grid = nullptr;
  PhasePoint base;  // fixed coordinates; q[axis] and p[axis] are overwritten

  PhasePoint point(int s, int k) const {
    PhasePoint pt = base;
    pt.q(axis) = origin + 0.5 * dx * s;
    pt.p(axis) = eps * grid->wavenumber(axis, k);
    return pt;
  }
};

// Index range [lo, hi] holding every node whose weight exceeds the cut.
std::pair<int, int> support(const Complex* line, int n) {
  double peak = 0.0;
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = std::norm(line[4 * i]) + std::norm(line[4 * i + 1]) + std::norm(line[4 * i + 2]) +
                                     std::norm(line[4 * i + 3]);
    peak = std::max(peak, w[static_cast<std::size_t>(i)]);
  }
  int lo = n, hi = -1;
  for (int i = 0; i < n; ++i) {
    if (w[static_cast<std::size_t>(i)] > kNegligible * peak) {
      lo = std::min(lo, i);
      hi = i;
    }
  }
  return {lo, hi};
}

int wrap(int r, int n) { return ((r % n) + n) % n; }

// out <- Op(H) line, midpoint kernel G_s(r) = (1/N) sum_k H(x_s, eps xi_k) e^{2 pi i k r / N}.
void line_apply(const GridSymbol& sym, const LineGeometry& g, const LineFft& fft, const Complex* in, Complex* out) {
  const int n = g.n;
  std::fill(out, out + 4 * n, Complex(0.0, 0.0));
  const auto [lo, hi] = support(in, n);
  if (hi < lo) return;
  std::vector<Complex> kernel(16 * static_cast<std::size_t>(n));
  std::vector<ComplexMatrix4> tmp(static_cast<std::size_t>(sym.count));
  const double inv_n = 1.0 / n;
  for (int s = lo; s <= hi + n - 1; ++s) {
    for (int k = 0; k < n; ++k) {
      sym.eval(g.point(s, k), tmp.data());
      Complex* dst = kernel.data() + 16 * k;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) dst[4 * i + j] = tmp[0](i, j);
      }
    }
    fft.execute(kernel.data());
    const int b_lo = std::max(lo, s - (n - 1));
    const int b_hi = std::min(hi, s);
    for (int b = b_lo; b <= b_hi; ++b) {
      const int a = s - b;
      const Complex* gk = kernel.data() + 16 * wrap(a - b, n);
      const Complex* x = in + 4 * b;
      Complex* y = out + 4 * a;
      for (int i = 0; i < 4; ++i) {
        y[i] += inv_n * (gk[4 * i] * x[0] + gk[4 * i + 1] * x[1] + gk[4 * i + 2] * x[2] + gk[4 * i + 3] * x[3]);
      }
    }
  }
}

// sum_a line_a^dagger (Op(H_m) line)_a for every member m, through the discrete
// Wigner transform of the line.
void line_expectation(const GridSymbol& sym, const LineGeometry& g, const LineFft& fft, const Complex* in,
                      double* acc) {
  const int n = g.n;
  const auto [lo, hi] = support(in, n);
  if (hi < lo) return;
  double total = 0.0;
  for (int i = 0; i < 4 * n; ++i) total += std::norm(in[i]);
  const double cut = 1e-17 * total;
  std::vector<Complex> d(16 * static_cast<std::size_t>(n));
  std::vector<ComplexMatrix4> h(static_cast<std::size_t>(sym.count));
  for (int s = 2 * lo; s <= 2 * hi; ++s) {
    std::fill(d.begin(), d.end(), Complex(0.0, 0.0));
    const int b_lo = std::max(lo, s - hi);
    const int b_hi = std::min(hi, s - lo);
    for (int b = b_lo; b <= b_hi; ++b) {
      const int a = s - b;
      Complex* dst = d.data() + 16 * wrap(a - b, n);
      const Complex* pb = in + 4 * b;
      const Complex* pa = in + 4 * a;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) dst[4 * i + j] += pb[i] * std::conj(pa[j]);
      }
    }
    fft.execute(d.data());
    for (int k = 0; k < n; ++k) {
      const Complex* dk = d.data() + 16 * k;
      double mag = 0.0;
      for (int e = 0; e < 16; ++e) mag = std::max(mag, std::abs(dk[e]));
      if (mag <= cut) continue;
      sym.eval(g.point(s, k), h.data());
      for (int m = 0; m < sym.count; ++m) {
        Complex tr = 0.0;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) tr += h[static_cast<std::size_t>(m)](i, j) * dk[4 * j + i];
        }
        acc[m] += tr.real() / n;
      }
    }
  }
}

enum class Path { multiplier, line_x, line_y };

Path choose_path(const GridSymbol& sym, const GridSpec& grid) {
  const bool qx = sym.traits.q_axes[0];
  const bool qy = grid.dim == 2 && sym.traits.q_axes[1];
  if (!qx && !qy) return Path::multiplier;
  if (qx && qy) {
    throw ArgumentError("Weyl quantization on a 2D grid needs a symbol independent of x or of y");
  }
  return qx ? Path::line_x : Path::line_y;
}

LineGeometry line_geometry(const GridSpec& grid, int axis) {
  LineGeometry g;
  g.n = grid.n[axis];
  g.dx = grid.spacing(axis);
  g.origin = grid.origin(axis);
  g.eps = grid.eps;
  g.axis = axis;
  g.grid = &grid;
  return g;
}

// Copies line `index` along `axis` out of (or into) a node-major 2D field.
void gather(const GridSpec& grid, int axis, int index, const Complex* field, Complex* line) {
  const int nx = grid.n[0];
  const int n = grid.n[axis];
  for (int i = 0; i < n; ++i) {
    const std::size_t node = axis == 0 ? static_cast<std::size_t>(index) * nx + i : static_cast<std::size_t>(i) * nx + index;
    for (int c = 0; c < 4; ++c) line[4 * i + c] = field[4 * node + c];
  }
}

void scatter(const GridSpec& grid, int axis, int index, const Complex* line, Complex* field) {
  const int nx = grid.n[0];
  const int n = grid.n[axis];
  for (int i = 0; i < n; ++i) {
    const std::size_t node = axis == 0 ? static_cast<std::size_t>(index) * nx + i : static_cast<std::size_t>(i) * nx + index;
    for (int c = 0; c < 4; ++c) field[4 * node + c] = line[4 * i + c];
  }
}

double line_weight(const Complex* line, int n) {
  double s = 0.0;
  for (int i = 0; i < 4 * n; ++i) s += std::norm(line[i]);
  return s;
}

}  // namespace

GridSymbol make_grid_symbol(std::function<ComplexMatrix4(const PhasePoint&)> f, SymbolTraits traits) {
  GridSymbol g;
  g.count = 1;
  g.eval = [f = std::move(f)](const PhasePoint& pt, ComplexMatrix4* out) { out[0] = f(pt); };
  g.traits = traits;
  return g;
}

GridSpinor weyl_apply(const GridSymbol& sym, const GridSpinor& psi, bool parallel) {
  const GridSpec& grid = psi.grid;
  grid.validate();
  const Path path = choose_path(sym, grid);
  GridSpinor out(grid);
  std::vector<ComplexMatrix4> tmp(static_cast<std::size_t>(sym.count));

  if (path == Path::multiplier) {
    SpinorFft fft(grid);
    std::vector<Complex> work = psi.data;
    fft.forward(work.data());
    const PhasePoint at_center{{grid.center[0], grid.dim == 2 ? grid.center[1] : 0.0, 0.0}, Vec3::Zero()};
    const double inv = 1.0 / static_cast<double>(grid.nodes());
    for (std::size_t m = 0; m < grid.nodes(); ++m) {
      PhasePoint pt = at_center;
      pt.p = grid.momentum(m);
      sym.eval(pt, tmp.data());
      const Spinor4 v = Eigen::Map<const Spinor4>(work.data() + 4 * m);
      Eigen::Map<Spinor4>(out.data.data() + 4 * m) = inv * (tmp[0] * v);
    }
    fft.backward(out.data.data());
    return out;
  }

  const int axis = path == Path::line_x ? 0 : 1;
  LineGeometry g = line_geometry(grid, axis);
  const LineFft line_fft(g.n, 16, +1);
  if (grid.dim == 1) {
    line_apply(sym, g, line_fft, psi.data.data(), out.data.data());
    return out;
  }

  // Fourier transform along the other axis; the symbol is diagonal in that wavenumber.
  const int other = 1 - axis;
  SpinorFft fft(grid);
  std::vector<Complex> work = psi.data;
  fft.forward_axis(other, work.data());
  const int lines = grid.n[other];
  std::vector<double> weight(static_cast<std::size_t>(lines));
  {
    std::vector<Complex> line(4 * static_cast<std::size_t>(g.n));
    for (int l = 0; l < lines; ++l) {
      gather(grid, axis, l, work.data(), line.data());
      weight[static_cast<std::size_t>(l)] = line_weight(line.data(), g.n);
    }
  }
  const double peak = *std::max_element(weight.begin(), weight.end());
  std::vector<Complex> result(work.size(), Complex(0.0, 0.0));
#pragma omp parallel if (parallel)
  {
    std::vector<Complex> in(4 * static_cast<std::size_t>(g.n)), res(4 * static_cast<std::size_t>(g.n));
#pragma omp for schedule(dynamic)
    for (int l = 0; l < lines; ++l) {
      if (!(weight[static_cast<std::size_t>(l)] > kLineCut * peak)) continue;
      LineGeometry gl = g;
      gl.base.q(other) = grid.center[other];
      gl.base.p(other) = grid.eps * grid.wavenumber(other, l);
      gather(grid, axis, l, work.data(), in.data());
      line_apply(sym, gl, line_fft, in.data(), res.data());
      scatter(grid, axis, l, res.data(), result.data());
    }
  }
  fft.backward_axis(other, result.data());
  const double inv = 1.0 / grid.n[other];
  for (std::size_t i = 0; i < result.size(); ++i) out.data[i] = inv * result[i];
  return out;
}

std::vector<double> weyl_expectations(const GridSymbol& sym, const GridSpinor& psi, bool parallel) {
  const GridSpec& grid = psi.grid;
  grid.validate();
  const Path path = choose_path(sym, grid);
  const auto count = static_cast<std::size_t>(sym.count);
  std::vector<double> total(count, 0.0);

  if (path == Path::multiplier) {
    SpinorFft fft(grid);
    std::vector<Complex> work = psi.data;
    fft.forward(work.data());
    std::vector<ComplexMatrix4> tmp(count);
    const PhasePoint at_center{{grid.center[0], grid.dim == 2 ? grid.center[1] : 0.0, 0.0}, Vec3::Zero()};
    for (std::size_t m = 0; m < grid.nodes(); ++m) {
      const Spinor4 v = Eigen::Map<const Spinor4>(work.data() + 4 * m);
      if (v.squaredNorm() == 0.0) continue;
      PhasePoint pt = at_center;
      pt.p = grid.momentum(m);
      sym.eval(pt, tmp.data());
      for (std::size_t k = 0; k < count; ++k) total[k] += v.dot(tmp[k] * v).real();
    }
    // Parseval: sum |psi|^2 = (1 / N) sum |psi_hat|^2.
    for (double& t : total) t *= grid.cell_volume() / static_cast<double>(grid.nodes());
    return total;
  }

  const int axis = path == Path::line_x ? 0 : 1;
  LineGeometry g = line_geometry(grid, axis);
  const LineFft line_fft(g.n, 16, +1);
  if (grid.dim == 1) {
    line_expectation(sym, g, line_fft, psi.data.data(), total.data());
    for (double& t : total) t *= grid.cell_volume();
    return total;
  }

  const int other = 1 - axis;
  SpinorFft fft(grid);
  std::vector<Complex> work = psi.data;
  fft.forward_axis(other, work.data());
  const int lines = grid.n[other];
  std::vector<double> weight(static_cast<std::size_t>(lines));
  std::vector<Complex> buf(4 * static_cast<std::size_t>(g.n));
  for (int l = 0; l < lines; ++l) {
    gather(grid, axis, l, work.data(), buf.data());
    weight[static_cast<std::size_t>(l)] = line_weight(buf.data(), g.n);
  }
  const double peak = *std::max_element(weight.begin(), weight.end());
  std::vector<double> per_line(static_cast<std::size_t>(lines) * count, 0.0);
#pragma omp parallel if (parallel)
  {
    std::vector<Complex> in(4 * static_cast<std::size_t>(g.n));
#pragma omp for schedule(dynamic)
    for (int l = 0; l < lines; ++l) {
      if (!(weight[static_cast<std::size_t>(l)] > kLineCut * peak)) continue;
      LineGeometry gl = g;
      gl.base.q(other) = grid.center[other];
      gl.base.p(other) = grid.eps * grid.wavenumber(other, l);
      gather(grid, axis, l, work.data(), in.data());
      line_expectation(sym, gl, line_fft, in.data(), per_line.data() + static_cast<std::size_t>(l) * count);
    }
  }
  // Lines are combined in index order so the result does not depend on threading.
  for (int l = 0; l < lines; ++l) {
    for (std::size_t k = 0; k < count; ++k) total[k] += per_line[static_cast<std::size_t>(l) * count + k];
  }
  for (double& t : total) t *= grid.cell_volume() / grid.n[other];
  return total;
}

WignerSlice wigner_slice_1d(const GridSpinor& psi, int x_stride) {
  const GridSpec& grid = psi.grid;
  if (grid.dim != 1) throw ArgumentError("wigner_slice_1d needs a 1D grid");
  if (x_stride < 1) throw ArgumentError("x_stride must be at least 1");
  grid.validate();
  const int n = grid.n[0];
  const double dx = grid.spacing(0);
  const double kPi = std::acos(-1.0);

  // Band-limited interpolation onto the half grid: zero-pad the spectrum, split
  // the Nyquist mode evenly between +N/2 and -N/2.
  std::vector<Complex> up(8 * static_cast<std::size_t>(n), Complex(0.0, 0.0));
  {
    std::vector<Complex> spec = psi.data;
    const LineFft fwd(n, 4, -1);
    fwd.execute(spec.data());
    for (int k = 0; k < n; ++k) {
      int dst;
      double w = 1.0;
      if (k < n / 2) {
        dst = k;
      } else if (k == n / 2) {
        dst = k;
        w = 0.5;
        for (int c = 0; c < 4; ++c) up[4 * static_cast<std::size_t>(2 * n - n / 2) + c] = 0.5 * spec[4 * k + c];
      } else {
        dst = k + n;
      }
      for (int c = 0; c < 4; ++c) up[4 * static_cast<std::size_t>(dst) + c] = w * spec[4 * k + c];
    }
    const LineFft bwd(2 * n, 4, +1);
    bwd.execute(up.data());
    for (auto& z : up) z /= static_cast<double>(n);
  }
  auto half = [&](int idx) { return Eigen::Map<const Spinor4>(up.data() + 4 * wrap(idx, 2 * n)); };

  // y_j = j dx / 2 for j = -N/2 .. N/2: the lag reaches a quarter period, which
  // keeps periodic images of a localized packet out of the transform.
  WignerSlice out;
  for (int k = -n / 2; k < n / 2; ++k) out.p.push_back(grid.eps * 2.0 * kPi * k / grid.length[0]);
  const double pref = dx / (2.0 * kPi * grid.eps);
  const LineFft fft(n, 16, +1);
  std::vector<Complex> f(16 * static_cast<std::size_t>(n));
  for (int a = 0; a < n; a += x_stride) {
    out.x.push_back(grid.coordinate(0, a));
    std::fill(f.begin(), f.end(), Complex(0.0, 0.0));
    // x -/+ y_j sits at half-grid index 2a -/+ j.
    for (int j = -n / 2; j <= n / 2; ++j) {
      const double w = (j == -n / 2 || j == n / 2) ? 0.5 : 1.0;
      const Spinor4 lo = half(2 * a - j);
      const Spinor4 hi = half(2 * a + j);
      Complex* dst = f.data() + 16 * wrap(j, n);
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) dst[4 * r + c] += w * lo(r) * std::conj(hi(c));
      }
    }
    fft.execute(f.data());
    for (int kk = -n / 2; kk < n / 2; ++kk) {
      const Complex* src = f.data() + 16 * wrap(kk, n);
      ComplexMatrix4 mat;
      for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) mat(r, c) = pref * src[4 * r + c];
      }
      out.w.push_back(mat);
    }
  }
  return out;
}

}  // namespace scdirac
