#include "scdirac/grid.hpp"

#include "scdirac/error.hpp"
#include "scdirac/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace scdirac {

namespace {

const double kTwoPi = 2.0 * std::acos(-1.0);

// FFTW planning is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

fftw_plan make_guru(const std::vector<fftw_iodim>& dims, const std::vector<fftw_iodim>& howmany, int sign,
                    std::size_t buffer) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  std::vector<Complex> scratch(buffer);
  fftw_plan p = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(howmany.size()),
                                   howmany.data(), as_fftw(scratch.data()), as_fftw(scratch.data()), sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (p == nullptr) throw Error("FFTW could not create a plan");
  return p;
}

void destroy(fftw_plan p) {
  if (p == nullptr) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(p);
}

}  // namespace

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 4 || n[a] % 2 != 0) throw ConfigError("grid size must be even and at least 4");
    if (!(length[a] > 0.0) || !std::isfinite(length[a])) throw ConfigError("grid length must be positive");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
}

double GridSpec::wavenumber(int axis, int k) const {
  const int m = k < n[axis] / 2 ? k : k - n[axis];
  return kTwoPi * m / length[axis];
}

Vec3 GridSpec::position(std::size_t node) const {
  const int ix = static_cast<int>(node % static_cast<std::size_t>(n[0]));
  const int iy = static_cast<int>(node / static_cast<std::size_t>(n[0]));
  return {coordinate(0, ix), dim == 2 ? coordinate(1, iy) : 0.0, 0.0};
}

Vec3 GridSpec::momentum(std::size_t mode) const {
  const int kx = static_cast<int>(mode % static_cast<std::size_t>(n[0]));
  const int ky = static_cast<int>(mode / static_cast<std::size_t>(n[0]));
  return {eps * wavenumber(0, kx), dim == 2 ? eps * wavenumber(1, ky) : 0.0, 0.0};
}

double GridSpinor::norm() const {
  return std::sqrt(grid.cell_volume() * kernels::serial::sum_abs2(data.data(), data.size()));
}

void GridSpinor::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0)) throw ArgumentError("cannot normalize a zero spinor field");
  for (auto& z : data) z /= nrm;
}

struct SpinorFft::Plans {
  fftw_plan full[2] = {nullptr, nullptr};
  fftw_plan axis[2][2] = {{nullptr, nullptr}, {nullptr, nullptr}};
};

SpinorFft::SpinorFft(const GridSpec& grid) : plans_(new Plans) {
  grid.validate();
  const int nx = grid.n[0];
  const int ny = grid.dim == 2 ? grid.n[1] : 1;
  const std::size_t buffer = 4 * grid.nodes();
  const fftw_iodim comp{4, 1, 1};
  const fftw_iodim along_x{nx, 4, 4};
  const fftw_iodim along_y{ny, 4 * nx, 4 * nx};
  try {
    for (int dir = 0; dir < 2; ++dir) {
      const int sign = dir == 0 ? FFTW_FORWARD : FFTW_BACKWARD;
      if (grid.dim == 1) {
        plans_->full[dir] = make_guru({along_x}, {comp}, sign, buffer);
      } else {
        plans_->full[dir] = make_guru({along_y, along_x}, {comp}, sign, buffer);
        plans_->axis[0][dir] = make_guru({along_x}, {along_y, comp}, sign, buffer);
        plans_->axis[1][dir] = make_guru({along_y}, {along_x, comp}, sign, buffer);
      }
    }
  } catch (...) {
    release();
    throw;
  }
}

SpinorFft::~SpinorFft() { release(); }

void SpinorFft::release() {
  if (plans_ == nullptr) return;
  for (auto& p : plans_->full) destroy(p);
  for (auto& a : plans_->axis) {
    for (auto& p : a) destroy(p);
  }
  delete plans_;
  plans_ = nullptr;
}

void SpinorFft::forward(Complex* data) const { fftw_execute_dft(plans_->full[0], as_fftw(data), as_fftw(data)); }
void SpinorFft::backward(Complex* data) const { fftw_execute_dft(plans_->full[1], as_fftw(data), as_fftw(data)); }

void SpinorFft::forward_axis(int axis, Complex* data) const {
  if (plans_->axis[axis][0] == nullptr) throw ArgumentError("axis transform needs a 2D grid");
  fftw_execute_dft(plans_->axis[axis][0], as_fftw(data), as_fftw(data));
}

void SpinorFft::backward_axis(int axis, Complex* data) const {
  if (plans_->axis[axis][1] == nullptr) throw ArgumentError("axis transform needs a 2D grid");
  fftw_execute_dft(plans_->axis[axis][1], as_fftw(data), as_fftw(data));
}

LineFft::LineFft(int n, int count, int sign) {
  plan_ = make_guru({fftw_iodim{n, count, count}}, {fftw_iodim{count, 1, 1}}, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                    static_cast<std::size_t>(n) * static_cast<std::size_t>(count));
}

LineFft::~LineFft() { destroy(static_cast<fftw_plan>(plan_)); }

void LineFft::execute(Complex* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_), as_fftw(data), as_fftw(data));
}

}  // namespace scdirac
