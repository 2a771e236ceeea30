#pragma once

#include "scdirac/bmt.hpp"
#include "scdirac/dirac_symbol.hpp"
#include "scdirac/grid.hpp"
#include "scdirac/kernels.hpp"
#include "scdirac/weyl.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace scdirac {

struct PreparedPacket {
  GridSpinor psi;
  /// 1 - <psi, Op(P+) psi> after projection. Op(P+) is idempotent only up to
  /// O(eps), so this is O(eps) and may be negative.
  double positron_content = 0.0;
};

/// Gaussian exp(-|x - q0|^2 / (4 sigma^2)) e^{i p0 . x / eps} phi0, projected with
/// Op(P+), normalized. Throws ArgumentError when the packet does not fit the box
/// in position or in momentum.
PreparedPacket prepare_gaussian_packet(const DiracSymbol& sym, const GridSpec& grid, const Vec3& q0, const Vec3& p0,
                                       double sigma, const Spinor4& phi0, bool parallel = true);

struct SplitStepConfig {
  double dt = 0.01;
  long n_steps = 0;
  /// 2: Strang splitting; 4: symmetric triple-jump composition of Strang steps.
  int order = 2;
};

/// exp(-i dt H / eps) by operator splitting: pointwise potential exponentials
/// exp(-i tau (e phi - e gamma0 gamma . A)) in closed form and exact per-mode
/// kinetic exponentials cos(theta) - i sin(theta) K / p0 in Fourier space.
class SplitStepper {
 public:
  SplitStepper(const DiracSymbol& sym, const GridSpec& grid, double dt, int order = 2, bool parallel = true);

  void step(GridSpinor& psi) const;
  void run(GridSpinor& psi, long n_steps) const;
  double dt() const { return dt_; }

 private:
  struct Stage {
    const kernels::MatrixField* potential;
    const kernels::MatrixField* kinetic;  // null for the closing potential stage
  };
  kernels::MatrixField potential_table(double tau) const;
  kernels::MatrixField kinetic_table(double tau) const;

  DiracSymbol sym_;
  GridSpec grid_;
  double dt_;
  bool parallel_;
  std::shared_ptr<SpinorFft> fft_;
  std::vector<kernels::MatrixField> tables_;
  std::vector<Stage> stages_;
};

GridSpinor evolve_split_step(const GridSpinor& psi, const SplitStepConfig& cfg, const DiracSymbol& sym,
                             bool parallel = true);

/// Exact free propagation: per-mode exp(-i t c K(eps xi) / eps). Requires a field-free symbol.
GridSpinor free_propagate(const GridSpinor& psi, double t, const ParticleParams& params);

struct GridObservables {
  double t = 0.0;
  std::array<double, 2> mean_x{0.0, 0.0};
  std::array<double, 2> mean_p{0.0, 0.0};
  double norm_err = 0.0;
  bool has_band = false;
  double band_occupation = 0.0;
  Vec3 s = Vec3::Zero();
};

/// Position and momentum centroids always; band occupation <psi, Op(P+) psi> and
/// s_k = <psi, Op(P+ (e_k . S) P+) psi> when `weyl` is set.
GridObservables grid_observables(const GridSpinor& psi, const DiracSymbol& sym, bool weyl = true,
                                 bool parallel = true);

/// P+ and P+ (e_k . S) P+ for k = x, y, z, as one grid symbol.
GridSymbol band_observable_symbol(const DiracSymbol& sym);

void write_observables_csv(std::ostream& out, const std::vector<GridObservables>& series, int dim);

/// Flat little-endian dump of |psi|^2: int32 dim, int32 n[2], float64 L[2], float64 t,
/// then nodes float64 values (x fastest).
void write_density_snapshot(std::ostream& out, const GridSpinor& psi, double t);

struct ConvergenceSetup {
  FieldConfig fields;
  ParticleParams params;
  Vec3 q0 = Vec3::Zero();
  Vec3 p0 = Vec3::Zero();  // canonical momentum
  Vec3 spin_axis{0, 0, 1};
  std::vector<double> eps_list{0.2, 0.1, 0.05};
  double t_final = 1.0;
  GridSpec grid;             // eps is overwritten per run
  double sigma_coeff = 1.0;  // sigma = sigma_coeff * sqrt(eps)
  double dt_coeff = 0.2;     // dt = dt_coeff * eps^1.5
  int order = 2;
  int samples = 4;           // observable samples after t = 0
  bool parallel = true;
};

struct ConvergenceRun {
  double eps = 0.0;
  double sigma = 0.0;
  double dt = 0.0;
  long steps = 0;
  double err_x = 0.0;
  /// max_t |occ(t) - occ(0)| with occ = <psi, Op(P+) psi>
  double leak = 0.0;
  double err_s = 0.0;
  double norm_drift = 0.0;
  /// 1 - occ(0); O(eps) and negative, as Op(P+) is not exactly idempotent
  double occupation_defect = 0.0;
  std::vector<GridObservables> series;
  std::vector<Vec3> q_classical;
  std::vector<Vec3> s_bmt;
};

struct ConvergenceReport {
  std::vector<ConvergenceRun> runs;
  // log(err_i / err_{i+1}) / log(eps_i / eps_{i+1}) between consecutive runs
  std::vector<double> order_x, order_leak, order_s;
};

ConvergenceReport convergence_study(const ConvergenceSetup& setup);

/// {eps -> {err_x, leak, err_s, order_estimates}} as JSON text.
std::string convergence_report_json(const ConvergenceReport& report);

/// The 2D uniform magnetic field cyclotron study: e = -1, m = c = 1, B = z in the
/// Landau gauge, orbit of radius 1 about the origin started at (0, -1) with
/// kinetic momentum (1, 0), half a period, 256^2 grid on an 8 x 8 box.
ConvergenceSetup cyclotron_convergence_setup();

}  // namespace scdirac
