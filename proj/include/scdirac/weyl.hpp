#pragma once

#include "scdirac/grid.hpp"

#include <functional>
#include <vector>

namespace scdirac {

/// One or more 4x4 symbols evaluated together at a phase point, for Weyl
/// quantization on a grid. `traits` must cover every member.
struct GridSymbol {
  int count = 1;
  std::function<void(const PhasePoint&, ComplexMatrix4* out)> eval;
  SymbolTraits traits;
};

GridSymbol make_grid_symbol(std::function<ComplexMatrix4(const PhasePoint&)> f, SymbolTraits traits);

/// Applies the Weyl quantization H(x, -i eps grad) of the first member of the
/// symbol. Symbols without q-dependence act as Fourier multipliers. Otherwise the
/// midpoint kernel is used along one axis; on 2D grids the symbol must not
/// depend on the other axis (ArgumentError), which is Fourier-diagonalized.
/// Nodes of a line with weight below 1e-24 of the line peak, and on 2D grids
/// Fourier lines below 1e-16 of the heaviest line, are treated as zero.
GridSpinor weyl_apply(const GridSymbol& symbol, const GridSpinor& psi, bool parallel = true);

/// <psi, Op(H_m) psi> for every member m (real parts; the symbols are Hermitian).
std::vector<double> weyl_expectations(const GridSymbol& symbol, const GridSpinor& psi, bool parallel = true);

/// Matrix Wigner function of a 1D spinor field,
///   W(x, p) = (2 pi)^-1 int psi(x - eps xi / 2) psi(x + eps xi / 2)^dagger e^{i p xi} d xi,
/// on the grid nodes x and the momenta p_k = eps * 2 pi k / L, k = -N/2 .. N/2-1.
/// The lag integral is cut at a quarter period, so the packet should fit in L/4.
/// Half-grid values come from band-limited Fourier interpolation.
struct WignerSlice {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<ComplexMatrix4, Eigen::aligned_allocator<ComplexMatrix4>> w;  // w[ix * p.size() + ip]
  const ComplexMatrix4& at(std::size_t ix, std::size_t ip) const { return w[ix * p.size() + ip]; }
};

/// Only every `x_stride`-th grid node is kept as an x row.
WignerSlice wigner_slice_1d(const GridSpinor& psi, int x_stride = 1);

}  // namespace scdirac
