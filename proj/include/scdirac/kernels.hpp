#pragma once

// Data-parallel hot loops of the grid propagator. The serial and OpenMP
// versions produce bitwise identical results: pointwise kernels are
// order-independent, and reductions sum fixed-size chunks in a fixed order.

#include "scdirac/linalg.hpp"

#include <Eigen/StdVector>

#include <cstddef>
#include <vector>

namespace scdirac::kernels {

using MatrixField = std::vector<ComplexMatrix4, Eigen::aligned_allocator<ComplexMatrix4>>;

/// Elements per partial sum in the reductions.
constexpr std::size_t kChunk = 4096;

namespace serial {
/// psi_i <- M_i psi_i for every node i (four interleaved components per node).
void apply_node_matrices(const MatrixField& m, Complex* data);
/// psi_i <- phase_i psi_i.
void scale_nodes(const std::vector<Complex>& phase, Complex* data);
/// |psi_i|^2 summed over the four components, per node.
void node_density(const Complex* data, std::size_t nodes, double* out);
double sum_abs2(const Complex* data, std::size_t n);
double sum(const double* x, std::size_t n);
}  // namespace serial

namespace parallel {
void apply_node_matrices(const MatrixField& m, Complex* data);
void scale_nodes(const std::vector<Complex>& phase, Complex* data);
void node_density(const Complex* data, std::size_t nodes, double* out);
double sum_abs2(const Complex* data, std::size_t n);
double sum(const double* x, std::size_t n);
}  // namespace parallel

}  // namespace scdirac::kernels
