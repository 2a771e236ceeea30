#include "scdirac/kernels.hpp"

#include <algorithm>

namespace scdirac::kernels {

namespace {

inline void apply_one(const ComplexMatrix4& m, Complex* v) {
  const Complex a = v[0], b = v[1], c = v[2], d = v[3];
  for (int r = 0; r < 4; ++r) v[r] = m(r, 0) * a + m(r, 1) * b + m(r, 2) * c + m(r, 3) * d;
}

std::size_t chunks(std::size_t n) { return (n + kChunk - 1) / kChunk; }

double chunk_abs2(const Complex* data, std::size_t n, std::size_t c) {
  double s = 0.0;
  const std::size_t end = std::min(n, (c + 1) * kChunk);
  for (std::size_t i = c * kChunk; i < end; ++i) s += std::norm(data[i]);
  return s;
}

double chunk_sum(const double* x, std::size_t n, std::size_t c) {
  double s = 0.0;
  const std::size_t end = std::min(n, (c + 1) * kChunk);
  for (std::size_t i = c * kChunk; i < end; ++i) s += x[i];
  return s;
}

double ordered_total(const std::vector<double>& partial) {
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace

namespace serial {

void apply_node_matrices(const MatrixField& m, Complex* data) {
  for (std::size_t i = 0; i < m.size(); ++i) apply_one(m[i], data + 4 * i);
}

void scale_nodes(const std::vector<Complex>& phase, Complex* data) {
  for (std::size_t i = 0; i < phase.size(); ++i) {
    for (int r = 0; r < 4; ++r) data[4 * i + r] *= phase[i];
  }
}

void node_density(const Complex* data, std::size_t nodes, double* out) {
  for (std::size_t i = 0; i < nodes; ++i) {
    out[i] = std::norm(data[4 * i]) + std::norm(data[4 * i + 1]) + std::norm(data[4 * i + 2]) + std::norm(data[4 * i + 3]);
  }
}

double sum_abs2(const Complex* data, std::size_t n) {
  std::vector<double> partial(chunks(n));
  for (std::size_t c = 0; c < partial.size(); ++c) partial[c] = chunk_abs2(data, n, c);
  return ordered_total(partial);
}

double sum(const double* x, std::size_t n) {
  std::vector<double> partial(chunks(n));
  for (std::size_t c = 0; c < partial.size(); ++c) partial[c] = chunk_sum(x, n, c);
  return ordered_total(partial);
}

}  // namespace serial

namespace parallel {

void apply_node_matrices(const MatrixField& m, Complex* data) {
  const auto n = static_cast<std::ptrdiff_t>(m.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) apply_one(m[static_cast<std::size_t>(i)], data + 4 * i);
}

void scale_nodes(const std::vector<Complex>& phase, Complex* data) {
  const auto n = static_cast<std::ptrdiff_t>(phase.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (int r = 0; r < 4; ++r) data[4 * i + r] *= phase[static_cast<std::size_t>(i)];
  }
}

void node_density(const Complex* data, std::size_t nodes, double* out) {
  const auto n = static_cast<std::ptrdiff_t>(nodes);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = std::norm(data[4 * i]) + std::norm(data[4 * i + 1]) + std::norm(data[4 * i + 2]) + std::norm(data[4 * i + 3]);
  }
}

double sum_abs2(const Complex* data, std::size_t n) {
  std::vector<double> partial(chunks(n));
  const auto nc = static_cast<std::ptrdiff_t>(partial.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) partial[static_cast<std::size_t>(c)] = chunk_abs2(data, n, static_cast<std::size_t>(c));
  return ordered_total(partial);
}

double sum(const double* x, std::size_t n) {
  std::vector<double> partial(chunks(n));
  const auto nc = static_cast<std::ptrdiff_t>(partial.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < nc; ++c) partial[static_cast<std::size_t>(c)] = chunk_sum(x, n, static_cast<std::size_t>(c));
  return ordered_total(partial);
}

}  // namespace parallel

}  // namespace scdirac::kernels
