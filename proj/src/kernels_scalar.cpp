#include "mfsda/kernels.hpp"

namespace mfsda::kernels::scalar {
namespace {

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void add_scalar(double c, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] += c;
}

void scale(double c, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= c;
}

}  // namespace

const Table& table() {
  static const Table t{Isa::Scalar, dot, axpy, sum, add_scalar, scale};
  return t;
}

}  // namespace mfsda::kernels::scalar
