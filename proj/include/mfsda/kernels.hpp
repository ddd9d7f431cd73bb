#pragma once

// Data-parallel inner loops shared by the linear algebra, LASSO and transform
// code. Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at startup from CPUID and can be
// overridden (tests pin both to compare them).

#include <cstddef>
#include <span>
#include <string_view>

namespace mfsda::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct Table {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // x += c
  void (*add_scalar)(double c, double* x, std::size_t n);
  // x *= c
  void (*scale)(double c, double* x, std::size_t n);
};

namespace scalar {
const Table& table();
}
namespace avx2 {
// Null when the translation unit was built without AVX2 support.
const Table* table();
}

bool available(Isa isa);
Isa best_available();

// Throws mfsda::Error(InvalidConfig) if the ISA is not usable on this host.
void set_active(Isa isa);
Isa active();
const Table& active_table();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active_table().dot(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active_table().axpy(a, x.data(), y.data(), x.size());
}
inline double sum(std::span<const double> x) {
  return active_table().sum(x.data(), x.size());
}
inline void add_scalar(double c, std::span<double> x) {
  active_table().add_scalar(c, x.data(), x.size());
}
inline void scale(double c, std::span<double> x) {
  active_table().scale(c, x.data(), x.size());
}

}  // namespace mfsda::kernels
