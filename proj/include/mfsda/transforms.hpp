#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mfsda/matrix.hpp"

namespace mfsda::transforms {

// Slice indicator, Y·indicator, or Yᵐ·indicator.
enum class Family { Indicator, Cire, Poly };

std::string_view to_string(Family f);
// Accepts "indicator", "cire", "poly"; throws InvalidConfig otherwise.
Family parse_family(std::string_view name);

struct TransformSpec {
  Family family = Family::Indicator;
  std::size_t slices = 4;  // working dimension H
  int poly_degree = 2;

  // Throws InvalidConfig unless slices ≥ 2 and poly_degree ≥ 1.
  void validate() const;
};

class SliceBoundaries {
 public:
  SliceBoundaries() = default;
  explicit SliceBoundaries(std::vector<double> cutpoints);

  const std::vector<double>& cutpoints() const noexcept { return cutpoints_; }
  std::size_t slices() const noexcept { return cutpoints_.size() + 1; }

  // Slice h (0-based) holds b_{h-1} < y ≤ b_h, so ties at a cutpoint fall in
  // the lower slice.
  std::size_t slice_of(double y) const;

 private:
  std::vector<double> cutpoints_;
};

// Linear-interpolation empirical quantile of already sorted data.
double quantile_sorted(std::span<const double> sorted, double prob);

// Cutpoints at the k/H empirical quantiles, k = 1..H-1.
// Throws InsufficientDistinctResponses when y has fewer than 2H distinct
// values and DegenerateSlicing when a slice would be empty.
SliceBoundaries make_slice_boundaries(std::span<const double> y, std::size_t slices);

// n×H matrix before centering.
Matrix raw_transform(const TransformSpec& spec, std::span<const double> y, const SliceBoundaries& b);

// n×H matrix with every column mean-centered.
Matrix apply_transform(const TransformSpec& spec, std::span<const double> y, const SliceBoundaries& b);

// Convenience: boundaries from y itself, then apply_transform.
Matrix transform_response(const TransformSpec& spec, std::span<const double> y);

}  // namespace mfsda::transforms
