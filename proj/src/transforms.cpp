#include "mfsda/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfsda/error.hpp"
#include "mfsda/linalg.hpp"

namespace mfsda::transforms {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Indicator: return "indicator";
    case Family::Cire: return "cire";
    case Family::Poly: return "poly";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "indicator") return Family::Indicator;
  if (name == "cire") return Family::Cire;
  if (name == "poly") return Family::Poly;
  throw Error(ErrorCode::InvalidConfig, "unknown transform family '" + std::string(name) + "'");
}

void TransformSpec::validate() const {
  if (slices < 2) throw Error(ErrorCode::InvalidConfig, "working dimension H must be at least 2");
  if (poly_degree < 1) throw Error(ErrorCode::InvalidConfig, "polynomial degree must be at least 1");
}

SliceBoundaries::SliceBoundaries(std::vector<double> cutpoints) : cutpoints_(std::move(cutpoints)) {
  for (std::size_t i = 1; i < cutpoints_.size(); ++i) {
    if (!(cutpoints_[i - 1] < cutpoints_[i])) {
      throw Error(ErrorCode::DegenerateSlicing, "slice cutpoints must be strictly increasing");
    }
  }
}

std::size_t SliceBoundaries::slice_of(double y) const {
  // first cutpoint b with y <= b
  auto it = std::lower_bound(cutpoints_.begin(), cutpoints_.end(), y);
  return static_cast<std::size_t>(it - cutpoints_.begin());
}

double quantile_sorted(std::span<const double> sorted, double prob) {
  const double pos = prob * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SliceBoundaries make_slice_boundaries(std::span<const double> y, std::size_t slices) {
  if (slices < 2) throw Error(ErrorCode::InvalidConfig, "working dimension H must be at least 2");
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t n_distinct = sorted.empty() ? 0 : 1;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] != sorted[i - 1]) ++n_distinct;
  if (n_distinct < 2 * slices) {
    throw Error(ErrorCode::InsufficientDistinctResponses,
                "need at least " + std::to_string(2 * slices) + " distinct responses for " +
                    std::to_string(slices) + " slices, found " + std::to_string(n_distinct));
  }

  std::vector<double> cuts(slices - 1);
  for (std::size_t k = 1; k < slices; ++k) {
    cuts[k - 1] = quantile_sorted(sorted, static_cast<double>(k) / static_cast<double>(slices));
  }
  const double lo = sorted.front();
  const double hi = sorted.back();
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (!(cuts[k] > lo && cuts[k] < hi) || (k > 0 && !(cuts[k - 1] < cuts[k]))) {
      throw Error(ErrorCode::DegenerateSlicing, "ties collapse slice " + std::to_string(k + 1));
    }
  }
  SliceBoundaries b(std::move(cuts));
  std::vector<std::size_t> counts(slices, 0);
  for (double v : sorted) ++counts[b.slice_of(v)];
  for (std::size_t h = 0; h < slices; ++h) {
    if (counts[h] == 0) throw Error(ErrorCode::DegenerateSlicing, "slice " + std::to_string(h + 1) + " is empty");
  }
  return b;
}

Matrix raw_transform(const TransformSpec& spec, std::span<const double> y, const SliceBoundaries& b) {
  spec.validate();
  if (b.slices() != spec.slices) {
    throw Error(ErrorCode::InternalContractViolation, "slice boundaries were built for a different H");
  }
  Matrix f(y.size(), spec.slices);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const std::size_t h = b.slice_of(y[i]);
    double v = 1.0;
    switch (spec.family) {
      case Family::Indicator: v = 1.0; break;
      case Family::Cire: v = y[i]; break;
      case Family::Poly: v = std::pow(y[i], spec.poly_degree); break;
    }
    f(i, h) = v;
  }
  return f;
}

Matrix apply_transform(const TransformSpec& spec, std::span<const double> y, const SliceBoundaries& b) {
  Matrix f = raw_transform(spec, y, b);
  linalg::center_columns_inplace(f);
  return f;
}

Matrix transform_response(const TransformSpec& spec, std::span<const double> y) {
  spec.validate();
  return apply_transform(spec, y, make_slice_boundaries(y, spec.slices));
}

}  // namespace mfsda::transforms
