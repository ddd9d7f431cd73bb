#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mfsda/matrix.hpp"

namespace mfsda {

// Response vector paired with an n×p covariate matrix.
struct Dataset {
  Matrix x;
  std::vector<double> y;
  std::vector<std::string> names;  // empty or length p

  std::size_t n() const noexcept { return y.size(); }
  std::size_t p() const noexcept { return x.cols(); }

  // Throws InternalContractViolation when shapes disagree.
  void validate() const;
  Dataset subset(std::span<const std::size_t> rows) const;
  // Feature name for 0-based column j, "x<j+1>" when unnamed.
  std::string feature_name(std::size_t j) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace mfsda
