#include "mfsda/dataset.hpp"

#include "mfsda/error.hpp"

namespace mfsda {

void Dataset::validate() const {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::InternalContractViolation, "dataset response length differs from covariate rows");
  }
  if (!names.empty() && names.size() != x.cols()) {
    throw Error(ErrorCode::InternalContractViolation, "dataset feature-name count differs from covariate columns");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.x = select_rows(x, rows);
  out.y.reserve(rows.size());
  for (std::size_t r : rows) out.y.push_back(y[r]);
  out.names = names;
  return out;
}

std::string Dataset::feature_name(std::size_t j) const {
  if (j < names.size()) return names[j];
  return "x" + std::to_string(j + 1);
}

}  // namespace mfsda
