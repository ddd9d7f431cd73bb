#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mfsda/dataset.hpp"
#include "mfsda/selector.hpp"

namespace mfsda::io {

// Parses a headered CSV. `response` names a header or, failing that, gives a
// 1-based column number. Every other column becomes a covariate.
// Errors: FileNotFound, IoError (malformed/ragged), DuplicateHeader,
// ColumnNotFound, MissingValue ("", NA, NaN, null), NonNumeric (incl. ±Inf).
Dataset read_dataset(const std::string& path, std::string_view response);
Dataset parse_dataset(std::istream& in, std::string_view response, const std::string& source = "<stream>");

// Header is `response_name` followed by the feature names; values use
// round-trip precision.
void write_dataset(std::ostream& out, const Dataset& d, std::string_view response_name = "y");
void write_dataset(const std::string& path, const Dataset& d, std::string_view response_name = "y");

// Field names: threshold (null when +∞), selected_indices (1-based),
// selected_names, w_statistics, alpha, mode, rule, screened_set (1-based),
// transform, diagnostics.
nlohmann::json to_json(const selector::SelectionResult& r, const Dataset& d,
                       const transforms::TransformSpec& spec);

// Plain-text report: threshold, then one line per selected feature.
void write_summary(std::ostream& out, const selector::SelectionResult& r, const Dataset& d);

}  // namespace mfsda::io
