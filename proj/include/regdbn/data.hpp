#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regdbn/matrix.hpp"
#include "regdbn/rng.hpp"

namespace regdbn {

// Feature matrix plus target vector, with optional per-row year labels.
// Immutable after construction by convention; every operation returns a
// fresh Dataset.
struct Dataset {
    Matrix features;
    VectorD targets;
    std::vector<std::string> feature_names;
    std::vector<int> years; // empty when the source had no year column
    std::string target_name = "target";

    std::size_t n_rows() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }
    bool has_years() const { return !years.empty(); }

    void validate() const;
};

// Header row of a CSV file, for callers that need to probe column names.
std::vector<std::string> csv_header(const std::string& path);

// Strict CSV ingest: header row mandatory, every non-target non-year column
// becomes a feature in header order, numeric parsing rejects anything that
// is not a full decimal literal. Row numbers in error messages are physical
// line numbers (the header is row 1).
Dataset load_csv(const std::string& path, const std::string& target_column,
                 const std::optional<std::string>& year_column = std::nullopt);

// Inverse of load_csv: features, target, then year. Floats carry 17
// significant digits so the round trip is exact.
void write_csv(const Dataset& ds, const std::string& path);

// Partition rows by year membership, preserving order within each part.
std::pair<Dataset, Dataset> split_by_year(const Dataset& ds,
                                          const std::vector<int>& train_years,
                                          const std::vector<int>& test_years);

// ceil(fraction * n) rows drawn without replacement; result order is the
// draw order, so fraction 1.0 yields a permutation.
Dataset subsample(const Dataset& ds, double fraction, RngStream& stream);

} // namespace regdbn
