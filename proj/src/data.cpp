#include "regdbn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace regdbn {

void Dataset::validate() const {
    if (features.cols < 1) throw InvalidInputError("Dataset: needs at least one feature");
    if (targets.size() != features.rows)
        throw DimensionError("Dataset: target length != row count");
    if (feature_names.size() != features.cols)
        throw DimensionError("Dataset: feature name count != column count");
    if (!years.empty() && years.size() != features.rows)
        throw DimensionError("Dataset: year label count != row count");
    if (!features.all_finite() || !all_finite(targets))
        throw InvalidInputError("Dataset: non-finite entry");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no,
                  const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw SchemaError("unparseable cell '" + cell + "' at row " +
                          std::to_string(line_no) + ", column " + column);
    return value;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

std::vector<std::string> csv_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError(path + ": missing header row");
    return split_line(strip_cr(line));
}

Dataset load_csv(const std::string& path, const std::string& target_column,
                 const std::optional<std::string>& year_column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw SchemaError(path + ": missing header row");
    const std::vector<std::string> header = split_line(strip_cr(line));

    std::size_t target_idx = header.size();
    std::size_t year_idx = header.size();
    std::vector<std::size_t> feature_cols;
    Dataset ds;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == target_column) {
            target_idx = j;
        } else if (year_column && header[j] == *year_column) {
            year_idx = j;
        } else {
            feature_cols.push_back(j);
            ds.feature_names.push_back(header[j]);
        }
    }
    if (target_idx == header.size())
        throw SchemaError(path + ": missing column " + target_column);
    if (year_column && year_idx == header.size())
        throw SchemaError(path + ": missing column " + *year_column);
    if (feature_cols.empty())
        throw SchemaError(path + ": no feature columns besides target/year");
    ds.target_name = target_column;

    std::vector<VectorD> rows;
    std::vector<double> targets;
    std::vector<int> years;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw SchemaError(path + ": row " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(header.size()));
        VectorD row(feature_cols.size());
        for (std::size_t k = 0; k < feature_cols.size(); ++k)
            row[k] = parse_cell(cells[feature_cols[k]], line_no, ds.feature_names[k]);
        rows.push_back(std::move(row));
        targets.push_back(parse_cell(cells[target_idx], line_no, target_column));
        if (year_column) {
            const double y = parse_cell(cells[year_idx], line_no, *year_column);
            if (y != std::floor(y))
                throw SchemaError(path + ": non-integer year at row " +
                                  std::to_string(line_no));
            years.push_back(static_cast<int>(y));
        }
    }
    if (rows.empty()) throw SchemaError(path + ": no data rows");

    ds.features = Matrix::from_rows(rows);
    ds.targets = std::move(targets);
    ds.years = std::move(years);
    ds.validate();
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);

    for (std::size_t j = 0; j < ds.feature_names.size(); ++j)
        out << ds.feature_names[j] << ',';
    out << ds.target_name;
    if (ds.has_years()) out << ",year";
    out << '\n';

    char buf[64];
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t j = 0; j < ds.n_features(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", ds.features.at(r, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", ds.targets[r]);
        out << buf;
        if (ds.has_years()) out << ',' << ds.years[r];
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

std::pair<Dataset, Dataset> split_by_year(const Dataset& ds,
                                          const std::vector<int>& train_years,
                                          const std::vector<int>& test_years) {
    ds.validate();
    if (!ds.has_years())
        throw InvalidInputError("split_by_year: dataset has no year labels");
    const std::set<int> train_set(train_years.begin(), train_years.end());
    const std::set<int> test_set(test_years.begin(), test_years.end());
    for (int y : train_set)
        if (test_set.count(y))
            throw InvalidInputError("split_by_year: year sets overlap at " +
                                    std::to_string(y));

    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        if (train_set.count(ds.years[r])) train_rows.push_back(r);
        else if (test_set.count(ds.years[r])) test_rows.push_back(r);
    }
    if (train_rows.empty()) throw InvalidInputError("split_by_year: empty training part");
    if (test_rows.empty()) throw InvalidInputError("split_by_year: empty testing part");

    const auto take = [&ds](const std::vector<std::size_t>& rows) {
        Dataset out;
        out.feature_names = ds.feature_names;
        out.target_name = ds.target_name;
        out.features = Matrix(rows.size(), ds.n_features());
        out.targets.resize(rows.size());
        out.years.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < ds.n_features(); ++j)
                out.features.at(i, j) = ds.features.at(rows[i], j);
            out.targets[i] = ds.targets[rows[i]];
            out.years[i] = ds.years[rows[i]];
        }
        return out;
    };
    return {take(train_rows), take(test_rows)};
}

Dataset subsample(const Dataset& ds, double fraction, RngStream& stream) {
    ds.validate();
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw InvalidInputError("subsample: fraction must lie in (0, 1]");
    const std::size_t n = ds.n_rows();
    const std::size_t m = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(n)));

    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(stream.next_below(n - i));
        std::swap(idx[i], idx[j]);
    }

    Dataset out;
    out.feature_names = ds.feature_names;
    out.target_name = ds.target_name;
    out.features = Matrix(m, ds.n_features());
    out.targets.resize(m);
    if (ds.has_years()) out.years.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < ds.n_features(); ++j)
            out.features.at(i, j) = ds.features.at(idx[i], j);
        out.targets[i] = ds.targets[idx[i]];
        if (ds.has_years()) out.years[i] = ds.years[idx[i]];
    }
    return out;
}

} // namespace regdbn
