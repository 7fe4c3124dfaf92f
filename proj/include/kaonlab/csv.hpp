// csv.hpp
// Asymmetry dataset ingestion and emission. Input schema (header required):
//   t_l,t_r,asym,sigma
// with times in tau_S units. Errors carry the offending 1-based line number.
#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kaonlab/config.hpp"
#include "kaonlab/decoherence.hpp"

namespace kaonlab {

class CsvError : public std::runtime_error {
  public:
    CsvError(const std::string& what, int line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline double csv_double(const std::string& s, const char* column, int lineno) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw CsvError(std::string("non-numeric value in column '") + column + "'", lineno);
    }
    if (pos != s.size())
        throw CsvError(std::string("trailing junk in column '") + column + "'", lineno);
    return v;
}

}  // namespace detail

inline AsymmetryDataset ingest_csv(std::istream& in, const std::string& source_label) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError("empty file, expected header t_l,t_r,asym,sigma", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = detail::split_fields(line);
    const std::vector<std::string> expected = {"t_l", "t_r", "asym", "sigma"};
    if (header.size() != expected.size())
        throw CsvError("header must have 4 columns t_l,t_r,asym,sigma", 1);
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (header[i] != expected[i])
            throw CsvError("missing or misnamed column '" + expected[i] + "' (got '" +
                               header[i] + "')",
                           1);

    AsymmetryDataset data;
    data.source = source_label;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 4) throw CsvError("expected 4 comma-separated values", lineno);
        AsymmetryPoint row;
        row.t_l = detail::csv_double(fields[0], "t_l", lineno);
        row.t_r = detail::csv_double(fields[1], "t_r", lineno);
        row.asym = detail::csv_double(fields[2], "asym", lineno);
        row.sigma = detail::csv_double(fields[3], "sigma", lineno);
        if (!(row.t_l >= 0.0) || !(row.t_r >= 0.0))
            throw CsvError("times must be >= 0", lineno);
        if (!(row.sigma > 0.0)) throw CsvError("sigma must be > 0", lineno);
        data.rows.push_back(row);
    }
    if (data.rows.empty()) throw CsvError("no data rows", lineno + 1);
    return data;
}

inline AsymmetryDataset ingest_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open '" + path + "'", 0);
    return ingest_csv(in, path);
}

// Shortest round-trippable decimal form; keeps emitted files byte-stable.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_dataset_csv(std::ostream& out, const AsymmetryDataset& data) {
    out << "t_l,t_r,asym,sigma\n";
    for (const auto& row : data.rows)
        out << format_number(row.t_l) << ',' << format_number(row.t_r) << ','
            << format_number(row.asym) << ',' << format_number(row.sigma) << '\n';
}

}  // namespace kaonlab
