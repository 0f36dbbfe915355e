#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rdsmc/core.hpp"
#include "rdsmc/rds.hpp"

namespace rdsmc::io {

// All file formats use 1-indexed state labels. Decimals are written in the
// shortest form that parses back to the same double, so files round-trip
// bit-exactly.
//
//   matrix:  n
//            n rows of n whitespace-separated decimals
//   map:     n
//            alpha(1) ... alpha(n)
//   rds:     n k
//            k lines of: weight alpha(1) ... alpha(n)

/// Shortest round-trip decimal representation of x.
std::string format_double(double x);
/// Parses a full token as a double; throws ParseError.
double parse_double(std::string_view token);

StochasticMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const StochasticMatrix& m);

DeterministicMap read_map(std::istream& in);
void write_map(std::ostream& out, const DeterministicMap& alpha);

RDSMeasure read_rds(std::istream& in);
void write_rds(std::ostream& out, const RDSMeasure& q);

StochasticMatrix load_matrix(const std::filesystem::path& path);
DeterministicMap load_map(const std::filesystem::path& path);
RDSMeasure load_rds(const std::filesystem::path& path);

/// Reads the whole file as bytes.
std::string slurp(const std::filesystem::path& path);

}  // namespace rdsmc::io
