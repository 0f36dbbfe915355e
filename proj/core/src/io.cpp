#include "rdsmc/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

namespace rdsmc::io {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError("not a decimal number: '" + std::string(token) + "'");
  }
  return value;
}

namespace {

std::string next_token(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw ParseError(std::string("unexpected end of input while reading ") + what);
  return tok;
}

std::size_t parse_count(const std::string& tok, const char* what) {
  std::size_t value = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw ParseError(std::string("expected a non-negative integer for ") + what + ", got '" + tok + "'");
  }
  return value;
}

State parse_label(const std::string& tok, std::size_t n) {
  const std::size_t label = parse_count(tok, "state label");
  if (label < 1 || label > n) {
    throw ParseError("state label " + tok + " outside 1.." + std::to_string(n));
  }
  return label - 1;
}

void expect_end(std::istream& in) {
  std::string extra;
  if (in >> extra) throw ParseError("trailing content: '" + extra + "'");
}

std::vector<State> read_image(std::istream& in, std::size_t n) {
  std::vector<State> image(n);
  for (auto& x : image) x = parse_label(next_token(in, "map image"), n);
  return image;
}

void write_image(std::ostream& out, const DeterministicMap& alpha) {
  for (State i = 0; i < alpha.size(); ++i) {
    if (i) out << ' ';
    out << alpha(i) + 1;
  }
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

StochasticMatrix read_matrix(std::istream& in) {
  const std::size_t n = parse_count(next_token(in, "dimension"), "dimension");
  if (n == 0) throw ParseError("dimension must be positive");
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = parse_double(next_token(in, "matrix entry"));
  }
  expect_end(in);
  return StochasticMatrix(std::move(m));
}

void write_matrix(std::ostream& out, const StochasticMatrix& m) {
  const std::size_t n = m.size();
  out << n << '\n';
  for (State i = 0; i < n; ++i) {
    for (State j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

DeterministicMap read_map(std::istream& in) {
  const std::size_t n = parse_count(next_token(in, "dimension"), "dimension");
  if (n == 0) throw ParseError("dimension must be positive");
  auto image = read_image(in, n);
  expect_end(in);
  return DeterministicMap(std::move(image));
}

void write_map(std::ostream& out, const DeterministicMap& alpha) {
  out << alpha.size() << '\n';
  write_image(out, alpha);
  out << '\n';
}

RDSMeasure read_rds(std::istream& in) {
  const std::size_t n = parse_count(next_token(in, "dimension"), "dimension");
  const std::size_t k = parse_count(next_token(in, "support size"), "support size");
  if (n == 0 || k == 0) throw ParseError("dimension and support size must be positive");
  std::vector<WeightedMap> support;
  support.reserve(k);
  for (std::size_t a = 0; a < k; ++a) {
    const double w = parse_double(next_token(in, "weight"));
    support.push_back({DeterministicMap(read_image(in, n)), w});
  }
  expect_end(in);
  return RDSMeasure(std::move(support));
}

void write_rds(std::ostream& out, const RDSMeasure& q) {
  out << q.state_count() << ' ' << q.support().size() << '\n';
  for (const auto& [alpha, w] : q.support()) {
    out << format_double(w) << ' ';
    write_image(out, alpha);
    out << '\n';
  }
}

StochasticMatrix load_matrix(const std::filesystem::path& path) {
  auto in = open(path);
  return read_matrix(in);
}

DeterministicMap load_map(const std::filesystem::path& path) {
  auto in = open(path);
  return read_map(in);
}

RDSMeasure load_rds(const std::filesystem::path& path) {
  auto in = open(path);
  return read_rds(in);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace rdsmc::io
