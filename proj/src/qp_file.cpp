#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "asabcp/problems.hpp"

namespace asabcp {

ParseError::ParseError(long line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

/// Whitespace tokenizer over the stream, line-aware, '#' to end of line is a
/// comment.
class TokenReader {
public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool next(std::string& token) {
    while (true) {
      if (pos_ >= line_.size()) {
        if (!std::getline(in_, line_)) return false;
        ++line_no_;
        pos_ = 0;
        continue;
      }
      const char c = line_[pos_];
      if (c == '#') {
        pos_ = line_.size();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      std::size_t end = pos_;
      while (end < line_.size() &&
             !std::isspace(static_cast<unsigned char>(line_[end])) &&
             line_[end] != '#') {
        ++end;
      }
      token = line_.substr(pos_, end - pos_);
      pos_ = end;
      return true;
    }
  }

  std::string require(const char* what) {
    std::string token;
    if (!next(token)) {
      throw ParseError(line_no_, std::string("unexpected end of input, expected ") + what);
    }
    return token;
  }

  long line() const { return line_no_; }

private:
  std::istream& in_;
  std::string line_;
  std::size_t pos_ = 0;
  long line_no_ = 0;
};

long parse_integer(TokenReader& reader, const char* what) {
  const std::string token = reader.require(what);
  try {
    std::size_t used = 0;
    const long value = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw ParseError(reader.line(), std::string("expected integer for ") + what +
                                        ", got '" + token + "'");
  }
}

double parse_real(TokenReader& reader, const char* what, bool allow_inf) {
  const std::string token = reader.require(what);
  if (allow_inf) {
    if (token == "inf" || token == "+inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
  }
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
  } catch (const std::exception&) {
    throw ParseError(reader.line(), std::string("expected real for ") + what +
                                        ", got '" + token + "'");
  }
  if (!allow_inf && !std::isfinite(value)) {
    throw ParseError(reader.line(), std::string("non-finite value for ") + what);
  }
  return value;
}

void expect_keyword(TokenReader& reader, const char* keyword) {
  const std::string token = reader.require(keyword);
  if (token != keyword) {
    throw ParseError(reader.line(), std::string("expected '") + keyword +
                                        "', got '" + token + "'");
  }
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

QpData read_qp(std::istream& in) {
  TokenReader reader(in);
  expect_keyword(reader, "qp");
  const long version = parse_integer(reader, "format version");
  if (version != 1) {
    throw ParseError(reader.line(), "unsupported format version " + std::to_string(version));
  }
  expect_keyword(reader, "n");
  const long n = parse_integer(reader, "dimension");
  if (n < 1) throw ParseError(reader.line(), "dimension must be at least 1");

  QpData data;
  data.n = n;

  expect_keyword(reader, "Q");
  const long nnz = parse_integer(reader, "triplet count");
  if (nnz < 0) throw ParseError(reader.line(), "negative triplet count");
  std::set<std::pair<Index, Index>> seen;
  data.upper_triangle.reserve(static_cast<std::size_t>(nnz));
  for (long t = 0; t < nnz; ++t) {
    const long i = parse_integer(reader, "row index");
    const long j = parse_integer(reader, "column index");
    const double value = parse_real(reader, "matrix value", false);
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw ParseError(reader.line(), "index out of range");
    }
    if (i > j) {
      throw ParseError(reader.line(), "triplets must have row <= column");
    }
    if (!seen.insert({i, j}).second) {
      throw ParseError(reader.line(), "duplicate triplet");
    }
    data.upper_triangle.push_back({i, j, value});
  }

  data.linear.resize(n);
  expect_keyword(reader, "c");
  for (long i = 0; i < n; ++i) data.linear[i] = parse_real(reader, "linear term", false);
  data.lower.resize(n);
  expect_keyword(reader, "l");
  for (long i = 0; i < n; ++i) data.lower[i] = parse_real(reader, "lower bound", true);
  data.upper.resize(n);
  expect_keyword(reader, "u");
  for (long i = 0; i < n; ++i) data.upper[i] = parse_real(reader, "upper bound", true);

  for (long i = 0; i < n; ++i) {
    if (!(data.lower[i] < data.upper[i])) {
      throw ParseError(reader.line(), "lower bound not strictly below upper bound");
    }
  }
  std::string extra;
  if (reader.next(extra)) {
    throw ParseError(reader.line(), "trailing content '" + extra + "'");
  }
  return data;
}

QpData read_qp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open QP file '" + path + "'");
  }
  return read_qp(in);
}

void write_qp(const QpData& data, std::ostream& out) {
  out << "qp 1\n";
  out << "n " << data.n << "\n";
  out << "Q " << data.upper_triangle.size() << "\n";
  for (const QpTriplet& t : data.upper_triangle) {
    out << t.row << ' ' << t.col << ' ' << format_real(t.value) << "\n";
  }
  out << "c";
  for (Index i = 0; i < data.n; ++i) out << ' ' << format_real(data.linear[i]);
  out << "\nl";
  for (Index i = 0; i < data.n; ++i) out << ' ' << format_real(data.lower[i]);
  out << "\nu";
  for (Index i = 0; i < data.n; ++i) out << ' ' << format_real(data.upper[i]);
  out << "\n";
}

void write_qp_file(const QpData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  write_qp(data, out);
}

ProblemInstance load_qp(const std::string& path) {
  const QpData data = read_qp_file(path);
  return make_qp_instance(data, path);
}

}  // namespace asabcp
