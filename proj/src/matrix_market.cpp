/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/matrix_market.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace spbe {

namespace {

enum class Format { Coordinate, Array };
enum class FieldType { Real, Integer, Complex };
enum class Symmetry { General, Symmetric, SkewSymmetric, Hermitian };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw Error(ErrorCode::Io, "cannot open " + path.string());
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Parse, path_.string() + ":" + std::to_string(line_no_) + ": " + what);
  }

  bool next_raw(std::string& line) {
    if (!std::getline(in_, line)) {
      ++line_no_;
      return false;
    }
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  // Next line that is neither blank nor a comment.
  bool next_content(std::vector<std::string_view>& tokens) {
    while (next_raw(current_)) {
      if (!current_.empty() && current_[0] == '%') continue;
      tokens = split_ws(current_);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  template <typename T>
  T number(std::string_view tok, const char* what) const {
    T value{};
    const char* first = tok.data();
    if (!tok.empty() && tok[0] == '+') ++first;
    const auto res = std::from_chars(first, tok.data() + tok.size(), value);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      fail(std::string("invalid ") + what + " '" + std::string(tok) + "'");
    }
    return value;
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string current_;
  long line_no_ = 0;
};

}  // namespace

ComplexMatrix read_matrix_market(const std::filesystem::path& path) {
  Reader rd(path);
  std::string header;
  if (!rd.next_raw(header)) rd.fail("empty file");
  const auto head = split_ws(header);
  if (head.size() != 5 || lower(std::string(head[0])) != "%%matrixmarket" ||
      lower(std::string(head[1])) != "matrix") {
    rd.fail("missing '%%MatrixMarket matrix <format> <field> <symmetry>' header");
  }
  const std::string fmt = lower(std::string(head[2]));
  const std::string fld = lower(std::string(head[3]));
  const std::string sym = lower(std::string(head[4]));

  Format format;
  if (fmt == "coordinate") format = Format::Coordinate;
  else if (fmt == "array") format = Format::Array;
  else rd.fail("unsupported format '" + fmt + "'");

  FieldType field;
  if (fld == "real" || fld == "double") field = FieldType::Real;
  else if (fld == "integer") field = FieldType::Integer;
  else if (fld == "complex") field = FieldType::Complex;
  else rd.fail("unsupported field '" + fld + "'");

  Symmetry symmetry;
  if (sym == "general") symmetry = Symmetry::General;
  else if (sym == "symmetric") symmetry = Symmetry::Symmetric;
  else if (sym == "skew-symmetric") symmetry = Symmetry::SkewSymmetric;
  else if (sym == "hermitian") symmetry = Symmetry::Hermitian;
  else rd.fail("unsupported symmetry '" + sym + "'");
  if (symmetry == Symmetry::Hermitian && field != FieldType::Complex) {
    rd.fail("hermitian symmetry requires the complex field");
  }

  std::vector<std::string_view> tok;
  if (!rd.next_content(tok)) rd.fail("missing size line");
  const std::size_t size_tokens = format == Format::Coordinate ? 3 : 2;
  if (tok.size() != size_tokens) rd.fail("malformed size line");
  const Index rows = rd.number<Index>(tok[0], "row count");
  const Index cols = rd.number<Index>(tok[1], "column count");
  if (rows < 0 || cols < 0) rd.fail("negative dimension");
  if (symmetry != Symmetry::General && rows != cols) rd.fail("symmetric storage needs a square matrix");

  const std::size_t value_tokens = field == FieldType::Complex ? 2 : 1;
  RealMatrix re = RealMatrix::Zero(rows, cols), im = RealMatrix::Zero(rows, cols);

  auto place = [&](Index i, Index j, double a, double b) {
    if (symmetry != Symmetry::General && i < j) rd.fail("entry above the diagonal in symmetric storage");
    if (symmetry == Symmetry::SkewSymmetric && i == j) rd.fail("nonzero diagonal in skew-symmetric storage");
    if (symmetry == Symmetry::Hermitian && i == j && b != 0.0) {
      rd.fail("hermitian diagonal entry must be real");
    }
    re(i, j) += a;
    im(i, j) += b;
    if (i == j || symmetry == Symmetry::General) return;
    switch (symmetry) {
      case Symmetry::Symmetric: re(j, i) += a; im(j, i) += b; break;
      case Symmetry::SkewSymmetric: re(j, i) -= a; im(j, i) -= b; break;
      case Symmetry::Hermitian: re(j, i) += a; im(j, i) -= b; break;
      default: break;
    }
  };
  auto value_of = [&](std::size_t at) {
    const double a = field == FieldType::Integer
                         ? static_cast<double>(rd.number<long long>(tok[at], "value"))
                         : rd.number<double>(tok[at], "value");
    const double b = value_tokens == 2 ? rd.number<double>(tok[at + 1], "value") : 0.0;
    return std::array<double, 2>{a, b};
  };

  if (format == Format::Coordinate) {
    const Index nnz = rd.number<Index>(tok[2], "entry count");
    if (nnz < 0) rd.fail("negative entry count");
    for (Index k = 0; k < nnz; ++k) {
      if (!rd.next_content(tok)) {
        rd.fail("unexpected end of file: expected " + std::to_string(nnz) + " entries, found " +
                std::to_string(k));
      }
      if (tok.size() != 2 + value_tokens) rd.fail("malformed entry line");
      const Index i = rd.number<Index>(tok[0], "row index") - 1;
      const Index j = rd.number<Index>(tok[1], "column index") - 1;
      if (i < 0 || i >= rows || j < 0 || j >= cols) rd.fail("index out of range");
      const auto v = value_of(2);
      place(i, j, v[0], v[1]);
    }
  } else {
    for (Index j = 0; j < cols; ++j) {
      const Index first = symmetry == Symmetry::General      ? 0
                          : symmetry == Symmetry::SkewSymmetric ? j + 1
                                                                : j;
      for (Index i = first; i < rows; ++i) {
        if (!rd.next_content(tok)) rd.fail("unexpected end of file in array data");
        if (tok.size() != value_tokens) rd.fail("malformed array entry");
        const auto v = value_of(0);
        place(i, j, v[0], v[1]);
      }
    }
  }
  if (rd.next_content(tok)) rd.fail("unexpected data after the last entry");
  return ComplexMatrix(std::move(re), std::move(im));
}

ComplexVector read_matrix_market_vector(const std::filesystem::path& path) {
  const ComplexMatrix m = read_matrix_market(path);
  if (m.cols() != 1) {
    throw Error(ErrorCode::Parse, path.string() + ": expected a single-column vector, got " +
                                      std::to_string(m.cols()) + " columns");
  }
  return ComplexVector(m.re().col(0), m.im().col(0));
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::Io, "cannot rename to " + path.string() + ": " + ec.message());
  }
}

void write_matrix_market(const std::filesystem::path& path, const ComplexMatrix& m,
                         MmSymmetry symmetry) {
  const bool hermitian =
      symmetry == MmSymmetry::Hermitian || (symmetry == MmSymmetry::Auto && m.is_hermitian());
  if (hermitian && !m.is_hermitian()) {
    throw Error(ErrorCode::StructureViolation, "matrix is not Hermitian");
  }
  std::ostringstream body;
  Index nnz = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = hermitian ? j : 0; i < m.rows(); ++i) {
      const double a = m.re()(i, j), b = m.im()(i, j);
      if (a == 0.0 && b == 0.0) continue;
      body << i + 1 << ' ' << j + 1 << ' ' << format_double(a) << ' ' << format_double(b) << '\n';
      ++nnz;
    }
  std::ostringstream out;
  out << "%%MatrixMarket matrix coordinate complex " << (hermitian ? "hermitian" : "general")
      << '\n'
      << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n'
      << body.str();
  write_file_atomic(path, out.str());
}

void write_matrix_market_vector(const std::filesystem::path& path, const ComplexVector& v) {
  std::ostringstream out;
  out << "%%MatrixMarket matrix array complex general\n" << v.size() << " 1\n";
  for (Index i = 0; i < v.size(); ++i) {
    out << format_double(v.re()(i)) << ' ' << format_double(v.im()(i)) << '\n';
  }
  write_file_atomic(path, out.str());
}

}  // namespace spbe
