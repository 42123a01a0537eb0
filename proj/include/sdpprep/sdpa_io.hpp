#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "sdpprep/problem.hpp"

namespace sdpprep {

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

// Whitespace-separated tokens with line tracking. Lines whose first
// non-space character is '*' or '"' are comments. Braces, parentheses and
// commas are tolerated as separators (SDPA block-size line convention).
class SdpaTokenizer {
 public:
  explicit SdpaTokenizer(std::istream& in) : in_(in) {}

  bool next(std::string& tok, int& line) {
    while (true) {
      if (pos_ >= line_.size()) {
        if (!std::getline(in_, line_)) return false;
        ++lineno_;
        pos_ = 0;
        std::size_t first = line_.find_first_not_of(" \t\r\n\f\v");
        if (first != std::string::npos &&
            (line_[first] == '*' || line_[first] == '"')) {
          pos_ = line_.size();
          continue;
        }
      }
      while (pos_ < line_.size() && is_sep(line_[pos_])) ++pos_;
      if (pos_ >= line_.size()) continue;
      std::size_t start = pos_;
      while (pos_ < line_.size() && !is_sep(line_[pos_])) ++pos_;
      tok = line_.substr(start, pos_ - start);
      line = lineno_;
      return true;
    }
  }

  int lineno() const { return lineno_; }

 private:
  static bool is_sep(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '{' ||
           c == '}' || c == '(' || c == ')';
  }

  std::istream& in_;
  std::string line_;
  std::size_t pos_ = 0;
  int lineno_ = 0;
};

inline long require_int(const std::string& tok, int line, const char* what) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, std::string("expected integer for ") + what +
                               ", got '" + tok + "'");
  return v;
}

inline double require_real(const std::string& tok, int line, const char* what) {
  char* end = nullptr;
  double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw ParseError(line, std::string("expected number for ") + what +
                               ", got '" + tok + "'");
  return v;
}

}  // namespace detail

// Reads the SDPA sparse format (.dat-s). The raw file data (C = matrix 0,
// A_i, b) is stored verbatim; `sense` records how it should be interpreted
// (SDPLib files are dual-form).
inline SdpProblem parse_sdpa(std::istream& in, DataSense sense = DataSense::dual) {
  detail::SdpaTokenizer tz(in);
  std::string tok;
  int line = 0;

  auto need = [&](const char* what) {
    if (!tz.next(tok, line))
      throw ParseError(tz.lineno() + 1, std::string("unexpected end of file, expected ") + what);
  };

  need("constraint count m");
  long m = detail::require_int(tok, line, "constraint count m");
  if (m < 0) throw ParseError(line, "negative constraint count");

  need("block count");
  long nblocks = detail::require_int(tok, line, "block count");
  if (nblocks <= 0) throw ParseError(line, "block count must be positive");

  std::vector<int> blocks(nblocks);
  std::vector<int> offsets(nblocks + 1, 0);
  for (long k = 0; k < nblocks; ++k) {
    need("block size");
    long s = detail::require_int(tok, line, "block size");
    if (s == 0) throw ParseError(line, "block size must be nonzero");
    blocks[k] = static_cast<int>(s);
    offsets[k + 1] = offsets[k] + static_cast<int>(std::abs(s));
  }
  int n = offsets[nblocks];

  std::vector<double> rhs(m);
  for (long i = 0; i < m; ++i) {
    need("objective value");
    rhs[i] = detail::require_real(tok, line, "objective value");
  }

  std::vector<std::vector<MatEntry>> mats(m + 1);
  std::set<std::tuple<long, long, int, int>> seen;
  while (tz.next(tok, line)) {
    long matno = detail::require_int(tok, line, "matrix number");
    need("block number");
    long blkno = detail::require_int(tok, line, "block number");
    need("row index");
    long i = detail::require_int(tok, line, "row index");
    need("column index");
    long j = detail::require_int(tok, line, "column index");
    need("entry value");
    double v = detail::require_real(tok, line, "entry value");

    if (matno < 0 || matno > m)
      throw ParseError(line, "matrix number " + std::to_string(matno) +
                                 " outside 0.." + std::to_string(m));
    if (blkno < 1 || blkno > nblocks)
      throw ParseError(line, "block number " + std::to_string(blkno) +
                                 " outside 1.." + std::to_string(nblocks));
    int bsize = std::abs(blocks[blkno - 1]);
    if (i < 1 || i > bsize || j < 1 || j > bsize)
      throw ParseError(line, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") outside block " + std::to_string(blkno) +
                                 " of size " + std::to_string(bsize));
    if (blocks[blkno - 1] < 0 && i != j)
      throw ParseError(line, "off-diagonal entry in diagonal block " +
                                 std::to_string(blkno));
    if (i > j) std::swap(i, j);
    if (!seen.insert({matno, blkno, static_cast<int>(i), static_cast<int>(j)}).second)
      throw ParseError(line, "duplicate entry (" + std::to_string(matno) + "," +
                                 std::to_string(blkno) + "," + std::to_string(i) +
                                 "," + std::to_string(j) + ")");
    int gi = offsets[blkno - 1] + static_cast<int>(i);
    int gj = offsets[blkno - 1] + static_cast<int>(j);
    mats[matno].push_back({gi, gj, v});
  }

  SdpProblem p;
  p.n = n;
  p.m = static_cast<int>(m);
  p.blocks = blocks;
  p.rhs = std::move(rhs);
  p.sense = sense;
  p.objective = SymSparseMatrix::from_entries(n, std::move(mats[0]));
  p.constraints.reserve(m);
  for (long k = 1; k <= m; ++k)
    p.constraints.push_back(SymSparseMatrix::from_entries(n, std::move(mats[k])));
  p.validate();
  return p;
}

inline SdpProblem parse_sdpa_string(const std::string& text,
                                    DataSense sense = DataSense::dual) {
  std::istringstream in(text);
  return parse_sdpa(in, sense);
}

inline SdpProblem parse_sdpa_file(const std::string& path,
                                  DataSense sense = DataSense::dual) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_sdpa(in, sense);
}

namespace detail {

inline std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Deterministic writer; output re-parses to data_equal input. Values are
// printed with 17 significant digits so doubles round-trip exactly.
inline void write_sdpa(const SdpProblem& p, std::ostream& out) {
  p.validate();
  out << p.m << "\n";
  out << p.blocks.size() << "\n";
  for (std::size_t k = 0; k < p.blocks.size(); ++k)
    out << (k ? " " : "") << p.blocks[k];
  out << "\n";
  for (int i = 0; i < p.m; ++i)
    out << (i ? " " : "") << detail::format_value(p.rhs[i]);
  out << "\n";

  auto offsets = p.block_offsets();
  auto emit = [&](int matno, const SymSparseMatrix& a) {
    // entries are already sorted by global (row, col), which matches
    // (blkno, i, j) order because blocks partition the index range
    for (const auto& e : a.entries) {
      int blk = p.block_of(e.row);
      out << matno << " " << blk + 1 << " " << e.row - offsets[blk] << " "
          << e.col - offsets[blk] << " " << detail::format_value(e.value) << "\n";
    }
  };
  emit(0, p.objective);
  for (int i = 0; i < p.m; ++i) emit(i + 1, p.constraints[i]);
}

inline std::string write_sdpa_string(const SdpProblem& p) {
  std::ostringstream out;
  write_sdpa(p, out);
  return out.str();
}

inline void write_sdpa_file(const SdpProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_sdpa(p, out);
}

}  // namespace sdpprep
