#include "rbskm/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rbskm/error.hpp"

namespace rbskm {

namespace {

enum class Layout { Coordinate, Array };
enum class Symmetry { General, Symmetric, Skew };

struct Header {
  Layout layout;
  Symmetry symmetry;
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t b = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > b) toks.push_back(line.substr(b, i - b));
  }
  return toks;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T v{};
  // from_chars rejects a leading '+', which some writers emit
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(tok) + "'");
  return v;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line that is neither blank nor a '%' comment.
  bool next_data(std::string& out) {
    while (std::getline(in_, out)) {
      ++line_;
      const auto toks = split_ws(out);
      if (toks.empty() || toks.front().front() == '%') continue;
      return true;
    }
    return false;
  }
  bool next_raw(std::string& out) {
    if (!std::getline(in_, out)) return false;
    ++line_;
    return true;
  }
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

Header parse_header(LineReader& rd) {
  std::string text;
  if (!rd.next_raw(text)) throw ParseError(0, "empty input");
  const auto toks = split_ws(text);
  if (toks.size() != 5 || lower(toks[0]) != "%%matrixmarket")
    throw ParseError(rd.line(), "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'");
  if (lower(toks[1]) != "matrix")
    throw ParseError(rd.line(), "unsupported object '" + std::string(toks[1]) + "'");

  Header h{};
  const auto layout = lower(toks[2]);
  if (layout == "coordinate")
    h.layout = Layout::Coordinate;
  else if (layout == "array")
    h.layout = Layout::Array;
  else
    throw ParseError(rd.line(), "unsupported layout '" + std::string(toks[2]) + "'");

  const auto field = lower(toks[3]);
  if (field != "real" && field != "double" && field != "integer")
    throw ParseError(rd.line(), "unsupported field '" + std::string(toks[3]) +
                                    "' (only real-valued matrices are accepted)");

  const auto sym = lower(toks[4]);
  if (sym == "general")
    h.symmetry = Symmetry::General;
  else if (sym == "symmetric")
    h.symmetry = Symmetry::Symmetric;
  else if (sym == "skew-symmetric")
    h.symmetry = Symmetry::Skew;
  else
    throw ParseError(rd.line(), "unsupported symmetry '" + std::string(toks[4]) + "'");
  return h;
}

void add_entry(std::vector<Triplet>& out, Symmetry sym, Index i, Index j, double v) {
  out.push_back({i, j, v});
  if (i == j) return;
  if (sym == Symmetry::Symmetric) out.push_back({j, i, v});
  if (sym == Symmetry::Skew) out.push_back({j, i, -v});
}

struct Parsed {
  Index rows;
  Index cols;
  std::vector<Triplet> entries;
};

Parsed parse(std::istream& in) {
  LineReader rd(in);
  const Header h = parse_header(rd);

  std::string text;
  if (!rd.next_data(text)) throw ParseError(0, "missing size line");
  const auto size_toks = split_ws(text);
  const std::size_t want = h.layout == Layout::Coordinate ? 3 : 2;
  if (size_toks.size() != want)
    throw ParseError(rd.line(), "size line must have " + std::to_string(want) + " fields");
  const auto m = parse_number<Index>(size_toks[0], rd.line(), "row count");
  const auto n = parse_number<Index>(size_toks[1], rd.line(), "column count");
  if (h.symmetry != Symmetry::General && m != n)
    throw ParseError(rd.line(), "symmetric storage requires a square matrix");

  Parsed p{m, n, {}};
  if (h.layout == Layout::Coordinate) {
    const auto nnz = parse_number<Index>(size_toks[2], rd.line(), "entry count");
    p.entries.reserve(h.symmetry == Symmetry::General ? nnz : 2 * nnz);
    for (Index k = 0; k < nnz; ++k) {
      if (!rd.next_data(text))
        throw ParseError(rd.line(), "expected " + std::to_string(nnz) + " entries, found " +
                                        std::to_string(k));
      const auto t = split_ws(text);
      if (t.size() != 3) throw ParseError(rd.line(), "entry must be 'row col value'");
      const auto i = parse_number<Index>(t[0], rd.line(), "row index");
      const auto j = parse_number<Index>(t[1], rd.line(), "column index");
      const auto v = parse_number<double>(t[2], rd.line(), "value");
      if (i < 1 || i > m || j < 1 || j > n)
        throw ParseError(rd.line(), "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                        ") outside declared " + std::to_string(m) + " x " +
                                        std::to_string(n));
      if (h.symmetry != Symmetry::General && j > i)
        throw ParseError(rd.line(), "symmetric storage must hold the lower triangle only");
      if (h.symmetry == Symmetry::Skew && i == j)
        throw ParseError(rd.line(), "skew-symmetric storage cannot hold diagonal entries");
      add_entry(p.entries, h.symmetry, i - 1, j - 1, v);
    }
  } else {
    // column-major; symmetric variants store the lower triangle only
    for (Index j = 0; j < n; ++j) {
      Index first = 0;
      if (h.symmetry == Symmetry::Symmetric) first = j;
      if (h.symmetry == Symmetry::Skew) first = j + 1;
      for (Index i = first; i < m; ++i) {
        if (!rd.next_data(text)) throw ParseError(rd.line(), "array data ends early");
        const auto t = split_ws(text);
        if (t.size() != 1) throw ParseError(rd.line(), "array entry must be a single value");
        const auto v = parse_number<double>(t[0], rd.line(), "value");
        if (v != 0.0) add_entry(p.entries, h.symmetry, i, j, v);
      }
    }
  }
  if (rd.next_data(text))
    throw ParseError(rd.line(), "unexpected data after the declared entries");
  return p;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open '" + path.string() + "'");
  return in;
}

void write_double(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

SparseMatrix load_matrix_market(std::istream& in) {
  auto p = parse(in);
  return SparseMatrix::from_triplets(p.rows, p.cols, std::move(p.entries));
}

SparseMatrix load_matrix_market(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_matrix_market(in);
}

Vector load_vector_market(std::istream& in) {
  auto p = parse(in);
  if (p.cols != 1) throw ParseError(0, "right-hand side must have exactly one column");
  Vector b(p.rows, 0.0);
  for (const auto& t : p.entries) b[t.row] += t.value;
  return b;
}

Vector load_vector_market(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_vector_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    for (std::size_t k = 0; k < r.cols.size(); ++k) {
      out << i + 1 << ' ' << r.cols[k] + 1 << ' ';
      write_double(out, r.values[k]);
      out << '\n';
    }
  }
}

}  // namespace rbskm
