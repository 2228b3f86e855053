#include "dlm/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <vector>

#include "dlm/errors.hpp"

namespace dlm {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(const RunTrace& t, std::ostream& os) {
  os << "k,node,x,lambda,v\n";
  for (std::size_t k = 0; k < t.rows(); ++k) {
    for (std::size_t i = 0; i < t.n; ++i) {
      const std::size_t at = k * t.n + i;
      os << k << ',' << i << ',' << format_real(t.x[at]) << ',' << format_real(t.lambda[at]) << ','
         << format_real(t.v[at]) << '\n';
    }
  }
}

void write_summary_csv(const RunTrace& t, std::ostream& os) {
  os << "k,residual,lagrangian,spread\n";
  for (std::size_t k = 0; k < t.rows(); ++k)
    os << k << ',' << format_real(t.residual[k]) << ',' << format_real(t.lagrangian[k]) << ','
       << format_real(t.spread[k]) << '\n';
}

namespace {

double to_real(std::string_view tok, std::size_t line) {
  // from_chars rejects "nan" on some libstdc++ versions; strtod does not.
  std::string s(tok);
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError(line, "malformed number '" + s + "'");
  return v;
}

std::size_t to_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, "malformed index '" + std::string(tok) + "'");
  return v;
}

}  // namespace

RunTrace read_trace_csv(std::string_view text) {
  struct Row {
    std::size_t k, node;
    double x, lam, v;
  };
  std::vector<Row> rows;
  std::size_t lineno = 0;
  bool header = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      if (line != "k,node,x,lambda,v") throw ParseError(lineno, "expected header 'k,node,x,lambda,v'");
      header = true;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    while (true) {
      auto c = line.find(',', pos);
      f.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
      if (c == std::string_view::npos) break;
      pos = c + 1;
    }
    if (f.size() != 5) throw ParseError(lineno, "expected 5 fields");
    rows.push_back({to_index(f[0], lineno), to_index(f[1], lineno), to_real(f[2], lineno), to_real(f[3], lineno),
                    to_real(f[4], lineno)});
  }
  if (!header) throw ParseError(lineno, "empty trace");
  if (rows.empty()) throw ParseError(lineno, "trace has no rows");

  std::size_t n = 0;
  while (n < rows.size() && rows[n].k == 0) ++n;
  if (n == 0 || rows.size() % n != 0) throw ParseError(lineno, "trace rows do not form complete iterations");

  RunTrace t;
  t.n = n;
  t.iterations = rows.size() / n - 1;
  t.x.resize(rows.size());
  t.lambda.resize(rows.size());
  t.v.resize(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].k != r / n || rows[r].node != r % n)
      throw ParseError(r + 2, "rows out of order: expected k=" + std::to_string(r / n) + " node=" + std::to_string(r % n));
    t.x[r] = rows[r].x;
    t.lambda[r] = rows[r].lam;
    t.v[r] = rows[r].v;
  }
  return t;
}

}  // namespace dlm
