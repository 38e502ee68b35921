#include "dcat/libsvm.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dcat {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("libsvm line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& s, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(line, "bad number '" + s + "'");
  }
  if (pos != s.size()) fail(line, "bad number '" + s + "'");
  return v;
}

}  // namespace

double map_label(const std::string& tok) {
  if (tok == "+1" || tok == "1") return 1.0;
  if (tok == "-1") return -1.0;
  std::size_t pos = 0;
  double v = std::stod(tok, &pos);
  if (pos != tok.size() || v != std::floor(v)) throw std::invalid_argument("bad label " + tok);
  long long n = static_cast<long long>(v);
  if (n == 0) return -1.0;
  return (n % 2 == 0) ? 1.0 : -1.0;
}

Dataset parse_libsvm_text(const std::string& text) {
  Dataset ds;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    double y = 0.0;
    try {
      y = map_label(tok);
    } catch (const std::exception&) {
      fail(ln, "bad label '" + tok + "'");
    }
    std::vector<std::pair<int, double>> row;
    int last = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0) fail(ln, "expected index:value, got '" + tok + "'");
      int idx = 0;
      auto idx_s = tok.substr(0, colon);
      auto [p, ec] = std::from_chars(idx_s.data(), idx_s.data() + idx_s.size(), idx);
      if (ec != std::errc() || p != idx_s.data() + idx_s.size() || idx < 1)
        fail(ln, "bad feature index '" + idx_s + "'");
      if (idx <= last) fail(ln, "feature indices must increase");
      last = idx;
      row.emplace_back(idx - 1, to_double(tok.substr(colon + 1), ln));
      ds.d = std::max(ds.d, idx);
    }
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(y);
  }
  if (ds.rows.empty()) throw std::runtime_error("libsvm: empty input");
  return ds;
}

Dataset parse_libsvm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_libsvm_text(ss.str());
}

std::string format_libsvm(const Dataset& ds) {
  std::string out;
  char buf[64];
  for (int r = 0; r < ds.size(); ++r) {
    out += ds.labels[r] > 0 ? "+1" : "-1";
    for (auto [j, v] : ds.rows[r]) {
      int n = std::snprintf(buf, sizeof buf, " %d:%.17g", j + 1, v);
      out.append(buf, n);
    }
    out += '\n';
  }
  return out;
}

void write_libsvm(const Dataset& ds, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << format_libsvm(ds);
}

Mat Dataset::dense(const std::vector<int>& idx, int d_out) const {
  if (d_out < 0) d_out = d;
  Mat A = Mat::Zero(static_cast<int>(idx.size()), d_out);
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (auto [j, v] : rows[idx[r]])
      if (j < d_out) A(static_cast<int>(r), j) = v;
  return A;
}

Vec Dataset::label_vec(const std::vector<int>& idx) const {
  Vec b(static_cast<int>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) b(static_cast<int>(r)) = labels[idx[r]];
  return b;
}

std::vector<std::vector<int>> partition(int N, int m, std::uint64_t seed) {
  if (m < 1 || N < m) throw std::invalid_argument("partition: need N >= m >= 1");
  std::vector<int> perm(N);
  for (int i = 0; i < N; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = N - 1; i > 0; --i) {
    // unbiased index in [0, i] by rejection
    const std::uint64_t range = static_cast<std::uint64_t>(i) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t r;
    do r = rng(); while (r >= limit);
    std::swap(perm[i], perm[static_cast<int>(r % range)]);
  }
  std::vector<std::vector<int>> shards(m);
  const int base = N / m, extra = N % m;
  int pos = 0;
  for (int s = 0; s < m; ++s) {
    const int len = base + (s < extra ? 1 : 0);
    shards[s].assign(perm.begin() + pos, perm.begin() + pos + len);
    pos += len;
  }
  return shards;
}

}  // namespace dcat
