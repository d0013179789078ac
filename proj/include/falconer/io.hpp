#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "falconer/measure.hpp"
#include "falconer/plfunction.hpp"
#include "falconer/seq.hpp"

namespace falconer {

// File formats (line-oriented structured text).
//
// Measure:  header "falconer-measure 1", then "T <int>", "dim <int>",
//           "depth <int>", "entries <n>", then n lines "<ix> [iy] <mass>".
//           Omitted leaf paths mean mass zero.
// Set:      header "falconer-set 1", same geometry keys, "leaves <n>",
//           then n lines "<ix> [iy]".
// Sequence: one real per line.
// PLFunction: "breakpoint,value" per line.
//
// Masses are written with 17 significant digits so the stored decimals
// round-trip bit-exactly through parse.

namespace detail {
inline std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline std::istream& expect_key(std::istream& in, const std::string& key, std::string& value) {
  std::string k;
  if (!(in >> k) || k != key)
    throw std::runtime_error("parse error: expected key '" + key + "'");
  if (!(in >> value)) throw std::runtime_error("parse error: missing value for '" + key + "'");
  return in;
}
}  // namespace detail

inline void write_measure(std::ostream& out, const DyadicMeasure& mu) {
  out << "falconer-measure 1\n";
  out << "T " << mu.T() << "\n";
  out << "dim " << mu.dim() << "\n";
  out << "depth " << mu.depth() << "\n";
  out << "entries " << mu.leaves().size() << "\n";
  for (auto& [idx, m] : mu.leaves()) {
    out << idx[0];
    if (mu.dim() == 2) out << ' ' << idx[1];
    out << ' ' << detail::fmt_double(m) << "\n";
  }
}

inline DyadicMeasure read_measure(std::istream& in, double epsilon = 0.1, double tau = 0.1) {
  std::string magic, version;
  in >> magic >> version;
  if (magic != "falconer-measure") throw std::runtime_error("not a measure file");
  std::string v;
  detail::expect_key(in, "T", v);
  int T = std::stoi(v);
  detail::expect_key(in, "dim", v);
  int dim = std::stoi(v);
  detail::expect_key(in, "depth", v);
  int depth = std::stoi(v);
  detail::expect_key(in, "entries", v);
  std::size_t n = std::stoul(v);
  std::map<CubeIndex, double> leaves;
  for (std::size_t i = 0; i < n; ++i) {
    CubeIndex idx{0, 0};
    double m = 0.0;
    if (!(in >> idx[0])) throw std::runtime_error("measure file: truncated entries");
    if (dim == 2 && !(in >> idx[1])) throw std::runtime_error("measure file: truncated entries");
    if (!(in >> m)) throw std::runtime_error("measure file: truncated entries");
    leaves[idx] += m;
  }
  DyadicMeasure mu(Params{T, epsilon, tau}, dim, depth, std::move(leaves));
  if (!mu.consistent()) throw std::runtime_error("measure file: inconsistent tree");
  return mu;
}

inline void write_set(std::ostream& out, const DyadicSet& a) {
  out << "falconer-set 1\n";
  out << "T " << a.T() << "\n";
  out << "dim " << a.dim() << "\n";
  out << "depth " << a.depth() << "\n";
  out << "leaves " << a.size() << "\n";
  for (auto& idx : a.leaves()) {
    out << idx[0];
    if (a.dim() == 2) out << ' ' << idx[1];
    out << "\n";
  }
}

inline DyadicSet read_set(std::istream& in) {
  std::string magic, version;
  in >> magic >> version;
  if (magic != "falconer-set") throw std::runtime_error("not a set file");
  std::string v;
  detail::expect_key(in, "T", v);
  int T = std::stoi(v);
  detail::expect_key(in, "dim", v);
  int dim = std::stoi(v);
  detail::expect_key(in, "depth", v);
  int depth = std::stoi(v);
  detail::expect_key(in, "leaves", v);
  std::size_t n = std::stoul(v);
  std::set<CubeIndex> leaves;
  for (std::size_t i = 0; i < n; ++i) {
    CubeIndex idx{0, 0};
    if (!(in >> idx[0])) throw std::runtime_error("set file: truncated leaves");
    if (dim == 2 && !(in >> idx[1])) throw std::runtime_error("set file: truncated leaves");
    leaves.insert(idx);
  }
  return DyadicSet(T, dim, depth, std::move(leaves));
}

inline void write_seq(std::ostream& out, const Seq& s) {
  for (double x : s.entries()) out << detail::fmt_double(x) << "\n";
}

inline Seq read_seq(std::istream& in) {
  std::vector<double> xs;
  double x;
  while (in >> x) xs.push_back(x);
  return Seq(std::move(xs));
}

inline void write_plfunction(std::ostream& out, const PLFunction& f) {
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i)
    out << detail::fmt_double(f.breakpoints()[i]) << ","
        << detail::fmt_double(f.values()[i]) << "\n";
}

inline PLFunction read_plfunction(std::istream& in) {
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("plfunction file: expected x,y");
    xs.push_back(std::stod(line.substr(0, comma)));
    ys.push_back(std::stod(line.substr(comma + 1)));
  }
  return PLFunction(std::move(xs), std::move(ys));
}

template <typename T, typename WriteFn>
void save_file(const std::string& path, const T& obj, WriteFn fn) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  fn(out, obj);
}

template <typename ReadFn>
auto load_file(const std::string& path, ReadFn fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return fn(in);
}

}  // namespace falconer
