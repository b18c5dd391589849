#pragma once

#include <charconv>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "logsweep/core/errors.hpp"
#include "logsweep/moran.hpp"

namespace logsweep {

/// Shortest decimal text that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw Error("malformed number '" + s + "'");
  return x;
}

inline constexpr const char* kSweepCsvHeader = "# logsweep-sweep-path v1";

/// CSV layout:
///   # logsweep-sweep-path v1
///   # N=<N> terminal=<fixation|loss|open> policy=<0|1|2>
///   time,resident,mutant
///   <rows>
inline void write_sweep_csv(std::ostream& out, const SweepPath& path) {
  out << kSweepCsvHeader << '\n';
  out << "# N=" << path.n << " terminal=" << to_string(path.terminal)
      << " policy=" << static_cast<int>(path.policy) << '\n';
  out << "time,resident,mutant\n";
  for (const auto& p : path.points) {
    out << format_double(p.time) << ',' << p.residents << ',' << (path.n - p.residents) << '\n';
  }
}

inline SweepPath read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) throw Error("not a sweep-path CSV (bad header)");
  if (!std::getline(in, line) || line.rfind("# N=", 0) != 0) throw Error("sweep-path CSV: missing metadata line");
  SweepPath path;
  {
    std::istringstream meta(line.substr(2));
    std::string field;
    while (meta >> field) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw Error("sweep-path CSV: bad metadata field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string val = field.substr(eq + 1);
      if (key == "N") {
        path.n = std::stoll(val);
      } else if (key == "terminal") {
        if (val == "fixation") path.terminal = Terminal::fixation;
        else if (val == "loss") path.terminal = Terminal::loss;
        else if (val == "open") path.terminal = Terminal::open;
        else throw Error("sweep-path CSV: unknown terminal '" + val + "'");
      } else if (key == "policy") {
        const int v = std::stoi(val);
        if (v < 0 || v > 2) throw Error("sweep-path CSV: unknown policy");
        path.policy = static_cast<RecordPolicy>(v);
      }
    }
  }
  if (!std::getline(in, line) || line != "time,resident,mutant") throw Error("sweep-path CSV: bad column line");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw Error("sweep-path CSV: bad row '" + line + "'");
    path.points.push_back({parse_double(line.substr(0, c1)), std::stoll(line.substr(c1 + 1, c2 - c1 - 1))});
  }
  return path;
}

inline constexpr char kSweepMagic[4] = {'L', 'S', 'W', 'P'};
inline constexpr std::uint32_t kSweepBinaryVersion = 1;

namespace detail {

template <class T>
void put(std::ostream& out, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  unsigned char b[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(b), sizeof(T))) throw Error("sweep-path binary: truncated input");
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace detail

/// Binary layout, little-endian host order:
///   "LSWP", u32 version, i64 N, u8 terminal, u8 policy, u64 count,
///   count x (f64 time, i64 residents)
inline void write_sweep_binary(std::ostream& out, const SweepPath& path) {
  out.write(kSweepMagic, 4);
  detail::put<std::uint32_t>(out, kSweepBinaryVersion);
  detail::put<std::int64_t>(out, path.n);
  detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(path.terminal));
  detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(path.policy));
  detail::put<std::uint64_t>(out, path.points.size());
  for (const auto& p : path.points) {
    detail::put<double>(out, p.time);
    detail::put<std::int64_t>(out, p.residents);
  }
}

inline SweepPath read_sweep_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kSweepMagic, 4) != 0) throw Error("not a sweep-path binary");
  const auto version = detail::get<std::uint32_t>(in);
  if (version != kSweepBinaryVersion) throw Error("unsupported sweep-path binary version " + std::to_string(version));
  SweepPath path;
  path.n = detail::get<std::int64_t>(in);
  const auto terminal = detail::get<std::uint8_t>(in);
  const auto policy = detail::get<std::uint8_t>(in);
  if (terminal > 2 || policy > 2) throw Error("sweep-path binary: bad enum field");
  path.terminal = static_cast<Terminal>(terminal);
  path.policy = static_cast<RecordPolicy>(policy);
  const auto count = detail::get<std::uint64_t>(in);
  path.points.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto t = detail::get<double>(in);
    const auto r = detail::get<std::int64_t>(in);
    path.points.push_back({t, r});
  }
  return path;
}

}  // namespace logsweep
