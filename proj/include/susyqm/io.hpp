#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "susyqm/eigensolve.hpp"
#include "susyqm/grid.hpp"

namespace susyqm::io {

using json = nlohmann::json;

/// Raised when an output path cannot be written or an input file is
/// missing or malformed.
class io_error : public invalid_input {
 public:
  using invalid_input::invalid_input;
};

/// Shortest-round-trip-safe text for a double: 17 significant digits,
/// '.' decimal point regardless of the global locale.
inline std::string format_g17(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, r.ptr};
}

/// %.12e formatting, locale independent.
inline std::string format_e12(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "NaN" : (v > 0 ? "Infinity" : "-Infinity");
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 12);
  return {buf, r.ptr};
}

namespace detail {

inline void dump(std::ostream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map keeps keys sorted
        if (!first) os << ",\n";
        first = false;
        os << inner << json(it.key()).dump() << ": ";
        dump(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        dump(os, j[i], indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      double v = j.get<double>();
      if (std::isfinite(v))
        os << format_e12(v);
      else
        os << json(format_e12(v)).dump();
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Deterministic JSON text: sorted keys, two-space indent, floats as
/// %.12e, LF line endings, trailing newline.
inline std::string to_json_text(const json& j) {
  std::ostringstream os;
  detail::dump(os, j, 0);
  os << "\n";
  return os.str();
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw io_error("write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, to_json_text(j)); }

/// CSV text with header `x,value`.
inline std::string to_csv_text(const SampledFunction& f) {
  std::string s = "x,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += format_g17(f.x(i));
    s += ',';
    s += format_g17(f[i]);
    s += '\n';
  }
  return s;
}

inline void write_csv(const std::filesystem::path& path, const SampledFunction& f) { write_text(path, to_csv_text(f)); }

/// Parses `x,value` CSV text. The x column must be uniformly spaced.
inline SampledFunction parse_csv(std::string_view text, const std::string& origin = "<csv>") {
  std::vector<double> xs, vs;
  std::size_t pos = 0;
  bool header = true;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line != "x,value") throw io_error(origin + ": expected header 'x,value'");
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string_view::npos) throw io_error(origin + ": line " + std::to_string(line_no) + " lacks a comma");
    double x = 0, v = 0;
    auto a = line.substr(0, comma), b = line.substr(comma + 1);
    auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
    auto rb = std::from_chars(b.data(), b.data() + b.size(), v);
    if (ra.ec != std::errc{} || ra.ptr != a.data() + a.size() || rb.ec != std::errc{} || rb.ptr != b.data() + b.size())
      throw io_error(origin + ": unparsable number on line " + std::to_string(line_no));
    xs.push_back(x);
    vs.push_back(v);
  }
  if (xs.size() < Grid1D::min_nodes) throw io_error(origin + ": need at least 16 samples");
  Grid1D g(xs.front(), xs.back(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - g.x(i)) > 1e-8 * g.h())
      throw io_error(origin + ": x column is not uniformly spaced (line " + std::to_string(i + 2) + ")");
  return {g, std::move(vs)};
}

inline SampledFunction read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

/// Writes one CSV per level as `<stem>_<index>.csv` under `dir` and
/// returns {levels:[{E, psi_file}]} with file names relative to `dir`.
inline json write_spectrum(const std::filesystem::path& dir, const std::string& stem, const Spectrum& spec) {
  json levels = json::array();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    std::string name = stem + "_" + std::to_string(i) + ".csv";
    write_csv(dir / name, spec[i].psi);
    levels.push_back({{"E", spec[i].energy}, {"psi_file", name}});
  }
  return {{"levels", levels}};
}

}  // namespace susyqm::io
