#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace toasync_cli {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_field(const std::string& v, int line, const char* column) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw DataError("measurements line " + std::to_string(line) + ": column '" +
                    column + "': bad number '" + v + "'");
  }
}

}  // namespace

std::vector<toasync_frame> parse_measurements_csv(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  if (!std::getline(in, raw)) throw DataError("measurements: empty input");
  if (strip_cr(raw) != "k,z11,z12,z21,z22") {
    throw DataError("measurements line 1: expected header 'k,z11,z12,z21,z22', got '" +
                    strip_cr(raw) + "'");
  }

  static const char* kColumns[5] = {"k", "z11", "z12", "z21", "z22"};
  std::vector<toasync_frame> frames;
  int line = 1;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = strip_cr(raw);
    if (stripped.empty()) continue;
    const auto fields = split_fields(stripped);
    if (fields.size() != 5) {
      throw DataError("measurements line " + std::to_string(line) + ": expected 5 columns (" +
                      std::string(fields.size() < 5 ? "missing '" : "extra after '") +
                      kColumns[std::min<std::size_t>(fields.size(), 4)] + "'), got " +
                      std::to_string(fields.size()));
    }
    std::uint64_t k = 0;
    {
      const std::string& v = fields[0];
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), k);
      if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw DataError("measurements line " + std::to_string(line) +
                        ": column 'k': bad index '" + v + "'");
      }
    }
    const std::uint64_t expected = frames.size() + 1;
    if (k != expected) {
      throw DataError("measurements line " + std::to_string(line) + ": step index " +
                      std::to_string(k) + " out of order (expected " +
                      std::to_string(expected) + ")");
    }
    toasync_frame f{};
    f.z11 = parse_field(fields[1], line, "z11");
    f.z12 = parse_field(fields[2], line, "z12");
    f.z21 = parse_field(fields[3], line, "z21");
    f.z22 = parse_field(fields[4], line, "z22");
    f.step = k;
    frames.push_back(f);
  }
  return frames;
}

std::string measurements_to_csv(const std::vector<toasync_frame>& frames) {
  std::string out = "k,z11,z12,z21,z22\n";
  for (const toasync_frame& f : frames) {
    out += std::to_string(f.step);
    out += ',';
    out += format_double(f.z11);
    out += ',';
    out += format_double(f.z12);
    out += ',';
    out += format_double(f.z21);
    out += ',';
    out += format_double(f.z22);
    out += '\n';
  }
  return out;
}

}  // namespace toasync_cli
