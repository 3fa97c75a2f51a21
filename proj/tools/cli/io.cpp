#include "cli/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <vector>

namespace mmgsep::cli {
namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double parse_number(std::string_view field, const fs::path& path, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
    throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" +
                     std::string(field) + "'");
  }
  return v;
}

// Rates like 1000 come back from the time column as 999.9999999999999;
// snap those to the nearest micro-hertz so outputs stay byte-stable.
double snap_rate(double fs) {
  const double snapped = std::round(fs * 1e6) / 1e6;
  return std::abs(snapped - fs) <= 1e-9 * fs ? snapped : fs;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw InvariantError("number formatting failed");
  return std::string(buf.data(), end);
}

TimeSeries read_csv(const fs::path& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time_s,value") {
    throw InputError(path.string() + ": expected header 'time_s,value', got '" + line + "'");
  }
  std::vector<double> t;
  std::vector<double> v;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    }
    t.push_back(parse_number(std::string_view(line).substr(0, comma), path, lineno));
    v.push_back(parse_number(std::string_view(line).substr(comma + 1), path, lineno));
  }
  if (t.size() < 2) throw InputError(path.string() + ": need at least 2 samples");

  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) throw InputError(path.string() + ": time column must increase");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double expected = t.front() + static_cast<double>(i) * dt;
    if (std::abs(t[i] - expected) > kTimeJitterTolerance) {
      throw InputError(path.string() + ": non-uniform sampling at row " + std::to_string(i + 2) +
                       " (t = " + format_double(t[i]) + " s, expected " +
                       format_double(expected) + " s)");
    }
  }
  Vector samples = Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
  try {
    return TimeSeries(std::move(samples), snap_rate(1.0 / dt));
  } catch (const ValidationError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_csv(const fs::path& path, const TimeSeries& x) {
  std::string out = "time_s,value\n";
  out.reserve(static_cast<std::size_t>(x.size()) * 28);
  for (Index i = 0; i < x.size(); ++i) {
    out += format_double(static_cast<double>(i) / x.fs());
    out += ',';
    out += format_double(x.samples()[i]);
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << out;
}

json read_json(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

std::string sha256_file(const fs::path& path) {
  const std::string data = read_file(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw InvariantError("SHA-256 failed for " + path.string());
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

}  // namespace mmgsep::cli
