#include "qrdyn/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrdyn {

std::string fmt_double(double v) {
  // shortest %g form that parses back to the same double
  std::string best;
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v && (best.empty() || std::strlen(buf) < best.size())) best = buf;
  }
  return best;
}

std::string csv_escape(const std::string& field) {
  bool needs_quote = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(fields[i]);
  }
  out += '\n';
  return out;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

void write_pnm(const std::string& path, const char* magic, int width, int height,
               int channels, const std::vector<uint8_t>& data) {
  if (width <= 0 || height <= 0 ||
      data.size() != static_cast<size_t>(width) * height * channels)
    throw std::invalid_argument("pnm: pixel buffer does not match dimensions");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << magic << "\n" << width << " " << height << "\n255\n";
  os.write(reinterpret_cast<const char*>(data.data()),
           static_cast<std::streamsize>(data.size()));
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_pgm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& gray) {
  write_pnm(path, "P5", width, height, 1, gray);
}

void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb) {
  write_pnm(path, "P6", width, height, 3, rgb);
}

uint64_t file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  char buf[16384];
  while (is) {
    is.read(buf, sizeof(buf));
    std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<uint8_t>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::string digest_hex(uint64_t digest) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

}  // namespace qrdyn
