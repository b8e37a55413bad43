#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qrdyn {

// Shortest decimal form that round-trips the double.
std::string fmt_double(double v);

// RFC-4180-style quoting: fields containing comma, quote, or newline are
// quoted with embedded quotes doubled.
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

void write_text_file(const std::string& path, const std::string& body);

// Binary portable graymap / pixmap, one byte per channel.
void write_pgm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& gray);
void write_ppm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& rgb);

// FNV-1a 64-bit digest of a file's bytes; throws on I/O failure.
uint64_t file_digest(const std::string& path);
std::string digest_hex(uint64_t digest);

}  // namespace qrdyn
