#include "matrix_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace convdistill::io {

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(std::string_view bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string encode_cdm(const ComplexMatrix& m) {
  std::string out;
  out.reserve(kCdmHeaderBytes + 16 * m.size());
  out.append(kCdmMagic);
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (const auto& v : m.values()) {
    put_u64(out, std::bit_cast<std::uint64_t>(v.real()));
    put_u64(out, std::bit_cast<std::uint64_t>(v.imag()));
  }
  return out;
}

ComplexMatrix decode_cdm(std::string_view bytes) {
  if (bytes.size() < kCdmHeaderBytes || bytes.substr(0, 4) != kCdmMagic) {
    throw Error(ErrorCode::Format, "not a CDM file (missing header)");
  }
  const std::uint64_t rows = get_u64(bytes, 4);
  const std::uint64_t cols = get_u64(bytes, 12);
  if (rows == 0 || cols == 0) throw Error(ErrorCode::Format, "CDM header declares an empty matrix");
  const std::size_t payload = bytes.size() - kCdmHeaderBytes;
  if (cols > payload / 16 || rows > payload / 16 / cols || payload != 16 * rows * cols) {
    throw Error(ErrorCode::Format, "CDM payload is " + std::to_string(payload) +
                                       " bytes, header declares " + shape_string(rows, cols));
  }
  std::vector<Complex> data(rows * cols);
  std::size_t offset = kCdmHeaderBytes;
  for (auto& v : data) {
    v = Complex(std::bit_cast<double>(get_u64(bytes, offset)),
                std::bit_cast<double>(get_u64(bytes, offset + 8)));
    offset += 16;
  }
  try {
    return ComplexMatrix(rows, cols, std::move(data));
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, std::string("CDM payload: ") + e.what());
  }
}

RealMatrix parse_csv(std::string_view text) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const auto line = trim(text.substr(0, eol));
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (line.empty()) continue;

    std::size_t fields = 0;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      const auto field = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto* first = field.data();
      const auto* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": cannot read '" +
                                          std::string(field) + "' as a finite number");
      }
      data.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (rows == 0) {
      cols = fields;
    } else if (fields != cols) {
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(line_no) + " has " +
                                                    std::to_string(fields) + " fields, expected " +
                                                    std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::Parse, "CSV input contains no rows");
  return RealMatrix(rows, cols, std::move(data));
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string encode_csv(const RealMatrix& m) {
  std::string out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out.push_back(',');
      out += format_double(m(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

std::string encode_pgm(const RealMatrix& normalized) {
  std::ostringstream out;
  out << "P2\n" << normalized.cols() << ' ' << normalized.rows() << "\n255\n";
  for (std::size_t r = 0; r < normalized.rows(); ++r) {
    for (std::size_t c = 0; c < normalized.cols(); ++c) {
      const double v = std::clamp(normalized(r, c), 0.0, 1.0);
      if (c) out << ' ';
      out << std::lround(255.0 * v);
    }
    out << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

ComplexMatrix to_complex(const RealMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out.values()[i] = m.values()[i];
  return out;
}

ComplexMatrix read_matrix(const std::string& path) {
  const auto bytes = read_file(path);
  try {
    if (bytes.size() >= 4 && std::string_view(bytes).substr(0, 4) == kCdmMagic) {
      return decode_cdm(bytes);
    }
    return to_complex(parse_csv(bytes));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_cdm(const std::string& path, const ComplexMatrix& m) { write_file(path, encode_cdm(m)); }

}  // namespace convdistill::io
