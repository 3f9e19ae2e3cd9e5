#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "convdistill/matrix.hpp"

namespace convdistill::io {

/// CDM: "CDM1", rows and cols as little-endian u64, then row-major (re, im)
/// pairs of little-endian IEEE-754 doubles.
inline constexpr std::string_view kCdmMagic = "CDM1";
inline constexpr std::size_t kCdmHeaderBytes = 20;

std::string encode_cdm(const ComplexMatrix& m);
ComplexMatrix decode_cdm(std::string_view bytes);

/// One row per line, comma separated reals, blank lines ignored. Unparseable
/// or non-finite values raise Parse, ragged rows DimensionMismatch; both name
/// the offending line.
RealMatrix parse_csv(std::string_view text);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
std::string encode_csv(const RealMatrix& m);

/// Plain PGM (P2), one grid row per line, values round(255 * v) for v in [0, 1].
std::string encode_pgm(const RealMatrix& normalized);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

/// Reads CDM or CSV, chosen by sniffing the CDM magic.
ComplexMatrix read_matrix(const std::string& path);
void write_cdm(const std::string& path, const ComplexMatrix& m);

ComplexMatrix to_complex(const RealMatrix& m);

}  // namespace convdistill::io
