#pragma once

#include <string>

#include "odl/grid.hpp"

namespace odl {

/// "x,y,d" rows for every node, non-finite values written as "inf".
std::string field_to_csv(const DistanceField& field);

/// Little-endian dump: 40-byte header (magic "ODLF", u32 version, u32 nx,
/// u32 ny, f64 h, f64 origin x, f64 origin y), nx*ny f64 values row-major,
/// then nx*ny u8 cell types.
std::string field_to_binary(const DistanceField& field);

/// Inverse of field_to_binary; throws Error(parse) on malformed input.
DistanceField field_from_binary(const std::string& bytes);

/// Write-to-temp-then-rename; throws Error(io).
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace odl
