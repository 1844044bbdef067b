#pragma once

#include <cstdint>
#include <filesystem>

#include "ltd/eval.hpp"
#include "ltd/tensor.hpp"

namespace ltd {

enum class CubeDtype : std::uint8_t { F32 = 0, F64 = 1 };

/// HSC1 cube: "HSC1", u32 LE n1, n2, n3, u8 dtype, then n1 n2 n3 LE values
/// with band k outermost, row i, column j innermost.
Tensor3 read_cube(const std::filesystem::path &path);
void write_cube(const std::filesystem::path &path, const Tensor3 &t, CubeDtype dtype = CubeDtype::F64);

/// Global min-max scaling to [0, 1]; a constant cube is an error.
Tensor3 normalize_cube(const Tensor3 &t);

/// Binary 8-bit PGM (P5); pixels above 127 are anomalies.
GroundTruth read_mask(const std::filesystem::path &path);
void write_mask(const std::filesystem::path &path, const GroundTruth &gt);

/// 16-bit P5 PGM of the map min-max scaled to [0, 65535].
void write_pgm16(const std::filesystem::path &path, const Map2D &m);

/// Reads a P5 PGM of either depth; values are returned unscaled.
Map2D read_pgm(const std::filesystem::path &path);

/// Comma-separated rows, full double precision.
void write_csv_map(const std::filesystem::path &path, const Map2D &m);
Map2D read_csv_map(const std::filesystem::path &path);

} // namespace ltd
