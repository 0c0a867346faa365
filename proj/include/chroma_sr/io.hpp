#pragma once

#include <string>
#include <vector>

#include "chroma_sr/image.hpp"
#include "chroma_sr/patch.hpp"

namespace chroma_sr {

/// Reads an 8-bit PNG or JPEG (detected from the file signature). Grayscale
/// inputs are expanded to three equal planes.
ColorImage read_image(const std::string& path);

/// Writes an 8-bit RGB PNG; samples are clamped to [0,255] and rounded.
void write_png(const std::string& path, const ColorImage& img);

/// Rounds and clamps to the 8-bit grid (what write_png stores).
ColorImage quantize_8bit(const ColorImage& img);

// Fixture format: "CSR1", then width, height, plane count as little-endian
// uint32, then plane-major, row-major little-endian float64 samples.

void write_fixture(const std::string& path, const std::vector<Plane>& planes);
std::vector<Plane> read_fixture(const std::string& path);

void write_fixture(const std::string& path, const ColorImage& img);
ColorImage read_color_fixture(const std::string& path);

/// Single-plane fixture of a matrix: width = cols, height = rows.
void write_matrix_fixture(const std::string& path, const Matrix& m);
Matrix read_matrix_fixture(const std::string& path);

}  // namespace chroma_sr
