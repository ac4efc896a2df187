#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "l1spline/grid_tensor.hpp"

namespace l1spline::io {

/// Interchange formats:
///   csv   one value per line, `NaN` for a missing sample (1-D)
///   grid  `#shape n1 … nm` header, then row-major values separated by
///         whitespace, `NaN` for missing
///   pgm   grayscale P2/P5, maxval up to 65535; samples scaled to [0, 1]
enum class Format { csv, grid, pgm };

struct PgmInfo {
  bool binary = false;
  unsigned maxval = 255;
};

struct GridFile {
  GridTensor values;  // may contain NaN
  Format format = Format::csv;
  PgmInfo pgm;
};

/// Parse file contents. `declared_shape` reshapes csv input (and must match
/// the header of grid input when both are present).
GridFile parse_grid(std::string_view contents, std::optional<Format> format = std::nullopt,
                    const std::optional<Shape>& declared_shape = std::nullopt);
std::string format_grid(const GridTensor& values, Format format, const PgmInfo& pgm = {});

/// Format from the file extension (.pgm) or, failing that, the contents.
Format detect_format(const std::filesystem::path& path, std::string_view contents);

GridFile read_grid(const std::filesystem::path& path, const std::optional<Shape>& declared_shape = std::nullopt);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed write never leaves a partial file at `path`.
void write_grid(const std::filesystem::path& path, const GridTensor& values, Format format, const PgmInfo& pgm = {});

/// Mask file in any grid format: nonzero (or 1.0 after PGM scaling) marks an
/// observed sample.
Mask read_mask(const std::filesystem::path& path, const Shape& shape);

/// Shortest decimal text that parses back to exactly `v`; `NaN` for NaN.
std::string format_value(double v);

std::string read_text(const std::filesystem::path& path);
void write_text_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace l1spline::io
