#pragma once

#include <string>
#include <vector>

#include "prodridge/geometry.hpp"

namespace prodridge {

/// Header plus numeric records. Only numeric cells are supported.
struct CsvTable {
  std::vector<std::string> header;
  Matrix rows;  // records x columns
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin = "<memory>");
void write_csv(const std::string& path, const CsvTable& table);
std::string format_csv(const CsvTable& table);

/// Shortest decimal form that reads back to the identical double, never more
/// than 17 significant digits.
std::string format_double(double v);

enum class CoordinateSystem {
  Ambient,  // unit vectors for directional blocks
  Angular,  // degrees: one angle for Omega_1, (longitude, latitude) for Omega_2
};

/// Header names for a point file: x1.. for the first factor, y1.. for the
/// second, except that a lone scalar after a sphere is called r.
std::vector<std::string> point_header(const ProductSpace& space);

/// Result of reading a point file: points as columns plus any warnings raised
/// while repairing slightly non-unit directional blocks.
struct PointFile {
  Matrix points;  // ambient_dim x n
  std::vector<std::string> warnings;
};

/// Reads points for `space`. Directional blocks off unit norm by more than
/// 1e-6 are renormalized with a warning up to 1e-3 and rejected beyond.
/// Trailing annotation columns (density, label, ...) are ignored.
PointFile read_points(const std::string& path, const ProductSpace& space,
                      CoordinateSystem coords = CoordinateSystem::Ambient);
PointFile points_from_table(const CsvTable& table, const ProductSpace& space,
                            CoordinateSystem coords, const std::string& origin);

/// Angular columns per factor -> ambient point.
Point point_from_angular(const ProductSpace& space, const Vector& angular);

}  // namespace prodridge
