#include "prodridge/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "prodridge/datagen.hpp"

namespace prodridge {

namespace {

const std::set<std::string> kAnnotationColumns = {
    "density", "log_density", "top_eigenvalue", "label", "iterations",
    "converged", "final_step", "source", "component"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// RFC-4180 style split: quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& cell, const std::string& origin, std::size_t row,
                    std::size_t col) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  if (!cell.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || cell.empty()) {
    fail(ErrorCode::MalformedInput, origin + ": row " + std::to_string(row) + ", column " +
                                        std::to_string(col + 1) + ": not a number '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  CsvTable table;
  std::vector<std::vector<double>> records;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_record(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      fail(ErrorCode::MalformedInput, origin + ": row " + std::to_string(line_no) + " has " +
                                          std::to_string(fields.size()) + " fields, header has " +
                                          std::to_string(table.header.size()));
    }
    std::vector<double> rec;
    rec.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      rec.push_back(parse_number(fields[c], origin, line_no, c));
    }
    records.push_back(std::move(rec));
  }
  if (!have_header) fail(ErrorCode::MalformedInput, origin + ": missing header row");
  table.rows.resize(Eigen::Index(records.size()), Eigen::Index(table.header.size()));
  for (std::size_t r = 0; r < records.size(); ++r) {
    for (std::size_t c = 0; c < records[r].size(); ++c) {
      table.rows(Eigen::Index(r), Eigen::Index(c)) = records[r][c];
    }
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) fail(ErrorCode::Io, "failed to format number");
  return std::string(buf, ptr);
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out.push_back(',');
    out += table.header[c];
  }
  out.push_back('\n');
  for (Eigen::Index r = 0; r < table.rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.rows.cols(); ++c) {
      if (c) out.push_back(',');
      out += format_double(table.rows(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << format_csv(table);
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

std::vector<std::string> point_header(const ProductSpace& space) {
  std::vector<std::string> h;
  for (int j = 0; j < 2; ++j) {
    const char prefix = j == 0 ? 'x' : 'y';
    for (int k = 0; k < space.block_size(j); ++k) h.push_back(prefix + std::to_string(k + 1));
  }
  // scalar (e.g. radial distance or time) next to a sphere reads better as "r"
  if (space.first.directional() && space.second == SpaceKind::euclidean(1)) h.back() = "r";
  return h;
}

Point point_from_angular(const ProductSpace& space, const Vector& angular) {
  constexpr double deg = std::numbers::pi / 180.0;
  Point z(space.ambient_dim());
  int col = 0;
  for (int j = 0; j < 2; ++j) {
    const SpaceKind& f = space.factor(j);
    auto dst = block(space, z, j);
    if (!f.directional()) {
      dst = angular.segment(col, f.dim);
      col += f.dim;
    } else if (f.dim == 1) {
      dst << std::cos(angular[col] * deg), std::sin(angular[col] * deg);
      col += 1;
    } else if (f.dim == 2) {
      dst = sphere_from_angles(angular[col] * deg, angular[col + 1] * deg);
      col += 2;
    } else {
      fail(ErrorCode::InvalidArgument, "angular coordinates are supported for Omega_1 and Omega_2 only");
    }
  }
  return z;
}

PointFile points_from_table(const CsvTable& table, const ProductSpace& space,
                            CoordinateSystem coords, const std::string& origin) {
  const int need = coords == CoordinateSystem::Ambient ? space.ambient_dim() : space.intrinsic_dim();
  const int have = int(table.header.size());
  if (have < need) {
    fail(ErrorCode::MalformedInput, origin + ": " + std::to_string(have) + " columns, space " +
                                        space.to_string() + " needs " + std::to_string(need));
  }
  for (int c = need; c < have; ++c) {
    if (!kAnnotationColumns.count(table.header[std::size_t(c)])) {
      fail(ErrorCode::MalformedInput, origin + ": unexpected extra column '" +
                                          table.header[std::size_t(c)] + "' for space " +
                                          space.to_string());
    }
  }

  PointFile out;
  const Eigen::Index n = table.rows.rows();
  out.points.resize(space.ambient_dim(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector raw = table.rows.row(i).head(need).transpose();
    Point z = coords == CoordinateSystem::Ambient ? Point(raw) : point_from_angular(space, raw);
    if (!z.allFinite()) {
      fail(ErrorCode::MalformedInput, origin + ": row " + std::to_string(i + 2) + " is not finite");
    }
    for (int j = 0; j < 2; ++j) {
      if (!space.factor(j).directional()) continue;
      auto b = block(space, z, j);
      const double dev = std::abs(b.norm() - 1.0);
      if (dev > 1e-3) {
        fail(ErrorCode::MalformedInput, origin + ": row " + std::to_string(i + 2) +
                                            " directional block has norm " +
                                            std::to_string(b.norm()));
      }
      if (dev > 1e-6) {
        out.warnings.push_back(origin + ": row " + std::to_string(i + 2) +
                               " directional block renormalized (norm deviation " +
                               std::to_string(dev) + ")");
      }
      if (dev > 1e-12) b /= b.norm();
    }
    out.points.col(i) = z;
  }
  return out;
}

PointFile read_points(const std::string& path, const ProductSpace& space, CoordinateSystem coords) {
  return points_from_table(read_csv(path), space, coords, path);
}

}  // namespace prodridge
