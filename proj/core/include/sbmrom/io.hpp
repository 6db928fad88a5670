#pragma once

#include <sbmrom/mesh.hpp>
#include <sbmrom/surrogate.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sbmrom::io {

/// Legacy ASCII VTK unstructured grid (triangles, CELL_TYPES 5) with optional
/// POINT_DATA scalar fields.
void write_vtk(const std::filesystem::path& path, const BackgroundMesh& mesh,
               const std::vector<std::pair<std::string, Vector>>& point_fields = {});

/// Binary dense-matrix container, little endian:
///   8 bytes   magic "SBMROM01"
///   uint64    rows
///   uint64    cols
///   uint64    number of parameter values P
///   P doubles parameter values
///   rows*cols doubles, column-major
struct MatrixContainer {
  Matrix data;
  std::vector<double> parameters;
};

void write_container(const std::filesystem::path& path, const MatrixContainer& container);
MatrixContainer read_container(const std::filesystem::path& path);

/// Matrix Market coordinate real general.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& matrix);

/// One row per surrogate edge: id, endpoints, n_tilde, mean |d|, h_perp.
void write_surrogate_csv(const std::filesystem::path& path, const BackgroundMesh& mesh,
                         const SurrogateMap& surrogate);

/// Fixed-format scientific number used in every CSV output.
std::string format_number(double value);

}  // namespace sbmrom::io
