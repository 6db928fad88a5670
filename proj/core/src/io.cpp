#include <sbmrom/io.hpp>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace sbmrom::io {

namespace {

constexpr char kMagic[8] = {'S', 'B', 'M', 'R', 'O', 'M', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "binary container I/O assumes a little-endian host");

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = {}) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::out | std::ios::trunc | mode);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

template <typename T>
void write_raw(std::ofstream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
}

template <typename T>
void read_raw(std::ifstream& in, T* data, std::size_t count, const std::filesystem::path& path) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
  if (!in) throw Error("truncated container '" + path.string() + "'");
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9e", value);
  return buf;
}

void write_vtk(const std::filesystem::path& path, const BackgroundMesh& mesh,
               const std::vector<std::pair<std::string, Vector>>& point_fields) {
  std::ofstream out = open_output(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "sbmrom background mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out.precision(17);
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (const Point& p : mesh.nodes()) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << mesh.num_elements() << ' ' << 4 * mesh.num_elements() << '\n';
  for (const P1Element& el : mesh.elements()) {
    out << "3 " << el.nodes[0] << ' ' << el.nodes[1] << ' ' << el.nodes[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) out << "5\n";
  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.num_nodes() << '\n';
    for (const auto& [name, values] : point_fields) {
      if (values.size() != mesh.num_nodes()) {
        throw PreconditionError("field '" + name + "' does not match the mesh node count");
      }
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (Eigen::Index i = 0; i < values.size(); ++i) out << values[i] << '\n';
    }
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_container(const std::filesystem::path& path, const MatrixContainer& c) {
  std::ofstream out = open_output(path, std::ios::binary);
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t header[3] = {static_cast<std::uint64_t>(c.data.rows()),
                                   static_cast<std::uint64_t>(c.data.cols()),
                                   static_cast<std::uint64_t>(c.parameters.size())};
  write_raw(out, header, 3);
  write_raw(out, c.parameters.data(), c.parameters.size());
  write_raw(out, c.data.data(), static_cast<std::size_t>(c.data.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

MatrixContainer read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  char magic[8];
  read_raw(in, magic, 8, path);
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("'" + path.string() + "' is not an sbmrom matrix container");
  }
  std::uint64_t header[3];
  read_raw(in, header, 3, path);
  MatrixContainer c;
  c.parameters.resize(header[2]);
  read_raw(in, c.parameters.data(), c.parameters.size(), path);
  c.data.resize(static_cast<Eigen::Index>(header[0]), static_cast<Eigen::Index>(header[1]));
  read_raw(in, c.data.data(), static_cast<std::size_t>(c.data.size()), path);
  return c;
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& matrix) {
  std::ofstream out = open_output(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
  out.precision(17);
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

void write_surrogate_csv(const std::filesystem::path& path, const BackgroundMesh& mesh,
                         const SurrogateMap& surrogate) {
  std::ofstream out = open_output(path);
  out << "edge,x0,y0,x1,y1,nx,ny,mean_d,h_perp\n";
  for (const SurrogateEdge& e : surrogate.edges) {
    double mean_d = 0.0;
    for (const QuadraturePoint& qp : e.points) mean_d += qp.weight * qp.frame.distance();
    mean_d /= e.length;
    const Point& a = mesh.node(e.nodes[0]);
    const Point& b = mesh.node(e.nodes[1]);
    out << e.edge << ',' << format_number(a.x()) << ',' << format_number(a.y()) << ','
        << format_number(b.x()) << ',' << format_number(b.y()) << ','
        << format_number(e.normal.x()) << ',' << format_number(e.normal.y()) << ','
        << format_number(mean_d) << ',' << format_number(e.h_perp) << '\n';
  }
}

}  // namespace sbmrom::io
