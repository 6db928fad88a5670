#include <sbmrom/io.hpp>

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace sbmrom {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("sbmrom_io_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_F(TempDir, ContainerRoundTripIsBitExact) {
  std::mt19937_64 rng(67);
  std::uniform_int_distribution<int> dim(0, 40);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int trial = 0; trial < 20; ++trial) {
    io::MatrixContainer c;
    c.data.resize(dim(rng), dim(rng));
    for (Eigen::Index k = 0; k < c.data.size(); ++k) c.data.data()[k] = g(rng);
    c.parameters.resize(dim(rng));
    for (double& p : c.parameters) p = g(rng);
    if (trial == 0 && c.data.size() > 0) c.data(0, 0) = -0.0;
    const fs::path path = dir_ / ("c" + std::to_string(trial) + ".bin");
    io::write_container(path, c);
    EXPECT_EQ(fs::file_size(path),
              8 + 24 + 8 * (c.parameters.size() + static_cast<std::size_t>(c.data.size())));
    const io::MatrixContainer back = io::read_container(path);
    ASSERT_EQ(back.data.rows(), c.data.rows());
    ASSERT_EQ(back.data.cols(), c.data.cols());
    EXPECT_EQ(back.parameters, c.parameters);
    EXPECT_EQ(std::memcmp(back.data.data(), c.data.data(), sizeof(double) * c.data.size()), 0);
  }
}

TEST_F(TempDir, ContainerLayoutIsColumnMajor) {
  io::MatrixContainer c;
  c.data.resize(2, 2);
  c.data << 1.0, 2.0, 3.0, 4.0;
  c.parameters = {0.5};
  io::write_container(dir_ / "m.bin", c);
  const std::string bytes = slurp(dir_ / "m.bin");
  ASSERT_EQ(bytes.size(), 8u + 24u + 8u + 32u);
  EXPECT_EQ(bytes.substr(0, 8), "SBMROM01");
  double payload[4];
  std::memcpy(payload, bytes.data() + 40, sizeof(payload));
  EXPECT_EQ(payload[0], 1.0);
  EXPECT_EQ(payload[1], 3.0);
  EXPECT_EQ(payload[2], 2.0);
  EXPECT_EQ(payload[3], 4.0);
}

TEST_F(TempDir, ContainerRejectsForeignAndTruncatedFiles) {
  {
    std::ofstream out(dir_ / "foreign.bin", std::ios::binary);
    out << "NOTAFILE and more bytes here";
  }
  EXPECT_THROW(io::read_container(dir_ / "foreign.bin"), Error);
  io::MatrixContainer c;
  c.data = Matrix::Ones(3, 3);
  io::write_container(dir_ / "full.bin", c);
  const std::string bytes = slurp(dir_ / "full.bin");
  {
    std::ofstream out(dir_ / "short.bin", std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 8));
  }
  EXPECT_THROW(io::read_container(dir_ / "short.bin"), Error);
  EXPECT_THROW(io::read_container(dir_ / "missing.bin"), Error);
}

TEST_F(TempDir, VtkLegacyLayout) {
  const BackgroundMesh mesh({0.0, 1.0, 0.0, 1.0}, 0.5);
  Vector T = Vector::LinSpaced(mesh.num_nodes(), 0.0, 1.0);
  io::write_vtk(dir_ / "t.vtk", mesh, {{"T", T}});
  std::ifstream in(dir_ / "t.vtk");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_GE(lines.size(), 5u);
  EXPECT_EQ(lines[0], "# vtk DataFile Version 3.0");
  EXPECT_EQ(lines[2], "ASCII");
  EXPECT_EQ(lines[3], "DATASET UNSTRUCTURED_GRID");
  EXPECT_EQ(lines[4], "POINTS 9 double");
  const auto find = [&](const std::string& prefix) {
    return std::find_if(lines.begin(), lines.end(),
                        [&](const std::string& l) { return l.rfind(prefix, 0) == 0; });
  };
  ASSERT_NE(find("CELLS 8 32"), lines.end());
  auto types = find("CELL_TYPES 8");
  ASSERT_NE(types, lines.end());
  for (int k = 1; k <= 8; ++k) EXPECT_EQ(*(types + k), "5");
  ASSERT_NE(find("POINT_DATA 9"), lines.end());
  ASSERT_NE(find("SCALARS T double 1"), lines.end());

  EXPECT_THROW(io::write_vtk(dir_ / "bad.vtk", mesh, {{"T", Vector::Zero(3)}}), PreconditionError);
}

TEST_F(TempDir, MatrixMarketHeader) {
  SparseMatrix A(3, 3);
  A.insert(0, 0) = 2.0;
  A.insert(2, 1) = -1.5;
  A.makeCompressed();
  io::write_matrix_market(dir_ / "a.mtx", A);
  std::ifstream in(dir_ / "a.mtx");
  std::string header, dims, first, second;
  std::getline(in, header);
  std::getline(in, dims);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(header, "%%MatrixMarket matrix coordinate real general");
  EXPECT_EQ(dims, "3 3 2");
  EXPECT_EQ(first, "1 1 2");
  EXPECT_EQ(second, "3 2 -1.5");
}

TEST_F(TempDir, SurrogateCsvOneRowPerEdge) {
  const BackgroundMesh mesh({-1.0, 1.0, -1.0, 1.0}, 0.1);
  const SurrogateMap map = classify(mesh, EmbeddedShape::disc({0.0, 0.0}, 0.4), 0.4);
  io::write_surrogate_csv(dir_ / "s.csv", mesh, map);
  std::ifstream in(dir_ / "s.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "edge,x0,y0,x1,y1,nx,ny,mean_d,h_perp");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, map.edges.size());
}

TEST(FormatNumber, FixedScientific) {
  EXPECT_EQ(io::format_number(1.0), "1.000000000e+00");
  EXPECT_EQ(io::format_number(-2.5e-7), "-2.500000000e-07");
}

}  // namespace
}  // namespace sbmrom
