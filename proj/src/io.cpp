#include "catdecomp/io.hpp"

#include <cstdint>
#include <cstdio>

namespace catdecomp {

Json matrix_to_wire(const Matrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_wire(const Json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const Json& data = j.at("data");
  if (rows <= 0 || cols <= 0 ||
      data.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("wire matrix: data length != rows*cols");
  Matrix m(rows, cols);
  size_t k = 0;
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c, ++k)
      m(i, c) = cplx(data[k].at(0).get<double>(), data[k].at(1).get<double>());
  return m;
}

Json state_to_json(const QuantumState& s) {
  return Json{{"dims", s.shape.dims}, {"matrix", matrix_to_wire(s.matrix)}};
}

QuantumState state_from_json(const Json& j) {
  QuantumState s;
  s.shape = TensorShape(j.at("dims").get<std::vector<int>>());
  s.matrix = matrix_from_wire(j.at("matrix"));
  if (s.matrix.rows() != s.matrix.cols())
    throw std::invalid_argument("state: matrix not square");
  if (s.matrix.rows() != s.shape.total())
    throw std::invalid_argument("state: dims do not match matrix size");
  return s;
}

Json channel_to_json(const QuantumChannel& ch) {
  Json kraus = Json::array();
  for (const Matrix& k : ch.kraus) kraus.push_back(matrix_to_wire(k));
  return Json{{"dim_in", ch.dim_in},
              {"dim_out", ch.dim_out},
              {"kraus", std::move(kraus)}};
}

QuantumChannel channel_from_json(const Json& j) {
  const int din = j.at("dim_in").get<int>();
  const int dout = j.at("dim_out").get<int>();
  if (din <= 0 || dout <= 0)
    throw std::invalid_argument("channel: nonpositive dimension");
  if (j.contains("kraus")) {
    std::vector<Matrix> kraus;
    for (const Json& k : j.at("kraus")) {
      Matrix m = matrix_from_wire(k);
      if (m.rows() != dout || m.cols() != din)
        throw std::invalid_argument("channel: Kraus operator shape mismatch");
      kraus.push_back(std::move(m));
    }
    return make_channel(std::move(kraus));
  }
  if (j.contains("choi")) {
    Matrix choi = matrix_from_wire(j.at("choi"));
    if (choi.rows() != static_cast<Eigen::Index>(din) * dout)
      throw std::invalid_argument("channel: Choi matrix shape mismatch");
    return channel_from_choi(choi, din, dout);
  }
  throw std::invalid_argument("channel: need \"kraus\" or \"choi\"");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace catdecomp
