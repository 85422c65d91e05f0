#include "rgl/serialization.hpp"

#include <fstream>

namespace rgl {

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ir = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  Json doc = {{"re", std::move(re)}, {"im", std::move(im)}};
  if (m.rows() == m.cols()) {
    doc["dim"] = m.rows();
  } else {
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
  }
  return doc;
}

Matrix matrix_from_json(const Json& j) {
  try {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (j.contains("dim")) {
      rows = cols = j.at("dim").get<Eigen::Index>();
    } else {
      rows = j.at("rows").get<Eigen::Index>();
      cols = j.at("cols").get<Eigen::Index>();
    }
    if (rows < 1 || cols < 1) throw ValidationError("matrix document: dimension must be >= 1");
    const Json& re = j.at("re");
    const bool has_im = j.contains("im");
    if (re.size() != static_cast<std::size_t>(rows)) {
      throw ValidationError("matrix document: 're' has the wrong number of rows");
    }
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const Json& rr = re.at(static_cast<std::size_t>(r));
      if (rr.size() != static_cast<std::size_t>(cols)) {
        throw ValidationError("matrix document: 're' row has the wrong length");
      }
      for (Eigen::Index c = 0; c < cols; ++c) {
        const double x = rr.at(static_cast<std::size_t>(c)).get<double>();
        const double y = has_im ? j.at("im").at(static_cast<std::size_t>(r))
                                      .at(static_cast<std::size_t>(c))
                                      .get<double>()
                                : 0.0;
        m(r, c) = Complex(x, y);
      }
    }
    return m;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("matrix document: ") + e.what());
  }
}

Json to_json(const HermitianOperator& h) { return matrix_to_json(h.matrix()); }
Json to_json(const DensityState& rho) { return matrix_to_json(rho.matrix()); }

Json to_json(const QuantumChannel& channel) {
  Json kraus = Json::array();
  for (const auto& k : channel.kraus()) kraus.push_back(matrix_to_json(k));
  return {{"kraus", std::move(kraus)}};
}

HermitianOperator hermitian_from_json(const Json& j) {
  return HermitianOperator(matrix_from_json(j), 1e-12);
}

DensityState state_from_json(const Json& j) { return DensityState(hermitian_from_json(j)); }

QuantumChannel channel_from_json(const Json& j) {
  if (!j.contains("kraus") || !j.at("kraus").is_array()) {
    throw ValidationError("channel document: missing 'kraus' array");
  }
  std::vector<Matrix> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
  return QuantumChannel(std::move(kraus));
}

DensityState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
  return state_from_json(j);
}

}  // namespace rgl
