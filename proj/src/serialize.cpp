#include "qfelab/serialize.hpp"

#include <json.hpp>

namespace qfelab {

namespace {

using nlohmann::json;

json encode_matrix(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Matrix decode_matrix(const json& j, Eigen::Index rows, Eigen::Index cols) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (static_cast<Eigen::Index>(re.size()) != rows * cols ||
      static_cast<Eigen::Index>(im.size()) != rows * cols) {
    throw DimensionMismatch("json matrix: expected " + std::to_string(rows * cols) + " entries");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto idx = static_cast<std::size_t>(r * cols + c);
      m(r, c) = Complex(re[idx].get<double>(), im[idx].get<double>());
    }
  }
  return m;
}

}  // namespace

std::string to_json(const PureState& state) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) {
    re.push_back(state.amplitudes()(i).real());
    im.push_back(state.amplitudes()(i).imag());
  }
  return json{{"n", state.qubits()}, {"re", re}, {"im", im}}.dump();
}

std::string to_json(const DensityOperator& rho) {
  json j = encode_matrix(rho.matrix());
  return json{{"n", rho.qubits()}, {"re", j["re"]}, {"im", j["im"]}}.dump();
}

std::string to_json(const KrausChannel& channel) {
  json ops = json::array();
  for (const Matrix& k : channel.kraus_ops()) ops.push_back(encode_matrix(k));
  return json{{"n_in", channel.n_in()}, {"n_out", channel.n_out()}, {"kraus", ops}}.dump();
}

PureState pure_state_from_json(const std::string& text) {
  const json j = json::parse(text);
  const auto d = static_cast<Eigen::Index>(dimension_of(j.at("n").get<int>()));
  const Matrix col = decode_matrix(j, d, 1);
  return PureState(col.col(0));
}

DensityOperator density_from_json(const std::string& text) {
  const json j = json::parse(text);
  const auto d = static_cast<Eigen::Index>(dimension_of(j.at("n").get<int>()));
  return DensityOperator(decode_matrix(j, d, d));
}

KrausChannel channel_from_json(const std::string& text) {
  const json j = json::parse(text);
  const int n_in = j.at("n_in").get<int>();
  const int n_out = j.at("n_out").get<int>();
  const auto din = static_cast<Eigen::Index>(dimension_of(n_in));
  const auto dout = static_cast<Eigen::Index>(dimension_of(n_out));
  std::vector<Matrix> ops;
  for (const json& op : j.at("kraus")) ops.push_back(decode_matrix(op, dout, din));
  return KrausChannel(std::move(ops), n_in, n_out);
}

}  // namespace qfelab
