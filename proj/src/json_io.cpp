// SPDX-License-Identifier: Apache-2.0

#include "pointer_lab/json_io.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace pointer_lab {

namespace {

bool parse_plain(std::string_view s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// [coef*]pi[/den] or a plain number
bool parse_pi_expression(const std::string& raw, double& out) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (parse_plain(s, out)) return true;
  const std::size_t p = s.find("pi");
  if (p == std::string::npos) return false;
  double coef = 1.0;
  std::string head = s.substr(0, p);
  if (head == "-") {
    coef = -1.0;
  } else if (head == "+" || head.empty()) {
    coef = 1.0;
  } else {
    if (head.back() != '*') return false;
    head.pop_back();
    if (!parse_plain(head, coef)) return false;
  }
  double den = 1.0;
  const std::string tail = s.substr(p + 2);
  if (!tail.empty()) {
    if (tail.front() != '/') return false;
    if (!parse_plain(std::string_view(tail).substr(1), den) || den == 0.0) return false;
  }
  out = coef * std::numbers::pi / den;
  return true;
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw FieldError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw FieldError(path + "/" + key, "missing required field");
  return *it;
}

std::size_t size_from_json(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw FieldError(path, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FieldError&) {
    throw;
  } catch (const Error& e) {
    throw FieldError(path, e.what());
  }
}

}  // namespace

double number_from_json(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    double v = 0.0;
    if (parse_pi_expression(j.get<std::string>(), v) && std::isfinite(v)) return v;
    throw FieldError(path, "cannot read \"" + j.get<std::string>() + "\" as a number");
  }
  throw FieldError(path, "expected a number");
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw FieldError(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<cplx> data;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rp = path + "/" + std::to_string(i);
    const json& row = j[i];
    if (!row.is_array() || row.empty()) throw FieldError(rp, "expected a nonempty array of entries");
    if (i == 0) cols = row.size();
    if (row.size() != cols) {
      throw FieldError(rp, "row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string ep = rp + "/" + std::to_string(c);
      const json& e = row[c];
      if (e.is_array()) {
        if (e.size() != 2) throw FieldError(ep, "complex entry must be [re, im]");
        data.emplace_back(number_from_json(e[0], ep + "/0"), number_from_json(e[1], ep + "/1"));
      } else {
        data.emplace_back(number_from_json(e, ep), 0.0);
      }
    }
  }
  return ComplexMatrix(rows, cols, std::move(data));
}

HermitianOperator hermitian_from_json(const json& j, const std::string& path) {
  const ComplexMatrix m = matrix_from_json(j, path);
  return wrap(path, [&] { return HermitianOperator(m); });
}

DensityMatrix density_from_json(const json& j, const std::string& path) {
  const ComplexMatrix m = matrix_from_json(j, path);
  // User-written states are typically rounded to a few digits.
  return wrap(path, [&] { return DensityMatrix(HermitianOperator(m, 1e-10), 1e-10); });
}

json channel_to_json(const QuantumChannel& n) {
  json ks = json::array();
  for (const ComplexMatrix& k : n.kraus()) ks.push_back(matrix_to_json(k));
  return {{"dim_in", n.dim_in()}, {"dim_out", n.dim_out()}, {"kraus", std::move(ks)}};
}

QuantumChannel channel_from_json(const json& j, const std::string& path) {
  const json& kj = require(j, "kraus", path);
  if (!kj.is_array() || kj.empty()) throw FieldError(path + "/kraus", "expected a nonempty array");
  std::vector<ComplexMatrix> ks;
  for (std::size_t i = 0; i < kj.size(); ++i) {
    ks.push_back(matrix_from_json(kj[i], path + "/kraus/" + std::to_string(i)));
  }
  const std::size_t din = j.contains("dim_in") ? size_from_json(j["dim_in"], path + "/dim_in") : ks[0].cols();
  const std::size_t dout =
      j.contains("dim_out") ? size_from_json(j["dim_out"], path + "/dim_out") : ks[0].rows();
  return wrap(path, [&] { return QuantumChannel(din, dout, std::move(ks)); });
}

json model_to_json(const BroadcastModel& m) {
  json j = channel_to_json(m.joint());
  j["fragment_dims"] = m.fragment_dims();
  j["labels"] = m.labels();
  return j;
}

BroadcastModel model_from_json(const json& j, const std::string& path) {
  QuantumChannel joint = channel_from_json(j, path);
  const json& dj = require(j, "fragment_dims", path);
  if (!dj.is_array()) throw FieldError(path + "/fragment_dims", "expected an array of integers");
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < dj.size(); ++i) {
    dims.push_back(size_from_json(dj[i], path + "/fragment_dims/" + std::to_string(i)));
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const json& lj = j["labels"];
    if (!lj.is_array()) throw FieldError(path + "/labels", "expected an array of strings");
    for (std::size_t i = 0; i < lj.size(); ++i) {
      if (!lj[i].is_string()) throw FieldError(path + "/labels/" + std::to_string(i), "expected a string");
      labels.push_back(lj[i].get<std::string>());
    }
  }
  return wrap(path, [&] { return BroadcastModel(std::move(joint), std::move(dims), std::move(labels)); });
}

json observable_to_json(const DiscreteObservable& x) {
  json els = json::array();
  for (const HermitianOperator& e : x.elements()) els.push_back(matrix_to_json(e.matrix()));
  return {{"dim", x.dim()}, {"outcome_labels", x.outcome_labels()}, {"elements", std::move(els)}};
}

DiscreteObservable observable_from_json(const json& j, const std::string& path) {
  const json& ej = require(j, "elements", path);
  if (!ej.is_array() || ej.empty()) throw FieldError(path + "/elements", "expected a nonempty array");
  std::vector<HermitianOperator> els;
  for (std::size_t i = 0; i < ej.size(); ++i) {
    els.push_back(hermitian_from_json(ej[i], path + "/elements/" + std::to_string(i)));
  }
  if (j.contains("dim") && size_from_json(j["dim"], path + "/dim") != els[0].dim()) {
    throw FieldError(path + "/dim", "does not match the element dimension " + std::to_string(els[0].dim()));
  }
  std::vector<std::string> labels;
  if (j.contains("outcome_labels")) {
    const json& lj = j["outcome_labels"];
    if (!lj.is_array()) throw FieldError(path + "/outcome_labels", "expected an array of strings");
    for (std::size_t i = 0; i < lj.size(); ++i) {
      if (!lj[i].is_string()) {
        throw FieldError(path + "/outcome_labels/" + std::to_string(i), "expected a string");
      }
      labels.push_back(lj[i].get<std::string>());
    }
  }
  // Hand-written effects carry rounding; 1e-9 matches the witness tolerance.
  return wrap(path, [&] { return validate_povm(std::move(els), std::move(labels), 1e-9); });
}

json stochastic_to_json(const StochasticMatrix& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < p.cols(); ++k) row.push_back(p(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json verdict_to_json(const PreservationVerdict& v) {
  json j = {{"status", to_string(v.status)},
            {"residual", v.residual},
            {"iterations", v.iterations},
            {"affine_min_eigenvalue", v.affine_min_eigenvalue},
            {"equality_inconsistency", v.equality_inconsistency}};
  if (v.witness) j["witness"] = observable_to_json(*v.witness);
  return j;
}

}  // namespace pointer_lab
