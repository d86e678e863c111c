// SPDX-License-Identifier: Apache-2.0
//
// JSON encoding shared by configs and reports. Complex matrices are nested
// arrays of [re, im] pairs in row-major order; a bare number is accepted as a
// real entry on input.

#pragma once

#include <string>

#include <json.hpp>

#include "pointer_lab/channel.hpp"
#include "pointer_lab/observable.hpp"
#include "pointer_lab/preservation.hpp"

namespace pointer_lab {

using json = nlohmann::json;

// A malformed or invalid field; `path` is a JSON-pointer-like location.
class FieldError : public Error {
 public:
  FieldError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Numbers may also be written as expressions in pi: "pi", "-pi/4", "3*pi/8",
// "0.25*pi", "pi/2".
double number_from_json(const json& j, const std::string& path);

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j, const std::string& path);
HermitianOperator hermitian_from_json(const json& j, const std::string& path);
DensityMatrix density_from_json(const json& j, const std::string& path);

json channel_to_json(const QuantumChannel& n);
QuantumChannel channel_from_json(const json& j, const std::string& path);

json model_to_json(const BroadcastModel& m);
BroadcastModel model_from_json(const json& j, const std::string& path);

json observable_to_json(const DiscreteObservable& x);
DiscreteObservable observable_from_json(const json& j, const std::string& path);

json stochastic_to_json(const StochasticMatrix& p);

// { status, residual, iterations, witness?, affine_min_eigenvalue, equality_inconsistency }
json verdict_to_json(const PreservationVerdict& v);

}  // namespace pointer_lab
