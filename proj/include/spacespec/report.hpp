#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace spacespec {

// Outcome of one inequality check lhs <= rhs. slack = rhs - lhs and the check
// passes when slack >= -tolerance.
struct VerificationReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::ordered_json context = nlohmann::ordered_json::object();

  static VerificationReport make(std::string name, double lhs, double rhs, double tolerance);
  // Recomputes pass from slack and tolerance.
  void settle();

  nlohmann::ordered_json to_json() const;
};

std::string reports_to_json(const std::vector<VerificationReport>& reports);
// CSV with header name,lhs,rhs,slack,tolerance,pass.
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

}  // namespace spacespec
