#include "spacespec/report.hpp"

#include <cmath>
#include <sstream>

#include "spacespec/errors.hpp"
#include "spacespec/format.hpp"

namespace spacespec {

namespace {

// JSON has no infinities; they are spelled out as strings.
nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

VerificationReport VerificationReport::make(std::string name, double lhs, double rhs, double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("report tolerance must be positive");
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  // Both sides infinite and equal count as equality.
  if (std::isinf(lhs) && lhs == rhs) r.slack = 0.0;
  r.tolerance = tolerance;
  r.settle();
  return r;
}

void VerificationReport::settle() { pass = slack >= -tolerance; }

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["lhs"] = number(lhs);
  j["rhs"] = number(rhs);
  j["slack"] = number(slack);
  j["tolerance"] = number(tolerance);
  j["pass"] = pass;
  j["context"] = context;
  return j;
}

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "name,lhs,rhs,slack,tolerance,pass\n";
  for (const auto& r : reports)
    os << r.name << ',' << format_sig(r.lhs) << ',' << format_sig(r.rhs) << ',' << format_sig(r.slack) << ','
       << format_sig(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace spacespec
