#pragma once

#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "dglift/diagonal.hpp"
#include "dglift/instance.hpp"
#include "dglift/liftcheck.hpp"

namespace dglift::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

struct Settings {
  Field field = Field::rationals();
  int max_degree = kDefaultMaxDegree;
  int max_tensor = kDefaultMaxTensor;
  int lbound = kDefaultLiftBound;
  std::optional<std::string> module;
  std::optional<std::string> target;
  int shift = 0;
  int power = 1;
};

/// Result of one command: a machine report with sorted keys and the list of
/// violated properties (empty on success).
struct Outcome {
  nlohmann::json report;
  std::vector<std::string> violations;
};

Outcome run_check(const Instance& inst, const Settings& s);
Outcome run_hom(const Instance& inst, const Settings& s);
Outcome run_omega(const Instance& inst, const Settings& s);
Outcome run_battery(const Instance& inst, const Settings& s);
Outcome run_gamma(const Instance& inst, const Settings& s);
Outcome run_appendix(const Instance& inst, const Settings& s);

/// Plain text rendering of a report.
std::string render_text(const nlohmann::json& report);

/// Full command line entry point; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dglift::cli
