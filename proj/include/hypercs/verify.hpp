#ifndef HYPERCS_VERIFY_HPP
#define HYPERCS_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hypercs/model.hpp"

namespace hypercs {

enum class Suite { all, states, kernels, limits };

Suite parse_suite(const std::string& name);
std::string suite_name(Suite s);

/// One verification row.  `identity` names the identity being exercised;
/// status is "pass", "fail", or "skip" (family lacks the prerequisite,
/// e.g. no elementary kernel).
struct CheckResult {
  std::string name;
  std::string identity;
  std::string status;
  double max_err = 0.0;
  double tol = 0.0;
};

struct VerifyOptions {
  double tol = 1e-10;          // state construction tolerance
  std::uint64_t seed = 12345;  // randomized sweeps
  std::size_t threads = 0;     // 0 = hardware concurrency
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;  // sorted by name
  int failed_count = 0;
};

/// Runs the requested suite against one family.  Checks fan out across
/// worker threads; per-check RNG streams are derived from the seed and
/// the check name, so the report does not depend on scheduling.
VerifyReport run_verification(const ModelParams& params, Suite suite, const VerifyOptions& opts);

}  // namespace hypercs

#endif
