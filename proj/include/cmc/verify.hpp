#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "cmc/dataset.hpp"
#include "cmc/weierstrass.hpp"

namespace cmc {

struct CheckResult {
  std::string name;
  std::string order;  // "h2" checks carry tolerance C h^2, "h" checks C h
  double max = 0.0;
  double mean = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool skipped = false;
  std::string note;
};

// Battery of identity checks against one spinor file. Checks that do not
// apply to the data (non-unit mean curvature, umbilic Hopf field,
// non-constant H) are reported as skipped with the reason, never as failed.
struct VerificationReport {
  std::vector<CheckResult> checks;
  double h = 0.0;
  double C = 50.0;
  std::string profile = "strict";
  bool cmc1 = false;
  bool constant_H = false;
  bool umbilic = false;
  bool pass = false;  // every non-skipped check passed
};

// profile "strict" uses C = 50, "loose" C = 500; anything else throws
// BadParameter. Derivative-of-gauss-map checks evaluate only where the
// chart resolves the map, (|d rho| + |dbar rho|) h <= 0.05; the log-density
// check uses the same gate on ln q with 0.1. Notes record the resolved
// fraction so a pass on a thin set is visible.
VerificationReport verify_spinors(const SpinorData& s,
                                  const std::string& profile);

// Pulls psi1, psi2, p out of the dataset (MissingField when absent).
VerificationReport verify_dataset(const DatasetFile& ds,
                                  const std::string& profile);

nlohmann::json report_json(const VerificationReport& r);

// Fixed-width human table, one line per check plus an overall line.
std::string report_table(const VerificationReport& r);

}  // namespace cmc
