// The acceptance suite: one row per criterion at the pinned tolerances.
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mcm {

struct AcceptanceRow {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values
  double seconds = 0;
};

struct AcceptanceOptions {
  int n = 3;               // degree for the Boettcher suite; the other rows fix their own n
  std::vector<int> only;   // criterion ids to run, empty for all
  int oracle_res = 128;    // grid oracle resolution in the classifier row
};

constexpr int kAcceptanceCount = 11;

AcceptanceRow run_criterion(int id, const AcceptanceOptions& opts = {});
std::vector<AcceptanceRow> run_acceptance(const AcceptanceOptions& opts = {},
                                          const std::function<void(const AcceptanceRow&)>& on_row = {});

}  // namespace mcm
