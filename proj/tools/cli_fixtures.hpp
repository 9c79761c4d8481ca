#pragma once

#include <string>
#include <vector>

#include "rcov/covers.hpp"
#include "rcov/transfer.hpp"

namespace rcov::cli {

struct FixtureInfo {
  std::string id;
  std::string kind;  // "torus" or "endoscopic"
  std::string description;
};
const std::vector<FixtureInfo>& fixture_catalog();
bool is_fixture(const std::string& id);

// Cover base of a fixture: the torus itself, or the quasi-split group of an
// endoscopic fixture. Throws ValidationError for unknown ids.
CoverBase fixture_base(const std::string& id);

// Built-in transfer inputs on a1-elliptic, one per field: "q3", "q5", "real".
// Base values were derived from an explicit SL2 splitting-invariant
// computation and are frozen here.
std::vector<std::string> transfer_sample_fields();
TransferInput transfer_sample(const std::string& field);
// The transfer tuple on a1-elliptic for the eigenvalue lambda with root value u.
CoverElement a1_elliptic_tuple(const TransferGroup& tg, const QuadExtElement& lambda, const QuadExtElement& u);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};
std::vector<CheckResult> run_fixture(const std::string& id);

}  // namespace rcov::cli
