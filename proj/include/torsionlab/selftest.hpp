#pragma once

#include <string>
#include <vector>

#include "torsionlab/fiber.hpp"

namespace torsionlab::selftest {

enum class Status { Pass, Fail, ExpectedFail };
std::string to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::Fail;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  bool quick = false;
  fiber::Convention convention = fiber::Convention::GeometricOracle;
};

// Closed-form oracles for each numerical layer.  A check whose failure is the
// documented consequence of the chosen convention reports ExpectedFail.
std::vector<Check> run(const Options& options);

bool all_passed(const std::vector<Check>& checks);

}  // namespace torsionlab::selftest
