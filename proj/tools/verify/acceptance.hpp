#pragma once

#include <functional>
#include <string>
#include <vector>

namespace paralab::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values against the pinned tolerances
  double seconds = 0;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult()> run;
};

std::vector<Criterion> core_suite();

// Runs the selected criteria (all when `only` is empty); module errors become failures.
std::vector<CriterionResult> run_suite(const std::vector<Criterion>& suite, const std::vector<int>& only = {},
                                       const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_line(const CriterionResult& r);

}  // namespace paralab::verify
