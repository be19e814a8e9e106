#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "gaplab/acceptance.hpp"

int main(int argc, char** argv) {
  gaplab::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--fast") == 0) options.fast = true;
    else options.only.insert(std::atoi(argv[i]));
  }
  int failed = 0;
  gaplab::run_acceptance(options, [&](const gaplab::CriterionResult& r) {
    std::printf("%s\n", gaplab::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  });
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
