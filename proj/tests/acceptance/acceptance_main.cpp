// Runs every end-to-end criterion at full size and prints one line each.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "dyson/experiments.hpp"

int main(int argc, char** argv) {
  dyson::ExperimentOptions opts;
  if (argc > 1) opts.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (const auto& id : dyson::criterion_ids()) {
    try {
      const auto r = dyson::run_criterion(id, opts);
      std::printf("%-5s %s  %s  [%.1f s]\n", r.id.c_str(), r.pass ? "PASS" : "FAIL", r.summary.c_str(), r.seconds);
      failed += r.pass ? 0 : 1;
    } catch (const std::exception& e) {
      std::printf("%-5s FAIL  error: %s\n", id.c_str(), e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(dyson::criterion_ids().size()) - failed,
              dyson::criterion_ids().size());
  return failed == 0 ? 0 : 1;
}
