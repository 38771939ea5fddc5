#include "acceptance.hpp"

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

// One line per criterion; exit status 1 if any fails.
// Usage: hessiso_acceptance_tests [seed] [--known-failure ID]...
// A known failure still prints FAIL; the exit status is 0 only if exactly the
// listed criteria fail, so a fix or a new regression both show up.
int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-failure" && i + 1 < argc)
      known.insert(std::atoi(argv[++i]));
    else
      seed = std::strtoull(arg.c_str(), nullptr, 10);
  }
  bool all = true, as_expected = true;
  for (const auto& r : hessiso::acceptance::run_all(seed)) {
    std::cout << hessiso::acceptance::format(r);
    const bool listed = known.count(r.id) > 0;
    if (listed) std::cout << (r.passed ? "  [listed as known failure but passed]" : "  [known failure]");
    std::cout << '\n';
    all = all && r.passed;
    as_expected = as_expected && (r.passed != listed);
  }
  std::cout << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
  if (!known.empty()) std::cout << (as_expected ? "failures match the known-failure list" : "failures differ from the known-failure list") << '\n';
  return (known.empty() ? all : as_expected) ? 0 : 1;
}
