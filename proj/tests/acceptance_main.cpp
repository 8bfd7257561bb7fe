// Acceptance suite runner: one PASS/FAIL line per criterion, nonzero exit on
// any failure. `iva check --suite all` runs the same checks.
#include <iostream>
#include <string>

#include "iva/acceptance.hpp"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  try {
    const auto results = iva::run_acceptance(suite);
    const bool ok = iva::print_acceptance(results, std::cout);
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance runner error: " << e.what() << '\n';
    return 2;
  }
}
