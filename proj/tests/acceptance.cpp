// Runs every acceptance criterion and prints one PASS/FAIL line per row.
#include <iostream>

#include "substrata/paper_examples.hpp"

int main() {
  int failed = 0;
  for (int id = 1; id <= substrata::kPaperRowCount; ++id) {
    const auto row = substrata::paper_row(id);
    std::cout << (row.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << row.name << "): " << row.computed
              << " [" << row.tolerance << "; " << row.seconds << " s]" << std::endl;
    failed += !row.pass;
  }
  std::cout << (substrata::kPaperRowCount - failed) << "/" << substrata::kPaperRowCount << " criteria passed"
            << std::endl;
  return failed ? 1 : 0;
}
