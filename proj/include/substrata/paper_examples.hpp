#pragma once

#include <string>
#include <vector>

// The reference computations behind `substrata paper-examples` and the
// acceptance binary: one row per criterion.
namespace substrata {

struct PaperRow {
  int id = 0;
  std::string name;
  std::string expected;
  std::string computed;
  std::string tolerance;
  bool pass = false;
  double seconds = 0;
  std::vector<std::string> details;
};

inline constexpr int kPaperRowCount = 10;

PaperRow paper_row(int id);
// Rows 1..10, or the listed ids.
std::vector<PaperRow> run_paper_examples(const std::vector<int>& ids = {});

std::string format_row(const PaperRow& row);

}  // namespace substrata
