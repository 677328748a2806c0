#pragma once

#include <functional>
#include <string>
#include <vector>

namespace poslab::repro {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  /// Runtime budget in seconds; exceeding it fails the criterion.
  double budget;
  std::function<Outcome(unsigned threads)> run;
};

struct Result {
  int id;
  std::string title;
  bool pass;
  std::string detail;
  double seconds;
  double budget;
};

/// The regression suite, criteria 1 to 14 in order.
const std::vector<Criterion>& criteria();

/// Runs one criterion, turning exceptions into failures.
Result run(const Criterion& c, unsigned threads);

/// "PASS  9  title  (12.3 s of 600 s)  detail"
std::string format(const Result& r);

}  // namespace poslab::repro
