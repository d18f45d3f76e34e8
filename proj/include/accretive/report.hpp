#pragma once

// PropertyReport and the margin bookkeeping shared by the sampling checks.
//
// A margin is signed so that m ≥ 0 means "claim holds". Against a check
// tolerance τ: m ≥ -τ passes, -10τ ≤ m < -τ is inconclusive, m < -10τ fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "accretive/matcore.hpp"
#include "accretive/random.hpp"

namespace accretive {

enum class Status { Pass, Fail, Inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

inline Status classify_margin(double margin, double tol) {
  if (std::isnan(margin)) return Status::Fail;
  if (margin >= -tol) return Status::Pass;
  if (margin >= -10.0 * tol) return Status::Inconclusive;
  return Status::Fail;
}

struct Failure {
  std::string digest;
  double margin = 0.0;
  std::string check;
};

struct CheckSummary {
  std::string name;
  double tolerance = 0.0;
  int evaluated = 0;
  int violations = 0;
  int inconclusive = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

struct PropertyReport {
  std::string property_id;
  int trials_run = 0;
  std::vector<Failure> failures;
  double worst_margin = std::numeric_limits<double>::infinity();
  Status status = Status::Pass;
  double elapsed = 0.0;
  std::vector<CheckSummary> checks;
  std::optional<CMatrix> witness;
  std::vector<std::string> notes;

  static constexpr std::size_t kMaxRecordedFailures = 25;

  CheckSummary& check(const std::string& name, double tolerance) {
    for (auto& c : checks)
      if (c.name == name) return c;
    checks.push_back({name, tolerance});
    return checks.back();
  }

  /// Records one margin for a named check.
  void record(const std::string& name, double tolerance, double margin, const std::string& digest) {
    CheckSummary& c = check(name, tolerance);
    ++c.evaluated;
    c.worst_margin = std::min(c.worst_margin, margin);
    worst_margin = std::min(worst_margin, margin);
    switch (classify_margin(margin, tolerance)) {
      case Status::Pass: break;
      case Status::Inconclusive: ++c.inconclusive; break;
      case Status::Fail:
        ++c.violations;
        if (failures.size() < kMaxRecordedFailures) failures.push_back({digest, margin, name});
        break;
    }
  }

  /// Records an evaluation that could neither confirm nor refute the claim.
  void record_inconclusive(const std::string& name, double tolerance) {
    CheckSummary& c = check(name, tolerance);
    ++c.evaluated;
    ++c.inconclusive;
  }

  /// Overall status: fail if any violation, else inconclusive if any
  /// borderline margin, else pass.
  void finalize() {
    status = Status::Pass;
    for (const auto& c : checks) {
      if (c.violations > 0) status = Status::Fail;
      else if (c.inconclusive > 0 && status == Status::Pass) status = Status::Inconclusive;
    }
  }
};

/// Short hexadecimal digest of the bytes of a set of matrices.
inline std::string digest_of(std::initializer_list<const CMatrix*> ms, std::uint64_t salt = 0) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ splitmix64(salt);
  for (const CMatrix* m : ms) {
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(m->data()), sizeof(Complex) * m->size()), h);
    h = splitmix64(h ^ static_cast<std::uint64_t>(m->rows()));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string trial_digest(int trial, std::initializer_list<const CMatrix*> ms) {
  return "t" + std::to_string(trial) + ":" + digest_of(ms, static_cast<std::uint64_t>(trial));
}

}  // namespace accretive
