#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace critsense {

enum class ErrorCode {
  Usage,
  Catalogue,
  Margin,
  NoConvergence,
  NonIsolated,
  UnderSampled,
  Degenerate,
  Unsupported,
  NonGeneric,
  BoundaryCritical,
  NotMorse,
  FlowSingular,
  Coverage,
  Precondition,
  NoSeparation,
  Convexity,
  Unresolved,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Newton refinement exhausted its iteration budget; carries the best iterate seen.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, Eigen::VectorXd best, double best_grad_norm)
      : Error(ErrorCode::NoConvergence, what), best_(std::move(best)), best_grad_norm_(best_grad_norm) {}

  const Eigen::VectorXd& best() const noexcept { return best_; }
  double best_grad_norm() const noexcept { return best_grad_norm_; }

 private:
  Eigen::VectorXd best_;
  double best_grad_norm_;
};

class UnderSampled : public Error {
 public:
  UnderSampled(const std::string& what, int suggested_samples)
      : Error(ErrorCode::UnderSampled, what), suggested_samples_(suggested_samples) {}

  int suggested_samples() const noexcept { return suggested_samples_; }

 private:
  int suggested_samples_;
};

}  // namespace critsense
