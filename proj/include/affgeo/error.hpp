// Copyright 2026 The affgeo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace affgeo {

enum class ErrorCode {
  kArgument = 1,
  kDomain = 2,
  kTruncation = 3,
  kConvergence = 4,
  kSampling = 5,
  kSeminorm = 6,
  kIo = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(ErrorCode::kArgument, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, what) {}
};

// A trajectory left the chart; carries the last parameter at which the state
// was still inside the domain.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double last_valid_t)
      : Error(ErrorCode::kTruncation, what), last_valid_t_(last_valid_t) {}
  double last_valid_t() const noexcept { return last_valid_t_; }

 private:
  double last_valid_t_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorCode::kConvergence, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SamplingError : public Error {
 public:
  explicit SamplingError(const std::string& what)
      : Error(ErrorCode::kSampling, what) {}
};

class SeminormError : public Error {
 public:
  explicit SeminormError(const std::string& what)
      : Error(ErrorCode::kSeminorm, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace affgeo
