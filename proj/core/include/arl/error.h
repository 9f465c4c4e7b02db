// Copyright 2026 The ARL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARL_ERROR_H_
#define ARL_ERROR_H_

#include <stdexcept>
#include <string>

namespace arl {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value of the wrong kind was offered to a space (integer to Box, vector to
// Discrete).
class DomainTypeError : public Error {
 public:
  using Error::Error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid grid model.
class ModelError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Rejected input that names the offending item (actuator id, plan path).
class ValidationError : public Error {
 public:
  ValidationError(std::string subject, const std::string& message)
      : Error(subject.empty() ? message : subject + ": " + message),
        subject_(std::move(subject)) {}
  const std::string& subject() const { return subject_; }

 private:
  std::string subject_;
};

// Run store collision with differing content.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// A training batch built against an outdated parameter version.
class StaleParametersError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace arl

#endif  // ARL_ERROR_H_
