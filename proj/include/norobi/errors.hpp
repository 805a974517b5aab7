// Copyright 2026 The norobi authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace norobi {

/// Base class for all norobi errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON syntax, bad rational literal, ...).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Structurally well-formed input that breaks a model invariant.
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// An operation was called with arguments outside its contract.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap (enumeration size, matrix size) was exceeded.
class CapError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed; indicates a bug, never a user error.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Signal raised when an adversary is requested for a constraint that does
/// not reference any deviating-or-lower variable.
class InsensitiveConstraint : public Error {
 public:
  using Error::Error;
};

}  // namespace norobi
