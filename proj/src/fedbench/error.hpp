/*
 * Copyright 2026 The fedbench Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace fedbench {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument violated a documented precondition.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An experiment or trainer configuration is inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A data file is malformed. The message names the file and byte offset.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite parameter.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fedbench
