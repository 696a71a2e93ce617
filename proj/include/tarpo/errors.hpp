// Copyright 2026 The tarpo-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TARPO_ERRORS_HPP_
#define TARPO_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tarpo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedTable : public Error {
 public:
  using Error::Error;
};

class UnknownColumn : public Error {
 public:
  explicit UnknownColumn(std::string name)
      : Error("unknown column: \"" + name + "\""), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ColumnIndexOutOfRange : public Error {
 public:
  explicit ColumnIndexOutOfRange(long long index)
      : Error("column index out of range: " + std::to_string(index)),
        index_(index) {}
  long long index() const { return index_; }

 private:
  long long index_;
};

class RowIndexOutOfRange : public Error {
 public:
  explicit RowIndexOutOfRange(long long index)
      : Error("row index out of range: " + std::to_string(index)),
        index_(index) {}
  long long index() const { return index_; }

 private:
  long long index_;
};

class RegionSyntaxError : public Error {
 public:
  RegionSyntaxError(const std::string& what, std::size_t offset)
      : Error("region syntax error at offset " + std::to_string(offset) +
              ": " + what),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class GroupTooSmall : public Error {
 public:
  explicit GroupTooSmall(std::size_t size)
      : Error("group needs at least 2 rollouts, got " + std::to_string(size)) {}
};

class DivergenceDetected : public Error {
 public:
  DivergenceDetected(std::size_t step, const std::string& what)
      : Error("divergence at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what),
        path_(path),
        line_(line) {}
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

class MissingRecord : public Error {
 public:
  explicit MissingRecord(std::string id)
      : Error("transcript references unknown record id: " + id),
        id_(std::move(id)) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class IncompatibleRuns : public Error {
 public:
  using Error::Error;
};

}  // namespace tarpo

#endif  // TARPO_ERRORS_HPP_
