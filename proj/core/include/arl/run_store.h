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

#ifndef ARL_RUN_STORE_H_
#define ARL_RUN_STORE_H_

#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "arl/generator.h"

namespace arl {

inline constexpr int kRecordSchemaVersion = 1;

using Record = nlohmann::json;

// Receives run records in order.
class RecordSink {
 public:
  virtual ~RecordSink() = default;
  virtual void Append(const Record& record) = 0;
};

class MemorySink final : public RecordSink {
 public:
  void Append(const Record& record) override { records_.push_back(record); }
  const std::vector<Record>& records() const { return records_; }

 private:
  std::vector<Record> records_;
};

// One run's record stream. Exactly one of Complete or Fail ends it.
class RunWriter : public RecordSink {
 public:
  // Throws IntegrityError if a different record already exists for the id.
  virtual void Complete() = 0;
  virtual void Fail(const std::string& error) = 0;
};

class RunStore {
 public:
  virtual ~RunStore() = default;
  virtual std::unique_ptr<RunWriter> Open(const RunDescriptor& descriptor) = 0;
  virtual void WriteIndex(const std::string& experiment, const nlohmann::json& index) = 0;
  // Throws IoError when there is no index.
  virtual nlohmann::json ReadIndex(const std::string& experiment) const = 0;
  // Completed records, ordered by run id.
  virtual std::vector<std::vector<Record>> Completed(const std::string& experiment) const = 0;
};

// Directory layout:
//   <root>/<experiment>/index.json
//   <root>/<experiment>/runs/<id>.ndjson          completed runs
//   <root>/<experiment>/runs/<id>.failed.ndjson   failed attempts
// Records are appended to <id>.partial while the run is live.
class FileRunStore final : public RunStore {
 public:
  explicit FileRunStore(std::filesystem::path root);

  std::unique_ptr<RunWriter> Open(const RunDescriptor& descriptor) override;
  void WriteIndex(const std::string& experiment, const nlohmann::json& index) override;
  nlohmann::json ReadIndex(const std::string& experiment) const override;
  std::vector<std::vector<Record>> Completed(const std::string& experiment) const override;

  std::filesystem::path RunPath(const std::string& experiment, const std::string& run_id) const;
  std::filesystem::path FailedPath(const std::string& experiment, const std::string& run_id) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::mutex index_mu_;
};

// Parses newline-delimited records. Throws IoError.
std::vector<Record> ReadRecords(const std::filesystem::path& path);
// Serialized form of one record (one line, no newline).
std::string RecordLine(const Record& record);
// Records with the wall-clock fields removed, for determinism comparisons.
std::vector<Record> WithoutTimestamps(std::vector<Record> records);

}  // namespace arl

#endif  // ARL_RUN_STORE_H_
