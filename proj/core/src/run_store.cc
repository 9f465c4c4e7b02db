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

#include "arl/run_store.h"

#include <algorithm>
#include <sstream>
#include <system_error>

#include <fmt/format.h>

#include "arl/error.h"
#include "arl/transport.h"

namespace arl {

namespace fs = std::filesystem;

namespace {

void WriteAtomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError(fmt::format("cannot rename {}: {}", tmp.string(), ec.message()));
}

class FileRunWriter final : public RunWriter {
 public:
  FileRunWriter(fs::path partial, fs::path final_path, fs::path failed_path)
      : partial_(std::move(partial)), final_(std::move(final_path)), failed_(std::move(failed_path)) {
    out_.open(partial_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + partial_.string());
  }

  ~FileRunWriter() override {
    if (!done_) {
      try {
        Fail("abandoned");
      } catch (...) {
      }
    }
  }

  void Append(const Record& record) override {
    out_ << RecordLine(record) << '\n';
    out_.flush();
    if (!out_) throw IoError("cannot append to " + partial_.string());
  }

  void Complete() override {
    done_ = true;
    out_.close();
    std::error_code ec;
    if (fs::exists(final_)) {
      const bool same = WithoutTimestamps(ReadRecords(final_)) == WithoutTimestamps(ReadRecords(partial_));
      if (!same) {
        const fs::path conflict = final_.string() + ".conflict";
        fs::rename(partial_, conflict, ec);
        throw IntegrityError(fmt::format("run {} already stored with different content (new attempt kept at {})",
                                         final_.filename().string(), conflict.string()));
      }
      fs::remove(partial_, ec);
      return;
    }
    fs::rename(partial_, final_, ec);
    if (ec) throw IoError(fmt::format("cannot finalize {}: {}", final_.string(), ec.message()));
  }

  void Fail(const std::string& error) override {
    done_ = true;
    if (out_.is_open()) {
      out_ << RecordLine({{"type", "failure"}, {"error", error}}) << '\n';
      out_.close();
    }
    std::error_code ec;
    fs::rename(partial_, failed_, ec);
    if (ec) throw IoError(fmt::format("cannot record failure at {}: {}", failed_.string(), ec.message()));
  }

 private:
  fs::path partial_;
  fs::path final_;
  fs::path failed_;
  std::ofstream out_;
  bool done_ = false;
};

}  // namespace

std::string RecordLine(const Record& record) { return CanonicalText(record); }

std::vector<Record> ReadRecords(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<Record> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw IoError(fmt::format("{}:{}: {}", path.string(), n, e.what()));
    }
  }
  return out;
}

std::vector<Record> WithoutTimestamps(std::vector<Record> records) {
  for (auto& r : records) {
    if (!r.is_object()) continue;
    r.erase("started_at");
    r.erase("ended_at");
  }
  return records;
}

FileRunStore::FileRunStore(fs::path root) : root_(std::move(root)) {}

fs::path FileRunStore::RunPath(const std::string& experiment, const std::string& run_id) const {
  return root_ / experiment / "runs" / (run_id + ".ndjson");
}

fs::path FileRunStore::FailedPath(const std::string& experiment, const std::string& run_id) const {
  return root_ / experiment / "runs" / (run_id + ".failed.ndjson");
}

std::unique_ptr<RunWriter> FileRunStore::Open(const RunDescriptor& d) {
  const fs::path dir = root_ / d.experiment / "runs";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  return std::make_unique<FileRunWriter>(dir / (d.run_id + ".partial"), RunPath(d.experiment, d.run_id),
                                         FailedPath(d.experiment, d.run_id));
}

void FileRunStore::WriteIndex(const std::string& experiment, const nlohmann::json& index) {
  std::lock_guard<std::mutex> lock(index_mu_);
  const fs::path dir = root_ / experiment;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  WriteAtomically(dir / "index.json", index.dump(2) + "\n");
}

nlohmann::json FileRunStore::ReadIndex(const std::string& experiment) const {
  const fs::path path = root_ / experiment / "index.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<std::vector<Record>> FileRunStore::Completed(const std::string& experiment) const {
  const fs::path dir = root_ / experiment / "runs";
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(dir, ec)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      const bool completed = name.size() > 7 && name.ends_with(".ndjson") && !name.ends_with(".failed.ndjson");
      if (completed) files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::vector<Record>> out;
  for (const auto& f : files) out.push_back(ReadRecords(f));
  return out;
}

}  // namespace arl
