// Copyright 2026 The EduVerba Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eduverba/dataset.hpp"
#include "eduverba/generate.hpp"
#include "eduverba/ingest.hpp"
#include "eduverba/screen.hpp"

namespace eduverba {

enum class SourceKind { Fixtures, Live };

struct PipelineConfig {
  SourceKind source = SourceKind::Fixtures;
  std::filesystem::path fixtures_dir;
  LiveSourceConfig live;
  std::vector<CategorySpec> categories = default_categories();
  ScreenConfig screen;
  /// Empty means the built-in template.
  std::filesystem::path prompt_template;
  GenParams gen;
  std::filesystem::path output_dir = "build-output";
  std::uint64_t seed = 0;
  std::size_t limit_per_category = 100;
  std::size_t fetch_concurrency = 4;

  /// EmptyConfig for an empty category list; InvalidConfig for missing
  /// paths or bad thresholds.
  void validate() const;
};

void to_json(nlohmann::json& j, const PipelineConfig& cfg);
/// Categories may be names or {name, query} objects.
void from_json(const nlohmann::json& j, PipelineConfig& cfg);

/// Reads a JSON config; relative paths resolve against the file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
std::string config_hash(const PipelineConfig& cfg);

std::unique_ptr<PageSource> make_source(const PipelineConfig& cfg);

/// Files written under output_dir.
struct PipelineOutputs {
  std::filesystem::path pages;        // fetched PageRecords
  std::filesystem::path decisions;    // title + ScreenDecision
  std::filesystem::path generations;  // title + keyword + ClueSet
  std::filesystem::path corpus;       // ClueInstructExample rows
  std::filesystem::path progress;     // one line per finished page
  std::filesystem::path manifest;

  explicit PipelineOutputs(const std::filesystem::path& dir);
};

/// ingest -> screen -> prompt -> generate -> build -> persist, in bounded
/// batches. Pages already listed in the progress file are skipped, so an
/// interrupted run resumes and a finished one is a no-op. The manifest
/// counts are cumulative over the progress file; "run" describes this
/// invocation only. Stage failures are rethrown with the stage named.
Manifest run_pipeline(const PipelineConfig& cfg, ChatClient& client, PageSource* source = nullptr);

}  // namespace eduverba
