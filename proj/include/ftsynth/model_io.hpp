// Copyright 2026 The ftsynth Authors
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

#include <string>
#include <string_view>

#include "ftsynth/model.hpp"
#include "ftsynth/timing.hpp"

namespace ftsynth {

// JSON documents. Rationals are written as strings ("3/2") and accepted as
// strings or numbers. Processes and networks may be referenced by name or by
// 1-based position.
inline constexpr const char* kModelFormat = "ftsynth/model/1";
inline constexpr const char* kTemplatesFormat = "ftsynth/templates/1";
inline constexpr const char* kSelectionFormat = "ftsynth/selection/1";
inline constexpr const char* kWcetFormat = "ftsynth/wcet/1";

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view text);

SystemSpec ParseSpec(std::string_view json_text);
SystemSpec LoadSpec(const std::string& path);
std::string DumpSpec(const SystemSpec& spec);

// Reads the "faults" array of any document.
FaultModel ParseFaults(std::string_view json_text, const PisemModel& model);

TemplatePool ParseTemplates(std::string_view json_text, const PisemModel& model);
std::string DumpTemplates(const TemplatePool& pool, const PisemModel& model);

// Inserted actions fixed by a strategy; "tuple" maps every other process to
// its required next index.
std::vector<FtSelection> ParseSelections(std::string_view json_text, const PisemModel& model);
std::string DumpSelections(const std::vector<FtSelection>& selections, const PisemModel& model);

// {"actions": {"<pattern name>": "1"}, "messages": [{"network", "index", "wcmtt"}]}
WcetTable ParseWcetTable(std::string_view json_text, const PisemModel& model);

}  // namespace ftsynth
