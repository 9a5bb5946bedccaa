// Copyright 2026 the ucal authors
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

#include <json.hpp>

#include "ucal/dataset.hpp"
#include "ucal/ecdf.hpp"
#include "ucal/estimators.hpp"
#include "ucal/patching.hpp"
#include "ucal/utilities.hpp"

namespace ucal {

using Json = nlohmann::ordered_json;

// {"family": ..., "params": {...}}. Parameter names: c, k, theta, a, gamma,
// loss, gain, sim; matrices are arrays of rows.
Json utility_to_json(const UtilitySpec& spec);
// Throws DomainError on an unknown family or malformed parameters.
UtilitySpec utility_from_json(const Json& j);

Json distribution_to_json(const FiniteDistribution& dist);
FiniteDistribution distribution_from_json(const Json& j);

Json patch_sequence_to_json(const PatchSequence& seq);
PatchSequence patch_sequence_from_json(const Json& j);

Json report_to_json(const MetricReport& report);

// Sidecar of an eCDF CSV.
Json ecdf_sidecar_json(const EcdfResult& result);

// "error,cdf" header then one row per sorted error with cdf = rank / M.
std::string ecdf_csv(const EcdfResult& result);

// Parses JSON text; syntax errors become IoError.
Json parse_json(std::string_view text);
std::string dump_json(const Json& j);

}  // namespace ucal
