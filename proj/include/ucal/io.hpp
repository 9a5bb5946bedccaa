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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucal/dataset.hpp"
#include "ucal/numeric.hpp"

namespace ucal::io {

// Predictions: one row per line, C comma-separated decimals. Every row must
// have the same number of fields. Throws IoError with the 1-based line
// number on malformed input.
Matrix read_predictions_csv(const std::filesystem::path& path, bool skip_header = false);
Matrix parse_predictions_csv(std::string_view text, bool skip_header = false);

// Labels: one non-negative integer per line.
std::vector<Label> read_labels_csv(const std::filesystem::path& path);
std::vector<Label> parse_labels_csv(std::string_view text);

LabeledPredictions read_labeled(const std::filesystem::path& preds, const std::filesystem::path& labels,
                                bool skip_header = false);

// CSV output: 17 significant digits, '.' decimal separator, LF endings.
std::string format_double(double x);
std::string format_predictions_csv(const Matrix& probs);
std::string format_labels_csv(std::span<const Label> labels);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace ucal::io
