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

#include "ucal/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ucal/error.hpp"

namespace ucal::io {

namespace {

// Splits into lines, dropping a trailing '\r' and trailing blank lines.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) lines.pop_back();
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw IoError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

Matrix parse_predictions_csv(std::string_view text, bool skip_header) {
  const auto lines = split_lines(text);
  const std::size_t first = skip_header ? 1 : 0;
  if (lines.size() <= first) throw IoError("predictions file has no data rows");
  std::vector<double> data;
  std::size_t cols = 0;
  for (std::size_t li = first; li < lines.size(); ++li) {
    std::size_t fields = 0;
    std::string_view rest = lines[li];
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view field = trim(rest.substr(0, comma));
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        fail(li + 1, "cannot parse '" + std::string(field) + "' as a number");
      }
      data.push_back(value);
      ++fields;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (li == first) {
      cols = fields;
    } else if (fields != cols) {
      fail(li + 1, "expected " + std::to_string(cols) + " fields, found " + std::to_string(fields));
    }
  }
  return {lines.size() - first, cols, std::move(data)};
}

std::vector<Label> parse_labels_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw IoError("labels file is empty");
  std::vector<Label> labels;
  labels.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view field = trim(lines[li]);
    Label value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      fail(li + 1, "cannot parse '" + std::string(field) + "' as a non-negative class index");
    }
    labels.push_back(value);
  }
  return labels;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

Matrix read_predictions_csv(const std::filesystem::path& path, bool skip_header) {
  try {
    return parse_predictions_csv(read_text(path), skip_header);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<Label> read_labels_csv(const std::filesystem::path& path) {
  try {
    return parse_labels_csv(read_text(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

LabeledPredictions read_labeled(const std::filesystem::path& preds, const std::filesystem::path& labels,
                                bool skip_header) {
  return {read_predictions_csv(preds, skip_header), read_labels_csv(labels)};
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::string format_predictions_csv(const Matrix& probs) {
  std::string out;
  out.reserve(probs.rows() * probs.cols() * 24);
  for (std::size_t i = 0; i < probs.rows(); ++i) {
    for (std::size_t j = 0; j < probs.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(probs(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string format_labels_csv(std::span<const Label> labels) {
  std::string out;
  for (Label y : labels) {
    out += std::to_string(y);
    out += '\n';
  }
  return out;
}

}  // namespace ucal::io
