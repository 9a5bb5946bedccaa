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

#include "ucal/serialize.hpp"

#include "ucal/error.hpp"
#include "ucal/io.hpp"

namespace ucal {

namespace {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (double x : m.row(r)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw DomainError(std::string(what) + " must be an array of rows");
    std::vector<double> values;
    for (const auto& x : row) {
      if (!x.is_number()) throw DomainError(std::string(what) + " entries must be numbers");
      values.push_back(x.get<double>());
    }
    rows.push_back(std::move(values));
  }
  return Matrix::from_rows(rows);
}

std::vector<double> vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw DomainError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw DomainError(std::string(what) + " entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

std::size_t index_field(const Json& j, const char* name) {
  const Json& x = field(j, name);
  if (!x.is_number_integer() || x.get<long long>() < 0) {
    throw DomainError(std::string("field \"") + name + "\" must be a non-negative integer");
  }
  return x.get<std::size_t>();
}

double number_field(const Json& j, const char* name) {
  const Json& x = field(j, name);
  if (!x.is_number()) throw DomainError(std::string("field \"") + name + "\" must be a number");
  return x.get<double>();
}

}  // namespace

Json utility_to_json(const UtilitySpec& spec) {
  Json params = Json::object();
  std::visit(
      [&](const auto& u) {
        using T = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<T, family::ClassWise>) {
          params["c"] = u.c;
        } else if constexpr (std::is_same_v<T, family::TopK>) {
          params["k"] = u.k;
        } else if constexpr (std::is_same_v<T, family::Rank>) {
          params["theta"] = u.theta;
        } else if constexpr (std::is_same_v<T, family::Linear>) {
          params["a"] = u.a;
        } else if constexpr (std::is_same_v<T, family::Dcg>) {
          params["gamma"] = u.gamma;
        } else if constexpr (std::is_same_v<T, family::Decision>) {
          params["loss"] = matrix_to_json(u.loss);
        } else if constexpr (std::is_same_v<T, family::GainMatrix>) {
          params["gain"] = matrix_to_json(u.gain);
        } else if constexpr (std::is_same_v<T, family::Similarity>) {
          params["sim"] = matrix_to_json(u.sim);
        }
      },
      spec);
  Json out;
  out["family"] = family_name(spec);
  out["params"] = std::move(params);
  return out;
}

UtilitySpec utility_from_json(const Json& j) {
  const Json& fam = field(j, "family");
  if (!fam.is_string()) throw DomainError("utility family must be a string");
  const std::string name = fam.get<std::string>();
  const Json empty = Json::object();
  const Json& params = j.contains("params") ? j.at("params") : empty;
  if (name == "top_class") return family::TopClass{};
  if (name == "class_wise") return family::ClassWise{index_field(params, "c")};
  if (name == "top_k") return family::TopK{index_field(params, "k")};
  if (name == "rank") return family::Rank{vector_from_json(field(params, "theta"), "theta")};
  if (name == "linear") return family::Linear{vector_from_json(field(params, "a"), "a")};
  if (name == "dcg") return family::Dcg{number_field(params, "gamma")};
  if (name == "decision") return family::Decision{matrix_from_json(field(params, "loss"), "loss")};
  if (name == "gain_matrix") return family::GainMatrix{matrix_from_json(field(params, "gain"), "gain")};
  if (name == "similarity") return family::Similarity{matrix_from_json(field(params, "sim"), "sim")};
  throw DomainError("unknown utility family \"" + name + "\"");
}

Json distribution_to_json(const FiniteDistribution& dist) {
  Json out;
  out["support"] = matrix_to_json(dist.support());
  out["weights"] = std::vector<double>(dist.weights().begin(), dist.weights().end());
  out["cond_label"] = matrix_to_json(dist.cond_label());
  return out;
}

FiniteDistribution distribution_from_json(const Json& j) {
  return {matrix_from_json(field(j, "support"), "support"), vector_from_json(field(j, "weights"), "weights"),
          matrix_from_json(field(j, "cond_label"), "cond_label")};
}

Json patch_sequence_to_json(const PatchSequence& seq) {
  Json records = Json::array();
  for (const auto& rec : seq.records) {
    Json r;
    r["spec"] = utility_to_json(rec.spec);
    r["lo"] = rec.lo;
    r["hi"] = rec.hi;
    r["sign"] = rec.sign;
    r["step"] = rec.step;
    records.push_back(std::move(r));
  }
  Json history = Json::array();
  for (const auto& h : seq.history) {
    Json e;
    e["err"] = h.err;
    e["brier_before"] = h.brier_before;
    e["brier_after"] = h.brier_after;
    e["step"] = h.step;
    e["backtracks"] = h.backtracks;
    history.push_back(std::move(e));
  }
  Json out;
  out["C"] = seq.num_classes;
  out["records"] = std::move(records);
  out["history"] = std::move(history);
  out["final_err"] = seq.final_err;
  out["converged"] = seq.converged;
  return out;
}

PatchSequence patch_sequence_from_json(const Json& j) {
  PatchSequence seq;
  seq.num_classes = index_field(j, "C");
  const Json& records = field(j, "records");
  if (!records.is_array()) throw DomainError("records must be an array");
  for (const auto& r : records) {
    PatchRecord rec;
    rec.spec = utility_from_json(field(r, "spec"));
    check_utility(rec.spec, seq.num_classes);
    rec.lo = number_field(r, "lo");
    rec.hi = number_field(r, "hi");
    const Json& sign = field(r, "sign");
    if (!sign.is_number_integer() || (sign.get<int>() != 1 && sign.get<int>() != -1)) {
      throw DomainError("record sign must be +1 or -1");
    }
    rec.sign = sign.get<int>();
    rec.step = number_field(r, "step");
    if (!(rec.lo <= rec.hi)) throw DomainError("record interval has lo > hi");
    if (!(rec.step >= 0.0 && rec.step <= 2.0)) throw DomainError("record step must lie in [0, 2]");
    seq.records.push_back(std::move(rec));
  }
  if (j.contains("history")) {
    for (const auto& e : j.at("history")) {
      IterationLog h;
      h.err = number_field(e, "err");
      h.brier_before = number_field(e, "brier_before");
      h.brier_after = number_field(e, "brier_after");
      h.step = number_field(e, "step");
      if (e.contains("backtracks")) h.backtracks = index_field(e, "backtracks");
      seq.history.push_back(h);
    }
  }
  if (j.contains("final_err")) seq.final_err = number_field(j, "final_err");
  if (j.contains("converged")) seq.converged = field(j, "converged").get<bool>();
  return seq;
}

Json report_to_json(const MetricReport& report) {
  Json out;
  out["accuracy"] = report.accuracy;
  out["brier"] = report.brier;
  out["tce_binned"] = report.tce_binned;
  out["cwe_binned"] = report.cwe_binned;
  if (!report.uc.empty()) {
    Json uc = Json::object();
    for (const auto& [id, est] : report.uc) {
      Json e;
      e["value"] = est.value;
      e["lo"] = est.lo;
      e["hi"] = est.hi;
      e["sign"] = est.sign;
      uc[id] = std::move(e);
    }
    out["uc"] = std::move(uc);
  }
  out["uc_comb"] = report.uc_comb;
  return out;
}

Json ecdf_sidecar_json(const EcdfResult& result) {
  Json out;
  out["family"] = sampled_family_name(result.family);
  out["M"] = result.M;
  out["seed"] = result.seed;
  out["band_halfwidth"] = result.band_halfwidth ? Json(*result.band_halfwidth) : Json(nullptr);
  out["delta"] = result.delta ? Json(*result.delta) : Json(nullptr);
  if (!result.utilities.empty()) {
    Json utilities = Json::array();
    for (std::size_t m = 0; m < result.utilities.size(); ++m) {
      Json u;
      u["index"] = m;
      u["error"] = result.errors_by_index[m];
      u["spec"] = utility_to_json(result.utilities[m]);
      utilities.push_back(std::move(u));
    }
    out["utilities"] = std::move(utilities);
  }
  return out;
}

std::string ecdf_csv(const EcdfResult& result) {
  std::string out = "error,cdf\n";
  const double M = static_cast<double>(result.errors.size());
  for (std::size_t k = 0; k < result.errors.size(); ++k) {
    out += io::format_double(result.errors[k]);
    out += ',';
    out += io::format_double(static_cast<double>(k + 1) / M);
    out += '\n';
  }
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ucal
