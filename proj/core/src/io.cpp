// Copyright 2026 The answerlearn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "answerlearn/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace answerlearn {
namespace {

std::string hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kParseError, std::string(what) + ": " + e.what());
  }
}

std::size_t read_size(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::kParseError, std::string("missing key '") + key + "'");
  const Json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorCode::kParseError, std::string("'") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Json supports_json(const ModelClass& cls, std::size_t h) {
  Json rows = Json::array();
  for (std::size_t x = 0; x < cls.num_contexts(); ++x) {
    Json row = Json::array();
    cls.support(h, context(x)).for_each([&](ActionId y) { row.push_back(index(y)); });
    rows.push_back(std::move(row));
  }
  return rows;
}

Json rational_rows(const std::vector<std::vector<Rational>>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(to_string(v));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::vector<Rational>> rational_rows_from(const Json& doc, std::size_t rows, std::size_t cols) {
  if (!doc.is_array() || doc.size() != rows) throw Error(ErrorCode::kDimensionMismatch, "table row count");
  std::vector<std::vector<Rational>> out;
  for (const auto& row : doc) {
    if (!row.is_array() || row.size() != cols) throw Error(ErrorCode::kDimensionMismatch, "table column count");
    std::vector<Rational> r;
    for (const auto& v : row) r.push_back(rational_from_json(v));
    out.push_back(std::move(r));
  }
  return out;
}

DemonstratorSpec::Kind kind_from_string(const std::string& s) {
  using Kind = DemonstratorSpec::Kind;
  for (Kind k : {Kind::kDeterministicMin, Kind::kDeterministicMax, Kind::kUniformSupport, Kind::kTable,
                 Kind::kAdaptive, Kind::kSuboptimal}) {
    if (s == to_string(k)) return k;
  }
  throw Error(ErrorCode::kParseError, "unknown demonstrator kind '" + s + "'");
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  return guarded("reading JSON", [&] { return Json::parse(in); });
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kConfigError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

Json to_json(const ModelClass& cls) {
  Json doc;
  doc["num_contexts"] = cls.num_contexts();
  doc["num_actions"] = cls.num_actions();
  Json members = Json::array();
  for (std::size_t h = 0; h < cls.size(); ++h) {
    Json m;
    if (!cls.name(h).empty()) m["name"] = cls.name(h);
    m["supports"] = supports_json(cls, h);
    members.push_back(std::move(m));
  }
  doc["members"] = std::move(members);
  return doc;
}

ModelClass model_class_from_json(const Json& doc) {
  return guarded("model class", [&] {
    const std::size_t nx = read_size(doc, "num_contexts");
    const std::size_t ny = read_size(doc, "num_actions");
    ModelClass cls(nx, ny);
    const Json& members = doc.at("members");
    if (!members.is_array()) throw Error(ErrorCode::kParseError, "'members' must be an array");
    for (const auto& m : members) {
      const Json& supports = m.at("supports");
      if (!supports.is_array() || supports.size() != nx) {
        throw Error(ErrorCode::kDimensionMismatch, "member must list one support per context");
      }
      SupportFunction f;
      if (m.contains("name")) f.name = m.at("name").get<std::string>();
      for (const auto& row : supports) {
        ActionSet s(ny);
        for (const auto& y : row) {
          const auto v = y.get<long long>();
          if (v < 0 || static_cast<std::size_t>(v) >= ny) {
            throw Error(ErrorCode::kIndexOutOfRange, "action " + std::to_string(v) + " outside |Y|");
          }
          s.insert(action(static_cast<std::size_t>(v)));
        }
        f.per_context.push_back(std::move(s));
      }
      cls.add_member(f);
    }
    require_valid(cls);
    return cls;
  });
}

Rational rational_from_json(const Json& value) {
  if (value.is_number_integer()) {
    return value.is_number_unsigned() ? Rational(BigInt(value.get<std::uint64_t>()))
                                      : Rational(BigInt(value.get<std::int64_t>()));
  }
  if (value.is_number_float()) return rational_from_double(value.get<double>());
  if (value.is_string()) return parse_rational(value.get<std::string>());
  throw Error(ErrorCode::kParseError, "expected a number or \"p/q\" string, got " + value.dump());
}

Json to_json(const RewardClass& rewards) {
  Json doc;
  doc["num_contexts"] = rewards.num_contexts;
  doc["num_actions"] = rewards.num_actions;
  Json members = Json::array();
  for (const auto& r : rewards.members) {
    Json m;
    if (!r.name().empty()) m["name"] = r.name();
    Json rows = Json::array();
    for (std::size_t x = 0; x < r.num_contexts(); ++x) {
      Json row = Json::array();
      for (std::size_t y = 0; y < r.num_actions(); ++y) row.push_back(to_string(r(context(x), action(y))));
      rows.push_back(std::move(row));
    }
    m["rewards"] = std::move(rows);
    members.push_back(std::move(m));
  }
  doc["members"] = std::move(members);
  return doc;
}

RewardClass reward_class_from_json(const Json& doc) {
  return guarded("reward class", [&] {
    RewardClass rc;
    rc.num_contexts = read_size(doc, "num_contexts");
    rc.num_actions = read_size(doc, "num_actions");
    for (const auto& m : doc.at("members")) {
      auto rows = rational_rows_from(m.at("rewards"), rc.num_contexts, rc.num_actions);
      rc.members.emplace_back(rows, m.contains("name") ? m.at("name").get<std::string>() : std::string());
    }
    if (rc.members.empty()) throw Error(ErrorCode::kInvalidArgument, "empty reward class");
    return rc;
  });
}

Json to_json(const ContextDistribution& d) {
  Json out = Json::array();
  for (const auto& p : d.probs()) out.push_back(to_string(p));
  return out;
}

Json to_json(const DemonstratorSpec& spec) {
  Json doc;
  doc["kind"] = to_string(spec.kind);
  if (!spec.table.empty()) doc["table"] = rational_rows(spec.table);
  if (!spec.losses.empty()) {
    Json losses = Json::array();
    for (const auto& l : spec.losses) losses.push_back(to_string(l));
    doc["losses"] = std::move(losses);
  }
  if (!spec.label.empty()) doc["label"] = spec.label;
  return doc;
}

DemonstratorSpec demonstrator_from_json(const Json& doc, std::size_t num_contexts, std::size_t num_actions) {
  return guarded("demonstrator", [&] {
    DemonstratorSpec spec;
    spec.kind = kind_from_string(doc.at("kind").get<std::string>());
    if (spec.kind == DemonstratorSpec::Kind::kAdaptive) {
      throw Error(ErrorCode::kParseError, "adaptive demonstrators are code, not data");
    }
    if (doc.contains("table")) spec.table = rational_rows_from(doc.at("table"), num_contexts, num_actions);
    if (doc.contains("losses")) {
      for (const auto& l : doc.at("losses")) spec.losses.push_back(rational_from_json(l));
    }
    if (doc.contains("label")) spec.label = doc.at("label").get<std::string>();
    return spec;
  });
}

Json to_json(const ProblemInstance& instance) {
  Json doc = to_json(*instance.cls);
  doc["distribution"] = to_json(instance.distribution);
  doc["truth"] = instance.truth;
  doc["demonstrator"] = to_json(instance.demonstrator);
  doc["provenance"] = instance.provenance;
  return doc;
}

ProblemInstance instance_from_json(const Json& doc) {
  return guarded("instance", [&] {
    ProblemInstance inst;
    auto cls = std::make_shared<ModelClass>(model_class_from_json(doc));
    const std::size_t nx = cls->num_contexts();
    if (doc.contains("distribution")) {
      std::vector<Rational> p;
      for (const auto& v : doc.at("distribution")) p.push_back(rational_from_json(v));
      if (p.size() != nx) throw Error(ErrorCode::kDimensionMismatch, "distribution length differs from |X|");
      inst.distribution = ContextDistribution(std::move(p));
    } else {
      inst.distribution = ContextDistribution::uniform(nx);
    }
    inst.truth = doc.contains("truth") ? doc.at("truth").get<std::size_t>() : 0;
    if (doc.contains("demonstrator")) {
      inst.demonstrator = demonstrator_from_json(doc.at("demonstrator"), nx, cls->num_actions());
    }
    if (doc.contains("provenance")) inst.provenance = doc.at("provenance").get<std::string>();
    if (inst.demonstrator.kind == DemonstratorSpec::Kind::kSuboptimal && inst.demonstrator.losses.empty()) {
      Rational dummy;
      DemonstratorSpec rebuilt = inst.demonstrator;
      rebuilt.losses.clear();
      for (std::size_t h = 0; h < cls->size(); ++h) {
        Rational loss = 0;
        for (std::size_t x = 0; x < nx; ++x) {
          Rational miss = 0;
          for (std::size_t y = 0; y < cls->num_actions(); ++y) {
            if (!cls->contains(h, context(x), action(y))) miss += rebuilt.table[x][y];
          }
          loss += inst.distribution[context(x)] * miss;
        }
        rebuilt.losses.push_back(loss);
      }
      inst.demonstrator = std::move(rebuilt);
    }
    inst.cls = std::move(cls);
    ValidationResult r = validate_instance(inst);
    if (!r) throw Error(r.code, r.message);
    return inst;
  });
}

Json to_json(const Policy& policy) {
  Json doc;
  doc["num_contexts"] = policy.num_contexts;
  doc["num_actions"] = policy.num_actions;
  if (const auto* p = std::get_if<DeterministicPolicy>(&policy.kind)) {
    doc["kind"] = "deterministic";
    Json a = Json::array();
    for (ActionId y : p->action) a.push_back(index(y));
    doc["actions"] = std::move(a);
  } else if (const auto* p = std::get_if<UniformSupportPolicy>(&policy.kind)) {
    doc["kind"] = "uniform_support";
    Json rows = Json::array();
    for (const auto& s : p->support.per_context) {
      Json row = Json::array();
      s.view().for_each([&](ActionId y) { row.push_back(index(y)); });
      rows.push_back(std::move(row));
    }
    doc["supports"] = std::move(rows);
  } else if (const auto* p = std::get_if<TablePolicy>(&policy.kind)) {
    doc["kind"] = "table";
    doc["probs"] = rational_rows(p->probs);
  } else if (const auto* p = std::get_if<MixturePolicy>(&policy.kind)) {
    doc["kind"] = "mixture";
    doc["m"] = p->predictions.size();
    if (!p->snapshot_file.empty()) {
      doc["snapshot_file"] = p->snapshot_file;
      doc["snapshot_hash"] = hex(p->snapshot_hash);
    } else {
      Json rows = Json::array();
      for (const auto& row : p->predictions) {
        Json r = Json::array();
        for (ActionId y : row) r.push_back(index(y));
        rows.push_back(std::move(r));
      }
      doc["predictions"] = std::move(rows);
    }
  } else if (const auto* p = std::get_if<SamplerPolicy>(&policy.kind)) {
    doc["kind"] = "sampler";
    doc["name"] = p->name;
  }
  return doc;
}

Json to_json(const MleReport& report) {
  Json doc;
  doc["consistent"] = report.consistent;
  doc["argmax_set"] = report.argmax_set;
  Json products = Json::array();
  for (const auto& p : report.support_products) products.push_back(to_string(p));
  doc["support_products"] = std::move(products);
  doc["non_realizable"] = report.non_realizable;
  return doc;
}

Json snapshots_to_json(const SnapshotMixture& mixture) {
  Json doc;
  Json header;
  header["class_hash"] = hex(mixture.cls->content_hash());
  header["alpha"] = to_string(mixture.params.alpha);
  header["beta"] = to_string(mixture.params.beta);
  header["k"] = mixture.k;
  header["boost"] = mixture.boost;
  header["m"] = mixture.m();
  doc["header"] = std::move(header);
  Json snaps = Json::array();
  for (const auto& s : mixture.snapshots) {
    Json a = Json::array(), b = Json::array(), c = Json::array(), alive = Json::array();
    for (const auto& ctr : s.counters) {
      a.push_back(ctr.a);
      b.push_back(ctr.b);
      c.push_back(ctr.c);
      alive.push_back(ctr.alive);
    }
    snaps.push_back({{"round", s.round}, {"a", a}, {"b", b}, {"c", c}, {"alive", alive}});
  }
  doc["snapshots"] = std::move(snaps);
  return doc;
}

Json round_to_json(const RoundRecord& round, bool list_output) {
  Json doc;
  doc["t"] = round.t;
  doc["x"] = index(round.x);
  if (list_output) {
    Json list = Json::array();
    for (ActionId y : round.y_hat) list.push_back(index(y));
    doc["y_hat_list"] = std::move(list);
  } else {
    doc["y_hat"] = index(round.y_hat.front());
  }
  doc["y"] = index(round.y);
  doc["mistake"] = round.mistake;
  if (!round.total_weight.empty()) doc["W_t"] = round.total_weight;
  if (!round.marginals.empty()) doc["marginals"] = round.marginals;
  if (round.degenerate) doc["degenerate"] = true;
  return doc;
}

void write_transcript(std::ostream& out, const RunRecord& record) {
  const bool list_output = !record.rounds.empty() && record.rounds.front().y_hat.size() > 1;
  Json header;
  header["type"] = "header";
  header["learner"] = record.learner;
  header["instance_hash"] = hex(record.instance_hash);
  header["seed"] = record.seed;
  header["truth"] = record.truth;
  header["rounds"] = record.summary.rounds;
  header["mistakes"] = record.summary.mistakes;
  if (record.summary.bound) header["bound"] = *record.summary.bound;
  header["realizable"] = record.summary.realizable;
  out << header.dump() << '\n';
  for (const auto& r : record.rounds) out << round_to_json(r, list_output).dump() << '\n';
}

}  // namespace answerlearn
