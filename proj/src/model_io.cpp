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

#include "ftsynth/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ftsynth/error.hpp"

namespace ftsynth {

using nlohmann::json;

namespace {

[[noreturn]] void Fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorCode::kParse, where + ": " + msg);
}

Rational GetRational(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return ParseRational(j.get<std::string>());
    } catch (const Error& e) {
      Fail(where, e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_float()) {
    std::ostringstream os;
    os << j.get<double>();
    return ParseRational(os.str());
  }
  Fail(where, "expected a rational number");
}

json PutRational(const Rational& r) { return ToString(r); }

const json& Need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) Fail(where, std::string("missing '") + key + "'");
  return obj.at(key);
}

std::string GetString(const json& obj, const char* key, const std::string& where,
                      const std::string& fallback = "") {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  Fail(where, std::string("'") + key + "' must be a string");
}

std::int64_t GetInt(const json& obj, const char* key, const std::string& where,
                    std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  if (!v.is_number_integer()) Fail(where, std::string("'") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

Expr GetExpr(const json& obj, const char* key, const std::string& where) {
  std::string text = GetString(obj, key, where, "true");
  try {
    return Expr::Parse(text);
  } catch (const Error& e) {
    Fail(where, e.what());
  }
}

Variable ParseVariable(const json& j, const std::string& where) {
  Variable v;
  if (j.is_string()) {
    v.name = j.get<std::string>();
    return v;
  }
  v.name = GetString(j, "name", where);
  if (v.name.empty()) Fail(where, "variable without a name");
  v.min = GetInt(j, "min", where, 0);
  v.max = GetInt(j, "max", where, 1);
  v.init = GetInt(j, "init", where, v.min);
  if (j.contains("reset")) {
    if (!j.at("reset").is_boolean()) Fail(where, "'reset' must be a boolean");
    v.reset_each_period = j.at("reset").get<bool>();
  }
  return v;
}

json DumpVariable(const Variable& v) {
  json j = {{"name", v.name}, {"min", v.min}, {"max", v.max}, {"init", v.init}};
  if (v.reset_each_period) j["reset"] = true;
  return j;
}

// Resolves a process or network reference given by name or 1-based index.
template <typename Names>
int Resolve(const json& j, const Names& names, const std::string& what,
            const std::string& where) {
  if (j.is_number_integer()) {
    int k = j.get<int>();
    if (k < 1 || k > static_cast<int>(names.size())) Fail(where, what + " index out of range");
    return k - 1;
  }
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == s) return static_cast<int>(i);
    }
    Fail(where, "unknown " + what + " '" + s + "'");
  }
  Fail(where, what + " must be a name or a 1-based index");
}

struct Names {
  std::vector<std::string> processes;
  std::vector<std::string> networks;
};

Names NamesOf(const PisemModel& m) {
  Names n;
  for (const auto& p : m.processes) n.processes.push_back(p.name);
  for (const auto& net : m.networks) n.networks.push_back(net.name);
  return n;
}

ActionPattern ParsePattern(const json& j, const Names& names, const std::string& where) {
  ActionPattern p;
  std::string kind = GetString(j, "kind", where);
  p.name = GetString(j, "name", where, kind);
  p.guard = GetExpr(j, "guard", where);
  if (kind == "assign") {
    p.kind = ActionKind::kAssign;
    Need(j, "target", where);
    p.target = GetString(j, "target", where);
    if (!j.contains("value")) Fail(where, "assign without 'value'");
    p.value = j.at("value").is_number_integer()
                  ? Expr::Constant(j.at("value").get<std::int64_t>())
                  : GetExpr(j, "value", where);
  } else if (kind == "send") {
    p.kind = ActionKind::kSend;
    p.message_index = static_cast<int>(GetInt(j, "index", where, 0));
    p.network = Resolve(Need(j, "network", where), names.networks, "network", where);
    p.dest = Resolve(Need(j, "dest", where), names.processes, "process", where);
    p.remote_var = GetString(j, "remote", where);
    p.content = GetString(j, "content", where);
    if (p.remote_var.empty() || p.content.empty()) Fail(where, "send needs 'remote' and 'content'");
  } else if (kind == "receive") {
    p.kind = ActionKind::kReceive;
    p.var = GetString(j, "var", where);
  } else if (kind == "nullop") {
    p.kind = ActionKind::kNullOp;
  } else {
    Fail(where, "unknown action kind '" + kind + "'");
  }
  return p;
}

json DumpPattern(const ActionPattern& p, const Names& names) {
  json j;
  j["kind"] = ActionKindName(p.kind);
  j["name"] = p.name;
  if (!p.guard.IsTrivialTrue()) j["guard"] = p.guard.ToString();
  switch (p.kind) {
    case ActionKind::kAssign:
      j["target"] = p.target;
      j["value"] = p.value.ToString();
      break;
    case ActionKind::kSend:
      j["index"] = p.message_index;
      j["network"] = names.networks.at(p.network);
      j["dest"] = names.processes.at(p.dest);
      j["remote"] = p.remote_var;
      j["content"] = p.content;
      break;
    case ActionKind::kReceive:
      j["var"] = p.var;
      break;
    case ActionKind::kNullOp:
      break;
  }
  return j;
}

json ParseDocument(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

void CheckFormat(const json& doc, const char* expected) {
  if (doc.contains("format")) {
    if (!doc.at("format").is_string() || doc.at("format").get<std::string>() != expected) {
      Fail("format", std::string("expected \"") + expected + "\"");
    }
  }
}

CanBusProfile ParseCan(const json& j, const std::string& where) {
  CanBusProfile c;
  c.reserved_priority = static_cast<int>(GetInt(j, "reserved_priority", where, 0));
  c.reserved_size = static_cast<int>(GetInt(j, "reserved_size", where, 0));
  auto list = [&](const char* key, std::vector<CanMessage>& out) {
    if (!j.contains(key)) return;
    for (const auto& m : j.at(key)) {
      out.push_back({static_cast<int>(GetInt(m, "priority", where, 0)),
                     static_cast<int>(GetInt(m, "size", where, 0))});
    }
  };
  list("existing", c.existing);
  list("ft_messages", c.ft_messages);
  return c;
}

json DumpCan(const CanBusProfile& c) {
  json j = {{"reserved_priority", c.reserved_priority}, {"reserved_size", c.reserved_size}};
  auto list = [](const std::vector<CanMessage>& ms) {
    json a = json::array();
    for (const auto& m : ms) a.push_back({{"priority", m.priority}, {"size", m.size}});
    return a;
  };
  j["existing"] = list(c.existing);
  j["ft_messages"] = list(c.ft_messages);
  return j;
}

FaultModel ParseFaultArray(const json& arr, const Names& names) {
  FaultModel fm;
  if (!arr.is_array()) Fail("faults", "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& f = arr[i];
    std::string where = "faults[" + std::to_string(i) + "]";
    FaultEntry e;
    e.type = GetString(f, "type", where);
    if (e.type.empty()) Fail(where, "missing 'type'");
    e.max_per_period = static_cast<int>(GetInt(f, "max_per_period", where, 0));
    if (e.max_per_period < 0) Fail(where, "max_per_period must be >= 0");
    const json& eff = Need(f, "effect", where);
    std::string kind = GetString(eff, "kind", where);
    if (kind != "message_loss") Fail(where, "unsupported fault effect '" + kind + "'");
    e.effect.kind = FaultKind::kMessageLoss;
    if (eff.contains("network")) {
      e.effect.network = Resolve(eff.at("network"), names.networks, "network", where);
    }
    fm.entries.push_back(std::move(e));
  }
  return fm;
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
}

SystemSpec ParseSpec(std::string_view json_text) {
  json doc = ParseDocument(json_text);
  if (!doc.is_object()) Fail("document", "expected an object");
  CheckFormat(doc, kModelFormat);
  SystemSpec spec;
  PisemModel& m = spec.model;
  m.period = GetRational(Need(doc, "period", "document"), "period");

  const json& procs = Need(doc, "processes", "document");
  const json nets = doc.contains("networks") ? doc.at("networks") : json::array();
  if (!procs.is_array() || !nets.is_array()) Fail("document", "processes/networks must be arrays");

  Names names;
  for (std::size_t i = 0; i < procs.size(); ++i) {
    names.processes.push_back(GetString(procs[i], "name", "processes", "P" + std::to_string(i + 1)));
  }
  for (std::size_t i = 0; i < nets.size(); ++i) {
    names.networks.push_back(GetString(nets[i], "name", "networks", "net" + std::to_string(i + 1)));
  }

  for (std::size_t i = 0; i < nets.size(); ++i) {
    const json& nj = nets[i];
    std::string where = "networks[" + std::to_string(i) + "]";
    Network n;
    n.name = names.networks[i];
    n.message_count = static_cast<int>(GetInt(nj, "message_count", where, 0));
    auto table = [&](const char* key, std::map<int, Rational>& out) {
      if (!nj.contains(key)) return;
      const json& t = nj.at(key);
      if (!t.is_object()) Fail(where, std::string("'") + key + "' must map index to time");
      for (auto it = t.begin(); it != t.end(); ++it) {
        int idx = 0;
        try {
          idx = std::stoi(it.key());
        } catch (...) {
          Fail(where, "bad message index '" + it.key() + "'");
        }
        out[idx] = GetRational(it.value(), where + "." + key);
      }
    };
    table("wcmtt", n.wcmtt);
    table("best_case", n.best_case);
    if (nj.contains("can")) n.can = ParseCan(nj.at("can"), where + ".can");
    m.networks.push_back(std::move(n));
  }

  for (std::size_t i = 0; i < procs.size(); ++i) {
    const json& pj = procs[i];
    std::string where = "processes[" + std::to_string(i) + "]";
    PisemProcess p;
    p.name = names.processes[i];
    if (pj.contains("variables")) {
      for (const auto& v : pj.at("variables")) p.variables.push_back(ParseVariable(v, where));
    }
    if (pj.contains("env_variables")) {
      for (const auto& v : pj.at("env_variables")) p.env_variables.push_back(ParseVariable(v, where));
    }
    if (pj.contains("actions")) {
      const json& acts = pj.at("actions");
      for (std::size_t k = 0; k < acts.size(); ++k) {
        std::string aw = where + ".actions[" + std::to_string(k) + "]";
        TimedAction a;
        a.pattern = ParsePattern(acts[k], names, aw);
        a.release = GetRational(Need(acts[k], "release", aw), aw + ".release");
        a.deadline = GetRational(Need(acts[k], "deadline", aw), aw + ".deadline");
        if (acts[k].contains("wcet")) a.wcet = GetRational(acts[k].at("wcet"), aw + ".wcet");
        p.actions.push_back(std::move(a));
      }
    }
    m.processes.push_back(std::move(p));
  }

  if (doc.contains("faults")) spec.faults = ParseFaultArray(doc.at("faults"), names);
  spec.goal = GetString(doc, "goal", "document", "true");
  return spec;
}

SystemSpec LoadSpec(const std::string& path) { return ParseSpec(ReadTextFile(path)); }

std::string DumpSpec(const SystemSpec& spec) {
  const PisemModel& m = spec.model;
  Names names = NamesOf(m);
  json doc;
  doc["format"] = kModelFormat;
  doc["period"] = PutRational(m.period);
  json procs = json::array();
  for (const auto& p : m.processes) {
    json pj;
    pj["name"] = p.name;
    pj["variables"] = json::array();
    for (const auto& v : p.variables) pj["variables"].push_back(DumpVariable(v));
    pj["env_variables"] = json::array();
    for (const auto& v : p.env_variables) pj["env_variables"].push_back(DumpVariable(v));
    pj["actions"] = json::array();
    for (const auto& a : p.actions) {
      json aj = DumpPattern(a.pattern, names);
      aj["release"] = PutRational(a.release);
      aj["deadline"] = PutRational(a.deadline);
      if (a.wcet) aj["wcet"] = PutRational(*a.wcet);
      pj["actions"].push_back(std::move(aj));
    }
    procs.push_back(std::move(pj));
  }
  doc["processes"] = std::move(procs);
  json nets = json::array();
  for (const auto& n : m.networks) {
    json nj;
    nj["name"] = n.name;
    nj["message_count"] = n.message_count;
    nj["wcmtt"] = json::object();
    for (const auto& [k, v] : n.wcmtt) nj["wcmtt"][std::to_string(k)] = PutRational(v);
    if (!n.best_case.empty()) {
      nj["best_case"] = json::object();
      for (const auto& [k, v] : n.best_case) nj["best_case"][std::to_string(k)] = PutRational(v);
    }
    if (n.can) nj["can"] = DumpCan(*n.can);
    nets.push_back(std::move(nj));
  }
  doc["networks"] = std::move(nets);
  json faults = json::array();
  for (const auto& f : spec.faults.entries) {
    json eff = {{"kind", "message_loss"}};
    if (f.effect.network >= 0) eff["network"] = names.networks.at(f.effect.network);
    faults.push_back({{"type", f.type}, {"max_per_period", f.max_per_period}, {"effect", eff}});
  }
  doc["faults"] = std::move(faults);
  doc["goal"] = spec.goal;
  return doc.dump(2) + "\n";
}

FaultModel ParseFaults(std::string_view json_text, const PisemModel& model) {
  json doc = ParseDocument(json_text);
  if (!doc.is_object() || !doc.contains("faults")) Fail("document", "missing 'faults'");
  return ParseFaultArray(doc.at("faults"), NamesOf(model));
}

TemplatePool ParseTemplates(std::string_view json_text, const PisemModel& model) {
  json doc = ParseDocument(json_text);
  if (!doc.is_object()) Fail("document", "expected an object");
  CheckFormat(doc, kTemplatesFormat);
  Names names = NamesOf(model);
  TemplatePool pool;
  if (!doc.contains("ft_templates")) return pool;
  const json& arr = doc.at("ft_templates");
  if (!arr.is_array()) Fail("ft_templates", "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& t = arr[i];
    std::string where = "ft_templates[" + std::to_string(i) + "]";
    FtTemplate ft;
    ft.process = Resolve(Need(t, "process", where), names.processes, "process", where);
    const json& between = Need(t, "between", where);
    if (!between.is_array() || between.size() != 2 || !between[0].is_number_integer() ||
        !between[1].is_number_integer()) {
      Fail(where, "'between' must be two action indices");
    }
    ft.c = between[0].get<int>();
    ft.d = between[1].get<int>();
    if (t.contains("candidates")) {
      for (const auto& cj : t.at("candidates")) {
        Candidate c;
        c.pattern = ParsePattern(Need(cj, "pattern", where), names, where);
        if (cj.contains("wcet")) c.wcet = GetRational(cj.at("wcet"), where + ".wcet");
        ft.candidates.push_back(std::move(c));
      }
    }
    pool.push_back(std::move(ft));
  }
  return pool;
}

std::string DumpTemplates(const TemplatePool& pool, const PisemModel& model) {
  Names names = NamesOf(model);
  json doc;
  doc["format"] = kTemplatesFormat;
  doc["ft_templates"] = json::array();
  for (const auto& ft : pool) {
    json t;
    t["process"] = names.processes.at(ft.process);
    t["between"] = {ft.c, ft.d};
    t["candidates"] = json::array();
    for (const auto& c : ft.candidates) {
      json cj = {{"pattern", DumpPattern(c.pattern, names)}};
      if (c.wcet) cj["wcet"] = PutRational(*c.wcet);
      t["candidates"].push_back(std::move(cj));
    }
    doc["ft_templates"].push_back(std::move(t));
  }
  return doc.dump(2) + "\n";
}

std::vector<FtSelection> ParseSelections(std::string_view json_text, const PisemModel& model) {
  json doc = ParseDocument(json_text);
  if (!doc.is_object()) Fail("document", "expected an object");
  CheckFormat(doc, kSelectionFormat);
  Names names = NamesOf(model);
  std::vector<FtSelection> out;
  if (!doc.contains("ft_actions")) return out;
  const json& arr = doc.at("ft_actions");
  if (!arr.is_array()) Fail("ft_actions", "expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& a = arr[i];
    std::string where = "ft_actions[" + std::to_string(i) + "]";
    FtSelection s;
    s.process = Resolve(Need(a, "process", where), names.processes, "process", where);
    s.index = GetRational(Need(a, "index", where), where + ".index");
    s.chosen.pattern = ParsePattern(Need(a, "pattern", where), names, where);
    if (a.contains("wcet")) s.chosen.wcet = GetRational(a.at("wcet"), where + ".wcet");
    s.tuple.assign(names.processes.size(), Rational(0));
    s.tuple[s.process] = s.index;
    std::vector<char> given(names.processes.size(), 0);
    const json& t = Need(a, "tuple", where);
    if (!t.is_object()) Fail(where, "'tuple' must map process names to indices");
    for (const auto& [k, v] : t.items()) {
      int m = Resolve(json(k), names.processes, "process", where + ".tuple");
      s.tuple[m] = GetRational(v, where + ".tuple." + k);
      given[m] = 1;
    }
    for (std::size_t m = 0; m < given.size(); ++m) {
      if (!given[m] && static_cast<int>(m) != s.process) Fail(where, "tuple lacks process " + names.processes[m]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string DumpSelections(const std::vector<FtSelection>& selections, const PisemModel& model) {
  Names names = NamesOf(model);
  json doc;
  doc["format"] = kSelectionFormat;
  doc["ft_actions"] = json::array();
  for (const auto& s : selections) {
    json a;
    a["process"] = names.processes.at(s.process);
    a["index"] = PutRational(s.index);
    a["pattern"] = DumpPattern(s.chosen.pattern, names);
    if (s.chosen.wcet) a["wcet"] = PutRational(*s.chosen.wcet);
    a["tuple"] = json::object();
    for (std::size_t m = 0; m < s.tuple.size(); ++m) {
      if (static_cast<int>(m) != s.process) a["tuple"][names.processes[m]] = PutRational(s.tuple[m]);
    }
    doc["ft_actions"].push_back(std::move(a));
  }
  return doc.dump(2) + "\n";
}

WcetTable ParseWcetTable(std::string_view json_text, const PisemModel& model) {
  json doc = ParseDocument(json_text);
  if (!doc.is_object()) Fail("document", "expected an object");
  CheckFormat(doc, kWcetFormat);
  Names names = NamesOf(model);
  WcetTable t;
  if (doc.contains("actions")) {
    const json& acts = doc.at("actions");
    if (!acts.is_object()) Fail("actions", "expected an object");
    for (const auto& [k, v] : acts.items()) {
      Rational w = GetRational(v, "actions." + k);
      if (w <= Rational(0)) Fail("actions." + k, "WCET must be positive");
      t.actions[k] = w;
    }
  }
  if (doc.contains("messages")) {
    const json& msgs = doc.at("messages");
    if (!msgs.is_array()) Fail("messages", "expected an array");
    for (std::size_t i = 0; i < msgs.size(); ++i) {
      std::string where = "messages[" + std::to_string(i) + "]";
      int net = Resolve(Need(msgs[i], "network", where), names.networks, "network", where);
      int index = static_cast<int>(GetInt(msgs[i], "index", where, 0));
      if (index < 1) Fail(where, "message index must be positive");
      Rational w = GetRational(Need(msgs[i], "wcmtt", where), where + ".wcmtt");
      if (w < Rational(0)) Fail(where, "WCMTT must not be negative");
      t.messages[{net, index}] = w;
    }
  }
  return t;
}

}  // namespace ftsynth
