// Copyright 2026 The clevy Authors
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

#include "clevy/io.hpp"

#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

#include "clevy/error.hpp"

namespace clevy::io {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what, const std::string& detail) {
  fail(ErrorCode::kParse, what + ": " + detail);
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    parse_error(what, e.what());
  }
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    parse_error(what, e.what());
  }
}

Signature signature_of(const json& j) {
  if (j.is_string()) return Signature::parse(j.get<std::string>());
  if (j.is_array()) return Signature(j.get<std::vector<unsigned>>());
  fail(ErrorCode::kParse, "signature must be a string like \"(1,2)\" or an array");
}

void require_keys(const json& obj, const char* what, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) parse_error(what, "expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) parse_error(what, "unknown key '" + k + "'");
}

const json& field(const json& obj, const char* key, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(what, std::string("missing key '") + key + "'");
  return *it;
}

double number(const json& obj, const char* key, const char* what) {
  const json& v = field(obj, key, what);
  if (!v.is_number()) parse_error(what, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double dflt, const char* what) {
  return obj.contains(key) ? number(obj, key, what) : dflt;
}

std::array<double, 3> triple_or(const json& obj, const char* key, std::array<double, 3> dflt,
                                const char* what) {
  if (!obj.contains(key)) return dflt;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) parse_error(what, std::string("'") + key + "' must be an array of 3 numbers");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json measure_json(const FiniteMeasure& mu) {
  json entries = json::array();
  for (const auto& [key, atom] : mu.atoms()) entries.push_back({{"structure", key}, {"mass", atom.mass}});
  return {{"signature", mu.signature().to_string()}, {"n", mu.size()}, {"entries", entries}};
}

FiniteMeasure measure_of(const json& j) {
  constexpr const char* what = "measure";
  require_keys(j, what, {"signature", "n", "entries"});
  const Signature sig = signature_of(field(j, "signature", what));
  const auto n = field(j, "n", what).get<std::size_t>();
  FiniteMeasure mu(sig, n);
  const json& entries = field(j, "entries", what);
  if (!entries.is_array()) parse_error(what, "'entries' must be an array");
  std::set<std::string> seen;
  for (const auto& e : entries) {
    require_keys(e, "measure entry", {"structure", "mass"});
    const std::string text = field(e, "structure", what).get<std::string>();
    const Structure s = parse_structure(text);
    if (s.signature() != sig || s.size() != n)
      fail(ErrorCode::kShapeMismatch, "measure entry '" + text + "' does not match the measure shape");
    if (!seen.insert(serialize(s)).second) parse_error(what, "duplicate entry '" + text + "'");
    mu.add(s, number(e, "mass", what));
  }
  return mu;
}

void put_line(std::string& out, std::string_view a, std::string_view b) {
  out.append(a);
  out += ",\"";
  out.append(b);
  out += "\"\n";
}

// Splits "first,rest" and unquotes rest.
std::pair<std::string_view, std::string_view> split_row(std::string_view line, std::size_t lineno) {
  const auto comma = line.find(',');
  if (comma == std::string_view::npos)
    parse_error("csv", "line " + std::to_string(lineno) + ": expected two fields");
  std::string_view first = line.substr(0, comma), rest = line.substr(comma + 1);
  if (!rest.empty() && rest.front() == '"') {
    if (rest.size() < 2 || rest.back() != '"')
      parse_error("csv", "line " + std::to_string(lineno) + ": unterminated quote");
    rest = rest.substr(1, rest.size() - 2);
  }
  return {first, rest};
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto e = text.find('\n', pos);
    if (e == std::string_view::npos) e = text.size();
    std::string_view l = text.substr(pos, e - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (!l.empty()) out.push_back(l);
    pos = e + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t lineno) {
  double x = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size())
    parse_error("csv", "line " + std::to_string(lineno) + ": bad number '" + std::string(s) + "'");
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) fail(ErrorCode::kInternal, "double formatting failed");
  return std::string(buf, p);
}

std::string orbit_table_to_json(const OrbitTable& table) {
  json arr = json::array();
  for (const auto& e : table.entries) arr.push_back({{"canonical", e.id.canonical}, {"size", e.size}});
  return arr.dump(2) + "\n";
}

std::string measure_to_json(const FiniteMeasure& mu) { return measure_json(mu).dump(2) + "\n"; }

FiniteMeasure measure_from_json(std::string_view text) {
  const json j = parse_json(text, "measure");
  return guarded("measure", [&] { return measure_of(j); });
}

std::string orbit_weights_to_json(const OrbitWeights& w) {
  json arr = json::array();
  for (const auto& [orbit, p] : w.p) arr.push_back({{"orbit", orbit}, {"p", p}});
  const json j = {{"signature", w.signature.to_string()}, {"n", w.n}, {"weights", arr}};
  return j.dump(2) + "\n";
}

OrbitWeights orbit_weights_from_json(std::string_view text) {
  const json j = parse_json(text, "orbit weights");
  return guarded("orbit weights", [&] {
    constexpr const char* what = "orbit weights";
    require_keys(j, what, {"signature", "n", "weights"});
    OrbitWeights w{signature_of(field(j, "signature", what)), field(j, "n", what).get<std::size_t>(), {}};
    for (const auto& e : field(j, "weights", what)) {
      require_keys(e, what, {"orbit", "p"});
      w.p[field(e, "orbit", what).get<std::string>()] += number(e, "p", what);
    }
    return w;
  });
}

std::string intensity_to_json(const LevyIntensity& intensity) {
  json comps = json::array();
  for (const auto& comp : intensity.components()) {
    json c = {{"type", component_type_name(comp)}};
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ExplicitFinite>) {
            c["measure"] = measure_json(x.measure);
          } else {
            c["rate"] = x.rate;
            if constexpr (std::is_same_v<T, MixtureAtom>) c["flip_prob"] = x.flip_prob;
            if constexpr (std::is_same_v<T, VertexComponent>) {
              c["edge_prob"] = x.edge_prob;
              c["membership_prob"] = x.membership_prob;
              c["include_loop"] = x.include_loop;
            }
            if constexpr (std::is_same_v<T, PairComponent> || std::is_same_v<T, LoopComponent>)
              c["pattern"] = x.pattern;
          }
        },
        comp);
    comps.push_back(std::move(c));
  }
  const json j = {{"signature", intensity.signature().to_string()}, {"components", comps}};
  return j.dump(2) + "\n";
}

LevyIntensity intensity_from_json(std::string_view text) {
  const json j = parse_json(text, "intensity");
  return guarded("intensity", [&] {
    constexpr const char* what = "intensity";
    require_keys(j, what, {"signature", "components"});
    const Signature sig = signature_of(field(j, "signature", what));
    const json& arr = field(j, "components", what);
    if (!arr.is_array()) parse_error(what, "'components' must be an array");
    std::vector<IntensityComponent> comps;
    for (const auto& c : arr) {
      if (!c.is_object()) parse_error(what, "components must be objects");
      const std::string type = field(c, "type", what).get<std::string>();
      if (type == "mixture_atom") {
        require_keys(c, "mixture_atom", {"type", "rate", "flip_prob"});
        MixtureAtom a{number(c, "rate", what), {}};
        const json& fp = field(c, "flip_prob", what);
        if (fp.is_number())
          a.flip_prob.assign(sig.size(), fp.get<double>());
        else
          a.flip_prob = fp.get<std::vector<double>>();
        comps.emplace_back(std::move(a));
      } else if (type == "set_singleton") {
        require_keys(c, "set_singleton", {"type", "rate"});
        comps.emplace_back(SetSingleton{number(c, "rate", what)});
      } else if (type == "vertex") {
        require_keys(c, "vertex", {"type", "rate", "edge_prob", "membership_prob", "include_loop"});
        VertexComponent v;
        v.rate = number(c, "rate", what);
        v.edge_prob = number(c, "edge_prob", what);
        v.membership_prob = number_or(c, "membership_prob", 0.0, what);
        v.include_loop = c.value("include_loop", false);
        comps.emplace_back(v);
      } else if (type == "pair") {
        require_keys(c, "pair", {"type", "rate", "pattern"});
        comps.emplace_back(PairComponent{number(c, "rate", what), triple_or(c, "pattern", {1, 1, 1}, what)});
      } else if (type == "loop") {
        require_keys(c, "loop", {"type", "rate", "pattern"});
        comps.emplace_back(LoopComponent{number(c, "rate", what), triple_or(c, "pattern", {0, 1, 0}, what)});
      } else if (type == "explicit") {
        require_keys(c, "explicit", {"type", "measure"});
        comps.emplace_back(ExplicitFinite{measure_of(field(c, "measure", what))});
      } else {
        parse_error(what, "unknown component type '" + type + "'");
      }
    }
    return LevyIntensity(sig, std::move(comps));
  });
}

std::string walk_to_csv(const WalkTrajectory& traj) {
  std::string out = "step,structure\n";
  for (std::size_t m = 0; m < traj.states.size(); ++m)
    put_line(out, std::to_string(m), serialize(traj.states[m]));
  return out;
}

WalkTrajectory walk_from_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != "step,structure")
    parse_error("walk csv", "expected header 'step,structure'");
  WalkTrajectory traj;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [step, s] = split_row(lines[i], i + 1);
    if (step != std::to_string(i - 1))
      parse_error("walk csv", "line " + std::to_string(i + 1) + ": steps must count up from 0");
    traj.states.push_back(parse_structure(s));
    if (!traj.states.back().same_shape(traj.states.front()))
      fail(ErrorCode::kShapeMismatch, "walk csv line " + std::to_string(i + 1) + ": state shape changes");
  }
  if (traj.states.empty()) parse_error("walk csv", "no states");
  return traj;
}

std::string levy_to_csv(const LevyTrajectory& traj) {
  std::string out = "time,structure\n";
  for (const auto& e : traj.events) put_line(out, format_double(e.time), serialize(e.state));
  return out;
}

LevyTrajectory levy_from_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != "time,structure")
    parse_error("levy csv", "expected header 'time,structure'");
  LevyTrajectory traj;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [t, s] = split_row(lines[i], i + 1);
    traj.events.push_back({parse_double(t, i + 1), parse_structure(s)});
  }
  if (traj.events.empty()) parse_error("levy csv", "no events");
  traj.n = traj.events.front().state.size();
  traj.horizon = traj.events.back().time;
  validate_trajectory(traj);
  return traj;
}

std::string levy_to_jsonl(const LevyTrajectory& traj, std::uint64_t seed) {
  if (traj.events.empty()) fail(ErrorCode::kInvalidArgument, "empty trajectory");
  const Structure& x0 = traj.events.front().state;
  std::string out = json{{"signature", x0.signature().to_string()}, {"n", traj.n}, {"T", traj.horizon},
                         {"seed", seed}}
                        .dump() +
                    "\n";
  for (std::size_t i = 1; i < traj.events.size(); ++i) {
    const Structure d = increment(traj.events[i].state, traj.events[i - 1].state);
    out += json{{"t", traj.events[i].time}, {"increment", serialize(d)}}.dump() + "\n";
  }
  return out;
}

LevyTrajectory levy_from_jsonl(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) parse_error("levy jsonl", "missing header record");
  return guarded("levy jsonl", [&] {
    const json head = parse_json(lines.front(), "levy jsonl header");
    require_keys(head, "levy jsonl header", {"signature", "n", "T", "seed"});
    LevyTrajectory traj;
    traj.n = field(head, "n", "levy jsonl").get<std::size_t>();
    traj.horizon = number(head, "T", "levy jsonl");
    if (!field(head, "seed", "levy jsonl").is_number_unsigned())
      parse_error("levy jsonl", "'seed' must be a nonnegative integer");
    Structure state(signature_of(field(head, "signature", "levy jsonl")), traj.n);
    traj.events.push_back({0.0, state});
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const json rec = parse_json(lines[i], "levy jsonl record");
      require_keys(rec, "levy jsonl record", {"t", "increment"});
      state ^= parse_structure(field(rec, "increment", "levy jsonl").get<std::string>());
      traj.events.push_back({number(rec, "t", "levy jsonl"), state});
    }
    validate_trajectory(traj);
    return traj;
  });
}

std::string density_to_csv(const DensityVector& dv) {
  std::string out = "pattern,density\n";
  for (const auto& [pattern, d] : dv.entries()) {
    out += '"';
    out += pattern;
    out += "\",";
    out += format_double(d);
    out += '\n';
  }
  return out;
}

std::string limit_path_to_csv(std::span<const double> grid, std::span<const DensityVector> path) {
  if (grid.size() != path.size()) fail(ErrorCode::kInvalidArgument, "grid and path lengths differ");
  std::string out = "time,pattern,density\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (const auto& [pattern, d] : path[i].entries()) {
      out += format_double(grid[i]);
      out += ",\"";
      out += pattern;
      out += "\",";
      out += format_double(d);
      out += '\n';
    }
  return out;
}

std::string report_to_json(const TestReport& report) {
  json alphas = json::object();
  for (const auto& [a, reject] : report.decisions) alphas[format_double(a)] = reject;
  const json j = {{"statistic", report.statistic},
                  {"df", report.df},
                  {"p_value", report.p_value},
                  {"cells_used", report.cells_used},
                  {"pooled_cells", report.pooled_cells},
                  {"inconclusive", report.inconclusive},
                  {"alphas", alphas}};
  return j.dump(2) + "\n";
}

}  // namespace clevy::io
