#include "ghyltl/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ghyltl/error.hpp"

namespace ghyltl::io {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write '" + path + "'");
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(msg, line, col);
  }
}

PropSet props(const json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array of propositions");
  std::vector<std::string> out;
  for (const auto& p : j) {
    if (!p.is_string()) throw DomainError(where + ": propositions must be strings");
    out.push_back(p.get<std::string>());
  }
  return PropSet(std::move(out));
}

std::vector<PropSet> letters(const json& j, const std::string& where) {
  if (!j.is_array()) throw DomainError(where + ": expected an array of letters");
  std::vector<PropSet> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(props(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw DomainError(where + ": missing field '" + key + "'");
  return j.at(key);
}

json letters_json(const std::vector<PropSet>& ls) {
  json out = json::array();
  for (const auto& l : ls) out.push_back(l.items());
  return out;
}

} // namespace

TraceSet parse_traceset(std::string_view text) {
  const json j = parse_json(text);
  TraceSet out;
  out.ap = props(field(j, "ap", "trace set"), "ap");
  const json& ts = field(j, "traces", "trace set");
  if (!ts.is_array()) throw DomainError("traces: expected an array");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = "traces[" + std::to_string(i) + "]";
    std::string name = "t" + std::to_string(i);
    if (ts[i].is_object() && ts[i].contains("name")) {
      if (!ts[i]["name"].is_string()) throw DomainError(where + ".name: expected a string");
      name = ts[i]["name"].get<std::string>();
    }
    out.names.push_back(name);
    out.traces.emplace_back(out.ap, letters(field(ts[i], "prefix", where), where + ".prefix"),
                            letters(field(ts[i], "loop", where), where + ".loop"));
  }
  return out;
}

std::string traceset_to_json(const TraceSet& ts) {
  json out;
  out["ap"] = ts.ap.items();
  out["traces"] = json::array();
  for (std::size_t i = 0; i < ts.traces.size(); ++i) {
    json t;
    t["name"] = i < ts.names.size() ? ts.names[i] : "t" + std::to_string(i);
    t["prefix"] = letters_json(ts.traces[i].prefix());
    t["loop"] = letters_json(ts.traces[i].loop());
    out["traces"].push_back(t);
  }
  return out.dump(2) + "\n";
}

TraceSet make_traceset(const std::vector<LassoTrace>& traces) {
  TraceSet out;
  for (const auto& t : traces) out.ap = out.ap.united(t.ap());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    out.names.push_back("t" + std::to_string(i));
    out.traces.emplace_back(out.ap, traces[i].prefix(), traces[i].loop());
  }
  return out;
}

TransitionSystem parse_ts(std::string_view text) {
  const json j = parse_json(text);
  const PropSet ap = props(field(j, "ap", "system"), "ap");
  const json& vs = field(j, "vertices", "system");
  if (!vs.is_array()) throw DomainError("vertices: expected an array");
  std::vector<std::string> ids;
  std::vector<PropSet> labels;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const json& id = field(vs[i], "id", where);
    if (!id.is_string()) throw DomainError(where + ".id: expected a string");
    if (!index.emplace(id.get<std::string>(), i).second)
      throw DomainError(where + ": duplicate id '" + id.get<std::string>() + "'");
    ids.push_back(id.get<std::string>());
    labels.push_back(props(field(vs[i], "label", where), where + ".label"));
  }
  auto vertex = [&](const json& v, const std::string& where) -> std::size_t {
    if (v.is_number_unsigned()) {
      if (v.get<std::size_t>() >= ids.size()) throw DomainError(where + ": vertex index out of range");
      return v.get<std::size_t>();
    }
    if (!v.is_string()) throw DomainError(where + ": expected a vertex id");
    auto it = index.find(v.get<std::string>());
    if (it == index.end()) throw DomainError(where + ": unknown vertex '" + v.get<std::string>() + "'");
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  const json& es = field(j, "edges", "system");
  if (!es.is_array()) throw DomainError("edges: expected an array");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!es[i].is_array() || es[i].size() != 2) throw DomainError(where + ": expected [src, dst]");
    edges.emplace_back(vertex(es[i][0], where), vertex(es[i][1], where));
  }
  std::vector<std::size_t> initial;
  const json& is = field(j, "initial", "system");
  if (!is.is_array()) throw DomainError("initial: expected an array");
  for (std::size_t i = 0; i < is.size(); ++i) initial.push_back(vertex(is[i], "initial[" + std::to_string(i) + "]"));
  return TransitionSystem(ap, ids, labels, edges, initial);
}

std::string ts_to_json(const TransitionSystem& ts) {
  json out;
  out["ap"] = ts.ap().items();
  out["vertices"] = json::array();
  for (std::size_t v = 0; v < ts.size(); ++v) out["vertices"].push_back({{"id", ts.ids()[v]}, {"label", ts.label(v).items()}});
  out["edges"] = json::array();
  for (const auto& [a, b] : ts.edges()) out["edges"].push_back({ts.ids()[a], ts.ids()[b]});
  out["initial"] = json::array();
  for (auto v : ts.initial()) out["initial"].push_back(ts.ids()[v]);
  return out.dump(2) + "\n";
}

} // namespace ghyltl::io
