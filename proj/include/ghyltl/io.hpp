#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ghyltl/traces.hpp"

namespace ghyltl::io {

/// Contents of a trace-set file.
struct TraceSet {
  PropSet ap;
  std::vector<std::string> names;
  std::vector<LassoTrace> traces;
};

/// Throws Error if the file cannot be read or written.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// {"ap": [...], "traces": [{"name": s, "prefix": [[props]], "loop": [[props]]}]}.
/// Malformed JSON raises ParseError with line/column; a well-formed file that
/// does not match the schema raises DomainError.
TraceSet parse_traceset(std::string_view json);
std::string traceset_to_json(const TraceSet& ts);
/// Names the traces t0, t1, ...
TraceSet make_traceset(const std::vector<LassoTrace>& traces);

/// {"ap": [...], "vertices": [{"id": s, "label": [props]}], "edges": [[src, dst]], "initial": [ids]}.
TransitionSystem parse_ts(std::string_view json);
std::string ts_to_json(const TransitionSystem& ts);

} // namespace ghyltl::io
