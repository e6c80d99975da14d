#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

namespace bbatlas {

using json = nlohmann::json;

// Every way an operation can refuse to produce a value.  Deserialization
// problems and domain violations are kept apart so the CLI can map them to
// distinct messages; all of them surface as bbatlas::error.
enum class errc {
  invalid_parameters,        // precondition violated (named in the message)
  schema_violation,          // malformed JSON input, details carry a pointer path
  not_a_valid_graph,         // a graph value failed validation where a valid one is required
  unreachable_graph,         // filterability failure: finite level undefined
  witness_not_found,         // no move sequence found where one was promised
  equivariant_data_required, // Burnside trace needs data this build does not carry
  resource_limit,            // configured ceiling or checked arithmetic overflow hit
  cache_corruption,          // cache file exists but cannot be trusted
  interpolation_mismatch,    // point counts do not fit a polynomial of the expected shape
  io_error,
  internal,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_parameters: return "invalid_parameters";
    case errc::schema_violation: return "schema_violation";
    case errc::not_a_valid_graph: return "not_a_valid_graph";
    case errc::unreachable_graph: return "unreachable_graph";
    case errc::witness_not_found: return "witness_not_found";
    case errc::equivariant_data_required: return "equivariant_data_required";
    case errc::resource_limit: return "resource_limit";
    case errc::cache_corruption: return "cache_corruption";
    case errc::interpolation_mismatch: return "interpolation_mismatch";
    case errc::io_error: return "io_error";
    case errc::internal: return "internal";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  errc code;
  json details;

  error(errc c, const std::string& msg, json det = json::object())
      : std::runtime_error(msg), code(c), details(std::move(det)) {}

  json to_json() const {
    return json{{"error", {{"code", errc_name(code)},
                           {"message", what()},
                           {"details", details}}}};
  }
};

[[noreturn]] inline void fail(errc c, const std::string& msg, json det = json::object()) {
  throw error(c, msg, std::move(det));
}

inline void require(bool ok, errc c, const std::string& msg, json det = json::object()) {
  if (!ok) fail(c, msg, std::move(det));
}

}  // namespace bbatlas
