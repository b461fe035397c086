#pragma once

#include <nlohmann/json.hpp>

namespace blochgen {

/// Stateless request handler behind `blochgen serve`:
///   {"op": "validate"|"equations"|"evolve"|"sweep"|"codegen"|"preset", "config": {...}, ...}
/// Always returns a JSON object with "ok"; failures carry
///   {"ok": false, "error": {"kind": ..., "messages": [...]}}.
nlohmann::json handle_request(const nlohmann::json& request);

}  // namespace blochgen
