#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "revolve/action.hpp"

namespace revolve {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON-lines schema, one action per line:
//   {"kind": "advance", "oldCapo": 0, "capo": 4, "check": null}

inline nlohmann::json to_json(const Action& a) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(a.kind));
  j["oldCapo"] = a.old_capo;
  j["capo"] = a.capo;
  j["check"] = a.check ? nlohmann::json(*a.check) : nlohmann::json(nullptr);
  return j;
}

inline Action action_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ParseError("action is not a JSON object");
  }
  for (const char* key : {"kind", "oldCapo", "capo", "check"}) {
    if (!j.contains(key)) {
      throw ParseError(std::string("missing field \"") + key + "\"");
    }
  }
  if (!j["kind"].is_string()) {
    throw ParseError("field \"kind\" is not a string");
  }
  const auto kind = parse_action_kind(j["kind"].get<std::string>());
  if (!kind) {
    throw ParseError("unknown action kind \"" + j["kind"].get<std::string>() + "\"");
  }
  if (!j["oldCapo"].is_number_integer() || !j["capo"].is_number_integer()) {
    throw ParseError("fields \"oldCapo\" and \"capo\" must be integers");
  }
  Action a{*kind, j["oldCapo"].get<step_t>(), j["capo"].get<step_t>(), std::nullopt};
  if (!j["check"].is_null()) {
    if (!j["check"].is_number_integer()) {
      throw ParseError("field \"check\" must be an integer or null");
    }
    a.check = j["check"].get<step_t>();
  }
  return a;
}

inline void write_jsonl(std::ostream& out, std::span<const Action> actions) {
  for (const auto& a : actions) {
    out << to_json(a).dump() << '\n';
  }
}

/// Blank lines are skipped; anything else must be a valid action.
inline std::vector<Action> read_jsonl(std::istream& in) {
  std::vector<Action> actions;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      actions.push_back(action_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return actions;
}

/// Human-readable form: `T s0 | A 0->4 | T s1 | ... | F 9 | R s1 | ... | END`.
inline std::string compact(const Action& a) {
  const auto n = [](step_t v) { return std::to_string(v); };
  switch (a.kind) {
    case ActionKind::Advance: return "A " + n(a.old_capo) + "->" + n(a.capo);
    case ActionKind::Takeshot: return "T s" + n(a.check.value_or(-1));
    case ActionKind::Restore: return "R s" + n(a.check.value_or(-1));
    case ActionKind::Firstrun: return "F " + n(a.capo);
    case ActionKind::Youturn: return "Y " + n(a.capo);
    case ActionKind::Terminate: return "END";
    case ActionKind::Error: return "ERR";
  }
  return "ERR";
}

inline std::string compact(std::span<const Action> actions) {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) {
      out += " | ";
    }
    out += compact(actions[i]);
  }
  return out;
}

}  // namespace revolve
