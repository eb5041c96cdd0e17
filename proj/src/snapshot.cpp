#include "habit/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>
#include <vector>

#include <json.hpp>

namespace habit {

namespace {

constexpr int kFormatVersion = 1;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);  // enough digits to round-trip exactly
  return buf;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_snapshot_text(const Model& model) {
  const ModelParams& params = model.params();
  std::string out;
  out += "{\n";
  out += "  \"format_version\": ";
  out += std::to_string(kFormatVersion);
  out += ",\n  \"window\": ";
  out += std::isinf(params.window) ? "\"inf\"" : fmt_double(params.window);
  out += ",\n  \"order\": ";
  out += params.order ? std::to_string(*params.order) : "\"inf\"";
  out += ",\n  \"reserve\": ";
  out += fmt_double(params.reserve);
  out += ",\n  \"clock\": ";
  out += std::to_string(model.sequence_count());
  out += ",\n  \"vocabulary\": [";
  const auto& names = model.vocab().names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += quote(names[i]);
  }
  out += "],\n  \"instances\": [";
  for (std::size_t r = 0; r < model.ranks().size(); ++r) {
    out += r ? ",\n    [" : "\n    [";

    std::vector<const ContextKey*> keys;
    keys.reserve(model.ranks()[r].tables().size());
    for (const auto& [key, counter] : model.ranks()[r].tables()) keys.push_back(&key);
    std::sort(keys.begin(), keys.end(),
              [](const ContextKey* a, const ContextKey* b) { return *a < *b; });

    for (std::size_t e = 0; e < keys.size(); ++e) {
      const DecayedCounter& counter = model.ranks()[r].tables().at(*keys[e]);
      out += e ? ",\n      {\"context\": [" : "\n      {\"context\": [";
      for (std::size_t i = 0; i < keys[e]->size(); ++i) {
        if (i) out += ", ";
        out += std::to_string((*keys[e])[i]);
      }
      out += "], \"counts\": [";
      const auto& entries = counter.entries();
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += ", ";
        out += '[';
        out += std::to_string(entries[i].first);
        out += ", ";
        out += fmt_double(entries[i].second);
        out += ']';
      }
      out += "], \"last_event\": ";
      out += std::to_string(counter.last_event());
      out += '}';
    }
    out += keys.empty() ? "]" : "\n    ]";
  }
  out += model.ranks().empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end())
    throw SnapshotError(std::string("snapshot: missing field '") + field + "'");
  return *it;
}

std::uint64_t require_uint(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_number_unsigned())
    throw SnapshotError(std::string("snapshot: field '") + field +
                        "' must be an unsigned integer");
  return v.get<std::uint64_t>();
}

}  // namespace

Model from_snapshot_text(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SnapshotError("snapshot: not a valid JSON document");
  if (!doc.is_object()) throw SnapshotError("snapshot: top-level value must be an object");

  if (require_uint(doc, "format_version") != kFormatVersion)
    throw SnapshotError("snapshot: unsupported 'format_version' (expected 1)");

  ModelParams params;
  const json& window = require(doc, "window");
  if (window.is_string() && window.get<std::string>() == "inf")
    params.window = std::numeric_limits<double>::infinity();
  else if (window.is_number() && window.get<double>() >= 1.0)
    params.window = window.get<double>();
  else
    throw SnapshotError("snapshot: field 'window' must be a number >= 1 or \"inf\"");

  const json& order = require(doc, "order");
  if (order.is_string() && order.get<std::string>() == "inf")
    params.order = std::nullopt;
  else if (order.is_number_unsigned() && order.get<std::uint64_t>() >= 1)
    params.order = static_cast<std::uint32_t>(order.get<std::uint64_t>());
  else
    throw SnapshotError("snapshot: field 'order' must be an integer >= 1 or \"inf\"");

  const json& reserve = require(doc, "reserve");
  if (!reserve.is_number() || !(reserve.get<double>() >= 0.0))
    throw SnapshotError("snapshot: field 'reserve' must be a non-negative number");
  params.reserve = reserve.get<double>();

  std::uint64_t clock = require_uint(doc, "clock");

  const json& vocab_json = require(doc, "vocabulary");
  if (!vocab_json.is_array())
    throw SnapshotError("snapshot: field 'vocabulary' must be an array of names");
  Vocabulary vocab;
  for (const json& name : vocab_json) {
    if (!name.is_string() || !valid_token_name(name.get<std::string>()))
      throw SnapshotError("snapshot: field 'vocabulary' must contain legal token names");
    vocab.intern(name.get<std::string>());
  }
  if (vocab.size() != vocab_json.size())
    throw SnapshotError("snapshot: field 'vocabulary' contains a duplicate name");

  const json& instances = require(doc, "instances");
  if (!instances.is_array())
    throw SnapshotError("snapshot: field 'instances' must be an array (one entry per rank)");

  std::vector<RankTable> ranks;
  ranks.reserve(instances.size());
  for (std::size_t r = 0; r < instances.size(); ++r) {
    const json& rank_json = instances[r];
    if (!rank_json.is_array())
      throw SnapshotError("snapshot: field 'instances' must contain arrays of context entries");
    RankTable table(params.window, params.reserve);
    std::size_t expected_len = r;  // rank r+1 conditions on r tokens ...
    if (params.order) expected_len = std::min<std::size_t>(expected_len, *params.order);

    for (const json& entry : rank_json) {
      if (!entry.is_object())
        throw SnapshotError("snapshot: instance entries must be objects");
      const json& context_json = require(entry, "context");
      if (!context_json.is_array())
        throw SnapshotError("snapshot: field 'context' must be an array of token indices");
      ContextKey context;
      context.reserve(context_json.size());
      for (const json& id : context_json) {
        if (!id.is_number_unsigned() || id.get<std::uint64_t>() >= vocab.size())
          throw SnapshotError("snapshot: field 'context' must index into the vocabulary");
        context.push_back(static_cast<TokenId>(id.get<std::uint64_t>()));
      }
      if (context.size() != expected_len)
        throw SnapshotError("snapshot: field 'context' has the wrong length for its rank");

      const json& counts_json = require(entry, "counts");
      if (!counts_json.is_array() || counts_json.empty())
        throw SnapshotError("snapshot: field 'counts' must be a non-empty array");
      std::vector<std::pair<TokenId, double>> counts;
      counts.reserve(counts_json.size());
      for (const json& pair : counts_json) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
            pair[0].get<std::uint64_t>() >= vocab.size() || !pair[1].is_number() ||
            !std::isfinite(pair[1].get<double>()) || pair[1].get<double>() < 0.0)
          throw SnapshotError(
              "snapshot: field 'counts' must hold [token index, non-negative weight] pairs");
        counts.emplace_back(static_cast<TokenId>(pair[0].get<std::uint64_t>()),
                            pair[1].get<double>());
      }

      std::uint64_t last_event = require_uint(entry, "last_event");
      if (last_event > clock)
        throw SnapshotError("snapshot: field 'last_event' must not exceed 'clock'");

      try {
        table.adopt(std::move(context),
                    DecayedCounter(params.window, params.reserve, std::move(counts), last_event));
      } catch (const std::invalid_argument& e) {
        throw SnapshotError(std::string("snapshot: ") + e.what());
      }
    }
    ranks.push_back(std::move(table));
  }

  return Model(params, std::move(vocab), std::move(ranks), clock);
}

}  // namespace habit
