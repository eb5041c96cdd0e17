#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace habit {

/// Dense identifier for an interned token name. Ids are assigned in first-seen
/// order and double as indices into Vocabulary and into serialized documents.
using TokenId = std::uint32_t;

/// Bijection between token names and dense ids.
///
/// Names must be non-empty and free of whitespace (they are written
/// space-separated in trace files and DOT labels).
class Vocabulary {
public:
  /// Returns the id for `name`, interning it if unseen.
  /// Throws std::invalid_argument for an empty or whitespace-containing name.
  TokenId intern(std::string_view name);

  /// Id for a known name, std::nullopt otherwise. Never interns.
  std::optional<TokenId> find(std::string_view name) const;

  const std::string& name(TokenId id) const;
  std::size_t size() const { return names_.size(); }

  /// Names in id order (id == index).
  const std::vector<std::string>& names() const { return names_; }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// True if `name` is a legal token name (non-empty, no whitespace).
bool valid_token_name(std::string_view name);

}  // namespace habit
