#include "habit/vocab.hpp"

#include <cctype>
#include <stdexcept>

namespace habit {

bool valid_token_name(std::string_view name) {
  if (name.empty()) return false;
  for (unsigned char c : name)
    if (std::isspace(c)) return false;
  return true;
}

TokenId Vocabulary::intern(std::string_view name) {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  if (!valid_token_name(name))
    throw std::invalid_argument("token name must be non-empty and contain no whitespace: '" +
                                std::string(name) + "'");
  TokenId id = static_cast<TokenId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::name(TokenId id) const {
  if (id >= names_.size()) throw std::out_of_range("unknown token id");
  return names_[id];
}

}  // namespace habit
