#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokeval/errors.hpp"

namespace tokeval {

// Dense 0-based token <-> id bijection. Insertion order defines ids.
class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t add(std::string token) {
    auto [it, inserted] = ids_.emplace(token, tokens_.size());
    if (!inserted) throw UsageError("duplicate vocabulary token: " + token);
    tokens_.push_back(std::move(token));
    return tokens_.size() - 1;
  }

  bool contains(std::string_view token) const {
    return ids_.find(std::string(token)) != ids_.end();
  }

  std::optional<std::size_t> id_of(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& token(std::size_t id) const {
    if (id >= tokens_.size())
      throw UsageError("token id out of range: " + std::to_string(id));
    return tokens_[id];
  }

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> ids_;
};

}  // namespace tokeval
