#pragma once

#include <compare>
#include <string>
#include <vector>

#include "ocqa/common.hpp"

namespace ocqa {

// Finite ordered labeled tree (prefix-closed child addressing by
// construction: children are a dense vector).
struct LabeledTree {
  std::string label;
  std::vector<LabeledTree> children;

  std::size_t size() const {
    std::size_t total = 1;
    for (const auto& c : children) total += c.size();
    return total;
  }
};

bool operator==(const LabeledTree& a, const LabeledTree& b);
bool operator<(const LabeledTree& a, const LabeledTree& b);

// Canonical JSON: nested {"children":[...],"label":...}; bit-exact
// round-trip.
std::string tree_to_json(const LabeledTree& tree);
LabeledTree tree_from_json(const std::string& text);

std::string tree_to_dot(const LabeledTree& tree);
std::string trees_to_dot(const std::vector<LabeledTree>& trees);

}  // namespace ocqa
