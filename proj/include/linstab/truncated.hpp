#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "linstab/epset.hpp"

namespace linstab {

/// A set known exactly on [0, horizon] only.
struct TruncatedSet {
  std::vector<Int> elems;  // sorted, inside [0, horizon]
  Int horizon = 0;
  std::string construction;                  // e.g. "bohr"
  std::map<std::string, std::string> params;  // construction parameters, as written

  bool contains(Int x) const { return std::binary_search(elems.begin(), elems.end(), x); }
  std::size_t size() const { return elems.size(); }
  EPSet as_epset() const { return EPSet::finite(elems); }
  /// The construction call in the set grammar, or the element list when there is none.
  std::string to_string() const {
    auto param = [&](const std::string& k) { return params.count(k) ? params.at(k) : std::string(); };
    if (construction == "bohr") return "bohr(" + param("alpha") + "," + param("delta") + "," + param("N") + ")";
    if (construction == "sparse") return "sparse(" + param("delta") + "," + param("xs") + ")";
    return as_epset().to_string();
  }
  /// |A cap [1, n]|
  Int count_up_to(Int n) const {
    return static_cast<Int>(std::upper_bound(elems.begin(), elems.end(), n) -
                            std::lower_bound(elems.begin(), elems.end(), Int{1}));
  }
};

}  // namespace linstab
