#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace mulrf {

// Bidirectional name <-> dense id map for taxon labels.  A tree stores ids
// only; every tree in one analysis shares a single table.
class TaxonTable {
 public:
  // Returns the id of `name`, inserting it if absent.
  int add(const std::string& name);
  // Returns the id of `name`, or -1 if absent.
  int id_of(const std::string& name) const;
  const std::string& name_of(int id) const { return names_.at(id); }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace mulrf
