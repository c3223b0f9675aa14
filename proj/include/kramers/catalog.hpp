#pragma once

#include <map>
#include <string>
#include <vector>

#include "kramers/geometry.hpp"
#include "kramers/potential.hpp"

namespace kramers {

struct CatalogEntry {
  std::string name;
  int dimension = 1;
  std::string expression;
  std::map<std::string, double> params;
  DomainGeometry domain;
  std::string summary;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& name);
// parameters in overrides replace the entry defaults; unknown names are rejected
PotentialSpec catalog_spec(const std::string& name, const std::map<std::string, double>& overrides = {});

}  // namespace kramers
