#pragma once

#include <string>

#include "json.hpp"
#include "kramers/geometry.hpp"
#include "kramers/potential.hpp"

namespace kramers {

struct RunConfig {
  PotentialSpec spec;
  DomainGeometry geom;
  int resolution = 0;  // topology grid, 0 for the default
  int grid = 2048;     // spectral cells
  nlohmann::json source;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
nlohmann::json domain_json(const DomainGeometry& g);

}  // namespace kramers
