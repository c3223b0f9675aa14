#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kramers/geometry.hpp"
#include "kramers/landscape.hpp"
#include "kramers/potential.hpp"

namespace kramers {

struct GridFiltration {
  int dim = 1;
  int resolution = 0;
  DomainGeometry geom;
  double hx = 0.0, hy = 0.0;
  double x0 = 0.0, y0 = 0.0;  // lower corner of the grid
  std::vector<Point> centers;
  std::vector<double> values;
  std::vector<int> grid_to_cell;  // -1 where the cell center is outside the domain
  std::vector<int> cell_i, cell_j;
  std::vector<char> boundary_adjacent;
  std::vector<double> critical_values;  // sorted, distinct within the tie tolerance
  double value_gap = 0.0;               // largest value difference across an adjacency
  double tie_tol = 1e-9;

  std::size_t size() const { return values.size(); }
  // 4-neighbourhood in 2D, 2-neighbourhood in 1D
  int neighbors(int cell, int out[4]) const;
  // cell containing p, or the nearest present cell
  int cell_at(const Point& p) const;
  double cell_diagonal() const { return dim == 1 ? hx : std::hypot(hx, hy); }
};

GridFiltration build_filtration(const PotentialField& field, const DomainGeometry& geom, int resolution,
                                const LandscapeAtlas* atlas = nullptr);

// A component of {f < level - delta}, where level is a critical value and delta is
// half the gap to the next lower critical value.
struct SublevelComponent {
  int id = -1;
  double level = 0.0;
  int query = -1;
  std::vector<int> cells;
  bool touches_boundary = false;
  std::vector<int> contained_minima;  // indices into atlas.interior_criticals
  int representative = -1;
};

struct SeparatingSaddle {
  enum class Kind { Interior, Boundary };
  Kind kind = Kind::Interior;
  int ref = -1;  // index into interior_criticals or boundary_saddles
  Point location{0.0, 0.0};
  double value = 0.0;
  std::optional<std::pair<int, int>> merged_component_ids;
};

struct JEntry {
  int minimum = -1;  // index into interior_criticals
  int k = 0;         // level, from 1
  int l = 0;         // index within the level, from 1
  std::vector<int> j;  // indices into the separating saddle list
  int component = -1;  // j-tilde, component id
  double saddle_value = 0.0;
  double depth = 0.0;
};

struct JMap {
  std::vector<JEntry> entries;  // ordered by (k, l)
  const JEntry* find_minimum(int minimum) const;
};

struct ExitHeight {
  double value = 0.0;
  int component = -1;  // C(x)
};

struct Verdict {
  std::optional<bool> value;  // absent when not assessable
  std::string detail;
  std::vector<Point> witnesses;
};

struct AssumptionReport {
  Verdict a0, a1, a2, a3, a4;
  double a1_margin = 0.0;
  std::optional<int> cmax;  // component id
  std::vector<int> boundary_contacts;  // indices into boundary_saddles
  bool cmax_min_is_global = false;
  double global_min = 0.0;
  double boundary_min = 0.0;
};

struct TopologyOptions {
  int resolution = 0;  // 0 picks 4096 in 1D and 256 per axis in 2D
  double a1_margin = 1e-6;
};

// Sublevel-set queries over a filtration. Sweeps once and keeps component
// labels at the levels just below and just above every critical value.
class Topology {
 public:
  Topology(FieldPtr field, DomainGeometry geom, LandscapeAtlas atlas, const TopologyOptions& opts = {});

  const GridFiltration& filtration() const { return filt_; }
  const LandscapeAtlas& atlas() const { return atlas_; }
  const PotentialField& field() const { return *field_; }
  const DomainGeometry& geom() const { return geom_; }
  const std::vector<SublevelComponent>& components() const { return components_; }
  const SublevelComponent& component(int id) const { return components_.at(id); }

  ExitHeight exit_height(int minimum) const;
  std::vector<int> first_level_components() const;  // sorted by depth, descending
  std::vector<SeparatingSaddle> detect_separating_saddles() const;
  JMap construct_jmaps(const std::vector<SeparatingSaddle>& saddles) const;
  AssumptionReport check_assumptions(const JMap& jmap, const std::vector<SeparatingSaddle>& saddles) const;

  double tie_tol() const { return filt_.tie_tol; }
  bool same_value(double a, double b) const;
  // label of the component of {f < level(q)} reached by discrete descent from p; -1 if stuck
  int attach(const Point& p, int q) const;
  int query_below(double critical_value) const;
  int query_above(double critical_value) const;
  double query_level(int q) const { return levels_[q]; }
  int label_of_cell(int q, int cell) const { return labels_[q][cell]; }
  int component_id(int q, int label) const { return label < 0 ? -1 : base_[q] + label; }
  double depth_of(int component) const;
  int argmin_of(int component) const;

 private:
  FieldPtr field_;
  DomainGeometry geom_;
  LandscapeAtlas atlas_;
  TopologyOptions opts_;
  GridFiltration filt_;
  std::vector<double> levels_;
  std::vector<std::vector<int>> labels_;
  std::vector<int> below_, above_;  // per critical value, query index
  std::vector<int> base_;  // first component id of each query
  std::vector<SublevelComponent> components_;
  std::vector<ExitHeight> heights_;  // per interior critical, only for minima

  int index_of_value(double v) const;
  std::pair<int, int> saddle_branches(const CriticalPoint& z, int q) const;
  int boundary_inward(const BoundarySaddle& b, int q) const;
  ExitHeight compute_exit_height(int minimum) const;
};

std::vector<SeparatingSaddle> detect_separating_saddles(const Topology& topo);
JMap construct_jmaps(const Topology& topo, const std::vector<SeparatingSaddle>& saddles);
AssumptionReport check_assumptions(const Topology& topo, const JMap& jmap, const std::vector<SeparatingSaddle>& saddles);
ExitHeight exit_height(const Topology& topo, int minimum);

struct WellDecomposition {
  std::shared_ptr<const Topology> topology;
  std::vector<SeparatingSaddle> saddles;
  JMap jmap;
  AssumptionReport report;
};

WellDecomposition decompose(FieldPtr field, const DomainGeometry& geom, const LandscapeAtlas& atlas,
                            const TopologyOptions& opts = {});

}  // namespace kramers
