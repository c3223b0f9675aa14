#include "kramers/topology.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "kramers/errors.hpp"

namespace kramers {

namespace {

bool lex_less(const Point& a, const Point& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); }

struct UnionFind {
  std::vector<int> parent, rank;
  explicit UnionFind(std::size_t n) : parent(n), rank(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string fmt_point(const Point& p, int dim) {
  return dim == 1 ? fmt(p[0]) : "(" + fmt(p[0]) + ", " + fmt(p[1]) + ")";
}

}  // namespace

int GridFiltration::neighbors(int cell, int out[4]) const {
  int n = 0;
  int i = cell_i[cell], j = cell_j[cell];
  if (dim == 1) {
    if (i > 0) out[n++] = cell - 1;
    if (i + 1 < resolution) out[n++] = cell + 1;
    return n;
  }
  const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
  for (int k = 0; k < 4; ++k) {
    int ii = i + di[k], jj = j + dj[k];
    if (ii < 0 || jj < 0 || ii >= resolution || jj >= resolution) continue;
    int c = grid_to_cell[static_cast<std::size_t>(jj) * resolution + ii];
    if (c >= 0) out[n++] = c;
  }
  return n;
}

int GridFiltration::cell_at(const Point& p) const {
  int i = static_cast<int>(std::floor((p[0] - x0) / hx));
  i = std::clamp(i, 0, resolution - 1);
  if (dim == 1) return i;
  int j = static_cast<int>(std::floor((p[1] - y0) / hy));
  j = std::clamp(j, 0, resolution - 1);
  int c = grid_to_cell[static_cast<std::size_t>(j) * resolution + i];
  if (c >= 0) return c;
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= 4 && best < 0; ++r)
    for (int jj = j - r; jj <= j + r; ++jj)
      for (int ii = i - r; ii <= i + r; ++ii) {
        if (ii < 0 || jj < 0 || ii >= resolution || jj >= resolution) continue;
        int cc = grid_to_cell[static_cast<std::size_t>(jj) * resolution + ii];
        if (cc < 0) continue;
        double d = std::hypot(centers[cc][0] - p[0], centers[cc][1] - p[1]);
        if (d < bd) {
          bd = d;
          best = cc;
        }
      }
  if (best >= 0) return best;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    double d = std::hypot(centers[k][0] - p[0], centers[k][1] - p[1]);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

GridFiltration build_filtration(const PotentialField& field, const DomainGeometry& geom, int resolution,
                                const LandscapeAtlas* atlas) {
  const int dim = geom.dim();
  if (dim == 1 && resolution < 64) raise(ErrorKind::InvalidArgument, "1D resolution must be at least 64");
  if (dim == 2 && resolution < 128) raise(ErrorKind::InvalidArgument, "2D resolution must be at least 128 per axis");
  GridFiltration g;
  g.dim = dim;
  g.resolution = resolution;
  g.geom = geom;
  auto box = geom.bounding_box();
  g.x0 = box[0];
  g.hx = (box[1] - box[0]) / resolution;
  if (dim == 2) {
    g.y0 = box[2];
    g.hy = (box[3] - box[2]) / resolution;
  }
  const int ny = dim == 2 ? resolution : 1;
  g.grid_to_cell.assign(static_cast<std::size_t>(resolution) * ny, -1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < resolution; ++i) {
      Point c{g.x0 + (i + 0.5) * g.hx, dim == 2 ? g.y0 + (j + 0.5) * g.hy : 0.0};
      if (dim == 2 && !geom.contains(c)) continue;
      g.grid_to_cell[static_cast<std::size_t>(j) * resolution + i] = static_cast<int>(g.centers.size());
      g.centers.push_back(c);
      g.cell_i.push_back(i);
      g.cell_j.push_back(j);
    }
  g.values.resize(g.centers.size());
  for (std::size_t k = 0; k < g.centers.size(); ++k) {
    g.values[k] = field.value(g.centers[k]);
    if (!std::isfinite(g.values[k])) raise(ErrorKind::ScalingFailure, "non-finite potential value on the grid");
  }
  g.boundary_adjacent.assign(g.centers.size(), 0);
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  for (std::size_t k = 0; k < g.centers.size(); ++k) {
    int nb[4];
    int n = g.neighbors(static_cast<int>(k), nb);
    if (n < 2 * dim) g.boundary_adjacent[k] = 1;
    for (int t = 0; t < n; ++t) g.value_gap = std::max(g.value_gap, std::abs(g.values[k] - g.values[nb[t]]));
    vmin = std::min(vmin, g.values[k]);
    vmax = std::max(vmax, g.values[k]);
  }
  double scale = std::max({1.0, std::abs(vmin), std::abs(vmax)});
  g.tie_tol = 1e-9 * scale;
  if (atlas) {
    std::vector<double> cv;
    std::vector<int> owner;
    for (const auto& c : atlas->interior_criticals) {
      cv.push_back(c.value);
      int cell = g.cell_at(c.location);
      if (std::find(owner.begin(), owner.end(), cell) != owner.end())
        raise(ErrorKind::ResolutionTooCoarse, "two critical points share a grid cell at resolution " +
                                                  std::to_string(resolution));
      owner.push_back(cell);
    }
    for (const auto& b : atlas->boundary_trace) cv.push_back(b.value);
    std::sort(cv.begin(), cv.end());
    for (double v : cv)
      if (g.critical_values.empty() || v - g.critical_values.back() > g.tie_tol) g.critical_values.push_back(v);
  }
  return g;
}

const JEntry* JMap::find_minimum(int minimum) const {
  for (const auto& e : entries)
    if (e.minimum == minimum) return &e;
  return nullptr;
}

Topology::Topology(FieldPtr field, DomainGeometry geom, LandscapeAtlas atlas, const TopologyOptions& opts)
    : field_(std::move(field)), geom_(std::move(geom)), atlas_(std::move(atlas)), opts_(opts) {
  int res = opts.resolution > 0 ? opts.resolution : (geom_.dim() == 1 ? 4096 : 256);
  filt_ = build_filtration(*field_, geom_, res, &atlas_);
  const auto& cv = filt_.critical_values;
  const int n = static_cast<int>(cv.size());
  if (n == 0) raise(ErrorKind::NoCriticalPoints, "no critical values for the filtration");
  // level q < n sits halfway below cv[q]; level n sits above the top value
  levels_.resize(n + 1);
  levels_[0] = cv[0] - 0.5 * std::max(cv[0] - *std::min_element(filt_.values.begin(), filt_.values.end()),
                                      1e-3 * (1.0 + std::abs(cv[0])));
  for (int k = 1; k < n; ++k) levels_[k] = 0.5 * (cv[k - 1] + cv[k]);
  double top_gap = n > 1 ? 0.5 * (cv[n - 1] - cv[n - 2]) : 1.0;
  levels_[n] = cv[n - 1] + std::max(top_gap, 1e-3 * (1.0 + std::abs(cv[n - 1])));
  below_.resize(n);
  above_.resize(n);
  for (int k = 0; k < n; ++k) {
    below_[k] = k;
    above_[k] = k + 1;
  }
  // single sweep in increasing value
  const std::size_t nc = filt_.size();
  std::vector<int> order(nc);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (filt_.values[a] != filt_.values[b]) return filt_.values[a] < filt_.values[b];
    return a < b;
  });
  UnionFind uf(nc);
  std::vector<char> present(nc, 0);
  std::size_t p = 0;
  labels_.assign(n + 1, {});
  base_.assign(n + 1, 0);
  for (int q = 0; q <= n; ++q) {
    while (p < nc && filt_.values[order[p]] < levels_[q]) {
      int c = order[p++];
      present[c] = 1;
      int nb[4];
      int m = filt_.neighbors(c, nb);
      for (int t = 0; t < m; ++t)
        if (present[nb[t]]) uf.unite(c, nb[t]);
    }
    std::vector<int>& lab = labels_[q];
    lab.assign(nc, -1);
    std::vector<int> root_label(nc, -1);
    int next = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      if (!present[c]) continue;
      int r = uf.find(static_cast<int>(c));
      if (root_label[r] < 0) root_label[r] = next++;
      lab[c] = root_label[r];
    }
    base_[q] = static_cast<int>(components_.size());
    std::vector<SublevelComponent> comps(next);
    for (int l = 0; l < next; ++l) {
      comps[l].id = base_[q] + l;
      comps[l].level = q < n ? cv[q] : levels_[q];
      comps[l].query = q;
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (lab[c] < 0) continue;
      comps[lab[c]].cells.push_back(static_cast<int>(c));
      if (filt_.boundary_adjacent[c]) comps[lab[c]].touches_boundary = true;
    }
    for (auto& comp : comps) components_.push_back(std::move(comp));
  }
  // minima membership
  for (int m : atlas_.minima()) {
    int cell = filt_.cell_at(atlas_.interior_criticals[m].location);
    for (int q = 0; q <= n; ++q) {
      int l = labels_[q][cell];
      if (l >= 0) components_[base_[q] + l].contained_minima.push_back(m);
    }
  }
  for (auto& comp : components_) {
    int best = -1;
    for (int m : comp.contained_minima) {
      const auto& c = atlas_.interior_criticals[m];
      if (best < 0) {
        best = m;
        continue;
      }
      const auto& b = atlas_.interior_criticals[best];
      if (c.value < b.value - filt_.tie_tol ||
          (same_value(c.value, b.value) && lex_less(c.location, b.location)))
        best = m;
    }
    comp.representative = best;
  }
  heights_.resize(atlas_.interior_criticals.size());
  for (int m : atlas_.minima()) heights_[m] = compute_exit_height(m);
}

bool Topology::same_value(double a, double b) const { return std::abs(a - b) <= filt_.tie_tol; }

int Topology::index_of_value(double v) const {
  const auto& cv = filt_.critical_values;
  for (std::size_t k = 0; k < cv.size(); ++k)
    if (same_value(cv[k], v)) return static_cast<int>(k);
  raise(ErrorKind::InvalidArgument, "value " + fmt(v) + " is not a critical value");
}

int Topology::query_below(double v) const { return below_[index_of_value(v)]; }
int Topology::query_above(double v) const { return above_[index_of_value(v)]; }

int Topology::attach(const Point& p, int q) const {
  int c = filt_.cell_at(p);
  const auto& lab = labels_[q];
  for (std::size_t it = 0; it <= filt_.size(); ++it) {
    if (lab[c] >= 0) return lab[c];
    int nb[4];
    int m = filt_.neighbors(c, nb);
    int best = -1;
    double bv = filt_.values[c];
    for (int t = 0; t < m; ++t)
      if (filt_.values[nb[t]] < bv) {
        bv = filt_.values[nb[t]];
        best = nb[t];
      }
    if (best < 0) return -1;
    c = best;
  }
  return -1;
}

std::pair<int, int> Topology::saddle_branches(const CriticalPoint& z, int q) const {
  const double s = 1.5 * filt_.cell_diagonal();
  Point v = filt_.dim == 1 ? Point{1.0, 0.0} : z.neg_eigenvector;
  Point a{z.location[0] + s * v[0], z.location[1] + s * v[1]};
  Point b{z.location[0] - s * v[0], z.location[1] - s * v[1]};
  return {attach(a, q), attach(b, q)};
}

int Topology::boundary_inward(const BoundarySaddle& b, int q) const {
  const double s = 1.5 * filt_.cell_diagonal();
  Point n = geom_.outward_normal(b.location);
  return attach({b.location[0] - s * n[0], b.location[1] - s * n[1]}, q);
}

ExitHeight Topology::compute_exit_height(int minimum) const {
  const auto& x = atlas_.interior_criticals[minimum];
  const auto& cv = filt_.critical_values;
  const int cell = filt_.cell_at(x.location);
  const double s = 1.5 * filt_.cell_diagonal();
  for (std::size_t k = 0; k < cv.size(); ++k) {
    if (cv[k] <= x.value + filt_.tie_tol) continue;
    int q = above_[k];
    int lab = labels_[q][cell];
    if (lab < 0) continue;
    bool touched = false;
    for (const auto& b : atlas_.boundary_trace) {
      if (!b.is_minimum || !(b.value < levels_[q])) continue;
      Point seed = b.location;
      if (b.normal_derivative > 0.0) {
        Point n = geom_.outward_normal(b.location);
        seed = {b.location[0] - s * n[0], b.location[1] - s * n[1]};
      }
      if (attach(seed, q) == lab) {
        touched = true;
        break;
      }
    }
    if (!touched) continue;
    int qb = below_[k];
    int lb = labels_[qb][cell];
    if (lb < 0)
      raise(ErrorKind::ResolutionTooCoarse, "minimum cell is not below the exit level; increase resolution");
    return {cv[k], component_id(qb, lb)};
  }
  raise(ErrorKind::ResolutionTooCoarse, "no level connects the minimum to the boundary");
}

ExitHeight Topology::exit_height(int minimum) const {
  if (minimum < 0 || minimum >= static_cast<int>(atlas_.interior_criticals.size()) ||
      atlas_.interior_criticals[minimum].index != 0)
    raise(ErrorKind::InvalidArgument, "exit height requires a local minimum");
  return heights_[minimum];
}

double Topology::depth_of(int component) const {
  const auto& c = components_.at(component);
  if (c.representative < 0) return 0.0;
  return c.level - atlas_.interior_criticals[c.representative].value;
}

int Topology::argmin_of(int component) const { return components_.at(component).representative; }

std::vector<int> Topology::first_level_components() const {
  std::vector<int> ids;
  for (int m : atlas_.minima()) {
    int c = heights_[m].component;
    if (std::find(ids.begin(), ids.end(), c) == ids.end()) ids.push_back(c);
  }
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    double da = depth_of(a), db = depth_of(b);
    if (std::abs(da - db) > filt_.tie_tol) return da > db;
    const auto& xa = atlas_.interior_criticals[argmin_of(a)];
    const auto& xb = atlas_.interior_criticals[argmin_of(b)];
    if (!same_value(xa.value, xb.value)) return xa.value < xb.value;
    return lex_less(xa.location, xb.location);
  });
  return ids;
}

std::vector<SeparatingSaddle> Topology::detect_separating_saddles() const {
  std::vector<SeparatingSaddle> out;
  auto first = first_level_components();
  for (std::size_t i = 0; i < atlas_.interior_criticals.size(); ++i) {
    const auto& z = atlas_.interior_criticals[i];
    if (z.index != 1) continue;
    bool in_closure = false;
    for (int cid : first) {
      const auto& C = components_[cid];
      if (z.value > C.level + filt_.tie_tol) continue;
      auto br = saddle_branches(z, C.query);
      int lab = cid - base_[C.query];
      if (br.first == lab || br.second == lab) {
        in_closure = true;
        break;
      }
    }
    if (!in_closure) continue;
    int q = query_below(z.value);
    auto br = saddle_branches(z, q);
    if (br.first < 0 || br.second < 0)
      raise(ErrorKind::AmbiguousBranch, "descent branch of the saddle at " + fmt_point(z.location, filt_.dim) +
                                            " does not reach the sublevel set; increase resolution");
    if (br.first == br.second) continue;
    SeparatingSaddle s;
    s.kind = SeparatingSaddle::Kind::Interior;
    s.ref = static_cast<int>(i);
    s.location = z.location;
    s.value = z.value;
    int a = component_id(q, br.first), b = component_id(q, br.second);
    s.merged_component_ids = std::make_pair(std::min(a, b), std::max(a, b));
    out.push_back(s);
  }
  for (std::size_t i = 0; i < atlas_.boundary_saddles.size(); ++i) {
    const auto& b = atlas_.boundary_saddles[i];
    for (int cid : first) {
      const auto& C = components_[cid];
      if (!same_value(b.value, C.level)) continue;
      if (boundary_inward(b, C.query) != cid - base_[C.query]) continue;
      SeparatingSaddle s;
      s.kind = SeparatingSaddle::Kind::Boundary;
      s.ref = static_cast<int>(i);
      s.location = b.location;
      s.value = b.value;
      out.push_back(s);
      break;
    }
  }
  std::sort(out.begin(), out.end(), [](const SeparatingSaddle& a, const SeparatingSaddle& b) {
    if (a.value != b.value) return a.value < b.value;
    return lex_less(a.location, b.location);
  });
  return out;
}

JMap Topology::construct_jmaps(const std::vector<SeparatingSaddle>& saddles) const {
  JMap jm;
  auto first = first_level_components();
  std::set<int> labeled;
  // saddle on the boundary of component cid
  auto on_boundary_of = [&](const SeparatingSaddle& s, int cid) {
    const auto& C = components_[cid];
    int lab = cid - base_[C.query];
    if (s.kind == SeparatingSaddle::Kind::Boundary) return boundary_inward(atlas_.boundary_saddles[s.ref], C.query) == lab;
    auto br = saddle_branches(atlas_.interior_criticals[s.ref], C.query);
    return br.first == lab || br.second == lab;
  };
  int l = 0;
  double sigma_prev = -std::numeric_limits<double>::infinity();
  for (int cid : first) {
    const auto& C = components_[cid];
    JEntry e;
    e.minimum = argmin_of(cid);
    e.k = 1;
    e.l = ++l;
    e.component = cid;
    e.saddle_value = C.level;
    e.depth = depth_of(cid);
    for (std::size_t si = 0; si < saddles.size(); ++si)
      if (same_value(saddles[si].value, C.level) && on_boundary_of(saddles[si], cid)) e.j.push_back(static_cast<int>(si));
    if (e.j.empty())
      raise(ErrorKind::ResolutionTooCoarse, "first-level component without a separating saddle on its boundary");
    labeled.insert(e.minimum);
    jm.entries.push_back(e);
    sigma_prev = std::max(sigma_prev, C.level);
  }
  // interior separating saddles strictly inside the first-level components
  std::vector<int> inner;
  for (std::size_t si = 0; si < saddles.size(); ++si) {
    const auto& s = saddles[si];
    if (s.kind != SeparatingSaddle::Kind::Interior) continue;
    const auto& z = atlas_.interior_criticals[s.ref];
    bool inside = false;
    for (int cid : first) {
      const auto& C = components_[cid];
      if (!(s.value < C.level - filt_.tie_tol)) continue;
      auto br = saddle_branches(z, C.query);
      int lab = cid - base_[C.query];
      if (br.first == lab || br.second == lab) inside = true;
    }
    if (inside) inner.push_back(static_cast<int>(si));
  }
  const auto& minima = atlas_.minima();
  int k = 1;
  for (;;) {
    double sigma = -std::numeric_limits<double>::infinity();
    for (int si : inner)
      if (saddles[si].value < sigma_prev - filt_.tie_tol) sigma = std::max(sigma, saddles[si].value);
    if (!std::isfinite(sigma)) break;
    ++k;
    int q = query_below(sigma);
    std::vector<int> new_labels;
    for (int m : minima) {
      int cell = filt_.cell_at(atlas_.interior_criticals[m].location);
      int lab = labels_[q][cell];
      if (lab < 0) continue;
      bool in_e1 = false;
      for (int cid : first) {
        const auto& C = components_[cid];
        if (labels_[C.query][cell] == cid - base_[C.query]) in_e1 = true;
      }
      if (!in_e1) continue;
      if (std::find(new_labels.begin(), new_labels.end(), lab) == new_labels.end()) new_labels.push_back(lab);
    }
    std::vector<int> fresh;
    for (int lab : new_labels) {
      int cid = component_id(q, lab);
      bool has_labeled = false;
      for (int m : components_[cid].contained_minima)
        if (labeled.count(m)) has_labeled = true;
      if (!has_labeled) fresh.push_back(cid);
    }
    std::sort(fresh.begin(), fresh.end(), [&](int a, int b) {
      double da = depth_of(a), db = depth_of(b);
      if (std::abs(da - db) > filt_.tie_tol) return da > db;
      const auto& xa = atlas_.interior_criticals[argmin_of(a)];
      const auto& xb = atlas_.interior_criticals[argmin_of(b)];
      if (!same_value(xa.value, xb.value)) return xa.value < xb.value;
      return lex_less(xa.location, xb.location);
    });
    int ll = 0;
    for (int cid : fresh) {
      JEntry e;
      e.minimum = argmin_of(cid);
      e.k = k;
      e.l = ++ll;
      e.component = cid;
      e.saddle_value = sigma;
      e.depth = depth_of(cid);
      for (int si : inner)
        if (same_value(saddles[si].value, sigma) && on_boundary_of(saddles[si], cid)) e.j.push_back(si);
      labeled.insert(e.minimum);
      jm.entries.push_back(e);
    }
    sigma_prev = sigma;
  }
  for (int m : minima)
    if (!labeled.count(m))
      raise(ErrorKind::UnlabeledMinimum, "local minimum at " + fmt_point(atlas_.interior_criticals[m].location, filt_.dim) +
                                             " left unlabeled by the recursion");
  return jm;
}

AssumptionReport Topology::check_assumptions(const JMap& jmap, const std::vector<SeparatingSaddle>& saddles) const {
  AssumptionReport r;
  const int dim = filt_.dim;
  r.a0.value = atlas_.a0_report.passed;
  for (const auto& c : atlas_.a0_report.clauses)
    if (!c.passed) r.a0.detail += (r.a0.detail.empty() ? "" : "; ") + c.name + ": " + c.detail;
  if (r.a0.detail.empty()) r.a0.detail = "f and its boundary trace are Morse, grad f does not vanish on the boundary";
  r.boundary_min = atlas_.boundary_min;
  double gmin = atlas_.boundary_min;
  for (int m : atlas_.minima()) gmin = std::min(gmin, atlas_.interior_criticals[m].value);
  r.global_min = gmin;

  std::vector<const JEntry*> first;
  for (const auto& e : jmap.entries)
    if (e.k == 1) first.push_back(&e);
  if (first.empty()) raise(ErrorKind::UnlabeledMinimum, "no first-level component");
  double d1 = first[0]->depth;
  double d2 = first.size() > 1 ? first[1]->depth : -std::numeric_limits<double>::infinity();
  r.a1_margin = first.size() > 1 ? d1 - d2 : std::numeric_limits<double>::infinity();
  bool a1 = r.a1_margin > opts_.a1_margin;
  r.a1.value = a1;
  const auto& x11 = atlas_.interior_criticals[first[0]->minimum];
  if (a1) {
    r.a1.detail = "unique deepest first-level well, depth " + fmt(d1) +
                  (first.size() > 1 ? ", margin " + fmt(r.a1_margin) : ", no competing well");
    r.a1.witnesses = {x11.location};
  } else {
    r.a1.detail = "TieAtA1: wells at " + fmt_point(x11.location, dim) + " and " +
                  fmt_point(atlas_.interior_criticals[first[1]->minimum].location, dim) + " have depths " + fmt(d1) +
                  " and " + fmt(d2);
    r.a1.witnesses = {x11.location, atlas_.interior_criticals[first[1]->minimum].location};
    for (Verdict* v : {&r.a2, &r.a3, &r.a4}) v->detail = "requires A1";
    r.cmax_min_is_global = false;
    return r;
  }
  r.cmax = first[0]->component;
  std::vector<int> interior_j;
  for (int si : first[0]->j) {
    const auto& s = saddles[si];
    if (s.kind == SeparatingSaddle::Kind::Boundary)
      r.boundary_contacts.push_back(s.ref);
    else
      interior_j.push_back(si);
  }
  r.a2.value = !r.boundary_contacts.empty();
  if (*r.a2.value) {
    r.a2.detail = std::to_string(r.boundary_contacts.size()) + " contact(s) between the deepest well and the boundary";
    for (int b : r.boundary_contacts) r.a2.witnesses.push_back(atlas_.boundary_saddles[b].location);
  } else {
    r.a2.detail = "the deepest well does not reach the boundary; its rim is set by interior saddles";
    r.a2.witnesses.push_back(x11.location);
    for (int si : interior_j) r.a2.witnesses.push_back(saddles[si].location);
  }
  bool a3 = true;
  for (int b : r.boundary_contacts)
    if (!same_value(atlas_.boundary_saddles[b].value, atlas_.boundary_min)) {
      a3 = false;
      r.a3.witnesses.push_back(atlas_.boundary_saddles[b].location);
    }
  r.a3.value = a3;
  if (a3) {
    r.a3.detail = r.boundary_contacts.empty() ? "no contacts" : "every contact attains the boundary minimum " + fmt(atlas_.boundary_min);
  } else {
    r.a3.detail = "contact value above the boundary minimum " + fmt(atlas_.boundary_min);
    for (const auto& b : atlas_.boundary_trace)
      if (b.is_minimum && same_value(b.value, atlas_.boundary_min)) r.a3.witnesses.push_back(b.location);
  }
  r.a4.value = interior_j.empty();
  if (interior_j.empty()) {
    r.a4.detail = "every gate of the deepest well lies on the boundary";
  } else {
    r.a4.detail = std::to_string(interior_j.size()) + " interior separating saddle(s) on the rim of the deepest well";
    for (int si : interior_j) r.a4.witnesses.push_back(saddles[si].location);
  }
  r.cmax_min_is_global = same_value(x11.value, gmin) || x11.value <= gmin;
  return r;
}

std::vector<SeparatingSaddle> detect_separating_saddles(const Topology& topo) { return topo.detect_separating_saddles(); }

JMap construct_jmaps(const Topology& topo, const std::vector<SeparatingSaddle>& saddles) {
  return topo.construct_jmaps(saddles);
}

AssumptionReport check_assumptions(const Topology& topo, const JMap& jmap, const std::vector<SeparatingSaddle>& saddles) {
  return topo.check_assumptions(jmap, saddles);
}

ExitHeight exit_height(const Topology& topo, int minimum) { return topo.exit_height(minimum); }

WellDecomposition decompose(FieldPtr field, const DomainGeometry& geom, const LandscapeAtlas& atlas,
                            const TopologyOptions& opts) {
  if (atlas.minima().empty()) raise(ErrorKind::NoCriticalPoints, "no local minimum in the domain");
  WellDecomposition w;
  w.topology = std::make_shared<Topology>(std::move(field), geom, atlas, opts);
  w.saddles = w.topology->detect_separating_saddles();
  w.jmap = w.topology->construct_jmaps(w.saddles);
  w.report = w.topology->check_assumptions(w.jmap, w.saddles);
  return w;
}

}  // namespace kramers
