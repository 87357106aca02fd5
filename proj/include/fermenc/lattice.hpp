// Copyright 2026 The fermenc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fermenc {

enum class Boundary : std::uint8_t { open, periodic };
enum class Corner : std::uint8_t { top_left, top_right, bottom_left, bottom_right };
enum class EdgeClass : std::uint8_t { horizontal, vertical_up, vertical_down, diagonal_corner };
enum class Orientation : std::uint8_t { as_listed, reversed };

/// Sites are numbered row-major, row 0 at the top: id = row * cols + col.
using SiteId = std::uint32_t;

class LatticeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Site {
  int row = 0;
  int col = 0;
  bool active = true;
};

/// Lattice edge. Endpoints are listed left-to-right for horizontal edges, top-to-bottom
/// for vertical ones (following the wrap on a torus), and horizontal-neighbour then
/// vertical-neighbour for the diagonal that replaces a shaved corner.
struct Edge {
  SiteId a = 0;
  SiteId b = 0;
  Orientation orientation = Orientation::as_listed;
  EdgeClass cls = EdgeClass::horizontal;
  std::optional<std::size_t> odd_face;
  std::optional<std::size_t> even_face;

  SiteId tail() const { return orientation == Orientation::as_listed ? a : b; }
  SiteId head() const { return orientation == Orientation::as_listed ? b : a; }
  bool touches(SiteId s) const { return a == s || b == s; }
  SiteId other(SiteId s) const { return a == s ? b : a; }
};

/// Square face identified by its upper-left site. `cycle` lists the boundary sites
/// clockwise (as drawn, row 0 on top) starting from the upper-left corner; a face that lost
/// a shaved corner has a three-site cycle.
struct Face {
  int row = 0;
  int col = 0;
  bool odd = false;
  std::array<SiteId, 4> corners{};  // upper-left, upper-right, lower-right, lower-left
  std::vector<SiteId> cycle;
};

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }
inline const char* to_string(Corner c) {
  switch (c) {
    case Corner::top_left: return "top_left";
    case Corner::top_right: return "top_right";
    case Corner::bottom_left: return "bottom_left";
    case Corner::bottom_right: return "bottom_right";
  }
  return "?";
}
inline const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::horizontal: return "horizontal";
    case EdgeClass::vertical_up: return "vertical_up";
    case EdgeClass::vertical_down: return "vertical_down";
    case EdgeClass::diagonal_corner: return "diagonal_corner";
  }
  return "?";
}
inline Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw LatticeError("unknown boundary '" + s + "'");
}
inline Corner corner_from_string(const std::string& s) {
  for (Corner c : {Corner::top_left, Corner::top_right, Corner::bottom_left, Corner::bottom_right})
    if (s == to_string(c)) return c;
  throw LatticeError("unknown corner '" + s + "'");
}

/// Rectangular site grid with a checkerboard odd/even face labelling and edge orientations
/// that circulate around every even face.
///
/// Orientation convention (x = column, y = rows-1-row so y grows upwards): a horizontal
/// edge on height y points right iff y is odd; a vertical edge on column x points up iff
/// x + offset is odd. Face parity: the face whose lower-left site is (x, y) is odd iff
/// x + y + offset is even, so offset 0 puts an odd face in the lower-left corner. With
/// these rules adjacent even faces alternate between clockwise and anticlockwise.
class Lattice {
 public:
  static Lattice build(int rows, int cols, Boundary boundary, int face_parity_offset);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Boundary boundary() const { return boundary_; }
  int face_parity_offset() const { return offset_; }
  const std::set<Corner>& shaved_corners() const { return shaved_; }

  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Face>& faces() const { return faces_; }

  SiteId site_id(int row, int col) const { return static_cast<SiteId>(row * cols_ + col); }
  bool is_active(SiteId s) const { return s < sites_.size() && sites_[s].active; }

  /// Active sites in id order.
  std::vector<SiteId> active_sites() const {
    std::vector<SiteId> out;
    for (SiteId s = 0; s < sites_.size(); ++s)
      if (sites_[s].active) out.push_back(s);
    return out;
  }
  std::size_t num_active_sites() const { return active_sites().size(); }

  std::size_t num_odd_faces() const {
    return static_cast<std::size_t>(std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return f.odd; }));
  }

  std::optional<std::size_t> find_edge(SiteId u, SiteId v) const {
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if ((edges_[e].a == u && edges_[e].b == v) || (edges_[e].a == v && edges_[e].b == u)) return e;
    return std::nullopt;
  }
  bool adjacent(SiteId u, SiteId v) const { return find_edge(u, v).has_value(); }

  std::vector<std::size_t> incident_edges(SiteId s) const {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edges_[e].touches(s)) out.push_back(e);
    return out;
  }

  std::size_t degree(SiteId s) const { return incident_edges(s).size(); }

  SiteId corner_site(Corner c) const {
    switch (c) {
      case Corner::top_left: return site_id(0, 0);
      case Corner::top_right: return site_id(0, cols_ - 1);
      case Corner::bottom_left: return site_id(rows_ - 1, 0);
      case Corner::bottom_right: return site_id(rows_ - 1, cols_ - 1);
    }
    return 0;
  }

  /// Index of the only face touching an open-boundary corner.
  std::size_t corner_face(Corner c) const {
    int fr = (c == Corner::top_left || c == Corner::top_right) ? 0 : rows_ - 2;
    int fc = (c == Corner::top_left || c == Corner::bottom_left) ? 0 : cols_ - 2;
    return static_cast<std::size_t>(fr * (cols_ - 1) + fc);
  }

  /// Active open-boundary corners whose single adjacent face is odd and still square.
  bool corner_eligible(Corner c) const {
    if (boundary_ != Boundary::open) return false;
    if (!is_active(corner_site(c))) return false;
    const Face& f = faces_[corner_face(c)];
    if (!f.odd || f.cycle.size() != 4) return false;
    for (SiteId s : f.cycle)
      if (!is_active(s)) return false;
    return true;
  }

  std::vector<Corner> eligible_corners() const {
    std::vector<Corner> out;
    for (Corner c : {Corner::top_left, Corner::top_right, Corner::bottom_left, Corner::bottom_right})
      if (corner_eligible(c)) out.push_back(c);
    return out;
  }

  /// Removes an eligible corner site and joins its two former neighbours with a diagonal
  /// edge through the corner's odd face.
  Lattice shave_corner(Corner c) const;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["rows"] = rows_;
    j["cols"] = cols_;
    j["boundary"] = to_string(boundary_);
    j["face_parity_offset"] = offset_;
    j["shaved_corners"] = nlohmann::json::array();
    for (Corner c : shaved_) j["shaved_corners"].push_back(to_string(c));
    return j;
  }

  static Lattice from_json(const nlohmann::json& j) {
    Lattice l = build(j.at("rows").get<int>(), j.at("cols").get<int>(),
                      boundary_from_string(j.value("boundary", std::string("open"))),
                      j.value("face_parity_offset", 0));
    if (j.contains("shaved_corners"))
      for (const auto& c : j.at("shaved_corners")) l = l.shave_corner(corner_from_string(c.get<std::string>()));
    return l;
  }

 private:
  bool face_is_odd(int face_row, int face_col) const {
    int x = face_col;
    int y = rows_ - 2 - face_row;
    return ((x + y + offset_) % 2 + 2) % 2 == 0;
  }

  int rows_ = 0;
  int cols_ = 0;
  Boundary boundary_ = Boundary::open;
  int offset_ = 0;
  std::set<Corner> shaved_;
  std::vector<Site> sites_;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
};

inline Lattice Lattice::build(int rows, int cols, Boundary boundary, int face_parity_offset) {
  if (rows < 2 || cols < 2) throw LatticeError("lattice needs at least 2 rows and 2 columns");
  if (face_parity_offset != 0 && face_parity_offset != 1) throw LatticeError("face parity offset must be 0 or 1");
  if (boundary == Boundary::periodic) {
    if (rows % 2 != 0 || cols % 2 != 0) throw LatticeError("periodic lattice needs even rows and columns");
    if (rows < 4 || cols < 4) throw LatticeError("periodic lattice needs at least 4 rows and 4 columns");
  }
  Lattice l;
  l.rows_ = rows;
  l.cols_ = cols;
  l.boundary_ = boundary;
  l.offset_ = face_parity_offset;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) l.sites_.push_back({r, c, true});

  const bool periodic = boundary == Boundary::periodic;
  const int face_rows = periodic ? rows : rows - 1;
  const int face_cols = periodic ? cols : cols - 1;
  for (int r = 0; r < face_rows; ++r) {
    for (int c = 0; c < face_cols; ++c) {
      Face f;
      f.row = r;
      f.col = c;
      f.odd = l.face_is_odd(r, c);
      int r1 = (r + 1) % rows, c1 = (c + 1) % cols;
      f.corners = {l.site_id(r, c), l.site_id(r, c1), l.site_id(r1, c1), l.site_id(r1, c)};
      f.cycle.assign(f.corners.begin(), f.corners.end());
      l.faces_.push_back(std::move(f));
    }
  }
  auto face_index = [&](int r, int c) -> std::optional<std::size_t> {
    if (periodic) {
      r = (r + rows) % rows;
      c = (c + cols) % cols;
    } else if (r < 0 || c < 0 || r >= face_rows || c >= face_cols) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(r * face_cols + c);
  };
  auto attach_faces = [&](Edge& e, std::optional<std::size_t> f1, std::optional<std::size_t> f2) {
    for (auto f : {f1, f2}) {
      if (!f) continue;
      if (l.faces_[*f].odd) {
        e.odd_face = f;
      } else {
        e.even_face = f;
      }
    }
  };

  // Horizontal edges: row r, between columns c and c+1.
  for (int r = 0; r < rows; ++r) {
    int y = rows - 1 - r;
    for (int c = 0; c < (periodic ? cols : cols - 1); ++c) {
      Edge e;
      e.a = l.site_id(r, c);
      e.b = l.site_id(r, (c + 1) % cols);
      e.cls = EdgeClass::horizontal;
      e.orientation = (y % 2 == 1) ? Orientation::as_listed : Orientation::reversed;
      attach_faces(e, face_index(r - 1, c), face_index(r, c));
      l.edges_.push_back(e);
    }
  }
  // Vertical edges: column c, between rows r and r+1.
  for (int c = 0; c < cols; ++c) {
    bool up = (c + face_parity_offset) % 2 == 1;
    for (int r = 0; r < (periodic ? rows : rows - 1); ++r) {
      Edge e;
      e.a = l.site_id(r, c);
      e.b = l.site_id((r + 1) % rows, c);
      e.cls = up ? EdgeClass::vertical_up : EdgeClass::vertical_down;
      e.orientation = up ? Orientation::reversed : Orientation::as_listed;
      attach_faces(e, face_index(r, c - 1), face_index(r, c));
      l.edges_.push_back(e);
    }
  }
  return l;
}

inline Lattice Lattice::shave_corner(Corner corner) const {
  if (!corner_eligible(corner))
    throw LatticeError(std::string("corner ") + to_string(corner) + " is not adjacent to exactly one odd face");
  Lattice l = *this;
  SiteId k = corner_site(corner);
  std::size_t fi = corner_face(corner);
  const Site& ks = sites_[k];
  SiteId h = site_id(ks.row, ks.col == 0 ? 1 : cols_ - 2);
  SiteId v = site_id(ks.row == 0 ? 1 : rows_ - 2, ks.col);

  l.sites_[k].active = false;
  std::erase_if(l.edges_, [k](const Edge& e) { return e.touches(k); });
  Edge d;
  d.a = h;
  d.b = v;
  d.cls = EdgeClass::diagonal_corner;
  d.orientation = Orientation::as_listed;
  d.odd_face = fi;
  l.edges_.push_back(d);
  std::erase(l.faces_[fi].cycle, k);
  l.shaved_.insert(corner);
  return l;
}

/// Builds the site, edge and face tables; see Lattice for the labelling conventions.
inline Lattice build_lattice(int rows, int cols, Boundary boundary = Boundary::open, int face_parity_offset = 0) {
  return Lattice::build(rows, cols, boundary, face_parity_offset);
}

inline Lattice shave_corner(const Lattice& lattice, Corner corner) { return lattice.shave_corner(corner); }

/// Row-major snake over an open lattice: even rows left to right, odd rows right to left.
inline std::vector<SiteId> default_jw_order(const Lattice& lattice) {
  if (lattice.boundary() != Boundary::open)
    throw LatticeError("no canonical Jordan-Wigner path on a periodic lattice");
  if (!lattice.shaved_corners().empty()) throw LatticeError("no canonical Jordan-Wigner path on a shaved lattice");
  std::vector<SiteId> order;
  for (int r = 0; r < lattice.rows(); ++r) {
    for (int i = 0; i < lattice.cols(); ++i) {
      int c = (r % 2 == 0) ? i : lattice.cols() - 1 - i;
      order.push_back(lattice.site_id(r, c));
    }
  }
  return order;
}

}  // namespace fermenc
