#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinaccess/geometry.hpp"
#include "pinaccess/random.hpp"
#include "pinaccess/techlib.hpp"
#include "pinaccess/testgen.hpp"

namespace pinaccess {

struct Strap {
  int layer = layer::M2;
  Direction direction = Direction::Horizontal;
  Coord offset = 0;  // lower edge, measured from the die's low side
  Coord width = 0;
  Coord step = 0;
  std::string net;  // VDD or VSS
  bool operator==(const Strap&) const = default;
};

struct StrapPlan {
  std::vector<Strap> straps;
  std::uint64_t seed = 0;
  bool operator==(const StrapPlan&) const = default;
};

// Draws one width and one step per routing layer the way the power-strap
// script does: width = floor(u*100)/500 um, step = floor(u'*100)/50 um,
// zero draws redrawn. Straps repeat every step across the die.
StrapPlan plan_straps(const Rect& die, const TechRules& rules, std::uint64_t seed,
                      bool enabled);
Rect strap_rect(const Strap& s, const Rect& die);

// Raw draws, exposed for range checks: DBU width and step of one layer.
struct StrapDraw {
  Coord width = 0;
  Coord step = 0;
};
StrapDraw draw_strap(SplitMix64& rng, Coord dbu_per_micron);

enum class ShapeSource { Route, Pin, Obstruction, Rail, Strap };
std::string_view to_string(ShapeSource s);

struct FixedShape {
  int layer = 0;
  Rect rect;
  std::string net;  // empty for obstructions
  ShapeSource source = ShapeSource::Obstruction;
  bool operator==(const FixedShape&) const = default;
};

// Blocked stretch of one routing track. `track_layer` names the metal whose
// track is indexed; `layer` is what is blocked on it: the metal itself, or
// V2 landings on that track.
struct TrackBlockage {
  int layer = layer::M2;
  int track_layer = layer::M2;
  int track = 0;
  Coord lo = 0;
  Coord hi = 0;
  bool operator==(const TrackBlockage&) const = default;
};

struct PinAccess {
  Terminal terminal;
  std::string net;
  std::vector<Rect> shapes;    // placed M1 shapes
  std::vector<Point> points;   // on-grid V1 landings, sorted
};

struct RoutingGrid {
  Rect die;
  std::vector<Coord> m2_tracks;  // y coordinates
  std::vector<Coord> m3_tracks;  // x coordinates
  std::vector<TrackBlockage> blocked;
  std::vector<PinAccess> pins;
  std::vector<FixedShape> fixed;  // rails, obstructions, straps
  Coord m2_clearance = 0;         // half-extent used for M2 blocking
  Coord m3_clearance = 0;

  bool node_blocked(int metal, int i, int j) const;
  bool v2_blocked(int i, int j) const;
  // Edge from (i, j) to the next node along the metal's direction.
  bool edge_blocked(int metal, int i, int j) const;
};

// Throws std::invalid_argument when the die is smaller than one pitch.
RoutingGrid build_grid(const TestcellSpec& spec, const Library& lib,
                       const TechRules& rules, const StrapPlan& straps);

enum class NetStatus { Routed, Open, Shorted };
std::string_view to_string(NetStatus s);

struct Segment {
  int layer = layer::M2;
  Coord track = 0;  // y on M2, x on M3
  Coord lo = 0;
  Coord hi = 0;
  auto operator<=>(const Segment&) const = default;
};

struct Via {
  int layer = layer::V1;
  Point at;
  auto operator<=>(const Via&) const = default;
};

struct RoutedNet {
  std::string name;
  NetStatus status = NetStatus::Routed;
  std::vector<Segment> segments;
  std::vector<Via> vias;
  std::vector<Terminal> terminals;
  std::vector<std::vector<Rect>> pin_shapes;  // per terminal, placed M1
  bool operator==(const RoutedNet&) const = default;
};

struct RouteDB {
  std::string id;
  Rect die;
  TechRules rules;
  std::vector<RoutedNet> nets;  // TestcellSpec net order
  std::vector<FixedShape> fixed;
  int iterations = 0;
  bool operator==(const RouteDB&) const = default;
};

struct RouteConfig {
  int max_iterations = 20;
  int worker_count = 1;  // parallelism is across testcells only
};

RouteDB route(const TestcellSpec& spec, const Library& lib, const RoutingGrid& grid,
              const TechRules& rules, const RouteConfig& config = {});

// Flat shape list with integer net ids. Signal nets take ids 0..n-1 in
// RouteDB order, named power nets follow; obstructions get -1.
struct Shape {
  int layer = 0;
  Rect rect;
  int net = -1;
  ShapeSource source = ShapeSource::Route;
  auto operator<=>(const Shape&) const = default;
};

struct Layout {
  std::vector<std::string> net_names;
  std::size_t signal_nets = 0;
  std::vector<Shape> shapes;
};

Layout flatten(const RouteDB& db);
// Wire and via geometry of one routed net (no pins).
std::vector<Shape> net_shapes(const RoutedNet& net, int net_id, const TechRules& rules);

struct NetVerdict {
  std::string net;
  bool open = false;
  std::vector<std::string> shorted_with;  // sorted
  bool operator==(const NetVerdict&) const = default;
};

// Rebuilds connectivity from geometry alone, ignoring router bookkeeping.
std::vector<NetVerdict> extract_connectivity(const RouteDB& db);

// Stable text listing of every segment and via, for debugging and
// byte-level determinism checks.
std::string dump_routes(const RouteDB& db);

}  // namespace pinaccess
