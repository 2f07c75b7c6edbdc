#include "vantage/environments.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "vantage/reward.hpp"
#include "vantage/rng.hpp"
#include "vantage/sampler.hpp"

namespace vantage {

namespace {

constexpr double kEntryCost = 3.0;
constexpr double kBaseCost = 1.0;
constexpr double kTerrainCostFloor = 1e-3;
// Seed for the utility tree that ranks corridor edges when the built-in map
// picks its chokepoints. Changing it changes the shipped map.
constexpr std::uint64_t kChokepointUtilitySeed = 1905;

struct Rect {
    int r0, r1, c0, c1;  // inclusive

    int area() const { return (r1 - r0 + 1) * (c1 - c0 + 1); }
    bool contains(int r, int c) const { return r >= r0 && r <= r1 && c >= c0 && c <= c1; }
};

constexpr std::array<std::array<int, 2>, 4> kOrthoSteps = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// owner[cell] = plateau index, or -1 for ground.
using OwnerGrid = std::vector<int>;

struct EntryEdgeCells {
    int gr, gc;  // ground anchor
    int pr, pc;  // plateau cell
};

std::vector<EdgeSpec> build_plateau_edges(const GridSpec& grid, const OwnerGrid& owner,
                                          const EdgeKeySet& entry_keys) {
    std::vector<EdgeSpec> edges;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const NodeId u = grid.node_id(r, c);
            const std::array<std::array<int, 2>, 2> forward = {{{r + 1, c}, {r, c + 1}}};
            for (const auto& [nr, nc] : forward) {
                if (!grid.in_bounds(nr, nc)) continue;
                const NodeId v = grid.node_id(nr, nc);
                const int ou = owner[u];
                const int ov = owner[v];
                if (ou == ov) {
                    edges.push_back({u, v, kBaseCost, kBaseCost});  // ground-ground or within one plateau
                } else if (ou >= 0 && ov >= 0) {
                    continue;  // distinct plateaus never touch (generator invariant)
                } else if (entry_keys.count(make_edge_key(u, v)) > 0) {
                    edges.push_back({u, v, kEntryCost, kEntryCost});
                }
                // plateau boundary without an entry: no edge, the wall is unclimbable
            }
        }
    }
    return edges;
}

std::vector<GridCoord> plateau_coords(const GridSpec& grid, const OwnerGrid& owner) {
    std::vector<GridCoord> coords(grid.node_count());
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const NodeId v = grid.node_id(r, c);
            coords[v] = GridCoord{r, c, owner[v] >= 0 ? 1.0 : 0.0};
        }
    }
    return coords;
}

// Every node of a plateau sees the same set: all edges inside the plateau,
// its entry edges, and every edge touching the ground ring around it.
VisibilityMap build_plateau_visibility(const GridSpec& grid, const OwnerGrid& owner,
                                       const Graph& g, int num_plateaus) {
    std::vector<std::vector<bool>> ring(num_plateaus,
                                        std::vector<bool>(grid.node_count(), false));
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const int p = owner[grid.node_id(r, c)];
            if (p < 0) continue;
            for (const auto& [dr, dc] : kOrthoSteps) {
                const int nr = r + dr;
                const int nc = c + dc;
                if (!grid.in_bounds(nr, nc)) continue;
                const NodeId n = grid.node_id(nr, nc);
                if (owner[n] < 0) ring[p][n] = true;
            }
        }
    }

    std::vector<std::vector<EdgeKey>> per_plateau(num_plateaus);
    for (const EdgeKey e : g.edge_keys()) {
        const NodeId a = edge_key_a(e);
        const NodeId b = edge_key_b(e);
        for (int p = 0; p < num_plateaus; ++p) {
            if (owner[a] == p || owner[b] == p || ring[p][a] || ring[p][b]) {
                per_plateau[p].push_back(e);
            }
        }
    }

    std::vector<std::vector<EdgeKey>> extra(grid.node_count());
    for (NodeId v = 0; v < grid.node_count(); ++v) {
        if (owner[v] >= 0) extra[v] = per_plateau[owner[v]];
    }
    return VisibilityMap(g, std::move(extra));
}

// A corridor is a maximal chain of ground nodes that have exactly two ground
// neighbours; its edge line also includes the connections into the
// intersection node at each end, ordered from the end nearer the source.
struct CorridorLine {
    std::vector<EdgeKey> edges;  // ordered near -> far
    bool is_cycle = false;
};

std::vector<NodeId> ground_neighbors(const GridSpec& grid, const OwnerGrid& owner, NodeId v) {
    std::vector<NodeId> out;
    const int r = grid.row_of(v);
    const int c = grid.col_of(v);
    for (const auto& [dr, dc] : kOrthoSteps) {
        const int nr = r + dr;
        const int nc = c + dc;
        if (!grid.in_bounds(nr, nc)) continue;
        const NodeId n = grid.node_id(nr, nc);
        if (owner[n] < 0) out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> hop_distances_from(const Graph& g, NodeId src) {
    constexpr auto kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(g.node_count(), kInf);
    std::queue<NodeId> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (const Neighbor& n : g.neighbors(u)) {
            if (dist[n.to] == kInf) {
                dist[n.to] = dist[u] + 1;
                q.push(n.to);
            }
        }
    }
    return dist;
}

std::vector<CorridorLine> extract_corridors(const GridSpec& grid, const OwnerGrid& owner,
                                            const Graph& g, NodeId src) {
    const std::size_t n = grid.node_count();
    std::vector<bool> corridor(n, false);
    for (NodeId v = 0; v < n; ++v) {
        if (owner[v] < 0 && ground_neighbors(grid, owner, v).size() == 2) corridor[v] = true;
    }

    const std::vector<std::size_t> dist = hop_distances_from(g, src);
    std::vector<bool> assigned(n, false);
    std::vector<CorridorLine> lines;

    auto walk_chain = [&](NodeId start, NodeId enter_from) {
        // Collect the chain starting at `start`, arriving from `enter_from`
        // (either an intersection or a cycle predecessor).
        std::vector<NodeId> chain;
        NodeId prev = enter_from;
        NodeId cur = start;
        while (true) {
            chain.push_back(cur);
            assigned[cur] = true;
            NodeId next = cur;
            bool found = false;
            for (const NodeId nb : ground_neighbors(grid, owner, cur)) {
                if (nb != prev && corridor[nb] && !assigned[nb]) {
                    next = nb;
                    found = true;
                    break;
                }
            }
            if (!found) break;
            prev = cur;
            cur = next;
        }
        return chain;
    };

    auto terminal_of = [&](NodeId end, NodeId inward) -> std::optional<NodeId> {
        for (const NodeId nb : ground_neighbors(grid, owner, end)) {
            if (nb != inward && !corridor[nb]) return nb;
        }
        return std::nullopt;
    };

    // Open chains first: start walks from corridor nodes adjacent to an
    // intersection (or with a single corridor neighbour).
    for (NodeId v = 0; v < n; ++v) {
        if (!corridor[v] || assigned[v]) continue;
        const auto nbs = ground_neighbors(grid, owner, v);
        std::size_t corridor_nbs = 0;
        for (const NodeId nb : nbs) {
            if (corridor[nb]) ++corridor_nbs;
        }
        if (corridor_nbs == 2) continue;  // interior of a chain, reached later
        const std::vector<NodeId> chain = walk_chain(v, v);

        CorridorLine line;
        const NodeId front = chain.front();
        const NodeId back = chain.back();
        const NodeId front_inward = chain.size() > 1 ? chain[1] : front;
        const NodeId back_inward = chain.size() > 1 ? chain[chain.size() - 2] : back;
        const std::optional<NodeId> t0 = terminal_of(front, front_inward);
        std::optional<NodeId> t1 = terminal_of(back, back_inward);
        if (t0 && t1 && chain.size() == 1 && *t0 == *t1) t1.reset();  // spur off one intersection

        std::vector<NodeId> seq;
        if (t0) seq.push_back(*t0);
        seq.insert(seq.end(), chain.begin(), chain.end());
        if (t1) seq.push_back(*t1);
        if (seq.size() < 2) continue;

        const std::size_t dist_front = dist[seq.front()];
        const std::size_t dist_back = dist[seq.back()];
        const bool reverse = dist_front > dist_back ||
                             (dist_front == dist_back && seq.front() > seq.back());
        if (reverse) std::reverse(seq.begin(), seq.end());
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            line.edges.push_back(make_edge_key(seq[i], seq[i + 1]));
        }
        lines.push_back(std::move(line));
    }

    // Whatever is left forms closed loops with no intersection at either end.
    for (NodeId v = 0; v < n; ++v) {
        if (!corridor[v] || assigned[v]) continue;
        const std::vector<NodeId> chain = walk_chain(v, v);
        CorridorLine line;
        line.is_cycle = true;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            line.edges.push_back(make_edge_key(chain[i], chain[i + 1]));
        }
        line.edges.push_back(make_edge_key(chain.back(), chain.front()));
        lines.push_back(std::move(line));
    }
    return lines;
}

bool connected_without(const Graph& g, NodeId src, NodeId dst, const EdgeKeySet& removed) {
    return shortest_path(g, src, dst, removed).has_value();
}

MapBundle assemble_plateau_bundle(std::string kind, const GridSpec& grid, OwnerGrid owner,
                                  const EdgeKeySet& entry_keys, int num_plateaus,
                                  std::vector<EdgeKey> chokepoints, double block_prob,
                                  std::uint64_t seed, std::string params_desc) {
    MapBundle bundle;
    bundle.kind = std::move(kind);
    bundle.grid = grid;
    bundle.graph = Graph(grid.node_count(), build_plateau_edges(grid, owner, entry_keys),
                         plateau_coords(grid, owner));
    bundle.vis = build_plateau_visibility(grid, owner, bundle.graph, num_plateaus);
    bundle.src = grid.node_id(0, 0);
    bundle.dst = grid.node_id(grid.rows - 1, grid.cols - 1);
    std::sort(chokepoints.begin(), chokepoints.end());
    bundle.chokepoints = std::move(chokepoints);
    for (const EdgeKey e : bundle.chokepoints) bundle.blockage_units.push_back({e});
    bundle.plateau_nodes.resize(num_plateaus);
    for (NodeId v = 0; v < grid.node_count(); ++v) {
        if (owner[v] >= 0) bundle.plateau_nodes[owner[v]].push_back(v);
    }
    bundle.default_block_prob = block_prob;
    bundle.generator_seed = seed;
    bundle.generator_params = std::move(params_desc);
    return bundle;
}

}  // namespace

MapBundle build_plateau_map() {
    // Two plateau walls cut by one-node-wide vertical slots. Every route must
    // thread a passage through each wall (a slot or the map boundary), the
    // blockable edges sit at the far ends of those passages, and the plateaus
    // overlooking them are the only way to learn a passage's state before
    // walking its full depth.
    const GridSpec grid{14, 20};
    const std::array<Rect, 6> plateaus = {{
        {1, 5, 1, 5},      // lower wall west, slots at cols 6 and 13
        {1, 5, 7, 12},     // lower wall middle
        {1, 5, 14, 18},    // lower wall east
        {7, 12, 1, 3},     // upper wall west, slots at cols 4 and 10
        {7, 12, 5, 9},     // upper wall middle
        {7, 12, 11, 18},   // upper wall east
    }};
    // Two climb edges per plateau, one on each face the route travels
    // between, so a wall can be crossed over the top: climb (cost 3), walk
    // the interior, descend on the far side (cost 3). Each south-face exit
    // sits at the west end of its plateau while the north-face entry sits at
    // the east end, so crossing a wall over the top always loses ground
    // toward the south-east target and carries a clear premium over the open
    // slots; the climbs only pay once slots are discovered blocked, and then
    // the top of the plateau reveals the state of every passage bordering it
    // before the next commitment.
    const std::array<EntryEdgeCells, 12> entries = {{
        {0, 5, 1, 5},      // lower west: north face at its east end
        {6, 1, 5, 1},      // lower west: south face at its west end
        {0, 12, 1, 12},    // lower middle: north face at its east end
        {6, 7, 5, 7},      // lower middle: south face at its west end
        {0, 18, 1, 18},    // lower east: north face at its east end
        {6, 14, 5, 14},    // lower east: south face at its west end
        {6, 3, 7, 3},      // upper west: north face at its east end
        {13, 1, 12, 1},    // upper west: south face at its west end
        {6, 9, 7, 9},      // upper middle: north face at its east end
        {13, 5, 12, 5},    // upper middle: south face at its west end
        {6, 18, 7, 18},    // upper east: north face at its east end
        {13, 11, 12, 11},  // upper east: south face at its west end
    }};

    OwnerGrid owner(grid.node_count(), -1);
    for (std::size_t p = 0; p < plateaus.size(); ++p) {
        for (int r = plateaus[p].r0; r <= plateaus[p].r1; ++r) {
            for (int c = plateaus[p].c0; c <= plateaus[p].c1; ++c) {
                owner[grid.node_id(r, c)] = static_cast<int>(p);
            }
        }
    }
    EdgeKeySet entry_keys;
    for (const auto& e : entries) {
        entry_keys.insert(make_edge_key(grid.node_id(e.gr, e.gc), grid.node_id(e.pr, e.pc)));
    }

    const Graph g(grid.node_count(), build_plateau_edges(grid, owner, entry_keys),
                  plateau_coords(grid, owner));
    const NodeId src = grid.node_id(0, 0);
    const NodeId dst = grid.node_id(grid.rows - 1, grid.cols - 1);

    // Chokepoints go on the wall-crossing corridors only: the slots and
    // boundary detours that connect one open ground band to the next are
    // where the route can be cut, while lateral corridors within a single
    // band stay open and keep rerouting cheap. Within each crossing the
    // highest-utility edges are chosen (at most three per crossing) until
    // the budget of 18 is reached. Any edge whose joint removal with the
    // edges already chosen would disconnect source from target is skipped,
    // so every realization of the chokepoint set leaves the goal reachable.
    SamplerParams sp;
    sp.rng_seed = kChokepointUtilitySeed;
    const PathTree tree = sample_short_diverse_paths(g, src, dst, sp);
    const UtilityMap utility = compute_edge_utility(tree);

    std::vector<bool> open_band_row(static_cast<std::size_t>(grid.rows), true);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            if (owner[grid.node_id(r, c)] >= 0) {
                open_band_row[static_cast<std::size_t>(r)] = false;
                break;
            }
        }
    }
    const auto band_of = [&](NodeId v) -> int {
        const int r = grid.row_of(v);
        return open_band_row[static_cast<std::size_t>(r)] ? r : -1;
    };

    std::vector<CorridorLine> corridors = extract_corridors(grid, owner, g, src);
    struct ChokeCandidate {
        EdgeKey edge;
        std::size_t line;
        double value;
    };
    std::vector<ChokeCandidate> candidates;
    for (std::size_t i = 0; i < corridors.size(); ++i) {
        if (corridors[i].is_cycle) continue;
        std::map<NodeId, int> touch;
        for (const EdgeKey e : corridors[i].edges) {
            ++touch[edge_key_a(e)];
            ++touch[edge_key_b(e)];
        }
        std::vector<int> bands;
        for (const auto& [node, count] : touch) {
            if (count == 1) bands.push_back(band_of(node));
        }
        const bool crossing = bands.size() == 2 && bands[0] >= 0 && bands[1] >= 0 &&
                              bands[0] != bands[1];
        if (!crossing) continue;
        for (const EdgeKey e : corridors[i].edges) {
            candidates.push_back({e, i, utility.value(e)});
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const ChokeCandidate& a, const ChokeCandidate& b) {
                  if (a.value != b.value) return a.value > b.value;
                  return a.edge < b.edge;
              });

    constexpr std::size_t kChokepointBudget = 18;
    constexpr int kChokesPerCrossing = 3;
    std::vector<EdgeKey> chokepoints;
    EdgeKeySet chosen;
    std::vector<int> taken(corridors.size(), 0);
    for (const ChokeCandidate& cand : candidates) {
        if (chokepoints.size() >= kChokepointBudget) break;
        if (taken[cand.line] >= kChokesPerCrossing) continue;
        chosen.insert(cand.edge);
        if (connected_without(g, src, dst, chosen)) {
            chokepoints.push_back(cand.edge);
            ++taken[cand.line];
        } else {
            chosen.erase(cand.edge);
        }
    }

    std::string desc = "builtin 14x20, 6 plateaus, " + std::to_string(chokepoints.size()) +
                       " chokepoints";
    return assemble_plateau_bundle("plateau-fixed", grid, std::move(owner), entry_keys,
                                   static_cast<int>(plateaus.size()), std::move(chokepoints), 0.5,
                                   kChokepointUtilitySeed, std::move(desc));
}

ProceduralParams standard_preset(int grid, std::uint64_t seed) {
    ProceduralParams p;
    p.grid = grid;
    p.seed = seed;
    return p;
}

ProceduralParams dense_preset(int grid, std::uint64_t seed) {
    ProceduralParams p = standard_preset(grid, seed);
    p.chokepoints_lo = 21;
    p.chokepoints_hi = 24;
    return p;
}

ProceduralParams lowblock_preset(int grid, std::uint64_t seed) {
    ProceduralParams p = standard_preset(grid, seed);
    p.block_prob = 0.4;
    return p;
}

ProceduralParams six_preset(int grid, std::uint64_t seed) {
    if (grid < 16) {
        throw GeneratorError("'six' preset requires a grid of at least 16, got " +
                             std::to_string(grid));
    }
    ProceduralParams p = standard_preset(grid, seed);
    p.min_plateaus = 6;
    p.max_plateaus = 6;
    return p;
}

ProceduralParams preset_by_name(const std::string& name, int grid, std::uint64_t seed) {
    if (name == "standard") return standard_preset(grid, seed);
    if (name == "dense") return dense_preset(grid, seed);
    if (name == "lowblock") return lowblock_preset(grid, seed);
    if (name == "six") return six_preset(grid, seed);
    throw std::invalid_argument("unknown preset '" + name +
                                "' (expected standard, dense, lowblock or six)");
}

namespace {

struct RejectionTally {
    int seed_spread = 0;
    int coverage = 0;
    int pocket = 0;
    int entries = 0;
    int chokepoint_band = 0;
    int connectivity = 0;

    std::string describe() const {
        std::ostringstream os;
        os << "seed spread " << seed_spread << ", coverage " << coverage << ", layout pockets "
           << pocket << ", entry placement " << entries << ", chokepoint band "
           << chokepoint_band << ", chokepoint connectivity " << connectivity;
        return os.str();
    }
};

bool expansion_valid(const GridSpec& grid, const OwnerGrid& owner, int self,
                     const std::vector<std::array<int, 2>>& cells) {
    for (const auto& [r, c] : cells) {
        if (r < 1 || r > grid.rows - 2 || c < 1 || c > grid.cols - 2) return false;
        if (owner[grid.node_id(r, c)] != -1) return false;
        for (const auto& [dr, dc] : kOrthoSteps) {
            const int nr = r + dr;
            const int nc = c + dc;
            if (!grid.in_bounds(nr, nc)) continue;
            const int o = owner[grid.node_id(nr, nc)];
            if (o != -1 && o != self) return false;  // keep a one-node ground gap
        }
    }
    return true;
}

template <typename T>
void shuffle_with(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng.next_below(i)]);
    }
}

}  // namespace

MapBundle generate_procedural_plateau(const ProceduralParams& params) {
    if (params.grid < 8) throw GeneratorError("grid too small, need at least 8");
    if (params.min_plateaus < 1 || params.max_plateaus < params.min_plateaus) {
        throw GeneratorError("invalid plateau count range");
    }
    const GridSpec grid{params.grid, params.grid};
    const NodeId src = grid.node_id(0, 0);
    const NodeId dst = grid.node_id(grid.rows - 1, grid.cols - 1);
    RejectionTally tally;

    for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
        Rng rng(mix_seed(params.seed, static_cast<std::uint64_t>(attempt)));

        const int num_plateaus =
            params.min_plateaus +
            static_cast<int>(rng.next_below(
                static_cast<std::uint64_t>(params.max_plateaus - params.min_plateaus + 1)));

        // Seed one cell per plateau, spread out so each has room to grow.
        std::vector<Rect> rects;
        {
            bool ok = false;
            for (int placement = 0; placement < 120 && !ok; ++placement) {
                rects.clear();
                for (int k = 0; k < num_plateaus; ++k) {
                    const int r = 1 + static_cast<int>(rng.next_below(grid.rows - 2));
                    const int c = 1 + static_cast<int>(rng.next_below(grid.cols - 2));
                    rects.push_back({r, r, c, c});
                }
                ok = true;
                for (std::size_t a = 0; a < rects.size() && ok; ++a) {
                    for (std::size_t b = a + 1; b < rects.size(); ++b) {
                        const int dr = std::abs(rects[a].r0 - rects[b].r0);
                        const int dc = std::abs(rects[a].c0 - rects[b].c0);
                        if (std::max(dr, dc) < 4) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if (!ok) {
                ++tally.seed_spread;
                continue;
            }
        }

        OwnerGrid owner(grid.node_count(), -1);
        for (std::size_t p = 0; p < rects.size(); ++p) {
            owner[grid.node_id(rects[p].r0, rects[p].c0)] = static_cast<int>(p);
        }

        const double target =
            params.coverage_lo + rng.next_double() * (params.coverage_hi - params.coverage_lo);
        const auto coverage = [&] {
            int cells = 0;
            for (const Rect& rc : rects) cells += rc.area();
            return static_cast<double>(cells) / static_cast<double>(grid.node_count());
        };

        int stale = 0;
        while (coverage() < target && stale < 300) {
            const int k = static_cast<int>(rng.next_below(rects.size()));
            const int side = static_cast<int>(rng.next_below(4));
            Rect& rc = rects[k];
            std::vector<std::array<int, 2>> cells;
            Rect grown = rc;
            switch (side) {
                case 0:  // +row
                    grown.r1++;
                    for (int c = rc.c0; c <= rc.c1; ++c) cells.push_back({grown.r1, c});
                    break;
                case 1:  // -row
                    grown.r0--;
                    for (int c = rc.c0; c <= rc.c1; ++c) cells.push_back({grown.r0, c});
                    break;
                case 2:  // +col
                    grown.c1++;
                    for (int r = rc.r0; r <= rc.r1; ++r) cells.push_back({r, grown.c1});
                    break;
                default:  // -col
                    grown.c0--;
                    for (int r = rc.r0; r <= rc.r1; ++r) cells.push_back({r, grown.c0});
                    break;
            }
            if (!expansion_valid(grid, owner, k, cells)) {
                ++stale;
                continue;
            }
            for (const auto& [r, c] : cells) owner[grid.node_id(r, c)] = k;
            rc = grown;
            stale = 0;
        }

        const double cov = coverage();
        if (cov < params.coverage_lo || cov > params.coverage_hi) {
            ++tally.coverage;
            continue;
        }

        // Pick 2-3 entry edges per plateau with spread-out ground anchors.
        EdgeKeySet entry_keys;
        bool entries_ok = true;
        for (std::size_t p = 0; p < rects.size() && entries_ok; ++p) {
            std::vector<EntryEdgeCells> candidates;
            for (int r = rects[p].r0; r <= rects[p].r1; ++r) {
                for (int c = rects[p].c0; c <= rects[p].c1; ++c) {
                    for (const auto& [dr, dc] : kOrthoSteps) {
                        const int gr = r + dr;
                        const int gc = c + dc;
                        if (!grid.in_bounds(gr, gc)) continue;
                        if (owner[grid.node_id(gr, gc)] == -1) {
                            candidates.push_back({gr, gc, r, c});
                        }
                    }
                }
            }
            const int want =
                params.entries_lo +
                static_cast<int>(rng.next_below(
                    static_cast<std::uint64_t>(params.entries_hi - params.entries_lo + 1)));
            shuffle_with(candidates, rng);
            std::vector<EntryEdgeCells> picked;
            for (int min_spread = 2; min_spread >= 0 && static_cast<int>(picked.size()) < want;
                 --min_spread) {
                for (const auto& cand : candidates) {
                    if (static_cast<int>(picked.size()) >= want) break;
                    bool far_enough = true;
                    for (const auto& got : picked) {
                        if (got.gr == cand.gr && got.gc == cand.gc) {
                            far_enough = false;
                            break;
                        }
                        if (std::max(std::abs(got.gr - cand.gr), std::abs(got.gc - cand.gc)) <
                            min_spread) {
                            far_enough = false;
                            break;
                        }
                    }
                    if (far_enough) picked.push_back(cand);
                }
            }
            if (static_cast<int>(picked.size()) < want) {
                entries_ok = false;
                break;
            }
            for (const auto& e : picked) {
                entry_keys.insert(
                    make_edge_key(grid.node_id(e.gr, e.gc), grid.node_id(e.pr, e.pc)));
            }
        }
        if (!entries_ok) {
            ++tally.entries;
            continue;
        }

        const Graph g(grid.node_count(), build_plateau_edges(grid, owner, entry_keys),
                      plateau_coords(grid, owner));

        // Reject layouts with unreachable pockets.
        {
            const std::vector<std::size_t> dist = hop_distances_from(g, src);
            const bool all_reached =
                std::none_of(dist.begin(), dist.end(), [](std::size_t d) {
                    return d == std::numeric_limits<std::size_t>::max();
                });
            if (!all_reached) {
                ++tally.pocket;
                continue;
            }
        }

        // Draw chokepoint counts per corridor, then nudge them into the band.
        std::vector<CorridorLine> corridors = extract_corridors(grid, owner, g, src);
        std::vector<int> counts;
        std::vector<int> caps;
        for (const CorridorLine& line : corridors) {
            if (line.is_cycle) {
                counts.push_back(0);
                caps.push_back(0);
                continue;
            }
            const int len = static_cast<int>(line.edges.size());
            const int cap = std::min(3, len);
            const int draw = 2 + static_cast<int>(rng.next_below(2));
            counts.push_back(std::min(draw, cap));
            caps.push_back(cap);
        }
        const auto total = [&] {
            int t = 0;
            for (const int c : counts) t += c;
            return t;
        };
        bool band_ok = true;
        while (total() > params.chokepoints_hi) {
            std::vector<std::size_t> adjustable;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                if (caps[i] > 0 && counts[i] > std::min(2, caps[i])) adjustable.push_back(i);
            }
            if (adjustable.empty()) {
                band_ok = false;
                break;
            }
            counts[adjustable[rng.next_below(adjustable.size())]]--;
        }
        while (band_ok && total() < params.chokepoints_lo) {
            std::vector<std::size_t> adjustable;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                if (counts[i] < caps[i]) adjustable.push_back(i);
            }
            if (adjustable.empty()) {
                band_ok = false;
                break;
            }
            counts[adjustable[rng.next_below(adjustable.size())]]++;
        }
        if (!band_ok) {
            ++tally.chokepoint_band;
            continue;
        }

        std::vector<EdgeKey> chokepoints;
        for (std::size_t i = 0; i < corridors.size(); ++i) {
            const auto& edges = corridors[i].edges;
            for (int k = 0; k < counts[i]; ++k) {
                chokepoints.push_back(edges[edges.size() - 1 - k]);  // far end first
            }
        }

        EdgeKeySet all_blocked(chokepoints.begin(), chokepoints.end());
        if (!connected_without(g, src, dst, all_blocked)) {
            ++tally.connectivity;
            continue;
        }

        std::ostringstream desc;
        desc << "procedural grid=" << params.grid << " plateaus=" << num_plateaus
             << " coverage=" << cov << " chokepoints=" << chokepoints.size()
             << " attempt=" << attempt;
        return assemble_plateau_bundle("plateau-procedural", grid, std::move(owner), entry_keys,
                                       num_plateaus, std::move(chokepoints), params.block_prob,
                                       params.seed, desc.str());
    }

    throw GeneratorError("no valid layout after " + std::to_string(params.max_attempts) +
                         " attempts (grid=" + std::to_string(params.grid) +
                         ", rejections: " + tally.describe() + ")");
}

namespace {

[[noreturn]] void heightmap_error(int line, int column, const std::string& what) {
    std::ostringstream os;
    os << "heightmap parse error at line " << line << ", column " << column << ": " << what;
    throw std::runtime_error(os.str());
}

struct Token {
    std::string text;
    int line;
    int column;
};

std::vector<Token> tokenize_lines(const std::string& text) {
    std::vector<Token> tokens;
    int line = 1;
    int column = 1;
    std::string cur;
    int tok_line = 1;
    int tok_col = 1;
    const auto flush = [&] {
        if (!cur.empty()) {
            tokens.push_back({cur, tok_line, tok_col});
            cur.clear();
        }
    };
    for (const char ch : text) {
        if (ch == '\n') {
            flush();
            ++line;
            column = 1;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            flush();
        } else {
            if (cur.empty()) {
                tok_line = line;
                tok_col = column;
            }
            cur.push_back(ch);
        }
        ++column;
    }
    flush();
    return tokens;
}

int parse_positive_int(const Token& tok, const char* what) {
    char* end = nullptr;
    const long v = std::strtol(tok.text.c_str(), &end, 10);
    if (end == tok.text.c_str() || *end != '\0' || v <= 0 || v > 1 << 20) {
        heightmap_error(tok.line, tok.column,
                        std::string("expected positive integer ") + what + ", got '" + tok.text +
                            "'");
    }
    return static_cast<int>(v);
}

}  // namespace

Heightmap parse_heightmap(const std::string& text) {
    const std::vector<Token> tokens = tokenize_lines(text);
    if (tokens.size() < 2) {
        heightmap_error(1, 1, "missing 'rows cols' header");
    }
    const int rows = parse_positive_int(tokens[0], "row count");
    const int cols = parse_positive_int(tokens[1], "column count");
    const std::size_t expected = static_cast<std::size_t>(rows) * cols;

    if (tokens.size() - 2 < expected) {
        const Token& last = tokens.back();
        heightmap_error(last.line, last.column,
                        "expected " + std::to_string(expected) + " height values, got " +
                            std::to_string(tokens.size() - 2));
    }
    if (tokens.size() - 2 > expected) {
        const Token& excess = tokens[2 + expected];
        heightmap_error(excess.line, excess.column,
                        "expected " + std::to_string(expected) + " height values, got " +
                            std::to_string(tokens.size() - 2));
    }

    Heightmap hm;
    hm.grid = GridSpec{rows, cols};
    hm.heights.reserve(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        const Token& tok = tokens[2 + i];
        char* end = nullptr;
        const double v = std::strtod(tok.text.c_str(), &end);
        if (end == tok.text.c_str() || *end != '\0' || !std::isfinite(v)) {
            heightmap_error(tok.line, tok.column, "expected numeric height, got '" + tok.text + "'");
        }
        hm.heights.push_back(v);
    }

    const auto [mn_it, mx_it] = std::minmax_element(hm.heights.begin(), hm.heights.end());
    const double mn = *mn_it;
    const double mx = *mx_it;
    if (mx > mn) {
        for (double& h : hm.heights) h = 10.0 * (h - mn) / (mx - mn);
    } else {
        std::fill(hm.heights.begin(), hm.heights.end(), 0.0);
    }
    return hm;
}

Heightmap load_heightmap(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open heightmap file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_heightmap(buf.str());
    } catch (const std::runtime_error& err) {
        throw std::runtime_error(path + ": " + err.what());
    }
}

namespace {

double terrain_step_cost(double from, double to) {
    const double d = to - from;
    const double c = 1.0 + 2.0 * d * (d - 0.5);
    return std::max(c, kTerrainCostFloor);
}

}  // namespace

Graph build_terrain_graph(const Heightmap& hm) {
    const GridSpec& grid = hm.grid;
    std::vector<EdgeSpec> edges;
    std::vector<GridCoord> coords(grid.node_count());
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const NodeId u = grid.node_id(r, c);
            coords[u] = GridCoord{r, c, hm.at(r, c)};
            const std::array<std::array<int, 2>, 2> forward = {{{r + 1, c}, {r, c + 1}}};
            for (const auto& [nr, nc] : forward) {
                if (!grid.in_bounds(nr, nc)) continue;
                const NodeId v = grid.node_id(nr, nc);
                edges.push_back({u, v, terrain_step_cost(hm.at(r, c), hm.at(nr, nc)),
                                 terrain_step_cost(hm.at(nr, nc), hm.at(r, c))});
            }
        }
    }
    return Graph(grid.node_count(), std::move(edges), std::move(coords));
}

VisibilityMap line_of_sight_visibility(const Heightmap& hm, LosRule rule) {
    const GridSpec& grid = hm.grid;
    const Graph g = build_terrain_graph(hm);
    const std::vector<EdgeKey> all_edges = g.edge_keys();

    constexpr std::array<std::array<int, 2>, 8> kRays = {
        {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

    std::vector<std::vector<EdgeKey>> extra(grid.node_count());
    std::vector<bool> visible(grid.node_count());
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const NodeId v = grid.node_id(r, c);
            const double h0 = hm.at(r, c);
            std::fill(visible.begin(), visible.end(), false);
            visible[v] = true;
            for (const auto& [dr, dc] : kRays) {
                if (rule == LosRule::InterpolatedSightline) {
                    double max_slope = -std::numeric_limits<double>::infinity();
                    for (int k = 1;; ++k) {
                        const int nr = r + k * dr;
                        const int nc = c + k * dc;
                        if (!grid.in_bounds(nr, nc)) break;
                        const double slope = (hm.at(nr, nc) - h0) / k;
                        if (slope >= max_slope) visible[grid.node_id(nr, nc)] = true;
                        max_slope = std::max(max_slope, slope);
                    }
                } else {
                    for (int k = 1;; ++k) {
                        const int nr = r + k * dr;
                        const int nc = c + k * dc;
                        if (!grid.in_bounds(nr, nc)) break;
                        visible[grid.node_id(nr, nc)] = true;
                        if (hm.at(nr, nc) > h0) break;  // horizon: seen, but blocks beyond
                    }
                }
            }
            for (const EdgeKey e : all_edges) {
                if (visible[edge_key_a(e)] && visible[edge_key_b(e)]) extra[v].push_back(e);
            }
        }
    }
    return VisibilityMap(g, std::move(extra));
}

namespace {

bool inside_oval(const Oval& o, int r, int c) {
    const auto term = [](double d, double s) {
        if (s == 0.0) return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        const double q = d / s;
        return q * q;
    };
    return term(r - o.center_row, o.semi_row) + term(c - o.center_col, o.semi_col) <= 1.0;
}

}  // namespace

std::vector<std::vector<EdgeKey>> oval_edge_groups(const Graph& g, const GridSpec& grid,
                                                   const std::vector<Oval>& ovals) {
    std::vector<std::vector<EdgeKey>> groups;
    groups.reserve(ovals.size());
    for (const Oval& o : ovals) {
        std::vector<EdgeKey> group;
        for (const EdgeKey e : g.edge_keys()) {
            const NodeId a = edge_key_a(e);
            const NodeId b = edge_key_b(e);
            if (inside_oval(o, grid.row_of(a), grid.col_of(a)) &&
                inside_oval(o, grid.row_of(b), grid.col_of(b))) {
                group.push_back(e);
            }
        }
        groups.push_back(std::move(group));
    }
    return groups;
}

std::vector<EdgeKey> place_oval_obstacles(const Graph& g, const GridSpec& grid,
                                          const std::vector<Oval>& ovals) {
    std::vector<EdgeKey> all;
    for (const auto& group : oval_edge_groups(g, grid, ovals)) {
        all.insert(all.end(), group.begin(), group.end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

MapBundle build_terrain_map(const Heightmap& hm, const std::vector<Oval>& ovals, LosRule rule) {
    MapBundle bundle;
    bundle.kind = "terrain";
    bundle.grid = hm.grid;
    bundle.graph = build_terrain_graph(hm);
    bundle.vis = line_of_sight_visibility(hm, rule);
    bundle.src = hm.grid.node_id(0, hm.grid.cols - 1);
    bundle.dst = hm.grid.node_id(hm.grid.rows - 1, 0);
    bundle.blockage_units = oval_edge_groups(bundle.graph, hm.grid, ovals);
    bundle.ovals = ovals;
    bundle.default_block_prob = 0.5;
    bundle.generator_params = "terrain " + std::to_string(hm.grid.rows) + "x" +
                              std::to_string(hm.grid.cols) + ", " +
                              std::to_string(ovals.size()) + " ovals";
    return bundle;
}

}  // namespace vantage
