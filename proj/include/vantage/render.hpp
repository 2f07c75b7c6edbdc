#pragma once

#include <string>

#include "vantage/agent.hpp"
#include "vantage/environments.hpp"
#include "vantage/reward.hpp"

namespace vantage {

struct RenderOptions {
    double cell = 28.0;                   // pixels per grid cell
    const UtilityMap* utility = nullptr;  // optional edge-utility heat overlay
};

// Deterministic SVG of the world: plateau cells shaded, terrain cells in
// height grayscale, chokepoint edges ticked, ovals outlined, source and
// target marked. Row 0 sits at the bottom. Identical inputs produce
// identical bytes.
std::string render_map_svg(const MapBundle& m, const RenderOptions& opts = {});

// The map plus one trial: the initial plan dashed, the executed trajectory
// solid, every blockage the agent discovered crossed out. A trial that never
// replanned draws both polylines over the same points.
std::string render_trial_svg(const MapBundle& m, const TrialResult& trial,
                             const RenderOptions& opts = {});

}  // namespace vantage
