#pragma once

#include <string>
#include <vector>

#include "ccabc/sim.hpp"

namespace ccabc {

// Writes the six metric charts (active nodes, alive nodes, average energy
// per round, total energy, coverage %, energy-utilization breakdown) as
// self-contained SVG files into out_dir, overlaying every series. Output
// bytes are a pure function of the input. Returns the file paths.
std::vector<std::string> render_plots(const std::vector<MetricsSeries>& series,
                                      const std::string& out_dir);

}  // namespace ccabc
