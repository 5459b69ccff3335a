// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <iosfwd>
#include <vector>

#include "puchain/json_io.hpp"

namespace puchain::cli {

/// JSONL trajectories: a header line {"header": {...}} followed by one
/// {"t": i, "state": s} record per line. Records carry "replicate" when the
/// file holds several replicates and "dyads" when expansion was requested.
struct TrajectoryFile {
  json header;
  std::vector<std::vector<StateIndex>> replicates;
};

TrajectoryFile read_trajectory_file(std::istream& in);
/// With `dyad_space` set, each record also lists the multigraph's dyads.
void write_trajectory_file(std::ostream& out, const TrajectoryFile& file, const StateSpace* dyad_space = nullptr);

}  // namespace puchain::cli
