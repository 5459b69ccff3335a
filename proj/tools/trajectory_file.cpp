// Apache License, Version 2.0, refer to LICENSE.txt
#include "trajectory_file.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace puchain::cli {

TrajectoryFile read_trajectory_file(std::istream& in) {
  TrajectoryFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error&) {
      throw FormatError("trajectory line " + std::to_string(line_no) + " is not valid JSON");
    }
    if (!have_header) {
      if (!record.contains("header")) throw FormatError("trajectory file must start with a header line");
      file.header = record.at("header");
      have_header = true;
      continue;
    }
    if (!record.contains("t") || !record.contains("state")) {
      throw FormatError("trajectory line " + std::to_string(line_no) + " needs 't' and 'state'");
    }
    const auto r = record.value("replicate", std::size_t{0});
    if (r >= file.replicates.size()) file.replicates.resize(r + 1);
    auto& states = file.replicates[r];
    if (record.at("t").get<std::size_t>() != states.size()) {
      throw FormatError("trajectory line " + std::to_string(line_no) + " is out of order");
    }
    states.push_back(record.at("state").get<StateIndex>());
  }
  if (!have_header) throw FormatError("empty trajectory file");
  if (file.replicates.empty()) file.replicates.emplace_back();
  return file;
}

void write_trajectory_file(std::ostream& out, const TrajectoryFile& file, const StateSpace* dyad_space) {
  out << json{{"header", file.header}}.dump() << '\n';
  const bool tagged = file.replicates.size() > 1;
  for (std::size_t r = 0; r < file.replicates.size(); ++r) {
    const auto& states = file.replicates[r];
    for (std::size_t i = 0; i < states.size(); ++i) {
      json record = {{"t", i}, {"state", states[i]}};
      if (tagged) record["replicate"] = r;
      if (dyad_space != nullptr) record["dyads"] = to_json(dyad_space->decode(states[i]))["dyads"];
      out << record.dump() << '\n';
    }
  }
}

}  // namespace puchain::cli
