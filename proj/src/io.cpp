#include "wavenav/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wavenav/errors.hpp"

namespace wavenav {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open for reading: " + path);
  return in;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

[[noreturn]] void bad_line(const std::string& path, std::size_t line_no,
                           const std::string& why) {
  throw DataError(path + ":" + std::to_string(line_no) + ": " + why);
}

// Calls fn(line, line_no) for every non-comment, non-empty line.
template <typename Fn>
void for_each_line(const std::string& path, Fn&& fn) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    fn(line, line_no);
  }
}

std::vector<double> parse_doubles(const std::string& line, const std::string& path,
                                  std::size_t line_no) {
  std::istringstream ss(line);
  std::vector<double> values;
  double v = 0.0;
  while (ss >> v) values.push_back(v);
  if (!ss.eof()) bad_line(path, line_no, "non-numeric field");
  return values;
}

}  // namespace

void write_sensor_log(const std::string& path, std::span<const SensorSample> samples) {
  std::ofstream out = open_out(path);
  out << "# wavenav sensor log v1: t tag v1 v2 v3 [beam_id range]\n";
  for (const SensorSample& s : samples) {
    out << fmt(s.timestamp) << ' ' << to_string(s.tag) << ' ' << fmt(s.value[0])
        << ' ' << fmt(s.value[1]) << ' ' << fmt(s.value[2]);
    if (s.tag == SensorTag::kRangeBeam) {
      out << ' ' << s.beam_id << ' ' << fmt(s.range);
    }
    out << '\n';
  }
}

std::vector<SensorSample> read_sensor_log(const std::string& path) {
  std::vector<SensorSample> samples;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    std::istringstream ss(line);
    SensorSample s;
    std::string tag;
    if (!(ss >> s.timestamp >> tag >> s.value[0] >> s.value[1] >> s.value[2])) {
      bad_line(path, line_no, "expected 't tag v1 v2 v3'");
    }
    if (!parse_sensor_tag(tag, &s.tag)) {
      bad_line(path, line_no, "unknown sensor tag '" + tag + "'");
    }
    if (s.tag == SensorTag::kRangeBeam && !(ss >> s.beam_id >> s.range)) {
      bad_line(path, line_no, "range_beam record missing 'beam_id range'");
    }
    samples.push_back(s);
  });
  return samples;
}

void write_truth_states(const std::string& path, std::span<const TruthState> states) {
  std::ofstream out = open_out(path);
  out << "# wavenav truth v1: t x y z phi theta psi u v w\n";
  for (const TruthState& s : states) {
    out << fmt(s.t) << ' ' << fmt(s.pose.x) << ' ' << fmt(s.pose.y) << ' '
        << fmt(s.pose.z) << ' ' << fmt(s.pose.roll) << ' ' << fmt(s.pose.pitch)
        << ' ' << fmt(s.pose.yaw) << ' ' << fmt(s.twist.u) << ' '
        << fmt(s.twist.v) << ' ' << fmt(s.twist.w) << '\n';
  }
}

std::vector<TruthState> read_truth_states(const std::string& path) {
  std::vector<TruthState> states;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    const std::vector<double> v = parse_doubles(line, path, line_no);
    if (v.size() != 10) bad_line(path, line_no, "expected 10 fields");
    TruthState s;
    s.t = v[0];
    s.pose = Pose{v[1], v[2], v[3], v[4], v[5], v[6]};
    s.twist = Twist{v[7], v[8], v[9], 0.0, 0.0, 0.0};
    states.push_back(s);
  });
  return states;
}

void write_trajectory(const std::string& path, std::span<const StateBelief> beliefs) {
  std::ofstream out = open_out(path);
  out << "# wavenav trajectory v1: t mean[18] cov_lower_triangle[171]\n";
  for (const StateBelief& b : beliefs) {
    out << fmt(b.timestamp);
    const StateVec mean = b.mean();
    for (int i = 0; i < kStateDim; ++i) out << ' ' << fmt(mean[i]);
    for (int i = 0; i < kStateDim; ++i) {
      for (int j = 0; j <= i; ++j) out << ' ' << fmt(b.cov(i, j));
    }
    out << '\n';
  }
}

std::vector<StateBelief> read_trajectory(const std::string& path) {
  constexpr std::size_t kFields = 1 + kStateDim + kStateDim * (kStateDim + 1) / 2;
  std::vector<StateBelief> beliefs;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    const std::vector<double> v = parse_doubles(line, path, line_no);
    if (v.size() != kFields) {
      bad_line(path, line_no,
               "expected " + std::to_string(kFields) + " fields, got " +
                   std::to_string(v.size()));
    }
    StateBelief b;
    b.timestamp = v[0];
    StateVec mean;
    for (int i = 0; i < kStateDim; ++i) mean[i] = v[1 + i];
    b.state = RobotState::unpack(mean);
    std::size_t pos = 1 + kStateDim;
    for (int i = 0; i < kStateDim; ++i) {
      for (int j = 0; j <= i; ++j) {
        b.cov(i, j) = v[pos];
        b.cov(j, i) = v[pos];
        ++pos;
      }
    }
    beliefs.push_back(b);
  });
  return beliefs;
}

namespace {

std::string grid_header(const VoxelGrid& map) {
  std::ostringstream out;
  out << "# wavenav grid v1 pitch=" << fmt(map.pitch) << " origin=" << fmt(map.origin.x())
      << ' ' << fmt(map.origin.y()) << ' ' << fmt(map.origin.z())
      << " alpha0=" << fmt(map.alpha0) << " beta0=" << fmt(map.beta0);
  return out.str();
}

void parse_grid_header(const std::string& line, const std::string& path, VoxelGrid* map) {
  std::istringstream ss(line);
  std::string token;
  bool saw_pitch = false;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "pitch") {
      map->pitch = std::stod(value);
      saw_pitch = true;
    } else if (key == "origin") {
      map->origin.x() = std::stod(value);
      ss >> map->origin.y() >> map->origin.z();
    } else if (key == "alpha0") {
      map->alpha0 = std::stod(value);
    } else if (key == "beta0") {
      map->beta0 = std::stod(value);
    }
  }
  if (!saw_pitch) throw DataError(path + ": grid header missing pitch");
}

}  // namespace

void write_grid(const std::string& path, const VoxelGrid& map) {
  std::ofstream out = open_out(path);
  out << grid_header(map) << '\n';
  std::vector<std::pair<CellIndex, CellStat>> ordered(map.cells.begin(), map.cells.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.i, a.first.j, a.first.k) <
           std::tie(b.first.i, b.first.j, b.first.k);
  });
  for (const auto& [idx, stat] : ordered) {
    out << idx.i << ' ' << idx.j << ' ' << idx.k << ' ' << fmt(stat.alpha) << ' '
        << fmt(stat.beta) << '\n';
  }
}

VoxelGrid read_grid(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# wavenav grid", 0) != 0) {
    throw DataError(path + ": missing grid header");
  }
  VoxelGrid map;
  parse_grid_header(line, path, &map);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    CellIndex idx;
    CellStat stat;
    if (!(ss >> idx.i >> idx.j >> idx.k >> stat.alpha >> stat.beta)) {
      bad_line(path, line_no, "expected 'i j k alpha beta'");
    }
    map.cells.emplace(idx, stat);
  }
  return map;
}

void write_cloud(const std::string& path, std::span<const CloudPoint> cloud,
                 const VoxelGrid& map) {
  std::ofstream out = open_out(path);
  out << grid_header(map) << '\n';
  for (const CloudPoint& p : cloud) {
    out << fmt6(p.center.x()) << ' ' << fmt6(p.center.y()) << ' '
        << fmt6(p.center.z()) << ' ' << fmt6(p.mean) << ' ' << fmt6(p.variance)
        << '\n';
  }
}

std::vector<CloudPoint> read_cloud(const std::string& path) {
  std::vector<CloudPoint> cloud;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    const std::vector<double> v = parse_doubles(line, path, line_no);
    if (v.size() != 5) bad_line(path, line_no, "expected 'x y z mean variance'");
    cloud.push_back(CloudPoint{Eigen::Vector3d(v[0], v[1], v[2]), v[3], v[4]});
  });
  return cloud;
}

void write_xyz_cloud(const std::string& path, std::span<const Eigen::Vector3d> points) {
  std::ofstream out = open_out(path);
  out << "# wavenav cloud v1: x y z\n";
  for (const Eigen::Vector3d& p : points) {
    out << fmt6(p.x()) << ' ' << fmt6(p.y()) << ' ' << fmt6(p.z()) << '\n';
  }
}

std::vector<Eigen::Vector3d> read_xyz_cloud(const std::string& path) {
  std::vector<Eigen::Vector3d> points;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    const std::vector<double> v = parse_doubles(line, path, line_no);
    if (v.size() < 3) bad_line(path, line_no, "expected 'x y z'");
    points.emplace_back(v[0], v[1], v[2]);
  });
  return points;
}

void write_report(const std::string& path, const EvalReport& report) {
  std::ofstream out = open_out(path);
  out << report_to_keyvalue(report);
}

}  // namespace wavenav
