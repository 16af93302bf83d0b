#include "swarm/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace swarm {

using nlohmann::json;

void GroundTruthModel::set_occupied(const VoxelIndex& c) {
  cells_.insert(pack_index(c));
  Vec3 lo{c.i * cell_, c.j * cell_, c.k * cell_};
  bounds_.expand(lo);
  bounds_.expand(lo + Vec3{cell_, cell_, cell_});
}

void GroundTruthModel::fill_block(const Vec3& min, const Vec3& max) {
  VoxelIndex lo = point_to_cell(min + Vec3{cell_ / 2, cell_ / 2, cell_ / 2}, cell_);
  VoxelIndex hi = point_to_cell(max - Vec3{cell_ / 2, cell_ / 2, cell_ / 2}, cell_);
  for (int i = lo.i; i <= hi.i; ++i)
    for (int j = lo.j; j <= hi.j; ++j)
      for (int k = lo.k; k <= hi.k; ++k) set_occupied({i, j, k});
}

std::vector<VoxelIndex> GroundTruthModel::occupied_cells_sorted() const {
  std::vector<VoxelIndex> out;
  out.reserve(cells_.size());
  for (std::int64_t p : cells_) {
    auto dec = [](std::uint64_t bits) {
      std::uint32_t u = static_cast<std::uint32_t>(bits & 0x1FFFFF);
      if (u & 0x100000) u |= 0xFFE00000u;  // sign extend 21 bits
      return static_cast<int>(u);
    };
    std::uint64_t b = static_cast<std::uint64_t>(p);
    out.push_back({dec(b >> 42), dec(b >> 21), dec(b)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Vec3 GroundTruthModel::face_normal(int dir) {
  static const Vec3 normals[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                  {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  return normals[dir];
}

std::vector<GroundTruthModel::Face> GroundTruthModel::exposed_faces() const {
  std::vector<Face> out;
  for (const VoxelIndex& c : occupied_cells_sorted()) {
    for (int dir = 0; dir < 6; ++dir) {
      Vec3 n = face_normal(dir);
      VoxelIndex nb{c.i + static_cast<int>(n.x), c.j + static_cast<int>(n.y),
                    c.k + static_cast<int>(n.z)};
      if (!cell_occupied(nb)) out.push_back({c, dir});
    }
  }
  return out;
}

const BoundingBox& Scenario::box_by_id(int id) const {
  for (const auto& b : boxes)
    if (b.id == id) return b;
  throw ScenarioError("unknown box id " + std::to_string(id));
}

EnterExitPair principal_axis(const BoundingBox& box) {
  const Vec3& h = box.half_extents;
  // Tie-break prefers x, then y, then z.
  int axis = 0;
  double best = h.x;
  if (h.y > best) { axis = 1; best = h.y; }
  if (h.z > best) { axis = 2; best = h.z; }
  Vec3 offset{};
  if (axis == 0) offset.x = h.x;
  else if (axis == 1) offset.y = h.y;
  else offset.z = h.z;
  return {box.id, box.center - offset, box.center + offset};
}

std::vector<Defect> sample_defects(const GroundTruthModel& model, int count,
                                   std::uint32_t seed,
                                   const std::vector<BoundingBox>& boxes) {
  if (count < 0) throw ScenarioError("defect_count: must be non-negative");
  std::vector<Defect> out;
  if (count == 0) return out;
  auto faces = model.exposed_faces();
  if (faces.empty()) throw ScenarioError("defect_count: model has no exposed surface");

  // Raw engine draws only; std::* distributions are not portable bit-for-bit.
  std::mt19937 rng(seed);
  auto unit = [&rng]() { return (rng() >> 8) * (1.0 / 16777216.0); };
  double cell = model.cell_size();

  for (int id = 0; id < count; ++id) {
    const auto& f = faces[rng() % faces.size()];
    Vec3 n = GroundTruthModel::face_normal(f.dir);
    Vec3 lo{f.cell.i * cell, f.cell.j * cell, f.cell.k * cell};
    // Face plane offset along the normal; uniform position within the face.
    Vec3 u_axis = (std::abs(n.x) > 0.5) ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
    Vec3 v_axis = (std::abs(n.z) > 0.5) ? Vec3{0, 1, 0} : Vec3{0, 0, 1};
    Vec3 corner = lo;
    if (n.x > 0.5) corner.x += cell;
    if (n.y > 0.5) corner.y += cell;
    if (n.z > 0.5) corner.z += cell;
    Vec3 pos = corner + u_axis * (unit() * cell) + v_axis * (unit() * cell);
    int box_id = -1;
    for (const auto& b : boxes) {
      if (b.aabb().contains(pos)) { box_id = b.id; break; }
    }
    out.push_back({id, pos, n, box_id});
  }
  return out;
}

std::pair<int, int> parse_fleet_spec(const std::string& spec) {
  static const std::regex re("([0-9]+)E([0-9]+)P");
  std::smatch m;
  if (!std::regex_match(spec, m, re))
    throw ScenarioError("fleet: spec '" + spec + "' does not match <n>E<m>P");
  return {std::stoi(m[1]), std::stoi(m[2])};
}

std::vector<FleetAgent> generate_fleet(int exd_count, int pgd_count, const Vec3& gcs,
                                       double voxel_size) {
  std::vector<FleetAgent> fleet;
  int slot = 1;
  auto place = [&](const std::string& name, Role role) {
    Vec3 p = gcs + Vec3{2.0 * voxel_size * slot, 0, 0};
    ++slot;
    fleet.push_back({name, role, p});
  };
  char buf[16];
  for (int e = 0; e < exd_count; ++e) {
    std::snprintf(buf, sizeof buf, "exd%02d", e + 1);
    place(buf, Role::EXD);
  }
  for (int p = 0; p < pgd_count; ++p) {
    std::snprintf(buf, sizeof buf, "pgd%02d", p + 1);
    place(buf, Role::PGD);
  }
  return fleet;
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) { ok = true; break; }
    if (!ok) throw ScenarioError("unknown key '" + it.key() + "' in " + where);
  }
}

Vec3 parse_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ScenarioError(where + ": expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

SimConfig parse_config(const json& j) {
  SimConfig c;
  require_keys(j, "config",
               {"voxel_size", "tick_seconds", "v_max", "stride", "return_home",
                "future_horizon", "standoff", "lidar", "camera"});
  if (j.contains("voxel_size")) c.voxel_size = j["voxel_size"].get<double>();
  if (j.contains("tick_seconds")) c.tick_seconds = j["tick_seconds"].get<double>();
  if (j.contains("v_max")) c.v_max = j["v_max"].get<double>();
  if (j.contains("stride")) c.stride = j["stride"].get<int>();
  if (j.contains("return_home")) c.return_home = j["return_home"].get<bool>();
  if (j.contains("future_horizon")) c.future_horizon = j["future_horizon"].get<int>();
  if (j.contains("standoff")) c.standoff = j["standoff"].get<int>();
  if (j.contains("lidar")) {
    const json& l = j["lidar"];
    require_keys(l, "config.lidar", {"max_range", "azimuth_rays", "elevation_rays", "period"});
    if (l.contains("max_range")) c.lidar.max_range = l["max_range"].get<double>();
    if (l.contains("azimuth_rays")) c.lidar.azimuth_rays = l["azimuth_rays"].get<int>();
    if (l.contains("elevation_rays")) c.lidar.elevation_rays = l["elevation_rays"].get<int>();
    if (l.contains("period")) c.lidar.period = l["period"].get<int>();
  }
  if (j.contains("camera")) {
    const json& cam = j["camera"];
    require_keys(cam, "config.camera", {"fov_h", "fov_v", "max_range", "v_blur"});
    if (cam.contains("fov_h")) c.camera.fov_h = cam["fov_h"].get<double>();
    if (cam.contains("fov_v")) c.camera.fov_v = cam["fov_v"].get<double>();
    if (cam.contains("max_range")) c.camera.max_range = cam["max_range"].get<double>();
    if (cam.contains("v_blur")) c.camera.v_blur = cam["v_blur"].get<double>();
  }
  return c;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const ScenarioOverrides& ovr) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario parse error: ") + e.what());
  }
  require_keys(j, "scenario",
               {"boxes", "model", "defects", "defect_count", "seed", "gcs", "fleet", "config"});

  Scenario s;
  s.config = j.contains("config") ? parse_config(j["config"]) : SimConfig{};
  if (ovr.stride) s.config.stride = *ovr.stride;
  if (ovr.voxel_size) s.config.voxel_size = *ovr.voxel_size;
  if (s.config.voxel_size <= 0) throw ScenarioError("config.voxel_size: must be positive");
  if (s.config.stride < 1) throw ScenarioError("config.stride: must be >= 1");

  if (!j.contains("boxes")) throw ScenarioError("boxes: missing");
  for (const json& jb : j["boxes"]) {
    require_keys(jb, "boxes[]", {"id", "center", "half_extents"});
    BoundingBox b;
    b.id = jb.at("id").get<int>();
    b.center = parse_vec3(jb.at("center"), "boxes[].center");
    b.half_extents = parse_vec3(jb.at("half_extents"), "boxes[].half_extents");
    s.boxes.push_back(b);
  }

  if (!j.contains("gcs")) throw ScenarioError("gcs: missing");
  s.gcs_position = parse_vec3(j["gcs"], "gcs");

  double cell_size = s.config.voxel_size;
  if (j.contains("model")) {
    const json& jm = j["model"];
    require_keys(jm, "model", {"cell_size", "blocks", "occupied_cells"});
    if (jm.contains("cell_size")) cell_size = jm["cell_size"].get<double>();
    if (cell_size <= 0) throw ScenarioError("model.cell_size: must be positive");
    s.model = GroundTruthModel(cell_size);
    if (jm.contains("blocks")) {
      for (const json& blk : jm["blocks"]) {
        require_keys(blk, "model.blocks[]", {"min", "max"});
        s.model.fill_block(parse_vec3(blk.at("min"), "model.blocks[].min"),
                           parse_vec3(blk.at("max"), "model.blocks[].max"));
      }
    }
    if (jm.contains("occupied_cells")) {
      for (const json& c : jm["occupied_cells"]) {
        if (!c.is_array() || c.size() != 3)
          throw ScenarioError("model.occupied_cells[]: expected [i,j,k]");
        s.model.set_occupied({c[0].get<int>(), c[1].get<int>(), c[2].get<int>()});
      }
    }
  } else {
    s.model = GroundTruthModel(cell_size);
  }

  if (j.contains("defects") && j.contains("defect_count"))
    throw ScenarioError("defects: give either an explicit list or defect_count, not both");
  if (j.contains("defects")) {
    for (const json& jd : j["defects"]) {
      require_keys(jd, "defects[]", {"id", "position", "normal", "box_id"});
      Defect d;
      d.id = jd.at("id").get<int>();
      d.position = parse_vec3(jd.at("position"), "defects[].position");
      d.normal = parse_vec3(jd.at("normal"), "defects[].normal");
      d.box_id = jd.at("box_id").get<int>();
      s.model.defects.push_back(d);
    }
  } else if (j.contains("defect_count")) {
    std::uint32_t seed = j.contains("seed") ? j["seed"].get<std::uint32_t>() : 0;
    if (ovr.seed) seed = *ovr.seed;
    s.model.defects = sample_defects(s.model, j["defect_count"].get<int>(), seed, s.boxes);
  }

  if (ovr.exd_count || ovr.pgd_count) {
    s.fleet = generate_fleet(ovr.exd_count.value_or(0), ovr.pgd_count.value_or(0),
                             s.gcs_position, s.config.voxel_size);
  } else if (j.contains("fleet")) {
    for (const json& ja : j["fleet"]) {
      require_keys(ja, "fleet[]", {"name", "role", "start"});
      FleetAgent a;
      a.name = ja.at("name").get<std::string>();
      std::string role = ja.at("role").get<std::string>();
      if (role == "EXD") a.role = Role::EXD;
      else if (role == "PGD") a.role = Role::PGD;
      else throw ScenarioError("fleet[].role: '" + role + "' is not EXD or PGD");
      a.start = parse_vec3(ja.at("start"), "fleet[].start");
      s.fleet.push_back(a);
    }
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const ScenarioOverrides& ovr) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), ovr);
}

Scenario load_scenario(const std::filesystem::path& path) {
  return load_scenario(path, ScenarioOverrides{});
}

void validate_scenario(const Scenario& s) {
  std::vector<int> ids;
  for (const auto& b : s.boxes) {
    if (b.half_extents.x <= 0 || b.half_extents.y <= 0 || b.half_extents.z <= 0)
      throw ScenarioError("boxes[].half_extents: must be strictly positive (box " +
                          std::to_string(b.id) + ")");
    ids.push_back(b.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw ScenarioError("boxes[].id: duplicate box id");

  int exd = 0;
  std::vector<std::string> names;
  for (const auto& a : s.fleet) {
    names.push_back(a.name);
    if (a.role == Role::EXD) ++exd;
    VoxelIndex c = point_to_cell(a.start, s.model.cell_size());
    if (s.model.cell_occupied(c))
      throw ScenarioError("fleet[].start: agent '" + a.name + "' starts inside an occupied cell");
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw ScenarioError("fleet[].name: duplicate agent name");
  if (exd == 0) throw ScenarioError("fleet: at least one EXD required");
  for (std::size_t a = 0; a < s.fleet.size(); ++a)
    for (std::size_t b = a + 1; b < s.fleet.size(); ++b)
      if ((s.fleet[a].start - s.fleet[b].start).norm() < 1e-9)
        throw ScenarioError("fleet[].start: '" + s.fleet[a].name + "' and '" +
                            s.fleet[b].name + "' share a start position");

  double cell = s.model.cell_size();
  for (const auto& d : s.model.defects) {
    if (std::abs(d.normal.norm() - 1.0) > 1e-9)
      throw ScenarioError("defects[].normal: not a unit vector (defect " +
                          std::to_string(d.id) + ")");
    Vec3 behind = d.position - d.normal * (0.5 * cell);
    Vec3 ahead = d.position + d.normal * (0.5 * cell);
    if (!s.model.cell_occupied(point_to_cell(behind, cell)) ||
        s.model.cell_occupied(point_to_cell(ahead, cell)))
      throw ScenarioError("defects[].position: defect " + std::to_string(d.id) +
                          " is not on an exposed cell face");
    if (d.box_id != -1) s.box_by_id(d.box_id);  // throws when unknown
  }
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["boxes"] = json::array();
  for (const auto& b : s.boxes)
    j["boxes"].push_back({{"id", b.id},
                          {"center", vec3_json(b.center)},
                          {"half_extents", vec3_json(b.half_extents)}});
  json cells = json::array();
  for (const auto& c : s.model.occupied_cells_sorted())
    cells.push_back(json::array({c.i, c.j, c.k}));
  j["model"] = {{"cell_size", s.model.cell_size()}, {"occupied_cells", cells}};
  j["defects"] = json::array();
  for (const auto& d : s.model.defects)
    j["defects"].push_back({{"id", d.id},
                            {"position", vec3_json(d.position)},
                            {"normal", vec3_json(d.normal)},
                            {"box_id", d.box_id}});
  j["gcs"] = vec3_json(s.gcs_position);
  j["fleet"] = json::array();
  for (const auto& a : s.fleet)
    j["fleet"].push_back({{"name", a.name},
                          {"role", a.role == Role::EXD ? "EXD" : "PGD"},
                          {"start", vec3_json(a.start)}});
  const SimConfig& c = s.config;
  j["config"] = {
      {"voxel_size", c.voxel_size},
      {"tick_seconds", c.tick_seconds},
      {"v_max", c.v_max},
      {"stride", c.stride},
      {"return_home", c.return_home},
      {"future_horizon", c.future_horizon},
      {"standoff", c.standoff},
      {"lidar",
       {{"max_range", c.lidar.max_range},
        {"azimuth_rays", c.lidar.azimuth_rays},
        {"elevation_rays", c.lidar.elevation_rays},
        {"period", c.lidar.period}}},
      {"camera",
       {{"fov_h", c.camera.fov_h},
        {"fov_v", c.camera.fov_v},
        {"max_range", c.camera.max_range},
        {"v_blur", c.camera.v_blur}}}};
  return j.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ScenarioError("cannot write scenario file " + path.string());
  out << serialize_scenario(s);
}

}  // namespace swarm
