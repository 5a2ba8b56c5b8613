#include "io/bundle_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace charids {
namespace {

struct FieldDesc {
  const char* name;
  enum Kind { scalar, vec, sym } kind;
};

constexpr FieldDesc kFields[] = {
    {"theta", FieldDesc::scalar}, {"phi", FieldDesc::scalar}, {"Theta", FieldDesc::sym},
    {"psi11", FieldDesc::scalar}, {"psi1a", FieldDesc::vec},  {"chi", FieldDesc::scalar},
    {"u", FieldDesc::scalar},     {"psi_ab", FieldDesc::sym}, {"psi01", FieldDesc::scalar},
};

// Component labels follow the coordinate numbering of the angular axes
// (first angular axis = 2).
std::vector<std::string> comp_labels(FieldDesc::Kind kind, int d) {
  std::vector<std::string> out;
  switch (kind) {
    case FieldDesc::scalar:
      out.push_back("0");
      break;
    case FieldDesc::vec:
      for (int a = 0; a < d; ++a) out.push_back(std::to_string(a + 2));
      break;
    case FieldDesc::sym:
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
          out.push_back(std::to_string(a + 2) + std::to_string(b + 2));
      break;
  }
  return out;
}

const ScalarField& field_comp(const SolvedBundle& b, int field, int comp) {
  switch (field) {
    case 0: return b.theta;
    case 1: return b.phi;
    case 2: return b.Theta.comp_flat(comp);
    case 3: return b.psi11;
    case 4: return b.psi1a.comp(comp);
    case 5: return b.chi;
    case 6: return b.u;
    case 7: return b.psi_ab.comp_flat(comp);
    default: return b.psi01;
  }
}

ScalarField& field_comp_mut(SolvedBundle& b, int field, int comp) {
  return const_cast<ScalarField&>(field_comp(b, field, comp));
}

std::string csv_header(int d) {
  std::string h = "gen_index";
  for (int a = 0; a < d; ++a) h += ",ang_index_" + std::to_string(a);
  h += ",component,value";
  return h;
}

std::string read_text_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("missing ") + what + ": " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path);
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path);
}

std::uint64_t hash_file(const std::string& path) {
  return fnv1a64(read_text_file(path, "file"));
}

void write_bundle(const std::string& dir, const SolvedBundle& b,
                  std::vector<std::pair<std::string, std::uint64_t>>& files) {
  const SurfaceGrid& g = b.grid;
  const int d = g.ang_axes();
  const std::string sub = std::string(surface_name(b.surface));
  std::error_code ec;
  std::filesystem::create_directories(dir + "/" + sub, ec);
  if (ec) throw IoError("cannot create output directory: " + dir + "/" + sub);

  std::vector<int> jj;
  for (int fi = 0; fi < int(std::size(kFields)); ++fi) {
    const auto labels = comp_labels(kFields[fi].kind, d);
    std::string text = csv_header(d) + "\n";
    char buf[96];
    for (int i = 0; i < g.n_gen; ++i)
      for (std::size_t af = 0; af < g.ang_count(); ++af) {
        g.ang_unflat(af, jj);
        std::string prefix = std::to_string(i);
        for (int a = 0; a < d; ++a) prefix += "," + std::to_string(jj[a]);
        for (int c = 0; c < int(labels.size()); ++c) {
          std::snprintf(buf, sizeof buf, ",%s,%.17g\n", labels[c].c_str(),
                        field_comp(b, fi, c).at(i, af));
          text += prefix;
          text += buf;
        }
      }
    const std::string rel = sub + "/" + kFields[fi].name + ".csv";
    write_text_file(dir + "/" + rel, text);
    files.emplace_back(rel, fnv1a64(text));
  }
}

SolvedBundle read_bundle(const std::string& dir, Surface surf, const RunConfig& cfg) {
  const SurfaceGrid grid = make_surface_grid(surf, cfg.spec.n, cfg.spec.length, cfg.n_gen,
                                             cfg.n_ang, cfg.spec.ang_extent);
  const int d = grid.ang_axes();
  SolvedBundle b;
  b.surface = surf;
  b.grid = grid;
  b.theta = ScalarField(grid);
  b.phi = ScalarField(grid);
  b.Theta = SymTensorField(grid, d);
  b.psi11 = ScalarField(grid);
  b.psi1a = AngularVecField(grid, d);
  b.chi = ScalarField(grid);
  b.u = ScalarField(grid);
  b.psi_ab = SymTensorField(grid, d);
  b.psi01 = ScalarField(grid);
  b.config_hash = cfg.hash;

  const std::string sub = std::string(surface_name(surf));
  std::vector<int> jj(d);
  for (int fi = 0; fi < int(std::size(kFields)); ++fi) {
    const std::string path = dir + "/" + sub + "/" + kFields[fi].name + ".csv";
    const std::string text = read_text_file(path, "field file");
    const auto labels = comp_labels(kFields[fi].kind, d);
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line) || line != csv_header(d))
      throw IoError("corrupt field file (bad header): " + path);
    std::size_t rows = 0;
    const std::size_t want = grid.node_count() * labels.size();
    while (std::getline(ss, line)) {
      if (line.empty()) continue;
      // split into 1 + d + 2 cells
      const int ncell = 3 + d;
      std::array<std::string, 3 + SmallSym::kMaxDim> cell;
      int nc = 0;
      std::size_t pos = 0;
      while (nc < ncell) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
          cell[nc++] = line.substr(pos);
          pos = line.size();
          break;
        }
        cell[nc++] = line.substr(pos, comma - pos);
        pos = comma + 1;
      }
      if (nc != ncell || pos != line.size())
        throw IoError("corrupt field file (bad row): " + path);
      char* end = nullptr;
      const long i = std::strtol(cell[0].c_str(), &end, 10);
      if (*end != '\0' || i < 0 || i >= grid.n_gen)
        throw IoError("corrupt field file (station index): " + path);
      for (int a = 0; a < d; ++a) {
        const long j = std::strtol(cell[1 + a].c_str(), &end, 10);
        if (*end != '\0' || j < 0 || j >= grid.n_ang)
          throw IoError("corrupt field file (angular index): " + path);
        jj[a] = int(j);
      }
      int comp = -1;
      for (int c = 0; c < int(labels.size()); ++c)
        if (labels[c] == cell[1 + d]) {
          comp = c;
          break;
        }
      if (comp < 0) throw IoError("corrupt field file (component label): " + path);
      const double v = std::strtod(cell[2 + d].c_str(), &end);
      if (end == cell[2 + d].c_str() || *end != '\0')
        throw IoError("corrupt field file (value): " + path);
      field_comp_mut(b, fi, comp).at(std::size_t(i), grid.ang_flat(jj)) = v;
      ++rows;
    }
    if (rows != want) throw IoError("corrupt field file (row count): " + path);
  }
  return b;
}

std::vector<std::pair<std::string, std::string>> residual_lines(const ResidualReport& rep) {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string p = std::string(surface_name(rep.surface)) + ".";
  for (const auto& e : rep.entries) {
    out.emplace_back(p + e.key + ".max", fmt17(e.norms.max));
    out.emplace_back(p + e.key + ".rms", fmt17(e.norms.rms));
    out.emplace_back(p + e.key + ".tol", fmt17(e.tol));
    out.emplace_back(p + e.key + ".pass", e.pass ? "true" : "false");
  }
  out.emplace_back(p + "ricci_route_gap.max", fmt17(rep.ricci_route_gap.max));
  out.emplace_back(p + "ricci_route_gap.rms", fmt17(rep.ricci_route_gap.rms));
  out.emplace_back(p + "pass", rep.pass ? "true" : "false");
  return out;
}

std::uint64_t manifest_hash(const ManifestData& m) {
  std::string payload = m.config_text;
  payload += "[files]\n";
  char buf[32];
  for (const auto& [rel, h] : m.files) {
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    payload += rel + " = " + buf + "\n";
  }
  payload += "[residuals]\n";
  for (const auto& [k, v] : m.residuals) payload += k + " = " + v + "\n";
  return fnv1a64(payload);
}

void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<const SolvedBundle*>& bundles,
                    const std::vector<ResidualReport>& reports,
                    const std::vector<std::pair<std::string, std::uint64_t>>& files) {
  ManifestData m;
  m.config_text = cfg.canonical;
  m.files = files;
  for (const SolvedBundle* b : bundles) {
    const std::string p = std::string(surface_name(b->surface)) + ".";
    for (const auto& st : b->stages) {
      m.stages.emplace_back(p + st.name + ".ms", fmt17(st.wall_ms));
      m.stages.emplace_back(p + st.name + ".note", st.note);
    }
  }
  for (const auto& rep : reports) {
    auto lines = residual_lines(rep);
    m.residuals.insert(m.residuals.end(), lines.begin(), lines.end());
  }
  m.hash = manifest_hash(m);

  std::string text = "charids manifest v1\n\n[config]\n" + m.config_text;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)cfg.hash);
  text += "config_hash = ";
  text += buf;
  text += "\n\n[stages]\n";
  for (const auto& [k, v] : m.stages) text += k + " = " + v + "\n";
  text += "\n[files]\n";
  for (const auto& [rel, h] : m.files) {
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    text += rel + " = " + buf + "\n";
  }
  text += "\n[residuals]\n";
  for (const auto& [k, v] : m.residuals) text += k + " = " + v + "\n";
  text += "\n[integrity]\nmanifest_hash = ";
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)m.hash);
  text += buf;
  text += "\n";
  write_text_file(dir + "/manifest.txt", text);
}

ManifestData read_manifest(const std::string& dir) {
  const std::string text = read_text_file(dir + "/manifest.txt", "manifest");
  ManifestData m;
  std::stringstream ss(text);
  std::string line, section;
  bool config_hash_seen = false;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "charids manifest v1") continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const std::size_t eq = line.find(" = ");
    if (eq == std::string::npos)
      throw IoError("corrupt manifest (bad line): " + dir + "/manifest.txt");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 3);
    if (section == "config") {
      if (key == "config_hash") {
        config_hash_seen = true;
      } else {
        m.config_text += key + " = " + val + "\n";
      }
    } else if (section == "stages") {
      m.stages.emplace_back(key, val);
    } else if (section == "files") {
      m.files.emplace_back(key, std::strtoull(val.c_str(), nullptr, 16));
    } else if (section == "residuals") {
      m.residuals.emplace_back(key, val);
    } else if (section == "integrity") {
      if (key == "manifest_hash") m.hash = std::strtoull(val.c_str(), nullptr, 16);
    } else {
      throw IoError("corrupt manifest (unknown section): " + dir + "/manifest.txt");
    }
  }
  if (m.config_text.empty() || !config_hash_seen || m.hash == 0)
    throw IoError("corrupt manifest (missing sections): " + dir + "/manifest.txt");
  return m;
}

}  // namespace charids
