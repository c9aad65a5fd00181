#include "flab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "flab/error.hpp"
#include "flab/golden.hpp"

namespace flab {

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_pbm(const RasterSet& K, const std::string& path) {
  const CellBox& b = K.box();
  const auto w = static_cast<std::size_t>(b.width()), h = static_cast<std::size_t>(b.height());
  const std::size_t stride = (w + 7) / 8;
  std::string out = "P4\n" + std::to_string(w) + " " + std::to_string(h) + "\n";
  std::string row(stride, '\0');
  for (std::size_t r = 0; r < h; ++r) {
    const std::int64_t j = b.j1 - static_cast<std::int64_t>(r);
    std::fill(row.begin(), row.end(), '\0');
    for (std::size_t c = 0; c < w; ++c)
      if (K.test({b.i0 + static_cast<std::int64_t>(c), j})) row[c / 8] |= static_cast<char>(0x80u >> (c % 8));
    out += row;
  }
  write_text(path, out);
  Json side;
  side["origin"] = {K.origin().x, K.origin().y};
  side["eps"] = K.eps();
  side["bbox"] = {b.i0, b.j0, b.i1, b.j1};
  write_json(path + ".json", side);
}

RasterSet read_pbm(const std::string& path) {
  const Json side = read_json(path + ".json");
  const std::string data = read_text(path);
  std::istringstream in(data);
  std::string magic;
  std::size_t w = 0, h = 0;
  in >> magic >> w >> h;
  if (magic != "P4" || !in) throw Error(path + ": not a P4 bitmap");
  in.get();
  const auto pos = static_cast<std::size_t>(in.tellg());
  const std::size_t stride = (w + 7) / 8;
  if (data.size() < pos + stride * h) throw Error(path + ": truncated bitmap");
  Grid grid{side["eps"].get<double>(), {side["origin"][0].get<double>(), side["origin"][1].get<double>()}};
  const CellBox b{side["bbox"][0].get<std::int64_t>(), side["bbox"][1].get<std::int64_t>(),
                  side["bbox"][2].get<std::int64_t>(), side["bbox"][3].get<std::int64_t>()};
  if (static_cast<std::size_t>(b.width()) != w || static_cast<std::size_t>(b.height()) != h)
    throw Error(path + ": sidecar bbox does not match bitmap size");
  RasterSet K(grid, b);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c)
      if (static_cast<unsigned char>(data[pos + r * stride + c / 8]) & (0x80u >> (c % 8)))
        K.set({b.i0 + static_cast<std::int64_t>(c), b.j1 - static_cast<std::int64_t>(r)});
  return K;
}

Json to_json(const TilingConstants& c) {
  return Json{{"d0", c.d0}, {"eta0", c.eta0}, {"inradius", c.inradius},
              {"a2", c.a2}, {"a3", c.a3},     {"generation", c.generation}};
}

Json to_json(const TileAddress& t) { return Json{{"level", t.level}, {"a", t.a}, {"b", t.b}}; }

Json to_json(const WhitneyTree& tree) {
  Json gens = Json::array();
  for (std::size_t g = 0; g < tree.generations.size(); ++g) {
    const auto& nodes = tree.generations[g];
    std::size_t kids = 0;
    for (const auto& n : nodes) kids += n.children;
    const bool last = g + 1 == tree.generations.size();
    Json gen{{"level", nodes.empty() ? tree.root.level + static_cast<int>(g) * tree.h : nodes.front().tile.level},
             {"nodes", nodes.size()},
             {"branching", (nodes.empty() || last) ? 0.0 : static_cast<double>(kids) / static_cast<double>(nodes.size())}};
    gens.push_back(gen);
  }
  Json j{{"root", to_json(tree.root)}, {"h", tree.h}, {"generations", gens}};
  if (tree.root_hypothesis) j["root_hypothesis"] = *tree.root_hypothesis;
  return j;
}

Json to_json(const DimEstimate& d) {
  return Json{{"dimension", d.slope}, {"intercept", d.intercept}, {"r2", d.r2}, {"ci", {d.ci_lo, d.ci_hi}},
              {"scales", d.scales},   {"counts", d.counts}};
}

Json to_json(const Interval& ci) { return Json::array({ci.lo, ci.hi}); }

Json estimator_json(double estimate, Interval ci, std::size_t n_trials, std::uint64_t seed, const Json& params) {
  return Json{{"estimate", estimate}, {"ci", to_json(ci)}, {"n_trials", n_trials}, {"seed", seed}, {"params", params}};
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InvalidArgument("csv row width mismatch");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out_ += ',';
    out_ += cells[k];
  }
  out_ += '\n';
  return *this;
}

std::string CsvWriter::num(double v) {
  // Shortest text that parses back to the same double.
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string beta_atlas_csv(const BetaAtlas& atlas) {
  CsvWriter csv({"level", "i", "k", "beta", "diam"});
  for (const BetaEntry& e : atlas.entries)
    csv.row({CsvWriter::num(e.square.level), CsvWriter::num(e.square.i), CsvWriter::num(e.square.k),
             CsvWriter::num(e.beta), CsvWriter::num(e.diam)});
  return csv.str();
}

Json RunManifest::to_json() const {
  Json p = Json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return Json{{"command", command},
              {"params", p},
              {"seed", seed},
              {"versions", {{"library", library_version}, {"constants", constants_version}}},
              {"outputs", outputs},
              {"wall_time", wall_time}};
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) m.params[k] = v.get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.library_version = j.at("versions").at("library").get<std::string>();
    m.constants_version = j.at("versions").at("constants").get<int>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_time = j.value("wall_time", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

}  // namespace flab
