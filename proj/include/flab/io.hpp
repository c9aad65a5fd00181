#pragma once

// File formats: PBM rasters with JSON sidecars, CSV tables, JSON reports and
// run manifests.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "flab/box_dimension.hpp"
#include "flab/gosper.hpp"
#include "flab/montecarlo.hpp"
#include "flab/raster.hpp"
#include "flab/tst.hpp"
#include "flab/whitney.hpp"

namespace flab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "1.0.0";

/// Binary PBM (P4) of the raster box, top row = highest j, plus `<path>.json`
/// holding {origin, eps, bbox}.
void write_pbm(const RasterSet& K, const std::string& path);
/// Inverse of write_pbm; the sidecar must exist.
RasterSet read_pbm(const std::string& path);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);
void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);

Json to_json(const TilingConstants& c);
Json to_json(const WhitneyTree& tree);
Json to_json(const DimEstimate& d);
Json to_json(const Interval& ci);
Json to_json(const TileAddress& t);

/// {estimate, ci, n_trials, seed, params}.
Json estimator_json(double estimate, Interval ci, std::size_t n_trials, std::uint64_t seed, const Json& params);

/// level,i,k,beta,diam rows.
std::string beta_atlas_csv(const BetaAtlas& atlas);

/// Plain CSV writer; numbers use %.17g so reruns reproduce bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

  static std::string num(double v);
  static std::string num(std::uint64_t v) { return std::to_string(v); }
  static std::string num(std::int64_t v) { return std::to_string(v); }
  static std::string num(int v) { return std::to_string(v); }

 private:
  std::size_t width_;
  std::string out_;
};

struct RunManifest {
  std::string command;                       // e.g. "stats extinction"
  std::map<std::string, std::string> params; // long option name -> value
  std::uint64_t seed = 0;
  std::string library_version = kLibraryVersion;
  int constants_version = 0;
  std::vector<std::string> outputs;
  double wall_time = 0.0;

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

}  // namespace flab
