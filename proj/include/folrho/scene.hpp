#pragma once
// Scene files: JSON descriptions of a foliated torus with bundle, metric,
// normal-bundle, and framing data.  Loading runs every type-level
// verification and collects the outcomes in a report; commands that need an
// object require its checks to have passed.  ResultEnvelope is the canonical
// output record of a CLI run.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "folrho/rho.hpp"

namespace folrho {

struct CheckRecord {
  std::string name;
  bool ok = true;
  double residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckRecord> checks;

  void add(const std::string& name, bool ok, double residual = 0.0,
           const std::string& detail = std::string());
  bool all_ok() const;
  std::string failure_summary() const;
  nlohmann::json to_json() const;
};

// A scene: torus dimension, foliation (by spanning axes, explicit frame, or
// codimension-one data), the main bundle with metric, an optional explicit
// partial-connection base, the normal bundle (with optional metric), an
// auxiliary bundle for pairings, framings, and free-form task parameters.
struct SceneFile {
  int dim = 1;
  nlohmann::json raw;  // parsed input, kept for digesting
  nlohmann::json params = nlohmann::json::object();

  std::optional<Foliation> foliation;
  std::optional<CodimOneData> codim1;
  std::optional<Connection> bundle;
  std::optional<HermMetric> metric;         // for `bundle`; identity if absent
  std::optional<PartialConnection> partial;  // from partial_base (or bundle)
  std::optional<Connection> normal_bundle;
  std::optional<HermMetric> normal_metric;  // identity if absent
  std::optional<Connection> u_bundle;
  std::vector<FramingData> framings;

  ValidationReport report;

  static SceneFile from_json(const nlohmann::json& j, double tol_scale = 1.0);
  static SceneFile load(const std::string& path, double tol_scale = 1.0);

  // Throws ValidationError naming the failed checks unless all passed.
  void require_ok() const;

  // Accessors that insist the object was present and validated.
  const Foliation& need_foliation() const;
  const CodimOneData& need_codim1() const;
  const Connection& need_bundle() const;
  const HermMetric& need_metric() const;
  const PartialConnection& need_partial() const;
  const Connection& need_normal_bundle() const;
  const HermMetric& need_normal_metric() const;
  const Connection& need_u_bundle() const;
};

// FNV-1a 64-bit digest of a canonical JSON dump, as fixed-width hex.
std::string inputs_digest(const nlohmann::json& canonical);

// Canonical output record: task id, digest of the inputs, numeric results,
// provenance breakdown, and the verification report.  Wall time is kept out
// of the serialized form so identical runs emit identical bytes.
struct ResultEnvelope {
  std::string task;
  std::string digest;
  nlohmann::json results;
  nlohmann::json provenance;
  nlohmann::json verification;
  double wall_time_ms = 0.0;

  nlohmann::json to_json() const;
};

}  // namespace folrho
