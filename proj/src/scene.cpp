#include "folrho/scene.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace folrho {

// ---------------------------------------------------------------------------
// ValidationReport
// ---------------------------------------------------------------------------

void ValidationReport::add(const std::string& name, bool ok, double residual,
                           const std::string& detail) {
  checks.push_back(CheckRecord{name, ok, residual, detail});
}

bool ValidationReport::all_ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

std::string ValidationReport::failure_summary() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : checks) {
    if (c.ok) continue;
    if (!first) os << "; ";
    os << c.name;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    first = false;
  }
  return os.str();
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e = {{"check", c.name},
                        {"ok", c.ok},
                        {"residual", c.residual}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    arr.push_back(e);
  }
  return {{"all_ok", all_ok()}, {"checks", arr}};
}

// ---------------------------------------------------------------------------
// SceneFile
// ---------------------------------------------------------------------------

namespace {

// Runs `body` and records the outcome; returns true when the check passed.
template <class Body>
bool checked(ValidationReport& rep, const std::string& name, Body&& body) {
  try {
    const double residual = body();
    rep.add(name, true, residual);
    return true;
  } catch (const std::exception& e) {
    rep.add(name, false, 0.0, e.what());
    return false;
  }
}

}  // namespace

SceneFile SceneFile::from_json(const nlohmann::json& j, double tol_scale) {
  SceneFile s;
  s.raw = j;
  if (!j.contains("dim") || !j.at("dim").is_number_integer())
    throw ValidationError("scene: integer field 'dim' is required");
  s.dim = j.at("dim").get<int>();
  if (s.dim < 1) throw ValidationError("scene: dim must be >= 1");
  s.params = j.value("params", nlohmann::json::object());

  const double tol = 1e-9 * tol_scale;

  // Foliation.
  if (j.contains("foliation")) {
    const auto& fj = j.at("foliation");
    const std::string kind = fj.value("kind", "span_axes");
    checked(s.report, "foliation.integrability", [&]() {
      if (kind == "max") {
        std::vector<int> axes(s.dim);
        for (int i = 0; i < s.dim; ++i) axes[i] = i;
        s.foliation = Foliation::span_axes(s.dim, axes);
      } else if (kind == "min") {
        s.foliation = Foliation::span_axes(s.dim, {});
      } else if (kind == "span_axes") {
        s.foliation =
            Foliation::span_axes(s.dim, fj.at("axes").get<std::vector<int>>());
      } else if (kind == "frame") {
        std::vector<std::vector<TrigScalar>> frame;
        for (const auto& row : fj.at("frame")) {
          std::vector<TrigScalar> v;
          for (const auto& e : row) v.push_back(TrigScalar::from_json(e, s.dim));
          frame.push_back(std::move(v));
        }
        s.foliation = Foliation(s.dim, fj.at("leaf_rank").get<int>(),
                                std::move(frame), tol);
      } else if (kind == "codim1") {
        s.codim1 = CodimOneData::from_json(fj, s.dim);
        s.foliation = s.codim1->foliation();
      } else {
        throw ValidationError("scene: unknown foliation kind '" + kind + "'");
      }
      return s.foliation ? s.foliation->integrability_residual() : 0.0;
    });
  }

  // Main bundle and metric.
  if (j.contains("bundle")) {
    checked(s.report, "bundle.well_formed", [&]() {
      s.bundle = Connection::from_json(j.at("bundle"), s.dim);
      return 0.0;
    });
  }
  if (s.bundle) {
    checked(s.report, "metric.hermitian_positive", [&]() {
      if (j.contains("metric"))
        s.metric = HermMetric::from_json(j.at("metric"));
      else
        s.metric = HermMetric::identity(s.bundle->rank);
      if (s.metric->rank() != s.bundle->rank)
        throw ValidationError("scene: metric rank != bundle rank");
      return 0.0;
    });
  }

  // Partial connection along the foliation.
  if (s.foliation && s.bundle) {
    checked(s.report, "partial.flat_along_F", [&]() {
      Connection base = *s.bundle;
      if (j.contains("partial_base"))
        base = Connection::from_json(j.at("partial_base"), s.dim);
      if (base.rank != s.bundle->rank)
        throw ValidationError("scene: partial_base rank != bundle rank");
      s.partial = PartialConnection(*s.foliation, base, tol);
      return 0.0;
    });
  }
  if (s.partial && s.bundle) {
    checked(s.report, "bundle.extends_partial", [&]() {
      const double res = extension_residual(*s.partial, *s.bundle);
      if (!is_extension(*s.partial, *s.bundle, tol))
        throw ValidationError(
            "scene: bundle does not extend the partial connection");
      return res;
    });
  }

  // Normal bundle and its metric.
  if (j.contains("normal_bundle")) {
    checked(s.report, "normal_bundle.well_formed", [&]() {
      s.normal_bundle = Connection::from_json(j.at("normal_bundle"), s.dim);
      return 0.0;
    });
  }
  if (s.normal_bundle) {
    checked(s.report, "normal_metric.hermitian_positive", [&]() {
      if (j.contains("normal_metric"))
        s.normal_metric = HermMetric::from_json(j.at("normal_metric"));
      else
        s.normal_metric = HermMetric::identity(s.normal_bundle->rank);
      if (s.normal_metric->rank() != s.normal_bundle->rank)
        throw ValidationError("scene: normal_metric rank != normal bundle rank");
      return 0.0;
    });
  }

  // Auxiliary bundle for pairings.
  if (j.contains("u_bundle")) {
    checked(s.report, "u_bundle.well_formed", [&]() {
      s.u_bundle = Connection::from_json(j.at("u_bundle"), s.dim);
      return 0.0;
    });
  }

  // Framings (flat real connections).
  if (j.contains("framings")) {
    int idx = 0;
    for (const auto& fj : j.at("framings")) {
      checked(s.report, "framing[" + std::to_string(idx) + "].flat", [&]() {
        s.framings.push_back(FramingData(Connection::from_json(fj, s.dim), tol));
        return curvature(s.framings.back().conn).sup_bound();
      });
      ++idx;
    }
  }

  return s;
}

SceneFile SceneFile::load(const std::string& path, double tol_scale) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scene: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError("scene: JSON parse error in '" + path + "': " +
                          e.what());
  }
  return from_json(j, tol_scale);
}

void SceneFile::require_ok() const {
  if (!report.all_ok())
    throw ValidationError("scene validation failed: " +
                          report.failure_summary());
}

namespace {
[[noreturn]] void missing(const char* what) {
  throw ValidationError(std::string("scene: missing or invalid '") + what +
                        "'");
}
}  // namespace

const Foliation& SceneFile::need_foliation() const {
  if (!foliation) missing("foliation");
  return *foliation;
}
const CodimOneData& SceneFile::need_codim1() const {
  if (!codim1) missing("foliation (kind codim1)");
  return *codim1;
}
const Connection& SceneFile::need_bundle() const {
  if (!bundle) missing("bundle");
  return *bundle;
}
const HermMetric& SceneFile::need_metric() const {
  if (!metric) missing("metric");
  return *metric;
}
const PartialConnection& SceneFile::need_partial() const {
  if (!partial) missing("partial connection");
  return *partial;
}
const Connection& SceneFile::need_normal_bundle() const {
  if (!normal_bundle) missing("normal_bundle");
  return *normal_bundle;
}
const HermMetric& SceneFile::need_normal_metric() const {
  if (!normal_metric) missing("normal_metric");
  return *normal_metric;
}
const Connection& SceneFile::need_u_bundle() const {
  if (!u_bundle) missing("u_bundle");
  return *u_bundle;
}

// ---------------------------------------------------------------------------
// Digest and envelope
// ---------------------------------------------------------------------------

std::string inputs_digest(const nlohmann::json& canonical) {
  const std::string dump = canonical.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;  // FNV prime
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

nlohmann::json ResultEnvelope::to_json() const {
  return {{"task", task},
          {"inputs_digest", digest},
          {"results", results},
          {"provenance", provenance},
          {"verification", verification}};
}

}  // namespace folrho
