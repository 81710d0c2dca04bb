#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "folrho/scene.hpp"

using namespace folrho;

namespace {

bool failed_check(const SceneFile& s, const std::string& name) {
  for (const auto& r : s.report.checks)
    if (r.name == name && !r.ok) return true;
  return false;
}

// The T^3 reference scene assembled programmatically.
nlohmann::json scene3_json() {
  const Connection c = Connection::make(
      Form::monomial(TrigScalar(TrigPoly::sine(3, 0)), {2}) +
      Form::monomial(TrigScalar(TrigPoly::cosine(3, 0)), {1}) * Cplx(0, 1));
  const Connection base = Connection::trivial(3, 1);
  nlohmann::json j;
  j["dim"] = 3;
  j["foliation"] = {{"kind", "span_axes"}, {"axes", {0}}};
  j["bundle"] = c.to_json();
  j["partial_base"] = base.to_json();
  j["normal_bundle"] = Connection::trivial(3, 2).to_json();
  return j;
}

}  // namespace

TEST_CASE("a complete scene validates and exposes every object") {
  const SceneFile s = SceneFile::from_json(scene3_json());
  CHECK(s.report.all_ok());
  CHECK_NOTHROW(s.require_ok());
  CHECK(s.dim == 3);
  CHECK(s.need_foliation().leaf_rank() == 1);
  CHECK(s.need_bundle().rank == 1);
  CHECK(s.need_metric().rank() == 1);          // identity auto-filled
  CHECK(s.need_normal_metric().rank() == 2);   // identity auto-filled
  CHECK(is_extension(s.need_partial(), s.need_bundle()));

  // Absent objects stay absent.
  CHECK_THROWS_AS(s.need_u_bundle(), ValidationError);
  CHECK_THROWS_AS(s.need_codim1(), ValidationError);
}

TEST_CASE("check records carry names and failures are summarized") {
  nlohmann::json j = scene3_json();
  // Break the extension: add a leaf leg to the bundle but not the base.
  const Connection bad = Connection::make(
      Form::from_json(j["bundle"]["A"], 3) +
      Form::monomial(TrigScalar::one(3), {0}));
  j["bundle"] = bad.to_json();

  const SceneFile s = SceneFile::from_json(j);
  CHECK_FALSE(s.report.all_ok());
  CHECK_THROWS_AS(s.require_ok(), ValidationError);
  CHECK(failed_check(s, "bundle.extends_partial"));
  // The summary names the failed check.
  CHECK(s.report.failure_summary().find("bundle.extends_partial") !=
        std::string::npos);
  // Foliation and bundle checks themselves still pass.
  bool foliation_ok = false;
  for (const auto& r : s.report.checks)
    if (r.name == "foliation.integrability") foliation_ok = r.ok;
  CHECK(foliation_ok);
}

TEST_CASE("non-integrable frames are reported, not thrown") {
  nlohmann::json j;
  j["dim"] = 3;
  std::vector<std::vector<TrigScalar>> frame(
      2, std::vector<TrigScalar>(3, TrigScalar::zero(3)));
  frame[0][0] = TrigScalar::one(3);
  frame[0][1] = TrigScalar(TrigPoly::cosine(3, 2));
  frame[1][2] = TrigScalar::one(3);
  nlohmann::json fj;
  fj["kind"] = "frame";
  fj["leaf_rank"] = 2;
  fj["frame"] = nlohmann::json::array();
  for (const auto& row : frame) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(e.to_json());
    fj["frame"].push_back(r);
  }
  j["foliation"] = fj;

  const SceneFile s = SceneFile::from_json(j);
  CHECK_FALSE(s.report.all_ok());
  CHECK_THROWS_AS(s.need_foliation(), ValidationError);
}

TEST_CASE("codim1 scenes build the kernel foliation") {
  nlohmann::json j;
  j["dim"] = 1;
  nlohmann::json fj;
  fj["kind"] = "codim1";
  fj["kappa"] = Form::dx(1, 0).to_json();
  fj["omega"] =
      Form::monomial(TrigScalar(TrigPoly::constant(1, 0.8) +
                                TrigPoly::cosine(1, 0)),
                     {0})
          .to_json();
  fj["N"] = {TrigScalar::one(1).to_json()};
  j["foliation"] = fj;

  const SceneFile s = SceneFile::from_json(j);
  CHECK(s.report.all_ok());
  CHECK(s.need_codim1().dim() == 1);
  CHECK(s.need_foliation().codim() == 1);
}

TEST_CASE("framings validate flatness individually") {
  nlohmann::json j = scene3_json();
  MatScalar m(3, 2, 2);
  m.at(0, 1) = TrigScalar::constant(3, 0.4);
  m.at(1, 0) = TrigScalar::constant(3, -0.4);
  Form A(3, 1, 2);
  A.add_term({0}, m);
  const Connection flat = Connection::make(A, true);
  const Connection curved = Connection::make(
      Form::monomial(TrigScalar(TrigPoly::sine(3, 1)), {0}) *
          Cplx(1, 0),
      true);
  j["framings"] = {flat.to_json(), curved.to_json()};

  const SceneFile s = SceneFile::from_json(j);
  CHECK_FALSE(s.report.all_ok());
  CHECK(failed_check(s, "framing[1].flat"));
  REQUIRE(s.framings.size() == 1);  // only the flat one was accepted
  CHECK(s.framings[0].rank() == 2);
}

TEST_CASE("dim is mandatory and hard-fails") {
  CHECK_THROWS_AS(SceneFile::from_json(nlohmann::json::object()),
                  ValidationError);
  nlohmann::json j;
  j["dim"] = 0;
  CHECK_THROWS_AS(SceneFile::from_json(j), ValidationError);
}

TEST_CASE("digests are stable and input-sensitive") {
  const nlohmann::json a = scene3_json();
  nlohmann::json b = scene3_json();
  CHECK(inputs_digest(a) == inputs_digest(a));
  CHECK(inputs_digest(a).size() == 16);
  b["dim"] = 5;
  CHECK(inputs_digest(a) != inputs_digest(b));
}

TEST_CASE("result envelopes serialize without timing") {
  ResultEnvelope env;
  env.task = "demo";
  env.digest = "0123456789abcdef";
  env.results = {{"value", 1.5}};
  env.provenance = {{"xi", 0.25}};
  env.wall_time_ms = 123.45;
  const nlohmann::json j = env.to_json();
  CHECK(j.at("task") == "demo");
  CHECK(j.at("results").at("value") == 1.5);
  CHECK(j.dump().find("123.45") == std::string::npos);
  CHECK_FALSE(j.contains("wall_time_ms"));
  // No scene attached: verification is null, still a stable key.
  CHECK(j.contains("verification"));
}
