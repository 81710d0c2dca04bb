// folrho: command-line driver for the foliated-torus rho-invariant engine.
//
// Every subcommand prints a ResultEnvelope as JSON on stdout (and, with
// --json-out, writes the identical bytes to a file).  Wall time goes to
// stderr only, so repeated runs with identical inputs produce identical
// output files.  Exit codes: 0 success, 2 validation failure (ill-formed
// input or scene), 3 numerical failure (tolerance breach).

#include <chrono>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "folrho/charforms.hpp"
#include "folrho/connection.hpp"
#include "folrho/form.hpp"
#include "folrho/rho.hpp"
#include "folrho/scene.hpp"
#include "folrho/spectral.hpp"
#include "folrho/trig.hpp"
#include "folrho/wo.hpp"

namespace {

using namespace folrho;
using nlohmann::json;

struct CommonOpts {
  std::string scene_path;
  double tolerance = 1.0;  // multiplies every default numerical threshold
  std::string json_out;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool scene_required) {
  auto* s = cmd->add_option("--scene", o.scene_path, "Scene JSON file");
  if (scene_required) s->required();
  cmd->add_option("--tolerance", o.tolerance,
                  "Scale factor applied to the default numerical thresholds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--json-out", o.json_out,
                  "Also write the result envelope to this file");
  cmd->add_option("--seed", o.seed, "Seed for randomized checks");
}

std::optional<SceneFile> maybe_scene(const CommonOpts& o) {
  if (o.scene_path.empty()) return std::nullopt;
  return SceneFile::load(o.scene_path, o.tolerance);
}

json scene_raw(const std::optional<SceneFile>& sc) {
  return sc ? sc->raw : json();
}

void finish(ResultEnvelope& env, const std::string& task, const json& flags,
            const std::optional<SceneFile>& sc) {
  env.task = task;
  env.digest = inputs_digest(
      json{{"task", task}, {"flags", flags}, {"scene", scene_raw(sc)}});
  if (sc) env.verification = sc->report.to_json();
}

// A real 1-form with random bandwidth-1 coefficients on each dx_axis.
Form random_real_one_form(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> freq(-1, 1);
  std::uniform_real_distribution<double> amp(-0.5, 0.5);
  Form f(dim, 1, 1);
  for (int axis = 0; axis < dim; ++axis) {
    std::vector<int> zero(dim, 0);
    TrigPoly p = TrigPoly::wave(dim, zero, Cplx(amp(rng), 0.0));
    for (int w = 0; w < 2; ++w) {
      std::vector<int> k(dim, 0);
      bool nonzero = false;
      for (int i = 0; i < dim; ++i) {
        k[i] = freq(rng);
        nonzero = nonzero || k[i] != 0;
      }
      if (!nonzero) continue;
      std::vector<int> mk(dim);
      for (int i = 0; i < dim; ++i) mk[i] = -k[i];
      const Cplx z(amp(rng), amp(rng));
      p = p + TrigPoly::wave(dim, k, z) + TrigPoly::wave(dim, mk, std::conj(z));
    }
    f = f + Form::monomial(TrigScalar(p), {axis});
  }
  return f;
}

double circle_distance(double x, double y) {
  const double d = frac_mod1(x - y);
  return std::min(d, 1.0 - d);
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = std::chrono::steady_clock::now();

  CLI::App app{
      "folrho: exact Fourier-coefficient calculus for rho invariants,\n"
      "characteristic forms, and secondary classes on foliated flat tori"};
  app.require_subcommand(1);

  ResultEnvelope env;
  int pending_exit = 0;
  std::string json_out;

  // --- validate ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "validate", "Run every structural check of a scene file");
    auto opts = std::make_shared<CommonOpts>();
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      finish(env, "validate", json{{"tolerance", opts->tolerance}}, sc);
      env.results = {{"all_ok", sc->report.all_ok()}, {"dim", sc->dim}};
      env.provenance = {{"checks_run", sc->report.checks.size()}};
      if (!sc->report.all_ok()) {
        std::cerr << "scene validation failed:\n"
                  << sc->report.failure_summary() << "\n";
        pending_exit = 2;
      }
    });
  }

  // --- rho-s1 --------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "rho-s1",
        "Spectral rho invariant of the circle with holonomy exp(2 pi i r)");
    auto opts = std::make_shared<CommonOpts>();
    auto r = std::make_shared<double>(0.0);
    auto numeric = std::make_shared<bool>(false);
    auto frank = std::make_shared<int>(2);
    cmd->add_option("--r", *r, "Holonomy parameter")->required();
    cmd->add_flag("--numeric", *numeric,
                  "Use the extrapolated eta path instead of the closed form");
    cmd->add_option("--framing-rank", *frank,
                    "Rank of the trivial framing when no scene is given")
        ->check(CLI::PositiveNumber);
    add_common(cmd, *opts, /*scene_required=*/false);
    cmd->callback([&, opts, r, numeric, frank]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      FramingData framing = FramingData::trivial(1, *frank);
      if (sc) {
        sc->require_ok();
        if (sc->dim != 1)
          throw ValidationError("rho-s1: the scene must have dim = 1");
        if (!sc->framings.empty()) framing = sc->framings[0];
      }
      const RhoResult rr = rho_s1(*r, framing, *numeric);
      finish(env, "rho-s1",
             json{{"r", *r},
                  {"numeric", *numeric},
                  {"framing_rank", framing.rank()},
                  {"tolerance", opts->tolerance}},
             sc);
      json j = rr.to_json();
      env.provenance = j["provenance"];
      j.erase("provenance");
      env.results = j;
    });
  }

  // --- rho-imag ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "rho-imag",
        "Purely imaginary part of rho: pairing of A-hat of the normal "
        "bundle with the metric transgression of the main bundle");
    auto opts = std::make_shared<CommonOpts>();
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      sc->require_ok();
      const PartialConnection& pc = sc->need_partial();
      const Connection& c = sc->need_bundle();
      const HermMetric& h = sc->need_metric();
      const Connection& cF = sc->need_normal_bundle();
      const Cplx v = rho_imag(pc, c, h, cF, 1e-9 * opts->tolerance);
      finish(env, "rho-imag", json{{"tolerance", opts->tolerance}}, sc);
      env.results = {{"value", cplx_to_json(v)},
                     {"real_part", v.real()},
                     {"imag_part", v.imag()}};
      env.provenance = {
          {"pairing",
           "(1/2) integrate_top( A-hat(normal) /\\ ch~(bundle, adjoint) )"},
          {"extension_residual", extension_residual(pc, c)}};
    });
  }

  // --- gv-check ------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "gv-check",
        "Godbillon-Vey identity: scene mode cross-checks rho-imag of the "
        "Bott package against the GV integral; without a scene, runs a "
        "randomized residual suite");
    auto opts = std::make_shared<CommonOpts>();
    auto dim = std::make_shared<int>(5);
    auto n = std::make_shared<int>(-1);
    auto draws = std::make_shared<int>(5);
    cmd->add_option("--dim", *dim, "Torus dimension for the randomized suite")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--n", *n,
                    "Power of d omega in the identity (default (dim-1)/2)");
    cmd->add_option("--draws", *draws, "Number of random draws")
        ->check(CLI::PositiveNumber);
    add_common(cmd, *opts, /*scene_required=*/false);
    cmd->callback([&, opts, dim, n, draws]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      const double threshold = 1e-8 * opts->tolerance;
      if (sc) {
        sc->require_ok();
        const CodimOneData& cd = sc->need_codim1();
        const int nn = *n >= 0 ? *n : (sc->dim - 1) / 2;
        const Cplx v = rho_imag_gv(cd, nn);
        const double gv_int = gv_form(cd, nn).integrate_top().real();
        const double residual = gv_chernweil_identity(cd.omega, nn);
        finish(env, "gv-check",
               json{{"n", nn}, {"tolerance", opts->tolerance}}, sc);
        env.results = {{"rho_imag", cplx_to_json(v)},
                       {"gv_integral", gv_int},
                       {"form_identity_residual", residual},
                       {"threshold", threshold}};
        env.provenance = {
            {"identity",
             "ch~_{2n+2}(d+omega, d-omega) = 2 (-1)^{n+1} / "
             "((2 pi i)^{n+1} (n+1)!) omega /\\ (d omega)^n"},
            {"mode", "scene"}};
        if (residual > threshold) pending_exit = 3;
      } else {
        const int nn = *n >= 0 ? *n : (*dim - 1) / 2;
        std::mt19937_64 rng(opts->seed);
        std::vector<double> residuals;
        double worst = 0.0;
        for (int i = 0; i < *draws; ++i) {
          const Form omega = random_real_one_form(*dim, rng);
          const double res = gv_chernweil_identity(omega, nn);
          residuals.push_back(res);
          worst = std::max(worst, res);
        }
        finish(env, "gv-check",
               json{{"dim", *dim},
                    {"n", nn},
                    {"draws", *draws},
                    {"seed", opts->seed},
                    {"tolerance", opts->tolerance}},
               sc);
        env.results = {{"residuals", residuals},
                       {"max_residual", worst},
                       {"threshold", threshold},
                       {"all_below", worst <= threshold}};
        env.provenance = {{"mode", "randomized"},
                          {"form", "bandwidth-1 random real 1-forms"}};
        if (worst > threshold) pending_exit = 3;
      }
    });
  }

  // --- e-rel ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "e-rel",
        "Relative e-invariant of framings[1] against framings[0], paired "
        "with the Chern character of the auxiliary bundle");
    auto opts = std::make_shared<CommonOpts>();
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      sc->require_ok();
      if (sc->framings.size() < 2)
        throw ValidationError("e-rel: the scene must provide two framings");
      const Connection& u =
          sc->u_bundle ? sc->need_u_bundle() : sc->need_bundle();
      const CharForm u_ch = chern_character(u);
      std::vector<double> reparam = {0.0, 1.0};
      if (sc->params.contains("reparam"))
        reparam = sc->params.at("reparam").get<std::vector<double>>();
      const Cplx v =
          e_relative(sc->framings[1], sc->framings[0], u_ch, reparam);
      finish(env, "e-rel", json{{"tolerance", opts->tolerance}}, sc);
      env.results = {{"value", cplx_to_json(v)},
                     {"real_part", v.real()},
                     {"imag_part", v.imag()}};
      env.provenance = {
          {"pairing", "[ integrate_top( A-hat~(s1, s0) /\\ ch(u) ) ] in C/Z"},
          {"u_source", sc->u_bundle ? "u_bundle" : "bundle"},
          {"reparam", reparam}};
    });
  }

  // --- eta -----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "eta",
        "Eta invariant of an arithmetic-progression spectrum (closed form, "
        "optionally cross-checked by numerical continuation)");
    auto opts = std::make_shared<CommonOpts>();
    auto a = std::make_shared<double>(0.5);
    auto sigma = std::make_shared<double>(1.0);
    auto numeric = std::make_shared<bool>(false);
    cmd->add_option("--a", *a, "Offset of the progression sigma (n + a)");
    cmd->add_option("--sigma", *sigma, "Scale of the progression")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--numeric", *numeric,
                  "Also run the extrapolated continuation and compare");
    add_common(cmd, *opts, /*scene_required=*/false);
    cmd->callback([&, opts, a, sigma, numeric]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      SpectrumSpec spec;
      if (sc && sc->params.contains("spectrum")) {
        spec = SpectrumSpec::from_json(sc->params.at("spectrum"));
      } else {
        spec.base.a = *a;
        spec.base.sigma = *sigma;
      }
      const EtaResult ar = eta_arith(spec);
      finish(env, "eta",
             json{{"a", spec.base.a},
                  {"sigma", spec.base.sigma},
                  {"numeric", *numeric},
                  {"tolerance", opts->tolerance}},
             sc);
      env.results = ar.to_json();
      env.provenance = {{"spectrum", spec.to_json()}};
      if (*numeric) {
        const EtaResult nr = eta_numeric(spec);
        env.results["numeric"] = nr.to_json();
        const double dis = std::abs(ar.eta0 - nr.eta0);
        env.results["eta0_disagreement"] = dis;
        env.results["xi_circle_distance"] = circle_distance(ar.xi, nr.xi);
        if (dis > 1e-6 * opts->tolerance) pending_exit = 3;
      }
    });
  }

  // --- chern ---------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "chern", "Chern character forms of the scene's main bundle");
    auto opts = std::make_shared<CommonOpts>();
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      sc->require_ok();
      const CharForm ch =
          chern_character(sc->need_bundle(), 1e-10 * opts->tolerance);
      finish(env, "chern", json{{"tolerance", opts->tolerance}}, sc);
      env.results = ch.to_json();
      env.provenance = {{"closedness", "each entry verified closed"}};
    });
  }

  // --- ahat ----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "ahat",
        "A-hat form of the scene's normal bundle (or main bundle if no "
        "normal bundle is given); requires a real connection");
    auto opts = std::make_shared<CommonOpts>();
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      sc->require_ok();
      const Connection& c =
          sc->normal_bundle ? sc->need_normal_bundle() : sc->need_bundle();
      const CharForm a = ahat_form(c, 1e-10 * opts->tolerance);
      finish(env, "ahat", json{{"tolerance", opts->tolerance}}, sc);
      env.results = a.to_json();
      env.provenance = {
          {"source", sc->normal_bundle ? "normal_bundle" : "bundle"},
          {"series", "A-hat genus on Pontryagin forms"}};
    });
  }

  // --- transgress ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "transgress",
        "Metric transgression ch~(c, c*) of the scene's main bundle");
    auto opts = std::make_shared<CommonOpts>();
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      sc->require_ok();
      const Connection& c = sc->need_bundle();
      const HermMetric& h = sc->need_metric();
      const CharForm t = transgress_ch(c, adjoint(c, h));
      finish(env, "transgress", json{{"tolerance", opts->tolerance}}, sc);
      env.results = t.to_json();
      env.provenance = {
          {"path", "linear interpolation from the metric adjoint"},
          {"differential", "d ch~(c, c*) = ch(c) - ch(c*)"}};
    });
  }

  // --- bordism-integrand -----------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "bordism-integrand",
        "Even-dimensional filtered integrand: A-hat^-(normal) /\\ "
        "ch^-(bundle) against the scene's foliation, reduced mod Z");
    auto opts = std::make_shared<CommonOpts>();
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      sc->require_ok();
      const PartialConnection& pc = sc->need_partial();
      const Connection& c = sc->need_bundle();
      const Connection& cF = sc->need_normal_bundle();
      const Cplx v = bordism_integrand(pc, c, cF, 1e-9 * opts->tolerance);
      finish(env, "bordism-integrand", json{{"tolerance", opts->tolerance}},
             sc);
      env.results = {{"value", cplx_to_json(v)},
                     {"real_part", v.real()},
                     {"imag_part", v.imag()}};
      env.provenance = {
          {"filtration", "DD_MINUS against the scene foliation"},
          {"codim", pc.F.codim()},
          {"note",
           "the top component vanishes identically when 2 codim < dim"}};
    });
  }

  // --- wo-betti --------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "wo-betti",
        "Rational cohomology ranks of the truncated algebra WO_q, with "
        "representative cycles; reports both truncation modes when they "
        "differ");
    auto opts = std::make_shared<CommonOpts>();
    auto q = std::make_shared<int>(1);
    auto maxdeg = std::make_shared<int>(-1);
    cmd->add_option("--q", *q, "Truncation order")->check(CLI::PositiveNumber);
    cmd->add_option("--max-degree", *maxdeg,
                    "Highest cohomological degree (default 2q+1)");
    add_common(cmd, *opts, /*scene_required=*/false);
    cmd->callback([&, opts, q, maxdeg]() {
      json_out = opts->json_out;
      const int md = *maxdeg >= 0 ? *maxdeg : 2 * *q + 1;
      const CohomologyReport inc = wo_cohomology(*q, md, /*inclusive=*/true);
      const CohomologyReport str = wo_cohomology(*q, md, /*inclusive=*/false);
      finish(env, "wo-betti",
             json{{"q", *q}, {"max_degree", md},
                  {"tolerance", opts->tolerance}},
             std::nullopt);
      const bool differ = inc.betti != str.betti;
      env.results = {{"inclusive", inc.to_json()},
                     {"truncation_modes_differ", differ}};
      if (differ) env.results["strict"] = str.to_json();
      env.provenance = {
          {"method", "exact rational Gaussian elimination"},
          {"truncation",
           "inclusive: c-part degree <= 2q; strict: c-part degree < 2q"}};
    });
  }

  // --- wo-universal ----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "wo-universal",
        "Universal degree-dim class U in WO_q (verified to be a cycle)");
    auto opts = std::make_shared<CommonOpts>();
    auto q = std::make_shared<int>(2);
    auto dim = std::make_shared<int>(5);
    cmd->add_option("--q", *q, "Truncation order")->check(CLI::PositiveNumber);
    cmd->add_option("--dim", *dim, "Odd target degree, > 2q")
        ->check(CLI::PositiveNumber);
    add_common(cmd, *opts, /*scene_required=*/false);
    cmd->callback([&, opts, q, dim]() {
      json_out = opts->json_out;
      const WOElement u = universal_class(*q, *dim);
      finish(env, "wo-universal",
             json{{"q", *q}, {"dim", *dim}, {"tolerance", opts->tolerance}},
             std::nullopt);
      env.results = {{"element", u.to_json()},
                     {"string", u.to_string()},
                     {"degree", *dim},
                     {"is_cycle", true}};
      env.provenance = {
          {"construction",
           "[ (sum_{i odd} (-1)^{(i+1)/2} c~_i) A-hat(c_1..c_q) ]_{dim}"}};
    });
  }

  // --- kt-relation -----------------------------------------------------------
  {
    auto* cmd = app.add_subcommand(
        "kt-relation",
        "Residual of the Kamber-Tondeur relation kt_p = 2 i^p Delta(c~_p) "
        "on the scene's normal bundle");
    auto opts = std::make_shared<CommonOpts>();
    auto p = std::make_shared<int>(1);
    cmd->add_option("--p", *p, "Odd generator index")
        ->check(CLI::PositiveNumber);
    add_common(cmd, *opts, /*scene_required=*/true);
    cmd->callback([&, opts, p]() {
      json_out = opts->json_out;
      auto sc = maybe_scene(*opts);
      sc->require_ok();
      const Connection& cF = sc->need_normal_bundle();
      const HermMetric h = sc->normal_metric
                               ? sc->need_normal_metric()
                               : HermMetric::identity(cF.rank);
      const double residual = kt_class_relation(*p, cF, h);
      const double threshold = 1e-8 * opts->tolerance;
      finish(env, "kt-relation",
             json{{"p", *p}, {"tolerance", opts->tolerance}}, sc);
      env.results = {{"p", *p},
                     {"residual", residual},
                     {"threshold", threshold},
                     {"ok", residual <= threshold}};
      env.provenance = {
          {"comparison", "pairings with the constant closed forms"},
          {"relation", "kamber_tondeur(cF,h,p) = 2 i^p Delta(c~_p)"}};
      if (residual > threshold) pending_exit = 3;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  env.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();

  const std::string text = env.to_json().dump(2) + "\n";
  std::cout << text;
  if (!json_out.empty()) {
    std::ofstream f(json_out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open --json-out path " << json_out << "\n";
      return 1;
    }
    f << text;
  }
  std::cerr << "wall_time_ms " << env.wall_time_ms << "\n";
  return pending_exit;
}
