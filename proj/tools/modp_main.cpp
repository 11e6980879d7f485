#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include "modp/books.hpp"
#include "modp/chain.hpp"
#include "modp/complex_io.hpp"
#include "modp/cone1d.hpp"
#include "modp/flat.hpp"
#include "modp/json_util.hpp"
#include "modp/mesh.hpp"
#include "modp/monotonicity.hpp"
#include "modp/network.hpp"
#include "modp/sample.hpp"
#include "modp/taylor.hpp"
#include "modp/whitney.hpp"

using namespace modp;

namespace {

constexpr const char* kVersion = "1.0.0";

json meta(const std::string& command, json conventions) {
  return json{{"tool", "modp"},
              {"version", kVersion},
              {"command", command},
              {"float_format", "shortest round-trip (<= 17 significant digits)"},
              {"conventions", std::move(conventions)}};
}

// Fixture bundles hold several sections; plain files are the section itself.
json section(const json& j, const char* key) { return j.is_object() && j.contains(key) ? j.at(key) : j; }

void emit(const std::string& out, const json& j) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json_file(out, j);
  }
}

Vec parse_point(const std::string& text) {
  const std::vector<double> v = parse_double_list(text);
  Vec q(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) q[static_cast<Eigen::Index>(i)] = v[i];
  return q;
}

// Sample from a sample file or a Taylor surface file.
VarifoldSample load_sample(const std::string& path) {
  const json j = read_json_file(path);
  if (j.contains("generator")) return revolved_from_json(j).sample;
  return sample_from_json(section(j, "sample"));
}

struct Options {
  std::string out;
  // flat-norm / plateau
  std::string complex_path, chain_path, region_path, boundary_path, method = "auto";
  int64_t p = 3;
  bool oracle = false;
  // classify-cone
  std::string config_path;
  // solve-network / taylor
  std::string terminals_path, weight = "euclidean", taylor_weight = "x", angles = "-40,0,40";
  uint64_t seed = 0;
  int restarts = 3;
  double radius = 1.0, delta = 0.005, mesh_check = 0.0;
  // decay-scan
  std::string surface_path, radii = "0.2,0.1,0.05,0.025", csv;
  int circle = 0;
  double phi = 0.0, flat_h = 0.1, strip_width = 0.12;
  bool no_flat = false;
  // whitney
  int m = 2, M = 2, depth = 8, kappa0 = 0;
  double tau = 0.05, scale = 0.02;
  std::string excess_from;
  // monotonicity / books
  std::string sample_path, center = "0,0,0", book_path, cone_path, reference_path, cutoff, ball_radii = "1";
  double alpha = 1.0, R1 = 1.0;
  int k = 1;
  bool no_rotation = false;
  // make-fixture
  std::string fixture;
  double h = 0.1, tilt = 0.1, offset = 0.3;
};

int run_flat_norm(const Options& o) {
  const SimplicialComplex K = complex_from_json(section(read_json_file(o.complex_path), "complex"));
  const IntegerChain T = chain_from_json(section(read_json_file(o.chain_path), "chain"));
  const Region W = o.region_path.empty() ? Region::whole()
                                         : region_from_json(K, section(read_json_file(o.region_path), "region"));
  const FlatDecomposition f = flat_norm_modp(K, T, o.p, W);
  json j{{"value", f.value},
         {"witness", {{"R", chain_to_json(f.R)}, {"Z", chain_to_json(f.Z)}, {"P", chain_to_json(f.P)}}},
         {"gap", f.gap},
         {"nodes", f.nodes},
         {"p", o.p}};
  if (o.oracle) j["oracle"] = brute_force_flat_oracle(K, T, o.p, o.p / 2, W);
  j["meta"] = meta("flat-norm", {{"coefficient_representatives", "(-p/2, p/2]"},
                                 {"region", o.region_path.empty() ? "whole complex" : o.region_path},
                                 {"oracle_bound", o.oracle ? json(o.p / 2) : json(nullptr)}});
  emit(o.out, j);
  return 0;
}

int run_plateau(const Options& o) {
  const SimplicialComplex K = complex_from_json(section(read_json_file(o.complex_path), "complex"));
  const IntegerChain b = chain_from_json(section(read_json_file(o.boundary_path), "boundary"));
  PlateauMethod method = PlateauMethod::kAuto;
  if (o.method == "ilp") method = PlateauMethod::kIlp;
  else if (o.method == "graph") method = PlateauMethod::kGraph;
  else if (o.method != "auto") throw ValidationError("unknown method '" + o.method + "' (auto, ilp, graph)");
  const PlateauSolution s = plateau_modp(K, reduce_modp(b, o.p), method);
  json j{{"mass", s.mass},
         {"chain", chain_to_json(s.chain)},
         {"method", s.method},
         {"gap", s.optimality_gap},
         {"nodes", s.nodes},
         {"p", o.p}};
  j["meta"] = meta("plateau", {{"method_requested", o.method}});
  emit(o.out, j);
  return 0;
}

int run_classify_cone(const Options& o) {
  RayConfiguration cfg = rays_from_json(read_json_file(o.config_path));
  cfg.p = o.p;
  const StructureReport r = check_structure(cfg);
  json certs = json::array();
  for (std::size_t i = 0; i < cfg.dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.dirs.size(); ++j) {
      if (cfg.signs[i] == cfg.signs[j] || (cfg.dirs[i] + cfg.dirs[j]).norm() < 1e-12) continue;
      certs.push_back(certificate_to_json(segment_swap_certificate(cfg, i, j)));
      i = j = cfg.dirs.size();
    }
  }
  if (cfg.total() >= 2 * cfg.p) {
    certs.push_back(certificate_to_json(barycenter_certificate(cfg, find_heavy_hemisphere(cfg))));
  }
  json j{{"structure", structure_to_json(r)},
         {"all_flags", r.all()},
         {"failures", r.failures()},
         {"certificates", certs},
         {"p", cfg.p}};
  j["meta"] = meta("classify-cone", {{"balance_tolerance", 1e-9},
                                     {"segment_swap", "first mixed-sign non-antipodal pair"},
                                     {"hemisphere", "find_heavy_hemisphere"}});
  emit(o.out, j);
  return 0;
}

int run_solve_network(const Options& o) {
  const std::vector<Terminal> t = terminals_from_json(section(read_json_file(o.terminals_path), "terminals"));
  NetworkOptions opt;
  opt.seed = o.seed;
  opt.restarts = o.restarts;
  const WeightedNetwork n = solve_network(t, o.p, WeightedMetric::parse(o.weight), opt);
  json j = network_to_json(n);
  j["meta"] = meta("solve-network", {{"seed", o.seed},
                                     {"restarts", o.restarts},
                                     {"weight", o.weight},
                                     {"newton_tolerance", 1e-10},
                                     {"tie_break", "lexicographic topology encoding"}});
  emit(o.out, j);
  return 0;
}

int run_taylor(const Options& o) {
  TaylorOptions opt;
  opt.delta = o.delta;
  opt.network.seed = o.seed;
  opt.network.restarts = o.restarts;
  const RevolvedCurrent R =
      build_taylor_example(o.p, parse_double_list(o.angles), o.radius, WeightedMetric::parse(o.taylor_weight), opt);
  json j = revolved_to_json(R);
  if (o.mesh_check > 0) {
    const MeshCrossCheck c = taylor_mesh_crosscheck(R, o.mesh_check);
    j["mesh_crosscheck"] = {{"network_mass", c.network_mass}, {"mesh_mass", c.mesh_mass}, {"h", c.h}, {"edges", c.edges}};
  }
  j["meta"] = meta("taylor", {{"seed", o.seed},
                              {"weight", o.taylor_weight},
                              {"delta", o.delta},
                              {"revolution", "(x, y) -> (x cos phi, x sin phi, y)"},
                              {"sample", "regenerated from the generator on load"}});
  emit(o.out, j);
  return 0;
}

int run_decay_scan(const Options& o) {
  const RevolvedCurrent R = revolved_from_json(read_json_file(o.surface_path));
  if (o.circle < 0 || o.circle >= static_cast<int>(R.circles.size())) throw ValidationError("no such singular circle");
  const Vec q = circle_point(R.circles[o.circle], o.phi);
  DecayOptions opt;
  opt.flat = !o.no_flat;
  opt.flat_h = o.flat_h;
  opt.strip_width = o.strip_width;
  const DecayScan d = decay_scan(R, q, parse_double_list(o.radii), opt);
  if (!o.csv.empty()) write_text_file(o.csv, decay_to_csv(d));
  json j = decay_to_json(d);
  j["center"] = vec_to_json(q);
  j["meta"] = meta("decay-scan", {{"circle", o.circle},
                                  {"phi", o.phi},
                                  {"flat", opt.flat},
                                  {"flat_h", o.flat_h},
                                  {"strip_width", o.strip_width},
                                  {"fit", "C = max(1, ratio at the second rung)"}});
  emit(o.out, j);
  return 0;
}

int run_whitney(const Options& o) {
  const WhitneyDecomposition D(o.m, o.M, o.depth);
  RevolvedCurrent R;
  OpenBook S;
  ExcessOracle oracle = [](const Vec&, double) { return 0.0; };
  if (!o.excess_from.empty()) {
    if (o.m != 2) throw ValidationError("surface oracles need m = 2");
    R = revolved_from_json(read_json_file(o.excess_from));
    if (o.circle < 0 || o.circle >= static_cast<int>(R.circles.size())) throw ValidationError("no such singular circle");
    S = tangent_book(R.circles[o.circle], o.phi);
    oracle = sample_excess_oracle(R.sample, S, circle_point(R.circles[o.circle], o.phi), o.scale);
  }
  const WhitneyDomain W = whitney_domain(oracle, o.tau, D);
  if (!o.csv.empty()) write_text_file(o.csv, domain_to_csv(W));

  json layers = json::array();
  for (int k = 0; k < D.depth(); ++k) {
    std::size_t members = 0;
    for (const auto& [j, in] : W.member[k]) members += in ? std::size_t(D.rows()) : 0;
    layers.push_back({{"k", k}, {"cubes", D.layer_count(k)}, {"members", members}, {"side", std::ldexp(1.0, -D.exponent(k))}});
  }
  json rho = json::array();
  for (int i = 0; i <= 64; ++i) {
    Vec y = Vec::Zero(D.m() - 1);
    y[0] = -2.0 + 4.0 * i / 64.0;
    rho.push_back({{"y", y[0]}, {"rho", rho_W(W, y)}});
  }
  json j{{"m", o.m}, {"M", o.M}, {"depth", o.depth}, {"tau", o.tau}, {"Mbar", W.Mbar},
         {"layers", layers}, {"members", W.size()}, {"rho", rho}};
  if (o.kappa0 > 0) {
    WhitneyCube top{0, D.rows() - 1, std::vector<int64_t>(D.m() - 1, D.positions(0) / 2)};
    bool found = W.contains(top);
    for (const auto& Q : W.cubes()) {
      if (found) break;
      if (D.in_top_sublayer(Q)) {
        top = Q;
        found = true;
      }
    }
    if (!found) {
      j["selection"] = {{"skipped", "no member cube in the top sub-layer"}};
    } else {
    std::mt19937_64 rng(o.seed);
    std::map<WhitneyCube, int> hbar;
    for (const auto& Q : W.cubes()) hbar[Q] = 1 + static_cast<int>(rng() % static_cast<uint64_t>(o.kappa0));
    const SelectionReport s = global_selection(W, hbar, top, o.kappa0);
    j["selection"] = {{"kappa0", o.kappa0},
                      {"top", cube_to_json(D, top)},
                      {"p1", s.p1},
                      {"p2", s.p2},
                      {"p3", s.p3},
                      {"worst_ratio", s.worst_ratio},
                      {"bound_below_top", s.bound_below_top},
                      {"bound_top", s.bound_top},
                      {"bound_holds", s.bound_holds}};
    }
  }
  j["meta"] = meta("whitney", {{"oracle", o.excess_from.empty() ? "zero" : "surface excess against the tangent book"},
                               {"oracle_scale", o.scale},
                               {"circle", o.circle},
                               {"phi", o.phi},
                               {"seed", o.seed},
                               {"top_sublayer_path", "BFS shortest path, lexicographically smallest positions"},
                               {"rho_empty", 2.0},
                               {"p3_checked", "only where hbar changes"}});
  emit(o.out, j);
  return 0;
}

int run_monotonicity(const Options& o) {
  const VarifoldSample T = load_sample(o.sample_path);
  const Vec c = parse_point(o.center);
  const std::vector<double> radii = parse_double_list(o.radii);
  json j;
  MonotonicityReport rep;
  if (T.has_tangents()) {
    HomogeneousFunction g;
    g.k = o.k;
    g.ghat = [](const Vec&) { return 1.0; };
    rep = weighted_monotonicity_check(T, c, g, o.alpha, o.R1, 0.0, radii);
    j = monotonicity_to_json(rep);
  } else {
    rep.center = c;
    rep.radii = radii;
    rep.density = density_profile(T, c, radii);
    j = {{"center", vec_to_json(c)}, {"radii", radii}, {"density", rep.density}, {"weighted", nullptr}};
  }
  j["nondecreasing"] = profile_nondecreasing(rep.density, 3 * T.delta);
  if (!o.cone_path.empty()) {
    const VarifoldSample C = load_sample(o.cone_path);
    RadialProfile f = RadialProfile::constant(1.0);
    if (!o.cutoff.empty()) {
      const std::vector<double> ab = parse_double_list(o.cutoff);
      if (ab.size() != 2) throw ValidationError("--cutoff needs a,b");
      f = RadialProfile::smooth_cutoff(ab[0], ab[1]);
    }
    j["cone_comparison"] = cone_comparison_to_json(cone_comparison_check(T, C, c, f, o.R1));
  }
  if (!o.csv.empty()) write_text_file(o.csv, monotonicity_to_csv(rep));
  j["meta"] = meta("monotonicity", {{"g", "|q - center|^k"},
                                    {"tolerance", "3 delta ||T||(B_R1)"},
                                    {"curvature_constant", 1.0},
                                    {"profile", o.cutoff.empty() ? "f = 1" : "smooth cutoff " + o.cutoff}});
  emit(o.out, j);
  return 0;
}

int run_excess(const Options& o) {
  const OpenBook S = book_from_json(section(read_json_file(o.book_path), "book"));
  const VarifoldSample T = load_sample(o.sample_path);
  const Vec c = parse_point(o.center);
  const std::vector<double> radii = parse_double_list(o.ball_radii);
  json j{{"center", vec_to_json(c)}, {"radii", radii}, {"excess", excess_ladder(T, S, c, radii)}};
  j["meta"] = meta("excess", {{"normalization", "R^-(m+2) sum w dist^2(x - q, S) over the open ball"}});
  emit(o.out, j);
  return 0;
}

int run_density(const Options& o) {
  const VarifoldSample T = load_sample(o.sample_path);
  const Vec c = parse_point(o.center);
  const std::vector<double> radii = parse_double_list(o.ball_radii);
  json j{{"center", vec_to_json(c)}, {"radii", radii}, {"density", density_profile(T, c, radii)}};
  j["meta"] = meta("density", {{"normalization", "||T||(B_r(q)) / (omega_m r^m), open ball"}});
  emit(o.out, j);
  return 0;
}

int run_coherence(const Options& o) {
  const ConeModP C = cone_from_json(section(read_json_file(o.cone_path), "book"));
  const ConeModP C0 = cone_from_json(section(read_json_file(o.reference_path), "book"));
  const CoherenceResult r = coherence_angle(C, C0, !o.no_rotation);
  json j{{"value", r.value}, {"rotation", r.rotation}, {"max_page_angle", r.max_page_angle}, {"grouping", r.grouping}};
  j["meta"] = meta("coherence", {{"rotation_allowed", !o.no_rotation}});
  emit(o.out, j);
  return 0;
}

const std::vector<std::string> kFixtures{"y120", "p5-balanced", "triangle-complex", "disk-mesh", "taylor-p3",
                                         "tilted-plane"};

int run_make_fixture(const Options& o) {
  json j;
  const std::string& name = o.fixture;
  if (name == "y120" || name == "p5-balanced") {
    RayConfiguration cfg;
    auto at = [](double deg) { return Eigen::Vector2d(std::cos(deg * M_PI / 180), std::sin(deg * M_PI / 180)); };
    if (name == "y120") {
      cfg.p = 3;
      cfg.dirs = {at(90), at(210), at(330)};
      cfg.kappa = {1, 1, 1};
    } else {
      cfg.p = 5;
      cfg.dirs = {at(0), at(180), at(120), at(240)};
      cfg.kappa = {2, 1, 1, 1};
    }
    cfg.signs.assign(cfg.dirs.size(), 1);
    j = rays_to_json(cfg);
  } else if (name == "triangle-complex") {
    const SimplicialComplex K = unit_right_triangle_complex();
    IntegerChain t(2);
    t.set(0, 1);
    j = {{"complex", complex_to_json(K)}, {"chain", chain_to_json(boundary(K, t))}};
  } else if (name == "disk-mesh") {
    const SimplicialComplex K = disk_mesh(o.h);
    double worst = 0.0;
    for (std::size_t e = 0; e < K.count(1); ++e) {
      const Simplex& s = K.simplex(1, e);
      worst = std::max(worst, std::abs(K.volume(1, e) - (K.vertex(s[0]) - K.vertex(s[1])).norm()));
    }
    j = {{"complex", complex_to_json(K)}, {"h", o.h}, {"edge_length_audit", worst}};
  } else if (name == "taylor-p3") {
    TaylorOptions opt;
    opt.delta = o.delta;
    opt.network.seed = o.seed;
    j = revolved_to_json(build_taylor_example(3, {-40, 0, 40}, 1.0, WeightedMetric::parse("x"), opt));
  } else if (name == "tilted-plane") {
    Eigen::MatrixXd B(3, 2);
    B.col(0) << 1, 0, 0;
    B.col(1) << 0, std::cos(o.tilt), std::sin(o.tilt);
    Vec c(3);
    c << 0, o.offset, 0;
    j = {{"sample", sample_to_json(sample_disk(c, B, o.radius + std::abs(o.offset), o.delta))},
         {"tilt", o.tilt},
         {"offset", o.offset}};
  } else {
    std::string list;
    for (const auto& f : kFixtures) list += (list.empty() ? "" : ", ") + f;
    throw ValidationError("unknown fixture '" + name + "'; catalogue: " + list);
  }
  j["meta"] = meta("make-fixture", {{"fixture", name}});
  emit(o.out, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Currents modulo p: flat norms, Plateau problems, cones, the Taylor example and diagnostics"};
  app.set_version_flag("--version", std::string("modp ") + kVersion);
  app.require_subcommand(1);
  Options o;
  std::map<CLI::App*, int (*)(const Options&)> handlers;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--out", o.out, "output JSON path (stdout when omitted)");
    handlers[s] = fn;
    return s;
  };

  auto* flat = sub("flat-norm", "mod-p flat norm of a chain on a complex", run_flat_norm);
  flat->add_option("--complex", o.complex_path)->required();
  flat->add_option("--chain", o.chain_path)->required();
  flat->add_option("--p", o.p);
  flat->add_option("--region", o.region_path);
  flat->add_flag("--oracle", o.oracle, "also run the exhaustive oracle");

  auto* plat = sub("plateau", "mod-p Plateau problem for a boundary class", run_plateau);
  plat->add_option("--complex", o.complex_path)->required();
  plat->add_option("--boundary", o.boundary_path)->required();
  plat->add_option("--p", o.p);
  plat->add_option("--method", o.method, "auto, ilp or graph");

  auto* cone = sub("classify-cone", "structure flags and competitor certificates for a ray cone", run_classify_cone);
  cone->add_option("--config", o.config_path)->required();
  cone->add_option("--p", o.p);

  auto* net = sub("solve-network", "minimal network mod p for weighted terminals", run_solve_network);
  net->add_option("--terminals", o.terminals_path)->required();
  net->add_option("--p", o.p);
  net->add_option("--weight", o.weight, "euclidean, x or sqrtx");
  net->add_option("--seed", o.seed);
  net->add_option("--restarts", o.restarts);

  auto* tay = sub("taylor", "rotationally symmetric singular example", run_taylor);
  tay->add_option("--p", o.p);
  tay->add_option("--angles", o.angles, "boundary angles in degrees, comma separated");
  tay->add_option("--radius", o.radius);
  tay->add_option("--weight", o.taylor_weight, "x or sqrtx");
  tay->add_option("--delta", o.delta);
  tay->add_option("--seed", o.seed);
  tay->add_option("--restarts", o.restarts);
  tay->add_option("--mesh-check", o.mesh_check, "also run the mesh cross-check at this h");

  auto* dec = sub("decay-scan", "excess and flat-distance ladders at a singular circle", run_decay_scan);
  dec->add_option("--surface", o.surface_path)->required();
  dec->add_option("--radii", o.radii);
  dec->add_option("--csv", o.csv);
  dec->add_option("--circle", o.circle);
  dec->add_option("--phi", o.phi);
  dec->add_flag("--no-flat", o.no_flat);
  dec->add_option("--flat-h", o.flat_h);
  dec->add_option("--strip-width", o.strip_width);

  auto* wh = sub("whitney", "Whitney domain, rho_W and the selection bound", run_whitney);
  wh->add_option("--m", o.m);
  wh->add_option("--M", o.M);
  wh->add_option("--depth", o.depth);
  wh->add_option("--tau", o.tau);
  wh->add_option("--excess-from", o.excess_from, "Taylor surface JSON driving the excess oracle");
  wh->add_option("--scale", o.scale, "length of one Whitney unit on the surface");
  wh->add_option("--circle", o.circle);
  wh->add_option("--phi", o.phi);
  wh->add_option("--csv", o.csv);
  wh->add_option("--kappa0", o.kappa0, "run the selection with random choices in 1..kappa0");
  wh->add_option("--seed", o.seed);

  auto* mono = sub("monotonicity", "density profile and monotonicity identities", run_monotonicity);
  mono->add_option("--sample", o.sample_path)->required();
  mono->add_option("--center", o.center);
  mono->add_option("--radii", o.radii);
  mono->add_option("--csv", o.csv);
  mono->add_option("--alpha", o.alpha);
  mono->add_option("--R1", o.R1);
  mono->add_option("--k", o.k);
  mono->add_option("--cone", o.cone_path, "cone sample for the comparison check");
  mono->add_option("--cutoff", o.cutoff, "a,b for the smooth cutoff profile");

  auto* exc = sub("excess", "excess of a sample against an open book", run_excess);
  exc->add_option("--book", o.book_path)->required();
  exc->add_option("--samples", o.sample_path)->required();
  exc->add_option("--center", o.center);
  exc->add_option("--radius", o.ball_radii, "radii, comma separated");

  auto* den = sub("density", "density ratios of a sample", run_density);
  den->add_option("--samples", o.sample_path)->required();
  den->add_option("--center", o.center);
  den->add_option("--radius", o.ball_radii, "radii, comma separated");

  auto* coh = sub("coherence", "coherence angle between two cones", run_coherence);
  coh->add_option("--cone", o.cone_path)->required();
  coh->add_option("--reference", o.reference_path)->required();
  coh->add_flag("--no-rotation", o.no_rotation);

  auto* fix = sub("make-fixture", "write a shipped fixture", run_make_fixture);
  fix->add_option("name", o.fixture)->required();
  fix->add_option("--mesh-h", o.h, "disk-mesh size");
  fix->add_option("--delta", o.delta);
  fix->add_option("--seed", o.seed);
  fix->add_option("--tilt", o.tilt);
  fix->add_option("--offset", o.offset);
  fix->add_option("--radius", o.radius);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (const auto& [s, fn] : handlers) {
      if (s->parsed()) return fn(o);
    }
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  }
}
