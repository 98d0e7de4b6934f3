// critsense: command-line frontend.

#include "critsense/error.hpp"
#include "critsense/io.hpp"
#include "critsense/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace critsense;

namespace {

struct Options {
  std::string gallery;
  std::string n = "";
  std::string field_json;
  std::string domain;
  int grid = 0;
  double tol = 0;
  double eps = 0;
  double ode_step = 1e-3;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format = "json";
  // flow
  std::string point;
  std::string at;
  int samples = 100;
  std::string trajectory_out;
  // mountain
  std::string p1, p2;
  int knots = 32;
  std::string path_out;
  // sequence
  int k = 2;
  double radius = 0;
  // montecarlo
  std::string config;
  int trials = 0;
};

Vec parse_point(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Usage, "bad coordinate list '" + s + "'");
    }
  }
  if (v.empty()) throw Error(ErrorCode::Usage, "empty coordinate list");
  return Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> v;
  for (double x : parse_point(s)) {
    if (x != std::floor(x) || x < 1) throw Error(ErrorCode::Usage, "n values must be positive integers");
    v.push_back(static_cast<int>(x));
  }
  return v;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Usage, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Usage, path + ": " + e.what());
  }
}

struct Target {
  ScalarField field;
  Domain domain;
  const GalleryEntry* entry = nullptr;
};

Target resolve_target(const Options& o, bool need_member) {
  if (o.gallery.empty() == o.field_json.empty())
    throw Error(ErrorCode::Usage, "give exactly one of --gallery and --field-json");
  std::optional<Domain> override;
  if (!o.domain.empty()) override = Domain::parse(o.domain);
  if (!o.gallery.empty()) {
    const auto& entry = gallery_entry(o.gallery);
    ScalarField f = entry.limit();
    if (need_member && !o.n.empty()) {
      const auto ns = parse_int_list(o.n);
      if (ns.size() != 1) throw Error(ErrorCode::Usage, "--n takes a single value for this command");
      f = entry.family(ns.front());
    }
    return {f, override.value_or(entry.domain), &entry};
  }
  const Json j = o.field_json.front() == '{' ? Json::parse(o.field_json, nullptr, false) : read_json_file(o.field_json);
  if (j.is_discarded()) throw Error(ErrorCode::Usage, "--field-json is not valid JSON");
  auto spec = parse_field_spec(j);
  if (override) spec.domain = override;
  if (!spec.domain) throw Error(ErrorCode::Usage, "--field-json needs a domain (in the field spec or via --domain)");
  if (spec.domain->dim() != spec.field.dim()) throw Error(ErrorCode::Usage, "field and domain dimensions differ");
  return {spec.field, *spec.domain, nullptr};
}

int grid_for(const Options& o, const Target& t) {
  if (o.grid > 0) return o.grid;
  if (t.entry) {
    int n = 1;
    if (!o.n.empty()) {
      const auto ns = parse_int_list(o.n);
      n = *std::max_element(ns.begin(), ns.end());
    }
    return t.entry->grid_hint(n);
  }
  return t.domain.dim() == 1 ? 1024 : t.domain.dim() == 2 ? 128 : 24;
}

Json base_config(const std::string& command, const Options& o, const Target* t) {
  Json c{{"command", command}, {"version", std::string(kVersion)}};
  if (!o.gallery.empty()) c["gallery"] = o.gallery;
  if (!o.field_json.empty()) c["field_json"] = o.field_json;
  if (!o.n.empty()) c["n"] = o.n;
  if (t) {
    c["field"] = t->field.label();
    c["domain"] = t->domain.to_string();
  }
  c["format"] = o.format;
  return c;
}

DetectorOptions detector_for(const Options& o, const Target& t) {
  DetectorOptions d;
  d.grid_res = grid_for(o, t);
  if (o.tol > 0) d.newton_tol = o.tol;
  d.eps = o.eps;
  return d;
}

Json detector_json(const DetectorOptions& d) {
  return Json{{"grid", d.grid_res},
              {"newton_tol", num(d.newton_tol)},
              {"max_iter", d.max_iter},
              {"dedupe_cells", num(d.dedupe_cells)},
              {"boundary_margin_cells", num(d.boundary_margin_cells)},
              {"eps", num(d.eps)},
              {"degeneracy_tol", num(d.degeneracy_tol)}};
}

struct Output {
  Json json;
  std::string csv;
};

void emit(const Options& o, const Output& out) {
  const std::string text = o.format == "csv" ? out.csv : dump(out.json);
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::Usage, "cannot write " + o.out);
  f << text;
}

void write_side_file(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Usage, "cannot write " + path);
  f << text;
}

Output cmd_classify(const Options& o) {
  const auto t = resolve_target(o, true);
  const auto d = detector_for(o, t);
  const auto r = find_critical_points(t.field, t.domain, d);
  Json config = base_config("classify", o, &t);
  config["detector"] = detector_json(d);
  return {Json{{"config", config}, {"result", to_json(r)}}, points_csv(r.points)};
}

Output cmd_audit(const Options& o) {
  const auto t = resolve_target(o, true);
  AuditOptions a;
  a.detector = detector_for(o, t);
  if (o.seed_set) a.boundary.seed = o.seed;
  const auto r = poincare_hopf_audit(t.field, t.domain, a);
  Json config = base_config("audit", o, &t);
  config["detector"] = detector_json(a.detector);
  config["boundary"] = Json{{"samples", a.boundary.n_samples},
                            {"perturbation_scale", num(a.boundary.perturbation_scale)},
                            {"seed", a.boundary.seed}};
  std::ostringstream csv;
  csv << "boundary,index,weight,contribution,point\n";
  for (const auto& e : r.per_point) {
    csv << (e.boundary ? 1 : 0) << ',' << e.index << ',' << e.weight.to_string() << ','
        << e.contribution().to_string() << ',';
    for (Eigen::Index k = 0; k < e.point.size(); ++k) csv << (k ? " " : "") << format_double(e.point[k]);
    csv << '\n';
  }
  csv << "total,,,," << r.total.to_string() << '\n';
  return {Json{{"config", config}, {"result", to_json(r)}}, csv.str()};
}

Output cmd_flow(const Options& o) {
  const auto t = resolve_target(o, true);
  Vec p;
  if (!o.point.empty()) {
    p = refine_newton(t.field, parse_point(o.point), o.tol > 0 ? o.tol : 1e-12, 100);
  } else {
    auto d = detector_for(o, t);
    const auto r = find_critical_points(t.field, t.domain, d);
    const auto it = std::find_if(r.points.begin(), r.points.end(), [](const CriticalPoint& c) {
      return c.morse_index.has_value() && !c.near_boundary;
    });
    if (it == r.points.end()) throw Error(ErrorCode::NotMorse, "no interior Morse point found; pass --point");
    p = it->location;
  }
  RadiusOptions ro;
  ro.ode_step = o.ode_step;
  FlowChart chart = morse_chart(t.field, p, ro);
  const auto report = verify_morse_chart(t.field, chart, o.samples);
  Vec x = chart.center;
  if (!o.at.empty()) x = parse_point(o.at);
  else x[0] += 0.5 * chart.r;
  const auto trajectory = morse_flow_trajectory(t.field, chart, x);
  write_side_file(o.trajectory_out, trajectory_csv(trajectory));
  Json config = base_config("flow", o, &t);
  config["ode_step"] = num(o.ode_step);
  config["samples"] = o.samples;
  config["m"] = num(ro.m);
  config["trajectory_start"] = to_json(x);
  Json result{{"chart", to_json(chart)}, {"verification", to_json(report)}, {"gamma", to_json(trajectory.back().second)}};
  return {Json{{"config", config}, {"result", result}}, trajectory_csv(trajectory)};
}

Output cmd_mountain(const Options& o) {
  const auto t = resolve_target(o, true);
  Vec p1, p2;
  if (!o.p1.empty() && !o.p2.empty()) {
    p1 = parse_point(o.p1);
    p2 = parse_point(o.p2);
  } else if (o.p1.empty() && o.p2.empty()) {
    auto d = detector_for(o, t);
    auto r = find_critical_points(t.field, t.domain, d);
    std::vector<CriticalPoint> maxima;
    for (const auto& c : r.points)
      if (c.classification.kind == PointKind::Max) maxima.push_back(c);
    if (maxima.size() < 2) throw Error(ErrorCode::Precondition, "fewer than two local maxima found; pass --p1 and --p2");
    std::stable_sort(maxima.begin(), maxima.end(),
                     [](const CriticalPoint& a, const CriticalPoint& b) { return a.value > b.value; });
    p1 = maxima[0].location;
    p2 = maxima[1].location;
  } else {
    throw Error(ErrorCode::Usage, "give both --p1 and --p2 or neither");
  }
  PassOptions po;
  po.path.n_knots = o.knots;
  if (o.tol > 0) po.pass_tol = o.tol;
  const auto r = mountain_pass_point(t.field, t.domain, p1, p2, po);
  write_side_file(o.path_out, path_csv(r.path, t.field));
  Json config = base_config("mountain", o, &t);
  config["p1"] = to_json(p1);
  config["p2"] = to_json(p2);
  config["knots"] = po.path.n_knots;
  config["iters"] = po.path.iters;
  config["pass_tol"] = num(po.pass_tol);
  Json path = Json::array();
  for (const auto& v : r.path) path.push_back(to_json(v));
  Json result = to_json(r);
  result["path"] = path;
  return {Json{{"config", config}, {"result", result}}, path_csv(r.path, t.field)};
}

Output cmd_sequence(const Options& o) {
  if (o.gallery.empty()) throw Error(ErrorCode::Usage, "sequence needs --gallery");
  const auto& entry = gallery_entry(o.gallery);
  const auto ns = o.n.empty() ? std::vector<int>{4, 16, 64} : parse_int_list(o.n);
  const Domain domain = o.domain.empty() ? entry.domain : Domain::parse(o.domain);
  if (domain.dim() != entry.dim) throw Error(ErrorCode::Usage, "domain dimension does not match the family");
  SequenceOptions so;
  so.k = o.k;
  so.grid_override = o.grid;
  if (o.tol > 0) so.newton_tol = o.tol;
  so.matching_radius = o.radius;
  const auto r = convergence_experiment(entry, ns, domain, so);
  Json config = base_config("sequence", o, nullptr);
  config["domain"] = domain.to_string();
  Json nl = Json::array();
  for (int n : ns) nl.push_back(n);
  config["n_list"] = nl;
  config["k"] = so.k;
  config["grid"] = so.grid_override > 0 ? Json(so.grid_override) : Json("family hint");
  config["newton_tol"] = num(so.newton_tol);
  config["boundary_threshold"] = num(so.boundary_threshold);
  config["resolution_threshold"] = num(so.resolution_threshold);
  config["matching_radius"] = so.matching_radius > 0 ? num(so.matching_radius) : Json("default");
  return {Json{{"config", config}, {"result", to_json(r)}}, sequence_csv(r)};
}

Output cmd_montecarlo(const Options& o) {
  MonteCarloConfig c = o.config.empty() ? MonteCarloConfig{} : parse_montecarlo_config(read_json_file(o.config));
  if (!o.n.empty()) c.n_list = parse_int_list(o.n);
  if (o.seed_set) c.seed = o.seed;
  if (o.trials > 0) c.trials = o.trials;
  if (o.grid > 0) c.grid = o.grid;
  const auto r = monte_carlo_convergence(c);
  Json config = base_config("montecarlo", o, nullptr);
  config["experiment"] = to_json(c);
  return {Json{{"config", config}, {"result", to_json(r)}}, montecarlo_csv(r)};
}

Output cmd_gallery(const Options& o) {
  Json entries = Json::array();
  std::ostringstream csv;
  csv << "name,dim,provenance,domain\n";
  for (const auto& e : gallery_catalogue()) {
    if (!o.gallery.empty() && e.name != o.gallery) continue;
    entries.push_back(to_json(e));
    csv << e.name << ',' << e.dim << ',' << to_string(e.provenance) << ",\"" << e.domain.to_string() << "\"\n";
  }
  if (!o.gallery.empty() && entries.empty()) gallery_entry(o.gallery);  // throws Catalogue
  return {Json{{"config", base_config("gallery", o, nullptr)}, {"result", Json{{"entries", entries}}}}, csv.str()};
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::Usage || code == ErrorCode::Catalogue ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points of scalar fields under convergence", "critsense"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool n_list) {
    sub->add_option("--gallery", o.gallery, "gallery family name");
    sub->add_option("--n", o.n, n_list ? "comma-separated member indices" : "member index (default: the limit)");
    sub->add_option("--field-json", o.field_json, "field spec: JSON file or inline object");
    sub->add_option("--domain", o.domain, "interval:a,b | box:lo1,lo2:hi1,hi2 | ball:cx,cy:r");
    sub->add_option("--grid", o.grid, "grid cells per axis")->check(CLI::PositiveNumber);
    sub->add_option("--tol", o.tol, "tolerance (Newton; pass certificate for mountain)")->check(CLI::PositiveNumber);
    sub->add_option("--eps", o.eps, "fixed index radius")->check(CLI::NonNegativeNumber);
    sub->add_option("--ode-step", o.ode_step, "RK4 step")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "seed")->each([&](const std::string&) { o.seed_set = true; });
    sub->add_option("--out", o.out, "output path (default stdout)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* classify = app.add_subcommand("classify", "detect and classify critical points");
  common(classify, false);
  auto* audit = app.add_subcommand("audit", "Poincare-Hopf audit");
  common(audit, false);
  auto* flow = app.add_subcommand("flow", "Morse chart by the homotopy flow");
  common(flow, false);
  flow->add_option("--point", o.point, "critical point seed x,y,...");
  flow->add_option("--at", o.at, "trajectory start x,y,... (absolute coordinates)");
  flow->add_option("--samples", o.samples, "verification samples")->check(CLI::PositiveNumber);
  flow->add_option("--trajectory-out", o.trajectory_out, "trajectory CSV path");
  auto* mountain = app.add_subcommand("mountain", "mountain pass between two maxima");
  common(mountain, false);
  mountain->add_option("--p1", o.p1, "first maximum x,y");
  mountain->add_option("--p2", o.p2, "second maximum x,y");
  mountain->add_option("--knots", o.knots, "interior path knots")->check(CLI::PositiveNumber);
  mountain->add_option("--path-out", o.path_out, "path CSV path");
  auto* sequence = app.add_subcommand("sequence", "convergence experiment over a gallery family");
  common(sequence, true);
  sequence->add_option("--k", o.k, "C^k distance order")->check(CLI::Range(0, 2));
  sequence->add_option("--radius", o.radius, "matching radius")->check(CLI::PositiveNumber);
  auto* montecarlo = app.add_subcommand("montecarlo", "Monte Carlo convergence of random fields");
  common(montecarlo, true);
  montecarlo->add_option("--config", o.config, "experiment JSON");
  montecarlo->add_option("--trials", o.trials, "trial count")->check(CLI::PositiveNumber);
  auto* gallery_cmd = app.add_subcommand("gallery", "list the gallery");
  common(gallery_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Output out;
    if (*classify) out = cmd_classify(o);
    else if (*audit) out = cmd_audit(o);
    else if (*flow) out = cmd_flow(o);
    else if (*mountain) out = cmd_mountain(o);
    else if (*sequence) out = cmd_sequence(o);
    else if (*montecarlo) out = cmd_montecarlo(o);
    else out = cmd_gallery(o);
    emit(o, out);
    return 0;
  } catch (const Error& e) {
    Json err{{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"version", std::string(kVersion)}};
    if (const auto* nc = dynamic_cast<const NoConvergence*>(&e)) {
      err["best"] = to_json(nc->best());
      err["best_grad_norm"] = num(nc->best_grad_norm());
    }
    if (const auto* us = dynamic_cast<const UnderSampled*>(&e)) err["suggested_samples"] = us->suggested_samples();
    std::cerr << dump(err);
    return exit_code_for(e.code());
  } catch (const Json::exception& e) {
    std::cerr << dump(Json{{"error", "Usage"}, {"message", e.what()}, {"version", std::string(kVersion)}});
    return 2;
  }
}
