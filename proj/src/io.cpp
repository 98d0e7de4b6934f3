#include "critsense/io.hpp"

#include "critsense/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace critsense {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(num(v[i]));
  return out;
}

Json to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vec(m.row(i).transpose())));
  return out;
}

namespace {

Json optional_int(const std::optional<int>& v, std::string_view missing) {
  if (v) return *v;
  return std::string(missing);
}

Json half(const HalfInteger& h) {
  if (h.halves() % 2 == 0) return h.halves() / 2;
  return h.to_string();
}

Json int_map(const std::map<int, int>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

Json index_list(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (auto i : v) out.push_back(i);
  return out;
}

}  // namespace

Json to_json(const CriticalPoint& p) {
  return Json{{"location", to_json(p.location)},
              {"value", num(p.value)},
              {"grad_norm", num(p.grad_norm)},
              {"eigenvalues", to_json(p.eigenvalues)},
              {"morse_index", optional_int(p.morse_index, "Degenerate")},
              {"hom_index", optional_int(p.hom_index, "Unavailable")},
              {"classification", p.classification.to_string()},
              {"near_boundary", p.near_boundary}};
}

Json to_json(const DetectionResult& r) {
  Json points = Json::array();
  for (const auto& p : r.points) points.push_back(to_json(p));
  Json unresolved = Json::array();
  for (const auto& u : r.unresolved) unresolved.push_back(to_json(u));
  return Json{{"count", r.points.size()},
              {"resolution", num(resolution(r.points))},
              {"dedupe_radius", num(r.dedupe_radius)},
              {"boundary_margin", num(r.boundary_margin)},
              {"points", points},
              {"unresolved", unresolved}};
}

Json to_json(const IndexEntry& e) {
  return Json{{"point", to_json(e.point)},
              {"boundary", e.boundary},
              {"index", e.index},
              {"weight", half(e.weight)},
              {"contribution", half(e.contribution())}};
}

Json to_json(const IndexResult& r) {
  Json per_point = Json::array();
  for (const auto& e : r.per_point) per_point.push_back(to_json(e));
  return Json{{"interior_index", r.interior_index},
              {"boundary_index", half(r.boundary_index)},
              {"total", half(r.total)},
              {"euler_target", half(r.euler_target)},
              {"pass", r.pass},
              {"boundary_perturbed", r.boundary_perturbed},
              {"per_point", per_point}};
}

Json to_json(const MorseConstants& k) {
  return Json{{"m", num(k.m)},
              {"norm_h", num(k.norm_h)},
              {"norm_h_inv", num(k.norm_h_inv)},
              {"k1", num(k.k1)},
              {"k2", num(k.k2)}};
}

Json to_json(const FlowChart& c) {
  return Json{{"center", to_json(c.center)},
              {"center_value", num(c.center_value)},
              {"hessian", to_json(c.h)},
              {"r", num(c.r)},
              {"constants", to_json(c.constants)},
              {"lipschitz", num(c.lipschitz)},
              {"c", num(c.c)},
              {"C", num(c.big_c)},
              {"a1", num(c.a1)},
              {"bilip_lower", num(c.bilip_lower())},
              {"bilip_upper", num(c.bilip_upper())},
              {"ode_step", num(c.ode_step)},
              {"residual_sup", num(c.residual_sup)}};
}

Json to_json(const ChartReport& r) {
  return Json{{"samples", r.samples},
              {"residual_sup", num(r.residual_sup)},
              {"bilip_lo", num(r.bilip_lo)},
              {"bilip_hi", num(r.bilip_hi)},
              {"bound_lo", num(r.bound_lo)},
              {"bound_hi", num(r.bound_hi)},
              {"within_bounds", r.within_bounds}};
}

Json to_json(const PassResult& r) {
  Json history = Json::array();
  for (double h : r.history) history.push_back(num(h));
  return Json{{"p3", to_json(r.p3)},
              {"c", num(r.c)},
              {"kind", std::string(to_string(r.kind))},
              {"certificate", num(r.certificate)},
              {"normal_component", num(r.normal_component)},
              {"certified", r.certified},
              {"f_p1", num(r.f_p1)},
              {"f_p2", num(r.f_p2)},
              {"knots", r.path.size()},
              {"history", history}};
}

Json to_json(const CkDistance& d) {
  return Json{{"k", d.k}, {"d0", num(d.d0)}, {"d1", num(d.d1)}, {"d2", num(d.d2)}};
}

Json to_json(const Counts& c) {
  return Json{{"N_C", c.n_c},
              {"N_M", c.n_max},
              {"N_m", c.n_min},
              {"N_S", c.n_saddle},
              {"N_U", c.n_undulation},
              {"N_unclassified", c.n_unclassified},
              {"N_IM", c.improper.maxima},
              {"N_Im", c.improper.minima},
              {"hom", int_map(c.hom)},
              {"morse", int_map(c.morse)},
              {"hom_unavailable", c.hom_unavailable},
              {"morse_degenerate", c.morse_degenerate},
              {"near_boundary", c.near_boundary},
              {"unresolved", c.unresolved}};
}

Json to_json(const Matching& m) {
  Json pairs = Json::array();
  for (const auto& p : m.pairs)
    pairs.push_back(Json{{"n", p.index_n},
                         {"limit", p.index_limit},
                         {"distance", num(p.distance)},
                         {"hom_agree", p.hom_agree},
                         {"morse_agree", p.morse_agree}});
  return Json{{"radius", num(m.radius)},
              {"matched", m.pairs.size()},
              {"unmatched_n", index_list(m.unmatched_n)},
              {"unmatched_limit", index_list(m.unmatched_limit)},
              {"multi_match", m.multi_match},
              {"bijection", m.bijection},
              {"pairs", pairs}};
}

Json to_json(const SequenceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json points = Json::array();
    for (const auto& p : row.points) points.push_back(to_json(p));
    Json j{{"n", row.n}, {"grid", row.grid}};
    if (!row.error.empty()) {
      j["error"] = row.error;
    } else {
      j["distance"] = to_json(row.distance);
      j["counts"] = to_json(row.counts);
      j["resolution"] = num(row.resolution);
      j["boundary_min_gradient"] = num(row.boundary_min_gradient);
      j["matching"] = to_json(row.matching);
      j["points"] = points;
    }
    rows.push_back(j);
  }
  Json limit_points = Json::array();
  for (const auto& p : r.limit_points) limit_points.push_back(to_json(p));
  return Json{{"family", r.family},
              {"domain", r.domain},
              {"rows", rows},
              {"limit",
               Json{{"grid", r.limit_grid},
                    {"counts", to_json(r.limit_counts)},
                    {"resolution", num(r.limit_resolution)},
                    {"boundary_min_gradient", num(r.limit_boundary_min_gradient)},
                    {"points", limit_points}}},
              {"hypotheses", Json{{"boundary_gradient", r.boundary_hypothesis}, {"resolution", r.resolution_hypothesis}}},
              {"conclusions", Json{{"counts_match_at_largest_n", r.counts_match_at_largest},
                                   {"upper_bound", r.upper_bound_holds}}},
              {"multi_match_seen", r.multi_match_seen},
              {"verdict", r.verdict}};
}

Json to_json(const MonteCarloConfig& c) {
  Json n_list = Json::array();
  for (int n : c.n_list) n_list.push_back(n);
  Json j{{"D", c.basis.dim},
         {"degree", c.basis.degree},
         {"decay", num(c.basis.decay)},
         {"noise", num(c.noise)},
         {"n_list", n_list},
         {"trials", c.trials},
         {"seed", c.seed},
         {"grid", c.grid > 0 ? c.grid : default_mc_grid(c.basis.dim)},
         {"l_tol", num(c.l_tol)},
         {"r_tol", num(c.r_tol)},
         {"m_tol", num(c.m_tol)},
         {"delta", num(c.delta)}};
  if (c.fixed_coefficients.size() > 0) j["fixed_coefficients"] = to_json(c.fixed_coefficients);
  return j;
}

namespace {

Json triple(const TripleCounts& t) {
  return Json{{"N_C", t.n_c}, {"N_M", t.n_max}, {"N_m", t.n_min}, {"N_S", t.n_saddle}};
}

}  // namespace

Json to_json(const TrialRecord& t) {
  Json j{{"trial", t.trial}};
  if (!t.error.empty()) {
    j["error"] = t.error;
    return j;
  }
  j["counts_G"] = triple(t.limit);
  j["L"] = num(t.l_inf);
  j["R"] = num(t.r);
  j["M"] = num(t.m);
  j["hypotheses"] = t.hypotheses;
  Json per_n = Json::array();
  for (std::size_t k = 0; k < t.counts.size(); ++k)
    per_n.push_back(Json{{"counts", triple(t.counts[k])}, {"R_hat", num(t.r_hat[k])}, {"match", bool(t.match[k])}});
  j["per_n"] = per_n;
  return j;
}

Json to_json(const MonteCarloRow& r) {
  return Json{{"n", r.n},
              {"valid", r.valid},
              {"failed", r.failed},
              {"frequency", num(r.frequency)},
              {"hyp_trials", r.hyp_trials},
              {"frequency_hyp", num(r.frequency_hyp)},
              {"frequency_nonhyp", num(r.frequency_nonhyp)},
              {"low_m_trials", r.low_m_trials},
              {"frequency_low_m", num(r.frequency_low_m)},
              {"high_m_trials", r.high_m_trials},
              {"frequency_high_m", num(r.frequency_high_m)},
              {"tv_distance", num(r.tv_distance)},
              {"median_resolution_gap", num(r.median_resolution_gap)},
              {"tail_probability", num(r.tail_probability)},
              {"min_r_hat", num(r.min_r_hat)},
              {"mean_L", num(r.mean_l)},
              {"mean_M", num(r.mean_m)}};
}

Json to_json(const MonteCarloReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  Json trials = Json::array();
  for (const auto& t : r.trials) trials.push_back(to_json(t));
  return Json{{"config", to_json(r.config)}, {"rows", rows}, {"trials", trials}};
}

Json to_json(const GalleryEntry& e) {
  return Json{{"name", e.name},
              {"dim", e.dim},
              {"provenance", std::string(to_string(e.provenance))},
              {"description", e.description},
              {"convergence", e.convergence},
              {"expected", e.expected},
              {"domain", e.domain.to_string()}};
}

namespace {

void dump_into(std::ostringstream& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        first = false;
        out << pad << Json(it.key()).dump() << sep;
        dump_into(out, it.value(), indent, depth + 1);
      }
      out << close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Short numeric arrays stay on one line.
      bool flat = j.size() <= 8;
      for (const auto& e : j) flat = flat && (e.is_number() || e.is_string());
      out << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out << (flat && indent > 0 ? ", " : ",");
        first = false;
        if (!flat) out << pad;
        dump_into(out, e, indent, depth + 1);
      }
      out << (flat ? "" : close) << ']';
      return;
    }
    case Json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::ostringstream out;
  dump_into(out, j, indent, 0);
  out << '\n';
  return out.str();
}

std::string sequence_csv(const SequenceReport& r) {
  std::ostringstream out;
  out << "n,d0,d1,d2,N_C,N_M,N_m,N_S,N_U,N_IM,N_Im,resolution,matched,unmatched_n,unmatched_limit,multi_match,error\n";
  auto row_out = [&](const std::string& n, const CkDistance* d, const Counts& c, double res, const Matching* m,
                     const std::string& error) {
    out << n << ',' << (d ? format_double(d->d0) : "") << ',' << (d ? format_double(d->d1) : "") << ','
        << (d ? format_double(d->d2) : "") << ',' << c.n_c << ',' << c.n_max << ',' << c.n_min << ',' << c.n_saddle
        << ',' << c.n_undulation << ',' << c.improper.maxima << ',' << c.improper.minima << ',' << format_double(res)
        << ',' << (m ? std::to_string(m->pairs.size()) : "") << ','
        << (m ? std::to_string(m->unmatched_n.size()) : "") << ','
        << (m ? std::to_string(m->unmatched_limit.size()) : "") << ',' << (m ? (m->multi_match ? "1" : "0") : "")
        << ',' << error << '\n';
  };
  for (const auto& row : r.rows)
    row_out(std::to_string(row.n), &row.distance, row.counts, row.resolution, &row.matching, row.error);
  row_out("limit", nullptr, r.limit_counts, r.limit_resolution, nullptr, "");
  return out.str();
}

std::string montecarlo_csv(const MonteCarloReport& r) {
  std::ostringstream out;
  out << "n,valid,failed,frequency,frequency_hyp,frequency_nonhyp,frequency_low_m,frequency_high_m,tv_distance,"
         "median_resolution_gap,tail_probability,min_r_hat,mean_L,mean_M\n";
  for (const auto& row : r.rows)
    out << row.n << ',' << row.valid << ',' << row.failed << ',' << format_double(row.frequency) << ','
        << format_double(row.frequency_hyp) << ',' << format_double(row.frequency_nonhyp) << ','
        << format_double(row.frequency_low_m) << ',' << format_double(row.frequency_high_m) << ','
        << format_double(row.tv_distance) << ',' << format_double(row.median_resolution_gap) << ','
        << format_double(row.tail_probability) << ',' << format_double(row.min_r_hat) << ','
        << format_double(row.mean_l) << ',' << format_double(row.mean_m) << '\n';
  return out.str();
}

namespace {

void coords_header(std::ostringstream& out, int dim) {
  for (int k = 0; k < dim; ++k) out << (k ? "," : "") << 'x' << k;
}

void coords(std::ostringstream& out, const Vec& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) out << (k ? "," : "") << format_double(v[k]);
}

}  // namespace

std::string points_csv(const std::vector<CriticalPoint>& points) {
  std::ostringstream out;
  coords_header(out, points.empty() ? 0 : static_cast<int>(points.front().location.size()));
  out << (points.empty() ? "" : ",") << "value,grad_norm,morse_index,hom_index,classification\n";
  for (const auto& p : points) {
    coords(out, p.location);
    out << ',' << format_double(p.value) << ',' << format_double(p.grad_norm) << ','
        << (p.morse_index ? std::to_string(*p.morse_index) : "Degenerate") << ','
        << (p.hom_index ? std::to_string(*p.hom_index) : "Unavailable") << ',' << p.classification.to_string()
        << '\n';
  }
  return out.str();
}

std::string path_csv(const std::vector<Vec>& path, const ScalarField& f) {
  std::ostringstream out;
  out << "k,";
  coords_header(out, f.dim());
  out << ",value\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << k << ',';
    coords(out, path[k]);
    out << ',' << format_double(f.value(path[k])) << '\n';
  }
  return out.str();
}

std::string trajectory_csv(const std::vector<std::pair<double, Vec>>& trajectory) {
  std::ostringstream out;
  out << "t,";
  coords_header(out, trajectory.empty() ? 0 : static_cast<int>(trajectory.front().second.size()));
  out << '\n';
  for (const auto& [t, x] : trajectory) {
    out << format_double(t) << ',';
    coords(out, x);
    out << '\n';
  }
  return out.str();
}

namespace {

Vec vec_from(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::Usage, std::string(what) + " must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

ScalarField gaussian_term(const Vec& center, double width, double amplitude) {
  if (!(width > 0)) throw Error(ErrorCode::Usage, "gaussian width must be positive");
  const int d = static_cast<int>(center.size());
  return ScalarField(
             d, [=](const Vec& s) { return amplitude * std::exp(-(s - center).squaredNorm() / width); }, "gaussian")
      .with_gradient([=](const Vec& s) -> Vec {
        const Vec r = s - center;
        return amplitude * std::exp(-r.squaredNorm() / width) * (-2 / width) * r;
      })
      .with_hessian([=](const Vec& s) -> Mat {
        const Vec r = s - center;
        const double e = amplitude * std::exp(-r.squaredNorm() / width);
        return e * ((4 / (width * width)) * (r * r.transpose()) - (2 / width) * Mat::Identity(d, d));
      });
}

ScalarField parse_term(const Json& t, std::optional<Domain>& domain) {
  if (!t.is_object()) throw Error(ErrorCode::Usage, "field term must be an object");
  if (t.contains("gallery")) {
    const auto& entry = gallery_entry(t.at("gallery").get<std::string>());
    if (!domain) domain = entry.domain;
    if (!t.contains("n") || (t.at("n").is_string() && t.at("n").get<std::string>() == "limit")) return entry.limit();
    const int n = t.at("n").get<int>();
    if (n < 1) throw Error(ErrorCode::Usage, "gallery member n must be at least 1");
    return entry.family(n);
  }
  if (t.contains("quadratic")) {
    const auto& q = t.at("quadratic");
    const auto& rows = q.at("A");
    const auto d = static_cast<Eigen::Index>(rows.size());
    Mat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const Vec row = vec_from(rows[static_cast<std::size_t>(i)], "quadratic.A row");
      if (row.size() != d) throw Error(ErrorCode::Usage, "quadratic.A must be square");
      a.row(i) = row.transpose();
    }
    const Vec b = q.contains("b") ? vec_from(q.at("b"), "quadratic.b") : Vec::Zero(d);
    if (b.size() != d) throw Error(ErrorCode::Usage, "quadratic.b has the wrong length");
    return quadratic_field<double>(a, b, q.value("c", 0.0));
  }
  if (t.contains("gaussian")) {
    const auto& g = t.at("gaussian");
    return gaussian_term(vec_from(g.at("center"), "gaussian.center"), g.value("width", 0.05),
                         g.value("amplitude", 1.0));
  }
  if (t.contains("linear")) {
    const Vec b = vec_from(t.at("linear"), "linear");
    return quadratic_field<double>(Mat::Zero(b.size(), b.size()), b, 0.0, "linear");
  }
  if (t.contains("basis")) {
    const auto& b = t.at("basis");
    BasisSpec spec{b.value("D", 1), b.value("degree", 4), b.value("decay", 2.0)};
    if (!domain) domain = basis_domain(spec.dim);
    return sample_limit_field(spec, b.value("seed", std::uint64_t{0}), b.value("trial", std::uint64_t{0})).to_field();
  }
  throw Error(ErrorCode::Usage, "unknown field term (expected gallery, quadratic, gaussian, linear or basis)");
}

}  // namespace

FieldSpec parse_field_spec(const Json& j) {
  try {
    std::optional<Domain> domain;
    if (j.contains("domain")) domain = Domain::parse(j.at("domain").get<std::string>());
    std::vector<ScalarField> terms;
    if (j.contains("terms")) {
      for (const auto& t : j.at("terms")) terms.push_back(parse_term(t, domain));
    } else {
      terms.push_back(parse_term(j, domain));
    }
    if (terms.empty()) throw Error(ErrorCode::Usage, "field spec has no terms");
    ScalarField f = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) {
      if (terms[i].dim() != f.dim()) throw Error(ErrorCode::Usage, "field terms have different dimensions");
      f = f + terms[i];
    }
    return {f.relabeled(j.dump()), domain};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Usage, std::string("malformed field spec: ") + e.what());
  }
}

MonteCarloConfig parse_montecarlo_config(const Json& j) {
  try {
    MonteCarloConfig c;
    c.basis.dim = j.value("D", c.basis.dim);
    c.basis.degree = j.value("degree", c.basis.degree);
    c.basis.decay = j.value("decay", c.basis.decay);
    c.noise = j.value("noise", c.noise);
    if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<int>>();
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.grid = j.value("grid", c.grid);
    c.delta = j.value("delta", c.delta);
    if (j.contains("fixed_coefficients")) c.fixed_coefficients = vec_from(j.at("fixed_coefficients"), "fixed_coefficients");
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Usage, std::string("malformed montecarlo config: ") + e.what());
  }
}

}  // namespace critsense
