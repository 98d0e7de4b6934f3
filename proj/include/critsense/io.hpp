#pragma once

#include "critsense/critpoint.hpp"
#include "critsense/gallery.hpp"
#include "critsense/hom_index.hpp"
#include "critsense/morse.hpp"
#include "critsense/mountain_pass.hpp"
#include "critsense/rand_field.hpp"
#include "critsense/sequence_lab.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace critsense {

inline constexpr std::string_view kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// Finite values as numbers; inf and nan as the strings "inf", "-inf", "nan".
Json num(double v);
Json to_json(const Vec& v);
Json to_json(const Mat& m);
Json to_json(const CriticalPoint& p);
Json to_json(const DetectionResult& r);
Json to_json(const IndexEntry& e);
Json to_json(const IndexResult& r);
Json to_json(const MorseConstants& k);
Json to_json(const FlowChart& c);
Json to_json(const ChartReport& r);
Json to_json(const PassResult& r);
Json to_json(const CkDistance& d);
Json to_json(const Counts& c);
Json to_json(const Matching& m);
Json to_json(const SequenceReport& r);
Json to_json(const MonteCarloConfig& c);
Json to_json(const TrialRecord& t);
Json to_json(const MonteCarloRow& r);
Json to_json(const MonteCarloReport& r);
Json to_json(const GalleryEntry& e);

/// Deterministic text: keys in insertion order, floats with 17 significant digits.
std::string dump(const Json& j, int indent = 2);

/// %.17g; inf and nan spelled out.
std::string format_double(double v);

std::string sequence_csv(const SequenceReport& r);
std::string montecarlo_csv(const MonteCarloReport& r);
std::string points_csv(const std::vector<CriticalPoint>& points);
std::string path_csv(const std::vector<Vec>& path, const ScalarField& f);
std::string trajectory_csv(const std::vector<std::pair<double, Vec>>& trajectory);

struct FieldSpec {
  ScalarField field;
  std::optional<Domain> domain;
};

/// A single term or {"terms": [...], "domain": "..."}. Terms:
///   {"gallery": name, "n": k}            member k (or the limit when "n" is absent or "limit")
///   {"quadratic": {"A": [[..]], "b": [..], "c": c}}
///   {"gaussian": {"center": [..], "width": w, "amplitude": a}}   a exp(-|x - center|^2 / w)
///   {"linear": [..]}
///   {"basis": {"D": d, "degree": k, "decay": p, "seed": s, "trial": t}}
FieldSpec parse_field_spec(const Json& j);

/// Keys D, degree, decay, noise, n_list, trials, seed (others optional: grid, delta).
MonteCarloConfig parse_montecarlo_config(const Json& j);

}  // namespace critsense
