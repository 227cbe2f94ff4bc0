#include "rieszpart/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace rieszpart {

namespace {

double d(long double x) { return static_cast<double>(x); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw MalformedInput(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const ExactScalar& x) {
  if (x.is_rational()) return {{"rational", {x.as_rational().num(), x.as_rational().den()}}};
  // "text" and "guard_text" keep the full long doubles; the numbers are for human readers
  char g[64];
  std::snprintf(g, sizeof g, "%.21Lg", x.guard());
  return {{"float", d(x.value())}, {"guard", d(x.guard())}, {"text", x.str()}, {"guard_text", g}};
}

ExactScalar scalar_from_json(const Json& j) {
  if (j.is_object() && j.contains("rational")) {
    const Json& r = j.at("rational");
    if (!r.is_array() || r.size() != 2) throw MalformedInput("rational must be [num, den]");
    auto num = get<std::int64_t>(r[0], "rational numerator");
    auto den = get<std::int64_t>(r[1], "rational denominator");
    if (den == 0) throw MalformedInput("rational with zero denominator");
    return Rational(num, den);
  }
  if (j.is_object() && j.contains("float")) {
    long double guard = j.contains("guard") ? get<double>(j.at("guard"), "guard") : kDefaultGuard;
    if (j.contains("guard_text")) {
      auto text = get<std::string>(j.at("guard_text"), "guard_text");
      char* end = nullptr;
      guard = std::strtold(text.c_str(), &end);
      if (end != text.c_str() + text.size() || !(guard >= 0)) throw MalformedInput("bad guard_text");
    }
    if (j.contains("text")) {
      try {
        return parse_scalar(get<std::string>(j.at("text"), "text"), guard);
      } catch (const std::invalid_argument& e) {
        throw MalformedInput(e.what());
      }
    }
    return ExactScalar::guarded(get<double>(j.at("float"), "float"), guard);
  }
  if (j.is_string()) {
    try {
      return parse_scalar(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw MalformedInput(e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw MalformedInput("expected a scalar: {\"rational\": [p,q]}, {\"float\": v, \"guard\": g}, or a string");
}

Json to_json(const AffineLattice& l) { return {{"a", to_json(l.a())}, {"alpha", to_json(l.alpha())}}; }

AffineLattice lattice_from_json(const Json& j) {
  ExactScalar a = scalar_from_json(field(j, "a"));
  if (a.sign() <= 0) throw MalformedInput("lattice scale must be positive");
  return AffineLattice(a, scalar_from_json(field(j, "alpha")));
}

Json to_json(const FrequencyMap& m) {
  return {{"source", to_json(m.source())},
          {"target", to_json(m.target())},
          {"first", m.first_index()},
          {"targets", m.targets()}};
}

FrequencyMap map_from_json(const Json& j) {
  auto targets = get<std::vector<std::int64_t>>(field(j, "targets"), "targets");
  if (targets.empty()) throw MalformedInput("empty map");
  try {
    return FrequencyMap(lattice_from_json(field(j, "source")), lattice_from_json(field(j, "target")),
                        get<std::int64_t>(field(j, "first"), "first"), std::move(targets));
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(e.what());
  }
}

Json certificate_json(const AvdoninCertificate& c, const RieszCheck& r, long double budget) {
  Json j{{"R", to_json(c.R)},
         {"epsilon_hat", d(c.epsilon_hat)},
         {"threshold", d(r.threshold)},
         {"pass", r.pass && c.epsilon_hat <= budget},
         {"worst_block", c.worst_block},
         {"blocks_checked", c.blocks_checked},
         {"budget", d(budget)}};
  j["epsilon_exact"] = c.epsilon_exact ? Json(c.epsilon_exact->str()) : Json(nullptr);
  return j;
}

Json to_json(const GramEstimate& g) {
  return {{"offset", d(g.interval.offset)}, {"length", d(g.interval.length)}, {"n", g.n},
          {"lambda_min", d(g.lambda_min)},  {"lambda_max", d(g.lambda_max)},  {"condition", std::isfinite(g.condition) ? Json(d(g.condition)) : Json(nullptr)}};
}

Json to_json(const DensityReport& r) {
  Json radii = Json::array();
  for (const auto& x : r.radii)
    radii.push_back({{"r", d(x.r)}, {"min_count", x.min_count}, {"max_count", x.max_count},
                     {"d_minus", d(x.d_minus)}, {"d_plus", d(x.d_plus)}});
  return {{"radii", radii}, {"D_minus", d(r.D_minus)}, {"D_plus", d(r.D_plus)}};
}

Json partition_json(const PartitionResult& r, const PartitionJsonOptions& opt) {
  Json spec{{"lengths", Json::array()}, {"K", r.K}, {"delta", d(r.delta)}, {"shifted", r.shifted},
            {"max_blocks", opt.max_blocks}};
  for (const auto& b : r.lengths) spec["lengths"].push_back(to_json(b));
  Json out{{"spec", spec}};
  out["window"] = r.window ? Json::array({to_json(r.window->lo), to_json(r.window->hi)}) : Json(nullptr);
  Json sets = Json::array();
  for (std::size_t i = 0; i < r.sets.size(); ++i) {
    const auto& s = r.sets[i];
    Json js{{"label", s.label},
            {"length", to_json(s.length)},
            {"indices", r.indices(i)},
            {"certificate", certificate_json(s.cert, s.riesz, s.budget)}};
    Json f = Json::array();
    for (auto x : r.frequencies(i)) f.push_back(d(x));
    js["frequencies"] = f;
    if (opt.include_maps) js["map"] = to_json(s.map);
    sets.push_back(js);
  }
  out["sets"] = sets;
  Json unions = Json::array();
  for (const auto& u : r.unions)
    unions.push_back({{"J", u.J}, {"length", to_json(u.length)}, {"certificate", certificate_json(u.cert, u.riesz, u.budget)}});
  out["unions"] = unions;
  out["log"] = r.log;
  out["all_pass"] = r.all_pass();
  return out;
}

StoredPartition stored_partition_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedInput("top level must be an object");
  StoredPartition p;
  if (j.contains("spec") && j.at("spec").is_object() && j.at("spec").contains("max_blocks"))
    p.max_blocks = get<std::int64_t>(j.at("spec").at("max_blocks"), "max_blocks");
  if (j.contains("window") && !j.at("window").is_null()) {
    const Json& w = j.at("window");
    if (!w.is_array() || w.size() != 2) throw MalformedInput("window must be [lo, hi]");
    long double lo = w[0].is_number() ? w[0].get<double>() : scalar_from_json(w[0]).value();
    long double hi = w[1].is_number() ? w[1].get<double>() : scalar_from_json(w[1]).value();
    if (!(lo < hi)) throw MalformedInput("window must have lo < hi");
    p.window = {{lo, hi}};
  }
  const Json& sets = field(j, "sets");
  if (!sets.is_array() || sets.empty()) throw MalformedInput("\"sets\" must be a nonempty array");
  for (const auto& js : sets) {
    StoredSet s;
    s.label = js.contains("label") ? get<std::string>(js.at("label"), "label") : "set " + std::to_string(p.sets.size() + 1);
    s.length = scalar_from_json(field(js, "length"));
    if (s.length.sign() <= 0) throw MalformedInput(s.label + ": length must be positive");
    if (js.contains("map")) s.map = map_from_json(js.at("map"));
    if (js.contains("frequencies")) {
      for (const auto& x : js.at("frequencies")) s.frequencies.push_back(get<double>(x, "frequency"));
    } else if (s.map) {
      s.frequencies = s.map->range_points();
    } else {
      throw MalformedInput(s.label + ": needs \"frequencies\" or \"map\"");
    }
    std::sort(s.frequencies.begin(), s.frequencies.end());
    if (js.contains("certificate")) {
      const Json& c = js.at("certificate");
      s.R = scalar_from_json(field(c, "R"));
      s.epsilon_hat = get<double>(field(c, "epsilon_hat"), "epsilon_hat");
      if (c.contains("budget")) s.budget = get<double>(c.at("budget"), "budget");
    }
    p.sets.push_back(std::move(s));
  }
  if (j.contains("unions")) {
    for (const auto& ju : j.at("unions")) {
      StoredUnion u;
      u.J = get<std::vector<int>>(field(ju, "J"), "J");
      if (u.J.empty()) throw MalformedInput("empty union index set");
      for (int i : u.J)
        if (i < 1 || i > static_cast<int>(p.sets.size())) throw MalformedInput("union index out of range");
      if (ju.contains("certificate")) {
        const Json& c = ju.at("certificate");
        u.R = scalar_from_json(field(c, "R"));
        u.epsilon_hat = get<double>(field(c, "epsilon_hat"), "epsilon_hat");
        if (c.contains("budget")) u.budget = get<double>(c.at("budget"), "budget");
      }
      p.unions.push_back(std::move(u));
    }
  }
  return p;
}

}  // namespace rieszpart
