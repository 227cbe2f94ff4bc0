#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace rieszpart::cli {

namespace {

std::vector<ExactScalar> parse_lengths(const std::vector<std::string>& texts, long double guard) {
  if (texts.empty()) throw MalformedInput("no lengths given (--lengths p/q,irr:...,...)");
  std::vector<ExactScalar> out;
  for (const auto& t : texts) {
    try {
      out.push_back(parse_scalar(t, guard));
    } catch (const std::invalid_argument& e) {
      throw MalformedInput(e.what());
    }
  }
  return out;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + cfg.out);
  f << text << '\n';
}

FrequencyMap realize(const RoundingMap& m, IndexRange r) {
  std::vector<std::int64_t> t;
  for (auto k = r.first; k < r.end; ++k) t.push_back(m(k));
  return {m.source(), m.target(), r.first, std::move(t)};
}

std::vector<long double> unique_sorted(std::vector<long double> f) {
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

// Gram series over truncations plus the trend verdict
std::pair<bool, Json> gram_trend(const std::vector<long double>& freqs, long double length,
                                 const std::vector<std::int64_t>& truncations) {
  std::vector<std::int64_t> ns;
  for (auto t : truncations) ns.push_back(std::min<std::int64_t>(t, static_cast<std::int64_t>(freqs.size())));
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  Json series = Json::array();
  std::vector<GramEstimate> g;
  for (auto n : ns) {
    if (n < 2) continue;
    g.push_back(gram_bounds(freqs, {0, length}, n));
    series.push_back(to_json(g.back()));
  }
  bool ok = !g.empty() && g.back().lambda_min >= kGramFloor * length;
  if (g.size() >= 2) {
    const auto& prev = g[g.size() - 2];
    ok = ok && prev.lambda_min - g.back().lambda_min <= kGramDrift * prev.lambda_min;
  }
  return {ok, Json{{"series", series}, {"pass", ok}}};
}

std::pair<bool, Json> density_check(const std::vector<long double>& freqs, long double length, long double radius) {
  const long double span = freqs.back() - freqs.front();
  const long double r = std::min(radius, std::floor(span / 2));
  if (r < 1) return {true, Json{{"skipped", "set too small"}}};
  DensityReport rep = beurling_density(freqs, {r});
  const auto& x = rep.radii.front();
  // counts may miss b*r by at most 2 points in either direction
  const bool ok = std::fabs(x.d_minus - length) <= 2 / r && std::fabs(x.d_plus - length) <= 2 / r;
  Json j = to_json(rep);
  j["tolerance"] = static_cast<double>(2 / r);
  j["pass"] = ok;
  return {ok, j};
}

}  // namespace

std::vector<std::vector<int>> parse_unions(const std::string& text) {
  std::vector<std::vector<int>> out;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) {
    if (group.empty()) continue;
    std::vector<int> J;
    std::stringstream gs(group);
    std::string item;
    while (std::getline(gs, item, ',')) {
      try {
        std::size_t pos = 0;
        int v = std::stoi(item, &pos);
        if (pos != item.size()) throw std::invalid_argument(item);
        J.push_back(v);
      } catch (const std::exception&) {
        throw MalformedInput("bad union index '" + item + "'");
      }
    }
    out.push_back(J);
  }
  return out;
}

std::pair<ExactScalar, ExactScalar> parse_window(const std::string& text, long double guard) {
  // the separator is the first ':' that is not part of an "irr:" tag
  auto colon = text.find(':');
  while (colon != std::string::npos && colon >= 3 && text.compare(colon - 3, 3, "irr") == 0)
    colon = text.find(':', colon + 1);
  if (colon == std::string::npos) throw MalformedInput("window must be lo:hi");
  try {
    ExactScalar lo = parse_scalar(text.substr(0, colon), guard), hi = parse_scalar(text.substr(colon + 1), guard);
    if (!less(lo, hi)) throw MalformedInput("window must have lo < hi");
    return {lo, hi};
  } catch (const std::invalid_argument& e) {
    throw MalformedInput(std::string("window: ") + e.what());
  }
}

void apply_config_file(RunConfig& cfg, const Json& file, const std::vector<std::string>& given) {
  if (!file.is_object()) throw MalformedInput("config file must hold a JSON object");
  auto unset = [&](const std::string& k) {
    return file.contains(k) && std::find(given.begin(), given.end(), k) == given.end();
  };
  try {
    if (unset("lengths")) {
      const Json& l = file.at("lengths");
      cfg.lengths.clear();
      if (l.is_string()) {
        std::stringstream ss(l.get<std::string>());
        for (std::string s; std::getline(ss, s, ',');) cfg.lengths.push_back(s);
      } else {
        cfg.lengths = l.get<std::vector<std::string>>();
      }
    }
    if (unset("window")) cfg.window = file.at("window").get<std::string>();
    if (unset("budget-K")) cfg.budget_K = file.at("budget-K").get<int>();
    if (unset("guard")) cfg.guard = file.at("guard").get<double>();
    if (unset("unions")) {
      const Json& u = file.at("unions");
      cfg.unions = u.is_string() ? parse_unions(u.get<std::string>()) : u.get<std::vector<std::vector<int>>>();
    }
    if (unset("truncations")) cfg.truncations = file.at("truncations").get<std::vector<std::int64_t>>();
    if (unset("expect-fail")) cfg.expect_fail = file.at("expect-fail").get<bool>();
    if (unset("out")) cfg.out = file.at("out").get<std::string>();
    if (unset("radius")) cfg.radius = file.at("radius").get<double>();
    if (unset("half-width")) cfg.half_width = file.at("half-width").get<std::int64_t>();
    if (unset("max-K")) cfg.max_K = file.at("max-K").get<std::int64_t>();
    if (unset("figure")) cfg.figure = file.at("figure").get<int>();
    if (unset("tail")) cfg.tail = file.at("tail").get<bool>();
  } catch (const Json::exception& e) {
    throw MalformedInput(std::string("config: ") + e.what());
  }
}

int cmd_partition(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    auto lengths = parse_lengths(cfg.lengths, cfg.guard);
    auto [lo, hi] = parse_window(cfg.window, cfg.guard);
    PartitionSpec spec{lengths, cfg.budget_K, cfg.tail};
    PartitionOptions opt;
    opt.half_width = cfg.half_width;
    opt.max_K = cfg.max_K;
    opt.unions = cfg.unions;
    PartitionResult r;
    try {
      r = build_partition(spec, Window(lo, hi), opt);
    } catch (const std::invalid_argument& e) {
      throw MalformedInput(e.what());
    }
    emit(cfg, out, partition_json(r, {true, opt.max_blocks}).dump());
    if (!r.all_pass()) {
      err << "certificate above budget or Riesz threshold\n";
      return kBudgetMiss;
    }
    return kOk;
  } catch (const BudgetMiss& e) {
    err << "budget miss: " << e.what() << '\n';
    return kBudgetMiss;
  } catch (const WindowTooSmall& e) {
    err << "budget miss: " << e.what() << '\n';
    return kBudgetMiss;
  } catch (const PrecisionError& e) {
    err << "precision: " << e.what() << '\n';
    return kPrecision;
  } catch (const RangeError& e) {
    err << "precision: " << e.what() << '\n';
    return kPrecision;
  } catch (const MalformedInput& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  }
}

VerifyOutcome verify_document(const StoredPartition& doc, const RunConfig& cfg) {
  VerifyOutcome v;
  v.pass = true;
  CertificateOptions co;
  co.max_blocks = doc.max_blocks;
  Json sets = Json::array();
  for (const auto& s : doc.sets) {
    Json js{{"label", s.label}, {"length", to_json(s.length)}};
    bool ok = true;
    if (s.map && s.R) {
      auto cert = measure_discrepancy(*s.map, *s.R, co);
      auto riesz = check_riesz_hypothesis(cert, s.length);
      const long double budget = s.budget.value_or(riesz.threshold);
      js["certificate"] = certificate_json(cert, riesz, budget);
      const bool same = s.epsilon_hat && static_cast<double>(cert.epsilon_hat) == *s.epsilon_hat;
      js["matches_stored"] = same;
      ok = ok && riesz.pass && cert.epsilon_hat <= budget && same;
    }
    auto freqs = unique_sorted(s.map ? s.map->range_points() : s.frequencies);
    if (freqs.size() != (s.map ? static_cast<std::size_t>(s.map->size()) : s.frequencies.size()))
      throw MalformedInput(s.label + ": duplicate frequencies");
    if (freqs.size() < 2) throw MalformedInput(s.label + ": needs at least two frequencies");
    auto [gok, gj] = gram_trend(freqs, s.length.value(), cfg.truncations);
    auto [dok, dj] = density_check(freqs, s.length.value(), cfg.radius);
    js["gram"] = gj;
    js["density"] = dj;
    ok = ok && gok && dok;
    js["pass"] = ok;
    v.pass = v.pass && ok;
    sets.push_back(js);
  }
  Json unions = Json::array();
  for (const auto& u : doc.unions) {
    Json ju{{"J", u.J}};
    bool ok = true;
    std::vector<FrequencyMap> maps;
    std::vector<ExactScalar> lens;
    for (int i : u.J) {
      const auto& s = doc.sets[static_cast<std::size_t>(i - 1)];
      if (s.map) maps.push_back(*s.map);
      lens.push_back(s.length);
    }
    if (maps.size() == u.J.size() && u.R) {
      UnionOptions uo;
      uo.min_R = *u.R;
      uo.max_doublings = 0;
      uo.cert = co;
      auto combined = [&] {
        try {
          return combine_union(maps, lens, uo);
        } catch (const std::invalid_argument& e) {
          throw MalformedInput(e.what());
        }
      };
      const UnionOutcome out = combined();
      auto riesz = check_riesz_hypothesis(out.cert, out.length);
      const long double budget = u.budget.value_or(riesz.threshold);
      ju["length"] = to_json(out.length);
      ju["certificate"] = certificate_json(out.cert, riesz, budget);
      const bool same = u.epsilon_hat && static_cast<double>(out.cert.epsilon_hat) == *u.epsilon_hat;
      ju["matches_stored"] = same;
      ok = riesz.pass && out.cert.epsilon_hat <= budget && same;
    } else {
      ju["skipped"] = "maps or certificate missing";
    }
    ju["pass"] = ok;
    v.pass = v.pass && ok;
    unions.push_back(ju);
  }
  v.report = {{"sets", sets}, {"unions", unions}, {"pass", v.pass}, {"expect_fail", cfg.expect_fail}};
  if (cfg.expect_fail) v.report["expected_negative"] = !v.pass;
  return v;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    Json doc;
    try {
      if (cfg.input.empty() || cfg.input == "-") {
        doc = Json::parse(std::cin);
      } else {
        std::ifstream f(cfg.input);
        if (!f) throw MalformedInput("cannot read " + cfg.input);
        doc = Json::parse(f);
      }
    } catch (const Json::parse_error& e) {
      throw MalformedInput(e.what());
    }
    auto v = verify_document(stored_partition_from_json(doc), cfg);
    emit(cfg, out, v.report.dump(2));
    if (cfg.expect_fail) {
      if (v.pass) err << "expected a failure but every check passed\n";
      return v.pass ? kFail : kOk;
    }
    return v.pass ? kOk : kFail;
  } catch (const MalformedInput& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const PrecisionError& e) {
    err << "precision: " << e.what() << '\n';
    return kPrecision;
  }
}

int cmd_figures(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::vector<ExactScalar> lengths;
    std::vector<std::string> colors;
    const ExactScalar s2 = constants::sqrt2inv(cfg.guard);
    if (cfg.figure == 1) {
      lengths = {s2, ExactScalar(Rational(1)) - s2};
      colors = {"yellow", "blue"};
    } else if (cfg.figure == 2) {
      // blue split off first, then the yellow remainder into green and red
      lengths = {ExactScalar(Rational(1)) - s2, Rational(1, 5), s2 - Rational(1, 5)};
      colors = {"blue", "green", "red"};
    } else if (cfg.figure == 0) {
      lengths = parse_lengths(cfg.lengths, cfg.guard);
    } else {
      throw MalformedInput("--figure must be 1 or 2");
    }
    auto [lo, hi] = parse_window(cfg.window, cfg.guard);
    PartitionOptions opt;
    opt.half_width = cfg.half_width;
    opt.max_K = cfg.max_K;
    opt.unions = {{1, 2}};
    if (lengths.size() < 2) opt.unions.clear();
    PartitionSpec spec{lengths, cfg.budget_K, cfg.tail};
    PartitionResult r;
    try {
      r = build_partition(spec, Window(lo, hi), opt);
    } catch (const std::invalid_argument& e) {
      throw MalformedInput(e.what());
    }
    struct Row {
      std::string label, color;
      std::vector<std::int64_t> idx;
    };
    std::vector<Row> rows;
    for (std::size_t j = 0; j < r.sets.size(); ++j)
      rows.push_back({r.sets[j].label, j < colors.size() ? colors[j] : "", r.indices(j)});
    const AffineLattice half(Rational(1));
    const IndexRange wr = half.index_range(Window(lo, hi));
    if (cfg.figure == 2) {
      // the yellow intermediate image and the naive (unbalanced) green set
      RoundingPair p1 = split_pair(lengths[0], Rational(1));
      const std::int64_t pad = 64;
      FrequencyMap sigma = realize(p1.psi, p1.psi.sources_for_targets(wr.first - pad, wr.end + pad));
      RoundingPair p2 = split_pair(lengths[1], ExactScalar(Rational(1)) - lengths[0]);
      FrequencyMap naive = naive_compose(p2.phi, sigma);
      auto in_window = [&](std::vector<std::int64_t> v) {
        std::vector<std::int64_t> o;
        for (auto t : v)
          if (wr.contains(t)) o.push_back(t);
        return o;
      };
      rows.push_back({"Lambda_2+Lambda_3 (stage 1)", "yellow", in_window(sigma.sorted_range())});
      rows.push_back({"Lambda_2 naive", "green_naive", in_window(naive.sorted_range())});
    }
    if (cfg.csv) {
      std::ostringstream os;
      os << "label,color,index,point\n";
      for (const auto& row : rows)
        for (auto t : row.idx) os << row.label << ',' << row.color << ',' << t << ',' << t << ".5\n";
      std::string text = os.str();
      text.pop_back();
      emit(cfg, out, text);
      return kOk;
    }
    Json sets = Json::array();
    for (const auto& row : rows) {
      Json pts = Json::array();
      for (auto t : row.idx) pts.push_back(static_cast<double>(half.point_ld(t)));
      sets.push_back({{"label", row.label}, {"color", row.color.empty() ? Json(nullptr) : Json(row.color)},
                      {"indices", row.idx}, {"points", pts}});
    }
    Json j{{"figure", cfg.figure}, {"window", {to_json(lo), to_json(hi)}}, {"sets", sets}};
    Json lens = Json::array();
    for (const auto& b : r.lengths) lens.push_back(to_json(b));
    j["lengths"] = lens;
    emit(cfg, out, j.dump(2));
    return kOk;
  } catch (const MalformedInput& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformed;
  } catch (const BudgetMiss& e) {
    err << "budget miss: " << e.what() << '\n';
    return kBudgetMiss;
  } catch (const PrecisionError& e) {
    err << "precision: " << e.what() << '\n';
    return kPrecision;
  }
}

}  // namespace rieszpart::cli
