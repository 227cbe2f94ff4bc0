#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace rieszpart;

int main(int argc, char** argv) {
  CLI::App app{"rieszpart: partitions of Z+1/2 into exponential Riesz bases for interval partitions"};
  app.require_subcommand(1);
  cli::RunConfig cfg;
  std::string lengths, unions, config, truncations;
  double guard = static_cast<double>(kDefaultGuard), radius = 1e5;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--lengths", lengths, "comma-separated lengths: p/q, irr:<decimal>, sqrt2inv, golden, invpi");
    sub->add_option("--window", cfg.window, "lo:hi (half-open)");
    sub->add_option("--budget-K", cfg.budget_K, "union-size budget K (delta = 4^-K); default: number of lengths");
    sub->add_option("--guard", guard, "tie guard for irr: values");
    sub->add_option("--unions", unions, "index sets, e.g. 1,3;2,3");
    sub->add_option("--half-width", cfg.half_width, "working region half-width");
    sub->add_option("--max-K", cfg.max_K, "block-size doubling limit (exceeding it is a budget miss)");
    sub->add_flag("--tail", cfg.tail, "last length is the truncated tail of a countable partition");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--config", config, "JSON config file; flags override it");
  };
  auto* part = app.add_subcommand("partition", "construct and certify the frequency sets");
  common(part);
  auto* ver = app.add_subcommand("verify", "re-measure certificates, Gram trends and densities of stored sets");
  common(ver);
  ver->add_option("input", cfg.input, "JSON file with frequency sets (- for stdin)");
  ver->add_option("--truncations", truncations, "comma-separated Gram truncations");
  ver->add_option("--radius", radius, "density radius");
  ver->add_flag("--expect-fail", cfg.expect_fail, "negative control: exit 0 iff some check fails");
  auto* fig = app.add_subcommand("figures", "emit the point sets of the two pictures (or of --lengths)");
  common(fig);
  fig->add_option("--figure", cfg.figure, "1 or 2 (0: use --lengths)");
  fig->add_flag("--csv", cfg.csv, "CSV instead of JSON");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    std::vector<std::string> given;
    for (const auto* o : sub->get_options())
      if (o->count() > 0) given.push_back(o->get_name(false, true).substr(o->get_name(false, true).find_first_not_of('-')));
    if (sub == fig && sub->count("--window") == 0) cfg.window = "-6:25";
    if (!lengths.empty()) cfg.lengths = CLI::detail::split(lengths, ',');
    if (!unions.empty()) cfg.unions = cli::parse_unions(unions);
    if (!truncations.empty()) {
      cfg.truncations.clear();
      for (const auto& t : CLI::detail::split(truncations, ',')) cfg.truncations.push_back(std::stoll(t));
    }
    cfg.guard = guard;
    cfg.radius = radius;
    if (!config.empty()) {
      std::ifstream f(config);
      if (!f) throw MalformedInput("cannot read config " + config);
      Json j;
      try {
        j = Json::parse(f);
      } catch (const Json::parse_error& e) {
        throw MalformedInput(e.what());
      }
      cli::apply_config_file(cfg, j, given);
    }
  } catch (const MalformedInput& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return cli::kMalformed;
  } catch (const std::logic_error& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return cli::kMalformed;
  }

  if (sub == part) return cli::cmd_partition(cfg, std::cout, std::cerr);
  if (sub == ver) return cli::cmd_verify(cfg, std::cout, std::cerr);
  return cli::cmd_figures(cfg, std::cout, std::cerr);
}
