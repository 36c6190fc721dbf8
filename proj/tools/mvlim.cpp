#include "mvlim/cli.hpp"
#include "mvlim/rational.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

struct Flags {
  std::string num, den, expr, vars, point, mode = "auto", zero_set, decomp, order;
  int paths = 20;
  std::uint64_t seed = 0;
  bool json = false;
  size_t max_decomps = 16;
};

void add_common(CLI::App* app, Flags& f, bool resolve) {
  app->add_option("--num", f.num, "numerator f");
  app->add_option("--den", f.den, "denominator g");
  app->add_option("--expr", f.expr, "quotient f/g as one expression");
  app->add_option("--vars", f.vars, "comma-separated variables")->required();
  app->add_option("--point", f.point, "comma-separated rational coordinates (default: origin)");
  app->add_option("--paths", f.paths, "number of oracle paths")->check(CLI::Range(8, 100000));
  app->add_option("--seed", f.seed, "oracle seed (default: $MVLIM_SEED or 0)");
  app->add_flag("--json", f.json, "JSON output");
  if (!resolve) return;
  app->add_option("--mode", f.mode, "auto, nonisolated, isolated or probe")
      ->check(CLI::IsMember({"auto", "nonisolated", "isolated", "probe"}));
  app->add_option("--zero-set", f.zero_set, "zero set of the denominator (JSON)");
  app->add_option("--decomp", f.decomp, "square decomposition hint (JSON)");
  app->add_option("--max-decomps", f.max_decomps, "decomposition budget");
  app->add_option("--order", f.order, "series truncation order");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mvlim: limits of multivariable quotients at a point"};
  app.require_subcommand(1);
  Flags f;
  if (const char* env = std::getenv("MVLIM_SEED")) f.seed = std::strtoull(env, nullptr, 10);
  CLI::App* resolve = app.add_subcommand("resolve", "decide whether the limit exists");
  CLI::App* probe = app.add_subcommand("probe", "numerical path-sampling report only");
  add_common(resolve, f, true);
  add_common(probe, f, false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  mvlim::Query q;
  q.command = resolve->parsed() ? "resolve" : "probe";
  q.numerator = f.num;
  q.denominator = f.den;
  q.quotient = f.expr;
  q.vars = f.vars;
  q.point = f.point;
  q.zero_set_json = f.zero_set;
  q.decomposition_json = f.decomp;
  q.paths = f.paths;
  q.seed = f.seed;
  q.format = f.json ? mvlim::Format::Json : mvlim::Format::Text;
  q.max_decompositions = f.max_decomps;
  try {
    q.mode = mvlim::parse_mode(f.mode);
    if (!f.order.empty()) q.order = mvlim::parse_rational(f.order);
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  }
  mvlim::RunResult r = mvlim::run(q);
  std::cout << r.output;
  if (!r.error.empty()) std::cerr << r.error << "\n";
  return r.exit_code;
}
