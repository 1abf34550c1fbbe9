#include <iostream>
#include <vector>

#include <CLI/CLI.hpp>

#include "commands.hpp"

namespace {

finsler4::Vec4d to_vec4(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }

}  // namespace

int main(int argc, char** argv) {
  using namespace finsler4::cli;
  CLI::App app{"finsler4: numerical Finsler geometry in dimension 4"};
  app.require_subcommand(1);

  RunConfig cfg;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<double> x, y;

  auto add_common = [&](CLI::App* sub, bool with_spec) {
    if (with_spec) sub->add_option("spec", cfg.spec_path, "metric spec JSON file")->required();
    sub->add_option("--samples", samples, "number of sample points");
    sub->add_option("--seed", seed, "sampling seed");
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_option("--output", cfg.output, "write the report to this path");
  };
  auto* classify = app.add_subcommand("classify", "Riemannian/Minkowski/Berwald/Landsberg detection");
  add_common(classify, true);
  auto* conformal = app.add_subcommand("conformal", "conformal transformation laws and condition blocks");
  add_common(conformal, true);
  auto* frame = app.add_subcommand("frame", "frame, main scalars and connection vectors at one point");
  frame->add_option("spec", cfg.spec_path, "metric spec JSON file")->required();
  frame->add_option("--x", x, "position a,b,c,d")->delimiter(',')->expected(4)->required();
  frame->add_option("--y", y, "direction a,b,c,d")->delimiter(',')->expected(4)->required();
  frame->add_option("--output", cfg.output, "write the report to this path");
  auto* selftest = app.add_subcommand("selftest", "jet versus finite-difference oracle");
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSpecError;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--samples")) cfg.samples = samples;
  if (given("--seed")) cfg.seed = seed;
  if (given("--tol")) cfg.tol = tol;
  if (x.size() == 4) cfg.x = to_vec4(x);
  if (y.size() == 4) cfg.y = to_vec4(y);
  return run_command(cfg, std::cout, std::cerr);
}
