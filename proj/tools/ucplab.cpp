// Command-line front end. Subcommands map one-to-one onto the pipeline
// runs; the exit status reflects the report gates (0 = all pass, 1 = a gate
// failed, 2 = error before any report was produced).

#include "ucplab/pipeline.hpp"
#include "ucplab/presets.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  bool dump_config = false;
};

ucplab::RunConfig resolve_config(const CommonArgs& args) {
  if (!args.config_path.empty() && !args.preset.empty())
    throw ucplab::Error("give either --config or --preset, not both");
  if (!args.preset.empty()) return ucplab::preset_config(args.preset);
  if (!args.config_path.empty()) return ucplab::RunConfig::load_file(args.config_path);
  return ucplab::RunConfig{};
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "configuration file (ini)");
  cmd->add_option("--preset", args.preset, "named preset configuration");
  cmd->add_option("-o,--out", args.out_dir, "output directory");
  cmd->add_flag("--dump-config", args.dump_config,
                "print the resolved configuration and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"frequency and nodal-set analysis for elliptic boundary problems"};
  app.require_subcommand(0, 1);

  bool list_presets = false;
  app.add_flag("--list-presets", list_presets, "list preset names and exit");

  CommonArgs args;
  const char* names[] = {"solve", "gauge", "frequency", "blowup", "nodal", "verify"};
  const char* blurbs[] = {
      "assemble and solve the boundary problem",
      "remove the Robin weight by a multiplicative gauge",
      "compute the frequency profile and vanishing order",
      "rescaled blowups and a homogeneous-polynomial fit",
      "trace the boundary zero set and its box dimension",
      "run the built-in identity and monotonicity catalog"};
  for (int i = 0; i < 6; ++i) add_common(app.add_subcommand(names[i], blurbs[i]), args);

  CLI11_PARSE(app, argc, argv);

  if (list_presets) {
    for (const auto& n : ucplab::preset_names()) std::printf("%s\n", n.c_str());
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "error: expected a subcommand (see --help)\n");
    return 2;
  }

  try {
    ucplab::RunConfig cfg = resolve_config(args);
    if (args.dump_config) {
      std::fputs(cfg.canonical().c_str(), stdout);
      return 0;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    ucplab::Report rep = ucplab::run_command(cmd, cfg);
    ucplab::write_report(rep, args.out_dir);
    for (const auto& [name, pass] : rep.gates)
      std::printf("gate %-24s %s\n", name.c_str(), pass ? "pass" : "FAIL");
    std::printf("report written to %s\n", args.out_dir.c_str());
    return rep.ok() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
