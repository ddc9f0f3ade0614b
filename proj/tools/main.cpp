#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pucci/config.hpp"
#include "pucci/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver and principal-eigenvalue estimator for gradient-weighted "
               "extremal elliptic operators"};
  app.require_subcommand(1);

  std::string config_path;
  pucci::RunOptions opts;
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", opts.out_dir, "output directory (overrides the config)");
  app.add_option("--threads", opts.threads, "worker thread cap (0 = all cores)");
  app.add_option("--seed", opts.seed, "random seed for sampled checks");

  struct Sub {
    const char* name;
    pucci::Command command;
  };
  const Sub subs[] = {
      {"eigen", pucci::Command::Eigen},
      {"solve", pucci::Command::Solve},
      {"radial", pucci::Command::Radial},
      {"verify-operator", pucci::Command::VerifyOperator},
      {"barrier", pucci::Command::Barrier},
      {"compare", pucci::Command::Compare},
  };
  for (const Sub& s : subs) app.add_subcommand(s.name, "")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    pucci::RunConfig cfg = pucci::parse_config(read_file(config_path));
    const std::string default_prefix = pucci::to_string(cfg.command);
    for (const Sub& s : subs) {
      if (app.get_subcommand(s.name)->parsed()) {
        cfg.command = s.command;
        for (auto& [k, v] : cfg.resolved)
          if (k == "command.name") v = pucci::to_string(s.command);
        if (cfg.prefix == default_prefix) cfg.prefix = pucci::to_string(s.command);
        break;
      }
    }
    return pucci::run(cfg, opts);
  } catch (const pucci::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
