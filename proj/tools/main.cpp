#include "bergman/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

// key=value lines become --key value right after the subcommand, so that
// flags given later on the command line take precedence
std::vector<std::string> expand_config(const std::vector<std::string>& args, const std::vector<std::string>& commands) {
  std::vector<std::string> out, extra;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#' || line[b] == ';') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--config", "expected key=value, got '" + line + "'");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    extra.push_back("--" + trim(line.substr(b, eq - b)));
    extra.push_back(trim(line.substr(eq + 1)));
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (std::find(commands.begin(), commands.end(), out[i]) != commands.end()) {
      out.insert(out.begin() + static_cast<long>(i) + 1, extra.begin(), extra.end());
      break;
    }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using bergman::RunConfig;
  RunConfig c;
  CLI::App app{"Semiclassical coefficients of weighted Bergman kernels"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.name("bergman");
  std::string config;  // consumed by expand_config, declared here for --help
  app.add_option("--config", config, "key=value file with option defaults; flags override it");

  auto common = [&c](CLI::App* s) {
    s->add_option("--weight", c.weight, "gaussian, quartic:eps=..., gevrey-radial:s=..., poly:r4=..., explicit:file=...")
        ->capture_default_str();
    s->add_option("--M", c.M, "highest coefficient index")->capture_default_str();
    s->add_option("--precision", c.precision, "working precision in bits")->capture_default_str();
    s->add_option("--out", c.out, "output directory")->capture_default_str();
    s->add_option("--tol", c.tol, "tolerance of the command's checks");
  };
  auto grid = [&c](CLI::App* s) {
    s->add_option("--h-min", c.h_min)->capture_default_str();
    s->add_option("--h-max", c.h_max)->capture_default_str();
    s->add_option("--h-count", c.h_count, "log-spaced points")->capture_default_str();
  };
  auto method = [&c](CLI::App* s) {
    s->add_option("--method", c.method, "charles, hs or both")->capture_default_str();
    s->add_option("--budget", c.budget, "weight jet order (default 2M+4)");
  };
  auto oracle = [&c](CLI::App* s) {
    s->add_option("--disc", c.disc, "integration disc radius for formal series weights");
    s->add_option("--series-terms", c.series_terms, "radial terms kept for formal series weights");
  };

  CLI::App* coeffs = app.add_subcommand("coeffs", "compute a_0..a_M and cross-check the recursions");
  common(coeffs);
  method(coeffs);

  CLI::App* validate = app.add_subcommand("validate", "compare a coefficient table with the kernel oracle");
  common(validate);
  grid(validate);
  method(validate);
  oracle(validate);
  validate->add_option("--table", c.table, "coefficient CSV to check instead of computing one");

  CLI::App* spcheck = app.add_subcommand("spcheck", "stationary phase remainders against quadrature");
  common(spcheck);
  grid(spcheck);
  spcheck->add_option("--dim", c.dim, "1 or 2")->capture_default_str();
  spcheck->add_option("--k", c.k_max, "highest expansion order")->capture_default_str();
  spcheck->add_option("--cubic", c.cubic, "cubic coefficient of the test phase")->capture_default_str();

  CLI::App* fit = app.add_subcommand("fit", "growth and remainder fits");
  common(fit);
  fit->add_option("--table", c.table, "coefficient CSV (m, re[, im]) or table CSV");
  fit->add_option("--report", c.report, "report CSV with h and residual columns");
  fit->add_option("--target-sigma", c.target_sigma, "expected growth order, or auto");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args, {"coeffs", "validate", "spcheck", "fit"});
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? bergman::exit_pass : bergman::exit_config;
  }
  c.command = app.get_subcommands().front()->get_name();
  return bergman::run_command(c, std::cout, std::cerr);
}
