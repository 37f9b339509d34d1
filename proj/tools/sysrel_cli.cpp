// Command-line front end: parses flags into a RunConfig and dispatches to
// the library. See README.md for usage.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sysrel/cli.hpp"

namespace {

bool parse_grid(const std::string& text, sysrel::GridSpec& grid) {
  // START:STOP:COUNT:SPACING with SPACING in {linear, log}
  std::stringstream ss(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 4) return false;
  try {
    grid.start = std::stod(parts[0]);
    grid.stop = std::stod(parts[1]);
    const long count = std::stol(parts[2]);
    if (count < 2) return false;
    grid.count = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    return false;
  }
  if (parts[3] == "log") grid.log_spacing = true;
  else if (parts[3] == "linear") grid.log_spacing = false;
  else return false;
  return true;
}

void add_common_flags(CLI::App* cmd, sysrel::RunConfig& cfg, std::string& grid_text,
                      std::string& structure, std::string& assumption, std::string& baseline) {
  cmd->add_option("--model", cfg.model_path, "model document (JSON)");
  cmd->add_option("--grid", grid_text, "evaluation grid START:STOP:COUNT:linear|log");
  cmd->add_option("--structure", structure, "series|parallel")
      ->check(CLI::IsMember({"series", "parallel"}));
  cmd->add_option("--assumption", assumption, "dependent|independent")
      ->check(CLI::IsMember({"dependent", "independent"}));
  cmd->add_option("--baseline", baseline, "paper-literal|true-marginal")
      ->check(CLI::IsMember({"paper-literal", "true-marginal"}));
  cmd->add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", cfg.out_path, "output path (default: stdout)");
  cmd->add_option("--seed", cfg.seed, "64-bit reproducibility seed");
  cmd->add_option("--samples", cfg.n_samples, "Monte Carlo replicate count");
  cmd->add_option("--level", cfg.level, "confidence level in (0,1)");
  cmd->add_option("--threads", cfg.threads, "worker threads (outputs are thread-invariant)");
  cmd->add_flag("--verify", cfg.verify, "re-check closed forms against the numeric engine");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reliability functions, relative errors, stochastic orders, and Monte Carlo "
               "validation for dependent multi-component systems"};
  app.require_subcommand(1);

  sysrel::RunConfig cfg;
  std::string grid_text;
  std::string structure = "series";
  std::string assumption = "dependent";
  std::string baseline = "paper-literal";
  std::string order_a = "dependent";
  std::string order_b = "independent";

  CLI::App* eval = app.add_subcommand("eval", "grid-evaluate SF, FR, RFR, MRL, AI");
  add_common_flags(eval, cfg, grid_text, structure, assumption, baseline);

  CLI::App* error = app.add_subcommand("error", "relative-error curves and sign assessment");
  add_common_flags(error, cfg, grid_text, structure, assumption, baseline);

  CLI::App* order = app.add_subcommand("order", "stochastic-order verdicts and audit");
  add_common_flags(order, cfg, grid_text, structure, assumption, baseline);
  order->add_option("--a", order_a, "left side: dependent|independent")
      ->check(CLI::IsMember({"dependent", "independent"}));
  order->add_option("--b", order_b, "right side: dependent|independent")
      ->check(CLI::IsMember({"dependent", "independent"}));
  order->add_option("--relations", cfg.relations, "comma list from st,fr,rfr,mrl,lr,af,ai");

  CLI::App* depend = app.add_subcommand("depend", "orthant dependence classification");
  add_common_flags(depend, cfg, grid_text, structure, assumption, baseline);
  depend->add_option("--points", cfg.depend_points, "orthant sample count (>= 100)");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate and coverage");
  add_common_flags(simulate, cfg, grid_text, structure, assumption, baseline);
  simulate->add_option("--dump-samples", cfg.dump_samples_path, "write replicates to CSV");

  CLI::App* families = app.add_subcommand("families", "list families and parameter schemas");
  families->add_option("--example", cfg.example_family, "emit an example document");
  families->add_option("--out", cfg.out_path, "output path (default: stdout)");
  families->add_option("--format", cfg.format, "csv|json");

  CLI11_PARSE(app, argc, argv);

  if (!grid_text.empty() && !parse_grid(grid_text, cfg.grid)) {
    std::cerr << R"({"error":{"type":"InvalidParameter","message":"bad --grid; expected START:STOP:COUNT:linear|log"}})"
              << std::endl;
    return 2;
  }
  cfg.structure = structure == "parallel" ? sysrel::Structure::Parallel
                                          : sysrel::Structure::Series;
  cfg.assumption = assumption == "independent" ? sysrel::Assumption::Independent
                                               : sysrel::Assumption::Dependent;
  cfg.baseline = baseline == "true-marginal" ? sysrel::Baseline::TrueMarginal
                                             : sysrel::Baseline::PaperLiteral;
  cfg.order_a = order_a == "independent" ? sysrel::Assumption::Independent
                                         : sysrel::Assumption::Dependent;
  cfg.order_b = order_b == "independent" ? sysrel::Assumption::Independent
                                         : sysrel::Assumption::Dependent;

  for (CLI::App* sub : {eval, error, order, depend, simulate, families})
    if (sub->parsed()) cfg.command = sub->get_name();

  return sysrel::run(cfg, std::cout, std::cerr);
}
