#include <CLI11.hpp>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lorentzian convex sets: support functions, Christoffel problem, area measures"};
  std::string config;
  lorentzian::cli::Options opt;
  app.add_option("config", config, "JSON job document")->required();
  app.add_option("--out", opt.out, "output path (overrides the document's \"output\")");
  app.add_flag("--require-convex", opt.require_convex, "exit 4 when a convexity check reports a violation");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lorentzian::cli::validation;
  }
  return lorentzian::cli::run_file(config, opt);
}
