#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bundlecheck/cli/report_io.hpp"
#include "bundlecheck/cli/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bundlecheck::ParseError(0, "cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verifies tangent- and cotangent-bundle structures declared in spec files"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string output;
  std::string domain;
  bundlecheck::cli::RunOptions opt;
  double tolerance = opt.verify.algebraic;

  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--output", output, "write the report here instead of stdout");
  app.add_option("--seed", opt.verify.domain.seed, "sampling seed");
  app.add_option("--trials", opt.verify.domain.count, "sample points per residual");
  app.add_option("--tolerance", tolerance, "algebraic residual tolerance");
  app.add_option("--domain", domain, "sampling window lo,hi for |coordinate|");
  app.add_flag("--strict", opt.strict, "treat probably-zero as failure");
  app.add_flag("--timings", opt.timings, "record real elapsed_ms (output is no longer byte-stable)");

  std::string spec_path;
  std::vector<std::string> commands = bundlecheck::cli::task_kinds();
  commands.push_back("report-all");
  for (const std::string& c : commands) {
    CLI::App* sub = app.add_subcommand(c, c == "report-all" ? "run every task in the spec"
                                                            : "run the spec's " + c + " tasks");
    sub->add_option("spec", spec_path, "spec file path")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    opt.verify.algebraic = tolerance;
    if (!domain.empty()) {
      std::size_t comma = domain.find(',');
      if (comma == std::string::npos)
        throw bundlecheck::ParseError(0, "--domain needs lo,hi");
      opt.verify.domain.lo = std::stod(domain.substr(0, comma));
      opt.verify.domain.hi = std::stod(domain.substr(comma + 1));
    }

    const std::string command = app.get_subcommands().front()->get_name();
    bundlecheck::cli::SpecFile spec = bundlecheck::cli::parse_specfile(read_file(spec_path));
    bundlecheck::cli::Report report = bundlecheck::cli::run_tasks(spec, command, opt);

    std::string rendered = format == "json" ? bundlecheck::cli::render_json(report)
                                            : bundlecheck::cli::render_text(report);
    if (output.empty()) {
      std::cout << rendered;
    } else {
      std::ofstream out(output, std::ios::binary);
      if (!out) throw bundlecheck::Error("cannot write report to " + output);
      out << rendered;
    }

    if (!opt.strict) {
      for (const auto& t : report.tasks)
        if (t.verdict == bundlecheck::Verdict::ProbablyZero)
          std::cerr << "warning: " << t.name << " vanished at every sample but not structurally\n";
    }
    return report.all_pass(opt.strict) ? 0 : 1;
  } catch (const bundlecheck::ParseError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
