// upade: Padé approximants, tables, pole trajectories and universality
// schedules from the command line. All input and output is JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "upade/upade.hpp"

namespace {

using upade::io::json;
namespace cli = upade::cli;

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw upade::InvalidArgument("cannot open '" + path + "'", {"read_json", {}, {}});
  return json::parse(f);
}

/// Inline JSON when the argument looks like a document, a file path otherwise.
json inline_or_file(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t");
  if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) return json::parse(arg);
  return read_json_file(arg);
}

std::optional<upade::Complex> parse_center(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double re = 0, im = 0;
  char comma = 0;
  std::istringstream in(s);
  in >> re;
  if (!in) throw upade::InvalidArgument("--center: expected re,im", {"parse_center", {}, {}});
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw upade::InvalidArgument("--center: expected re,im", {"parse_center", {}, {}});
  }
  return upade::Complex{re, im};
}

struct Globals {
  std::string out;
  double tol_rel = 1e-9;
  std::uint64_t seed = 0;
};

int emit(json doc, int code, const Globals& g) {
  doc["seed"] = g.seed;
  doc["exit_code"] = code;
  const std::string text = doc.dump(2) + "\n";
  if (!g.out.empty()) cli::write_atomic(g.out, text);
  std::fwrite(text.data(), 1, text.size(), stdout);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Padé approximants and universality certificates"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "Also write the JSON result to this path (atomically)");
  app.add_option("--tol-rel", g.tol_rel, "Relative determinant tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed echoed into the output (runs are deterministic)");

  std::string series_path, center_arg, family_arg, region_arg, schedule_path;
  int p = 0, q = 0, pmax = 0, qmax = 0;
  bool with_poles = false;

  auto* pade = app.add_subcommand("pade", "Single [p/q]: membership, both routes, diagnostics");
  pade->add_option("--series", series_path, "Series JSON file")->required();
  pade->add_option("--center", center_arg, "Expansion center re,im");
  pade->add_option("--p", p)->required()->check(CLI::NonNegativeNumber);
  pade->add_option("--q", q)->required()->check(CLI::NonNegativeNumber);
  pade->add_option("--region", region_arg, "Region JSON (inline or file) for the separation bound");

  auto* table = app.add_subcommand("table", "Membership grid for p <= pmax, q <= qmax");
  table->add_option("--series", series_path, "Series JSON file")->required();
  table->add_option("--center", center_arg, "Expansion center re,im");
  table->add_option("--pmax", pmax)->required()->check(CLI::NonNegativeNumber);
  table->add_option("--qmax", qmax)->required()->check(CLI::NonNegativeNumber);
  table->add_flag("--with-poles", with_poles, "Attach pole lists to member cells");

  auto* poles = app.add_subcommand("poles", "Pole sets along a family of indices");
  poles->add_option("--series", series_path, "Series JSON file")->required();
  poles->add_option("--center", center_arg, "Expansion center re,im");
  poles->add_option("--family", family_arg, "Family JSON (inline or file)")->required();

  auto* universal = app.add_subcommand("universal", "Run a demand schedule and certify every stage");
  universal->add_option("--schedule", schedule_path, "Schedule config JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kInputError;
  }

  try {
    const upade::TolerancePolicy tol{g.tol_rel};
    cli::CommandResult res;
    if (*pade || *table || *poles) {
      const auto series = upade::io::series_from_json(read_json_file(series_path), parse_center(center_arg));
      if (*pade) {
        cli::PadeRequest req{{p, q}, tol, std::nullopt};
        if (!region_arg.empty()) req.region = upade::io::region_from_json(inline_or_file(region_arg));
        res = cli::cmd_pade(series, req);
      } else if (*table) {
        res = cli::cmd_table(series, pmax, qmax, tol, with_poles);
      } else {
        res = cli::cmd_poles(series, upade::io::family_members_in_order(inline_or_file(family_arg)), tol);
      }
    } else {
      auto cfg = upade::io::schedule_from_json(read_json_file(schedule_path));
      if (app.count("--tol-rel") > 0) cfg.options.certify.tol.tol_rel = g.tol_rel;
      res = cli::cmd_universal(cfg);
    }
    return emit(std::move(res.output), res.exit_code, g);
  } catch (const upade::Error& e) {
    std::cerr << "upade: " << e.what() << "\n";
    return emit(json{{"error", cli::error_json(e)}}, cli::exit_code_for(e), g);
  } catch (const json::exception& e) {
    std::cerr << "upade: malformed JSON: " << e.what() << "\n";
    return emit(json{{"error", {{"kind", "InvalidArgument"}, {"message", e.what()}}}}, cli::kInputError, g);
  } catch (const std::exception& e) {
    std::cerr << "upade: " << e.what() << "\n";
    return cli::kInputError;
  }
}
