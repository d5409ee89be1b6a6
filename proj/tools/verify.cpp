#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "indlim/finvec.hpp"
#include "indlim/glinf.hpp"
#include "indlim/rational.hpp"
#include "indlim/stereo.hpp"
#include "indlim/suites.hpp"
#include "indlim/tower.hpp"

namespace {

using indlim::FinVec;
using indlim::GLInfElement;
using indlim::Rational;
using nlohmann::json;

FinVec<Rational> parse_vec(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_array()) throw indlim::ConfigInvalid("expected a JSON array: " + text);
  std::vector<Rational> coeffs;
  coeffs.reserve(j.size());
  for (const auto& e : j) {
    if (e.is_number_integer())
      coeffs.push_back(Rational(static_cast<long>(e.get<long long>())));
    else if (e.is_string())
      coeffs.push_back(Rational::parse(e.get<std::string>()));
    else
      throw indlim::ConfigInvalid("vector entries must be integers or \"p/q\" strings");
  }
  return FinVec<Rational>::make(std::move(coeffs));
}

GLInfElement<Rational> parse_mat(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_array()) throw indlim::ConfigInvalid("expected a JSON array of rows: " + text);
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw indlim::ConfigInvalid("matrix rows must be arrays");
    std::vector<Rational> r;
    for (const auto& e : row) {
      if (e.is_number_integer())
        r.push_back(Rational(static_cast<long>(e.get<long long>())));
      else if (e.is_string())
        r.push_back(Rational::parse(e.get<std::string>()));
      else
        throw indlim::ConfigInvalid("matrix entries must be integers or \"p/q\" strings");
    }
    rows.push_back(std::move(r));
  }
  return GLInfElement<Rational>::from_block(rows);
}

json vec_json(const FinVec<Rational>& v) {
  json out = json::array();
  for (int k = 1; k <= v.degree(); ++k) out.push_back(v.at(k).str());
  return out;
}

json mat_json(const GLInfElement<Rational>& g) {
  json out = json::array();
  for (int r = 1; r <= g.size(); ++r) {
    json row = json::array();
    for (int c = 1; c <= g.size(); ++c) row.push_back(g.entry(r, c).str());
    out.push_back(std::move(row));
  }
  return out;
}

void require_args(const std::vector<std::string>& args, std::size_t n, const std::string& usage) {
  if (args.size() != n) throw indlim::ConfigInvalid("usage: sample " + usage);
}

/// One-off evaluations in exact rational mode. Chart ops use the pole e_1
/// family, matching the tower's pole-selection rule.
json run_sample(const std::string& op, const std::vector<std::string>& args) {
  using indlim::ChartSign;
  using indlim::SpherePoint;
  using indlim::StereoChart;
  const auto chart = [](ChartSign sign) {
    return StereoChart<Rational>{SpherePoint<Rational>::on_sphere(FinVec<Rational>::unit(1)),
                                 sign};
  };
  json out;
  out["op"] = op;
  if (op == "make") {
    require_args(args, 1, "make '[coeffs]'");
    const auto v = parse_vec(args[0]);
    out["result"] = vec_json(v);
    out["degree"] = v.degree();
  } else if (op == "add") {
    require_args(args, 2, "add '[x]' '[y]'");
    out["result"] = vec_json(add(parse_vec(args[0]), parse_vec(args[1])));
  } else if (op == "scale") {
    require_args(args, 2, "scale c '[x]'");
    out["result"] = vec_json(scale(Rational::parse(args[0]), parse_vec(args[1])));
  } else if (op == "weak-inner") {
    require_args(args, 2, "weak-inner '[x]' '[y]'");
    out["result"] = weak_inner(parse_vec(args[0]), parse_vec(args[1])).str();
  } else if (op == "include") {
    require_args(args, 2, "include '[x]' d");
    out["result"] = vec_json(include(parse_vec(args[0]), std::stoi(args[1])));
  } else if (op == "u-plus" || op == "u-minus") {
    require_args(args, 1, op + " '[point]'");
    const auto x = SpherePoint<Rational>::on_sphere(parse_vec(args[0]));
    const auto sign = op == "u-plus" ? ChartSign::plus : ChartSign::minus;
    out["result"] = vec_json(stereo_project(chart(sign), x));
  } else if (op == "u-plus-inv" || op == "u-minus-inv") {
    require_args(args, 1, op + " '[y]'");
    const auto sign = op == "u-plus-inv" ? ChartSign::plus : ChartSign::minus;
    out["result"] = vec_json(stereo_unproject(chart(sign), parse_vec(args[0])).coords());
  } else if (op == "transition") {
    require_args(args, 1, "transition '[y]'  (antipodal pair u- after u+^-1)");
    out["result"] =
        vec_json(stereo_transition(chart(ChartSign::plus), chart(ChartSign::minus),
                                   parse_vec(args[0])));
  } else if (op == "gl-compose") {
    require_args(args, 2, "gl-compose '[[g]]' '[[h]]'");
    out["result"] = mat_json(compose(parse_mat(args[0]), parse_mat(args[1])));
  } else if (op == "gl-inverse") {
    require_args(args, 1, "gl-inverse '[[g]]'");
    out["result"] = mat_json(inverse(parse_mat(args[0])));
  } else if (op == "gl-apply") {
    require_args(args, 2, "gl-apply '[[g]]' '[v]'");
    out["result"] = vec_json(apply(parse_mat(args[0]), parse_vec(args[1])));
  } else if (op == "random-sphere-point") {
    require_args(args, 2, "random-sphere-point dim seed");
    const auto p = indlim::random_sphere_point(std::stoi(args[0]),
                                               std::stoull(args[1]));
    json coords = json::array();
    for (int k = 1; k <= p.coords().degree(); ++k) coords.push_back(p.coords().at(k));
    out["result"] = std::move(coords);
  } else {
    throw indlim::ConfigInvalid("unknown sample op '" + op + "'");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verify compatibility properties of the direct-limit tower library"};
  app.require_subcommand(0, 1);

  indlim::SuiteConfig cfg;
  std::string dims = "2..12";
  std::string mode = "auto";
  std::string format = "text";
  app.add_option("--suite", cfg.suite,
                 "suite to run: group|functorial|charts|cocycle|diagram|tangency|roundtrip|"
                 "derivative|all")
      ->capture_default_str();
  app.add_option("--tower", cfg.tower, "tower name: sphere|euclidean|sphere-faulty")
      ->capture_default_str();
  app.add_option("--dims", dims, "tower level range, e.g. 2..12")->capture_default_str();
  app.add_option("--trials", cfg.trials, "trials per check")->capture_default_str();
  app.add_option("--seed", cfg.seed, "master seed (64-bit)")->capture_default_str();
  app.add_option("--tol", cfg.tol, "float-mode tolerance")->capture_default_str();
  app.add_option("--mode", mode, "scalar mode: rational|float|auto")->capture_default_str();
  app.add_option("--format", format, "report format: text|json")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "evaluate one operation (exact rational mode)");
  std::string sample_op;
  sample->add_option("op", sample_op, "operation name")->required();
  sample->allow_extras();  // raw JSON argument literals, taken verbatim

  auto* list = app.add_subcommand("list-suites", "list the available suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      for (const auto& [name, what] : indlim::list_suites())
        std::cout << name << "\t" << what << "\n";
      return 0;
    }
    if (*sample) {
      const json out = run_sample(sample_op, sample->remaining());
      if (indlim::parse_format(format) == indlim::OutputFormat::Json)
        std::cout << out.dump(2) << "\n";
      else
        std::cout << out["result"].dump() << "\n";
      return 0;
    }
    cfg.mode = indlim::parse_mode(mode);
    cfg.format = indlim::parse_format(format);
    indlim::parse_dims(dims, cfg.dim_min, cfg.dim_max);
    const indlim::SuiteReport report = indlim::run_suite(cfg);
    if (cfg.format == indlim::OutputFormat::Json)
      std::cout << indlim::report_to_json(report);
    else
      std::cout << indlim::report_to_text(report);
    return report.pass ? 0 : 1;
  } catch (const indlim::UnknownSuite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const indlim::UnknownTower& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const indlim::ConfigInvalid& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const indlim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
