#ifndef RPI_CLI_HPP
#define RPI_CLI_HPP

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rpi/calculus.hpp"
#include "rpi/convergence.hpp"
#include "rpi/io.hpp"
#include "rpi/measure.hpp"
#include "rpi/rpi_version.hpp"
#include "rpi/stieltjes.hpp"

namespace rpi::cli {

// Exit codes, also documented in --help and the README.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kParse = 2;
inline constexpr int kPrecondition = 3;
inline constexpr int kResource = 4;
inline constexpr int kDegenerate = 5;

namespace detail {

inline std::string read_input(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw CLI::ValidationError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline FunctionDocument load_document(const std::string& path,
                                      std::istream& in) {
  return parse_function_document(read_input(path, in));
}

inline Distribution load_distribution(const std::string& path,
                                      std::istream& in) {
  return Distribution::from_primitive(load_document(path, in).fn);
}

inline BVFunction load_bv(const std::string& path, std::istream& in) {
  return BVFunction(load_document(path, in).fn);
}

inline Rational default_radius() {
  if (const char* env = std::getenv("RPI_ENCLOSURE_RADIUS")) {
    return rat_parse(env, "RPI_ENCLOSURE_RADIUS");
  }
  return kDefaultEps;
}

inline void emit(const Json& j, std::ostream& out, bool pretty) {
  out << j.dump(pretty ? 2 : -1) << "\n";
}

inline MonotonePiecewiseMap load_map(const std::string& path,
                                     std::istream& in) {
  Json doc = Json::parse(read_input(path, in), nullptr, false);
  if (doc.is_discarded()) throw ParseError("invalid JSON", "", "bad-json");
  std::vector<Rational> xs, vals;
  std::vector<Polynomial> pieces;
  if (doc.contains("breakpoints"))
    for (std::size_t i = 0; i < doc.at("breakpoints").size(); ++i)
      xs.push_back(rpi::detail::doc_rational(
          doc.at("breakpoints").at(i), "breakpoints[" + std::to_string(i) + "]"));
  if (doc.contains("values_at"))
    for (std::size_t i = 0; i < doc.at("values_at").size(); ++i)
      vals.push_back(rpi::detail::doc_rational(
          doc.at("values_at").at(i), "values_at[" + std::to_string(i) + "]"));
  if (!doc.contains("pieces"))
    throw ParseError("map document needs pieces", "pieces", "bad-document");
  for (std::size_t i = 0; i < doc.at("pieces").size(); ++i) {
    std::vector<Rational> coeffs;
    const Json& pj = doc.at("pieces").at(i);
    for (std::size_t k = 0; k < pj.size(); ++k)
      coeffs.push_back(rpi::detail::doc_rational(
          pj.at(k), "pieces[" + std::to_string(i) + "]"));
    pieces.emplace_back(std::move(coeffs));
  }
  try {
    return MonotonePiecewiseMap(std::move(xs), std::move(vals),
                                std::move(pieces));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), "", "bad-document");
  }
}

}  // namespace detail

// Runs one CLI invocation; every library operation is reachable from exactly
// one verb.  Returns a process exit code and writes one structured document
// to `out`.
inline int run(std::vector<std::string> args, std::istream& in,
               std::ostream& out, std::ostream& err) {
  CLI::App app{"exact regulated-primitive-integral calculator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.footer(
      "Function documents are JSON (see README).  File arguments accept '-' "
      "for standard input.\nRationals print as \"p/q\"; irrational results "
      "print as {center, radius} enclosures.\nEnvironment: "
      "RPI_ENCLOSURE_RADIUS sets the default enclosure radius (rational "
      "string).\nExit codes: 0 ok, 1 usage, 2 parse error, 3 precondition "
      "error, 4 resource exhausted, 5 degenerate input.");
  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent the output document");

  struct Common {
    std::string fn, f, g, map, test, interval = "R", set;
    std::string kind = "alexiewicz", anchor = "-inf", mode = "strong";
    std::string from, to, family, dominator;
    std::string by = "0", at = "0", probe = "1", eps, tolerance = "1/100";
    int order = 2;
    bool alternative = false, oracle = false, finiteness = false;
    bool exact = true;
  } o;

  auto* integrate = app.add_subcommand("integrate", "integral of f over an interval");
  integrate->add_option("--fn", o.fn, "distribution document")->required();
  integrate->add_option("--interval", o.interval, "interval expression, e.g. \"[0,1)\"");
  integrate->add_option("--from", o.from, "oriented lower endpoint, e.g. \"0-\"");
  integrate->add_option("--to", o.to, "oriented upper endpoint, e.g. \"1+\"");

  auto* norm = app.add_subcommand("norm", "Alexiewicz and related norms");
  norm->add_option("--fn", o.fn)->required();
  norm->add_option("--kind", o.kind,
                   "alexiewicz | prime | sup | bv | bv-anchored");
  norm->add_option("--anchor", o.anchor, "anchor for bv-anchored");

  auto* variation_cmd = app.add_subcommand("variation", "total variation of g");
  variation_cmd->add_option("--fn", o.fn)->required();

  auto* translate = app.add_subcommand("translate", "translate a distribution");
  translate->add_option("--fn", o.fn)->required();
  translate->add_option("--by", o.by)->required();

  auto* pair = app.add_subcommand("pair", "pair f with a test function");
  pair->add_option("--fn", o.fn)->required();
  pair->add_option("--test", o.test, "test function document")->required();
  pair->add_option("--order", o.order, "required smoothness order");

  auto* stieltjes_cmd = app.add_subcommand("stieltjes", "Henstock-Stieltjes integral of phi d(psi)");
  stieltjes_cmd->add_option("--phi", o.f)->required();
  stieltjes_cmd->add_option("--psi", o.g)->required();
  stieltjes_cmd->add_option("--interval", o.interval);
  stieltjes_cmd->add_option("--oracle", o.eps,
                            "gauge-partition enclosure of radius EPS instead "
                            "of the exact closed form");

  auto* product_cmd = app.add_subcommand("product", "product f*g in A_R");
  product_cmd->add_option("--f", o.f)->required();
  product_cmd->add_option("--g", o.g)->required();

  auto* ibp = app.add_subcommand("ibp", "integral of f*g by parts");
  ibp->add_option("--f", o.f)->required();
  ibp->add_option("--g", o.g)->required();

  auto* holder = app.add_subcommand("holder", "Holder bounds for |int f g|");
  holder->add_option("--f", o.f)->required();
  holder->add_option("--g", o.g)->required();
  holder->add_flag("--alternative", o.alternative,
                   "inf|g| bound for lambda-normalized g");

  auto* join_cmd = app.add_subcommand("join", "lattice join f v g");
  join_cmd->add_option("--f", o.f)->required();
  join_cmd->add_option("--g", o.g)->required();
  auto* meet_cmd = app.add_subcommand("meet", "lattice meet f ^ g");
  meet_cmd->add_option("--f", o.f)->required();
  meet_cmd->add_option("--g", o.g)->required();
  auto* abs_cmd = app.add_subcommand("abs", "lattice absolute value |f|");
  abs_cmd->add_option("--fn", o.fn)->required();
  auto* jordan_cmd = app.add_subcommand("jordan", "Jordan decomposition f = f+ - f-");
  jordan_cmd->add_option("--fn", o.fn)->required();

  auto* measure_cmd = app.add_subcommand("measure", "nu_f(E) for a BV set expression");
  measure_cmd->add_option("--fn", o.fn)->required();
  measure_cmd->add_option("--set", o.set, "e.g. \"[0,1) u (2,3]\"");
  measure_cmd->add_flag("--finiteness", o.finiteness,
                        "report |nu_f| bound and a witness set");

  auto* compose_cmd = app.add_subcommand("compose", "(f o G) G' for piecewise-linear G");
  compose_cmd->add_option("--fn", o.fn)->required();
  compose_cmd->add_option("--map", o.map, "map document")->required();

  auto* changevar = app.add_subcommand("changevar", "change of variables with side resolution");
  changevar->add_option("--fn", o.fn)->required();
  changevar->add_option("--map", o.map)->required();
  changevar->add_option("--from", o.from, "sided endpoint, e.g. \"0-\"")->required();
  changevar->add_option("--to", o.to, "sided endpoint, e.g. \"1+\"")->required();

  auto* taylor_cmd = app.add_subcommand("taylor", "Taylor expansion with regulated remainder");
  taylor_cmd->add_option("--fn", o.fn)->required();
  taylor_cmd->add_option("--at", o.at)->required();
  taylor_cmd->add_option("--order", o.order)->required();
  taylor_cmd->add_option("--probe", o.probe, "evaluation point x > a");

  auto* convolve_cmd = app.add_subcommand("convolve", "(f * g)(x) for continuous g");
  convolve_cmd->add_option("--f", o.f)->required();
  convolve_cmd->add_option("--g", o.g)->required();
  convolve_cmd->add_option("--at", o.at)->required();

  auto* converge = app.add_subcommand("converge", "finite-evidence convergence reports");
  converge->add_option("--family", o.family, "sequence document")->required();
  converge->add_option("--mode", o.mode, "strong | weak | dominated");
  converge->add_option("--test", o.test, "test function for weak mode");
  converge->add_option("--dominator", o.dominator, "dominator for dominated mode");
  converge->add_option("--tolerance", o.tolerance);

  auto* canonicalize = app.add_subcommand("canonicalize", "canonical function document");
  canonicalize->add_option("--fn", o.fn)->required();

  std::vector<const char*> argv;
  std::string prog = "rpi";
  argv.push_back(prog.c_str());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    Rational eps = detail::default_radius();

    if (integrate->parsed()) {
      Distribution f = detail::load_distribution(o.fn, in);
      NormValue v = !o.from.empty() || !o.to.empty()
                        ? [&] {
                            SidedEndpoint a = SidedEndpoint::parse(o.from);
                            SidedEndpoint b = SidedEndpoint::parse(o.to);
                            return f.integrate_oriented(a.at, a.side, b.at,
                                                        b.side, eps);
                          }()
                        : f.integrate(IntervalSpec::parse(o.interval), eps);
      detail::emit(serialize_norm_value(v), out, pretty);
    } else if (norm->parsed()) {
      Json res;
      if (o.kind == "alexiewicz") {
        res = serialize_norm_value(
            detail::load_distribution(o.fn, in).alexiewicz_norm(eps));
      } else if (o.kind == "prime") {
        res = serialize_norm_value(
            detail::load_distribution(o.fn, in).norm_prime(eps));
      } else if (o.kind == "sup") {
        res = serialize_norm_value(
            detail::load_document(o.fn, in).fn.sup_norm(eps));
      } else if (o.kind == "bv") {
        res = serialize_norm_value(detail::load_bv(o.fn, in).bv_norm(eps));
      } else if (o.kind == "bv-anchored") {
        res = serialize_norm_value(detail::load_bv(o.fn, in).bv_norm_anchored(
            ExtReal::parse(o.anchor), eps));
      } else {
        throw CLI::ValidationError("unknown norm kind '" + o.kind + "'");
      }
      detail::emit(res, out, pretty);
    } else if (variation_cmd->parsed()) {
      detail::emit(
          serialize_norm_value(detail::load_bv(o.fn, in).total_variation()),
          out, pretty);
    } else if (translate->parsed()) {
      FunctionDocument doc = detail::load_document(o.fn, in);
      Rational t = rat_parse(o.by, "--by");
      detail::emit(serialize_function(doc.fn.translated(t), doc.kind, doc.name),
                   out, pretty);
    } else if (pair->parsed()) {
      Distribution f = detail::load_distribution(o.fn, in);
      TestFunction phi(detail::load_document(o.test, in).fn, o.order);
      detail::emit(serialize_norm_value(f.pair_with_test(phi, eps)), out,
                   pretty);
    } else if (stieltjes_cmd->parsed()) {
      PiecewiseFunction phi = detail::load_document(o.f, in).fn;
      PiecewiseFunction psi = detail::load_document(o.g, in).fn;
      IntervalSpec I = IntervalSpec::parse(o.interval);
      if (!o.eps.empty()) {
        Rational radius = rat_parse(o.eps, "--oracle");
        OracleResult res = gauge_oracle(phi, psi, I, radius);
        Json j = serialize_norm_value(res.enclosure);
        j["cells"] = res.total_cells.str();
        j["error_bound"] = rat_to_string(res.error_bound);
        detail::emit(j, out, pretty);
      } else {
        detail::emit(serialize_norm_value(hs_integral(phi, psi, I, eps)), out,
                     pretty);
      }
    } else if (product_cmd->parsed()) {
      Distribution f = detail::load_distribution(o.f, in);
      BVFunction g = detail::load_bv(o.g, in);
      detail::emit(serialize_function(product(f, g).primitive_fn(),
                                      DocumentKind::DistributionPrimitive),
                   out, pretty);
    } else if (ibp->parsed()) {
      detail::emit(
          serialize_norm_value(integrate_by_parts(
              detail::load_distribution(o.f, in), detail::load_bv(o.g, in))),
          out, pretty);
    } else if (holder->parsed()) {
      Distribution f = detail::load_distribution(o.f, in);
      BVFunction g = detail::load_bv(o.g, in);
      if (o.alternative) {
        detail::emit(serialize_norm_value(holder_alternative(f, g, eps)), out,
                     pretty);
      } else {
        HolderBounds hb = holder_bound(f, g, eps);
        Json j;
        j["lhs"] = serialize_norm_value(hb.lhs)["value"];
        j["bound1"] = serialize_norm_value(hb.bound1)["value"];
        j["bound2"] = serialize_norm_value(hb.bound2)["value"];
        detail::emit(j, out, pretty);
      }
    } else if (join_cmd->parsed() || meet_cmd->parsed()) {
      Distribution f = detail::load_distribution(o.f, in);
      Distribution g = detail::load_distribution(o.g, in);
      Distribution r = join_cmd->parsed() ? join(f, g) : meet(f, g);
      detail::emit(serialize_function(r.primitive_fn(),
                                      DocumentKind::DistributionPrimitive),
                   out, pretty);
    } else if (abs_cmd->parsed()) {
      Distribution f = detail::load_distribution(o.fn, in);
      detail::emit(serialize_function(rpi::abs(f).primitive_fn(),
                                      DocumentKind::DistributionPrimitive),
                   out, pretty);
    } else if (jordan_cmd->parsed()) {
      Distribution f = detail::load_distribution(o.fn, in);
      JordanDecomposition jd = jordan(f);
      Json j;
      j["positive"] = serialize_function(jd.positive.primitive_fn(),
                                         DocumentKind::DistributionPrimitive);
      j["negative"] = serialize_function(jd.negative.primitive_fn(),
                                         DocumentKind::DistributionPrimitive);
      detail::emit(j, out, pretty);
    } else if (measure_cmd->parsed()) {
      Distribution f = detail::load_distribution(o.fn, in);
      if (o.finiteness) {
        FinitenessReport rep = finiteness_report(f, eps);
        Json j;
        j["variation_bound"] = serialize_norm_value(rep.total_variation)["value"];
        j["witness"] = rep.witness.to_string();
        j["witness_value"] = serialize_norm_value(rep.witness_value)["value"];
        j["witness_exact"] = rep.witness_exact;
        detail::emit(j, out, pretty);
      } else {
        detail::emit(serialize_norm_value(nu(f, BVSet::parse(o.set))), out,
                     pretty);
      }
    } else if (compose_cmd->parsed()) {
      Distribution f = detail::load_distribution(o.fn, in);
      MonotonePiecewiseMap G = detail::load_map(o.map, in);
      detail::emit(serialize_function(compose(f, G).primitive_fn(),
                                      DocumentKind::DistributionPrimitive),
                   out, pretty);
    } else if (changevar->parsed()) {
      Distribution f = detail::load_distribution(o.fn, in);
      MonotonePiecewiseMap G = detail::load_map(o.map, in);
      auto res = change_of_variables(f, G, SidedEndpoint::parse(o.from),
                                     SidedEndpoint::parse(o.to), eps);
      Json j;
      j["value"] = serialize_norm_value(res.value)["value"];
      auto endpoint_json = [](const ResolvedEndpoint& r) {
        Json e;
        e["image"] = r.image.to_string();
        if (r.sigma)
          e["sigma"] = *r.sigma == Side::Plus ? "+" : "-";
        else
          e["sigma"] = nullptr;
        return e;
      };
      j["lower"] = endpoint_json(res.resolved1);
      j["upper"] = endpoint_json(res.resolved2);
      detail::emit(j, out, pretty);
    } else if (taylor_cmd->parsed()) {
      PiecewiseFunction f = detail::load_document(o.fn, in).fn;
      Rational a = rat_parse(o.at, "--at");
      TaylorExpansion te(f, a, o.order);
      Rational x = rat_parse(o.probe, "--probe");
      TaylorBoundReport rep = te.bound_report(x, eps);
      Json j;
      Json coeffs = Json::array();
      for (const auto& c : te.taylor_polynomial().coefficients())
        coeffs.push_back(rat_to_string(c));
      j["taylor_polynomial"] = coeffs;
      j["remainder"] = serialize_norm_value(rep.remainder)["value"];
      j["estimate1"] = serialize_norm_value(rep.estimate1)["value"];
      j["estimate1_holds"] = rep.estimate1_holds;
      j["alexiewicz"] = serialize_norm_value(rep.alexiewicz)["value"];
      j["l1"] = serialize_norm_value(rep.l1)["value"];
      j["estimate2"] = serialize_norm_value(rep.estimate2)["value"];
      j["chain_holds"] = rep.chain_holds;
      detail::emit(j, out, pretty);
    } else if (convolve_cmd->parsed()) {
      Distribution f = detail::load_distribution(o.f, in);
      PiecewiseFunction g = detail::load_document(o.g, in).fn;
      Rational x = rat_parse(o.at, "--at");
      detail::emit(serialize_norm_value(convolve_eval(f, g, x, eps)), out,
                   pretty);
    } else if (converge->parsed()) {
      Json doc = Json::parse(detail::read_input(o.family, in), nullptr, false);
      if (doc.is_discarded()) throw ParseError("invalid JSON", "", "bad-json");
      SequenceDocument seq = parse_sequence_document(doc);
      SequenceSpec spec{
          [&seq](int n) {
            return Distribution::from_primitive(
                instantiate_indexed_document(seq.generator, n));
          },
          Distribution::from_primitive(seq.limit.fn), seq.horizon};
      Rational tol = rat_parse(o.tolerance, "--tolerance");
      Json j;
      if (o.mode == "strong") {
        TrendReport rep = strong_distances(spec, tol, eps);
        Json vals = Json::array();
        for (const auto& v : rep.values)
          vals.push_back(serialize_norm_value(v)["value"]);
        j["distances"] = vals;
        j["envelope_nonincreasing"] = rep.envelope_nonincreasing;
        if (rep.first_violation) j["first_violation"] = *rep.first_violation;
        j["final_below_tolerance"] = rep.final_below_tolerance;
        j["note"] =
            "finite-prefix evidence only; the theorem's conclusion is "
            "asymptotic";
      } else if (o.mode == "weak") {
        if (o.test.empty())
          throw CLI::ValidationError("weak mode needs --test");
        TestFunction phi(detail::load_document(o.test, in).fn, 2);
        Json vals = Json::array();
        for (const auto& v : weak_pairings(spec, phi, eps))
          vals.push_back(serialize_norm_value(v)["value"]);
        j["pairings"] = vals;
        j["note"] =
            "finite-prefix evidence only; the theorem's conclusion is "
            "asymptotic";
      } else if (o.mode == "dominated") {
        if (o.dominator.empty())
          throw CLI::ValidationError("dominated mode needs --dominator");
        Distribution dom = detail::load_distribution(o.dominator, in);
        auto probes = probe_grid(spec, {});
        DominatedReport rep = dominated_check(spec, dom, probes, tol, eps);
        j["all_dominated"] = rep.all_dominated;
        j["probes_settle"] = rep.probes_settle;
        j["boundary_settles"] = rep.boundary_settles;
        Json gaps = Json::array();
        for (const auto& v : rep.rows.back().probe_gaps)
          gaps.push_back(serialize_norm_value(v)["value"]);
        j["final_probe_gaps"] = gaps;
        j["final_boundary_gap"] =
            serialize_norm_value(rep.rows.back().boundary_gap)["value"];
        j["note"] =
            "finite-prefix evidence only; the theorem's conclusion is "
            "asymptotic";
      } else {
        throw CLI::ValidationError("unknown converge mode '" + o.mode + "'");
      }
      detail::emit(j, out, pretty);
    } else if (canonicalize->parsed()) {
      FunctionDocument doc = detail::load_document(o.fn, in);
      detail::emit(serialize_function(doc.fn.canonicalized(), doc.kind,
                                      doc.name, doc.description),
                   out, pretty);
    }
    return kOk;
  } catch (const CLI::Error& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << " [code " << e.code() << "]\n";
    return kParse;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return kPrecondition;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return kResource;
  } catch (const DegenerateInputError& e) {
    err << "degenerate input: " << e.what() << "\n";
    return kDegenerate;
  }
}

}  // namespace rpi::cli

#endif  // RPI_CLI_HPP
