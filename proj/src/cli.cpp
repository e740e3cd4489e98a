#include "oddterw/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "oddterw/errors.hpp"
#include "oddterw/intersection.hpp"
#include "oddterw/oddgraph.hpp"
#include "oddterw/terwilliger.hpp"

namespace oddterw::cli {

namespace fs = std::filesystem;

namespace {

bool needs_closure(const std::string& check) {
  return check == "closure" || check == "containment" || check == "lemma2425" || check == "basis";
}

std::vector<FieldConfig> fields_for(const RunConfig& config) {
  std::vector<FieldConfig> fields;
  for (auto p : config.primes) fields.push_back(FieldConfig::gf(p));
  if (config.exact || config.m <= 3) fields.push_back(FieldConfig::exact());
  return fields;
}

VerificationReport internal_failure(const std::string& name, const std::string& field,
                                    const std::string& what) {
  VerificationReport r;
  r.name = name;
  r.field = field;
  r.fail({{"kind", "internal"}, {"detail", what}});
  return r;
}

// Closures are computed on first use and shared by every check.
class ClosureCache {
 public:
  ClosureCache(const OddGraph& g, unsigned jobs) : g_(g), jobs_(jobs) {}

  const ClosureResult& get(const FieldConfig& field) {
    auto key = field.name();
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      ClosureOptions options;
      options.field = field;
      options.jobs = jobs_;
      it = cache_.emplace(key, closure(g_, options)).first;
    }
    return it->second;
  }

 private:
  const OddGraph& g_;
  unsigned jobs_;
  std::map<std::string, ClosureResult> cache_;
};

std::string render_text(const nlohmann::json& report) {
  std::ostringstream os;
  os << "m = " << report["m"] << ", fields " << report["field"].get<std::string>() << '\n';
  std::size_t field_width = 8;
  for (const auto& c : report["checks"]) field_width = std::max(field_width, c["field"].get<std::string>().size() + 2);
  for (const auto& c : report["checks"]) {
    os << std::left << std::setw(28) << c["name"].get<std::string>() << std::setw(static_cast<int>(field_width))
       << c["field"].get<std::string>() << std::setw(8) << c["status"].get<std::string>()
       << c["ms"] << " ms\n";
    for (const auto& w : c["witnesses"]) os << "    witness: " << w.dump() << '\n';
    for (const auto& n : c["notes"]) os << "    note: " << n.get<std::string>() << '\n';
  }
  return os.str();
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"eq7",  "lemma2", "closure",  "containment",
                                              "lemma2425", "basis", "dimension"};
  return names;
}

void validate(const RunConfig& config) {
  if (config.m < 1 || config.m > kDefaultMaxM) {
    throw ParameterError("--m must lie in [1," + std::to_string(kDefaultMaxM) + "], got " +
                         std::to_string(config.m));
  }
  if (config.checks.empty()) throw ParameterError("no checks selected");
  for (const auto& c : config.checks) {
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end()) {
      throw ParameterError("unknown check '" + c + "'");
    }
  }
  bool closure_needed = std::any_of(config.checks.begin(), config.checks.end(), needs_closure);
  if (closure_needed && config.m > kClosureMaxM && !config.allow_large) {
    throw ParameterError("closure checks above m=" + std::to_string(kClosureMaxM) +
                         " require --allow-large");
  }
  if (config.primes.empty() || config.primes.size() > 2) {
    throw ParameterError("--primes takes one or two primes");
  }
  for (auto p : config.primes) {
    if (p <= kMinPrime || !is_prime(p)) {
      throw ParameterError(std::to_string(p) + " is not a prime above 10^6");
    }
  }
  if (config.primes.size() == 2 && config.primes[0] == config.primes[1]) {
    throw ParameterError("--primes must be distinct");
  }
  if (config.jobs == 0) throw ParameterError("--jobs must be positive");
}

nlohmann::json run_checks(const RunConfig& config) {
  validate(config);
  const int m = config.m;
  const OddGraph g = OddGraph::build(m);
  const auto fields = fields_for(config);
  const MGeneratorSet gens = m_generators(m);
  ClosureCache closures(g, config.jobs);
  std::vector<VerificationReport> reports;

  auto selected = [&](const std::string& name) { return config.checks.count(name) > 0; };
  auto guarded = [&](const std::string& name, const std::string& field, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      reports.push_back(internal_failure(name, field, e.what()));
    }
  };

  if (selected("eq7")) {
    guarded("eq7", "Z", [&] {
      SweepOptions options;
      options.extra_v = {m, m + 1};
      options.jobs = config.jobs;
      reports.push_back(verify_eq7_sweep(options));
    });
  }
  if (selected("lemma2")) {
    guarded("lemma2", "Z", [&] {
      reports.push_back(verify_distance_partition(g));
      reports.push_back(verify_lemma2(g));
    });
  }
  if (selected("closure")) {
    std::vector<std::size_t> dims;
    for (const auto& f : fields) {
      guarded("closure", f.name(), [&] {
        VerificationReport r;
        r.name = "closure";
        r.field = f.name();
        {
          ReportTimer timer(r);
          const auto& t = closures.get(f);
          BigInt expected = binomial(m + 4, 4);
          r.parameters = {{"m", m},
                          {"dimension", t.dimension},
                          {"expected", expected.str()},
                          {"rounds", t.rounds},
                          {"products_computed", t.products_computed}};
          if (BigInt(t.dimension) != expected) {
            r.fail({{"kind", "dimension"}, {"found", t.dimension}, {"expected", expected.str()}});
          }
          dims.push_back(t.dimension);
        }
        reports.push_back(r);
        const auto& t = closures.get(f);
        reports.push_back(verify_closure_stable(g, t));
        reports.push_back(verify_chain_products(g, t));
        reports.push_back(verify_block_closure(g, t, m <= 3 ? 200 : 40, 20240611));
      });
    }
    if (fields.size() > 1) {
      VerificationReport agree;
      agree.name = "closure_field_agreement";
      agree.field = "";
      for (const auto& f : fields) agree.field += (agree.field.empty() ? "" : ",") + f.name();
      agree.parameters = {{"dimensions", dims}};
      if (dims.size() != fields.size() || std::adjacent_find(dims.begin(), dims.end(),
                                                             std::not_equal_to<>()) != dims.end()) {
        agree.fail({{"kind", "dimensions differ across fields"}, {"dimensions", dims}});
      }
      reports.push_back(agree);
    }
  }
  if (selected("containment")) {
    for (const auto& f : fields) {
      guarded("containment", f.name(), [&] {
        const auto& t = closures.get(f);
        auto tm = verify_t_subset_m(g, t, gens);
        auto mt = verify_m_subset_t(g, t, gens);
        VerificationReport equal;
        equal.name = "t_equals_m";
        equal.field = f.name();
        equal.parameters = {{"m", m}, {"dimension", t.dimension}};
        if (!tm.passed() || !mt.passed()) {
          equal.fail({{"kind", "a containment failed"}});
        }
        reports.push_back(tm);
        reports.push_back(mt);
        reports.push_back(equal);
      });
    }
  }
  if (selected("lemma2425")) {
    for (const auto& f : fields) {
      guarded("lemma2425", f.name(), [&] { reports.push_back(verify_lemma24_25(g, closures.get(f))); });
    }
  }
  if (selected("basis")) {
    for (const auto& f : fields) {
      guarded("basis", f.name(), [&] { reports.push_back(verify_basis(g, gens, closures.get(f))); });
    }
  }
  if (selected("dimension")) {
    guarded("dimension", "Z", [&] {
      auto r = verify_dimension_formula(200);
      auto count = dimension_formula(m);
      r.parameters["m"] = m;
      r.parameters["double_sum"] = count.double_sum.str();
      r.parameters["binomial"] = count.binomial.str();
      r.parameters["generator_count"] = expected_generator_count(m);
      if (BigInt(expected_generator_count(m)) != count.binomial) {
        r.fail({{"kind", "generator count differs from C(m+4,4)"}});
      }
      reports.push_back(r);
    });
  }

  std::string field_names;
  for (const auto& f : fields) field_names += (field_names.empty() ? "" : ",") + f.name();
  nlohmann::json out;
  out["m"] = m;
  out["field"] = field_names;
  out["checks"] = nlohmann::json::array();
  for (const auto& r : reports) out["checks"].push_back(r.to_json());
  return out;
}

int cmd_build(int m, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  try {
    OddGraph g = OddGraph::build(m);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
    fs::path dir(out_dir);
    write_matrix_market_file((dir / "adjacency.mtx").string(), g.adjacency());
    for (int c = 0; c <= m; ++c) {
      write_matrix_market_file((dir / ("E" + std::to_string(c) + ".mtx")).string(), g.dual_idempotent(c));
    }
    std::ofstream manifest(dir / "vertices.json");
    if (!manifest) throw IoError("cannot write vertices.json in '" + out_dir + "'");
    manifest << g.manifest().dump() << '\n';
    if (!manifest) throw IoError("write to vertices.json failed");
    out << "wrote O_" << m + 1 << " (" << g.num_vertices() << " vertices, " << g.adjacency().nnz()
        << " adjacency nonzeros) to " << out_dir << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  nlohmann::json report;
  try {
    report = run_checks(config);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  try {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create '" + config.out_dir + "': " + ec.message());
    std::ofstream os(fs::path(config.out_dir) / "report.json");
    if (!os) throw IoError("cannot write report.json in '" + config.out_dir + "'");
    os << report.dump(2) << '\n';
    if (!os) throw IoError("write to report.json failed");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  if (config.format == "text") {
    out << render_text(report);
  } else {
    out << report.dump(2) << '\n';
  }
  bool all_pass = std::all_of(report["checks"].begin(), report["checks"].end(),
                              [](const nlohmann::json& c) { return c["status"] == "pass"; });
  return all_pass ? kOk : kVerificationFailed;
}

int cmd_tdim(int m_max, int closure_max, std::ostream& out, std::ostream& err) {
  if (m_max < 1) {
    err << "error: --max must be >= 1\n";
    return kUsageError;
  }
  out << std::left << std::setw(6) << "m" << std::setw(16) << "double_sum" << std::setw(16)
      << "C(m+4,4)" << "closure_dim\n";
  bool ok = true;
  for (int m = 1; m <= m_max; ++m) {
    DimensionCount count;
    try {
      count = dimension_formula(m);
    } catch (const FormulaError& e) {
      err << "error: " << e.what() << '\n';
      return kVerificationFailed;
    }
    std::string closure_col = "skipped";
    if (m <= closure_max && m <= kDefaultMaxM) {
      auto t = closure(OddGraph::build(m));
      closure_col = std::to_string(t.dimension);
      ok = ok && BigInt(t.dimension) == count.binomial;
    }
    out << std::setw(6) << m << std::setw(16) << count.double_sum.str() << std::setw(16)
        << count.binomial.str() << closure_col << '\n';
  }
  return ok ? kOk : kVerificationFailed;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Terwilliger algebra of the Odd graphs: construction and verification"};
  app.require_subcommand(1);

  int build_m = 0;
  std::string build_out;
  auto* build = app.add_subcommand("build", "Write adjacency, dual idempotents and vertex manifest");
  build->add_option("--m", build_m, "Odd graph parameter (graph O_{m+1})")->required();
  build->add_option("--out", build_out, "Output directory")->required();

  RunConfig config;
  std::string checks = "all";
  std::string primes = std::to_string(kDefaultPrime) + "," + std::to_string(kSecondPrime);
  auto* verify = app.add_subcommand("verify", "Run verification checks and write report.json");
  verify->add_option("--m", config.m, "Odd graph parameter")->required();
  verify->add_option("--checks", checks, "Comma-separated checks or 'all'");
  verify->add_option("--primes", primes, "One or two primes above 10^6, comma-separated");
  verify->add_flag("--exact", config.exact, "Also run exact rational elimination (default for m <= 3)");
  verify->add_flag("--allow-large", config.allow_large, "Allow closure checks for m = 6");
  verify->add_option("--jobs", config.jobs, "Worker threads for products and sweeps");
  verify->add_option("--out", config.out_dir, "Output directory")->required();
  verify->add_option("--format", config.format, "Stdout format")->check(CLI::IsMember({"json", "text"}));

  int tdim_max = 0;
  int tdim_closure = kClosureMaxM;
  auto* tdim = app.add_subcommand("tdim", "Tabulate the dimension count");
  tdim->add_option("--max", tdim_max, "Largest m")->required();
  tdim->add_option("--closure-max", tdim_closure, "Largest m for which the closure is computed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  if (*build) return cmd_build(build_m, build_out, out, err);
  if (*verify) {
    config.checks.clear();
    std::stringstream ss(checks);
    for (std::string item; std::getline(ss, item, ',');) {
      if (item == "all") {
        config.checks.insert(known_checks().begin(), known_checks().end());
      } else if (!item.empty()) {
        config.checks.insert(item);
      }
    }
    config.primes.clear();
    std::stringstream ps(primes);
    for (std::string item; std::getline(ps, item, ',');) {
      try {
        std::size_t used = 0;
        config.primes.push_back(std::stoull(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        err << "error: bad prime '" << item << "'\n";
        return kUsageError;
      }
    }
    return cmd_verify(config, out, err);
  }
  return cmd_tdim(tdim_max, tdim_closure, out, err);
}

}  // namespace oddterw::cli
