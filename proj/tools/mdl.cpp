// mdl: codelengths, parametric complexity and MDL model selection from the
// command line.
//
// Exit status: 0 success, 1 input error, 2 usage or bounds error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "mdl/demo.hpp"
#include "mdl/io.hpp"
#include "mdl/oracle.hpp"
#include "mdl/regress.hpp"
#include "mdl/select.hpp"
#include "mdl/universal.hpp"

namespace {

constexpr int kInputError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string format = "tsv";
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

void emit(const mdl::io::RunReport& r, const Common& c) {
  if (c.format == "json") {
    std::cout << mdl::io::to_json(r).dump(2) << '\n';
  } else {
    std::cout << mdl::io::to_tsv(r);
  }
}

void collect_warnings(mdl::io::RunReport& r) {
  for (const auto& m : r.models) {
    for (const auto& f : m.flags) {
      if (f == "asymptotic" || f == "boundary-ml" || f == "variance-floor" ||
          f.rfind("approximation", 0) == 0 || f.rfind("plugin-fallback", 0) == 0 ||
          f.rfind("not computable", 0) == 0) {
        r.warnings.push_back(m.model + ": " + f);
      }
    }
  }
}

// --- complexity -------------------------------------------------------------

struct ComplexityArgs {
  std::string model = "bernoulli";
  std::uint64_t n = 0;
  std::string method = "exact";
  double K = 1.0;
  double sigma = 1.0;
};

mdl::io::RunReport run_complexity(const ComplexityArgs& a, const Common& c) {
  using namespace mdl;
  io::RunReport r;
  r.command = "complexity --model " + a.model + " --n " + std::to_string(a.n) + " --method " + a.method;
  r.n = a.n;
  if (a.n == 0) throw UsageError("--n must be >= 1");
  if (a.method != "exact" && a.method != "enumerate" && a.method != "asymptotic") {
    throw UsageError("unknown method '" + a.method + "'");
  }

  UniversalCodeReport rep;
  rep.data_fit = Bits(0.0);
  rep.code = CodeKind::NmlExact;

  if (a.model == "gaussian") {
    if (a.method != "exact") {
      throw UsageError("gaussian complexity has a closed form only; use --method exact");
    }
    if (!(a.K > 0.0) || !(a.sigma > 0.0)) throw UsageError("--K and --sigma must be positive");
    rep.model = "gaussian:K=" + io::format_bits(Bits(a.K)) + ",sigma=" + io::format_bits(Bits(a.sigma));
    rep.complexity = comp_conditional_gaussian(a.K, a.n, a.sigma);
    rep.flags.push_back("conditional");
  } else {
    ModelFamily fam;
    if (a.model == "bernoulli") {
      fam = ModelFamily::bernoulli();
    } else if (a.model.rfind("markov:", 0) == 0) {
      unsigned k = 0;
      try {
        k = static_cast<unsigned>(std::stoul(a.model.substr(7)));
      } catch (const std::exception&) {
        throw UsageError("malformed model '" + a.model + "', expected markov:<k>");
      }
      if (k > kMaxMarkovOrder) throw UsageError("order too large");
      fam = ModelFamily::markov(k);
    } else {
      throw UsageError("unknown model '" + a.model + "'");
    }
    rep.model = fam.id();
    if (a.method == "asymptotic") {
      rep.code = CodeKind::NmlAsymptotic;
      rep.complexity = comp_asymptotic(fam, a.n);
      rep.flags.push_back("asymptotic");
      r.warnings.push_back("approximation: o(1) term dropped; unreliable for small n");
    } else {
      const bool closed_form = fam.order == 0 && a.method == "exact";
      if (!closed_form && a.n > oracle::kEnumerationCap) {
        throw UsageError("method '" + a.method + "' enumerates 2^n sequences; n=" +
                         std::to_string(a.n) + " exceeds the cap of " +
                         std::to_string(oracle::kEnumerationCap));
      }
      if (a.n <= fam.order) throw UsageError("need n > order");
      if (closed_form) {
        rep.complexity = comp_exact_bernoulli(a.n);
      } else {
        rep.complexity = oracle::enumerate_family(fam, a.n, c.threads).comp;
        rep.flags.push_back("enumerated");
      }
    }
  }
  rep.total = rep.data_fit + rep.complexity;
  r.models.push_back(rep);
  return r;
}

// --- select -----------------------------------------------------------------

struct SelectArgs {
  std::string kind;
  std::string input;
  std::string code;
  int max_order = 5;
  int max_degree = 6;
};

std::string load(const std::string& path) {
  try {
    return mdl::io::read_file(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

mdl::io::RunReport run_select(const SelectArgs& a) {
  using namespace mdl;
  io::RunReport r;
  r.source = a.input;
  if (a.kind == "markov") {
    const std::string code = a.code.empty() ? "bayes-jeffreys" : a.code;
    r.command = "select markov --input " + a.input + " --max-order " + std::to_string(a.max_order) +
                " --code " + code;
    MarkovCode mc;
    try {
      mc = parse_markov_code(code);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const std::string text = load(a.input);
    BinarySequence x = [&] {
      try {
        return io::parse_sequence(text);
      } catch (const io::ParseError& e) {
        throw InputError(a.input + ": " + e.what());
      }
    }();
    r.n = x.size();
    if (a.max_order < 0 || static_cast<std::size_t>(a.max_order) >= x.size()) {
      throw UsageError("--max-order must lie in [0, n-1] (n=" + std::to_string(x.size()) + ")");
    }
    if (static_cast<unsigned>(a.max_order) > kMaxMarkovOrder) throw UsageError("--max-order too large");
    if (mc == MarkovCode::NmlExact && x.size() > oracle::kEnumerationCap) {
      throw UsageError("code nml enumerates 2^n sequences; n=" + std::to_string(x.size()) +
                       " exceeds the cap of " + std::to_string(oracle::kEnumerationCap));
    }
    auto sel = select_markov_order(x, static_cast<unsigned>(a.max_order), mc);
    r.models = std::move(sel.reports);
    r.selected = sel.ranking.selected;
    r.confidence = sel.ranking.confidence;
    r.ranking = std::move(sel.ranking);
  } else if (a.kind == "poly") {
    const std::string code = a.code.empty() ? "plugin" : a.code;
    r.command = "select poly --input " + a.input + " --max-degree " + std::to_string(a.max_degree) +
                " --code " + code;
    RegressionCode rc;
    try {
      rc = parse_regression_code(code);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const std::string text = load(a.input);
    RegressionData data = [&] {
      try {
        return io::parse_csv(text);
      } catch (const io::ParseError& e) {
        throw InputError(a.input + ": " + e.what());
      }
    }();
    r.n = data.size();
    if (a.max_degree < 0 || static_cast<std::size_t>(a.max_degree) + 2 > data.size()) {
      throw UsageError("--max-degree needs max_degree + 2 <= n (n=" + std::to_string(data.size()) + ")");
    }
    auto sel = select_degree(data, static_cast<unsigned>(a.max_degree), rc);
    r.models = std::move(sel.reports);
    r.selected = sel.ranking.selected;
    r.confidence = sel.ranking.confidence;
    r.ranking = std::move(sel.ranking);
  } else {
    throw UsageError("select: kind must be 'markov' or 'poly'");
  }
  collect_warnings(r);
  return r;
}

// --- demo -------------------------------------------------------------------

mdl::io::RunReport run_demo(std::size_t n, const Common& c) {
  using namespace mdl;
  if (n < 100 || n % 4 != 0) throw UsageError("--n must be a multiple of 4 and at least 100");
  const auto d = demo::demo_sequences(n, c.seed);
  io::RunReport r;
  r.command = "demo --n " + std::to_string(n) + " --seed " + std::to_string(c.seed);
  r.n = n;
  for (const auto& s : d.sequences) {
    UniversalCodeReport rep = s.best;
    rep.model = s.name + "/" + rep.model;
    rep.flags.push_back("generator=" + s.generator);
    rep.flags.push_back("rate=" + io::format_bits(Bits(s.rate)));
    r.models.push_back(std::move(rep));
  }
  if (!d.periodic_ok) {
    r.warnings.push_back("periodic sequence exceeds " + io::format_bits(Bits(d.periodic_bound)) + " bits");
  }
  if (!d.random_ok) r.warnings.push_back("fair-coin sequence compressed by more than 20 bits");
  if (!d.biased_ok) {
    r.warnings.push_back("biased-coin rate outside 5% of " + io::format_bits(Bits(d.biased_target_rate)));
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum description length: codelengths, complexity and model selection"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads for enumeration (advisory)")
      ->capture_default_str();
  app.add_option("--seed", common.seed, "Seed for stochastic commands")->capture_default_str();

  ComplexityArgs ca;
  auto* complexity = app.add_subcommand("complexity", "Parametric complexity COMP_n in bits");
  complexity->add_option("--model", ca.model, "bernoulli | markov:<k> | gaussian")->capture_default_str();
  complexity->add_option("--n", ca.n, "Sample size")->required();
  complexity->add_option("--method", ca.method, "exact | enumerate | asymptotic")->capture_default_str();
  complexity->add_option("--K", ca.K, "Gaussian: bound on |mean|")->capture_default_str();
  complexity->add_option("--sigma", ca.sigma, "Gaussian: known standard deviation")->capture_default_str();

  SelectArgs sa;
  auto* select = app.add_subcommand("select", "Select a Markov order or polynomial degree");
  select->add_option("kind", sa.kind, "markov | poly")->required();
  select->add_option("--input", sa.input, "Sequence file (markov) or x,y CSV (poly)")->required();
  select->add_option("--code", sa.code,
                     "markov: bayes-jeffreys | bayes-uniform | two-part | two-part-crude | plugin | "
                     "plugin-laplace | nml | nml-asymptotic | ml; poly: plugin | two-part | asymptotic | ml");
  select->add_option("--max-order", sa.max_order, "Largest Markov order")->capture_default_str();
  select->add_option("--max-degree", sa.max_degree, "Largest polynomial degree")->capture_default_str();

  std::size_t demo_n = 10000;
  auto* demo = app.add_subcommand("demo", "Three-sequence compression demonstration");
  demo->add_option("--n", demo_n, "Sequence length (multiple of 4, >= 100)")->capture_default_str();

  std::string gen_spec;
  std::size_t gen_n = 0;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "Write a synthetic binary sequence");
  generate->add_option("--spec", gen_spec, "repeat:<bits> | bernoulli:<p> | markov:<k>:<t0>,...")->required();
  generate->add_option("--n", gen_n, "Length")->required();
  generate->add_option("--output", gen_out, "Output file (default: standard output)");

  // Subcommands accept the global flags too.
  for (auto* sub : {complexity, select, demo, generate}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*complexity) {
      emit(run_complexity(ca, common), common);
    } else if (*select) {
      emit(run_select(sa), common);
    } else if (*demo) {
      emit(run_demo(demo_n, common), common);
    } else if (*generate) {
      mdl::BinarySequence x = [&] {
        try {
          return mdl::io::generate_sequence(gen_spec, gen_n, common.seed);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }();
      if (gen_out.empty()) {
        std::cout << mdl::io::format_sequence(x);
      } else {
        try {
          mdl::io::write_sequence_file(gen_out, x);
        } catch (const std::exception& e) {
          throw InputError(e.what());
        }
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return 0;
}
