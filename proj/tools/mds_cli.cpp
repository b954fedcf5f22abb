// mds: command-line front end. JSON results go to stdout, diagnostics to
// stderr. Exit codes: 0 ok, 1 error, 2 witness found.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "mds/mds.hpp"

namespace {

using mds::i64;
using mds::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitWitness = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mds::Error(mds::ErrorKind::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

mds::SystemDescriptor load_descriptor(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw mds::Error(mds::ErrorKind::Validation, path + ": malformed JSON: " + e.what());
  }
  auto d = mds::parse_descriptor(j);
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
  return d;
}

struct Options {
  std::string system_file, constraints_file;
  i64 N = 1000, P = 0, t = 0, bound = 10;
  int B = 0;
  std::string q_list, csv_file;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool deterministic = false;
  bool override_convergence = false;
};

mds::EvalOptions eval_options(const Options& o) {
  mds::EvalOptions e;
  e.override_convergence = o.override_convergence;
  e.threads = o.threads;
  return e;
}

mds::SeriesPoint series_point(const mds::SystemDescriptor& d) {
  if (d.s.empty() && d.system.t() > 0) throw mds::Error(mds::ErrorKind::Validation, "s: missing");
  return d.s;
}

i64 tau_cap_for(i64 a, i64 b) { return std::clamp<i64>(std::max(a, b), 1000, mds::kMaxTauTable); }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_eval(const Options& o) {
  auto d = load_descriptor(o.system_file);
  auto c = mds::build_coefficients(d, mds::uses_tau(d) ? tau_cap_for(o.N, 0) : 1);
  auto s = series_point(d);
  auto opt = eval_options(o);
  auto v = mds::direct_sum(d.system, c, s, o.N, opt);
  double tail = o.N >= 2 ? std::abs(v - mds::direct_sum(d.system, c, s, o.N / 2, opt)) : 0.0;
  json out = {{"direct", mds::detail::complex_json(v)}, {"direct_tail", tail}, {"N", o.N},
              {"empty_variety", d.system.empty_variety()},
              {"formal", !s.empty() && !(mds::min_real_part(s) > 1.0)}};
  if (d.system.empty_variety()) std::cerr << "warning: the system has an inconsistent zero row; the variety is empty\n";
  emit(out);
  return kExitOk;
}

int cmd_compare(const Options& o) {
  auto d = load_descriptor(o.system_file);
  mds::EvalParams params;
  params.N = o.N;
  params.P = o.P > 0 ? o.P : o.N;
  params.B = o.B;
  auto c = mds::build_coefficients(d, mds::uses_tau(d) ? tau_cap_for(params.N, params.P) : 1);
  auto report = mds::compare(d.system, c, series_point(d), params, eval_options(o));
  json out = mds::to_json(report);
  out["deterministic"] = true;
  if (report.formal) std::cerr << "warning: some Re s_j <= 1; values are formal truncations\n";
  emit(out);
  return kExitOk;
}

int cmd_normalize(const Options& o) {
  auto d = load_descriptor(o.system_file);
  auto n = mds::normalize(d.system);
  if (n.empty_variety) std::cerr << "warning: empty variety (zero row with omega != omega_prime)\n";
  emit(mds::to_json(n));
  return kExitOk;
}

int cmd_reduce_support(const Options& o) {
  auto d = load_descriptor(o.system_file);
  auto r = mds::support_reducible(d.system.A(), o.bound);
  emit(mds::to_json(r, o.bound));
  return kExitOk;
}

template <class V>
int report_property_s(const V& variety, i64 N) {
  auto r = mds::check_property_S(variety, N);
  emit(mds::to_json(r, N));
  return r.holds() ? kExitOk : kExitWitness;
}

int cmd_check_s(const Options& o) {
  if (!o.constraints_file.empty()) {
    if (o.t < 1) throw mds::Error(mds::ErrorKind::InvalidArgument, "--t is required with --constraints");
    return report_property_s(mds::parse_constraints(read_file(o.constraints_file), static_cast<std::size_t>(o.t)), o.N);
  }
  if (o.system_file.empty()) throw mds::Error(mds::ErrorKind::InvalidArgument, "one of --constraints or --system is required");
  return report_property_s(load_descriptor(o.system_file).system, o.N);
}

int cmd_enumerate(const Options& o) {
  if (!o.constraints_file.empty()) {
    if (o.t < 1) throw mds::Error(mds::ErrorKind::InvalidArgument, "--t is required with --constraints");
    auto V = mds::parse_constraints(read_file(o.constraints_file), static_cast<std::size_t>(o.t));
    emit(mds::points_json(mds::enumerate_box(V, o.N)));
    return kExitOk;
  }
  if (o.system_file.empty()) throw mds::Error(mds::ErrorKind::InvalidArgument, "one of --constraints or --system is required");
  emit(mds::points_json(mds::enumerate_box(load_descriptor(o.system_file).system, o.N)));
  return kExitOk;
}

std::vector<i64> parse_q_list(const std::string& text) {
  std::vector<i64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw mds::Error(mds::ErrorKind::InvalidArgument, "--q: not an integer: \"" + item + "\"");
    }
  }
  if (out.empty()) throw mds::Error(mds::ErrorKind::InvalidArgument, "--q: expected a comma-separated list of primes");
  return out;
}

int cmd_moment(const Options& o) {
  auto d = load_descriptor(o.system_file);
  auto c = mds::build_coefficients(d, mds::uses_tau(d) ? tau_cap_for(o.N, 0) : 1);
  auto ex = mds::decay_experiment(d.system, c, series_point(d), parse_q_list(o.q_list), o.N, eval_options(o));
  for (const auto& w : ex.warnings) std::cerr << "warning: " << w << "\n";
  if (!o.csv_file.empty()) {
    std::ofstream csv(o.csv_file);
    if (!csv) throw mds::Error(mds::ErrorKind::InvalidArgument, "cannot write " + o.csv_file);
    csv << mds::moment_csv(ex);
  }
  emit(mds::to_json(ex));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Restricted multiple Dirichlet series over Laurent monomial varieties"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--threads", o.threads, "worker threads for Euler products")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", o.deterministic, "ordered reductions (always on)");
  app.add_flag("--override-convergence", o.override_convergence, "allow Re s_j <= 1 as formal truncations");

  auto* eval = app.add_subcommand("eval", "direct sum over the box [1,N]^t");
  eval->add_option("--system", o.system_file, "system descriptor (JSON)")->required();
  eval->add_option("--N", o.N, "box bound");

  auto* compare = app.add_subcommand("compare", "direct sum vs truncated Euler product");
  compare->add_option("--system", o.system_file, "system descriptor (JSON)")->required();
  compare->add_option("--N", o.N, "box bound");
  compare->add_option("--P", o.P, "prime bound (default: N)");
  compare->add_option("--B", o.B, "local exponent bound (default: from s)");

  auto* normalize = app.add_subcommand("normalize", "canonical form under row operations");
  normalize->add_option("--system", o.system_file, "system descriptor (JSON)")->required();

  auto* check_s = app.add_subcommand("check-s", "search for per-prime recombination counterexamples");
  check_s->add_option("--constraints", o.constraints_file, "polynomial constraints file");
  check_s->add_option("--system", o.system_file, "system descriptor (JSON)");
  check_s->add_option("--t", o.t, "variable count for --constraints");
  check_s->add_option("--N", o.N, "box bound");

  auto* reduce = app.add_subcommand("reduce-support", "search for a support<=2 generating set of the row lattice");
  reduce->add_option("--system", o.system_file, "system descriptor (JSON)")->required();
  reduce->add_option("--bound", o.bound, "coefficient bound (<= 20)");

  auto* moment = app.add_subcommand("moment", "character-average decay experiment");
  moment->add_option("--system", o.system_file, "system descriptor (JSON)")->required();
  moment->add_option("--q", o.q_list, "comma-separated ascending primes")->required();
  moment->add_option("--N", o.N, "truncation of each L-series and of the reference sum");
  moment->add_option("--csv", o.csv_file, "also write (q, e(q)) as CSV");

  auto* enumerate = app.add_subcommand("enumerate", "integer points in the box [1,N]^t");
  enumerate->add_option("--constraints", o.constraints_file, "polynomial constraints file");
  enumerate->add_option("--system", o.system_file, "system descriptor (JSON)");
  enumerate->add_option("--t", o.t, "variable count for --constraints");
  enumerate->add_option("--N", o.N, "box bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*eval) return cmd_eval(o);
    if (*compare) return cmd_compare(o);
    if (*normalize) return cmd_normalize(o);
    if (*check_s) return cmd_check_s(o);
    if (*reduce) return cmd_reduce_support(o);
    if (*moment) return cmd_moment(o);
    if (*enumerate) return cmd_enumerate(o);
  } catch (const mds::Error& e) {
    std::cerr << "error (" << mds::to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
