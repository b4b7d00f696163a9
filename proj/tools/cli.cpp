#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "titchlab/arith_core.hpp"
#include "titchlab/errors.hpp"
#include "titchlab/exp_sums.hpp"
#include "titchlab/experiments.hpp"
#include "titchlab/parallel.hpp"

namespace titchlab::cli {

namespace {

using Rows = std::vector<ExperimentResult>;
using Params = std::vector<std::pair<std::string, double>>;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

double rounded(double v) { return std::isfinite(v) ? std::stod(fmt(v)) : v; }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string params_json(const Params& params) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) j[k] = rounded(v);
  return j.dump();
}

void write_rows(const RunConfig& cfg, const Rows& rows, std::ostream& out) {
  if (cfg.format == Format::csv) {
    out << "experiment,scale,lhs,main_term,abs_err,rel_err,wall_s,params_json\n";
    auto opt = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string(); };
    for (const auto& r : rows)
      out << r.experiment << ',' << r.scale << ',' << fmt(r.lhs) << ',' << opt(r.main_term) << ','
          << opt(r.abs_err) << ',' << opt(r.rel_err) << ',' << fmt(r.wall_s) << ','
          << csv_quote(params_json(r.params)) << '\n';
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    auto opt = [](const std::optional<double>& v) {
      return v ? nlohmann::ordered_json(rounded(*v)) : nlohmann::ordered_json(nullptr);
    };
    j["experiment"] = r.experiment;
    j["scale"] = r.scale;
    j["lhs"] = rounded(r.lhs);
    j["main_term"] = opt(r.main_term);
    j["abs_err"] = opt(r.abs_err);
    j["rel_err"] = opt(r.rel_err);
    j["wall_s"] = rounded(r.wall_s);
    j["params"] = nlohmann::ordered_json::parse(params_json(r.params));
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// parameter access

std::int64_t get_i(const RunConfig& c, const std::string& k, std::int64_t def) {
  const auto it = c.ints.find(k);
  return it == c.ints.end() ? def : it->second;
}

std::int64_t req_i(const RunConfig& c, const std::string& k) {
  const auto it = c.ints.find(k);
  if (it == c.ints.end()) throw DomainError("missing required option --" + k);
  return it->second;
}

double get_r(const RunConfig& c, const std::string& k, double def) {
  const auto it = c.reals.find(k);
  return it == c.reals.end() ? def : it->second;
}

bool has(const RunConfig& c, const std::string& k) { return c.ints.count(k) || c.reals.count(k); }

u64 positive(std::int64_t v, const char* name) {
  if (v < 1) throw DomainError(std::string("--") + name + " must be >= 1");
  return static_cast<u64>(v);
}

DirichletCharacter character(u64 q, std::int64_t k) {
  if (q < 1) throw DomainError("character modulus must be >= 1");
  if (q > kMaxCharacterModulus) throw CapacityError("character modulus too large");
  auto chars = enumerate_characters(q);
  if (k < 0 || static_cast<u64>(k) >= chars.size())
    throw DomainError("character index out of range: modulus " + std::to_string(q) + " has " +
                      std::to_string(chars.size()) + " characters");
  return chars[static_cast<std::size_t>(k)];
}

ShiftedSumSpec shifted_spec(const RunConfig& c) {
  ShiftedSumSpec s;
  s.X = req_i(c, "x");
  s.sigma = static_cast<int>(get_i(c, "sigma", 1));
  s.f = get_i(c, "f", 1);
  s.Y = get_i(c, "y", s.X / 2);
  s.validate();
  return s;
}

Params spec_params(const ShiftedSumSpec& s) {
  return {{"sigma", s.sigma}, {"f", static_cast<double>(s.f)}, {"Y", static_cast<double>(s.Y)},
          {"X", static_cast<double>(s.X)}};
}

TauTable tau_table(const RunConfig& c, u64 n_max) {
  if (n_max > kTauTableMax)
    throw CapacityError("tau table of size " + std::to_string(n_max) + " exceeds " + std::to_string(kTauTableMax));
  const auto it = c.strings.find("tau_cache");
  if (it != c.strings.end() && !it->second.empty()) {
    if (std::filesystem::exists(it->second)) {
      auto t = load_tau_table(it->second);
      if (t.n_max >= n_max) return t;
    }
    auto t = build_tau_table(n_max, c.threads);
    save_tau_table(t, it->second);
    return t;
  }
  return build_tau_table(n_max, c.threads);
}

// ---------------------------------------------------------------------------
// subcommands

Rows cmd_titchmarsh(const RunConfig& c) {
  const auto s = shifted_spec(c);
  const u64 P0 = positive(get_i(c, "p0", 1'000'000), "p0");
  auto p = spec_params(s);
  p.emplace_back("P0", static_cast<double>(P0));
  return {compare("titchmarsh", s.X, titchmarsh_lhs(s, c.threads), titchmarsh_main_term(s, P0), p)};
}

Rows cmd_hooley(const RunConfig& c) {
  const auto s = shifted_spec(c);
  const u64 P0 = positive(get_i(c, "p0", 1'000'000), "p0");
  const auto chi1 = character(positive(get_i(c, "q1", 1), "q1"), get_i(c, "k1", 0));
  const auto chi2 = character(positive(get_i(c, "q2", 4), "q2"), get_i(c, "k2", 1));
  const auto main = hooley_main_term(chi1, chi2, s, P0);
  const auto lhs = hooley_lhs(chi1, chi2, s, c.threads);
  auto p = spec_params(s);
  p.insert(p.end(), {{"q1", static_cast<double>(chi1.modulus())}, {"k1", static_cast<double>(get_i(c, "k1", 0))},
                     {"q2", static_cast<double>(chi2.modulus())}, {"k2", static_cast<double>(get_i(c, "k2", 1))},
                     {"P0", static_cast<double>(P0)}, {"lhs_imag", lhs.imag()}, {"main_imag", main.imag()}});
  return {compare("hooley", s.X, lhs.real(), main.real(), p)};
}

Rows cmd_two_squares(const RunConfig& c) {
  const u64 n = positive(req_i(c, "n"), "n");
  const u64 P0 = positive(get_i(c, "p0", 1'000'000), "p0");
  if (c.flag_lambda)
    return {compare("two_squares_lambda", static_cast<i64>(n), two_squares_lhs_lambda(n), std::nullopt,
                    {{"n", static_cast<double>(n)}})};
  const double lhs = static_cast<double>(two_squares_lhs(n));
  return {compare("two_squares", static_cast<i64>(n), lhs, two_squares_main_term(n, P0),
                  {{"n", static_cast<double>(n)}, {"P0", static_cast<double>(P0)}})};
}

Rows cmd_cusp_shift(const RunConfig& c) {
  const auto s = shifted_spec(c);
  const auto table = tau_table(c, static_cast<u64>(s.max_shifted()));
  const double lhs = cusp_shift_lhs(table, s, c.threads);
  auto p = spec_params(s);
  p.emplace_back("abs_lhs_over_X", std::fabs(lhs) / static_cast<double>(s.X));
  return {compare("cusp_shift", s.X, lhs, std::nullopt, p)};
}

Rows cmd_triple_shift(const RunConfig& c) {
  const i64 r = get_i(c, "r", 1), f = get_i(c, "f", 1);
  const i64 x = get_i(c, "x", 10);
  const u64 X1 = positive(get_i(c, "x1", x), "x1"), X2 = positive(get_i(c, "x2", x), "x2"),
            X3 = positive(get_i(c, "x3", x), "x3");
  if (r < 1) throw DomainError("--r must be >= 1");
  const i128 top = static_cast<i128>(r) * (2 * X1) * (2 * X2) * (2 * X3) + f;
  if (top < 1 || top > static_cast<i128>(kTauTableMax)) throw CapacityError("triple-shift: r (2X)^3 + f exceeds the tau table limit");
  const auto table = tau_table(c, static_cast<u64>(top));
  const auto res = triple_shift_lhs(table, r, f, X1, X2, X3, {get_r(c, "amplitude", 1.0)});
  return {compare("triple_shift", static_cast<i64>(X1), res.value, std::nullopt,
                  {{"r", static_cast<double>(r)}, {"f", static_cast<double>(f)}, {"X1", static_cast<double>(X1)},
                   {"X2", static_cast<double>(X2)}, {"X3", static_cast<double>(X3)},
                   {"trivial", res.trivial}, {"ratio", res.ratio}})};
}

Rows cmd_double_shift(const RunConfig& c) {
  const i64 m1 = get_i(c, "m1", 1), m2 = get_i(c, "m2", 2), f = get_i(c, "f", 1);
  const u64 X = positive(req_i(c, "x"), "x");
  i128 top = 1;
  for (const i64 m : {m1, m2})
    top = std::max({top, static_cast<i128>(m) * static_cast<i128>(2 * X) + f, static_cast<i128>(m) * static_cast<i128>(X) + f});
  if (top > static_cast<i128>(kTauTableMax)) throw CapacityError("double-shift: m (2X) + f exceeds the tau table limit");
  const auto table = tau_table(c, static_cast<u64>(top));
  const auto res = double_shift_lhs(table, m1, m2, f, X, {get_r(c, "amplitude", 1.0)});
  return {compare("double_shift", static_cast<i64>(X), res.value, std::nullopt,
                  {{"m1", static_cast<double>(m1)}, {"m2", static_cast<double>(m2)}, {"f", static_cast<double>(f)},
                   {"X", static_cast<double>(X)}, {"trivial", res.trivial}, {"ratio", res.ratio}})};
}

Rows cmd_dispersion(const RunConfig& c) {
  DispersionSpec s;
  s.x = positive(req_i(c, "x"), "x");
  s.Q = positive(get_i(c, "Q", static_cast<std::int64_t>(isqrt(s.x))), "Q");
  s.c = positive(get_i(c, "c", 1), "c");
  s.c0 = get_i(c, "c0", 0);
  s.d = positive(get_i(c, "d", 1), "d");
  s.d0 = get_i(c, "d0", 0);
  s.a1 = get_i(c, "a1", 1);
  s.a2 = get_i(c, "a2", 1);
  s.validate();
  const auto res = dispersion(s, c.threads);
  return {compare("dispersion", static_cast<i64>(s.x), res.value, std::nullopt,
                  {{"x", static_cast<double>(s.x)}, {"Q", static_cast<double>(s.Q)}, {"c", static_cast<double>(s.c)},
                   {"c0", static_cast<double>(s.c0)}, {"d", static_cast<double>(s.d)}, {"d0", static_cast<double>(s.d0)},
                   {"a1", static_cast<double>(s.a1)}, {"a2", static_cast<double>(s.a2)},
                   {"admissible_q", static_cast<double>(res.admissible_q)},
                   {"skipped_q", static_cast<double>(res.skipped_q)},
                   {"abs_over_x", std::fabs(res.value) / static_cast<double>(s.x)}})};
}

Rows cmd_kloosterman(const RunConfig& c) {
  if (has(c, "sweep_cmax")) {
    const u64 cmax = positive(req_i(c, "sweep_cmax"), "sweep-cmax");
    const u64 pairs = positive(get_i(c, "pairs", 100), "pairs");
    const auto w = weil_sweep(cmax, pairs, c.seed, c.threads);
    return {compare("weil_sweep", static_cast<i64>(cmax), w.max_ratio, std::nullopt,
                    {{"pairs_per_c", static_cast<double>(pairs)}, {"checked", static_cast<double>(w.checked)},
                     {"violations", static_cast<double>(w.violations)}})};
  }
  const i64 m = req_i(c, "m"), n = req_i(c, "n");
  const u64 cc = positive(req_i(c, "c"), "c");
  const double s = kloosterman(m, n, cc);
  const auto w = weil_check(m, n, cc);
  return {compare("kloosterman", static_cast<i64>(cc), s, std::nullopt,
                  {{"m", static_cast<double>(m)}, {"n", static_cast<double>(n)}, {"c", static_cast<double>(cc)},
                   {"weil_ratio", w.ratio}, {"weil_holds", w.holds ? 1.0 : 0.0}})};
}

Rows cmd_char_triple_sum(const RunConfig& c) {
  const double eps = get_r(c, "eps", 0.1);
  if (has(c, "exhaustive_cmax")) {
    const u64 cmax = positive(req_i(c, "exhaustive_cmax"), "exhaustive-cmax");
    const auto s = char_triple_sweep_exhaustive(cmax, eps, c.threads);
    return {compare("char_triple_exhaustive", static_cast<i64>(cmax), s.max_ratio, std::nullopt,
                    {{"eps", eps}, {"cases", static_cast<double>(s.cases)}, {"argmax_c", static_cast<double>(s.argmax[5])}})};
  }
  if (has(c, "random")) {
    const u64 n = positive(req_i(c, "random"), "random");
    const u64 cmax = positive(get_i(c, "cmax", 300), "cmax");
    const auto s = char_triple_sweep_random(n, cmax, c.seed, eps);
    return {compare("char_triple_random", static_cast<i64>(cmax), s.max_ratio, std::nullopt,
                    {{"eps", eps}, {"cases", static_cast<double>(s.cases)}, {"argmax_c", static_cast<double>(s.argmax[5])}})};
  }
  const i64 al = get_i(c, "alpha", 0), be = get_i(c, "beta", 0), h = get_i(c, "shift", 0);
  const i64 r = get_i(c, "r", 0), a = get_i(c, "a", 1);
  const u64 cc = positive(req_i(c, "c"), "c");
  const auto lit = char_triple_sum(al, be, h, r, a, cc);
  const double bound = char_triple_bound(al, be, h, a, cc, eps);
  return {compare("char_triple_sum", static_cast<i64>(cc), lit.real(), std::nullopt,
                  {{"alpha", static_cast<double>(al)}, {"beta", static_cast<double>(be)}, {"h", static_cast<double>(h)},
                   {"r", static_cast<double>(r)}, {"a", static_cast<double>(a)}, {"c", static_cast<double>(cc)},
                   {"imag", lit.imag()}, {"eps", eps}, {"bound", bound}, {"ratio", std::abs(lit) / bound}})};
}

Rows cmd_delta_check(const RunConfig& c) {
  const double T = get_r(c, "T", 1e4);
  const i64 n_max = get_i(c, "n_max", 50);
  const auto k = make_delta_kernel(T);
  if (static_cast<double>(n_max) > T) throw DomainError("--n-max must not exceed T");
  Rows rows;
  const i64 scale = static_cast<i64>(T);
  rows.push_back(compare("delta_symbol_zero", scale, delta_symbol_eval(k, 0), 1.0, {{"T", T}}));
  double worst = 0.0;
  for (i64 n = -n_max; n <= n_max; ++n)
    if (n != 0) worst = std::max(worst, std::fabs(delta_symbol_eval(k, n)));
  rows.push_back(compare("delta_symbol_offdiag_max", scale, worst, 0.0, {{"T", T}, {"n_max", static_cast<double>(n_max)}}));
  const auto g = delta_kernel_growth_check();
  for (const auto& rep : g.per_T)
    for (int j = 0; j < 3; ++j)
      rows.push_back(compare("delta_bounds_j" + std::to_string(j), static_cast<i64>(rep.T), rep.max_scaled[j], std::nullopt,
                             {{"fd_consistency", rep.fd_consistency},
                              {"zero_outside_support", rep.zero_outside_support ? 1.0 : 0.0},
                              {"grows", g.grows[j] ? 1.0 : 0.0}}));
  return rows;
}

Rows cmd_euler_product(const RunConfig& c) {
  const i64 a = get_i(c, "a", 1);
  const double s = get_r(c, "s", 0.0);
  const u64 P0 = positive(get_i(c, "p0", 1'000'000), "p0");
  Rows rows;
  if (has(c, "q")) {
    const auto chi = character(positive(req_i(c, "q"), "q"), get_i(c, "k", 0));
    const auto v = c_chi(chi, a, P0);
    rows.push_back(compare("c_chi", static_cast<i64>(P0), v.value.real(), std::nullopt,
                           {{"q", static_cast<double>(chi.modulus())}, {"k", static_cast<double>(get_i(c, "k", 0))},
                            {"f", static_cast<double>(a)}, {"imag", v.value.imag()}, {"tail_bound", v.tail_bound}}));
    return rows;
  }
  const auto v = c_s(a, s, P0);
  rows.push_back(compare("c_s", static_cast<i64>(P0), v.value, std::nullopt,
                         {{"a", static_cast<double>(a)}, {"s", s}, {"tail_bound", v.tail_bound}}));
  if (s == 0.0) {
    const auto d = c0_prime(a, P0);
    rows.push_back(compare("c0_prime", static_cast<i64>(P0), d.value, std::nullopt,
                           {{"a", static_cast<double>(a)}, {"abs_err", d.abs_err}}));
  }
  return rows;
}

Rows cmd_l_one(const RunConfig& c) {
  const auto chi = character(positive(req_i(c, "q"), "q"), req_i(c, "k"));
  const auto v = l_one(chi, get_r(c, "target", kDefaultLTarget));
  return {compare("l_one", static_cast<i64>(chi.modulus()), v.value.real(), std::nullopt,
                  {{"q", static_cast<double>(chi.modulus())}, {"k", static_cast<double>(req_i(c, "k"))},
                   {"conductor", static_cast<double>(chi.conductor())}, {"imag", v.value.imag()},
                   {"tail_bound", v.tail_bound}})};
}

Rows cmd_brun_titchmarsh(const RunConfig& c) {
  const u64 x = positive(req_i(c, "x"), "x"), y = positive(req_i(c, "y"), "y");
  const u64 qmax = positive(get_i(c, "qmax", 100), "qmax");
  const auto r = brun_titchmarsh_check(x, y, qmax);
  return {compare("brun_titchmarsh", static_cast<i64>(x), r.max_ratio, std::nullopt,
                  {{"y", static_cast<double>(y)}, {"q_max", static_cast<double>(qmax)},
                   {"argmax_q", static_cast<double>(r.argmax_q)}, {"argmax_a", static_cast<double>(r.argmax_a)},
                   {"classes", static_cast<double>(r.classes)}, {"flagged", r.flagged ? 1.0 : 0.0}})};
}

Rows dispatch(const RunConfig& c);

Rows cmd_trend(const RunConfig& c) {
  const auto it = c.strings.find("experiment");
  const std::string exp = it == c.strings.end() ? "titchmarsh" : it->second;
  if (exp == "trend" || exp == "selftest") throw DomainError("trend: unsupported experiment " + exp);
  if (c.scales.empty()) throw DomainError("trend: --scales is required");
  Rows rows;
  for (const std::int64_t X : c.scales) {
    RunConfig sub = c;
    sub.subcommand = exp;
    const char* key = (exp == "two-squares") ? "n" : "x";
    sub.ints[key] = X;
    if (c.reals.count("y_frac")) sub.ints["y"] = static_cast<std::int64_t>(c.reals.at("y_frac") * static_cast<double>(X));
    if (c.reals.count("f_frac")) sub.ints["f"] = static_cast<std::int64_t>(c.reals.at("f_frac") * static_cast<double>(X));
    const auto part = dispatch(sub);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

Rows dispatch(const RunConfig& c) {
  static const std::map<std::string, std::function<Rows(const RunConfig&)>> table = {
      {"titchmarsh", cmd_titchmarsh},       {"hooley", cmd_hooley},
      {"two-squares", cmd_two_squares},     {"cusp-shift", cmd_cusp_shift},
      {"triple-shift", cmd_triple_shift},   {"double-shift", cmd_double_shift},
      {"dispersion", cmd_dispersion},       {"kloosterman", cmd_kloosterman},
      {"char-triple-sum", cmd_char_triple_sum}, {"delta-check", cmd_delta_check},
      {"euler-product", cmd_euler_product}, {"l-one", cmd_l_one},
      {"brun-titchmarsh", cmd_brun_titchmarsh}, {"trend", cmd_trend},
  };
  const auto it = table.find(c.subcommand);
  if (it == table.end()) throw DomainError("unknown subcommand " + c.subcommand);
  if (!c.timing) return it->second(c);
  const auto t0 = std::chrono::steady_clock::now();
  auto rows = it->second(c);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : rows) r.wall_s = wall;
  return rows;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    if (config.threads > 0) set_default_threads(config.threads);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!config.output_path.empty()) {
      file.open(config.output_path, std::ios::binary);
      if (!file) throw DomainError("cannot open output file " + config.output_path);
      out = &file;
    }
    if (config.subcommand == "selftest") return selftest(config, *out);
    // compute everything before writing, so a failure leaves no partial output
    const auto rows = dispatch(config);
    std::ostringstream buf;
    write_rows(config, rows, buf);
    *out << buf.str();
    out->flush();
    return kOk;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Shifted prime sums, exponential sums and Hecke eigenvalues at desk scale"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  unsigned threads = 0;
  std::string output;
  std::uint64_t seed = 1;
  bool timing = false;
  std::int64_t budget = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", output, "output file (default stdout)");
  app.add_option("--seed", seed, "seed for randomized sweeps");
  app.add_option("--budget", budget, "largest X accepted by the LHS evaluators");
  app.add_flag("--timing", timing, "record wall-clock seconds (output is then not reproducible)");
  app.fallthrough();

  struct IntOpt { std::string name; std::int64_t value = 0; CLI::Option* opt = nullptr; };
  struct RealOpt { std::string name; double value = 0.0; CLI::Option* opt = nullptr; };
  std::vector<std::unique_ptr<IntOpt>> int_opts;
  std::vector<std::unique_ptr<RealOpt>> real_opts;
  std::vector<std::pair<std::string, CLI::App*>> subs;

  auto add_sub = [&](const std::string& name, const std::string& help,
                     std::initializer_list<const char*> ints, std::initializer_list<const char*> reals) {
    CLI::App* sub = app.add_subcommand(name, help);
    for (const char* key : ints) {
      auto o = std::make_unique<IntOpt>();
      o->name = key;
      std::string flag = "--" + std::string(key);
      std::replace(flag.begin(), flag.end(), '_', '-');
      o->opt = sub->add_option(flag, o->value);
      int_opts.push_back(std::move(o));
    }
    for (const char* key : reals) {
      auto o = std::make_unique<RealOpt>();
      o->name = key;
      std::string flag = "--" + std::string(key);
      std::replace(flag.begin(), flag.end(), '_', '-');
      o->opt = sub->add_option(flag, o->value);
      real_opts.push_back(std::move(o));
    }
    subs.emplace_back(name, sub);
    return sub;
  };

  std::string tau_cache, experiment;
  bool lambda_flag = false;
  std::vector<std::int64_t> scales;

  add_sub("titchmarsh", "sum Lambda(n) tau(sigma n + f) against its main term",
          {"x", "y", "f", "sigma", "p0"}, {});
  add_sub("hooley", "sum Lambda(n) (chi1 * chi2)(sigma n + f); characters by index in enumeration order",
          {"x", "y", "f", "sigma", "p0", "q1", "k1", "q2", "k2"}, {});
  add_sub("two-squares", "representations n = p + x^2 + y^2", {"n", "p0"}, {})
      ->add_flag("--lambda", lambda_flag, "weight prime powers by Lambda");
  add_sub("cusp-shift", "sum Lambda(n) lambda(sigma n + f) for the weight-12 discriminant form",
          {"x", "y", "f", "sigma"}, {})
      ->add_option("--tau-cache", tau_cache, "tau table cache file");
  add_sub("triple-shift", "smoothed sum over k, l, m of lambda(r k l m + f)", {"r", "f", "x", "x1", "x2", "x3"},
          {"amplitude"})
      ->add_option("--tau-cache", tau_cache, "tau table cache file");
  add_sub("double-shift", "smoothed sum of lambda(m1 n + f) lambda(m2 n + f)", {"m1", "m2", "f", "x"}, {"amplitude"})
      ->add_option("--tau-cache", tau_cache, "tau table cache file");
  add_sub("dispersion", "primes in progressions summed over moduli q <= Q",
          {"x", "Q", "c", "c0", "d", "d0", "a1", "a2"}, {});
  add_sub("kloosterman", "S(m, n; c) with its Weil ratio, or a Weil sweep", {"m", "n", "c", "sweep_cmax", "pairs"}, {});
  add_sub("char-triple-sum", "triple character sum, or exhaustive/random sweeps against its bound",
          {"alpha", "beta", "shift", "r", "a", "c", "exhaustive_cmax", "random", "cmax"}, {"eps"});
  add_sub("delta-check", "delta-symbol identity and kernel derivative bounds", {"n_max"}, {"T"});
  add_sub("euler-product", "c_s(a), c_0'(a), or c(chi, f) with --q/--k", {"a", "p0", "q", "k"}, {"s"});
  add_sub("l-one", "L(1, chi) with certified error", {"q", "k"}, {"target"});
  add_sub("brun-titchmarsh", "largest Brun-Titchmarsh ratio over q <= qmax", {"x", "y", "qmax"}, {});
  add_sub("selftest", "run the module property suites", {}, {});
  auto* trend = add_sub("trend", "scale sweep of another experiment",
                        {"y", "f", "sigma", "p0", "q1", "k1", "q2", "k2", "Q"}, {"y_frac", "f_frac"});
  trend->add_option("--experiment", experiment, "experiment to sweep")->required();
  trend->add_option("--scales", scales, "comma-separated scales")->delimiter(',')->required();
  trend->add_option("--tau-cache", tau_cache, "tau table cache file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cfg.subcommand = name;
  for (const auto& o : int_opts)
    if (o->opt->count()) cfg.ints[o->name] = o->value;
  for (const auto& o : real_opts)
    if (o->opt->count()) cfg.reals[o->name] = o->value;
  if (!tau_cache.empty()) cfg.strings["tau_cache"] = tau_cache;
  if (!experiment.empty()) cfg.strings["experiment"] = experiment;
  cfg.scales = scales;
  cfg.flag_lambda = lambda_flag;
  cfg.threads = threads;
  cfg.output_path = output;
  cfg.format = format == "json" ? Format::json : Format::csv;
  cfg.seed = seed;
  cfg.timing = timing;
  if (budget > 0) set_lhs_budget(static_cast<u64>(budget));
  if (const char* mb = std::getenv("TITCHLAB_MEM_MB")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(mb, &end, 10);
    if (end == mb || *end != '\0' || v == 0) {
      std::cerr << "error: TITCHLAB_MEM_MB must be a positive integer\n";
      return kValidation;
    }
    set_sieve_memory_budget_mb(v);
  }
  return run(cfg);
}

}  // namespace titchlab::cli
