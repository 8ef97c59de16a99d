#include "flr/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "flr/bounds.hpp"
#include "flr/serialize.hpp"
#include "flr/verify.hpp"

namespace flr {
namespace {

std::string approx(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Exact when the decimal stays short, approximate otherwise.
std::string pretty(const Dyadic& v) {
  if (v.frac_bits() <= 16) return v.to_decimal_string();
  return "~" + approx(v.to_double());
}

std::string exact_and_approx(const Dyadic& v) {
  if (v.frac_bits() <= 64) return v.to_string() + " = " + v.to_decimal_string();
  return v.to_string() + " ~= " + approx(v.to_double());
}

bool digits_only(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

BigInt parse_bigint(const std::string& text) {
  std::string body = text;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  if (!digits_only(body)) throw std::invalid_argument("not an integer: \"" + text + "\"");
  BigInt v(body);
  return neg ? BigInt(-v) : v;
}

// Accepts "p/2^q", "p/q" with q a power of two, plain integers, and decimal
// strings that happen to be dyadic ("0.25").
Dyadic parse_dyadic(const std::string& text) {
  auto bad = [&]() -> std::invalid_argument {
    return std::invalid_argument("not a dyadic value: \"" + text +
                                 "\" (use p/2^q, an integer, or an exact decimal)");
  };
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt p = parse_bigint(text.substr(0, slash));
    std::string denom = text.substr(slash + 1);
    if (denom.rfind("2^", 0) == 0) {
      std::string expo = denom.substr(2);
      if (!digits_only(expo) || expo.size() > 5) throw bad();
      return Dyadic(p, -std::stoll(expo));
    }
    BigInt q = parse_bigint(denom);
    if (q <= 0) throw bad();
    Rational r(p, q);
    if (!is_dyadic(r)) throw bad();
    return to_dyadic_exact(r);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string head = text.substr(0, dot), frac = text.substr(dot + 1);
    if (!digits_only(frac)) throw bad();
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    bool neg = !head.empty() && head[0] == '-';
    if (head.empty() || head == "-" || head == "+") head += "0";
    BigInt whole = parse_bigint(head);
    Rational r = Rational(whole) + Rational(neg ? -BigInt(frac) : BigInt(frac), scale);
    if (!is_dyadic(r)) throw bad();
    return to_dyadic_exact(r);
  }
  return Dyadic(parse_bigint(text), 0);
}

std::vector<Dyadic> parse_point(const std::string& text) {
  std::vector<Dyadic> pt;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto a = item.find_first_not_of(" \t");
    auto b = item.find_last_not_of(" \t");
    if (a == std::string::npos) throw std::invalid_argument("empty coordinate in \"" + text + "\"");
    pt.push_back(parse_dyadic(item.substr(a, b - a + 1)));
  }
  if (pt.empty()) throw std::invalid_argument("no coordinates in \"" + text + "\"");
  return pt;
}

DomainBox unit_box() { return DomainBox{Dyadic(0), Dyadic(1)}; }

void print_bit_check(const BitCheckReport& rep) {
  std::cout << (rep.pass() ? "PASS" : "FAIL") << " " << rep.level << " N=" << rep.N
            << (rep.level == "block" ? " J=" : " L=") << rep.param
            << (rep.exhaustive ? " exhaustive" : " randomized") << " cases=" << rep.cases
            << " failures=" << rep.failures;
  if (!rep.exhaustive) std::cout << " seed=" << rep.seed;
  std::cout << "\n";
  if (!rep.first_failure.empty()) std::cout << "first failure: " << rep.first_failure << "\n";
}

int cmd_targets(int d) {
  for (const auto& name : target_names()) {
    TargetDesc desc;
    desc.name = name;
    desc.d = d;
    auto f = make_target(desc);
    std::cout << name << "\n    " << target_help(name) << "\n    modulus at d=" << d << ": "
              << f.modulus().describe() << "\n";
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"floor-relu network compiler and verifier"};
  app.require_subcommand(1);

  // ---- build ----
  auto* b = app.add_subcommand("build", "compile a registry target into a certified network");
  std::string b_target;
  int b_d = 1, b_theorem = 1, b_guard = 64;
  long b_N = 2, b_L = 1;
  std::string b_M, b_alpha, b_value, b_center, b_out, b_cert;
  b->add_option("--target", b_target, "registry target name")->required();
  b->add_option("--d", b_d, "input dimension")->check(CLI::Range(1, 64));
  b->add_option("--N", b_N, "size parameter N")->required()->check(CLI::Range(1L, 1L << 20));
  b->add_option("--L", b_L, "size parameter L")->required()->check(CLI::Range(1L, 1L << 20));
  b->add_option("--theorem", b_theorem, "compile path: 1 root-exponent, 2 direct")
      ->check(CLI::IsMember({1, 2}));
  auto* b_M_opt = b->add_option("--M", b_M, "domain halfwidth (dyadic, e.g. \"3/2^1\")");
  auto* b_alpha_opt = b->add_option("--alpha", b_alpha, "spike exponent (rational)");
  auto* b_value_opt = b->add_option("--value", b_value, "constant target value (rational)");
  auto* b_center_opt = b->add_option("--center", b_center, "spike center (comma dyadics)");
  b->add_option("--guard-bits", b_guard, "fractional bits for embedded constants")
      ->check(CLI::Range(8, 4096));
  b->add_option("--out", b_out, "write the network JSON here");
  b->add_option("--cert", b_cert, "write the certificate JSON here");

  // ---- eval ----
  auto* e = app.add_subcommand("eval", "evaluate a saved network at one point");
  std::string e_net, e_x, e_mode = "exact";
  e->add_option("--net", e_net, "network JSON path")->required();
  e->add_option("--x", e_x, "input point, comma-separated dyadics")->required();
  e->add_option("--mode", e_mode, "exact or float backend")
      ->check(CLI::IsMember({"exact", "float"}));

  // ---- verify ----
  auto* v = app.add_subcommand("verify", "measure a network against its certificate");
  std::string v_net, v_cert, v_report, v_csv;
  long v_grid = 0;
  std::uint64_t v_samples = 1000, v_seed = 0x5eed;
  bool v_points = false;
  v->add_option("--net", v_net, "network JSON path")->required();
  v->add_option("--cert", v_cert, "certificate JSON path")->required();
  v->add_option("--grid", v_grid, "extra grid points per axis")->check(CLI::Range(0L, 1L << 20));
  v->add_option("--samples", v_samples, "random sample count");
  v->add_option("--seed", v_seed, "random sample seed");
  v->add_option("--report", v_report, "write the report JSON here");
  v->add_option("--csv", v_csv, "write per-point CSV here");
  v->add_flag("--points", v_points, "embed per-point records in the report JSON");

  // ---- extract ----
  auto* x = app.add_subcommand("extract", "build and check the bit-extraction gadgets");
  std::string x_mode, x_bits, x_out;
  int x_N = 2, x_L = 2;
  std::int64_t x_J = 1;
  std::uint64_t x_cap = 1 << 16, x_samples = 1000, x_seed = 1;
  bool x_check = false;
  x->add_option("--mode", x_mode, "gadget level: block, locator, or fitter")
      ->required()
      ->check(CLI::IsMember({"block", "locator", "fitter"}));
  x->add_option("--N", x_N, "blocks per stage")->check(CLI::Range(1, 64));
  x->add_option("--J", x_J, "bits per block (block mode)")->check(CLI::Range(1, 62));
  x->add_option("--L", x_L, "stages (locator and fitter modes)")->check(CLI::Range(1, 62));
  x->add_option("--bits", x_bits, "explicit fitter table, characters 0/1, length N^L");
  x->add_flag("--check", x_check, "verify against the index-slicing oracle");
  x->add_option("--cap", x_cap, "exhaustive-check cap on the number of strings");
  x->add_option("--samples", x_samples, "random strings or tables when not exhaustive");
  x->add_option("--seed", x_seed, "seed for randomized checks");
  x->add_option("--out", x_out, "write the gadget network JSON here");

  // ---- bounds ----
  auto* bd = app.add_subcommand("bounds", "evaluate the certified bound calculators");
  std::string bd_modulus = "lipschitz:1", bd_example, bd_alpha = "1", bd_lambda = "1";
  int bd_d = 1, bd_theorem = 1, bd_guard = 64;
  long bd_N = 2, bd_L = 4, bd_rawW = 0, bd_rawD = 0, bd_budget = 0;
  bool bd_closed = false;
  bd->add_option("--modulus", bd_modulus,
                 "modulus, one of: zero | lipschitz:L | holder:A:L | holder-over-dim:A:D | "
                 "log | log-root:D");
  bd->add_option("--d", bd_d, "input dimension")->check(CLI::Range(1, 64));
  bd->add_option("--N", bd_N, "size parameter N")->check(CLI::Range(1L, 1L << 20));
  bd->add_option("--L", bd_L, "size parameter L")->check(CLI::Range(1L, 1L << 20));
  bd->add_option("--theorem", bd_theorem, "bound path: 1 root-exponent, 2 direct")
      ->check(CLI::IsMember({1, 2}));
  bd->add_option("--guard-bits", bd_guard, "rounding precision")->check(CLI::Range(8, 4096));
  auto* bd_raw_w = bd->add_option("--raw-width", bd_rawW, "raw width budget");
  auto* bd_raw_d = bd->add_option("--raw-depth", bd_rawD, "raw depth budget");
  auto* bd_budget_opt =
      bd->add_option("--budget", bd_budget, "depth-budget parameter W (width fixed)");
  auto* bd_example_opt =
      bd->add_option("--example", bd_example, "reference-modulus rate: log, log-root, or power")
          ->check(CLI::IsMember({"log", "log-root", "power"}));
  bd->add_option("--alpha", bd_alpha, "exponent for the closed forms (rational)");
  bd->add_option("--lambda", bd_lambda, "constant for --closed-form (rational)");
  bd->add_flag("--closed-form", bd_closed, "Holder closed form 3*lambda*d^(a/2)*N^(-a sqrt(L))");

  // ---- demo ----
  auto* dm = app.add_subcommand("demo", "memorize N^L random bits and read them back");
  int dm_N = 2, dm_L = 10;
  std::uint64_t dm_seed = 1;
  dm->add_option("--N", dm_N, "blocks per stage")->check(CLI::Range(2, 64));
  dm->add_option("--L", dm_L, "stages")->check(CLI::Range(1, 62));
  dm->add_option("--seed", dm_seed, "bit-table seed");

  // ---- probe ----
  auto* p = app.add_subcommand("probe", "compare the binary64 backend against exact evaluation");
  std::string p_net;
  int p_N = 2, p_L = 6;
  long p_grid = 9;
  std::uint64_t p_samples = 0, p_seed = 1;
  auto* p_net_opt = p->add_option("--net", p_net, "network JSON path (default: a random fitter)");
  p->add_option("--N", p_N, "fitter blocks when no --net")->check(CLI::Range(2, 64));
  p->add_option("--L", p_L, "fitter stages when no --net")->check(CLI::Range(1, 62));
  p->add_option("--grid", p_grid, "grid points per axis for --net probes")
      ->check(CLI::Range(2L, 1L << 20));
  p->add_option("--samples", p_samples, "extra random points for --net probes");
  p->add_option("--seed", p_seed, "seed for the fitter table or random points");

  // ---- targets ----
  auto* t = app.add_subcommand("targets", "list the builtin target registry");
  int t_d = 2;
  t->add_option("--d", t_d, "dimension used to report the modulus")->check(CLI::Range(1, 64));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  }

  try {
    if (b->parsed()) {
      TargetDesc desc;
      desc.name = b_target;
      desc.d = b_d;
      if (*b_M_opt) desc.halfwidth = parse_dyadic(b_M);
      if (*b_alpha_opt) desc.alpha = parse_rational(b_alpha);
      if (*b_value_opt) desc.value = parse_rational(b_value);
      if (*b_center_opt) desc.center = parse_point(b_center);
      BuildOptions opts;
      opts.guard_bits = b_guard;
      BuildResult res = compile(desc, b_theorem, b_N, b_L, opts);
      const Certificate& c = res.cert;
      std::cout << "built " << c.target.id() << " via path " << c.theorem << ": N=" << c.N
                << " L=" << c.L;
      if (c.N_eff != c.N || c.L_eff != c.L)
        std::cout << " (reparameterized N=" << c.N_eff << " L=" << c.L_eff << ")";
      std::cout << ", K=" << c.K << "\n";
      std::cout << "width " << c.audit.width << "/" << c.width_budget << ", depth "
                << c.audit.depth << "/" << c.depth_budget << ", nonzero params "
                << c.audit.nonzero_params << "\n";
      std::cout << "Omega = " << pretty(c.omega) << ", eps_guard = " << pretty(c.eps_guard)
                << ", bound = " << pretty(c.bound) << "\n";
      if (!b_out.empty()) {
        save_text(b_out, network_to_json(res.net));
        std::cout << "wrote " << b_out << "\n";
      }
      if (!b_cert.empty()) {
        save_text(b_cert, certificate_to_json(c));
        std::cout << "wrote " << b_cert << "\n";
      }
      return 0;
    }

    if (e->parsed()) {
      Network net = network_from_json(load_text(e_net));
      std::vector<Dyadic> pt = parse_point(e_x);
      if (static_cast<int>(pt.size()) != net.input_dim())
        throw std::invalid_argument("expected " + std::to_string(net.input_dim()) +
                                    " coordinates, got " + std::to_string(pt.size()));
      if (e_mode == "float") {
        std::vector<double> xf;
        for (const auto& c : pt) xf.push_back(c.to_double());
        auto y = net.eval_f64(xf);
        for (std::size_t i = 0; i < y.size(); ++i)
          std::cout << "y[" << i << "] = " << approx(y[i]) << "\n";
      } else {
        auto y = net.eval(pt);
        for (std::size_t i = 0; i < y.size(); ++i)
          std::cout << "y[" << i << "] = " << exact_and_approx(y[i]) << "\n";
      }
      return 0;
    }

    if (v->parsed()) {
      Network net = network_from_json(load_text(v_net));
      Certificate cert = certificate_from_json(load_text(v_cert));
      CheckOptions opts;
      opts.random_count = v_samples;
      opts.seed = v_seed;
      opts.extra_grid = v_grid;
      opts.keep_records = v_points || !v_csv.empty();
      ErrorReport rep;
      try {
        rep = check_certificate(net, cert, opts);
      } catch (const std::logic_error& ex) {
        std::cout << "FAIL: " << ex.what() << "\n";
        return 1;
      }
      std::cout << (rep.pass ? "PASS" : "FAIL") << ": max error " << pretty(rep.max_abs_error)
                << " over " << rep.sample_count << " points, bound " << pretty(rep.bound) << "\n";
      if (rep.has_modulus_term)
        std::cout << "within-cell modulus term " << pretty(rep.modulus_term) << "\n";
      if (!v_report.empty()) {
        ErrorReport slim = rep;
        if (!v_points) slim.records.clear();
        save_text(v_report, report_to_json(slim));
        std::cout << "wrote " << v_report << "\n";
      }
      if (!v_csv.empty()) {
        save_text(v_csv, report_to_csv(rep));
        std::cout << "wrote " << v_csv << "\n";
      }
      return rep.pass ? 0 : 1;
    }

    if (x->parsed()) {
      if (x_mode == "block") {
        Network net = build_block_extractor(x_N, x_J);
        auto a = net.audit();
        std::cout << "block extractor N=" << x_N << " J=" << x_J << ": width " << a.width
                  << ", depth " << a.depth << ", nonzero params " << a.nonzero_params << "\n";
        if (!x_out.empty()) {
          save_text(x_out, network_to_json(net));
          std::cout << "wrote " << x_out << "\n";
        }
        if (x_check) {
          auto rep = check_block_extractor(x_N, x_J, x_cap, x_samples, x_seed);
          print_bit_check(rep);
          return rep.pass() ? 0 : 1;
        }
        return 0;
      }
      if (x_mode == "locator") {
        Network net = build_bit_locator(x_N, x_L);
        auto a = net.audit();
        std::cout << "bit locator N=" << x_N << " L=" << x_L << ": width " << a.width
                  << ", depth " << a.depth << ", nonzero params " << a.nonzero_params << "\n";
        if (!x_out.empty()) {
          save_text(x_out, network_to_json(net));
          std::cout << "wrote " << x_out << "\n";
        }
        if (x_check) {
          auto rep = check_bit_locator(x_N, x_L, x_cap, x_samples, x_seed);
          print_bit_check(rep);
          return rep.pass() ? 0 : 1;
        }
        return 0;
      }
      // fitter
      std::int64_t len = checked_pow(x_N, x_L);
      if (!x_bits.empty()) {
        BitString bits = BitString::parse(x_bits);
        if (static_cast<std::int64_t>(bits.size()) != len)
          throw std::invalid_argument("--bits must have length N^L = " + std::to_string(len));
        Network net = build_point_fitter(x_N, x_L, bits);
        auto a = net.audit();
        std::cout << "point fitter N=" << x_N << " L=" << x_L << ": width " << a.width
                  << ", depth " << a.depth << ", nonzero params " << a.nonzero_params << "\n";
        if (!x_out.empty()) {
          save_text(x_out, network_to_json(net));
          std::cout << "wrote " << x_out << "\n";
        }
        if (x_check) {
          std::uint64_t failures = 0;
          std::string first;
          for (std::int64_t m = 1; m <= len; ++m) {
            Dyadic got = net.eval({Dyadic(m)}).at(0);
            if (got != Dyadic(bits.at(static_cast<std::size_t>(m - 1)))) {
              ++failures;
              if (first.empty()) first = "m=" + std::to_string(m);
            }
          }
          std::cout << (failures == 0 ? "PASS" : "FAIL") << " fitter table, cases=" << len
                    << " failures=" << failures << "\n";
          if (!first.empty()) std::cout << "first failure: " << first << "\n";
          return failures == 0 ? 0 : 1;
        }
        return 0;
      }
      if (x_check) {
        auto rep = check_point_fitter(x_N, x_L, x_samples, x_seed);
        print_bit_check(rep);
        return rep.pass() ? 0 : 1;
      }
      std::mt19937_64 rng(x_seed);
      BitString bits = BitString::random(static_cast<std::size_t>(len), rng);
      Network net = build_point_fitter(x_N, x_L, bits);
      auto a = net.audit();
      std::cout << "point fitter N=" << x_N << " L=" << x_L << " (seed " << x_seed
                << "): width " << a.width << ", depth " << a.depth << ", nonzero params "
                << a.nonzero_params << "\n";
      if (!x_out.empty()) {
        save_text(x_out, network_to_json(net));
        std::cout << "wrote " << x_out << "\n";
      }
      return 0;
    }

    if (bd->parsed()) {
      if (*bd_example_opt) {
        RateKind kind = bd_example == "log"        ? RateKind::log_reciprocal
                        : bd_example == "log-root" ? RateKind::log_reciprocal_root
                                                   : RateKind::power_over_dim;
        ExampleRate rate =
            modulus_example_rate(kind, bd_d, bd_N, bd_L, parse_rational(bd_alpha), bd_guard);
        std::cout << "rate(" << bd_example << ", d=" << bd_d << ", N=" << bd_N << ", L=" << bd_L
                  << ") = " << pretty(rate.value)
                  << (rate.asymptotic ? "  (asymptotic form: meaningful for large N, L)" : "")
                  << "\n";
        return 0;
      }
      if (bd_closed) {
        Dyadic v = bound_holder_rate(parse_rational(bd_lambda), parse_rational(bd_alpha), bd_d,
                                     bd_N, bd_L, bd_guard);
        std::cout << "holder closed form(lambda=" << bd_lambda << ", alpha=" << bd_alpha
                  << ", d=" << bd_d << ", N=" << bd_N << ", L=" << bd_L << ") = " << pretty(v)
                  << "\n";
        return 0;
      }
      ModulusSpec omega = ModulusSpec::parse(bd_modulus);
      if (*bd_budget_opt) {
        BudgetRate r = bound_parameter_budget(omega, bd_d, bd_budget, bd_guard);
        std::cout << "budget W=" << bd_budget << ": width " << r.width << ", depth " << r.depth
                  << ", bound " << pretty(r.bound) << "\n";
        return 0;
      }
      if (*bd_raw_w || *bd_raw_d) {
        if (!(*bd_raw_w && *bd_raw_d))
          throw std::invalid_argument("--raw-width and --raw-depth go together");
        Dyadic v = bound_from_raw_sizes(omega, bd_d, bd_rawW, bd_rawD, bd_guard);
        std::cout << "bound(raw width " << bd_rawW << ", raw depth " << bd_rawD << ", d=" << bd_d
                  << ") = " << pretty(v) << "\n";
        return 0;
      }
      Dyadic v = bd_theorem == 1 ? bound_root_exp(omega, bd_d, bd_N, bd_L, bd_guard)
                                 : bound_direct(omega, bd_d, bd_N, bd_L, bd_guard);
      std::cout << "bound(path " << bd_theorem << ", " << omega.describe() << ", d=" << bd_d
                << ", N=" << bd_N << ", L=" << bd_L << ") = " << pretty(v) << "\n";
      return 0;
    }

    if (dm->parsed()) {
      MemorizationReport rep = memorization_demo(dm_N, dm_L, dm_seed);
      std::cout << (rep.all_exact ? "PASS" : "FAIL") << ": memorized " << rep.points
                << " random bits (seed " << rep.seed << ") in a width-" << rep.width << " depth-"
                << rep.depth << " network; table constant has " << rep.constant_bits
                << " fractional bits\n";
      return rep.all_exact ? 0 : 1;
    }

    if (p->parsed()) {
      Network net = *p_net_opt ? network_from_json(load_text(p_net)) : identity_network(1);
      std::vector<std::vector<Dyadic>> pts;
      std::string what;
      if (*p_net_opt) {
        SampleSet grid = grid_points(net.input_dim(), p_grid, unit_box());
        pts = grid.pts;
        if (p_samples > 0) {
          SampleSet extra = random_points(net.input_dim(), p_samples, p_seed, unit_box());
          pts.insert(pts.end(), extra.pts.begin(), extra.pts.end());
        }
        what = p_net;
      } else {
        std::int64_t len = checked_pow(p_N, p_L);
        std::mt19937_64 rng(p_seed);
        BitString bits = BitString::random(static_cast<std::size_t>(len), rng);
        net = build_point_fitter(p_N, p_L, bits);
        for (std::int64_t m = 1; m <= len; ++m) pts.push_back({Dyadic(m)});
        what = "fitter N=" + std::to_string(p_N) + " L=" + std::to_string(p_L) + " seed " +
               std::to_string(p_seed);
      }
      DivergenceReport rep = float_divergence_probe(net, pts);
      std::cout << "probed " << what << " at " << rep.points << " points: " << rep.divergent
                << " divergent (tolerance " << pretty(rep.tolerance) << ")\n";
      for (const auto& r : rep.records) {
        std::cout << "  x = (";
        for (std::size_t i = 0; i < r.x.size(); ++i)
          std::cout << (i ? ", " : "") << pretty(r.x[i]);
        std::cout << "): first divergent layer " << r.first_layer << ", float "
                  << approx(r.float_out) << ", exact " << approx(r.exact_out) << "\n";
      }
      return 0;
    }

    if (t->parsed()) return cmd_targets(t_d);
  } catch (const obligation_error& ex) {
    std::cerr << "FAIL: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace flr
