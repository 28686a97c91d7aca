#include "xorlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xorlab/encodings.hpp"
#include "xorlab/games.hpp"
#include "xorlab/io.hpp"
#include "xorlab/parallel.hpp"
#include "xorlab/protocols.hpp"
#include "xorlab/sdp.hpp"
#include "xorlab/sequential.hpp"

namespace xorlab::cli {

namespace {

using io::Json;

struct RunConfig {
  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::size_t max_iter = 50000;
  std::string out;
  std::string format;  // empty: the command's default
};

// Rounds half up, so 0.5625 shows as 0.563.
std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", std::floor(v * 1000.0 + 0.5 + 1e-9) / 1000.0);
  return buf;
}

// Renders a JSON document in the requested format. "json" is compact,
// "pretty" indented.
std::string render(const Json& j, const std::string& format) {
  return format == "pretty" ? j.dump(2) + "\n" : j.dump() + "\n";
}

encodings::XorEncoding identical_encoding() {
  std::vector<DensityOperator> states(4, DensityOperator::maximally_mixed(2));
  return encodings::uniform_encoding(1, states);
}

encodings::XorEncoding load_encoding(const std::string& spec) {
  if (spec == "bbbw") return encodings::canonical_bbbw_encoding();
  if (spec == "identical") return identical_encoding();
  return io::encoding_from_json(io::read_json_file(spec));
}

// ---------------------------------------------------------------------------
// verify-sandwich

struct SandwichArgs {
  std::vector<std::size_t> dims{2, 4, 8};
  std::size_t samples = 10000;
  bool summary_only = false;
};

int cmd_verify_sandwich(const RunConfig& cfg, const SandwichArgs& args, std::ostream& out,
                        std::ostream& err) {
  for (std::size_t d : args.dims) {
    if (d < 2) {
      err << "verify-sandwich: dims must be at least 2\n";
      return kUsage;
    }
  }
  sequential::SweepConfig sc;
  sc.dims = args.dims;
  sc.samples = args.samples;
  sc.seed = cfg.seed;
  const auto result = sequential::run_sweep(sc);
  if (!args.summary_only) {
    for (const auto& r : result.records) out << io::to_json(r, cfg.seed).dump() << '\n';
  }
  for (const auto& s : result.summaries) {
    Json j = io::to_json(s);
    j["seed"] = cfg.seed;
    j["type"] = "summary";
    out << j.dump() << '\n';
  }
  return result.violations() == 0 ? kPass : kFailure;
}

// ---------------------------------------------------------------------------
// table

struct TableArgs {
  unsigned n_max = 5;
  std::size_t restarts = 10;
  std::size_t iters = 300;

  // Halved for every n above 3; rounds cost grows like 8^n.
  std::size_t restarts_for(unsigned n) const {
    if (n <= 3) return restarts;
    return std::max<std::size_t>(1, restarts >> (n - 3));
  }
};

struct TableRow {
  std::string label;
  std::vector<std::optional<double>> values;
};

int cmd_table(const RunConfig& cfg, const TableArgs& args, std::ostream& out,
              std::ostream& err) {
  if (args.n_max < 1 || args.n_max > 8) {
    err << "table: --n-max must be in [1, 8]\n";
    return kUsage;
  }
  if (args.n_max > 5) err << "table: n > 5 takes a long time\n";
  const unsigned nm = args.n_max;
  std::vector<TableRow> rows{{"Lower Bound", {}},
                             {"See-saw", {}},
                             {"SDP Relaxation", {}},
                             {"Our Bound", {}},
                             {"Conjectured Value", {}}};
  bool solver_failed = false;
  for (unsigned n = 1; n <= nm; ++n) {
    const auto game = games::make_chsh_n(n);
    rows[0].values.push_back(games::evaluate(game, games::guessing_strategy_chsh_n(n)));
    Rng rng = derive_rng(cfg.seed, n);
    rows[1].values.push_back(
        games::seesaw(game, std::size_t{1} << n, args.restarts_for(n), args.iters, rng).value);
    try {
      rows[2].values.push_back(sdp::npa1_value(game, cfg.tol));
    } catch (const sdp::SolverError& e) {
      err << "table: n = " << n << ": " << e.what() << '\n';
      rows[2].values.push_back(std::nullopt);
      solver_failed = true;
    }
    rows[3].values.push_back(games::upper_bound_chsh_n(n));
    rows[4].values.push_back(games::conjectured_value_chsh_n(n));
  }

  if (cfg.format == "json" || cfg.format == "pretty") {
    Json j = io::document(Json{{"seed", cfg.seed}, {"restarts", args.restarts}});
    Json body = Json::array();
    for (const auto& r : rows) {
      Json vals = Json::array();
      for (const auto& v : r.values) vals.push_back(v ? Json(*v) : Json("fail"));
      body.push_back(Json{{"row", r.label}, {"values", std::move(vals)}});
    }
    j["rows"] = std::move(body);
    out << render(j, cfg.format);
  } else {
    out << "# seed=" << cfg.seed << " restarts=" << args.restarts << '\n';
    out << "row";
    for (unsigned n = 1; n <= nm; ++n) out << ",n=" << n;
    out << '\n';
    for (const auto& r : rows) {
      out << r.label;
      for (const auto& v : r.values) out << ',' << (v ? fixed3(*v) : "fail");
      out << '\n';
    }
  }
  return solver_failed ? kNonConvergence : kPass;
}

// ---------------------------------------------------------------------------
// ot / cf

int cmd_ot_demo(const RunConfig& cfg, const std::string& encoding, const std::string& mode,
                std::ostream& out) {
  const auto enc = load_encoding(encoding);
  const auto ot = mode.empty() ? protocols::ot_from_encoding(enc)
                               : protocols::ot_from_encoding(enc, protocols::parse_ot_mode(mode));
  const auto rep = encodings::theorem1_check(enc);
  Json j = io::document(io::to_json(ot));
  j["encoding"] = encoding;
  j["average_decoding"] = rep.c;
  j["value_preserved"] = ot.mode == protocols::OtMode::tensor ||
                         std::abs(ot.honest_p - rep.c) <= 1e-9;
  out << render(j, cfg.format);
  return j["value_preserved"].get<bool>() ? kPass : kFailure;
}

int cmd_ot_cheats(const RunConfig& cfg, const std::string& encoding, std::ostream& out) {
  const auto ot = protocols::ot_from_encoding(load_encoding(encoding));
  const auto cheats = protocols::ot_cheat_probs(ot);
  Json j = io::document(Json{{"encoding", encoding}, {"ot", io::to_json(ot)}});
  j["cheats"] = io::to_json(cheats);
  j["bit_commitment"] = io::to_json(protocols::bc_from_ot(
      cheats, ot.n == 1 ? protocols::BoundMode::bit : protocols::BoundMode::string));
  out << render(j, cfg.format);
  return cheats.theorem2_ok ? kPass : kFailure;
}

int cmd_ot_bound(const RunConfig& cfg, const std::string& mode, std::ostream& out) {
  const auto m = protocols::parse_bound_mode(mode);
  Json j = io::document(io::to_json(protocols::ot_tradeoff_bound(m)));
  j["mode"] = mode;
  out << render(j, cfg.format);
  return kPass;
}

int cmd_ot_ceiling(const RunConfig& cfg, unsigned n, const std::string& mode,
                   std::ostream& out) {
  const auto m = protocols::parse_ot_mode(mode);
  Json j = io::document(Json{{"n", n},
                             {"mode", mode},
                             {"ceiling", protocols::secure_ot_ceiling(n, m)}});
  out << render(j, cfg.format);
  return kPass;
}

int cmd_cf_demo(const RunConfig& cfg, const std::string& encoding, std::ostream& out) {
  const auto ot = protocols::ot_from_encoding(load_encoding(encoding), protocols::OtMode::bit);
  const auto cheats = protocols::ot_cheat_probs(ot);
  const auto cf = protocols::coinflip_from_ot(ot, cheats);
  Json j = io::document(Json{{"encoding", encoding}, {"honest_p", ot.honest_p}});
  j["cheats"] = io::to_json(cheats);
  j["coin_flip"] = io::to_json(cf);
  out << render(j, cfg.format);
  return cf.kitaev_ok ? kPass : kFailure;
}

// Fixed-instance protocol suite; the seed does not enter any computation.
Json ot_suite(std::vector<std::string>& failures) {
  auto check = [&failures](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  Json j = Json::object();

  const auto bbbw = protocols::ot_from_encoding(encodings::canonical_bbbw_encoding());
  const auto cheats = protocols::ot_cheat_probs(bbbw);
  const auto cf = protocols::coinflip_from_ot(bbbw, cheats);
  j["bbbw"] = Json{{"ot", io::to_json(bbbw)},
                   {"cheats", io::to_json(cheats)},
                   {"coin_flip", io::to_json(cf)},
                   {"bit_commitment",
                    io::to_json(protocols::bc_from_ot(cheats, protocols::BoundMode::bit))}};
  const double cos2 = std::pow(std::cos(std::numbers::pi / 8.0), 2);
  check(std::abs(bbbw.honest_p - cos2) <= 1e-3, "bbbw honest_p = cos^2(pi/8)");
  check(cheats.theorem2_ok, "bbbw: honest_p <= a_ot (sqrt(b_ot) + 1)");
  check(cf.kitaev_ok, "bbbw: a_cf b_cf >= honest_p / 2");

  const auto trivial = protocols::ot_from_encoding(identical_encoding());
  const auto tcheats = protocols::ot_cheat_probs(trivial);
  const auto tcf = protocols::coinflip_from_ot(trivial, tcheats);
  j["identical"] = Json{{"ot", io::to_json(trivial)},
                        {"cheats", io::to_json(tcheats)},
                        {"coin_flip", io::to_json(tcf)}};
  check(tcheats.theorem2_ok, "identical: Theorem 2 inequality");
  check(tcf.kitaev_ok, "identical: Kitaev product");

  const auto bit = protocols::ot_tradeoff_bound(protocols::BoundMode::bit);
  const auto str = protocols::ot_tradeoff_bound(protocols::BoundMode::string);
  j["bound_bit"] = io::to_json(bit);
  j["bound_string"] = io::to_json(str);
  check(std::abs(bit.bound - 0.599) <= 5e-4, "bit tradeoff bound = 0.599");
  check(std::abs(str.bound - 0.5852) <= 5e-4, "string tradeoff bound = 0.5852");
  check(std::abs(bit.bound - bit.grid_bound) <= 5e-5, "bit bound grid agreement");
  check(std::abs(str.bound - str.grid_bound) <= 5e-5, "string bound grid agreement");

  Json ceilings = Json::array();
  const double t1 = protocols::secure_ot_ceiling(1, protocols::OtMode::tensor);
  for (unsigned n = 1; n <= 5; ++n) {
    const double s = protocols::secure_ot_ceiling(n, protocols::OtMode::string);
    const double t = protocols::secure_ot_ceiling(n, protocols::OtMode::tensor);
    ceilings.push_back(Json{{"n", n}, {"string", s}, {"tensor", t}});
    check(std::abs(t - std::pow(t1, n)) <= 1e-12, "tensor ceiling is a power");
  }
  check(std::abs(t1 - cos2) <= 1e-12, "ceiling at n = 1 is cos^2(pi/8)");
  j["ceilings"] = std::move(ceilings);
  return j;
}

int cmd_ot_suite(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> failures;
  Json j = io::document(Json{{"seed", cfg.seed}});
  Json suite = ot_suite(failures);
  for (auto& [k, v] : suite.items()) j[k] = std::move(v);
  j["failures"] = failures;
  j["pass"] = failures.empty();
  out << render(j, cfg.format);
  return failures.empty() ? kPass : kFailure;
}

// ---------------------------------------------------------------------------
// learn / game / sdp

int cmd_learn(const RunConfig& cfg, const std::string& encoding, std::ostream& out) {
  const auto enc = load_encoding(encoding);
  const auto rep = encodings::theorem1_check(enc);
  Json j = io::document(io::to_json(rep));
  j["encoding"] = encoding;
  j["hides_xor"] = encodings::hides_xor(enc, 1e-8);
  out << render(j, cfg.format);
  return rep.theorem1_ok ? kPass : kFailure;
}

struct GameArgs {
  std::string kind = "chsh";
  unsigned n = 1;
  double q = 0.5;
  std::size_t dim = 0;  // 0: the default local dimension
  std::size_t restarts = 20;
  std::size_t iters = 300;
  bool npa = true;
};

int cmd_game(const RunConfig& cfg, const GameArgs& args, std::ostream& out,
             std::ostream& err) {
  games::TwoPlayerGame game;
  std::size_t dim = 2;
  if (args.kind == "chsh") {
    game = games::make_chsh();
  } else if (args.kind == "chsh_n") {
    game = games::make_chsh_n(args.n);
    dim = std::size_t{1} << args.n;
  } else if (args.kind == "tensor") {
    game = games::make_chsh_tensor(args.n);
    dim = std::size_t{1} << args.n;
  } else if (args.kind == "weighted") {
    game = games::make_weighted_chsh(args.q);
  } else {
    err << "game: unknown kind '" << args.kind << "'\n";
    return kUsage;
  }
  if (args.dim != 0) dim = args.dim;
  Rng rng(cfg.seed);
  const auto ss = games::seesaw(game, dim, args.restarts, args.iters, rng);
  Json j = io::document(Json{{"game", game.name},
                             {"seed", cfg.seed},
                             {"local_dim", dim},
                             {"restarts", args.restarts},
                             {"seesaw", ss.value},
                             {"best_restart", ss.best_restart}});
  int code = kPass;
  if (args.npa) {
    try {
      const auto r = sdp::npa1(game, {cfg.tol, cfg.max_iter, std::nullopt});
      j["npa1"] = r.value;
      j["npa1_status"] = sdp::to_string(r.solution.status);
      j["npa1_group_order"] = r.group_order;
      if (r.solution.status != sdp::SdpStatus::optimal) code = kNonConvergence;
    } catch (const sdp::SolverError& e) {
      err << "game: " << e.what() << '\n';
      code = kNonConvergence;
    }
  }
  if (args.kind == "chsh_n") {
    j["upper_bound"] = games::upper_bound_chsh_n(args.n);
    j["conjectured"] = games::conjectured_value_chsh_n(args.n);
    j["guessing"] = games::guessing_value_chsh_n(args.n);
  } else if (args.kind == "tensor") {
    j["parallel_repetition"] = games::parallel_repetition_value(args.n);
  } else if (args.kind == "weighted") {
    j["weighted_bound"] = encodings::weighted_decoding_bound(args.q);
  }
  out << render(j, cfg.format);
  return code;
}

int cmd_sdp_solve(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  const auto problem = io::sdp_problem_from_json(io::read_json_file(path));
  const auto sol = sdp::solve(problem, {cfg.tol, cfg.max_iter, std::nullopt});
  out << render(io::to_json(sol), cfg.format);
  return sol.status == sdp::SdpStatus::optimal ? kPass : kNonConvergence;
}

// ---------------------------------------------------------------------------
// all

int cmd_all(const RunConfig& cfg, const SandwichArgs& sargs, const TableArgs& targs,
            std::ostream& out, std::ostream& err) {
  RunConfig quiet = cfg;
  quiet.format = "csv";
  int worst = kPass;
  auto merge = [&worst](int code) {
    if (code != kPass && (worst == kPass || code == kNonConvergence)) worst = code;
  };

  SandwichArgs s = sargs;
  s.summary_only = true;
  out << "## verify-sandwich\n";
  merge(cmd_verify_sandwich(cfg, s, out, err));
  out << "## table\n";
  merge(cmd_table(quiet, targs, out, err));
  out << "## ot suite\n";
  RunConfig js = cfg;
  if (js.format != "pretty") js.format = "json";
  merge(cmd_ot_suite(js, out));
  out << "## learn bbbw\n";
  merge(cmd_learn(js, "bbbw", out));
  out << "## cf demo\n";
  merge(cmd_cf_demo(js, "bbbw", out));
  return worst;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"xorlab: XOR encodings, CHSH-family games and oblivious transfer"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "master seed (echoed in reports)");
  app.add_option("--tol", cfg.tol, "solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", cfg.max_iter, "solver iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "write the report to a file");
  app.add_option("--format", cfg.format, "json | csv | pretty")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));

  std::function<int(std::ostream&)> action;

  SandwichArgs sargs;
  auto* sandwich = app.add_subcommand("verify-sandwich", "sequential-measurement bound sweep");
  sandwich->add_option("--dims", sargs.dims, "comma-separated dimensions")->delimiter(',');
  sandwich->add_option("--samples", sargs.samples, "accepted samples per dimension");
  sandwich->add_flag("--summary-only", sargs.summary_only, "omit per-sample records");
  sandwich->callback([&] {
    action = [&](std::ostream& o) { return cmd_verify_sandwich(cfg, sargs, o, err); };
  });

  TableArgs targs;
  auto* table = app.add_subcommand("table", "CHSH_n comparison table");
  table->add_option("--n-max", targs.n_max, "largest n");
  table->add_option("--restarts", targs.restarts,
                    "see-saw restarts for n <= 3, halved for each larger n");
  table->add_option("--iters", targs.iters, "see-saw rounds per restart");
  table->callback([&] {
    if (cfg.format.empty()) cfg.format = "csv";
    action = [&](std::ostream& o) { return cmd_table(cfg, targs, o, err); };
  });

  std::string encoding = "bbbw";
  std::string ot_mode;
  std::string bound_mode = "bit";
  std::string ceiling_mode = "string";
  unsigned ceiling_n = 1;
  auto* ot = app.add_subcommand("ot", "oblivious transfer");
  ot->require_subcommand(1);
  auto* ot_demo = ot->add_subcommand("demo", "OT built from an encoding");
  ot_demo->add_option("--encoding", encoding, "bbbw | identical | file");
  ot_demo->add_option("--mode", ot_mode, "bit | string | tensor");
  ot_demo->callback(
      [&] { action = [&](std::ostream& o) { return cmd_ot_demo(cfg, encoding, ot_mode, o); }; });
  auto* ot_cheats = ot->add_subcommand("cheats", "cheating probabilities");
  ot_cheats->add_option("--encoding", encoding, "bbbw | identical | file");
  ot_cheats->callback(
      [&] { action = [&](std::ostream& o) { return cmd_ot_cheats(cfg, encoding, o); }; });
  auto* ot_bound = ot->add_subcommand("bound", "bit-commitment tradeoff bound");
  ot_bound->add_option("--mode", bound_mode, "bit | string")
      ->check(CLI::IsMember({"bit", "string"}));
  ot_bound->callback(
      [&] { action = [&](std::ostream& o) { return cmd_ot_bound(cfg, bound_mode, o); }; });
  auto* ot_ceiling = ot->add_subcommand("ceiling", "correctness ceiling of secure OT");
  ot_ceiling->add_option("--n", ceiling_n, "string length")->check(CLI::Range(1u, 64u));
  ot_ceiling->add_option("--mode", ceiling_mode, "string | tensor")
      ->check(CLI::IsMember({"string", "tensor"}));
  ot_ceiling->callback([&] {
    action = [&](std::ostream& o) { return cmd_ot_ceiling(cfg, ceiling_n, ceiling_mode, o); };
  });
  auto* ot_suite_cmd = ot->add_subcommand("suite", "all protocol checks");
  ot_suite_cmd->callback([&] { action = [&](std::ostream& o) { return cmd_ot_suite(cfg, o); }; });

  auto* cf = app.add_subcommand("cf", "coin flipping");
  cf->require_subcommand(1);
  auto* cf_demo = cf->add_subcommand("demo", "coin flip from a bit OT");
  cf_demo->add_option("--encoding", encoding, "bbbw | identical | file");
  cf_demo->callback(
      [&] { action = [&](std::ostream& o) { return cmd_cf_demo(cfg, encoding, o); }; });

  auto* learn = app.add_subcommand("learn", "learning relations of an encoding");
  learn->add_option("--encoding", encoding, "bbbw | identical | file");
  learn->callback([&] { action = [&](std::ostream& o) { return cmd_learn(cfg, encoding, o); }; });

  GameArgs gargs;
  auto* game = app.add_subcommand("game", "see-saw and relaxation values of one game");
  game->add_option("--kind", gargs.kind, "chsh | chsh_n | tensor | weighted")
      ->check(CLI::IsMember({"chsh", "chsh_n", "tensor", "weighted"}));
  game->add_option("--n", gargs.n, "string length")->check(CLI::Range(1u, 8u));
  game->add_option("--q", gargs.q, "probability of y = 0")->check(CLI::Range(0.0, 1.0));
  game->add_option("--dim", gargs.dim, "local dimension");
  game->add_option("--restarts", gargs.restarts, "see-saw restarts");
  game->add_option("--iters", gargs.iters, "see-saw rounds per restart");
  game->add_flag("!--no-npa", gargs.npa, "skip the relaxation");
  game->callback([&] { action = [&](std::ostream& o) { return cmd_game(cfg, gargs, o, err); }; });

  std::string problem_path;
  auto* sdp_cmd = app.add_subcommand("sdp", "semidefinite programs");
  sdp_cmd->require_subcommand(1);
  auto* sdp_solve = sdp_cmd->add_subcommand("solve", "solve a problem file");
  sdp_solve->add_option("problem", problem_path, "xorlab/v1 problem file")->required();
  sdp_solve->callback(
      [&] { action = [&](std::ostream& o) { return cmd_sdp_solve(cfg, problem_path, o); }; });

  auto* all = app.add_subcommand("all", "every suite in sequence");
  all->add_option("--samples", sargs.samples, "sandwich samples per dimension");
  all->add_option("--restarts", targs.restarts, "see-saw restarts per n");
  all->callback(
      [&] { action = [&](std::ostream& o) { return cmd_all(cfg, sargs, targs, o, err); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, msg, msg);
    (code == 0 ? out : err) << msg.str();
    return code == 0 ? kPass : kUsage;
  }
  if (cfg.format.empty()) cfg.format = "json";

  std::ostringstream buffer;
  int code = kPass;
  try {
    code = action(buffer);
  } catch (const sdp::SolverError& e) {
    err << "solver did not converge: " << e.what() << '\n';
    code = kNonConvergence;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    code = kFailure;
  } catch (const io::FormatError& e) {
    err << "bad input: " << e.what() << '\n';
    code = kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    code = kFailure;
  }
  if (cfg.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "cannot write '" << cfg.out << "'\n";
      return kFailure;
    }
    f << buffer.str();
  }
  return code;
}

}  // namespace xorlab::cli
