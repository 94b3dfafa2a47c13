// cnim: command-line front end for the Circular Nim library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cnim/classifier.hpp"
#include "cnim/game.hpp"
#include "cnim/oracle.hpp"
#include "cnim/service.hpp"
#include "cnim/strategist.hpp"
#include "cnim/verifier.hpp"

using namespace cnim;

namespace {

constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GameSpec parse_game(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw UsageError("--game expects n,k, got \"" + text + "\"");
  try {
    std::size_t used = 0;
    const int n = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw UsageError("bad n in --game");
    const std::string rest = text.substr(comma + 1);
    const int k = std::stoi(rest, &used);
    if (used != rest.size()) throw UsageError("bad k in --game");
    return GameSpec::make(n, k);
  } catch (const std::logic_error&) {
    throw UsageError("--game expects n,k, got \"" + text + "\"");
  }
}

std::string heights_text(const std::vector<Height>& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + std::to_string(h[i]);
  return s;
}

void print_move(const Position& p, const Move& m) {
  const Position q = apply_move(p, m);
  std::cout << "move: window " << m.window_start << " -> " << heights_text(m.new_heights) << "\n"
            << "result: " << format_position(q);
  if (q.spec() == GameSpec{7, 4}) std::cout << " (" << to_string(classify(q)) << ")";
  std::cout << "\n";
}

int cmd_classify(const std::string& text) {
  const Position p = parse_position(text);
  bool is_p = false;
  std::string label;
  if (p.spec() == GameSpec{7, 4}) {
    const PSetLabel l = classify(p);
    is_p = l != PSetLabel::None;
    label = std::string(to_string(l));
  } else {
    is_p = family_is_P(p);  // WrongGame outside CN(3,2) / CN(5,3)
    label = "S1";
  }
  std::cout << (is_p ? "P (" + label + ")" : std::string("N")) << "\n";
  return 0;
}

int cmd_outcome(const std::string& text, int bound) {
  const Position p = parse_position(text);
  if (bound >= 0) {
    if (p.max() > bound) throw UsageError("position exceeds --bound " + std::to_string(bound));
    const OutcomeTable table = solve_all(p.spec(), bound);
    std::cout << to_string(*table.find(p)) << "\n";
    return 0;
  }
  OutcomeTable cache(p.spec());
  std::cout << to_string(outcome(p, cache)) << "\n";
  return 0;
}

int cmd_bestmove(const std::string& text) {
  const Position p = parse_position(text);
  if (p.spec() == GameSpec{7, 4}) {
    if (const PSetLabel l = classify(p); l != PSetLabel::None) {
      std::cout << "no winning move: P-position (" << to_string(l) << ")\n";
      return 0;
    }
    const LemmaPlay play = explain_winning_move(p);
    print_move(p, play.move);
    std::cout << "rule: " << play.rule << "\n";
    return 0;
  }
  OutcomeTable cache(p.spec());
  const auto wins = winning_options(p, cache);
  if (wins.empty()) {
    std::cout << "no winning move: P-position\n";
    return 0;
  }
  print_move(p, wins.front());
  return 0;
}

int cmd_verify(const std::string& game, int height, bool json, const std::string& report_path) {
  const GameSpec spec = parse_game(game);
  VerificationReport r;
  if (spec == GameSpec{7, 4}) {
    r = verify_theorem(height < 0 ? 4 : height);
  } else if (spec.n == 2 * spec.k - 1 && spec.k >= 2 && spec.k <= 5) {
    const int ell = spec.k - 1;
    r = verify_family(ell, height < 0 ? default_family_height(ell) : height);
  } else {
    throw UsageError("verify supports CN(7,4) and CN(2l+1,l+1) for l = 1..4");
  }
  if (json) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << to_text(r);
  }
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << to_json(r).dump(2) << "\n";
    if (!out) throw Error("cannot write " + report_path);
  }
  return r.passed() ? 0 : 1;
}

int cmd_enumerate(const std::string& game, int height, const std::string& out) {
  const GameSpec spec = parse_game(game);
  std::size_t count = 0;
  if (out == "-") {
    count = enumerate_p(solve_all(spec, height), std::cout);
  } else {
    count = enumerate_p(spec, height, out);
  }
  std::cerr << count << " P-positions\n";
  return 0;
}

int cmd_solve(const std::string& game, int height, const std::string& save, unsigned threads) {
  const GameSpec spec = parse_game(game);
  const OutcomeTable t = solve_all(spec, height, threads);
  std::size_t p = 0;
  for (const auto& [key, o] : t.entries()) p += o == Outcome::P;
  std::cout << to_string(spec) << " heights <= " << height << ": " << t.size() << " canonical positions, " << p
            << " P\n";
  if (!save.empty()) save_table(t, save);
  return 0;
}

int cmd_serve(const std::string& host, int port, const std::string& persist) {
  ServiceConfig cfg;
  if (!persist.empty()) cfg.persist_dir = persist;
  GameService service(cfg);
  HttpServer server(service);
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  std::cerr << "listening on " << host << ":" << bound << "\n";
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circular Nim CN(n,k): classify, solve, verify, play"};
  app.require_subcommand(1);

  std::string pos, game, out, save, report, host = "127.0.0.1", persist;
  int bound = -1, height = -1, port = 8080;
  unsigned threads = 0;
  bool json = false;

  auto* classify_cmd = app.add_subcommand("classify", "P/N by closed form, with the S-label");
  classify_cmd->add_option("position", pos, "e.g. CN(7,4):0,0,5,1,2,2,5")->required();

  auto* outcome_cmd = app.add_subcommand("outcome", "P/N by exhaustive search");
  outcome_cmd->add_option("position", pos)->required();
  outcome_cmd->add_option("--bound", bound, "solve every position with heights <= H and look up");

  auto* bestmove_cmd = app.add_subcommand("bestmove", "a winning move, if any");
  bestmove_cmd->add_option("position", pos)->required();

  auto* verify_cmd = app.add_subcommand("verify", "exhaustive check of the closed form");
  verify_cmd->add_option("--game", game, "n,k")->required();
  verify_cmd->add_option("--height", height, "height bound (default 4 for 7,4)");
  verify_cmd->add_flag("--json", json, "print the JSON report");
  verify_cmd->add_option("--report", report, "also write the JSON report to a file");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "write canonical P-positions as CSV");
  enumerate_cmd->add_option("--game", game, "n,k")->required();
  enumerate_cmd->add_option("--height", height)->required()->check(CLI::NonNegativeNumber);
  enumerate_cmd->add_option("--out", out, "file, or - for stdout")->required();

  auto* solve_cmd = app.add_subcommand("solve", "solve all positions up to a height bound");
  solve_cmd->add_option("--game", game, "n,k")->required();
  solve_cmd->add_option("--height", height)->required()->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--save", save, "binary table output");
  solve_cmd->add_option("--threads", threads);

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP/JSON service");
  serve_cmd->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--persist", persist, "directory for session logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*classify_cmd) return cmd_classify(pos);
    if (*outcome_cmd) return cmd_outcome(pos, bound);
    if (*bestmove_cmd) return cmd_bestmove(pos);
    if (*verify_cmd) return cmd_verify(game, height, json, report);
    if (*enumerate_cmd) return cmd_enumerate(game, height, out);
    if (*solve_cmd) return cmd_solve(game, height, save, threads);
    if (*serve_cmd) return cmd_serve(host, port, persist);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidPosition& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const WrongGame& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
