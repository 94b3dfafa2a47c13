// verifier.cpp

#include "cnim/verifier.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>

#include "cnim/strategist.hpp"

namespace cnim {

namespace {

using Clock = std::chrono::steady_clock;

Position position_of(const GameSpec& spec, const std::string& key) {
  return Position(spec, OutcomeTable::heights_of(key));
}

std::string heights_csv(const std::vector<Height>& h) {
  std::string s;
  for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + std::to_string(h[i]);
  return s;
}

std::string closed_form_label(const Position& p) {
  const GameSpec& s = p.spec();
  if (s == GameSpec{7, 4}) return std::string(to_string(classify(p)));
  if (s.n == 2 * s.k - 1 && s.k >= 2) return in_general_S1(p, s.k - 1) ? "S1" : "None";
  return "";
}

// Condition I for an arbitrary membership test: no move from a member lands
// on a member.
void check_closed_under_moves(const Position& p, const std::function<bool(const Position&)>& member,
                              std::vector<Violation>& out) {
  for_each_legal_move(p, [&](const Move& m) {
    Position q = apply_move(p, m);
    if (member(q)) out.push_back({p.heights(), q.heights(), "move " + to_string(m) + " stays in the set"});
    return true;
  });
}

void check_terminal(const GameSpec& spec, const std::function<bool(const Position&)>& member,
                    const OutcomeTable& table, VerificationReport& r) {
  Position zero(spec, std::vector<Height>(static_cast<std::size_t>(spec.n), 0));
  if (!member(zero)) r.condition_iii.push_back({zero.heights(), {}, "terminal position not in the set"});
  auto o = table.find(zero);
  if (!o || *o != Outcome::P) r.condition_iii.push_back({zero.heights(), {}, "terminal position not oracle-P"});
}

nlohmann::json violations_json(const std::vector<Violation>& vs) {
  auto arr = nlohmann::json::array();
  for (const auto& v : vs) {
    nlohmann::json j{{"from", v.from}, {"detail", v.detail}};
    if (!v.to.empty()) j["to"] = v.to;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

nlohmann::json to_json_deterministic(const VerificationReport& r) {
  auto mismatches = nlohmann::json::array();
  for (const auto& m : r.mismatches) {
    mismatches.push_back({{"heights", m.heights}, {"oracle", to_string(m.oracle)}, {"label", m.label}});
  }
  return {
      {"check", r.check},
      {"game", to_string(r.spec)},
      {"n", r.spec.n},
      {"k", r.spec.k},
      {"height_bound", r.height_bound},
      {"total_positions", r.total_positions},
      {"p_by_oracle", r.p_by_oracle},
      {"p_by_classifier", r.p_by_classifier},
      {"mismatches", mismatches},
      {"condition_i_violations", violations_json(r.condition_i)},
      {"condition_ii_violations", violations_json(r.condition_ii)},
      {"condition_iii_violations", violations_json(r.condition_iii)},
      {"other_violations", violations_json(r.other)},
      {"passed", r.passed()},
  };
}

nlohmann::json to_json(const VerificationReport& r) {
  auto j = to_json_deterministic(r);
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

std::string to_text(const VerificationReport& r) {
  std::ostringstream os;
  os << r.check << " check for " << to_string(r.spec) << ", heights <= " << r.height_bound << "\n"
     << "  canonical positions: " << r.total_positions << "\n"
     << "  P by oracle:         " << r.p_by_oracle << "\n"
     << "  P by closed form:    " << r.p_by_classifier << "\n";
  auto list = [&](const char* name, std::size_t count) { os << "  " << name << ": " << count << "\n"; };
  list("mismatches", r.mismatches.size());
  list("condition I violations", r.condition_i.size());
  list("condition II violations", r.condition_ii.size());
  list("condition III violations", r.condition_iii.size());
  if (r.check == "family") list("other violations", r.other.size());
  constexpr std::size_t kShow = 10;
  for (std::size_t i = 0; i < r.mismatches.size() && i < kShow; ++i) {
    const auto& m = r.mismatches[i];
    os << "    mismatch (" << heights_csv(m.heights) << ") oracle " << to_string(m.oracle) << ", label " << m.label
       << "\n";
  }
  for (const auto* vs : {&r.condition_i, &r.condition_ii, &r.condition_iii, &r.other}) {
    for (std::size_t i = 0; i < vs->size() && i < kShow; ++i) {
      os << "    (" << heights_csv((*vs)[i].from) << "): " << (*vs)[i].detail << "\n";
    }
  }
  os << "  elapsed: " << r.elapsed_seconds << " s\n" << (r.passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

VerificationReport verify_theorem(int H, const ClassifierConfig& config) {
  const auto start = Clock::now();
  const GameSpec spec{7, 4};
  VerificationReport r;
  r.check = "theorem";
  r.spec = spec;
  r.height_bound = H;

  const OutcomeTable table = solve_all(spec, H);
  auto member = [&](const Position& p) { return classify(p, config) != PSetLabel::None; };

  r.total_positions = table.size();
  for (const auto& [key, o] : table.entries()) {
    const Position p = position_of(spec, key);
    const PSetLabel label = classify(p, config);
    if (o == Outcome::P) ++r.p_by_oracle;
    if (label != PSetLabel::None) ++r.p_by_classifier;
    if ((o == Outcome::P) != (label != PSetLabel::None)) {
      r.mismatches.push_back({p.heights(), o, std::string(to_string(label))});
    }

    if (label != PSetLabel::None) {
      check_closed_under_moves(p, member, r.condition_i);
      continue;
    }
    try {
      const Move m = find_winning_move(p);
      const Position q = apply_move(p, m);
      if (!member(q)) r.condition_ii.push_back({p.heights(), q.heights(), "strategist move leaves S"});
    } catch (const Error& e) {
      r.condition_ii.push_back({p.heights(), {}, e.what()});
    }
  }
  check_terminal(spec, member, table, r);
  if (Position zero(spec, std::vector<Height>(7, 0)); classify(zero, config) != PSetLabel::S2) {
    r.condition_iii.push_back({zero.heights(), {}, "terminal position not labelled S2"});
  }
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

int default_family_height(int ell) {
  switch (ell) {
    case 1: return 6;
    case 2: return 5;
    case 3: return 4;
    default: return 2;
  }
}

VerificationReport verify_family(int ell, int H) {
  if (ell < 1 || ell > 4) throw WrongGame("family index l must be in 1..4, got " + std::to_string(ell));
  const auto start = Clock::now();
  const GameSpec spec{2 * ell + 1, ell + 1};
  VerificationReport r;
  r.check = "family";
  r.spec = spec;
  r.height_bound = H;

  // l = 1 is checked against "all heights equal" directly.
  std::function<bool(const Position&)> member = [ell](const Position& p) {
    return ell == 1 ? family_is_P(p) : in_general_S1(p, ell);
  };
  const bool exact = ell <= 2;

  const OutcomeTable table = solve_all(spec, H);
  r.total_positions = table.size();
  for (const auto& [key, o] : table.entries()) {
    const Position p = position_of(spec, key);
    const bool in = member(p);
    if (o == Outcome::P) ++r.p_by_oracle;
    if (in) ++r.p_by_classifier;
    if ((in && o != Outcome::P) || (exact && !in && o == Outcome::P)) {
      r.mismatches.push_back({p.heights(), o, in ? "S1" : "None"});
    }
    if (in) check_closed_under_moves(p, member, r.condition_i);
  }
  check_terminal(spec, member, table, r);

  if (ell == 4) {
    OutcomeTable cache(spec);
    Position twos(spec, std::vector<Height>(9, 2));
    if (outcome(twos, cache) != Outcome::N) r.other.push_back({twos.heights(), {}, "all-2s position is not N"});
  }
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

std::size_t enumerate_p(const OutcomeTable& table, std::ostream& out) {
  out << "heights,label,outcome\n";
  std::size_t count = 0;
  for (const auto& [key, o] : table.entries()) {
    if (o != Outcome::P) continue;
    const Position p = position_of(table.spec(), key);
    out << '"' << heights_csv(p.heights()) << "\"," << closed_form_label(p) << ",P\n";
    ++count;
  }
  return count;
}

std::size_t enumerate_p(const GameSpec& spec, int H, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const std::size_t count = enumerate_p(solve_all(spec, H), out);
  out.flush();
  if (!out) throw Error("write to " + path.string() + " failed");
  return count;
}

}  // namespace cnim
