// bforder: command-line front end for the back-and-forth toolkit.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bfo/bf.hpp"
#include "bfo/canonical.hpp"
#include "bfo/codec.hpp"
#include "bfo/probe.hpp"
#include "bfo/randform.hpp"
#include "bfo/split.hpp"
#include "bfo/suite.hpp"
#include "bfo/term_bf.hpp"

using nlohmann::json;
using namespace bfo;

namespace {

struct Options {
  uint32_t rank = 1;
  uint32_t probe = 16;
  uint64_t memo = 1ull << 22;
  uint64_t seed = 20240501;
  bool emit_json = false;
};

uint64_t env_u64(const char* name, uint64_t fallback) {
  const char* v = std::getenv(name);
  return v ? std::strtoull(v, nullptr, 10) : fallback;
}

void apply_env(Options& o) {
  o.rank = (uint32_t)env_u64("BFORDER_RANK", o.rank);
  o.probe = (uint32_t)env_u64("BFORDER_PROBE", o.probe);
  o.memo = env_u64("BFORDER_MEMO", o.memo);
  o.seed = env_u64("BFORDER_SEED", o.seed);
  if (std::getenv("BFORDER_JSON")) o.emit_json = true;
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// term-or-file arguments: an existing file is read, "-" reads stdin,
// anything else is parsed directly
std::string text_arg(const std::string& arg) {
  if (arg == "-") return slurp(std::cin);
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    std::ifstream f(arg);
    return slurp(f);
  }
  return arg;
}

std::string trimmed(std::string s) {
  while (!s.empty() && std::isspace((unsigned char)s.back())) s.pop_back();
  size_t i = 0;
  while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  return s.substr(i);
}

Term term_arg(const std::string& arg) { return parse_term(trimmed(text_arg(arg))); }

const char* verdict_name(Verdict v) {
  return v == Verdict::LE ? "LE" : v == Verdict::NLE ? "NLE" : "UNKNOWN";
}

json steps_to_json(const std::vector<GameStep>& steps) {
  json moves = json::array();
  for (auto& st : steps) {
    json m;
    m["spoiler"] = st.spoiler;
    if (st.reply_ok)
      m["reply"] = st.reply;
    else
      m["reply"] = nullptr;
    moves.push_back(m);
  }
  return moves;
}

int cmd_bf(const std::string& lhs, const std::string& rhs, const Options& o) {
  Term a = term_arg(lhs), b = term_arg(rhs);
  json out;
  out["schema"] = 1;
  out["relation"] = "<=";
  out["lhs"] = to_text(a);
  out["rhs"] = to_text(b);
  out["rank"] = o.rank;
  Verdict v;
  auto sa = finite_size(a), sb = finite_size(b);
  if (sa && sb) {
    GameConfig cfg;
    cfg.trace = true;
    cfg.memo_budget = o.memo;
    auto res = bf_finite(LabeledFiniteOrder::chain((uint32_t)*sa), {},
                         LabeledFiniteOrder::chain((uint32_t)*sb), {}, o.rank, cfg);
    v = res.verdict;
    if (!res.trace.empty()) out["certificate"] = steps_to_json(res.trace);
  } else {
    v = bf_term(a, b, o.rank);
  }
  out["verdict"] = verdict_name(v);
  if (o.emit_json)
    std::cout << out.dump() << "\n";
  else {
    std::cout << out["lhs"].get<std::string>() << " <=_" << o.rank << " "
              << out["rhs"].get<std::string>() << " : " << verdict_name(v) << "\n";
    if (out.contains("certificate"))
      std::cout << "certificate: " << out["certificate"].dump() << "\n";
  }
  return v == Verdict::LE ? 0 : v == Verdict::NLE ? 1 : 2;
}

int cmd_classify(const std::string& arg, const Options& o) {
  auto f = parse_formula(trimmed(text_arg(arg)));
  auto t = classify(f);
  if (o.emit_json) {
    json out{{"schema", 1},   {"sigma", t.sigma}, {"pi", t.pi},
             {"e", t.e},      {"a", t.a},         {"ebar", t.ebar},
             {"abar", t.abar}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "sigma=" << t.sigma << " pi=" << t.pi << " e=" << t.e << " a=" << t.a
              << " ebar=" << t.ebar << " abar=" << t.abar << "\n";
  }
  return 0;
}

LabeledFiniteOrder structure_arg(const std::string& arg) {
  std::string text = trimmed(text_arg(arg));
  if (text.rfind("chain:", 0) == 0)
    return LabeledFiniteOrder::chain((uint32_t)std::stoul(text.substr(6)));
  if (!text.empty() && text[0] == '{') return labeled_order_from_json(text);
  // a finite term works too
  auto t = parse_term(text);
  auto sz = finite_size(t);
  if (!sz) throw CodecError("structure argument must be finite");
  return LabeledFiniteOrder::chain((uint32_t)*sz);
}

int cmd_split(const std::string& sarg, const std::string& tuple_arg, const std::string& farg,
              const Options& o) {
  auto A = structure_arg(sarg);
  std::vector<uint32_t> tuple;
  std::stringstream ss(tuple_arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trimmed(tok);
    if (!tok.empty()) tuple.push_back((uint32_t)std::stoul(tok));
  }
  auto f = parse_formula(trimmed(text_arg(farg)));
  auto ts = interval_split(A, tuple, f);
  if (o.emit_json) {
    json out{{"schema", 1}, {"sentences", json::array()}};
    for (auto& t : ts) out["sentences"].push_back(to_sexpr(t));
    std::cout << out.dump() << "\n";
  } else {
    for (size_t i = 0; i < ts.size(); ++i)
      std::cout << "interval " << i << ": " << to_sexpr(ts[i]) << "\n";
  }
  return 0;
}

int cmd_encode(const std::string& corpus_arg, const std::string& outdir, const Options& o) {
  std::string text = trimmed(text_arg(corpus_arg));
  std::vector<LabeledFiniteOrder> records;
  if (!text.empty() && text[0] == '[') {
    json arr = json::parse(text);
    for (auto& j : arr) records.push_back(labeled_order_from_json(j.dump()));
  } else {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      line = trimmed(line);
      if (!line.empty()) records.push_back(labeled_order_from_json(line));
    }
  }
  for (size_t i = 0; i < records.size(); ++i) {
    Term t = phi_encode(records[i]);
    if (!outdir.empty()) {
      std::filesystem::create_directories(outdir);
      std::ofstream f(outdir + "/" + std::to_string(i) + ".term");
      f << to_text(t) << "\n";
    } else if (o.emit_json) {
      std::cout << json{{"index", i}, {"term", to_text(t)}}.dump() << "\n";
    } else {
      std::cout << to_text(t) << "\n";
    }
  }
  return 0;
}

int cmd_decode(const std::string& what, const std::string& arg, uint32_t k, const Options& o) {
  Term t = term_arg(arg);
  if (what == "phi") {
    auto L = phi_decode(t);
    std::cout << labeled_order_to_json(L) << "\n";
    return 0;
  }
  if (what == "eta") {
    std::cout << to_text(jump_eta_decode(t)) << "\n";
    return 0;
  }
  if (what == "zeta") {
    std::cout << to_text(jump_zeta_decode(t, k)) << "\n";
    return 0;
  }
  (void)o;
  throw std::runtime_error("decode expects phi|eta|zeta");
}

int cmd_jump(const std::string& what, const std::string& arg, uint32_t k, const Options& o) {
  Term t = term_arg(arg);
  DecoratedTerm d = what == "eta" ? jump_eta(t) : jump_zeta(t, k);
  if (o.emit_json)
    std::cout << d.annotation_json() << "\n";
  else
    std::cout << to_text(d.term) << "\n";
  return 0;
}

int cmd_image(const std::string& what, const std::string& arg, uint32_t k, const Options& o) {
  Term t = term_arg(arg);
  if (what == "phi") {
    auto r = image_check_phi_report(t);
    if (o.emit_json)
      std::cout << json{{"in_image", r.in_image}, {"condition", r.condition},
                        {"detail", r.detail}}
                       .dump()
                << "\n";
    else if (r.in_image)
      std::cout << "in image\n";
    else
      std::cout << "not in image: condition " << r.condition << " (" << r.detail << ")\n";
    return r.in_image ? 0 : 1;
  }
  if (what == "eta") {
    auto r = image_check_eta_report(t);
    if (o.emit_json) {
      json js{{"in_image", r.ok}, {"conditions", json::array()}};
      for (int i = 0; i < 5; ++i) js["conditions"].push_back(r.cond[i]);
      std::cout << js.dump() << "\n";
    } else {
      std::cout << (r.ok ? "in image" : "not in image") << " conditions:";
      for (int i = 0; i < 5; ++i) std::cout << " " << (i + 1) << (r.cond[i] ? "+" : "-");
      std::cout << "\n";
    }
    return r.ok ? 0 : 1;
  }
  if (what == "zeta") {
    bool ok = image_check_zeta(t, k);
    std::cout << (ok ? "in image\n" : "not in image\n");
    return ok ? 0 : 1;
  }
  throw std::runtime_error("image expects phi|eta|zeta");
}

int cmd_suite(const std::string& name, const Options& o) {
  std::vector<SuiteResult> results;
  if (name == "all" || name.empty())
    results = run_all_suites(o.seed);
  else
    results.push_back(run_suite(name, o.seed));
  bool all = true;
  for (auto& r : results) {
    all = all && r.pass;
    if (o.emit_json) {
      std::cout << json{{"suite", r.name},
                        {"pass", r.pass},
                        {"checked", r.checked},
                        {"failures", r.failures},
                        {"seconds", r.seconds},
                        {"note", r.note}}
                       .dump()
                << "\n";
    } else {
      std::printf("[%s] %-20s checked=%llu failures=%llu (%.2fs) %s\n",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), (unsigned long long)r.checked,
                  (unsigned long long)r.failures, r.seconds, r.note.c_str());
    }
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// interactive game
// ---------------------------------------------------------------------------

std::vector<uint32_t> read_tuple_line(std::istream& in, uint32_t limit, bool& eof) {
  std::string line;
  if (!std::getline(in, line)) {
    eof = true;
    return {};
  }
  std::vector<uint32_t> vals;
  std::stringstream ss(line);
  long long v;
  while (ss >> v) {
    if (v < 0 || (uint32_t)v >= limit) throw std::runtime_error("element out of range");
    vals.push_back((uint32_t)v);
  }
  return vals;
}

int cmd_game(const std::string& lhs, const std::string& rhs, const std::string& side,
             const Options& o) {
  Term ta = term_arg(lhs), tb = term_arg(rhs);
  auto sa = finite_size(ta), sb = finite_size(tb);
  if (!sa || !sb) throw std::runtime_error("the game needs finite structures");
  auto M = LabeledFiniteOrder::chain((uint32_t)*sa);
  auto N = LabeledFiniteOrder::chain((uint32_t)*sb);
  GameConfig cfg;
  cfg.trace = true;

  json transcript;
  transcript["schema"] = 1;
  transcript["lhs"] = to_text(ta);
  transcript["rhs"] = to_text(tb);
  transcript["rank"] = o.rank;
  transcript["side"] = side;
  json moves = json::array();

  if (side == "engine") {  // engine-vs-engine: replay the solved game's trace
    auto res = bf_finite(M, {}, N, {}, o.rank, cfg);
    transcript["verdict"] = verdict_name(res.verdict);
    transcript["moves"] = steps_to_json(res.trace);
    std::cout << transcript.dump() << "\n";
    return res.verdict == Verdict::LE ? 0 : 1;
  }

  bool human_spoiler = side == "spoiler";
  // state: current pair of structures with pinned tuples; spoiler plays on
  // the right structure, replies land on the left, then the sides swap
  LabeledFiniteOrder L = M, R = N;
  std::vector<uint32_t> la, rb;
  uint32_t rank = o.rank;
  const char* outcome = nullptr;

  while (rank > 0) {
    std::vector<uint32_t> d;
    if (human_spoiler) {
      std::cout << "spoiler plays on [" << (R.size == N.size && rank == o.rank ? "rhs" : "right")
                << "] with " << R.size << " elements; enter indices:" << std::endl;
      bool eof = false;
      for (;;) {
        try {
          d = read_tuple_line(std::cin, R.size, eof);
          break;
        } catch (const std::exception& e) {
          std::cout << "illegal move (" << e.what() << "); try again:" << std::endl;
        }
      }
      if (eof) {
        outcome = "abandoned";
        break;
      }
    } else {
      auto res = bf_finite(L, la, R, rb, rank, cfg);
      if (res.verdict == Verdict::LE || res.trace.empty()) {
        std::cout << "engine finds no winning spoiler play and concedes" << std::endl;
        outcome = "duplicator";
        break;
      }
      d = res.trace[0].spoiler;
      std::cout << "engine spoiler plays:";
      for (auto x : d) std::cout << " " << x;
      std::cout << std::endl;
    }

    // duplicator answers on the left structure
    std::vector<uint32_t> c;
    if (human_spoiler) {
      // engine duplicator: search for a surviving reply
      bool found = false;
      std::vector<uint32_t> nb = rb;
      nb.insert(nb.end(), d.begin(), d.end());
      std::function<bool(std::vector<uint32_t>&)> search = [&](std::vector<uint32_t>& acc) {
        if (acc.size() == d.size()) {
          std::vector<uint32_t> ma = la;
          ma.insert(ma.end(), acc.begin(), acc.end());
          return bf_finite(R, nb, L, ma, rank - 1).verdict == Verdict::LE;
        }
        for (uint32_t x = 0; x < L.size; ++x) {
          acc.push_back(x);
          if (search(acc)) return true;
          acc.pop_back();
        }
        return false;
      };
      found = search(c);
      if (!found) {
        std::cout << "engine duplicator concedes" << std::endl;
        json mv;
        mv["spoiler"] = d;
        mv["reply"] = nullptr;
        moves.push_back(mv);
        outcome = "spoiler";
        break;
      }
      std::cout << "engine duplicator replies:";
      for (auto x : c) std::cout << " " << x;
      std::cout << std::endl;
    } else {
      std::cout << "duplicator answers on [left] with " << L.size
                << " elements; enter indices:" << std::endl;
      bool eof = false;
      for (;;) {
        try {
          c = read_tuple_line(std::cin, L.size, eof);
          if (!eof && c.size() != d.size())
            throw std::runtime_error("reply must have the same length");
          break;
        } catch (const std::exception& e) {
          std::cout << "illegal move (" << e.what() << "); try again:" << std::endl;
        }
      }
      if (eof) {
        outcome = "abandoned";
        break;
      }
    }

    json mv;
    mv["spoiler"] = d;
    mv["reply"] = c;
    moves.push_back(mv);

    // swap the board: the answered position continues with one rank less
    std::vector<uint32_t> nb = rb, ma = la;
    nb.insert(nb.end(), d.begin(), d.end());
    ma.insert(ma.end(), c.begin(), c.end());
    std::swap(L, R);
    la = std::move(nb);
    rb = std::move(ma);
    rank--;

    if (!atomic_type_equal(L, la, R, rb)) {
      outcome = "spoiler";
      std::cout << "tuples no longer match: spoiler wins" << std::endl;
      break;
    }
  }
  if (!outcome) {
    outcome = "duplicator";
    std::cout << "clock exhausted with matching tuples: duplicator wins" << std::endl;
  }
  transcript["moves"] = moves;
  transcript["winner"] = outcome;
  auto ref = bf_finite(M, {}, N, {}, o.rank);
  transcript["verdict"] = verdict_name(ref.verdict);
  std::cout << transcript.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"back-and-forth relations, type formulas, and effective codings on countable "
               "linear orders"};
  app.require_subcommand(1);
  Options opt;
  apply_env(opt);
  auto add_common = [&opt](CLI::App* s) {
    s->add_option("--rank", opt.rank, "back-and-forth rank");
    s->add_option("--probe", opt.probe, "probe budget");
    s->add_option("--memo", opt.memo, "memo budget");
    s->add_option("--seed", opt.seed, "seed for all randomized components");
    s->add_flag("--json", opt.emit_json, "emit JSON");
  };

  std::string lhs, rhs, farg, sarg, tuple_arg, what, name = "all", outdir, side = "engine";
  uint32_t kpow = 1;

  auto* bf = app.add_subcommand("bf", "decide lhs <=_rank rhs");
  bf->add_option("lhs", lhs)->required();
  bf->add_option("rhs", rhs)->required();

  auto* cls = app.add_subcommand("classify", "complexity tag of a formula");
  cls->add_option("formula", farg)->required();

  auto* split = app.add_subcommand("split", "interval sentences for a satisfied formula");
  split->add_option("structure", sarg)->required();
  split->add_option("tuple", tuple_arg, "comma-separated, may be empty")->required();
  split->add_option("formula", farg)->required();

  auto* enc = app.add_subcommand("encode", "encode corpus records into terms");
  enc->add_option("corpus", sarg)->required();
  enc->add_option("--out", outdir, "write one term file per record");

  auto* dec = app.add_subcommand("decode", "decode a term (phi|eta|zeta)");
  dec->add_option("what", what)->required();
  dec->add_option("term", lhs, "term text, file, or - for stdin")->required();
  dec->add_option("--k", kpow, "power for zeta decoding");

  auto* jmp = app.add_subcommand("jump", "apply a jump (eta|zeta)");
  jmp->add_option("what", what)->required();
  jmp->add_option("term", lhs)->required();
  jmp->add_option("--k", kpow, "power for the zeta jump");

  auto* img = app.add_subcommand("image", "image membership (phi|eta|zeta)");
  img->add_option("what", what)->required();
  img->add_option("term", lhs)->required();
  img->add_option("--k", kpow);

  auto* suite = app.add_subcommand("suite", "run acceptance criterion groups");
  suite->add_option("name", name, "group name or 'all'");

  auto* game = app.add_subcommand("game", "play the back-and-forth game");
  game->add_option("lhs", lhs)->required();
  game->add_option("rhs", rhs)->required();
  game->add_option("--side", side, "spoiler|duplicator|engine");

  for (auto* s : {bf, cls, split, enc, dec, jmp, img, suite, game}) add_common(s);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bf->parsed()) return cmd_bf(lhs, rhs, opt);
    if (cls->parsed()) return cmd_classify(farg, opt);
    if (split->parsed()) return cmd_split(sarg, tuple_arg, farg, opt);
    if (enc->parsed()) return cmd_encode(sarg, outdir, opt);
    if (dec->parsed()) return cmd_decode(what, lhs, kpow, opt);
    if (jmp->parsed()) return cmd_jump(what, lhs, kpow, opt);
    if (img->parsed()) return cmd_image(what, lhs, kpow, opt);
    if (suite->parsed()) return cmd_suite(name, opt);
    if (game->parsed()) return cmd_game(lhs, rhs, side, opt);
  } catch (const TermParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const AddressError& e) {
    std::cerr << "address error: " << e.what() << "\n";
    return 3;
  } catch (const FormulaError& e) {
    std::cerr << "formula error: " << e.what() << "\n";
    return 3;
  } catch (const NotInImage& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const UnsupportedJump& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return 3;
}
