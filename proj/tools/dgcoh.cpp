// dgcoh: command-line front end.
//
// Exit status: 0 success / PASS, 1 a theorem check FAILed, 2 input error,
// 3 window too small.

#include <iostream>

#include "CLI11.hpp"
#include "dgcoh/corpus.hpp"

using namespace dgcoh;

namespace {

struct Common {
  std::string window = "-8:8:-4:4";
  std::string twists = "-5:5";
  std::optional<std::uint32_t> field;
  bool allow_char_2 = false;
  std::string out;
  std::string cache;
  int jobs = 1;
};

struct Session {
  std::shared_ptr<const Algebra> a;
  Window w;
  EngineOptions opt;
};

Session open_algebra(const Common& c, const std::string& file) {
  FieldOptions fo{c.field, c.allow_char_2};
  Session s;
  s.w = Window::parse(c.window);
  s.a = std::make_shared<const Algebra>(parse_algebra(read_text_file(file), fo, file));
  auto rep = check_dga(*s.a, s.w);
  if (!rep.ok()) throw InputError(file + ": not a dg-algebra on the window:\n" + rep.summary());
  s.opt.cache_dir = c.cache;
  return s;
}

std::pair<int, int> parse_pair(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("expected a:b, got '" + text + "'");
  try {
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw InputError("expected a:b, got '" + text + "'");
  }
}

/// Writes name -> content into --out, or prints to stdout.
void emit(const Common& c, const std::string& name, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    write_file_atomic(std::filesystem::path(c.out) / name, content);
  }
}

void emit_colimit(const Common& c, const std::string& name, const StabilizedColimit& s) {
  emit(c, name + ".csv", s.table.to_csv());
  if (c.out.empty()) return;
  emit(c, name + ".stabilized_at.csv", s.stabilized_csv());
  emit(c, name + ".warnings", s.warnings_text());
}

int emit_report(const Common& c, const std::string& name, const DualityReport& rep) {
  if (c.out.empty()) {
    std::cout << rep.text();
  } else {
    emit(c, name + ".txt", rep.text());
    emit(c, name + "_mismatches.csv", rep.mismatches_csv());
    std::cout << rep.summary() << '\n';
  }
  return rep.passed() ? 0 : 1;
}

WindowedComplex dualizing_or(const Session& s, const std::string& r_arg) {
  if (!r_arg.empty()) return module_argument(r_arg, s.a, s.w).with_label("R");
  auto cert = gorenstein_detect(s.a, s.w, s.opt);
  if (!cert.gorenstein_in_window)
    throw InputError("no dualizing module given and the algebra is not Gorenstein on the window");
  return dualizing_module(s.a, cert, s.w).with_window(s.w).with_label("R");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomology and duality checks for dg-algebras over a prime field"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--window", c.window, "imin:imax:jmin:jmax")->capture_default_str();
    sub->add_option("--twists", c.twists, "a:b")->capture_default_str();
    sub->add_option("--field", c.field, "prime p (overrides the file)");
    sub->add_flag("--allow-char-2", c.allow_char_2, "accept p = 2");
    sub->add_option("--out", c.out, "output directory (default: stdout)");
    sub->add_option("--cache", c.cache, "resolution cache directory");
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  std::string alg, m1, m2, corpus_dir = "corpus";
  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help, int nmods, bool optional_last = false) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("algebra", alg, "algebra file")->required();
    if (nmods >= 1) sub->add_option("module", m1, "module (A, k, A>=d, A<d with (t)[s], or a file)")->required(!(nmods == 1 && optional_last));
    if (nmods >= 2) sub->add_option("second", m2, "second module / dualizing module")->required(!optional_last);
    common(sub);
    subs[name] = sub;
  };
  add("check-dga", "validate the presentation on the window", 0);
  add("cohomology", "H(M)", 1);
  add("ext", "Ext(M, N)", 2);
  add("localcoh", "local cohomology by both pipelines", 1);
  add("gamma", "derived global sections", 1);
  add("ext-qgr", "Ext in the quotient category", 2);
  add("gorenstein", "Gorenstein parameters", 0);
  add("balanced", "balanced dualizing check (R optional)", 1, true);
  add("local-duality", "local duality check (R optional)", 2, true);
  add("serre", "Serre duality check (R optional)", 2, true);
  add("chi", "condition chi for M (default A)", 1, true);
  add("vanishing", "vanishing range check (R optional)", 2, true);
  CLI::App* corpus = app.add_subcommand("corpus", "run every check on the corpus");
  corpus->add_option("dir", corpus_dir, "corpus directory")->capture_default_str();
  common(corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (corpus->parsed()) {
      EngineOptions opt;
      opt.cache_dir = c.cache;
      auto entries = load_corpus(corpus_dir, FieldOptions{c.field, c.allow_char_2});
      auto run = run_corpus(entries, opt, c.jobs);
      if (!c.out.empty()) write_artifacts(c.out, run);
      std::cout << run.summary_csv();
      return run.status;
    }
    std::string cmd;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) cmd = name;
    Session s = open_algebra(c, alg);
    const Window& w = s.w;
    auto mod = [&](const std::string& arg) { return module_argument(arg, s.a, w); };

    if (cmd == "check-dga") {
      std::cout << "ok: " << s.a->num_generators() << " generators, window " << w.str() << '\n';
      return 0;
    }
    if (cmd == "cohomology") {
      emit(c, "cohomology.csv", cohomology(mod(m1), w).table.to_csv());
      return 0;
    }
    if (cmd == "ext") {
      emit(c, "ext.csv", ext_table(mod(m1), mod(m2), w, s.opt).table.to_csv());
      return 0;
    }
    if (cmd == "localcoh") {
      const WindowedComplex m = mod(m1);
      const auto colim = local_cohomology_colim(m, w, s.opt);
      const auto cech = local_cohomology_cech(m, w);
      emit_colimit(c, "localcoh", colim);
      emit_colimit(c, "localcoh_cech", cech);
      auto valid = colim.table.valid();
      std::size_t diff = 0;
      for (int i = valid.i_min; i <= valid.i_max; ++i)
        for (int j = valid.j_min; j <= valid.j_max; ++j)
          if (colim.table.certified({i, j}) && cech.table.certified({i, j}) &&
              colim.table.at({i, j}) != cech.table.at({i, j}))
            ++diff;
      std::cerr << (diff ? "pipelines disagree at " + std::to_string(diff) + " bidegrees\n" : "pipelines agree\n");
      return diff ? 1 : 0;
    }
    if (cmd == "gamma") {
      emit_colimit(c, "gamma", derived_global_sections(mod(m1), w, s.opt));
      return 0;
    }
    if (cmd == "ext-qgr") {
      emit_colimit(c, "ext_qgr", ext_qgr(mod(m1), mod(m2), w, s.opt));
      return 0;
    }
    if (cmd == "gorenstein") {
      auto cert = gorenstein_detect(s.a, w, s.opt);
      if (!c.out.empty()) emit(c, "ext_k_A.csv", cert.evidence.table.to_csv());
      if (!cert.gorenstein_in_window) {
        std::cout << "not Gorenstein on window " << w.str() << '\n';
        return 1;
      }
      std::cout << "(a,n)=(" << cert.a << "," << cert.n << ")\n";
      return 0;
    }
    if (cmd == "balanced") return emit_report(c, "balanced", balanced_check(s.a, dualizing_or(s, m1), w, s.opt));
    if (cmd == "local-duality")
      return emit_report(c, "local-duality", local_duality_check(mod(m1), dualizing_or(s, m2), w, s.opt));
    if (cmd == "serre") {
      auto [lo, hi] = parse_pair(c.twists);
      return emit_report(c, "serre", serre_duality_check(mod(m1), dualizing_or(s, m2), w, lo, hi, s.opt));
    }
    if (cmd == "chi")
      return emit_report(c, "chi", condition_chi_check(s.a, m1.empty() ? mod("A") : mod(m1), w, s.opt));
    if (cmd == "vanishing")
      return emit_report(c, "vanishing", vanishing_range_check(mod(m1), dualizing_or(s, m2), w, s.opt));
    throw InputError("unknown command");
  } catch (const WindowTooSmall& e) {
    std::cerr << "window too small: " << e.what() << '\n';
    return 3;
  } catch (const OutOfWindow& e) {
    std::cerr << "window too small: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const EngineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  }
}
