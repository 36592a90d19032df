#include "dgcoh/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <thread>

#include <unistd.h>

namespace dgcoh {

namespace {

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError("malformed " + what + " '" + s + "'");
}

std::map<std::string, std::string> pairs(std::istringstream& is) {
  std::map<std::string, std::string> kv;
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw InputError("expected key=value, got '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InputError("missing " + key + "=");
  return it->second;
}

std::string status_word(int s) {
  switch (s) {
    case 0: return "PASS";
    case 1: return "FAIL";
    case 3: return "WINDOW";
    default: return "ERROR";
  }
}

}  // namespace

std::string slug(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.')
      out += c;
    else if (c == '>')
      out += "ge";
    else if (c == '<')
      out += "lt";
    else if (c == '(' || c == '[')
      out += '_';
  }
  return out;
}

CorpusEntry load_corpus_entry(const std::filesystem::path& p, const FieldOptions& fo) {
  const std::string text = read_text_file(p);
  CorpusEntry e;
  e.name = p.stem().string();
  e.path = p;
  e.presentation = parse_algebra(text, fo, p.string());
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    if (raw.rfind("#!", 0) != 0) continue;
    try {
      std::istringstream ls(raw.substr(2));
      std::string key;
      ls >> key;
      if (key == "expect") {
        std::string what;
        ls >> what;
        if (what != "gorenstein") throw InputError("unknown expectation '" + what + "'");
        auto kv = pairs(ls);
        e.expect = std::pair{parse_int(need(kv, "a"), "a"), parse_int(need(kv, "n"), "n")};
      } else if (key == "dualizing") {
        auto kv = pairs(ls);
        e.dualizing = ShiftSpec{parse_int(need(kv, "twist"), "twist"), parse_int(need(kv, "shift"), "shift")};
      } else if (key == "window") {
        std::string w;
        ls >> w;
        e.window = Window::parse(w);
      } else if (key == "twists") {
        std::string t;
        ls >> t;
        auto colon = t.find(':');
        if (colon == std::string::npos) throw InputError("twists must be a:b");
        e.twist_lo = parse_int(t.substr(0, colon), "twist");
        e.twist_hi = parse_int(t.substr(colon + 1), "twist");
      } else if (key == "modules") {
        e.modules.clear();
        std::string m;
        while (ls >> m) e.modules.push_back(m);
      } else {
        throw InputError("unknown meta line '" + key + "'");
      }
    } catch (const EngineError& err) {
      throw InputError(p.string() + ":" + std::to_string(line) + ": " + err.what());
    }
  }
  if (!e.expect) throw InputError(p.string() + ": corpus entries need an '#! expect gorenstein' line");
  return e;
}

std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, const FieldOptions& fo) {
  if (!std::filesystem::is_directory(dir)) throw InputError("corpus directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(dir))
    if (f.path().extension() == ".alg") files.push_back(f.path());
  if (files.empty()) throw InputError("corpus directory " + dir.string() + " has no .alg entries");
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& f : files) out.push_back(load_corpus_entry(f, fo));
  return out;
}

std::string CorpusRun::summary_csv() const {
  std::ostringstream os;
  os << "entry,check,module,status,summary\n";
  for (const auto& o : outcomes)
    os << o.entry << ',' << o.check << ',' << o.module << ',' << status_word(o.status) << ',' << o.line << '\n';
  return os.str();
}

namespace {

struct Job {
  const CorpusEntry* entry;
  std::string check, module;
};

WindowedComplex corpus_module(const CorpusEntry& e, std::shared_ptr<const Algebra> a, const std::string& arg) {
  static const std::regex builtin(R"(^\s*(A|k)\b.*)");
  if (std::regex_match(arg, builtin)) return module_argument(arg, a, e.window);
  return module_argument((e.path.parent_path() / arg).string(), a, e.window).with_label(arg);
}

CheckOutcome report_outcome(const Job& job, const DualityReport& rep, const std::string& stem) {
  CheckOutcome o{job.entry->name, job.check, job.module, rep.passed() ? 0 : 1, rep.summary(), {}};
  o.artifacts.push_back({stem + ".txt", rep.text()});
  o.artifacts.push_back({stem + "_mismatches.csv", "# window " + rep.window.str() + "\n" + rep.mismatches_csv()});
  return o;
}

CheckOutcome run_job(const Job& job, const EngineOptions& opt) {
  const CorpusEntry& e = *job.entry;
  const std::string dir = e.name + "/";
  try {
    auto a = std::make_shared<const Algebra>(e.presentation);
    const Window& w = e.window;
    const auto [ea, en] = *e.expect;
    const ShiftSpec rs = e.dualizing.value_or(ShiftSpec{-ea, en});
    const WindowedComplex r = shift_twist(free_module(a, w.shifted(ShiftSpec{-rs.twist, -rs.shift})), rs)
                                  .with_window(w)
                                  .with_label("R");
    if (job.check == "gorenstein") {
      // detection at the pinned window and at a wider one must agree
      auto c1 = gorenstein_detect(a, w, opt);
      auto c2 = gorenstein_detect(a, Window(w.i_min - 2, w.i_max + 2, w.j_min - 1, w.j_max + 1), opt);
      const bool ok = c1.gorenstein_in_window && c2.gorenstein_in_window && c1.a == ea && c1.n == en && c2.a == ea &&
                      c2.n == en;
      std::ostringstream line;
      line << (ok ? "PASS" : "FAIL") << " gorenstein window=" << w.str() << " found=" << c1.gorenstein_in_window
           << " a=" << c1.a << " n=" << c1.n << " expected a=" << ea << " n=" << en;
      CheckOutcome o{e.name, job.check, "", ok ? 0 : 1, line.str(), {}};
      o.artifacts.push_back({dir + "gorenstein.txt", line.str() + "\n"});
      o.artifacts.push_back({dir + "ext_k_A.csv", c1.evidence.table.to_csv()});
      return o;
    }
    if (job.check == "balanced") return report_outcome(job, balanced_check(a, r, w, opt), dir + "balanced");
    if (job.check == "chi")
      return report_outcome(job, condition_chi_check(a, free_module(a, w), w, opt), dir + "chi");
    const WindowedComplex m = corpus_module(e, a, job.module);
    const std::string stem = dir + job.check + "_" + slug(job.module);
    if (job.check == "local-duality") return report_outcome(job, local_duality_check(m, r, w, opt), stem);
    if (job.check == "serre")
      return report_outcome(job, serre_duality_check(m, r, w, e.twist_lo, e.twist_hi, opt), stem);
    if (job.check == "vanishing") return report_outcome(job, vanishing_range_check(m, r, w, opt), stem);
    throw EngineError("unknown check " + job.check);
  } catch (const WindowTooSmall& err) {
    return {e.name, job.check, job.module, 3, std::string("WINDOW ") + err.what(), {}};
  } catch (const InputError& err) {
    return {e.name, job.check, job.module, 2, std::string("ERROR ") + err.what(), {}};
  }
}

}  // namespace

CorpusRun run_corpus(const std::vector<CorpusEntry>& entries, const EngineOptions& opt, int threads) {
  std::vector<Job> jobs;
  for (const auto& e : entries) {
    for (const char* c : {"gorenstein", "balanced", "chi"}) jobs.push_back({&e, c, ""});
    for (const auto& m : e.modules)
      for (const char* c : {"local-duality", "serre", "vanishing"}) jobs.push_back({&e, c, m});
  }
  CorpusRun run;
  run.outcomes.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next++) < jobs.size();) run.outcomes[k] = run_job(jobs[k], opt);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& o : run.outcomes) run.status = std::max(run.status, o.status);
  return run;
}

void write_file_atomic(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::filesystem::path tmp = p;
  tmp += ".tmp" + std::to_string(::getpid()) + "-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    if (!out) throw EngineError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

void write_artifacts(const std::filesystem::path& out, const CorpusRun& run) {
  for (const auto& o : run.outcomes)
    for (const auto& a : o.artifacts) write_file_atomic(out / a.path, a.content);
  write_file_atomic(out / "summary.csv", run.summary_csv());
}

}  // namespace dgcoh
