// Acceptance run: one PASS/FAIL line per criterion, details indented below a
// failing line.  Exit status 1 if any criterion fails.

#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "dgcoh/corpus.hpp"

namespace fs = std::filesystem;
using namespace dgcoh;

namespace {

const fs::path kRoot = DGCOH_SOURCE_DIR;

struct Result {
  bool ok = true;
  std::vector<std::string> failures;
  std::string summary;

  void fail(const std::string& what) {
    ok = false;
    if (failures.size() < 20) failures.push_back(what);
  }
  void expect(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
};

std::shared_ptr<const Algebra> load(const std::string& name) {
  const fs::path p = kRoot / "corpus" / (name + ".alg");
  return std::make_shared<const Algebra>(parse_algebra(read_text_file(p), {}, p.string()));
}

std::string module_path(const std::string& file) { return (kRoot / "corpus" / file).string(); }

bool has_generator(const Algebra& a, const std::string& name) {
  for (std::size_t g = 0; g < a.num_generators(); ++g)
    if (a.generator(g).name == name) return true;
  return false;
}

std::string where(const std::string& entry, const std::string& module) { return entry + " / " + module; }

/// Cells certified in both tables, and the ones that differ.
std::pair<std::size_t, std::vector<Bidegree>> agree(const DimTable& x, const DimTable& y, const Window& w) {
  std::size_t both = 0;
  std::vector<Bidegree> diff;
  for (int i = w.i_min; i <= w.i_max; ++i)
    for (int j = w.j_min; j <= w.j_max; ++j) {
      const Bidegree b{i, j};
      if (!x.certified(b) || !y.certified(b)) continue;
      ++both;
      if (x.at(b) != y.at(b)) diff.push_back(b);
    }
  return {both, diff};
}

// Shared corpus runs -----------------------------------------------------------

struct VerifyLog {
  std::mutex mu;
  std::size_t checked = 0;
  std::vector<std::string> bad;
};

struct Runs {
  std::vector<CorpusEntry> entries;
  CorpusRun single;  // 1 thread, no cache, every resolution verified
  std::shared_ptr<VerifyLog> verified = std::make_shared<VerifyLog>();

  const CheckOutcome* find(const std::string& entry, const std::string& check, const std::string& module) const {
    for (const auto& o : single.outcomes)
      if (o.entry == entry && o.check == check && o.module == module) return &o;
    return nullptr;
  }
};

Runs& runs() {
  static Runs r = [] {
    Runs out;
    out.entries = load_corpus(kRoot / "corpus");
    EngineOptions opt;
    auto log = out.verified;
    opt.on_resolution = [log](const ResolutionData& r) {
      const auto rep = verify_resolution(r);
      std::lock_guard<std::mutex> lock(log->mu);
      ++log->checked;
      if (!rep.ok()) log->bad.push_back(r.target.label() + " through " + std::to_string(r.depth));
    };
    out.single = run_corpus(out.entries, opt, 1);
    return out;
  }();
  return r;
}

CorpusEntry entry(const std::string& name) { return load_corpus_entry(kRoot / "corpus" / (name + ".alg")); }

WindowedComplex dualizing(const CorpusEntry& e, std::shared_ptr<const Algebra> a) {
  const auto [ea, en] = *e.expect;
  return module_argument("A(" + std::to_string(-ea) + ")[" + std::to_string(en) + "]", a, e.window);
}

// Criteria ---------------------------------------------------------------------

Result dual_pipeline() {
  Result res;
  const Window w(-10, 10, -5, 5);
  std::size_t compared = 0, cells = 0;
  for (const char* name : {"kx", "kxy", "kxy_xy", "koszul_kx_x2", "lambda_e"}) {
    auto a = load(name);
    for (const char* arg : {"A", "k", "A(-2)", "A>=2"}) {
      const auto m = module_argument(arg, a, w);
      const auto [both, diff] = agree(local_cohomology_colim(m, w).table, local_cohomology_cech(m, w).table, w);
      compared += both;
      cells += static_cast<std::size_t>(w.i_max - w.i_min + 1) * (w.j_max - w.j_min + 1);
      res.expect(both > 0, where(name, arg) + ": no bidegree certified by both pipelines");
      for (const auto& b : diff) res.fail(where(name, arg) + ": pipelines differ at " + to_string(b));
    }
  }
  res.summary = std::to_string(compared) + "/" + std::to_string(cells) + " cells certified by both";
  return res;
}

Result serre_p1() {
  Result res;
  auto a = load("kxy");
  const Window w(-8, 8, -4, 4);
  const auto r = module_argument("A(-2)[2]", a, w);
  std::size_t compared = 0;
  for (const std::string arg : {"A", "k(1)", "k(-1)", "k(2)", "k(-2)", "A>=3", "cone_x.mod", "cone_x2.mod"}) {
    const auto m = module_argument(arg.find(".mod") != std::string::npos ? module_path(arg) : arg, a, w);
    const auto rep = serre_duality_check(m, r, w, -5, 5);
    compared += rep.compared;
    res.expect(rep.passed(), "kxy / " + arg + ": " + rep.summary());
  }
  // the P^1 table: closed form, the Cech oracle (H^0 = A_l and H^1 = H^2_m
  // since A has depth 2) and RGamma must all agree
  const Window t(-5, 5, -1, 2);
  const auto A = free_module(a, w);
  const DimTable gamma = derived_global_sections(A, t).table;
  const DimTable cech = local_cohomology_cech(A, t).table;
  const DimTable h = cohomology(A, t).table;
  for (int l = -5; l <= 5; ++l) {
    const int h0 = std::max(l + 1, 0), h1 = std::max(-l - 1, 0);
    for (int j = -1; j <= 1; ++j) {
      const Bidegree b{l, j};
      const int closed = j == 0 ? h0 : j == 1 ? h1 : 0;
      const int oracle = j == 1 ? cech.at({l, 2}) : h.at(b);
      res.expect(gamma.certified(b) && gamma.at(b) == closed,
                 "RGamma(O(" + std::to_string(l) + "))^" + std::to_string(j) + " differs from the P^1 table");
      res.expect(cech.certified({l, 2}) && oracle == closed,
                 "Cech oracle differs from the P^1 table at " + to_string(b));
    }
    res.expect(cech.at({l, 0}) == 0 && cech.at({l, 1}) == 0, "H^0_m or H^1_m of k[x,y] nonzero");
  }
  res.summary = std::to_string(compared) + " Serre comparisons, P^1 table for l in [-5,5]";
  return res;
}

Result gorenstein_parameters() {
  Result res;
  auto check = [&](const std::string& name, int ea, int en) {
    const auto e = entry(name);
    const auto cert = gorenstein_detect(load(name), e.window);
    res.expect(cert.gorenstein_in_window && cert.a == ea && cert.n == en,
               name + ": got (" + std::to_string(cert.a) + "," + std::to_string(cert.n) + ") found=" +
                   std::to_string(cert.gorenstein_in_window));
    return cert;
  };
  check("kx", 1, 1);
  check("kxy", 2, 2);
  check("kxyz", 3, 3);
  check("lambda_e", -1, 0);
  const auto koszul = check("koszul_kx_x2", -1, 0);
  const auto ring = check("kx_mod_x2", -1, 0);
  // the Koszul dg-algebra and k[x]/(x^2) are quasi-isomorphic: same Ext(k, A)
  const Window& w = koszul.evidence.table.valid();
  res.expect(w == ring.evidence.table.valid(), "Koszul and k[x]/(x^2) evidence windows differ");
  res.expect(koszul.evidence.table.holes().empty() && ring.evidence.table.holes().empty(),
             "Ext(k, A) not fully certified");
  const auto [both, diff] = agree(koszul.evidence.table, ring.evidence.table, w);
  for (const auto& b : diff) res.fail("Ext(k,A) of Koszul(k[x],x^2) and k[x]/(x^2) differ at " + to_string(b));
  res.summary = "(c,c) for c=1..3, (-1,0) twice, Ext(k,A) equal on " + std::to_string(both) + " cells";
  return res;
}

Result balanced() {
  Result res;
  std::size_t controls = 0;
  for (const auto& e : runs().entries) {
    const auto* o = runs().find(e.name, "balanced", "");
    res.expect(o && o->status == 0, e.name + ": " + (o ? o->line : "balanced check missing"));
    const auto [ea, en] = *e.expect;
    if (ea == 0) continue;  // A(0)[n] is the right twist there
    auto a = load(e.name);
    const auto wrong = balanced_check(a, module_argument("A(0)[" + std::to_string(en) + "]", a, e.window), e.window);
    ++controls;
    res.expect(!wrong.mismatches.empty(), e.name + ": wrong twist A(0)[n] was not rejected");
  }
  const auto control = run_corpus(load_corpus(kRoot / "corpus_controls"), {}, 1);
  for (const auto& o : control.outcomes)
    if (o.check == "balanced") res.expect(o.status == 1, "control " + o.entry + " did not FAIL: " + o.line);
  res.summary = std::to_string(runs().entries.size()) + " entries, " + std::to_string(controls) +
                " wrong-twist controls rejected";
  return res;
}

/// Every (entry, module) pair runs `check`: from the corpus run when the
/// entry lists the module, directly otherwise.
template <class Direct>
std::size_t cover(Result& res, const std::string& check, const std::vector<std::string>& modules, bool cones,
                  Direct direct) {
  std::size_t n = 0;
  for (const auto& e : runs().entries) {
    auto a = load(e.name);
    std::vector<std::string> want = modules;
    if (cones && has_generator(*a, "x")) want.insert(want.end(), {"cone_x.mod", "cone_x2.mod"});
    for (const auto& m : want) {
      ++n;
      if (const auto* o = runs().find(e.name, check, m)) {
        res.expect(o->status == 0, where(e.name, m) + ": " + o->line);
        continue;
      }
      const auto mod = module_argument(m.find(".mod") != std::string::npos ? module_path(m) : m, a, e.window);
      const DualityReport rep = direct(mod, dualizing(e, a), e.window);
      res.expect(rep.passed(), where(e.name, m) + ": " + rep.summary());
    }
  }
  return n;
}

Result local_duality() {
  Result res;
  const auto n = cover(res, "local-duality", {"A", "k", "A(-2)"}, false,
                       [](const auto& m, const auto& r, const Window& w) { return local_duality_check(m, r, w); });
  res.summary = std::to_string(n) + " (entry, module) pairs";
  return res;
}

Result vanishing() {
  Result res;
  const auto n = cover(res, "vanishing", {"A", "A[-3]"}, true,
                       [](const auto& m, const auto& r, const Window& w) { return vanishing_range_check(m, r, w); });
  const auto e = entry("kxy");
  auto a = load("kxy");
  const auto rep = vanishing_range_check(free_module(a, e.window), dualizing(e, a), e.window);
  res.expect(rep.passed() && rep.attained, "A over k[x,y]: range not attained at both ends\n" + rep.text());
  res.summary = std::to_string(n) + " (entry, module) pairs, range attained for A over k[x,y]";
  return res;
}

std::map<Bidegree, int> census(const ResolutionData& r) {
  std::map<Bidegree, int> c;
  for (const auto& g : r.generators) ++c[g.bidegree];
  return c;
}

long binom(int n, int k) {
  long v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

Result resolutions() {
  Result res;
  {
    auto& log = *runs().verified;
    std::lock_guard<std::mutex> lock(log.mu);
    res.expect(log.checked > 0, "no resolutions were observed in the corpus run");
    for (const auto& b : log.bad) res.fail("verify_resolution failed: " + b);
  }
  // a contractible pair u -> v added to the presentation changes nothing
  const std::string pair = "modgen u internal=2 cohom=-1\nmodgen v internal=2 cohom=0\nmoddiff u = v\n";
  std::size_t ext_cells = 0;
  for (const auto& [name, text] : std::vector<std::pair<std::string, std::string>>{
           {"kxy", read_text_file(module_path("cone_x.mod"))},
           {"kx", read_text_file(module_path("cone_x2.mod"))},
           {"koszul_kx_x2", read_text_file(module_path("cone_x.mod"))},
           {"lambda_e", "modgen g internal=0 cohom=0\n"}}) {
    auto a = load(name);
    const Window w = entry(name).window;
    const auto m = compile(parse_module(text, a, name), w);
    const auto m2 = compile(parse_module(text + pair, a, name), w);
    for (const char* n_arg : {"A", "k"}) {
      const auto n = module_argument(n_arg, a, w);
      const auto e1 = ext_table(m, n, w), e2 = ext_table(m2, n, w);
      const auto [both, diff] = agree(e1.table, e2.table, w);
      ext_cells += both;
      res.expect(both > 0, name + " Ext(M, " + n_arg + "): nothing certified");
      for (const auto& b : diff) res.fail(name + " Ext(M, " + n_arg + ") changed at " + to_string(b));
      res.expect(verify_resolution(*e2.resolution).ok(), name + ": resolution of the padded module fails");
      res.expect(census(*e1.resolution) == census(*e2.resolution), name + ": padded module has a different census");
    }
  }
  // Betti numbers of k over k[x1..xn] at two window sizes
  for (int n = 1; n <= 3; ++n) {
    auto a = std::make_shared<const Algebra>(polynomial_algebra(PrimeField(), std::vector<int>(n, 1)));
    for (int depth : {n + 2, n + 5}) {
      const Window w(0, depth, -depth - 1, 1);
      const auto r = semifree_resolution(residue_field(a, w), w);
      res.expect(verify_resolution(r).ok(), "k over k[x1..x" + std::to_string(n) + "]: verify_resolution failed");
      std::map<Bidegree, int> want;
      for (int t = 0; t <= n; ++t) want[{t, -t}] = static_cast<int>(binom(n, t));
      res.expect(census(r) == want, "Betti census of k over k[x1..x" + std::to_string(n) + "] at depth " +
                                        std::to_string(depth));
    }
  }
  res.summary = std::to_string(runs().verified->checked) + " resolutions verified, Ext equal on " +
                std::to_string(ext_cells) + " cells, Betti census n<=3 at two depths";
  return res;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& f : fs::recursive_directory_iterator(dir))
    if (f.is_regular_file()) out[fs::relative(f.path(), dir).string()] = read_text_file(f.path());
  return out;
}

Result determinism() {
  Result res;
  const int n = std::max(2, std::min(4, static_cast<int>(std::thread::hardware_concurrency())));
  const fs::path tmp = fs::temp_directory_path() / ("dgcoh_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(tmp);
  EngineOptions cached;
  cached.cache_dir = tmp / "cache";
  const CorpusRun cold = run_corpus(runs().entries, cached, n);
  const CorpusRun warm = run_corpus(runs().entries, cached, n);
  write_artifacts(tmp / "single", runs().single);
  write_artifacts(tmp / "cold", cold);
  write_artifacts(tmp / "warm", warm);
  const auto base = read_tree(tmp / "single");
  res.expect(base.size() > 1, "no artifacts written");
  for (const char* other : {"cold", "warm"}) {
    const auto tree = read_tree(tmp / other);
    res.expect(tree.size() == base.size(), std::string(other) + ": different artifact set");
    for (const auto& [path, content] : base) {
      auto it = tree.find(path);
      res.expect(it != tree.end() && it->second == content, std::string(other) + ": " + path + " differs");
    }
  }
  res.expect(fs::exists(cached.cache_dir) && !fs::is_empty(cached.cache_dir), "cache directory was not populated");
  res.summary = std::to_string(base.size()) + " artifacts identical for 1 thread, " + std::to_string(n) +
                " threads cold cache, " + std::to_string(n) + " threads warm cache";
  fs::remove_all(tmp);
  return res;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Result (*)()>> criteria = {
      {"dual-pipeline local cohomology", dual_pipeline},
      {"Serre duality on P^1", serre_p1},
      {"Gorenstein parameters", gorenstein_parameters},
      {"balanced dualizing module", balanced},
      {"local duality", local_duality},
      {"vanishing range", vanishing},
      {"resolution self-consistency", resolutions},
      {"determinism and parallel safety", determinism},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << (r.ok ? "PASS " : "FAIL ") << k + 1 << ' ' << criteria[k].first << ": " << r.summary << " (" << secs
         << "s)";
    std::cout << line.str() << '\n';
    for (const auto& f : r.failures) std::cout << "  - " << f << '\n';
    std::cout.flush();
    all = all && r.ok;
  }
  return all ? 0 : 1;
}
