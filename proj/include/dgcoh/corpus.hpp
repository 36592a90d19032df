#pragma once

// Regression corpus: algebra files with `#!` lines pinning the expected
// Gorenstein parameters, the window, the twist range and the test modules.
//
//   #! expect gorenstein a=2 n=2
//   #! dualizing twist=0 shift=1     (optional override of R = A(-a)[n])
//   #! window -8:8:-4:4
//   #! twists -5:5
//   #! modules A k A(-2) A>=3 cone_x.mod
//
// Module files are resolved relative to the entry's directory.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dgcoh/duality.hpp"
#include "dgcoh/parse.hpp"

namespace dgcoh {

struct CorpusEntry {
  std::string name;
  std::filesystem::path path;
  DgAlgebraPresentation presentation;
  std::optional<std::pair<int, int>> expect;  // (a, n)
  std::optional<ShiftSpec> dualizing;
  Window window{-8, 8, -4, 4};
  int twist_lo = -3, twist_hi = 3;
  std::vector<std::string> modules{"A", "k"};
};

CorpusEntry load_corpus_entry(const std::filesystem::path& p, const FieldOptions& fo = {});
/// Every *.alg file in `dir`, sorted by name.  Empty directory: InputError.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir, const FieldOptions& fo = {});

struct Artifact {
  std::string path;  // relative to the output directory
  std::string content;
};

struct CheckOutcome {
  std::string entry, check, module;
  int status = 0;  // 0 pass, 1 fail, 3 window too small
  std::string line;  // one-line summary
  std::vector<Artifact> artifacts;
};

struct CorpusRun {
  std::vector<CheckOutcome> outcomes;
  int status = 0;  // worst outcome

  /// entry,check,module,status,summary
  std::string summary_csv() const;
};

/// Runs every check on every entry; jobs are spread over `threads` workers
/// and collected in a fixed order.
CorpusRun run_corpus(const std::vector<CorpusEntry>& entries, const EngineOptions& opt, int threads);

/// Write-to-temporary then rename.
void write_file_atomic(const std::filesystem::path& p, const std::string& content);
void write_artifacts(const std::filesystem::path& out, const CorpusRun& run);

/// File-name-safe form of a module label.
std::string slug(const std::string& label);

}  // namespace dgcoh
