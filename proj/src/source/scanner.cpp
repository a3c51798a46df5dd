// SPDX-License-Identifier: Apache-2.0
#include "slopscope/source/scanner.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "slopscope/common/error.hpp"
#include "slopscope/common/parallel.hpp"
#include "slopscope/source/text.hpp"

namespace fs = std::filesystem;

namespace slopscope::source {
namespace {

const GrammarAdapter* adapter_for(std::string_view path, const ScanConfig& config, const AdapterRegistry& registry) {
  const auto slash = path.rfind('/');
  const std::string_view name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  const auto dot = name.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return nullptr;
  const GrammarAdapter* adapter = registry.by_extension(name.substr(dot));
  if (adapter == nullptr) return nullptr;
  const bool enabled = std::find(config.languages.begin(), config.languages.end(), adapter->language()) !=
                       config.languages.end();
  return enabled ? adapter : nullptr;
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return std::move(ss).str();
}

struct FileOutcome {
  std::optional<AnalyzedFile> file;
  std::optional<SkippedFile> skipped;
};

FileOutcome analyze_one(SourceBlob& blob, const GrammarAdapter& adapter, const ScanConfig& config) {
  FileOutcome out;
  std::string text;
  if (!decode_to_utf8(blob.bytes, config.encoding, text)) {
    out.skipped = SkippedFile{blob.path, "decode"};
    return out;
  }
  blob.bytes.clear();
  blob.bytes.shrink_to_fit();
  const std::uint32_t lines = physical_line_count(text);
  if (lines > 0 && text.size() / lines > config.minified_line_threshold) {
    out.skipped = SkippedFile{blob.path, "minified"};
    return out;
  }
  std::shared_ptr<const ParsedSource> parsed;
  try {
    parsed = adapter.parse(std::move(text));
  } catch (const ParseError&) {
    out.skipped = SkippedFile{blob.path, "parse"};
    return out;
  }
  AnalyzedFile file;
  file.record.path = blob.path;
  file.record.language = std::string(adapter.language());
  file.record.line_count = parsed->line_count();
  file.record.loc = static_cast<std::uint32_t>(parsed->code_lines().size());
  file.record.decode_ok = true;
  file.callables = parsed->callables(blob.path);
  file.parsed = std::move(parsed);
  out.file = std::move(file);
  return out;
}

}  // namespace

SourceInventory ParsedSnapshot::inventory() const {
  SourceInventory inv;
  for (const AnalyzedFile& f : files) {
    inv.files.push_back(f.record);
    inv.callables.insert(inv.callables.end(), f.callables.begin(), f.callables.end());
  }
  inv.skipped = skipped;
  canonicalize(inv);
  return inv;
}

bool is_candidate(std::string_view path, const ScanConfig& config, const AdapterRegistry& registry) {
  return adapter_for(path, config, registry) != nullptr && !is_excluded(path, config.exclude);
}

bool is_excluded(std::string_view path, const std::vector<std::string>& globs) {
  const std::string p(path);
  for (const std::string& g : globs) {
    if (fnmatch(g.c_str(), p.c_str(), 0) == 0) return true;
  }
  return false;
}

void validate(const ScanConfig& config, const AdapterRegistry& registry) {
  for (const std::string& lang : config.languages) {
    if (registry.by_language(lang) == nullptr) throw UsageError("unknown language '" + lang + "'");
  }
  if (!is_supported_encoding(config.encoding)) throw UsageError("unsupported encoding '" + config.encoding + "'");
  if (config.minified_line_threshold == 0) throw UsageError("minified_line_threshold must be positive");
}

std::vector<SourceBlob> read_tree(const fs::path& root, const ScanConfig& config, const AdapterRegistry& registry,
                                  std::vector<SkippedFile>* unreadable) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw InputError("not a readable directory: " + root.string());
  std::vector<SourceBlob> blobs;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw InputError("cannot read directory " + root.string() + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const fs::directory_entry& entry = *it;
    if (entry.is_directory(ec) && entry.path().filename() == ".git") {
      it.disable_recursion_pending();
      continue;
    }
    if (entry.is_symlink(ec) || !entry.is_regular_file(ec)) continue;
    std::string rel = entry.path().lexically_relative(root).generic_string();
    if (rel.empty() || rel == ".." || rel.starts_with("../")) continue;
    if (adapter_for(rel, config, registry) == nullptr || is_excluded(rel, config.exclude)) continue;
    auto bytes = read_file(entry.path());
    if (!bytes) {
      if (unreadable) unreadable->push_back({rel, "read"});
      continue;
    }
    blobs.push_back({std::move(rel), std::move(*bytes)});
  }
  std::sort(blobs.begin(), blobs.end(), [](const SourceBlob& a, const SourceBlob& b) { return a.path < b.path; });
  return blobs;
}

ParsedSnapshot parse_snapshot(std::vector<SourceBlob> blobs, const ScanConfig& config,
                              const AdapterRegistry& registry) {
  validate(config, registry);
  std::vector<const GrammarAdapter*> adapters(blobs.size(), nullptr);
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    if (!is_excluded(blobs[i].path, config.exclude)) adapters[i] = adapter_for(blobs[i].path, config, registry);
  }
  std::vector<FileOutcome> outcomes(blobs.size());
  parallel_for(blobs.size(), config.threads, [&](std::size_t i) {
    if (adapters[i] != nullptr) outcomes[i] = analyze_one(blobs[i], *adapters[i], config);
  });
  ParsedSnapshot snap;
  for (FileOutcome& o : outcomes) {
    if (o.file) snap.files.push_back(std::move(*o.file));
    if (o.skipped) snap.skipped.push_back(std::move(*o.skipped));
  }
  std::sort(snap.files.begin(), snap.files.end(),
            [](const AnalyzedFile& a, const AnalyzedFile& b) { return a.record.path < b.record.path; });
  std::sort(snap.skipped.begin(), snap.skipped.end(),
            [](const SkippedFile& a, const SkippedFile& b) { return a.path < b.path; });
  return snap;
}

SourceInventory scan_tree(const fs::path& root, const ScanConfig& config, const AdapterRegistry& registry) {
  validate(config, registry);
  std::vector<SkippedFile> unreadable;
  ParsedSnapshot snap = parse_snapshot(read_tree(root, config, registry, &unreadable), config, registry);
  SourceInventory inv = snap.inventory();
  inv.skipped.insert(inv.skipped.end(), unreadable.begin(), unreadable.end());
  canonicalize(inv);
  return inv;
}

}  // namespace slopscope::source
