// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slopscope/source/scanner.hpp"

namespace slopscope::trajectory {

struct Commit {
  std::string hash;
  std::int64_t time = 0;              // committer date, seconds since the Unix epoch (UTC)
  std::vector<std::string> changed;  // paths touched relative to the first parent

  bool operator==(const Commit&) const = default;
};

// Read-only access to a local repository through the git command line.
class GitRepo {
 public:
  // Throws InputError when `path` is not inside a git work tree or bare repo.
  explicit GitRepo(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }

  // Non-merge commits reachable from HEAD, oldest first (committer time, then
  // history order). Empty for a repository without commits.
  std::vector<Commit> commits() const;

  // HEAD commit, or nullopt when the repository has no commits.
  std::optional<Commit> head() const;

  // Blobs of the commit's tree whose path passes `keep`, sorted by path.
  // Symlinks and submodules are skipped. Nothing is checked out.
  std::vector<source::SourceBlob> snapshot(const std::string& commit,
                                           const std::function<bool(const std::string&)>& keep) const;

 private:
  std::filesystem::path path_;
};

// Result of a child process.
struct ProcessResult {
  int status = -1;  // exit code, or -1 if it did not exit normally
  std::string out;
  std::string err;
};

// Runs argv[0] (searched in PATH) with `input` on stdin. Throws Error when the
// process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input = {});

struct SampleOptions {
  std::uint32_t max_commits = 30;
  std::uint64_t seed = 0;
  // A commit qualifies when it touches at least one path accepted here.
  std::function<bool(const std::string&)> is_source;
};

// Uniform sample without replacement of the qualifying commits, returned
// oldest first. All qualifying commits are returned when there are at most
// max_commits of them. Deterministic for a fixed seed on every platform.
std::vector<Commit> sample_commits(const std::vector<Commit>& commits, const SampleOptions& options);

// Uniform integer in [0, bound) from an engine producing full-range 64-bit
// values. Unlike std::uniform_int_distribution the result does not depend on
// the standard library.
template <typename Engine>
std::uint64_t bounded_uniform(Engine& engine, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  while (true) {
    const std::uint64_t r = engine();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace slopscope::trajectory
