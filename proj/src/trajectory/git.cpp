// SPDX-License-Identifier: Apache-2.0
#include "slopscope/trajectory/git.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <memory>
#include <random>

#include "slopscope/common/error.hpp"

extern char** environ;

namespace slopscope::trajectory {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using TempFile = std::unique_ptr<std::FILE, FileCloser>;

TempFile temp_file() {
  TempFile f(std::tmpfile());
  if (!f) throw Error(std::string("cannot create temporary file: ") + std::strerror(errno));
  return f;
}

std::string slurp(std::FILE* f) {
  std::string out;
  std::rewind(f);
  char buf[1 << 16];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      if (start < s.size()) parts.emplace_back(s.substr(start));
      break;
    }
    parts.emplace_back(s.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input) {
  // Files rather than pipes for all three streams: no deadlock however much
  // the child writes, and no helper threads.
  TempFile in = temp_file();
  TempFile out = temp_file();
  TempFile err = temp_file();
  if (!input.empty() && std::fwrite(input.data(), 1, input.size(), in.get()) != input.size()) {
    throw Error("cannot buffer process input");
  }
  std::fflush(in.get());
  std::rewind(in.get());

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fileno(in.get()), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, fileno(out.get()), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, fileno(err.get()), STDERR_FILENO);

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw Error("cannot run " + argv[0] + ": " + std::strerror(rc));

  int wstatus = 0;
  while (waitpid(pid, &wstatus, 0) < 0) {
    if (errno != EINTR) throw Error("waitpid failed: " + std::string(std::strerror(errno)));
  }
  ProcessResult result;
  result.status = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
  result.out = slurp(out.get());
  result.err = slurp(err.get());
  return result;
}

namespace {

std::vector<std::string> git_args(const std::filesystem::path& repo, std::initializer_list<std::string> rest) {
  std::vector<std::string> argv = {"git", "-C", repo.string(), "-c", "core.quotePath=false"};
  argv.insert(argv.end(), rest.begin(), rest.end());
  return argv;
}

std::string git(const std::filesystem::path& repo, std::initializer_list<std::string> rest,
                std::string_view input = {}) {
  ProcessResult r = run_process(git_args(repo, rest), input);
  if (r.status != 0) {
    std::string msg = r.err;
    while (!msg.empty() && (msg.back() == '\n' || msg.back() == '\r')) msg.pop_back();
    throw InputError("git " + *rest.begin() + " failed in " + repo.string() + ": " + msg);
  }
  return std::move(r.out);
}

}  // namespace

GitRepo::GitRepo(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (!std::filesystem::is_directory(path_, ec)) throw InputError("not a directory: " + path_.string());
  ProcessResult r = run_process(git_args(path_, {"rev-parse", "--git-dir"}));
  if (r.status != 0) throw InputError("not a git repository: " + path_.string());
}

std::vector<Commit> GitRepo::commits() const {
  ProcessResult probe = run_process(git_args(path_, {"rev-parse", "--verify", "--quiet", "HEAD^{commit}"}));
  if (probe.status != 0) return {};
  const std::string log =
      git(path_, {"log", "--no-merges", "--no-renames", "--format=%x01%H %ct", "--name-only", "HEAD"});
  std::vector<Commit> commits;
  for (const auto& record : split(log, '\x01')) {
    if (record.empty()) continue;
    auto lines = split(record, '\n');
    if (lines.empty()) continue;
    Commit c;
    const auto header = split(lines[0], ' ');
    if (header.size() != 2) throw InputError("unexpected git log output: " + lines[0]);
    c.hash = header[0];
    c.time = std::stoll(header[1]);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (!lines[i].empty()) c.changed.push_back(lines[i]);
    }
    commits.push_back(std::move(c));
  }
  std::reverse(commits.begin(), commits.end());
  std::stable_sort(commits.begin(), commits.end(), [](const Commit& a, const Commit& b) { return a.time < b.time; });
  return commits;
}

std::optional<Commit> GitRepo::head() const {
  ProcessResult r = run_process(git_args(path_, {"log", "-1", "--format=%H %ct", "HEAD"}));
  if (r.status != 0) return std::nullopt;
  const auto header = split(r.out.substr(0, r.out.find('\n')), ' ');
  if (header.size() != 2) return std::nullopt;
  return Commit{header[0], std::stoll(header[1]), {}};
}

std::vector<source::SourceBlob> GitRepo::snapshot(const std::string& commit,
                                                  const std::function<bool(const std::string&)>& keep) const {
  const std::string listing = git(path_, {"ls-tree", "-r", "-z", "--full-tree", commit});
  std::vector<std::pair<std::string, std::string>> wanted;  // (path, object)
  for (const auto& entry : split(listing, '\0')) {
    const std::size_t tab = entry.find('\t');
    if (tab == std::string::npos) continue;
    const auto meta = split(std::string_view(entry).substr(0, tab), ' ');
    if (meta.size() != 3 || meta[1] != "blob" || meta[0] == "120000") continue;
    std::string path = entry.substr(tab + 1);
    if (keep(path)) wanted.emplace_back(std::move(path), meta[2]);
  }
  std::sort(wanted.begin(), wanted.end());
  if (wanted.empty()) return {};

  std::string request;
  for (const auto& [_, object] : wanted) request += object + "\n";
  const std::string batch = git(path_, {"cat-file", "--batch"}, request);

  std::vector<source::SourceBlob> blobs;
  blobs.reserve(wanted.size());
  std::size_t pos = 0;
  for (const auto& [path, object] : wanted) {
    const std::size_t eol = batch.find('\n', pos);
    if (eol == std::string::npos) throw InputError("truncated git cat-file output");
    const auto header = split(std::string_view(batch).substr(pos, eol - pos), ' ');
    if (header.size() != 3 || header[0] != object) throw InputError("unexpected git cat-file output for " + path);
    const std::size_t size = std::stoull(header[2]);
    if (eol + 1 + size > batch.size()) throw InputError("truncated git cat-file output");
    blobs.push_back({path, batch.substr(eol + 1, size)});
    pos = eol + 1 + size + 1;
  }
  return blobs;
}

std::vector<Commit> sample_commits(const std::vector<Commit>& commits, const SampleOptions& options) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < commits.size(); ++i) {
    const auto& changed = commits[i].changed;
    if (std::any_of(changed.begin(), changed.end(), [&](const std::string& p) { return options.is_source(p); })) {
      eligible.push_back(i);
    }
  }
  if (eligible.size() > options.max_commits) {
    // Partial Fisher-Yates: the first max_commits slots become the sample.
    std::mt19937_64 engine(options.seed);
    for (std::size_t i = 0; i < options.max_commits; ++i) {
      const std::size_t j = i + bounded_uniform(engine, eligible.size() - i);
      std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(options.max_commits);
    std::sort(eligible.begin(), eligible.end());
  }
  std::vector<Commit> out;
  out.reserve(eligible.size());
  for (std::size_t i : eligible) out.push_back(commits[i]);
  return out;
}

}  // namespace slopscope::trajectory
