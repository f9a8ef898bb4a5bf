// Minimal popen-based runner for exercising the CLI contract from tests.
#pragma once

#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace testutil {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline RunResult run_command(const std::string& command) {
  RunResult result;
  static int counter = 0;
  std::string err_file = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                         "/qch_test_stderr_" + std::to_string(getpid()) + "_" +
                         std::to_string(++counter) + ".txt";
  std::string full = command + " 2>" + err_file;
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), n);
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (FILE* ef = fopen(err_file.c_str(), "r")) {
    while ((n = fread(buf.data(), 1, buf.size(), ef)) > 0) result.err.append(buf.data(), n);
    fclose(ef);
  }
  std::remove(err_file.c_str());
  return result;
}

inline std::string write_temp_file(const std::string& name, const std::string& contents) {
  std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
  FILE* f = fopen(path.c_str(), "w");
  fwrite(contents.data(), 1, contents.size(), f);
  fclose(f);
  return path;
}

}  // namespace testutil
