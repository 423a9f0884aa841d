#pragma once

// Minimal helper for exercising the CLI binary from tests.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace subprocess {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::filesystem::path temp_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("cgbench_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

inline std::filesystem::path temp_file(const std::string& name) {
  return temp_dir() / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

// Runs `exe args` through the shell, capturing stdout/stderr and exit code.
inline CmdResult run(const std::string& exe, const std::string& args) {
  static int counter = 0;
  const auto out_path = temp_file("stdout_" + std::to_string(counter) + ".txt");
  const auto err_path = temp_file("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      exe + " " + args + " >" + out_path.string() + " 2>" + err_path.string();
  const int status = std::system(cmd.c_str());
  CmdResult result;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  if (status == -1) {
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else {
    result.exit_code = 128;
  }
  return result;
}

}  // namespace subprocess
