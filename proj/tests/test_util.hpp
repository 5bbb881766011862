#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

// Self-cleaning scratch directory for tests that touch the filesystem.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::atomic<int> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path = base / ("eekit-test-" + std::to_string(::getpid()) + "-" +
                   std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path / name; }
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Captures std::cout for the lifetime of the object.
struct CaptureStdout {
  std::ostringstream stream;
  std::streambuf* saved;

  CaptureStdout() : saved(std::cout.rdbuf(stream.rdbuf())) {}
  ~CaptureStdout() { std::cout.rdbuf(saved); }
  std::string text() const { return stream.str(); }
};
