#pragma once

#include <filesystem>

#include "hypersens/errors.hpp"

namespace hypersens::cli {

/// Another process holds the output directory. Reported with the resource exit code.
class LockBusy : public Error {
 public:
  using Error::Error;
};

/// Exclusive advisory lock on <dir>/.hypersens.lock, released on destruction
/// or process exit. Throws LockBusy when another run holds it.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

}  // namespace hypersens::cli
