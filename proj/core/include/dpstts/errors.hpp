#pragma once

#include <stdexcept>
#include <string>

namespace dpstts {

/// Process exit codes used by the CLI; every error class maps to one.
enum class ErrorCode : int {
  internal = 1,
  usage = 2,
  io = 3,
  malformed_input = 4,
  empty_dataset = 5,
  invalid_budget = 6,
  corrupt_model = 7,
  version_mismatch = 8,
  invalid_config = 9,
  metric = 10,
  data = 11,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define DPSTTS_DEFINE_ERROR(NAME, CODE)              \
  class NAME : public Error {                        \
   public:                                           \
    explicit NAME(const std::string& what)           \
        : Error(ErrorCode::CODE, what) {}            \
  }

DPSTTS_DEFINE_ERROR(IoError, io);
DPSTTS_DEFINE_ERROR(PointOutOfDomain, data);
DPSTTS_DEFINE_ERROR(CubeOutOfGrid, data);
DPSTTS_DEFINE_ERROR(NonMonotonicTime, data);
DPSTTS_DEFINE_ERROR(UnsortedTimestamps, data);
DPSTTS_DEFINE_ERROR(EmptyAfterFiltering, data);
DPSTTS_DEFINE_ERROR(NonNeighborTransition, data);
DPSTTS_DEFINE_ERROR(MalformedRecord, malformed_input);
DPSTTS_DEFINE_ERROR(EmptyDataset, empty_dataset);
DPSTTS_DEFINE_ERROR(InvalidBudget, invalid_budget);
DPSTTS_DEFINE_ERROR(CorruptModelFile, corrupt_model);
DPSTTS_DEFINE_ERROR(VersionMismatch, version_mismatch);
DPSTTS_DEFINE_ERROR(InvalidConfig, invalid_config);
DPSTTS_DEFINE_ERROR(DimensionMismatch, metric);
DPSTTS_DEFINE_ERROR(NotADistribution, metric);
DPSTTS_DEFINE_ERROR(TooFewItems, metric);

#undef DPSTTS_DEFINE_ERROR

}  // namespace dpstts
