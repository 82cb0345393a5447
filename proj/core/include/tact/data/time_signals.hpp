#pragma once

#include <cstddef>
#include <cstdint>

namespace tact {

inline constexpr std::size_t kMonthVocab = 12;
inline constexpr std::size_t kWeekVocab = 53;
inline constexpr std::size_t kDayVocab = 7;
inline constexpr std::size_t kHourVocab = 24;

/// Absolute time of one interaction and its calendar indices (UTC).
struct TimeSignals {
  std::int64_t absolute = 0;  ///< epoch seconds
  int month = 0;              ///< month of year, 0 = January
  int week = 0;               ///< ISO week of year minus one, [0, 52]
  int day = 0;                ///< day of week, 0 = Monday
  int hour = 0;               ///< hour of day

  bool operator==(const TimeSignals&) const = default;
};

/// Proleptic-Gregorian UTC decomposition. Throws ValidationError for t < 0.
TimeSignals decompose_timestamp(std::int64_t epoch_seconds);

/// True when every index is in range.
bool in_range(const TimeSignals& t);

}  // namespace tact
