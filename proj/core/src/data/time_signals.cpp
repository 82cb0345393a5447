#include "tact/data/time_signals.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "tact/error.hpp"

namespace tact {

namespace {

using namespace std::chrono;

int iso_weeks_in_year(int y) {
  // A year has 53 ISO weeks when Jan 1 is a Thursday, or a Wednesday in a leap year.
  const weekday jan1{sys_days{year{y} / January / 1}};
  const bool leap = year{y}.is_leap();
  return (jan1 == Thursday || (leap && jan1 == Wednesday)) ? 53 : 52;
}

}  // namespace

TimeSignals decompose_timestamp(std::int64_t epoch_seconds) {
  if (epoch_seconds < 0) {
    throw ValidationError("timestamp must be non-negative, got " + std::to_string(epoch_seconds));
  }
  const sys_seconds instant{seconds{epoch_seconds}};
  const sys_days day = floor<days>(instant);
  const year_month_day ymd{day};
  const weekday wd{day};

  TimeSignals t;
  t.absolute = epoch_seconds;
  t.month = static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
  t.day = static_cast<int>(wd.iso_encoding()) - 1;
  t.hour = static_cast<int>(duration_cast<hours>(instant - day).count());

  const int y = static_cast<int>(ymd.year());
  const int ordinal = static_cast<int>((day - sys_days{ymd.year() / January / 1}).count()) + 1;
  int iso_week = (ordinal - (t.day + 1) + 10) / 7;
  if (iso_week < 1) {
    iso_week = iso_weeks_in_year(y - 1);
  } else if (iso_week > iso_weeks_in_year(y)) {
    iso_week = 1;
  }
  t.week = std::clamp(iso_week - 1, 0, 52);
  return t;
}

bool in_range(const TimeSignals& t) {
  return t.absolute >= 0 && t.month >= 0 && t.month < 12 && t.week >= 0 && t.week < 53 && t.day >= 0 &&
         t.day < 7 && t.hour >= 0 && t.hour < 24;
}

}  // namespace tact
